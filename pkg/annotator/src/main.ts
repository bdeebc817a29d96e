/**
 * Browser wiring for the annotation session: file open, side-by-side
 * rendering, choice buttons with the two-step "equal" confirmation, progress,
 * revision of earlier items, and judgments export via download. State is
 * persisted to localStorage after every choice, so closing the tab loses
 * nothing.
 */

import {
  AnnotationSession,
  BlindingError,
  SessionState,
  SessionStore,
  sampleDigest,
} from "./session.js";

const GUIDANCE = [
  "Pick a side whenever you can; use “equal” only when you truly cannot choose.",
  "Penalize invented or wrong information heavily.",
  "When everything else is even, prefer the shorter sentence.",
  "Preserving the original meaning and its nuances matters most.",
];

class LocalStorageStore implements SessionStore {
  private key(digest: string, annotatorId: string): string {
    return `annotation-session:${digest}:${annotatorId}`;
  }

  save(state: SessionState): void {
    localStorage.setItem(this.key(state.sampleDigest, state.annotatorId), JSON.stringify(state));
  }

  load(digest: string, annotatorId: string): SessionState | null {
    const raw = localStorage.getItem(this.key(digest, annotatorId));
    return raw === null ? null : (JSON.parse(raw) as SessionState);
  }
}

let session: AnnotationSession | null = null;
let viewIndex = 0;

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (node === null) throw new Error(`missing element #${id}`);
  return node as T;
}

function setStatus(message: string, isError = false): void {
  const status = el<HTMLParagraphElement>("status");
  status.textContent = message;
  status.className = isError ? "error" : "";
}

function render(): void {
  const judging = el<HTMLDivElement>("judging");
  if (session === null) {
    judging.hidden = true;
    return;
  }
  judging.hidden = false;
  el<HTMLSpanElement>("progress").textContent =
    `${session.judgedCount} / ${session.total} judged`;

  const list = el<HTMLOListElement>("item-list");
  list.innerHTML = "";
  session.sample.items.forEach((item, i) => {
    const li = document.createElement("li");
    const entry = session!.judgmentFor(item.id);
    li.textContent = entry === null ? item.id : `${item.id} (${entry.choice})`;
    li.className = i === viewIndex ? "current" : "";
    li.onclick = () => {
      viewIndex = i;
      render();
    };
    list.appendChild(li);
  });

  const item = session.sample.items[viewIndex];
  if (item === undefined) {
    el<HTMLDivElement>("item").hidden = true;
    setStatus("all items judged; export when ready");
    return;
  }
  el<HTMLDivElement>("item").hidden = false;
  el<HTMLParagraphElement>("source").textContent = item.source;
  el<HTMLParagraphElement>("left-text").textContent = item.left_text;
  el<HTMLParagraphElement>("right-text").textContent = item.right_text;
  const existing = session.judgmentFor(item.id);
  setStatus(
    existing === null
      ? `item ${viewIndex + 1} of ${session.total}`
      : `already judged "${existing.choice}"; choosing again will revise it`
  );
}

function choose(choice: "left" | "right" | "equal"): void {
  if (session === null) return;
  const item = session.sample.items[viewIndex];
  if (item === undefined) return;
  const opts =
    choice === "equal"
      ? {
          confirmedEqual: window.confirm(
            "Mark both sides as equal? Use this only when you truly cannot pick a side."
          ),
        }
      : {};
  if (choice === "equal" && opts.confirmedEqual !== true) {
    setStatus("equal judgment cancelled");
    return;
  }
  try {
    if (session.judgmentFor(item.id) === null) {
      session.judge(item.id, choice, opts);
    } else {
      session.revise(item.id, choice, opts);
    }
  } catch (err) {
    setStatus((err as Error).message, true);
    return;
  }
  viewIndex = session.cursor;
  render();
}

function openSample(rawJson: string): void {
  const annotatorId = el<HTMLInputElement>("annotator-id").value.trim() || "anonymous";
  try {
    session = AnnotationSession.open(rawJson, annotatorId, new LocalStorageStore());
  } catch (err) {
    session = null;
    const prefix = err instanceof BlindingError ? "blinding guard: " : "";
    setStatus(prefix + (err as Error).message, true);
    render();
    return;
  }
  viewIndex = session.cursor;
  setStatus(
    session.judgedCount > 0
      ? `resumed session with ${session.judgedCount} judgments (digest ${sampleDigest(rawJson)})`
      : `loaded ${session.total} items`
  );
  render();
}

function exportJudgments(): void {
  if (session === null) return;
  let result;
  try {
    result = session.exportJudgments();
  } catch (err) {
    setStatus((err as Error).message, true);
    return;
  }
  if (!result.complete) {
    setStatus(`warning: partial export, ${result.judged} of ${result.total} items judged`, true);
  } else {
    setStatus(`exported ${result.judged} judgments`);
  }
  const blob = new Blob([result.content], { type: "application/jsonl" });
  const link = document.createElement("a");
  link.href = URL.createObjectURL(blob);
  link.download = `judgments-${session.annotatorId}.jsonl`;
  link.click();
  URL.revokeObjectURL(link.href);
}

function init(): void {
  const rubric = el<HTMLUListElement>("rubric");
  for (const line of GUIDANCE) {
    const li = document.createElement("li");
    li.textContent = line;
    rubric.appendChild(li);
  }
  el<HTMLInputElement>("sample-file").onchange = (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (file === undefined) return;
    file.text().then(openSample, (err) => setStatus(String(err), true));
  };
  el<HTMLButtonElement>("choose-left").onclick = () => choose("left");
  el<HTMLButtonElement>("choose-equal").onclick = () => choose("equal");
  el<HTMLButtonElement>("choose-right").onclick = () => choose("right");
  el<HTMLButtonElement>("export").onclick = exportJudgments;
  render();
}

init();
