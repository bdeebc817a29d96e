/**
 * Annotation session core: sample loading with a blinding guard, judgment
 * recording with an explicit confirmation step for "equal", persistence after
 * every choice, and export in the exact judgments format the tally command
 * consumes (one `{"id":...,"choice":...}` JSON object per line).
 *
 * This module never reads key files: any file carrying system labels is
 * rejected at load time, and exports contain only ids and choices.
 */

export type Choice = "left" | "right" | "equal";

export interface SampleItem {
  id: string;
  quartile: number;
  source: string;
  left_text: string;
  right_text: string;
}

export interface SampleFile {
  items: SampleItem[];
  n_identical_excluded: number;
}

export interface JudgmentEntry {
  choice: Choice;
  decidedAt: string;
}

export interface SessionState {
  sampleDigest: string;
  annotatorId: string;
  judgments: Record<string, JudgmentEntry>;
}

export interface SessionStore {
  save(state: SessionState): void;
  load(sampleDigest: string, annotatorId: string): SessionState | null;
}

export class BlindingError extends Error {}
export class SampleFormatError extends Error {}
export class SessionError extends Error {}

/** Stable digest of the raw sample text, used to key persisted sessions. */
export function sampleDigest(rawJson: string): string {
  let h = 0x811c9dc5;
  for (let i = 0; i < rawJson.length; i++) {
    h ^= rawJson.charCodeAt(i);
    h = Math.imul(h, 0x01000193);
  }
  return (h >>> 0).toString(16).padStart(8, "0");
}

function findSystemField(value: unknown): string | null {
  if (Array.isArray(value)) {
    for (const entry of value) {
      const hit = findSystemField(entry);
      if (hit !== null) return hit;
    }
    return null;
  }
  if (value !== null && typeof value === "object") {
    for (const [key, entry] of Object.entries(value)) {
      if (key.toLowerCase().startsWith("system")) return key;
      const hit = findSystemField(entry);
      if (hit !== null) return hit;
    }
  }
  return null;
}

function asItem(value: unknown, index: number): SampleItem {
  if (value === null || typeof value !== "object") {
    throw new SampleFormatError(`item ${index} is not an object`);
  }
  const obj = value as Record<string, unknown>;
  for (const field of ["id", "source", "left_text", "right_text"]) {
    if (typeof obj[field] !== "string") {
      throw new SampleFormatError(`item ${index} is missing string field "${field}"`);
    }
  }
  if (typeof obj.quartile !== "number") {
    throw new SampleFormatError(`item ${index} is missing numeric field "quartile"`);
  }
  return {
    id: obj.id as string,
    quartile: obj.quartile,
    source: obj.source as string,
    left_text: obj.left_text as string,
    right_text: obj.right_text as string,
  };
}

/** Parse and validate a blinded sample file; refuses anything key-like. */
export function loadSample(rawJson: string): SampleFile {
  let parsed: unknown;
  try {
    parsed = JSON.parse(rawJson);
  } catch (err) {
    throw new SampleFormatError(`not valid JSON: ${(err as Error).message}`);
  }
  const leak = findSystemField(parsed);
  if (leak !== null) {
    throw new BlindingError(
      `refusing to load: file contains a "${leak}" field; this looks like a key file, ` +
        "and loading it would break blinding"
    );
  }
  if (parsed === null || typeof parsed !== "object" || !Array.isArray((parsed as any).items)) {
    throw new SampleFormatError('sample must be an object with an "items" array');
  }
  const obj = parsed as Record<string, unknown>;
  const items = (obj.items as unknown[]).map(asItem);
  if (items.length === 0) {
    throw new SampleFormatError("sample has no items");
  }
  const seen = new Set<string>();
  for (const item of items) {
    if (seen.has(item.id)) throw new SampleFormatError(`duplicate item id "${item.id}"`);
    seen.add(item.id);
  }
  return {
    items,
    n_identical_excluded:
      typeof obj.n_identical_excluded === "number" ? obj.n_identical_excluded : 0,
  };
}

export interface ExportResult {
  content: string;
  judged: number;
  total: number;
  complete: boolean;
}

export class AnnotationSession {
  readonly sample: SampleFile;
  readonly digest: string;
  readonly annotatorId: string;
  private readonly store: SessionStore;
  private readonly now: () => string;
  private judgments: Map<string, JudgmentEntry>;

  private constructor(
    sample: SampleFile,
    digest: string,
    annotatorId: string,
    store: SessionStore,
    now: () => string,
    judgments: Map<string, JudgmentEntry>
  ) {
    this.sample = sample;
    this.digest = digest;
    this.annotatorId = annotatorId;
    this.store = store;
    this.now = now;
    this.judgments = judgments;
  }

  /** Open a session, resuming any persisted judgments for this sample+annotator. */
  static open(
    rawJson: string,
    annotatorId: string,
    store: SessionStore,
    now: () => string = () => new Date().toISOString()
  ): AnnotationSession {
    const sample = loadSample(rawJson);
    const digest = sampleDigest(rawJson);
    const judgments = new Map<string, JudgmentEntry>();
    const saved = store.load(digest, annotatorId);
    if (saved !== null) {
      if (saved.sampleDigest !== digest) {
        throw new SessionError("stored session belongs to a different sample file");
      }
      const ids = new Set(sample.items.map((it) => it.id));
      for (const [id, entry] of Object.entries(saved.judgments)) {
        if (!ids.has(id)) {
          throw new SessionError(`stored judgment for unknown item "${id}"`);
        }
        judgments.set(id, entry);
      }
    }
    return new AnnotationSession(sample, digest, annotatorId, store, now, judgments);
  }

  /** Index of the first unjudged item; equals item count when done. */
  get cursor(): number {
    for (let i = 0; i < this.sample.items.length; i++) {
      if (!this.judgments.has(this.sample.items[i].id)) return i;
    }
    return this.sample.items.length;
  }

  get judgedCount(): number {
    return this.judgments.size;
  }

  get total(): number {
    return this.sample.items.length;
  }

  judgmentFor(id: string): JudgmentEntry | null {
    return this.judgments.get(id) ?? null;
  }

  /** Record a choice for an unjudged item; "equal" must be explicitly confirmed. */
  judge(id: string, choice: Choice, opts: { confirmedEqual?: boolean } = {}): void {
    if (!this.sample.items.some((it) => it.id === id)) {
      throw new SessionError(`unknown item "${id}"`);
    }
    if (this.judgments.has(id)) {
      throw new SessionError(`item "${id}" already judged; use revise to change it`);
    }
    this.applyChoice(id, choice, opts);
  }

  /** Change an existing judgment; the deliberate path for corrections. */
  revise(id: string, choice: Choice, opts: { confirmedEqual?: boolean } = {}): void {
    if (!this.judgments.has(id)) {
      throw new SessionError(`item "${id}" has no judgment to revise`);
    }
    this.applyChoice(id, choice, opts);
  }

  private applyChoice(id: string, choice: Choice, opts: { confirmedEqual?: boolean }): void {
    if (choice !== "left" && choice !== "right" && choice !== "equal") {
      throw new SessionError(`invalid choice "${choice}"`);
    }
    if (choice === "equal" && opts.confirmedEqual !== true) {
      throw new SessionError('"equal" needs explicit confirmation');
    }
    this.judgments.set(id, { choice, decidedAt: this.now() });
    this.persist();
  }

  private persist(): void {
    this.store.save({
      sampleDigest: this.digest,
      annotatorId: this.annotatorId,
      judgments: Object.fromEntries(this.judgments),
    });
  }

  /**
   * Judgments file content in sample order: only ids and choices, one JSON
   * object per line. Partial sessions export with complete=false.
   */
  exportJudgments(): ExportResult {
    if (this.judgments.size === 0) {
      throw new SessionError("no judgments to export");
    }
    const lines: string[] = [];
    for (const item of this.sample.items) {
      const entry = this.judgments.get(item.id);
      if (entry !== undefined) {
        lines.push(JSON.stringify({ id: item.id, choice: entry.choice }));
      }
    }
    return {
      content: lines.join("\n") + "\n",
      judged: lines.length,
      total: this.sample.items.length,
      complete: lines.length === this.sample.items.length,
    };
  }
}
