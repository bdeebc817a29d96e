"""Domain types and the JSON-Lines ingestion/serialization layer.

Candidate files hold one record per line: a source sentence, its n-best
candidates with three log-probability channels, and optional references and
embeddings. Selection files hold one chosen candidate per line. Parsing is
strict: either every record validates, or ingestion fails naming the first
offending line/record. All types are immutable after construction.

Conventions pinned here:
    - log-probabilities are natural-log and must be <= 0;
    - candidate length N is never stored, it is always recomputed as the
      whitespace-token count of the candidate text.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

MAX_REFERENCES = 8

SELECTION_METHODS = ("first-beam", "noisy-channel", "oracle", "cosine")


class ValidationError(ValueError):
    """A record or value violates the data contract."""


def whitespace_tokens(text: str) -> list[str]:
    """Whitespace tokens of a sentence; the pinned definition of length N."""
    return text.split()


def _check_logprob(value: Any, where: str) -> float:
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        raise ValidationError(f"{where}: log-probability must be a number, got {value!r}")
    value = float(value)
    if not math.isfinite(value):
        raise ValidationError(f"{where}: log-probability must be finite, got {value!r}")
    if value > 0:
        raise ValidationError(f"{where}: log-probability must be <= 0, got {value!r}")
    return value


def _check_vector(value: Any, where: str) -> tuple[float, ...]:
    if not isinstance(value, (list, tuple)):
        raise ValidationError(f"{where}: expected a list of numbers")
    out = []
    for x in value:
        if not isinstance(x, (int, float)) or isinstance(x, bool) or not math.isfinite(float(x)):
            raise ValidationError(f"{where}: vector entries must be finite numbers")
        out.append(float(x))
    return tuple(out)


@dataclass(frozen=True)
class Candidate:
    """One beam hypothesis with its text and the three score channels."""

    rank: int
    text: str
    logp_direct: float
    logp_channel: float
    lm_token_logps: tuple[float, ...]
    embedding: tuple[float, ...] | None = None

    def n_tokens(self) -> int:
        return len(whitespace_tokens(self.text))


@dataclass(frozen=True)
class CandidateSet:
    """A source sentence, its top-k candidates, and optional gold references."""

    id: str
    source: str
    candidates: tuple[Candidate, ...]
    references: tuple[str, ...] | None = None
    source_embedding: tuple[float, ...] | None = None


@dataclass(frozen=True)
class LambdaVector:
    """The four combination weights of the re-ranking score."""

    l1: float
    l2: float
    l3: float
    l4: float

    def __post_init__(self) -> None:
        for name in ("l1", "l2", "l3", "l4"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or isinstance(v, bool):
                raise ValidationError(f"lambda {name} must be a number, got {v!r}")
            if not math.isfinite(v) or v < 0:
                raise ValidationError(f"lambda {name} must be finite and >= 0, got {v!r}")

    def as_tuple(self) -> tuple[float, float, float, float]:
        return (self.l1, self.l2, self.l3, self.l4)


@dataclass(frozen=True)
class Selection:
    """The candidate chosen from one set by a named selection method."""

    set_id: str
    chosen_rank: int
    chosen_text: str
    score: float
    method: str

    def __post_init__(self) -> None:
        if self.method not in SELECTION_METHODS:
            raise ValidationError(
                f"unknown selection method {self.method!r}; expected one of {SELECTION_METHODS}"
            )


def _validate_candidate(cand: Candidate, where: str) -> None:
    if not cand.text.strip():
        raise ValidationError(f"{where}: candidate text is empty")
    _check_logprob(cand.logp_direct, f"{where} field logp_direct")
    _check_logprob(cand.logp_channel, f"{where} field logp_channel")
    for lp in cand.lm_token_logps:
        _check_logprob(lp, f"{where} field lm_token_logps")
    n_tok = cand.n_tokens()
    if len(cand.lm_token_logps) != n_tok:
        raise ValidationError(
            f"{where}: lm_token_logps has {len(cand.lm_token_logps)} entries "
            f"but text has {n_tok} whitespace tokens"
        )


def validate_candidate_set(cset: CandidateSet, max_k: int | None = None) -> None:
    """Check every type invariant; raises ValidationError naming id and field."""
    where = f"id {cset.id!r}"
    if not cset.candidates:
        raise ValidationError(f"{where}: candidates must be non-empty")
    if max_k is not None and len(cset.candidates) > max_k:
        raise ValidationError(
            f"{where}: {len(cset.candidates)} candidates exceeds configured k={max_k}"
        )
    for i, cand in enumerate(cset.candidates):
        if cand.rank != i:
            raise ValidationError(
                f"{where}: candidate ranks must be contiguous from 0 in beam order; "
                f"position {i} has rank {cand.rank}"
            )
        _validate_candidate(cand, f"{where} candidate rank {cand.rank}")
    if cset.references is not None:
        if not 1 <= len(cset.references) <= MAX_REFERENCES:
            raise ValidationError(
                f"{where}: references must hold 1..{MAX_REFERENCES} entries, "
                f"got {len(cset.references)}"
            )


def _candidate_from_obj(obj: Any, where: str) -> Candidate:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: candidate entries must be objects")
    try:
        rank = obj["rank"]
        text = obj["text"]
        logp_direct = obj["logp_direct"]
        logp_channel = obj["logp_channel"]
        lm_token_logps = obj["lm_token_logps"]
    except KeyError as exc:
        raise ValidationError(f"{where}: candidate missing field {exc.args[0]!r}") from None
    if not isinstance(rank, int) or isinstance(rank, bool):
        raise ValidationError(f"{where}: rank must be an integer")
    if not isinstance(text, str):
        raise ValidationError(f"{where}: text must be a string")
    if not isinstance(lm_token_logps, list):
        raise ValidationError(f"{where}: lm_token_logps must be a list")
    embedding = None
    if obj.get("embedding") is not None:
        embedding = _check_vector(obj["embedding"], f"{where} field embedding")
    return Candidate(
        rank=rank,
        text=text,
        logp_direct=float(logp_direct) if isinstance(logp_direct, (int, float)) else logp_direct,
        logp_channel=float(logp_channel) if isinstance(logp_channel, (int, float)) else logp_channel,
        lm_token_logps=tuple(
            float(x) if isinstance(x, (int, float)) and not isinstance(x, bool) else x
            for x in lm_token_logps
        ),
        embedding=embedding,
    )


def candidate_set_from_obj(obj: Any, where: str = "record") -> CandidateSet:
    if not isinstance(obj, dict):
        raise ValidationError(f"{where}: expected a JSON object")
    for key in ("id", "source", "candidates"):
        if key not in obj:
            raise ValidationError(f"{where}: missing field {key!r}")
    set_id = obj["id"]
    if not isinstance(set_id, str):
        raise ValidationError(f"{where}: id must be a string")
    where = f"id {set_id!r}"
    if not isinstance(obj["source"], str):
        raise ValidationError(f"{where}: source must be a string")
    if not isinstance(obj["candidates"], list):
        raise ValidationError(f"{where}: candidates must be a list")
    candidates = tuple(_candidate_from_obj(c, where) for c in obj["candidates"])
    references = None
    if obj.get("references") is not None:
        refs = obj["references"]
        if not isinstance(refs, list) or not all(isinstance(r, str) for r in refs):
            raise ValidationError(f"{where}: references must be a list of strings")
        references = tuple(refs)
    source_embedding = None
    if obj.get("source_embedding") is not None:
        source_embedding = _check_vector(obj["source_embedding"], f"{where} field source_embedding")
    return CandidateSet(
        id=set_id,
        source=obj["source"],
        candidates=candidates,
        references=references,
        source_embedding=source_embedding,
    )


def parse_candidate_file(path: str, max_k: int | None = None) -> list[CandidateSet]:
    """Load and validate a JSON-Lines candidate file.

    File order is preserved and ids must be unique. Fails on the first
    offending line; no partial loads.
    """
    sets: list[CandidateSet] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path} line {lineno}: malformed JSON: {exc}") from None
            try:
                cset = candidate_set_from_obj(obj, where=f"line {lineno}")
                validate_candidate_set(cset, max_k=max_k)
            except ValidationError as exc:
                raise ValidationError(f"{path} line {lineno}: {exc}") from None
            if cset.id in seen:
                raise ValidationError(f"{path} line {lineno}: duplicate id {cset.id!r}")
            seen.add(cset.id)
            sets.append(cset)
    return sets


def candidate_set_to_obj(cset: CandidateSet) -> dict[str, Any]:
    obj: dict[str, Any] = {"id": cset.id, "source": cset.source}
    if cset.references is not None:
        obj["references"] = list(cset.references)
    if cset.source_embedding is not None:
        obj["source_embedding"] = list(cset.source_embedding)
    cands = []
    for c in cset.candidates:
        cobj: dict[str, Any] = {
            "rank": c.rank,
            "text": c.text,
            "logp_direct": c.logp_direct,
            "logp_channel": c.logp_channel,
            "lm_token_logps": list(c.lm_token_logps),
        }
        if c.embedding is not None:
            cobj["embedding"] = list(c.embedding)
        cands.append(cobj)
    obj["candidates"] = cands
    return obj


def _dump_line(obj: Any) -> str:
    # ensure_ascii=False keeps non-ASCII text byte-identical through round trips;
    # float repr is shortest-exact, so parse(serialize(x)) == x bit for bit.
    return json.dumps(obj, ensure_ascii=False, separators=(",", ":"))


def serialize_candidate_sets(sets: Iterable[CandidateSet], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for cset in sets:
            fh.write(_dump_line(candidate_set_to_obj(cset)) + "\n")


def selection_to_obj(sel: Selection) -> dict[str, Any]:
    return {
        "set_id": sel.set_id,
        "chosen_rank": sel.chosen_rank,
        "chosen_text": sel.chosen_text,
        "score": sel.score,
        "method": sel.method,
    }


def serialize_selections(selections: Iterable[Selection], path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for sel in selections:
            fh.write(_dump_line(selection_to_obj(sel)) + "\n")


def parse_selection_file(path: str) -> list[Selection]:
    out: list[Selection] = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path} line {lineno}: malformed JSON: {exc}") from None
            if not isinstance(obj, dict):
                raise ValidationError(f"{path} line {lineno}: expected a JSON object")
            try:
                sel = Selection(
                    set_id=obj["set_id"],
                    chosen_rank=obj["chosen_rank"],
                    chosen_text=obj["chosen_text"],
                    score=float(obj["score"]),
                    method=obj["method"],
                )
            except KeyError as exc:
                raise ValidationError(
                    f"{path} line {lineno}: missing field {exc.args[0]!r}"
                ) from None
            except ValidationError as exc:
                raise ValidationError(f"{path} line {lineno}: {exc}") from None
            if not isinstance(sel.chosen_rank, int) or sel.chosen_rank < 0:
                raise ValidationError(f"{path} line {lineno}: chosen_rank must be an integer >= 0")
            out.append(sel)
    return out


def index_by_id(sets: Sequence[CandidateSet]) -> dict[str, CandidateSet]:
    return {s.id: s for s in sets}
