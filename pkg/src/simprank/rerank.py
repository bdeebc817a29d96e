"""Noisy-channel scoring and the four candidate selection strategies.

The combined score of a candidate y for source x is

    l1 * log p(y|x) + l2 * log p(x|y) + l3 * log p(y) + l4 * N

where log p(y) is the sum of per-token masked-LM log-probabilities and N is
the whitespace-token count of y (recomputed from the text, never stored).
The positive length term counters the short-output bias of the three
log-probabilities. Ties are always broken by lowest original beam rank.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

from .data import Candidate, CandidateSet, LambdaVector, Selection
from .metrics import sari


@dataclass(frozen=True)
class ScoredCandidate:
    """A candidate with its combined score and the four score addends."""

    candidate: Candidate
    combined_score: float
    components: tuple[float, float, float, float]


def aggregate_lm_logprob(token_logps: Iterable[float]) -> float:
    """Sentence log-probability estimate: exactly-rounded sum of per-token terms."""
    values = list(token_logps)
    for lp in values:
        if not math.isfinite(lp):
            raise ValueError(f"token log-probability must be finite, got {lp!r}")
        if lp > 0:
            raise ValueError(f"token log-probability must be <= 0, got {lp!r}")
    return math.fsum(values)


def combine_score(
    logp_direct: float,
    logp_channel: float,
    logp_lm: float,
    n_tokens: int,
    lambdas: LambdaVector,
) -> tuple[float, tuple[float, float, float, float]]:
    """Combined score and its four addends (direct, channel, LM, length)."""
    if not isinstance(lambdas, LambdaVector):
        lambdas = LambdaVector(*lambdas)
    if n_tokens < 1:
        raise ValueError(f"n_tokens must be >= 1, got {n_tokens}")
    terms = (
        lambdas.l1 * logp_direct,
        lambdas.l2 * logp_channel,
        lambdas.l3 * logp_lm,
        lambdas.l4 * n_tokens,
    )
    total = terms[0] + terms[1] + terms[2] + terms[3]
    return total, terms


def score_candidates(cset: CandidateSet, lambdas: LambdaVector) -> list[ScoredCandidate]:
    """Combined score for every candidate of a set, in beam order."""
    scored = []
    for cand in cset.candidates:
        logp_lm = aggregate_lm_logprob(cand.lm_token_logps)
        total, terms = combine_score(
            cand.logp_direct, cand.logp_channel, logp_lm, cand.n_tokens(), lambdas
        )
        scored.append(ScoredCandidate(candidate=cand, combined_score=total, components=terms))
    return scored


def rerank_select(
    cset: CandidateSet, lambdas: LambdaVector
) -> tuple[Selection, list[ScoredCandidate]]:
    """Order candidates by descending combined score and pick the best.

    Returns the selection plus the full re-ranked ordering (a permutation of
    the input candidates; ties go to the lowest original beam rank).
    """
    scored = score_candidates(cset, lambdas)
    ranked = sorted(scored, key=lambda sc: (-sc.combined_score, sc.candidate.rank))
    best = ranked[0]
    selection = Selection(
        set_id=cset.id,
        chosen_rank=best.candidate.rank,
        chosen_text=best.candidate.text,
        score=best.combined_score,
        method="noisy-channel",
    )
    return selection, ranked


def first_beam_select(cset: CandidateSet) -> Selection:
    """Trust beam order: return the rank-0 hypothesis (the base-system output)."""
    first = cset.candidates[0]
    return Selection(
        set_id=cset.id,
        chosen_rank=first.rank,
        chosen_text=first.text,
        score=first.logp_direct,
        method="first-beam",
    )


def oracle_select(cset: CandidateSet) -> Selection:
    """Upper bound: the candidate with maximal sentence SARI against the references."""
    if not cset.references:
        raise ValueError(f"set {cset.id!r} has no references; oracle selection needs them")
    best_cand = None
    best_score = -math.inf
    for cand in cset.candidates:
        score = sari(cset.source, cand.text, cset.references).final
        if score > best_score:
            best_cand = cand
            best_score = score
    assert best_cand is not None
    return Selection(
        set_id=cset.id,
        chosen_rank=best_cand.rank,
        chosen_text=best_cand.text,
        score=best_score,
        method="oracle",
    )


def _bag_cosine(a: frozenset, b: frozenset) -> float:
    # binary bag-of-tokens vectors: dot product is the overlap size.
    if not a or not b:
        return 0.0
    return len(a & b) / math.sqrt(len(a) * len(b))


def _vector_cosine(u: Sequence[float], v: Sequence[float]) -> float:
    if len(u) != len(v):
        raise ValueError(f"embedding dimensions differ: {len(u)} vs {len(v)}")
    dot = math.fsum(x * y for x, y in zip(u, v))
    norm_u = math.sqrt(math.fsum(x * x for x in u))
    norm_v = math.sqrt(math.fsum(y * y for y in v))
    if norm_u == 0.0 or norm_v == 0.0:
        return 0.0
    return dot / (norm_u * norm_v)


def cosine_select(cset: CandidateSet) -> Selection:
    """Pick the candidate most similar to the source sentence.

    Uses file-supplied embeddings when the source and every candidate carry
    one; otherwise falls back to binary bag-of-lowercased-tokens vectors so
    the baseline runs with no scorer attached.
    """
    use_embeddings = cset.source_embedding is not None and all(
        c.embedding is not None for c in cset.candidates
    )
    if use_embeddings:
        sims = [_vector_cosine(cset.source_embedding, c.embedding) for c in cset.candidates]
    else:
        src_bag = frozenset(cset.source.lower().split())
        sims = [
            _bag_cosine(src_bag, frozenset(c.text.lower().split())) for c in cset.candidates
        ]
    best_idx = 0
    for i in range(1, len(sims)):
        if sims[i] > sims[best_idx]:
            best_idx = i
    chosen = cset.candidates[best_idx]
    return Selection(
        set_id=cset.id,
        chosen_rank=chosen.rank,
        chosen_text=chosen.text,
        score=sims[best_idx],
        method="cosine",
    )
