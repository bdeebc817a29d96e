"""Exhaustive grid search over the four combination weights.

Every grid point is evaluated by re-ranking a development corpus and scoring
the chosen candidates with mean sentence SARI; the maximizer wins, with ties
going to the lexicographically smallest weight vector. Grid points are exact
decimals (0.1, 0.2, ...), never accumulated binary floats, so reported
weights are unambiguous.

The inner loop is vectorized with numpy but reproduces the scalar score
arithmetic of `combine_score` operation for operation, so a grid row is
bit-identical to re-ranking at that weight vector directly.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from decimal import ROUND_FLOOR, Decimal
from typing import Sequence

import numpy as np

from .data import CandidateSet, LambdaVector, ValidationError
from .metrics import corpus_mean, sari
from .rerank import aggregate_lm_logprob


@dataclass(frozen=True)
class GridSpec:
    """One axis specification applied to all four weights."""

    min: float = 0.0
    max: float = 1.0
    step: float = 0.1

    def __post_init__(self) -> None:
        if not (self.min <= self.max):
            raise ValidationError(f"grid min {self.min} must be <= max {self.max}")
        if not self.step > 0:
            raise ValidationError(f"grid step must be > 0, got {self.step}")

    def axis(self) -> list[float]:
        """Exact-decimal grid points min, min+step, ... up to max."""
        dmin = Decimal(str(self.min))
        dmax = Decimal(str(self.max))
        dstep = Decimal(str(self.step))
        n_steps = int(((dmax - dmin) / dstep + Decimal("1e-9")).to_integral_value(ROUND_FLOOR))
        return [float(dmin + i * dstep) for i in range(n_steps + 1)]


@dataclass(frozen=True)
class GridResult:
    """Best weight vector found, its dev score, and the search size."""

    best_lambda: LambdaVector
    dev_sari: float
    n_evaluated: int
    full_table: tuple[tuple[LambdaVector, float], ...] | None = None


def enumerate_grid(spec: GridSpec) -> list[LambdaVector]:
    """Cartesian product over the four axes in lexicographic order."""
    axis = spec.axis()
    return [LambdaVector(*combo) for combo in itertools.product(axis, repeat=4)]


def grid_search(
    dev: Sequence[CandidateSet],
    spec: GridSpec = GridSpec(),
    full_table: bool = False,
) -> GridResult:
    """Find the weight vector maximizing mean sentence SARI of the selections.

    Deterministic: evaluation order is the lexicographic grid order, the mean
    is exactly rounded (order-independent), and ties keep the earlier
    (lexicographically smaller) vector.
    """
    sets = list(dev)
    if not sets:
        raise ValidationError("development corpus is empty")
    for cset in sets:
        if not cset.references:
            raise ValidationError(f"set {cset.id!r} has no references; grid search needs them")

    # per-candidate features (direct, channel, lm, length) and sentence SARI,
    # padded to the widest set; padding is masked out of the argmax.
    n_sets = len(sets)
    k_max = max(len(s.candidates) for s in sets)
    feats = np.zeros((n_sets, k_max, 4), dtype=np.float64)
    sari_vals = np.zeros((n_sets, k_max), dtype=np.float64)
    valid = np.zeros((n_sets, k_max), dtype=bool)
    for i, cset in enumerate(sets):
        for j, cand in enumerate(cset.candidates):
            feats[i, j, 0] = cand.logp_direct
            feats[i, j, 1] = cand.logp_channel
            feats[i, j, 2] = aggregate_lm_logprob(cand.lm_token_logps)
            feats[i, j, 3] = float(cand.n_tokens())
            sari_vals[i, j] = sari(cset.source, cand.text, cset.references).final
            valid[i, j] = True

    direct, channel, lm, length = (feats[:, :, k] for k in range(4))
    row_idx = np.arange(n_sets)

    grid = enumerate_grid(spec)
    best_lambda: LambdaVector | None = None
    best_sari = -np.inf
    table: list[tuple[LambdaVector, float]] = []
    for lam in grid:
        # same operation order as combine_score: ((t1 + t2) + t3) + t4
        scores = ((direct * lam.l1 + channel * lam.l2) + lm * lam.l3) + length * lam.l4
        scores = np.where(valid, scores, -np.inf)
        chosen = scores.argmax(axis=1)  # first max == lowest beam rank
        mean = corpus_mean(sari_vals[row_idx, chosen].tolist())
        if full_table:
            table.append((lam, mean))
        if best_lambda is None or mean > best_sari:
            best_lambda = lam
            best_sari = mean

    assert best_lambda is not None
    return GridResult(
        best_lambda=best_lambda,
        dev_sari=best_sari,
        n_evaluated=len(grid),
        full_table=tuple(table) if full_table else None,
    )


def write_grid_result(result: GridResult, path: str) -> None:
    obj = {
        "best_lambda": list(result.best_lambda.as_tuple()),
        "dev_sari": result.dev_sari,
        "n_evaluated": result.n_evaluated,
    }
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(json.dumps(obj, ensure_ascii=False, separators=(",", ":")) + "\n")


def parse_grid_result(path: str) -> GridResult:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    return GridResult(
        best_lambda=LambdaVector(*obj["best_lambda"]),
        dev_sari=float(obj["dev_sari"]),
        n_evaluated=int(obj["n_evaluated"]),
    )


def write_full_table(result: GridResult, path: str) -> None:
    if result.full_table is None:
        raise ValidationError("grid result holds no full table; rerun with full_table=True")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("l1\tl2\tl3\tl4\tsari\n")
        for lam, score in result.full_table:
            l1, l2, l3, l4 = lam.as_tuple()
            fh.write(f"{l1!r}\t{l2!r}\t{l3!r}\t{l4!r}\t{score!r}\n")
