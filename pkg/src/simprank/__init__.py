"""Noisy-channel re-ranking and evaluation toolkit for simplification n-best lists."""

from .data import (
    Candidate,
    CandidateSet,
    LambdaVector,
    Selection,
    ValidationError,
    parse_candidate_file,
    parse_selection_file,
    serialize_candidate_sets,
    serialize_selections,
    whitespace_tokens,
)
from .metrics import (
    FkglReport,
    SariBreakdown,
    corpus_mean,
    count_syllables,
    fkgl,
    ngrams,
    sari,
    split_sentences,
    tokenize,
)
from .rerank import (
    ScoredCandidate,
    aggregate_lm_logprob,
    combine_score,
    cosine_select,
    first_beam_select,
    oracle_select,
    rerank_select,
)
from .tuning import GridResult, GridSpec, enumerate_grid, grid_search

__version__ = "0.1.0"

__all__ = [
    "Candidate",
    "CandidateSet",
    "LambdaVector",
    "Selection",
    "ValidationError",
    "parse_candidate_file",
    "parse_selection_file",
    "serialize_candidate_sets",
    "serialize_selections",
    "whitespace_tokens",
    "FkglReport",
    "SariBreakdown",
    "corpus_mean",
    "count_syllables",
    "fkgl",
    "ngrams",
    "sari",
    "split_sentences",
    "tokenize",
    "ScoredCandidate",
    "aggregate_lm_logprob",
    "combine_score",
    "cosine_select",
    "first_beam_select",
    "oracle_select",
    "rerank_select",
    "GridResult",
    "GridSpec",
    "enumerate_grid",
    "grid_search",
]
