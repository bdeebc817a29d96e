"""Scorer configuration: checkpoint paths and decoding settings."""

from __future__ import annotations

from dataclasses import dataclass


@dataclass(frozen=True)
class ScorerConfig:
    """Checkpoints and decoding knobs for candidate file production.

    Any transformers-loadable seq2seq checkpoint works for the direct and
    channel models (the channel model is expected to be trained with source
    and target swapped); any masked-LM checkpoint works for lm_model. Beam
    hypotheses are deduplicated by default and log-probabilities are raw
    (unnormalized) sums; both choices can be flipped here.
    """

    direct_model: str
    channel_model: str
    lm_model: str
    k: int = 10
    max_length: int = 100
    embedding_model: str | None = None
    device: str = "cpu"
    dedup: bool = True
    length_normalize: bool = False

    def __post_init__(self) -> None:
        if self.k < 1:
            raise ValueError(f"beam size k must be >= 1, got {self.k}")
        if self.max_length < 1:
            raise ValueError(f"max_length must be >= 1, got {self.max_length}")
