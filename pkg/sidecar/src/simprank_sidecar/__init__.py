"""Scorer sidecar: turns checkpoints plus plain text into simprank candidate files."""

from .config import ScorerConfig
from .scorer import CandidateScorer, ScorerError, score_file

__version__ = "0.1.0"

__all__ = ["ScorerConfig", "CandidateScorer", "ScorerError", "score_file"]
