"""Self-contained tokenizer, SARI, and FKGL implementations.

Everything here is a deterministic pure function. The SARI variant is pinned
as follows: keep and delete components work on n-gram multisets with source
and output counts scaled by the number of references; the add component works
on distinct n-gram sets, unscaled; any component whose denominator is zero is
defined as 1 ("vacuously perfect"), so a perfect output scores exactly 100.
Published SARI scripts disagree on these conventions, so absolute
comparability with other toolkits is not claimed.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass
from typing import Iterable, Sequence

NGRAM_ORDERS = (1, 2, 3, 4)

_PUNCT_RE = re.compile(r'([.,;:!?"\'()\[\]])')
_SENTENCE_SPLIT_RE = re.compile(r"(?<=[.!?])\s+")
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")


def tokenize(text: str) -> list[str]:
    """Lowercase, detach punctuation into standalone tokens, split on whitespace."""
    return _PUNCT_RE.sub(r" \1 ", text.lower()).split()


def ngrams(tokens: Sequence[str], n: int) -> Counter:
    """Multiset of contiguous n-token windows, n in 1..4."""
    if n not in NGRAM_ORDERS:
        raise ValueError(f"n-gram order must be in 1..4, got {n}")
    return Counter(tuple(tokens[i : i + n]) for i in range(len(tokens) - n + 1))


@dataclass(frozen=True)
class SariBreakdown:
    """Per-order (keep_f1, del_precision, add_f1) components and the final score."""

    per_n: tuple[tuple[float, float, float], ...]
    final: float


def _scale(counts: Counter, factor: int) -> Counter:
    return Counter({g: c * factor for g, c in counts.items()})


def _size(counts: Counter) -> int:
    return sum(counts.values())


def _ratio(num: int, den: int) -> float:
    # zero denominator means "nothing to get wrong": vacuously perfect.
    return num / den if den else 1.0


def _f1(p: float, r: float) -> float:
    return 2 * p * r / (p + r) if p + r else 0.0


def sari(source: str, output: str, references: Sequence[str]) -> SariBreakdown:
    """Keep/delete/add n-gram score of a simplification against its references.

    Returns the component breakdown for n = 1..4 and the final score in
    [0, 100]. Invariant under permutation of the reference list.
    """
    if not references:
        raise ValueError("references must be non-empty")
    src_tokens = tokenize(source)
    out_tokens = tokenize(output)
    ref_tokens = [tokenize(r) for r in references]
    n_refs = len(references)

    per_n = []
    for n in NGRAM_ORDERS:
        src = _scale(ngrams(src_tokens, n), n_refs)
        out = _scale(ngrams(out_tokens, n), n_refs)
        ref = Counter()
        for toks in ref_tokens:
            ref.update(ngrams(toks, n))

        kept = src & out
        kept_good = kept & ref
        kept_all = src & ref
        keep_f1 = _f1(
            _ratio(_size(kept_good), _size(kept)),
            _ratio(_size(kept_good), _size(kept_all)),
        )

        deleted = src - out
        deleted_good = deleted - ref
        del_precision = _ratio(_size(deleted_good), _size(deleted))

        added = set(out) - set(src)
        added_good = added & set(ref)
        added_all = set(ref) - set(src)
        add_f1 = _f1(
            _ratio(len(added_good), len(added)),
            _ratio(len(added_good), len(added_all)),
        )

        per_n.append((keep_f1, del_precision, add_f1))

    final = 100.0 * math.fsum((k + d + a) / 3.0 for k, d, a in per_n) / len(per_n)
    return SariBreakdown(per_n=tuple(per_n), final=final)


def split_sentences(text: str) -> list[str]:
    """Split after each of . ! ? followed by whitespace or end of text."""
    stripped = text.strip()
    if not stripped:
        return []
    return [part for part in _SENTENCE_SPLIT_RE.split(stripped) if part.strip()]


def count_syllables(word: str) -> int:
    """Heuristic syllable count: vowel groups, silent final e, minimum one."""
    w = word.lower()
    if not any(ch.isalpha() for ch in w):
        raise ValueError(f"word has no alphabetic character: {word!r}")
    count = len(_VOWEL_GROUP_RE.findall(w))
    if count > 1 and w.endswith("e") and not w.endswith("le"):
        count -= 1
    return max(1, count)


FKGL_SENTENCE_WEIGHT = 0.39
FKGL_SYLLABLE_WEIGHT = 11.8
FKGL_OFFSET = 15.59


@dataclass(frozen=True)
class FkglReport:
    """Pooled corpus counts and the resulting grade level (lower = simpler)."""

    n_words: int
    n_sentences: int
    n_syllables: int
    grade: float


def fkgl(corpus: Iterable[str]) -> FkglReport:
    """Grade level over pooled corpus totals; words are alphabetic tokens only."""
    n_words = 0
    n_sentences = 0
    n_syllables = 0
    for text in corpus:
        n_sentences += len(split_sentences(text))
        for token in tokenize(text):
            if token.isalpha():
                n_words += 1
                n_syllables += count_syllables(token)
    if n_words == 0 or n_sentences == 0:
        raise ValueError("empty corpus: need at least one word and one sentence")
    grade = (
        FKGL_SENTENCE_WEIGHT * (n_words / n_sentences)
        + FKGL_SYLLABLE_WEIGHT * (n_syllables / n_words)
        - FKGL_OFFSET
    )
    return FkglReport(n_words=n_words, n_sentences=n_sentences, n_syllables=n_syllables, grade=grade)


def corpus_mean(values: Iterable[float]) -> float:
    """Exactly-rounded mean, so corpus aggregates are order-independent."""
    vals = [float(v) for v in values]
    if not vals:
        raise ValueError("cannot average an empty sequence")
    return math.fsum(vals) / len(vals)
