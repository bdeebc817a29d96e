"""Shared builders for randomized test corpora."""

import random
from pathlib import Path

from simprank.data import Candidate, CandidateSet

DATA_DIR = Path(__file__).parent / "data"
TOY_CANDIDATES = DATA_DIR / "toy_candidates.jsonl"

VOCAB = (
    "the a an old new big small cat dog house tree river man woman child "
    "walked ran jumped saw found lost made built ate very quite really now "
    "then here there quickly slowly happily sadly red green blue heavy light "
    "water stone paper garden street city village"
).split()


def random_sentence(rng: random.Random, min_len=1, max_len=12) -> str:
    n = rng.randint(min_len, max_len)
    return " ".join(rng.choice(VOCAB) for _ in range(n))


def random_candidate(rng: random.Random, rank: int, text: str | None = None) -> Candidate:
    if text is None:
        text = random_sentence(rng)
    n = len(text.split())
    return Candidate(
        rank=rank,
        text=text,
        logp_direct=-rng.uniform(0.1, 30.0),
        logp_channel=-rng.uniform(0.1, 30.0),
        lm_token_logps=tuple(-rng.uniform(0.05, 8.0) for _ in range(n)),
    )


def random_candidate_set(
    rng: random.Random, set_id: str, k: int | None = None, with_references: bool = True
) -> CandidateSet:
    k = k if k is not None else rng.randint(2, 10)
    source = random_sentence(rng, min_len=3, max_len=15)
    candidates = tuple(random_candidate(rng, rank) for rank in range(k))
    references = None
    if with_references:
        references = tuple(random_sentence(rng, 1, 10) for _ in range(rng.randint(1, 3)))
    return CandidateSet(id=set_id, source=source, candidates=candidates, references=references)


def random_corpus(rng: random.Random, n: int, **kwargs) -> list[CandidateSet]:
    return [random_candidate_set(rng, f"set{i:04d}", **kwargs) for i in range(n)]
