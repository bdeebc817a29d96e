#!/usr/bin/env python3
"""Regenerate tests/data/toy_candidates.jsonl (committed; run only to refresh).

Synthetic 20-sentence corpus with stub scores: candidate texts are seeded
perturbations of each source, log-probabilities are plausible hand-shaped
values, references are simplification-style rewrites. Sources span short to
long sentences so length quartiles are populated.
"""

from __future__ import annotations

import random
from pathlib import Path

from simprank.data import Candidate, CandidateSet, serialize_candidate_sets, validate_candidate_set

OUT = Path(__file__).resolve().parent.parent / "tests" / "data" / "toy_candidates.jsonl"

SOURCES = [
    "the committee postponed the decision .",
    "heavy rain caused the river to flood the village .",
    "the museum acquired a remarkable collection of ancient pottery .",
    "scientists discovered that the medication significantly reduced the symptoms .",
    "the old factory near the harbour was demolished last autumn .",
    "despite repeated warnings , many residents refused to evacuate the coastal area .",
    "the professor explained the complicated theory to the first year students .",
    "after the long negotiation , both companies agreed to merge their operations .",
    "the government announced substantial investments in renewable energy infrastructure .",
    "volunteers distributed food and blankets to families affected by the earthquake .",
    "the ancient manuscript , discovered in a monastery , contains detailed astronomical observations .",
    "because the bridge was damaged , commuters had to take a considerably longer route .",
    "the orchestra performed a celebrated symphony in the newly renovated concert hall downtown .",
    "local farmers complained that the prolonged drought had severely diminished their harvest this season .",
    "the committee recommended that the proposal be revised before it is submitted to the council for approval .",
    "emergency crews worked through the night to restore electricity to the thousands of households left in darkness .",
    "the celebrated novelist , whose books have been translated into forty languages , announced her retirement yesterday at the café .",
    "although the expedition faced extreme weather conditions , the climbers eventually reached the summit of the mountain after nine days .",
    "the newly elected mayor promised to improve public transportation , reduce pollution , and expand affordable housing across the entire city .",
    "researchers at the university demonstrated that regular moderate exercise can substantially lower the risk of several chronic diseases in older adults .",
]

SIMPLER = {
    "postponed": "delayed",
    "acquired": "got",
    "remarkable": "great",
    "ancient": "old",
    "significantly": "greatly",
    "substantial": "big",
    "substantially": "greatly",
    "demolished": "torn down",
    "complicated": "hard",
    "negotiation": "talks",
    "infrastructure": "systems",
    "distributed": "gave",
    "manuscript": "book",
    "astronomical": "sky",
    "considerably": "much",
    "celebrated": "famous",
    "renovated": "repaired",
    "prolonged": "long",
    "diminished": "reduced",
    "recommended": "said",
    "approval": "a yes",
    "households": "homes",
    "expedition": "team",
    "eventually": "finally",
    "transportation": "transport",
    "affordable": "cheap",
    "demonstrated": "showed",
    "moderate": "light",
    "chronic": "lasting",
    "severely": "badly",
    "evacuate": "leave",
}

FILLER = ["also", "still", "then", "so", "indeed"]


def simplify(tokens: list[str]) -> list[str]:
    out = []
    for tok in tokens:
        out.extend(SIMPLER.get(tok, tok).split())
    return out


def perturb(rng: random.Random, tokens: list[str], strength: int) -> list[str]:
    toks = list(tokens)
    for _ in range(strength):
        op = rng.choice(("drop", "swap", "insert", "simplify"))
        if op == "drop" and len(toks) > 3:
            del toks[rng.randrange(len(toks) - 1)]
        elif op == "swap" and len(toks) > 4:
            i = rng.randrange(len(toks) - 2)
            toks[i], toks[i + 1] = toks[i + 1], toks[i]
        elif op == "insert":
            toks.insert(rng.randrange(len(toks)), rng.choice(FILLER))
        else:
            toks = simplify(toks)
    return toks


def build_set(rng: random.Random, idx: int, source: str) -> CandidateSet:
    src_tokens = source.split()
    k = rng.randint(6, 10)
    texts: list[str] = []
    # rank 0 leans toward a copy, later ranks drift further from the source
    for rank in range(k):
        for _ in range(20):
            strength = 0 if rank == 0 else rng.randint(1, 2 + rank)
            text = " ".join(perturb(rng, src_tokens, strength))
            if text not in texts:
                texts.append(text)
                break
        else:
            texts.append(" ".join(src_tokens[: max(3, len(src_tokens) - rank)]) + f" v{rank}")

    candidates = []
    for rank, text in enumerate(texts):
        n = len(text.split())
        logp_direct = -(1.0 + 0.45 * rank + rng.uniform(0.0, 1.2) + 0.15 * n)
        overlap = len(set(text.split()) & set(src_tokens)) / max(len(set(src_tokens)), 1)
        logp_channel = -(2.0 + 6.0 * (1.0 - overlap) + rng.uniform(0.0, 1.5) + 0.2 * n)
        lm = tuple(
            -(0.4 + rng.uniform(0.0, 2.2) + (0.9 if tok not in SIMPLER.values() and tok in SIMPLER else 0.0))
            for tok in text.split()
        )
        candidates.append(
            Candidate(
                rank=rank,
                text=text,
                logp_direct=logp_direct,
                logp_channel=logp_channel,
                lm_token_logps=lm,
            )
        )

    references = [" ".join(simplify(perturb(rng, src_tokens, 1)))]
    if rng.random() < 0.6:
        references.append(" ".join(simplify(perturb(rng, src_tokens, 2))))
    if rng.random() < 0.3:
        references.append(" ".join(perturb(rng, simplify(src_tokens), 1)))
    return CandidateSet(
        id=f"toy{idx:03d}",
        source=source,
        candidates=tuple(candidates),
        references=tuple(references),
    )


def main() -> None:
    rng = random.Random(7)
    sets = [build_set(rng, i, src) for i, src in enumerate(SOURCES)]
    for cset in sets:
        validate_candidate_set(cset)
    OUT.parent.mkdir(parents=True, exist_ok=True)
    serialize_candidate_sets(sets, str(OUT))
    print(f"wrote {len(sets)} sets to {OUT}")


if __name__ == "__main__":
    main()
