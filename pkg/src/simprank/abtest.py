"""Blinded A/B sample construction and judgment tallying.

The sample is stratified into four quartiles by source length (whitespace
tokens, nearest-rank percentile boundaries, boundary items to the lower
quartile). Items where the two systems emit byte-identical text are excluded
from the pool and counted in the sample manifest: judging identical strings
is meaningless. Side assignment is randomized by a seeded RNG; the sample
file carries no system labels anywhere, the key file holds the un-blinding
map. Identical inputs and seed reproduce both files byte for byte.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass
from typing import Sequence

from .data import CandidateSet, Selection, ValidationError, index_by_id

QUARTILES = (1, 2, 3, 4)
CHOICES = ("left", "right", "equal")
EQUAL_LABEL = "Equal"


@dataclass(frozen=True)
class AbItem:
    id: str
    quartile: int
    source: str
    left_text: str
    right_text: str


@dataclass(frozen=True)
class AbSample:
    items: tuple[AbItem, ...]
    n_identical_excluded: int


@dataclass(frozen=True)
class AbKeyItem:
    id: str
    quartile: int
    system_left: str
    system_right: str


@dataclass(frozen=True)
class AbKey:
    seed: int
    systems: tuple[str, str]
    items: tuple[AbKeyItem, ...]


def _nearest_rank(sorted_values: Sequence[int], percentile: float) -> int:
    rank = math.ceil(percentile / 100.0 * len(sorted_values))
    return sorted_values[max(rank, 1) - 1]


def length_quartile(length: int, boundaries: tuple[int, int, int]) -> int:
    """Quartile of a source length; boundary values fall into the lower quartile."""
    p25, p50, p75 = boundaries
    if length <= p25:
        return 1
    if length <= p50:
        return 2
    if length <= p75:
        return 3
    return 4


def quartile_boundaries(lengths: Sequence[int]) -> tuple[int, int, int]:
    ordered = sorted(lengths)
    return (
        _nearest_rank(ordered, 25),
        _nearest_rank(ordered, 50),
        _nearest_rank(ordered, 75),
    )


def quartile_sizes(n: int) -> dict[int, int]:
    """Per-quartile sample sizes; the remainder goes to the longest quartiles first."""
    sizes = {q: n // 4 for q in QUARTILES}
    for q in (4, 3, 2, 1)[: n % 4]:
        sizes[q] += 1
    return sizes


def make_ab_sample(
    candidates: Sequence[CandidateSet],
    selections_a: Sequence[Selection],
    selections_b: Sequence[Selection],
    n: int,
    seed: int,
    name_a: str = "A",
    name_b: str = "B",
) -> tuple[AbSample, AbKey]:
    """Draw a blinded, length-stratified sample of differing system outputs."""
    if n < 1:
        raise ValidationError(f"sample size must be >= 1, got {n}")
    if name_a == name_b:
        raise ValidationError(f"system names must differ, both are {name_a!r}")
    a_by_id = {s.set_id: s for s in selections_a}
    b_by_id = {s.set_id: s for s in selections_b}
    if set(a_by_id) != set(b_by_id):
        only_a = sorted(set(a_by_id) - set(b_by_id))
        only_b = sorted(set(b_by_id) - set(a_by_id))
        raise ValidationError(
            f"systems must cover the same ids; only in {name_a!r}: {only_a[:5]}, "
            f"only in {name_b!r}: {only_b[:5]}"
        )
    sets_by_id = index_by_id(candidates)
    missing = sorted(set(a_by_id) - set(sets_by_id))
    if missing:
        raise ValidationError(f"selection ids not in the candidate file: {missing[:5]}")

    # pool in candidate-file order so sampling order is canonical
    pool = []
    n_identical = 0
    for cset in candidates:
        if cset.id not in a_by_id:
            continue
        if a_by_id[cset.id].chosen_text == b_by_id[cset.id].chosen_text:
            n_identical += 1
            continue
        pool.append(cset)
    if not pool:
        raise ValidationError("no items with differing outputs to sample from")

    boundaries = quartile_boundaries([len(c.source.split()) for c in pool])
    by_quartile: dict[int, list[CandidateSet]] = {q: [] for q in QUARTILES}
    for cset in pool:
        by_quartile[length_quartile(len(cset.source.split()), boundaries)].append(cset)

    sizes = quartile_sizes(n)
    for q in QUARTILES:
        if len(by_quartile[q]) < sizes[q]:
            raise ValidationError(
                f"quartile {q} has only {len(by_quartile[q])} eligible items, "
                f"need {sizes[q]}"
            )

    rng = random.Random(seed)
    sample_items = []
    key_items = []
    for q in QUARTILES:
        for cset in rng.sample(by_quartile[q], sizes[q]):
            a_left = rng.random() < 0.5
            left_sel, right_sel = (
                (a_by_id[cset.id], b_by_id[cset.id])
                if a_left
                else (b_by_id[cset.id], a_by_id[cset.id])
            )
            sample_items.append(
                AbItem(
                    id=cset.id,
                    quartile=q,
                    source=cset.source,
                    left_text=left_sel.chosen_text,
                    right_text=right_sel.chosen_text,
                )
            )
            key_items.append(
                AbKeyItem(
                    id=cset.id,
                    quartile=q,
                    system_left=name_a if a_left else name_b,
                    system_right=name_b if a_left else name_a,
                )
            )
    sample = AbSample(items=tuple(sample_items), n_identical_excluded=n_identical)
    key = AbKey(seed=seed, systems=(name_a, name_b), items=tuple(key_items))
    return sample, key


def write_ab_sample(sample: AbSample, path: str) -> None:
    obj = {
        "items": [
            {
                "id": it.id,
                "quartile": it.quartile,
                "source": it.source,
                "left_text": it.left_text,
                "right_text": it.right_text,
            }
            for it in sample.items
        ],
        "n_identical_excluded": sample.n_identical_excluded,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def parse_ab_sample(path: str) -> AbSample:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    items = tuple(
        AbItem(
            id=it["id"],
            quartile=int(it["quartile"]),
            source=it["source"],
            left_text=it["left_text"],
            right_text=it["right_text"],
        )
        for it in obj["items"]
    )
    return AbSample(items=items, n_identical_excluded=int(obj["n_identical_excluded"]))


def write_ab_key(key: AbKey, path: str) -> None:
    obj = {
        "seed": key.seed,
        "systems": list(key.systems),
        "items": [
            {
                "id": it.id,
                "quartile": it.quartile,
                "system_left": it.system_left,
                "system_right": it.system_right,
            }
            for it in key.items
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, ensure_ascii=False, indent=2)
        fh.write("\n")


def parse_ab_key(path: str) -> AbKey:
    with open(path, encoding="utf-8") as fh:
        obj = json.load(fh)
    items = tuple(
        AbKeyItem(
            id=it["id"],
            quartile=int(it["quartile"]),
            system_left=it["system_left"],
            system_right=it["system_right"],
        )
        for it in obj["items"]
    )
    systems = obj["systems"]
    if len(systems) != 2:
        raise ValidationError(f"key must name exactly two systems, got {systems!r}")
    return AbKey(seed=int(obj["seed"]), systems=(systems[0], systems[1]), items=items)


@dataclass(frozen=True)
class Judgment:
    id: str
    choice: str


def parse_judgment_file(path: str) -> list[Judgment]:
    """Judgments, one JSON object per line; duplicate ids within a file are rejected."""
    out: list[Judgment] = []
    seen: set[str] = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if not line.strip():
                continue
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                raise ValidationError(f"{path} line {lineno}: malformed JSON: {exc}") from None
            if not isinstance(obj, dict) or "id" not in obj or "choice" not in obj:
                raise ValidationError(
                    f"{path} line {lineno}: judgment needs 'id' and 'choice' fields"
                )
            if obj["choice"] not in CHOICES:
                raise ValidationError(
                    f"{path} line {lineno}: choice must be one of {CHOICES}, "
                    f"got {obj['choice']!r}"
                )
            if obj["id"] in seen:
                raise ValidationError(
                    f"{path} line {lineno}: duplicate judgment for id {obj['id']!r}"
                )
            seen.add(obj["id"])
            out.append(Judgment(id=obj["id"], choice=obj["choice"]))
    return out


@dataclass(frozen=True)
class TallyTable:
    """Counts per row label (two systems plus Equal), per quartile and total."""

    systems: tuple[str, str]
    counts: dict[str, dict[int, int]]

    def row_labels(self) -> tuple[str, str, str]:
        return (self.systems[0], self.systems[1], EQUAL_LABEL)

    def total(self, label: str) -> int:
        return sum(self.counts[label].values())


def _empty_counts(systems: tuple[str, str]) -> dict[str, dict[int, int]]:
    return {label: {q: 0 for q in QUARTILES} for label in (*systems, EQUAL_LABEL)}


def tally_judgments(judgments: Sequence[Judgment], key: AbKey) -> TallyTable:
    """Un-blind judgments via the key and count wins per quartile."""
    key_by_id = {it.id: it for it in key.items}
    counts = _empty_counts(key.systems)
    for j in judgments:
        item = key_by_id.get(j.id)
        if item is None:
            raise ValidationError(f"judgment references unknown id {j.id!r}")
        if j.choice == "left":
            label = item.system_left
        elif j.choice == "right":
            label = item.system_right
        else:
            label = EQUAL_LABEL
        counts[label][item.quartile] += 1
    return TallyTable(systems=key.systems, counts=counts)


def pool_tallies(tables: Sequence[TallyTable]) -> TallyTable:
    if not tables:
        raise ValidationError("nothing to pool")
    systems = tables[0].systems
    for t in tables:
        if t.systems != systems:
            raise ValidationError("cannot pool tallies with different system pairs")
    counts = _empty_counts(systems)
    for t in tables:
        for label, row in t.counts.items():
            for q, c in row.items():
                counts[label][q] += c
    return TallyTable(systems=systems, counts=counts)


def render_tally(table: TallyTable, title: str | None = None) -> str:
    header = ["", "Q1", "Q2", "Q3", "Q4", "Total"]
    rows = [header]
    for label in table.row_labels():
        cells = [label] + [str(table.counts[label][q]) for q in QUARTILES]
        cells.append(str(table.total(label)))
        rows.append(cells)
    widths = [max(len(row[col]) for row in rows) for col in range(6)]
    lines = [] if title is None else [title]
    for row in rows:
        first = row[0].ljust(widths[0])
        rest = [row[col].rjust(widths[col]) for col in range(1, 6)]
        lines.append("  ".join([first] + rest).rstrip())
    return "\n".join(lines) + "\n"


def tally_to_obj(table: TallyTable) -> dict:
    return {
        "systems": list(table.systems),
        "rows": [
            {
                "label": label,
                **{f"q{q}": table.counts[label][q] for q in QUARTILES},
                "total": table.total(label),
            }
            for label in table.row_labels()
        ],
    }
