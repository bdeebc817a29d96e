"""System-level reports: mean sentence SARI and corpus FKGL, with baseline deltas.

A report row is one system (one selections file). When a baseline system is
designated, every row carries delta values against it; the rendered table
shows them one decimal, signed, in parentheses next to the metric, while the
JSON output keeps full precision.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Mapping, Sequence

from .data import CandidateSet, Selection, ValidationError, index_by_id
from .metrics import corpus_mean, fkgl, sari


@dataclass(frozen=True)
class InstanceScore:
    id: str
    sari: float
    chosen_rank: int


@dataclass(frozen=True)
class SystemReport:
    system: str
    sari_mean: float
    fkgl: float
    delta_sari: float | None
    delta_fkgl: float | None
    per_instance: tuple[InstanceScore, ...]


def _score_system(
    name: str, selections: Sequence[Selection], sets_by_id: Mapping[str, CandidateSet]
) -> tuple[list[InstanceScore], float, float]:
    if not selections:
        raise ValidationError(f"system {name!r} has no selections")
    rows = []
    texts = []
    for sel in selections:
        cset = sets_by_id.get(sel.set_id)
        if cset is None:
            raise ValidationError(
                f"system {name!r}: selection id {sel.set_id!r} not in the candidate file"
            )
        if not 0 <= sel.chosen_rank < len(cset.candidates):
            raise ValidationError(
                f"system {name!r}: id {sel.set_id!r} chosen_rank {sel.chosen_rank} "
                f"out of range for {len(cset.candidates)} candidates"
            )
        if not cset.references:
            raise ValidationError(f"id {sel.set_id!r} has no references; evaluation needs them")
        score = sari(cset.source, sel.chosen_text, cset.references).final
        rows.append(InstanceScore(id=sel.set_id, sari=score, chosen_rank=sel.chosen_rank))
        texts.append(sel.chosen_text)
    return rows, corpus_mean(r.sari for r in rows), fkgl(texts).grade


def evaluate_systems(
    candidates: Sequence[CandidateSet],
    selections_by_system: Mapping[str, Sequence[Selection]],
    baseline: str | None = None,
) -> list[SystemReport]:
    """Score every system; attach deltas when a baseline is designated."""
    if baseline is not None and baseline not in selections_by_system:
        raise ValidationError(f"baseline {baseline!r} is not among the evaluated systems")
    sets_by_id = index_by_id(candidates)

    scored: dict[str, tuple[list[InstanceScore], float, float]] = {}
    for name, sels in selections_by_system.items():
        scored[name] = _score_system(name, sels, sets_by_id)

    reports = []
    for name, (rows, sari_mean, fkgl_grade) in scored.items():
        delta_sari = delta_fkgl = None
        if baseline is not None:
            _, base_sari, base_fkgl = scored[baseline]
            delta_sari = sari_mean - base_sari
            delta_fkgl = fkgl_grade - base_fkgl
        reports.append(
            SystemReport(
                system=name,
                sari_mean=sari_mean,
                fkgl=fkgl_grade,
                delta_sari=delta_sari,
                delta_fkgl=delta_fkgl,
                per_instance=tuple(rows),
            )
        )
    return reports


def format_delta(value: float) -> str:
    """One decimal, explicit sign; negative zero normalized to +0.0."""
    rounded = round(value, 1)
    if rounded == 0.0:
        rounded = 0.0
    return f"{rounded:+.1f}"


def render_report_table(reports: Sequence[SystemReport], baseline: str | None = None) -> str:
    """Aligned-column summary; non-baseline rows show deltas in parentheses."""
    header = ("system", "sari", "fkgl")
    rows = [header]
    for rep in reports:
        sari_cell = f"{rep.sari_mean:.2f}"
        fkgl_cell = f"{rep.fkgl:.2f}"
        if rep.delta_sari is not None and rep.system != baseline:
            sari_cell += f" ({format_delta(rep.delta_sari)})"
            fkgl_cell += f" ({format_delta(rep.delta_fkgl)})"
        rows.append((rep.system, sari_cell, fkgl_cell))
    widths = [max(len(row[col]) for row in rows) for col in range(3)]
    lines = []
    for row in rows:
        cells = [row[col].ljust(widths[col]) for col in range(3)]
        lines.append("  ".join(cells).rstrip())
    return "\n".join(lines) + "\n"


def reports_to_obj(reports: Sequence[SystemReport], baseline: str | None = None) -> dict:
    systems = []
    for rep in reports:
        obj = {
            "system": rep.system,
            "sari_mean": rep.sari_mean,
            "fkgl": rep.fkgl,
            "per_instance": [
                {"id": r.id, "sari": r.sari, "chosen_rank": r.chosen_rank}
                for r in rep.per_instance
            ],
        }
        if rep.delta_sari is not None:
            obj["delta_sari"] = rep.delta_sari
            obj["delta_fkgl"] = rep.delta_fkgl
        systems.append(obj)
    out = {"systems": systems}
    if baseline is not None:
        out["baseline"] = baseline
    return out


def write_report_json(reports: Sequence[SystemReport], baseline: str | None, path: str) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(reports_to_obj(reports, baseline), fh, ensure_ascii=False, indent=2)
        fh.write("\n")
