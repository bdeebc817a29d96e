"""Command-line surface: re-rank, tune, evaluate, baselines, and the A/B workflow.

Every command is a thin composition of library operations; given identical
inputs and flags, outputs are byte-identical across runs. Exit codes:
0 success, 1 validation error, 2 I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from typing import Sequence

from . import abtest, evaluate, tuning
from .data import (
    LambdaVector,
    ValidationError,
    parse_candidate_file,
    parse_selection_file,
    serialize_selections,
)
from .rerank import cosine_select, first_beam_select, oracle_select, rerank_select


def _parse_lambdas(raw: str) -> LambdaVector:
    parts = raw.split(",")
    if len(parts) != 4:
        raise ValidationError(f"--lambdas needs 4 comma-separated values, got {raw!r}")
    try:
        values = [float(p) for p in parts]
    except ValueError:
        raise ValidationError(f"--lambdas values must be numbers, got {raw!r}") from None
    return LambdaVector(*values)


def _parse_named_file(raw: str, default_name: str) -> tuple[str, str]:
    if "=" in raw:
        name, path = raw.split("=", 1)
        if not name:
            raise ValidationError(f"empty system name in {raw!r}")
        return name, path
    return default_name, raw


def _cmd_rerank(args: argparse.Namespace) -> None:
    lambdas = _parse_lambdas(args.lambdas)
    sets = parse_candidate_file(args.input)
    selections = [rerank_select(cset, lambdas)[0] for cset in sets]
    serialize_selections(selections, args.output)


def _cmd_select(args: argparse.Namespace, select) -> None:
    sets = parse_candidate_file(args.input)
    serialize_selections([select(cset) for cset in sets], args.output)


def _cmd_gridsearch(args: argparse.Namespace) -> None:
    spec = tuning.GridSpec(min=args.grid_min, max=args.grid_max, step=args.grid_step)
    sets = parse_candidate_file(args.input)
    result = tuning.grid_search(sets, spec, full_table=args.full_table is not None)
    tuning.write_grid_result(result, args.output)
    if args.full_table is not None:
        tuning.write_full_table(result, args.full_table)
    best = ",".join(repr(v) for v in result.best_lambda.as_tuple())
    print(f"best lambda {best}  dev sari {result.dev_sari:.2f}  ({result.n_evaluated} points)")


def _cmd_evaluate(args: argparse.Namespace) -> None:
    sets = parse_candidate_file(args.candidates)
    selections_by_system = {}
    for i, raw in enumerate(args.selections):
        name, path = _parse_named_file(raw, default_name=f"system{i + 1}")
        if name in selections_by_system:
            raise ValidationError(f"system {name!r} given twice")
        selections_by_system[name] = parse_selection_file(path)
    reports = evaluate.evaluate_systems(sets, selections_by_system, baseline=args.baseline)
    evaluate.write_report_json(reports, args.baseline, args.output)
    sys.stdout.write(evaluate.render_report_table(reports, baseline=args.baseline))


def _cmd_absample(args: argparse.Namespace) -> None:
    name_a, path_a = _parse_named_file(args.a, default_name="A")
    name_b, path_b = _parse_named_file(args.b, default_name="B")
    sets = parse_candidate_file(args.candidates)
    sample, key = abtest.make_ab_sample(
        sets,
        parse_selection_file(path_a),
        parse_selection_file(path_b),
        n=args.n,
        seed=args.seed,
        name_a=name_a,
        name_b=name_b,
    )
    abtest.write_ab_sample(sample, args.sample)
    abtest.write_ab_key(key, args.key)
    print(
        f"sampled {len(sample.items)} items "
        f"({sample.n_identical_excluded} identical outputs excluded)"
    )


def _cmd_tally(args: argparse.Namespace) -> None:
    key = abtest.parse_ab_key(args.key)
    tables = [
        abtest.tally_judgments(abtest.parse_judgment_file(path), key)
        for path in args.judgments
    ]
    if len(tables) == 1:
        sys.stdout.write(abtest.render_tally(tables[0]))
        pooled = tables[0]
    else:
        for path, table in zip(args.judgments, tables):
            sys.stdout.write(abtest.render_tally(table, title=path))
            sys.stdout.write("\n")
        pooled = abtest.pool_tallies(tables)
        sys.stdout.write(abtest.render_tally(pooled, title="pooled"))
    if args.output is not None:
        with open(args.output, "w", encoding="utf-8") as fh:
            json.dump(abtest.tally_to_obj(pooled), fh, ensure_ascii=False, indent=2)
            fh.write("\n")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="simprank",
        description="Re-rank, tune, and evaluate sentence-simplification n-best lists.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("rerank", help="noisy-channel re-ranking at fixed weights")
    p.add_argument("--input", required=True, help="candidate JSONL file")
    p.add_argument("--lambdas", required=True, help="four comma-separated weights, e.g. 0.5,0.0,0.1,0.6")
    p.add_argument("--output", required=True, help="selections JSONL file to write")
    p.set_defaults(func=_cmd_rerank)

    p = sub.add_parser("gridsearch", help="exhaustive weight search maximizing dev SARI")
    p.add_argument("--input", required=True, help="candidate JSONL file with references")
    p.add_argument("--grid-min", type=float, default=0.0)
    p.add_argument("--grid-max", type=float, default=1.0)
    p.add_argument("--grid-step", type=float, default=0.1)
    p.add_argument("--output", required=True, help="grid result JSON file to write")
    p.add_argument("--full-table", default=None, help="optional TSV of every (lambda, sari) row")
    p.set_defaults(func=_cmd_gridsearch)

    p = sub.add_parser("evaluate", help="SARI/FKGL report for one or more systems")
    p.add_argument("--candidates", required=True, help="candidate JSONL file with references")
    p.add_argument(
        "--selections",
        required=True,
        nargs="+",
        metavar="NAME=FILE",
        help="one or more selections files, each tagged with a system name",
    )
    p.add_argument("--baseline", default=None, help="system name deltas are computed against")
    p.add_argument("--output", required=True, help="report JSON file to write")
    p.set_defaults(func=_cmd_evaluate)

    p = sub.add_parser("firstbeam", help="baseline: keep the rank-0 beam hypothesis")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=lambda args: _cmd_select(args, first_beam_select))

    p = sub.add_parser("oracle", help="upper bound: pick the max-SARI candidate")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=lambda args: _cmd_select(args, oracle_select))

    p = sub.add_parser("cosine", help="baseline: pick the candidate most similar to the source")
    p.add_argument("--input", required=True)
    p.add_argument("--output", required=True)
    p.set_defaults(func=lambda args: _cmd_select(args, cosine_select))

    p = sub.add_parser("absample", help="draw a blinded, length-stratified A/B sample")
    p.add_argument("--candidates", required=True, help="candidate JSONL file (for sources)")
    p.add_argument("--a", required=True, metavar="[NAME=]FILE", help="first system selections")
    p.add_argument("--b", required=True, metavar="[NAME=]FILE", help="second system selections")
    p.add_argument("--n", type=int, default=25, help="total items to sample")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--sample", required=True, help="blinded sample JSON to write")
    p.add_argument("--key", required=True, help="un-blinding key JSON to write")
    p.set_defaults(func=_cmd_absample)

    p = sub.add_parser("tally", help="un-blind judgments and count wins per quartile")
    p.add_argument("--judgments", required=True, nargs="+", help="judgment JSONL file(s)")
    p.add_argument("--key", required=True, help="key JSON from absample")
    p.add_argument("--output", default=None, help="optional pooled-counts JSON")
    p.set_defaults(func=_cmd_tally)

    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
