"""score-candidates: plain-text sentences in, simprank candidate file out."""

from __future__ import annotations

import argparse
import sys
from typing import Sequence

from .config import ScorerConfig
from .scorer import CandidateScorer, ScorerError, score_file


def _read_lines(path: str) -> list[str]:
    with open(path, encoding="utf-8") as fh:
        return [line.rstrip("\n") for line in fh if line.strip()]


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="score-candidates",
        description="Generate and score top-k simplification candidates per source sentence.",
    )
    parser.add_argument("--sources", required=True, help="plain text, one source sentence per line")
    parser.add_argument(
        "--refs",
        nargs="*",
        default=[],
        help="reference files aligned line-by-line with --sources (one file per reference set)",
    )
    parser.add_argument("--out", required=True, help="candidate JSONL file to write")
    parser.add_argument("--direct-model", required=True, help="seq2seq checkpoint for p(y|x)")
    parser.add_argument(
        "--channel-model", required=True, help="seq2seq checkpoint trained with sides swapped, p(x|y)"
    )
    parser.add_argument("--lm-model", required=True, help="masked-LM checkpoint for p(y)")
    parser.add_argument("--embedding-model", default=None, help="encoder checkpoint for --embed")
    parser.add_argument("--k", type=int, default=10, help="beam size and candidates per sentence")
    parser.add_argument("--max-length", type=int, default=100)
    parser.add_argument("--device", default="cpu")
    parser.add_argument("--embed", action="store_true", help="attach unit-norm sentence embeddings")
    parser.add_argument(
        "--keep-duplicates",
        action="store_true",
        help="keep duplicate beam hypotheses instead of deduplicating",
    )
    parser.add_argument(
        "--length-normalize",
        action="store_true",
        help="divide direct log-probabilities by hypothesis length (off by default; downstream expects raw sums)",
    )
    parser.add_argument("--quiet", action="store_true")
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    if args.embed and args.embedding_model is None:
        print("error: --embed needs --embedding-model", file=sys.stderr)
        return 1
    config = ScorerConfig(
        direct_model=args.direct_model,
        channel_model=args.channel_model,
        lm_model=args.lm_model,
        k=args.k,
        max_length=args.max_length,
        embedding_model=args.embedding_model,
        device=args.device,
        dedup=not args.keep_duplicates,
        length_normalize=args.length_normalize,
    )
    try:
        sources = _read_lines(args.sources)
        references = None
        if args.refs:
            ref_columns = [_read_lines(path) for path in args.refs]
            for path, column in zip(args.refs, ref_columns):
                if len(column) != len(sources):
                    print(
                        f"error: {path} has {len(column)} lines but --sources has {len(sources)}",
                        file=sys.stderr,
                    )
                    return 1
            references = [[column[i] for column in ref_columns] for i in range(len(sources))]
        scorer = CandidateScorer(config)
        score_file(
            scorer,
            sources,
            references,
            args.out,
            with_embeddings=args.embed,
            progress=not args.quiet,
        )
    except ScorerError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
