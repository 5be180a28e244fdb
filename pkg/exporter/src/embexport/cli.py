"""Exporter CLI: contextual hidden states or static vector lookups.

Input corpora are tokenized text files, one sentence per line; line numbers
become sentence ids. Output is always the canonical binary embedding file.
"""
from __future__ import annotations

import argparse
import sys


def read_sentences(path) -> list[tuple[str, list[str]]]:
    out = []
    with open(path, "r", encoding="utf-8") as fh:
        for number, line in enumerate(fh):
            words = line.split()
            if not words:
                raise ValueError(f"{path}: line {number + 1}: empty sentence")
            out.append((str(number), words))
    return out


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embexport", description="Produce embedding files from pretrained models."
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_ctx = sub.add_parser("contextual", help="per-layer hidden states of a transformer")
    p_ctx.add_argument("--model", required=True, help="model id or local path")
    p_ctx.add_argument("--input", required=True, help="tokenized text, one sentence per line")
    p_ctx.add_argument("--out", required=True)
    p_ctx.add_argument("--layer", type=int, default=8,
                       help="hidden layer; 0 is the embedding layer output")
    p_ctx.add_argument("--level", choices=("word", "subword"), default="word")
    p_ctx.add_argument("--concat", action="store_true",
                       help="concatenate all layers instead of selecting one")
    p_ctx.add_argument("--max-len", type=int, default=128)
    p_ctx.add_argument("--batch-size", type=int, default=16)

    p_static = sub.add_parser("static", help="word-level lookup in a vector table")
    p_static.add_argument("--vectors", required=True, help="text vector table")
    p_static.add_argument("--input", required=True)
    p_static.add_argument("--out", required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        sentences = read_sentences(args.input)
        if args.verb == "contextual":
            from .contextual import ContextualExportConfig, export_contextual_file

            cfg = ContextualExportConfig(
                model_id=args.model,
                layer=args.layer,
                level=args.level,
                concat=args.concat,
                max_len=args.max_len,
                batch_size=args.batch_size,
            )
            dim, count = export_contextual_file(args.out, sentences, cfg)
        else:
            from .static import export_static_file

            dim, count = export_static_file(args.out, sentences, args.vectors)
        print(f"wrote {count} sentences (dim {dim}) to {args.out}")
        return 0
    except (ValueError, OSError) as err:
        print(f"embexport {args.verb}: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
