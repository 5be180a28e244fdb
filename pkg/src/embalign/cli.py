"""Command-line interface.

Verbs: align, score, symmetrize, sweep, bins. All configuration is passed
via flags; no environment variables are consulted.
"""
from __future__ import annotations

import argparse
import sys

from .core import ExtractionConfig
from .evaluate import corpus_score
from .fileio import (
    alignment_sets_from_edges,
    paired_alignment_sets,
    read_alignments,
    read_gold,
    write_alignments,
)
from .runner import (
    SWEEP_PARAMS,
    run_corpus,
    run_frequency_bins,
    run_tag_bins,
    sweep,
    write_bins_csv,
    write_score_csv,
    write_sweep_csv,
)
from .symmetrize import grow_diag_final_and, intersect


def _add_config_flags(parser: argparse.ArgumentParser):
    parser.add_argument("--method", choices=("argmax", "itermax", "match"), default="argmax")
    parser.add_argument("--n-max", type=int, default=2, help="itermax iterations")
    parser.add_argument("--alpha", type=float, default=0.9, help="itermax discount factor")
    parser.add_argument("--dist", action="store_true", help="enable the distortion prior")
    parser.add_argument("--kappa", type=float, default=0.5, help="distortion weight")
    parser.add_argument("--null", action="store_true", help="enable the null entropy filter")
    parser.add_argument("--null-percentile", type=float, default=95.0)


def _config(args) -> ExtractionConfig:
    return ExtractionConfig(
        method=args.method,
        n_max=args.n_max,
        alpha=args.alpha,
        kappa=args.kappa,
        dist_enabled=args.dist,
        null_enabled=args.null,
        null_percentile=args.null_percentile,
    )


def _parse_values(param: str, text: str) -> list:
    cast = int if param in ("n_max", "layer") else float
    try:
        return [cast(item) for item in text.split(",") if item != ""]
    except ValueError:
        raise ValueError(f"bad --values list {text!r} for parameter {param}") from None


def _parse_bounds(text: str) -> list[tuple[float, float]]:
    bounds = []
    for item in text.split(","):
        parts = item.split(":")
        if len(parts) != 2:
            raise ValueError(f"bad bin {item!r}, expected lower:upper")
        bounds.append((float(parts[0]), float(parts[1])))
    return bounds


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="embalign",
        description="Extract, symmetrize and evaluate word alignments from embedding files.",
    )
    sub = parser.add_subparsers(dest="verb", required=True)

    p_align = sub.add_parser("align", help="align a corpus of embedding files")
    p_align.add_argument("--src-emb", required=True)
    p_align.add_argument("--tgt-emb", required=True)
    p_align.add_argument("--out", required=True, help="output Pharaoh alignment file")
    _add_config_flags(p_align)
    p_align.add_argument("--level", choices=("word", "subword"), default="word",
                         help="output level; subword inputs are converted to word by default")
    p_align.add_argument("--gold", help="gold file for scoring the run")
    p_align.add_argument("--gold-base", type=int, choices=(0, 1), default=1)
    p_align.add_argument("--report", help="score CSV path (requires --gold)")
    p_align.add_argument("--workers", type=int, default=1)

    p_score = sub.add_parser("score", help="score a Pharaoh alignment file against gold")
    p_score.add_argument("--hyp", required=True, help="0-based Pharaoh hypothesis file")
    p_score.add_argument("--gold", required=True)
    p_score.add_argument("--gold-base", type=int, choices=(0, 1), default=1)
    p_score.add_argument("--out", help="score CSV path (default: print to stdout)")

    p_sym = sub.add_parser("symmetrize", help="combine forward and backward alignments")
    p_sym.add_argument("--fwd", required=True)
    p_sym.add_argument("--bwd", required=True)
    p_sym.add_argument("--mode", choices=("intersect", "gdfa"), default="gdfa")
    p_sym.add_argument("--swap-bwd", action="store_true",
                       help="backward file is target-source and must be transposed")
    p_sym.add_argument("--out", required=True)

    p_sweep = sub.add_parser("sweep", help="score the corpus across one parameter axis")
    p_sweep.add_argument("--param", choices=SWEEP_PARAMS, required=True)
    p_sweep.add_argument("--values", required=True, help="comma-separated axis values")
    p_sweep.add_argument("--src-emb", required=True,
                         help="embedding path; a {layer} template for layer sweeps")
    p_sweep.add_argument("--tgt-emb", required=True)
    _add_config_flags(p_sweep)
    p_sweep.add_argument("--level", choices=("word", "subword"), default="word")
    p_sweep.add_argument("--gold", required=True)
    p_sweep.add_argument("--gold-base", type=int, choices=(0, 1), default=1)
    p_sweep.add_argument("--out", required=True, help="sweep CSV path")
    p_sweep.add_argument("--workers", type=int, default=1)

    p_bins = sub.add_parser("bins", help="per-frequency-bin or per-tag score tables")
    p_bins.add_argument("--kind", choices=("freq", "tag"), required=True)
    p_bins.add_argument("--hyp", required=True, help="0-based Pharaoh hypothesis file")
    p_bins.add_argument("--gold", required=True)
    p_bins.add_argument("--gold-base", type=int, choices=(0, 1), default=1)
    p_bins.add_argument("--src-text", help="tokenized source text (freq bins)")
    p_bins.add_argument("--tgt-text", help="tokenized target text (freq bins)")
    p_bins.add_argument("--freq-table", help="'word count' lines (freq bins)")
    p_bins.add_argument("--bounds", help="e.g. 0:10,10:100,100:inf (freq bins)")
    p_bins.add_argument("--src-tags", help="per-token tags, one line per sentence (tag bins)")
    p_bins.add_argument("--tgt-tags", help="per-token tags (tag bins)")
    p_bins.add_argument("--out", required=True, help="bins CSV path")
    return parser


def _cmd_align(args) -> int:
    if args.report and not args.gold:
        raise ValueError("--report requires --gold")
    if args.gold and args.level == "subword":
        raise ValueError("gold standards are word-level; drop --gold or use --level word")
    report = run_corpus(
        args.src_emb,
        args.tgt_emb,
        _config(args),
        args.out,
        gold_path=args.gold,
        gold_base=args.gold_base,
        report_path=args.report,
        workers=args.workers,
        output_level=args.level,
    )
    if report is not None:
        print(
            f"precision={report.precision:.4f} recall={report.recall:.4f} "
            f"f1={report.f1:.4f} aer={report.aer:.4f}"
        )
    return 0


def _cmd_score(args) -> int:
    hyp = alignment_sets_from_edges(read_alignments(args.hyp, base=0))
    golds = read_gold(args.gold, args.gold_base)
    if len(hyp) != len(golds):
        raise ValueError(f"hypothesis has {len(hyp)} lines but gold has {len(golds)}")
    ids = [str(k) for k in range(len(hyp))]
    report = corpus_score(dict(zip(ids, hyp)), dict(zip(ids, golds)))
    if args.out:
        write_score_csv(args.out, [({}, report)])
    print(
        f"precision={report.precision:.4f} recall={report.recall:.4f} "
        f"f1={report.f1:.4f} aer={report.aer:.4f}"
    )
    return 0


def _cmd_symmetrize(args) -> int:
    fwd_edges = read_alignments(args.fwd, base=0)
    bwd_edges = read_alignments(args.bwd, base=0)
    if args.swap_bwd:
        bwd_edges = [frozenset((j, i) for i, j in edges) for edges in bwd_edges]
    combine = intersect if args.mode == "intersect" else grow_diag_final_and
    out = [combine(fwd, bwd) for fwd, bwd in paired_alignment_sets(fwd_edges, bwd_edges)]
    write_alignments(out, args.out)
    return 0


def _cmd_sweep(args) -> int:
    rows = sweep(
        args.param,
        _parse_values(args.param, args.values),
        args.src_emb,
        args.tgt_emb,
        _config(args),
        args.gold,
        gold_base=args.gold_base,
        workers=args.workers,
        output_level=args.level,
    )
    write_sweep_csv(args.out, args.param, rows)
    return 0


def _cmd_bins(args) -> int:
    if args.kind == "freq":
        needed = ("src_text", "tgt_text", "freq_table", "bounds")
        missing = [name for name in needed if getattr(args, name) is None]
        if missing:
            raise ValueError("freq bins require " + ", ".join("--" + m.replace("_", "-") for m in missing))
        reports = run_frequency_bins(
            args.hyp,
            args.gold,
            args.gold_base,
            args.src_text,
            args.tgt_text,
            args.freq_table,
            _parse_bounds(args.bounds),
        )
    else:
        if args.src_tags is None or args.tgt_tags is None:
            raise ValueError("tag bins require --src-tags and --tgt-tags")
        reports = run_tag_bins(args.hyp, args.gold, args.gold_base, args.src_tags, args.tgt_tags)
    write_bins_csv(args.out, args.kind, reports)
    return 0


_COMMANDS = {
    "align": _cmd_align,
    "score": _cmd_score,
    "symmetrize": _cmd_symmetrize,
    "sweep": _cmd_sweep,
    "bins": _cmd_bins,
}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return _COMMANDS[args.verb](args)
    except (ValueError, OSError) as err:
        print(f"embalign {args.verb}: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
