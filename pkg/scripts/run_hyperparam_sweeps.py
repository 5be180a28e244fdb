#!/usr/bin/env python3
"""Run the standard hyperparameter sweeps on one corpus and emit CSVs.

Produces four tables in --out-dir:
  itermax_grid.csv   n_max x alpha grid (the iteration/discount trade-off)
  kappa_curve.csv    distortion weight sweep, kappa 0.0 .. 1.0
  tau_curve.csv      null filter percentile sweep
  methods.csv        argmax vs itermax vs match, with and without extensions
"""
import argparse
from pathlib import Path

from embalign.core import ExtractionConfig
from embalign.runner import load_corpus, corpus_alignments, golds_by_id, sweep, write_score_csv, write_sweep_csv
from embalign.evaluate import corpus_score


def method_table(args, out_path):
    level, pairs = load_corpus(args.src_emb, args.tgt_emb)
    rows = []
    for method in ("argmax", "itermax", "match"):
        for variant, extra in (
            ("plain", {}),
            ("dist", {"dist_enabled": True}),
            ("null", {"null_enabled": True}),
        ):
            cfg = ExtractionConfig(method=method, **extra)
            aligned = corpus_alignments(pairs, level, cfg, workers=args.workers)
            golds = golds_by_id(args.gold, args.gold_base, list(aligned))
            rows.append(({"method": method, "variant": variant}, corpus_score(aligned, golds)))
    write_score_csv(out_path, rows)


def itermax_grid(args, out_path):
    level, pairs = load_corpus(args.src_emb, args.tgt_emb)
    golds = None
    rows = []
    for n_max in (1, 2, 3):
        for alpha in (0.9, 0.95, 1.0):
            cfg = ExtractionConfig(method="itermax", n_max=n_max, alpha=alpha)
            aligned = corpus_alignments(pairs, level, cfg, workers=args.workers)
            if golds is None:
                golds = golds_by_id(args.gold, args.gold_base, list(aligned))
            rows.append(({"n_max": n_max, "alpha": alpha}, corpus_score(aligned, golds)))
            if n_max == 1:
                break  # alpha has no effect in the first iteration
    write_score_csv(out_path, rows)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--src-emb", required=True)
    parser.add_argument("--tgt-emb", required=True)
    parser.add_argument("--gold", required=True)
    parser.add_argument("--gold-base", type=int, choices=(0, 1), default=1)
    parser.add_argument("--out-dir", type=Path, required=True)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)

    itermax_grid(args, args.out_dir / "itermax_grid.csv")
    method_table(args, args.out_dir / "methods.csv")
    kappas = [k / 10 for k in range(11)]
    write_sweep_csv(
        args.out_dir / "kappa_curve.csv",
        "kappa",
        sweep("kappa", kappas, args.src_emb, args.tgt_emb, ExtractionConfig(),
              args.gold, args.gold_base, args.workers),
    )
    percentiles = [80.0, 90.0, 95.0, 98.0, 99.0, 99.5, 100.0]
    write_sweep_csv(
        args.out_dir / "tau_curve.csv",
        "null_percentile",
        sweep("null_percentile", percentiles, args.src_emb, args.tgt_emb,
              ExtractionConfig(), args.gold, args.gold_base, args.workers),
    )
    print(f"wrote itermax_grid.csv, methods.csv, kappa_curve.csv, tau_curve.csv to {args.out_dir}")


if __name__ == "__main__":
    main()
