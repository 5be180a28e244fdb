#!/usr/bin/env python3
"""Layer curve: export embeddings at every requested layer and score each.

Needs the exporter package (exporter/ in this repository) plus a local or
downloadable contextual model. Typical F1-vs-layer curves peak in the upper
middle layers and fall off at both ends.

  python scripts/run_layer_sweep.py --model /path/to/mbert \
      --src-text eng.txt --tgt-text deu.txt --gold gold.wa \
      --layers 0,1,...,12 --work-dir /tmp/layers --out layer_curve.csv
"""
import argparse
import subprocess
import sys
from pathlib import Path

from embalign.core import ExtractionConfig
from embalign.runner import sweep, write_sweep_csv


def export(model, text, layer, level, out, max_len):
    cmd = [
        sys.executable, "-m", "embexport.cli", "contextual",
        "--model", str(model), "--input", str(text), "--layer", str(layer),
        "--level", level, "--max-len", str(max_len), "--out", str(out),
    ]
    subprocess.run(cmd, check=True)


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--model", required=True, help="model id or local path")
    parser.add_argument("--src-text", required=True, help="tokenized sentences, one per line")
    parser.add_argument("--tgt-text", required=True)
    parser.add_argument("--gold", required=True)
    parser.add_argument("--gold-base", type=int, choices=(0, 1), default=1)
    parser.add_argument("--layers", default=",".join(str(k) for k in range(13)))
    parser.add_argument("--level", choices=("word", "subword"), default="subword")
    parser.add_argument("--max-len", type=int, default=128)
    parser.add_argument("--method", choices=("argmax", "itermax", "match"), default="argmax")
    parser.add_argument("--work-dir", type=Path, required=True)
    parser.add_argument("--out", required=True, help="layer curve CSV")
    args = parser.parse_args()

    layers = [int(k) for k in args.layers.split(",")]
    args.work_dir.mkdir(parents=True, exist_ok=True)
    for layer in layers:
        export(args.model, args.src_text, layer, args.level,
               args.work_dir / f"src.layer{layer}.emb", args.max_len)
        export(args.model, args.tgt_text, layer, args.level,
               args.work_dir / f"tgt.layer{layer}.emb", args.max_len)

    rows = sweep(
        "layer",
        layers,
        str(args.work_dir / "src.layer{layer}.emb"),
        str(args.work_dir / "tgt.layer{layer}.emb"),
        ExtractionConfig(method=args.method),
        args.gold,
        args.gold_base,
    )
    write_sweep_csv(args.out, "layer", rows)
    for layer, report in rows:
        print(f"layer {layer:2d}: f1={report.f1:.3f} aer={report.aer:.3f}")


if __name__ == "__main__":
    main()
