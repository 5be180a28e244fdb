#!/usr/bin/env python3
"""Generate a synthetic aligned corpus for demos and pipeline checks.

Source word vectors are noisy copies of a permutation of the target word
vectors, so the permutation serves as a gold standard the extractors can
realistically recover. The subword corpus views the same sentences at a
finer granularity: words split into 1-3 pieces whose vectors scatter around
the word vector. Writes into --out-dir:

  src.word.emb / tgt.word.emb       word-level embedding files
  src.subword.emb / tgt.subword.emb subword-level files with span maps
  gold.wa                           shared 1-based word-level gold
  src.txt / tgt.txt                 tokenized sentences
  src.tags / tgt.tags               per-token tags
  freq.tsv                          word frequency table
"""
import argparse
from pathlib import Path

import numpy as np

from embalign.fileio import EmbeddingCorpus, SentenceEmbedding, write_embeddings

TAGS = ("NOUN", "VERB", "ADJ", "ADP")


def split_into_pieces(gen, tokens, vectors, scatter):
    """Subword view of one sentence: each word becomes 1-3 pieces."""
    piece_tokens, piece_rows, spans = [], [], []
    cursor = 0
    for token, vector in zip(tokens, vectors):
        n_pieces = int(gen.integers(1, 4))
        for p in range(n_pieces):
            piece_tokens.append(token if p == 0 else f"##{token}{p}")
            piece_rows.append(vector + gen.normal(scale=scatter, size=vector.shape))
        spans.append((cursor, cursor + n_pieces))
        cursor += n_pieces
    return tuple(piece_tokens), np.vstack(piece_rows), tuple(spans)


def build(out_dir: Path, seed: int, n_pairs: int, dim: int, noise: float):
    gen = np.random.default_rng(seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    word = {"src": [], "tgt": []}
    sub = {"src": [], "tgt": []}
    gold_lines, text = [], {"src": [], "tgt": []}
    tags = {"src": [], "tgt": []}
    for k in range(n_pairs):
        l_f = int(gen.integers(3, 10))
        l_e = int(gen.integers(2, l_f + 1))
        tgt_vecs = gen.normal(size=(l_f, dim))
        perm = gen.permutation(l_f)[:l_e]
        src_vecs = tgt_vecs[perm] + gen.normal(scale=noise, size=(l_e, dim))
        tokens = {
            "src": tuple(f"src{k}w{t}" for t in range(l_e)),
            "tgt": tuple(f"tgt{k}w{t}" for t in range(l_f)),
        }
        vecs = {"src": src_vecs, "tgt": tgt_vecs}
        for side in ("src", "tgt"):
            word[side].append(
                SentenceEmbedding(f"pair{k}", tokens[side], vecs[side].astype(np.float32))
            )
            p_tokens, p_rows, spans = split_into_pieces(gen, tokens[side], vecs[side], noise / 2)
            sub[side].append(
                SentenceEmbedding(f"pair{k}", p_tokens, p_rows.astype(np.float32), spans)
            )
            text[side].append(" ".join(tokens[side]))
            tags[side].append(" ".join(gen.choice(TAGS) for _ in tokens[side]))
        gold_lines.append(
            " ".join(f"{i + 1}-{int(j) + 1}" for i, j in enumerate(perm))
        )
    for side in ("src", "tgt"):
        write_embeddings(out_dir / f"{side}.word.emb", EmbeddingCorpus(dim, "word", tuple(word[side])))
        write_embeddings(out_dir / f"{side}.subword.emb", EmbeddingCorpus(dim, "subword", tuple(sub[side])))
        (out_dir / f"{side}.txt").write_text("\n".join(text[side]) + "\n", encoding="utf-8")
        (out_dir / f"{side}.tags").write_text("\n".join(tags[side]) + "\n", encoding="utf-8")
    (out_dir / "gold.wa").write_text("\n".join(gold_lines) + "\n", encoding="utf-8")
    counts = {}
    for line in text["src"] + text["tgt"]:
        for token in line.split():
            counts[token] = counts.get(token, 0) + int(gen.integers(1, 500))
    (out_dir / "freq.tsv").write_text(
        "\n".join(f"{w} {c}" for w, c in sorted(counts.items())) + "\n", encoding="utf-8"
    )
    print(f"wrote fixture corpus ({n_pairs} pairs, dim {dim}) to {out_dir}")


def main():
    parser = argparse.ArgumentParser(
        description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter
    )
    parser.add_argument("--out-dir", type=Path, required=True)
    parser.add_argument("--seed", type=int, default=7)
    parser.add_argument("--pairs", type=int, default=50)
    parser.add_argument("--dim", type=int, default=16)
    parser.add_argument("--noise", type=float, default=0.3)
    args = parser.parse_args()
    build(args.out_dir, args.seed, args.pairs, args.dim, args.noise)


if __name__ == "__main__":
    main()
