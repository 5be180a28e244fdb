from dataclasses import dataclass
from pathlib import Path

import numpy as np
from hypothesis import strategies as st
from hypothesis.extra import numpy as npst

from embalign.core import AlignmentSet, SimilarityMatrix
from embalign.fileio import EmbeddingCorpus, SentenceEmbedding, write_embeddings

UNIT_PROBS = st.floats(0.0, 1.0, allow_nan=False, allow_infinity=False)


def sim_matrices(max_side: int = 6):
    """Similarity matrices with entries in [0, 1]."""
    return st.tuples(
        st.integers(1, max_side), st.integers(1, max_side)
    ).flatmap(
        lambda shape: npst.arrays(np.float64, shape, elements=UNIT_PROBS)
    ).map(SimilarityMatrix)


def tie_free_sim_matrices(max_side: int = 5):
    """Similarity matrices whose entries are pairwise distinct."""
    return st.tuples(
        st.integers(1, max_side), st.integers(1, max_side)
    ).flatmap(
        lambda shape: npst.arrays(
            np.float64, shape, elements=st.floats(0.01, 0.99), unique=True
        )
    ).map(SimilarityMatrix)


def embedding_arrays(max_rows: int = 5, max_dim: int = 4):
    return st.tuples(
        st.integers(1, max_rows), st.integers(1, max_dim)
    ).flatmap(
        lambda shape: npst.arrays(
            np.float64, shape, elements=st.floats(-3.0, 3.0, allow_nan=False)
        )
    )


def random_sim(rng: np.random.Generator, l_e: int, l_f: int) -> SimilarityMatrix:
    return SimilarityMatrix(rng.uniform(0.0, 1.0, size=(l_e, l_f)))


def edge_sets(max_side: int = 5):
    """(AlignmentSet, AlignmentSet) pairs over a shared grid."""

    def build(shape):
        le, lf = shape
        cells = st.frozensets(
            st.tuples(st.integers(0, le - 1), st.integers(0, lf - 1))
        )
        return st.tuples(cells, cells).map(
            lambda fb: (
                AlignmentSet(fb[0], le, lf),
                AlignmentSet(fb[1], le, lf),
            )
        )

    return st.tuples(st.integers(1, max_side), st.integers(1, max_side)).flatmap(build)




@dataclass
class FixtureCorpus:
    src_emb: Path
    tgt_emb: Path
    gold: Path
    n_pairs: int
    level: str


def _random_spans(gen, n_tok):
    spans, cursor = [], 0
    while cursor < n_tok:
        width = int(gen.integers(1, min(3, n_tok - cursor) + 1))
        spans.append((cursor, cursor + width))
        cursor += width
    return tuple(spans)


def build_fixture_corpus(
    directory, seed=1234, n_pairs=10, dim=6, level="word"
) -> FixtureCorpus:
    """Deterministic synthetic corpus: source vectors are noisy copies of a
    permutation of the target vectors, and the permutation is the gold."""
    directory = Path(directory)
    directory.mkdir(parents=True, exist_ok=True)
    gen = np.random.default_rng(seed)
    src_sents, tgt_sents, gold_lines = [], [], []
    for k in range(n_pairs):
        l_f = int(gen.integers(2, 8))
        l_e = int(gen.integers(2, l_f + 1))
        tgt = gen.normal(size=(l_f, dim))
        perm = gen.permutation(l_f)[:l_e]
        src = tgt[perm] + gen.normal(scale=0.25, size=(l_e, dim))
        src_spans = _random_spans(gen, l_e) if level == "subword" else None
        tgt_spans = _random_spans(gen, l_f) if level == "subword" else None
        src_sents.append(
            SentenceEmbedding(
                f"pair{k}",
                tuple(f"s{t}" for t in range(l_e)),
                src.astype(np.float32),
                src_spans,
            )
        )
        tgt_sents.append(
            SentenceEmbedding(
                f"pair{k}",
                tuple(f"t{t}" for t in range(l_f)),
                tgt.astype(np.float32),
                tgt_spans,
            )
        )
        if level == "subword":
            # gold is word-level: map each subword edge through its span
            src_word = {i: w for w, (a, b) in enumerate(src_spans) for i in range(a, b)}
            tgt_word = {j: w for w, (a, b) in enumerate(tgt_spans) for j in range(a, b)}
            edges = sorted({(src_word[i], tgt_word[int(perm[i])]) for i in range(l_e)})
        else:
            edges = sorted((i, int(perm[i])) for i in range(l_e))
        items = [f"{i + 1}-{j + 1}" for i, j in edges]
        if k % 3 == 0 and len(edges) > 1:
            i, j = edges[-1]
            items[-1] = f"{i + 1}p{j + 1}"  # demote one edge to possible-only
        gold_lines.append(" ".join(items))
    src_path = directory / f"src.{level}.emb"
    tgt_path = directory / f"tgt.{level}.emb"
    gold_path = directory / f"gold.{level}.wa"
    write_embeddings(src_path, EmbeddingCorpus(dim, level, tuple(src_sents)))
    write_embeddings(tgt_path, EmbeddingCorpus(dim, level, tuple(tgt_sents)))
    gold_path.write_text("\n".join(gold_lines) + "\n", encoding="utf-8")
    return FixtureCorpus(src_path, tgt_path, gold_path, n_pairs, level)
