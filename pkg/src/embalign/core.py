"""Domain types and similarity-matrix construction.

Similarity here is cosine similarity rescaled to [0, 1] via (cos + 1) / 2,
so orthogonal vectors land at 0.5 and antipodal vectors at 0.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Sequence

import numpy as np

Edge = tuple[int, int]
Span = tuple[int, int]

METHODS = ("argmax", "itermax", "match")
LEVELS = ("word", "subword")


def validate_spans(spans: Sequence[Span], token_count: int) -> tuple[Span, ...]:
    """Check that spans are sorted, disjoint, non-empty half-open ranges
    covering exactly [0, token_count). Returns them as a tuple."""
    out = []
    cursor = 0
    for w, span in enumerate(spans):
        start, end = int(span[0]), int(span[1])
        if end <= start:
            raise ValueError(f"span {w}: empty or inverted range ({start}, {end})")
        if start != cursor:
            kind = "overlap" if start < cursor else "coverage gap"
            raise ValueError(f"span {w}: {kind} at subword index {min(start, cursor)}")
        cursor = end
        out.append((start, end))
    if cursor != token_count:
        raise ValueError(
            f"spans cover [0, {cursor}) but there are {token_count} tokens"
        )
    return tuple(out)


@dataclass(frozen=True)
class TokenizedSentencePair:
    """A tokenized source/target sentence pair.

    When word spans are present the token sequences are subword tokens and
    each span gives the half-open subword range of one word.
    """

    src_tokens: tuple[str, ...]
    tgt_tokens: tuple[str, ...]
    src_word_spans: tuple[Span, ...] | None = None
    tgt_word_spans: tuple[Span, ...] | None = None
    pair_id: str = ""

    def __post_init__(self):
        object.__setattr__(self, "src_tokens", tuple(self.src_tokens))
        object.__setattr__(self, "tgt_tokens", tuple(self.tgt_tokens))
        if not self.src_tokens or not self.tgt_tokens:
            raise ValueError(f"pair {self.pair_id!r}: empty token sequence")
        for name, spans, n_tok in (
            ("src", self.src_word_spans, len(self.src_tokens)),
            ("tgt", self.tgt_word_spans, len(self.tgt_tokens)),
        ):
            if spans is not None:
                try:
                    object.__setattr__(self, f"{name}_word_spans", validate_spans(spans, n_tok))
                except ValueError as err:
                    raise ValueError(f"pair {self.pair_id!r} ({name}): {err}") from None


def _frozen_array(values, dtype=float) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class EmbeddingMatrix:
    """l x d matrix of token vectors, one row per token."""

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-d matrix, got shape {arr.shape}")
        if arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"degenerate embedding matrix of shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("embedding matrix contains non-finite values")
        object.__setattr__(self, "values", arr)

    @property
    def rows(self) -> int:
        return self.values.shape[0]

    @property
    def dim(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class SimilarityMatrix:
    """l_e x l_f matrix with entries in [0, 1]."""

    values: np.ndarray

    def __post_init__(self):
        arr = _frozen_array(self.values)
        if arr.ndim != 2 or arr.shape[0] < 1 or arr.shape[1] < 1:
            raise ValueError(f"similarity matrix must be 2-d and non-empty, got {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise ValueError("similarity matrix contains non-finite values")
        if arr.min() < 0.0 or arr.max() > 1.0:
            raise ValueError("similarity entries must lie in [0, 1]")
        object.__setattr__(self, "values", arr)

    @property
    def shape(self) -> tuple[int, int]:
        return self.values.shape  # type: ignore[return-value]


@dataclass(frozen=True)
class AlignmentSet:
    """A set of (source index, target index) alignment edges."""

    edges: frozenset[Edge]
    src_len: int
    tgt_len: int

    def __post_init__(self):
        object.__setattr__(
            self, "edges", frozenset((int(i), int(j)) for i, j in self.edges)
        )
        if self.src_len < 0 or self.tgt_len < 0:
            raise ValueError("negative sentence length")
        for i, j in self.edges:
            if not (0 <= i < self.src_len and 0 <= j < self.tgt_len):
                raise ValueError(
                    f"edge ({i}, {j}) outside {self.src_len} x {self.tgt_len}"
                )

    def sorted_edges(self) -> list[Edge]:
        return sorted(self.edges)

    def transpose(self) -> "AlignmentSet":
        return AlignmentSet(
            frozenset((j, i) for i, j in self.edges), self.tgt_len, self.src_len
        )

    def to_matrix(self) -> np.ndarray:
        mat = np.zeros((self.src_len, self.tgt_len), dtype=bool)
        for i, j in self.edges:
            mat[i, j] = True
        return mat

    def __len__(self) -> int:
        return len(self.edges)


@dataclass(frozen=True)
class ExtractionConfig:
    """Configuration for alignment extraction.

    Defaults: 2 Itermax iterations with discount 0.9, distortion weight 0.5
    and the 95th entropy percentile for the null filter (both extensions off
    unless enabled).
    """

    method: str = "argmax"
    n_max: int = 2
    alpha: float = 0.9
    kappa: float = 0.5
    dist_enabled: bool = False
    null_enabled: bool = False
    null_percentile: float = 95.0

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"unknown method {self.method!r}, expected one of {METHODS}")
        if self.n_max < 1:
            raise ValueError("n_max must be a positive integer")
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError("alpha must lie in [0, 1]")
        if not 0.0 <= self.kappa <= 1.0:
            raise ValueError("kappa must lie in [0, 1]")
        if not 0.0 < self.null_percentile <= 100.0:
            raise ValueError("null_percentile must lie in (0, 100]")


def cosine_similarity_matrix(src: EmbeddingMatrix, tgt: EmbeddingMatrix) -> SimilarityMatrix:
    """Pairwise similarity (cos + 1) / 2 between source and target rows.

    Zero-norm rows get similarity 0 against everything (a warning is issued);
    results are clamped to [0, 1] against floating-point rounding.
    """
    if src.dim != tgt.dim:
        raise ValueError(f"dimension mismatch: source d={src.dim}, target d={tgt.dim}")
    src_norm = np.linalg.norm(src.values, axis=1)
    tgt_norm = np.linalg.norm(tgt.values, axis=1)
    src_zero = src_norm == 0.0
    tgt_zero = tgt_norm == 0.0
    if src_zero.any() or tgt_zero.any():
        rows = [f"source row {i}" for i in np.flatnonzero(src_zero)]
        rows += [f"target row {j}" for j in np.flatnonzero(tgt_zero)]
        warnings.warn(
            "zero-norm embedding rows treated as similarity 0: " + ", ".join(rows)
        )
    src_unit = src.values / np.where(src_zero, 1.0, src_norm)[:, None]
    tgt_unit = tgt.values / np.where(tgt_zero, 1.0, tgt_norm)[:, None]
    sim = (src_unit @ tgt_unit.T + 1.0) / 2.0
    sim[src_zero, :] = 0.0
    sim[:, tgt_zero] = 0.0
    return SimilarityMatrix(np.clip(sim, 0.0, 1.0))


def apply_distortion(sim: SimilarityMatrix, kappa: float) -> SimilarityMatrix:
    """Scale similarities by a positional prior in [1 - kappa, 1].

    Entry (i, j) is multiplied by 1 - kappa * ((i+1)/l_e - (j+1)/l_f)^2 with
    1-based positions, so tokens at equal relative positions are untouched.
    """
    if not 0.0 <= kappa <= 1.0:
        raise ValueError("kappa must lie in [0, 1]")
    l_e, l_f = sim.shape
    src_pos = np.arange(1, l_e + 1) / l_e
    tgt_pos = np.arange(1, l_f + 1) / l_f
    prior = 1.0 - kappa * (src_pos[:, None] - tgt_pos[None, :]) ** 2
    return SimilarityMatrix(sim.values * prior)


def pool_subword_to_word(emb: EmbeddingMatrix, spans: Sequence[Span]) -> EmbeddingMatrix:
    """Average the rows of each word's subword span into one word vector."""
    spans = validate_spans(spans, emb.rows)
    pooled = np.vstack([emb.values[start:end].mean(axis=0) for start, end in spans])
    return EmbeddingMatrix(pooled)
