"""Alignment extraction from similarity matrices.

Three extractors: mutual-argmax, its iterated variant with a discount on
half-aligned pairs, and a maximum-weight maximal matching. A corpus-level
entropy filter removes edges whose similarity distribution is too flat.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import AlignmentSet, Edge, ExtractionConfig, SimilarityMatrix, apply_distortion


@dataclass(frozen=True)
class PairAlignmentRecord:
    """Alignment of one sentence pair plus the per-edge entropy statistic."""

    pair_id: str
    alignment: AlignmentSet
    edge_entropy: Mapping[Edge, float]

    def __post_init__(self):
        object.__setattr__(self, "edge_entropy", dict(self.edge_entropy))
        missing = self.alignment.edges - self.edge_entropy.keys()
        if missing:
            raise ValueError(
                f"pair {self.pair_id!r}: missing entropy statistic for {sorted(missing)}"
            )


@dataclass(frozen=True)
class CorpusAlignmentRun:
    """Per-pair alignment records for a whole corpus, in corpus order."""

    records: tuple[PairAlignmentRecord, ...]

    def __post_init__(self):
        object.__setattr__(self, "records", tuple(self.records))
        ids = [r.pair_id for r in self.records]
        if len(set(ids)) != len(ids):
            raise ValueError("duplicate pair ids in corpus run")

    def __len__(self) -> int:
        return len(self.records)

    def __iter__(self):
        return iter(self.records)

    def total_edges(self) -> int:
        return sum(len(r.alignment) for r in self.records)


def _argmax_matrix(sim: np.ndarray) -> np.ndarray:
    """Boolean matrix of mutual row/column argmaxes.

    Ties resolve to the smallest index in each directional scan (np.argmax).
    All-zero rows and columns never receive an edge; zeroed-out regions
    appear routinely in later itermax iterations.
    """
    l_e = sim.shape[0]
    row_best = sim.argmax(axis=1)
    col_best = sim.argmax(axis=0)
    rows = np.arange(l_e)
    mutual = col_best[row_best] == rows
    ok = mutual & (sim.max(axis=1) > 0.0) & (sim.max(axis=0)[row_best] > 0.0)
    out = np.zeros_like(sim, dtype=bool)
    out[rows[ok], row_best[ok]] = True
    return out


def _to_alignment(mat: np.ndarray) -> AlignmentSet:
    edges = frozenset((int(i), int(j)) for i, j in zip(*np.nonzero(mat)))
    return AlignmentSet(edges, mat.shape[0], mat.shape[1])


def argmax_align(sim: SimilarityMatrix) -> AlignmentSet:
    """Align (i, j) iff i is the argmax of column j and j the argmax of row i."""
    return _to_alignment(_argmax_matrix(sim.values))


def itermax_align(sim: SimilarityMatrix, n_max: int, alpha: float) -> AlignmentSet:
    """Iterated argmax extraction.

    Each iteration reweights the similarity matrix by the current alignment
    state: pairs with both tokens aligned are zeroed, pairs with neither
    aligned are kept, pairs with exactly one aligned token are discounted by
    alpha. New mutual argmaxes accumulate into the result, so one token may
    end up aligned to several others.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if not 0.0 <= alpha <= 1.0:
        raise ValueError("alpha must lie in [0, 1]")
    values = sim.values
    aligned = np.zeros(values.shape, dtype=bool)
    for _ in range(n_max):
        src_taken = aligned.any(axis=1)[:, None]
        tgt_taken = aligned.any(axis=0)[None, :]
        mask = np.where(
            src_taken & tgt_taken, 0.0, np.where(~src_taken & ~tgt_taken, 1.0, alpha)
        )
        aligned |= _argmax_matrix(values * mask)
    return _to_alignment(aligned)


def match_align(sim: SimilarityMatrix) -> AlignmentSet:
    """Maximum-weight maximal matching on the complete bipartite graph.

    Zero-weight edges are allowed, so the result always has min(l_e, l_f)
    edges; among equal-weight optima the solver's deterministic choice is
    returned.
    """
    row_ind, col_ind = linear_sum_assignment(sim.values, maximize=True)
    edges = frozenset((int(i), int(j)) for i, j in zip(row_ind, col_ind))
    return AlignmentSet(edges, sim.shape[0], sim.shape[1])


def _directional_entropies(sim: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Normalized entropy of each row and column similarity distribution.

    Entropy is divided by log(length); 0*log(0) counts as 0, a length-1
    direction or an all-zero distribution has entropy 0.
    """

    def normalized(mat: np.ndarray) -> np.ndarray:
        n = mat.shape[1]
        if n == 1:
            return np.zeros(mat.shape[0])
        sums = mat.sum(axis=1, keepdims=True)
        probs = np.divide(mat, sums, out=np.zeros_like(mat), where=sums > 0)
        plogp = np.zeros_like(probs)
        nz = probs > 0
        plogp[nz] = probs[nz] * np.log(probs[nz])
        return np.clip(-plogp.sum(axis=1) / math.log(n), 0.0, 1.0)

    return normalized(sim), normalized(sim.T)


def edge_entropies(sim: SimilarityMatrix, edges) -> dict[Edge, float]:
    """Per-edge statistic min(row entropy, column entropy) used by the filter."""
    h_row, h_col = _directional_entropies(sim.values)
    return {(i, j): float(min(h_row[i], h_col[j])) for i, j in edges}


def nearest_rank_percentile(values, percentile: float) -> float:
    """Nearest-rank percentile: the ceil(p/100 * n)-th smallest value."""
    if not 0.0 < percentile <= 100.0:
        raise ValueError("percentile must lie in (0, 100]")
    ordered = sorted(values)
    if not ordered:
        raise ValueError("percentile of an empty collection")
    rank = max(1, math.ceil(percentile * len(ordered) / 100.0))
    return ordered[rank - 1]


def null_filter(run: CorpusAlignmentRun, percentile: float) -> CorpusAlignmentRun:
    """Drop edges whose entropy statistic exceeds the corpus-wide percentile.

    The threshold is the nearest-rank percentile of the recorded per-edge
    statistics across all aligned edges of the corpus, so percentile 100
    removes nothing.
    """
    stats = [h for record in run for h in record.edge_entropy.values()]
    if not stats:
        raise ValueError("null filter needs at least one aligned edge corpus-wide")
    threshold = nearest_rank_percentile(stats, percentile)
    filtered = []
    for record in run:
        kept = frozenset(
            edge for edge in record.alignment.edges
            if record.edge_entropy[edge] <= threshold
        )
        filtered.append(
            PairAlignmentRecord(
                record.pair_id,
                AlignmentSet(kept, record.alignment.src_len, record.alignment.tgt_len),
                {e: record.edge_entropy[e] for e in kept},
            )
        )
    return CorpusAlignmentRun(tuple(filtered))


_EXTRACTORS = {
    "argmax": lambda sim, cfg: argmax_align(sim),
    "itermax": lambda sim, cfg: itermax_align(sim, cfg.n_max, cfg.alpha),
    "match": lambda sim, cfg: match_align(sim),
}


def align_pair(sim: SimilarityMatrix, cfg: ExtractionConfig) -> AlignmentSet:
    """Apply the distortion prior (when enabled) and the configured extractor.

    The null filter is corpus-level and is applied separately via
    null_filter once all pairs are aligned.
    """
    if cfg.dist_enabled:
        sim = apply_distortion(sim, cfg.kappa)
    return _EXTRACTORS[cfg.method](sim, cfg)


def align_pair_record(
    sim: SimilarityMatrix, cfg: ExtractionConfig, pair_id: str
) -> PairAlignmentRecord:
    """align_pair plus the per-edge entropy statistic for the corpus null pass.

    The statistic is computed on the matrix the extractor actually saw, i.e.
    after the distortion prior when that is enabled.
    """
    effective = apply_distortion(sim, cfg.kappa) if cfg.dist_enabled else sim
    alignment = _EXTRACTORS[cfg.method](effective, cfg)
    return PairAlignmentRecord(pair_id, alignment, edge_entropies(effective, alignment.edges))
