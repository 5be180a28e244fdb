"""Scoring of predicted alignments against sure/possible gold edges.

Corpus scores are micro-averaged: edge counts are summed over all sentence
pairs before the precision/recall/F1/AER ratios are taken.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Mapping, Sequence

from .core import AlignmentSet, Edge, TokenizedSentencePair

AVERAGING = "micro"


@dataclass(frozen=True)
class GoldAlignment:
    """Gold standard with sure edges and a superset of possible edges."""

    sure: frozenset[Edge]
    possible: frozenset[Edge]
    index_base: int = 0

    def __post_init__(self):
        object.__setattr__(self, "sure", frozenset(self.sure))
        # readers may supply possible-only edges; sure edges are always possible
        object.__setattr__(self, "possible", frozenset(self.possible) | self.sure)


@dataclass(frozen=True)
class ScoreReport:
    precision: float
    recall: float
    f1: float
    aer: float
    predicted: int
    sure: int
    predicted_and_sure: int
    predicted_and_possible: int

    @classmethod
    def from_counts(
        cls, predicted: int, sure: int, predicted_and_sure: int, predicted_and_possible: int
    ) -> "ScoreReport":
        prec = predicted_and_possible / predicted if predicted else 0.0
        rec = predicted_and_sure / sure if sure else 0.0
        f1 = 2.0 * prec * rec / (prec + rec) if prec + rec > 0 else 0.0
        denom = predicted + sure
        aer = 1.0 - (predicted_and_sure + predicted_and_possible) / denom if denom else 0.0
        return cls(prec, rec, f1, aer, predicted, sure, predicted_and_sure, predicted_and_possible)

    @property
    def empty(self) -> bool:
        return self.predicted == 0 and self.sure == 0


def _counts(alignment: frozenset[Edge], gold: GoldAlignment) -> tuple[int, int, int, int]:
    return (
        len(alignment),
        len(gold.sure),
        len(alignment & gold.sure),
        len(alignment & gold.possible),
    )


def score(alignment: AlignmentSet, gold: GoldAlignment) -> ScoreReport:
    """Precision against possible edges, recall against sure edges, F1, AER."""
    if not gold.sure:
        raise ValueError("gold standard must contain at least one sure edge")
    return ScoreReport.from_counts(*_counts(alignment.edges, gold))


def _check_ids(alignments: Mapping[str, AlignmentSet], golds: Mapping[str, GoldAlignment]):
    for pair_id in alignments:
        if pair_id not in golds:
            raise ValueError(f"missing gold alignment for pair {pair_id!r}")
    for pair_id in golds:
        if pair_id not in alignments:
            raise ValueError(f"missing predicted alignment for pair {pair_id!r}")


def corpus_score(
    alignments: Mapping[str, AlignmentSet], golds: Mapping[str, GoldAlignment]
) -> ScoreReport:
    """Micro-averaged corpus score: counts summed over pairs, then ratios."""
    _check_ids(alignments, golds)
    totals = [0, 0, 0, 0]
    for pair_id, alignment in alignments.items():
        for k, value in enumerate(_counts(alignment.edges, golds[pair_id])):
            totals[k] += value
    if totals[1] == 0:
        raise ValueError("gold standard must contain at least one sure edge")
    return ScoreReport.from_counts(*totals)


Bound = tuple[float, float]


def validate_bin_bounds(bounds: Sequence[Bound]) -> tuple[Bound, ...]:
    """Bins are half-open [lower, upper) ranges, sorted and non-overlapping."""
    if not bounds:
        raise ValueError("at least one frequency bin is required")
    checked = []
    previous_upper = -math.inf
    for lower, upper in bounds:
        lower, upper = float(lower), float(upper)
        if upper <= lower:
            raise ValueError(f"bin [{lower}, {upper}) is empty or inverted")
        if lower < previous_upper:
            raise ValueError(f"bin [{lower}, {upper}) overlaps or is out of order")
        previous_upper = upper
        checked.append((lower, upper))
    return tuple(checked)


def _bin_index(bounds: Sequence[Bound], value: float) -> int:
    for b, (lower, upper) in enumerate(bounds):
        if lower <= value < upper:
            return b
    raise ValueError(f"value {value} falls outside every bin")


@dataclass(frozen=True)
class BinReport:
    """Score restricted to one frequency bin or one tag."""

    label: str
    report: ScoreReport

    @property
    def empty(self) -> bool:
        return self.report.empty


def frequency_bin_scores(
    alignments: Mapping[str, AlignmentSet],
    golds: Mapping[str, GoldAlignment],
    pairs: Mapping[str, TokenizedSentencePair],
    frequencies: Mapping[str, int],
    bounds: Sequence[Bound],
) -> list[BinReport]:
    """Scores per frequency bin.

    Every edge of A, S and P is attributed to exactly one bin by the minimum
    corpus frequency of its two words; words missing from the table count as
    frequency 0.
    """
    bounds = validate_bin_bounds(bounds)
    _check_ids(alignments, golds)
    totals = [[0, 0, 0, 0] for _ in bounds]

    def freq_of(tokens: Sequence[str], index: int, pair_id: str, side: str) -> float:
        if index >= len(tokens):
            raise ValueError(
                f"pair {pair_id!r}: {side} index {index} outside sentence of length {len(tokens)}"
            )
        return float(frequencies.get(tokens[index], 0))

    for pair_id, alignment in alignments.items():
        pair = pairs[pair_id]
        gold = golds[pair_id]

        def edge_bin(edge: Edge) -> int:
            i, j = edge
            value = min(
                freq_of(pair.src_tokens, i, pair_id, "source"),
                freq_of(pair.tgt_tokens, j, pair_id, "target"),
            )
            return _bin_index(bounds, value)

        for edge in alignment.edges:
            totals[edge_bin(edge)][0] += 1
        for edge in gold.sure:
            totals[edge_bin(edge)][1] += 1
        for edge in alignment.edges & gold.sure:
            totals[edge_bin(edge)][2] += 1
        for edge in alignment.edges & gold.possible:
            totals[edge_bin(edge)][3] += 1

    return [
        BinReport(f"[{lower:g},{upper:g})", ScoreReport.from_counts(*counts))
        for (lower, upper), counts in zip(bounds, totals)
    ]


def tag_bin_scores(
    alignments: Mapping[str, AlignmentSet],
    golds: Mapping[str, GoldAlignment],
    tags: Mapping[str, tuple[Sequence[str], Sequence[str]]],
    tag_set: Sequence[str] | None = None,
) -> list[BinReport]:
    """Scores per tag, restricting A, S, P to edges touching the tag.

    An edge counts for every distinct tag carried by either endpoint, so one
    edge can contribute to several tag rows.
    """
    _check_ids(alignments, golds)
    observed: set[str] = set()
    for pair_id in alignments:
        src_tags, tgt_tags = tags[pair_id]
        observed.update(src_tags)
        observed.update(tgt_tags)
    labels = list(tag_set) if tag_set is not None else sorted(observed)
    totals = {label: [0, 0, 0, 0] for label in labels}

    for pair_id, alignment in alignments.items():
        src_tags, tgt_tags = tags[pair_id]
        gold = golds[pair_id]

        def edge_tags(edge: Edge) -> set[str]:
            i, j = edge
            if i >= len(src_tags) or j >= len(tgt_tags):
                raise ValueError(
                    f"pair {pair_id!r}: edge ({i}, {j}) outside tag sequences of "
                    f"lengths {len(src_tags)}/{len(tgt_tags)}"
                )
            return {src_tags[i], tgt_tags[j]}

        buckets = (
            (0, alignment.edges),
            (1, gold.sure),
            (2, alignment.edges & gold.sure),
            (3, alignment.edges & gold.possible),
        )
        for slot, edges in buckets:
            for edge in edges:
                for tag in edge_tags(edge):
                    if tag in totals:
                        totals[tag][slot] += 1

    return [BinReport(label, ScoreReport.from_counts(*totals[label])) for label in labels]
