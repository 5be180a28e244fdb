"""Subword-level alignment support.

Subword alignments convert to word alignments with the any-subword rule:
two words are aligned iff any of their subwords are aligned.
"""
from __future__ import annotations

from typing import Sequence

from .core import AlignmentSet, Span, validate_spans


def _subword_to_word_index(spans: Sequence[Span], token_count: int) -> list[int]:
    lookup = [-1] * token_count
    for word, (start, end) in enumerate(spans):
        for sub in range(start, end):
            lookup[sub] = word
    return lookup


def convert_subword_to_word(
    subword_alignment: AlignmentSet,
    src_spans: Sequence[Span],
    tgt_spans: Sequence[Span],
) -> AlignmentSet:
    """Map subword edges to word edges via the any-subword rule."""
    src_spans = validate_spans(src_spans, subword_alignment.src_len)
    tgt_spans = validate_spans(tgt_spans, subword_alignment.tgt_len)
    src_word = _subword_to_word_index(src_spans, subword_alignment.src_len)
    tgt_word = _subword_to_word_index(tgt_spans, subword_alignment.tgt_len)
    word_edges = set()
    for i, j in subword_alignment.edges:
        if src_word[i] < 0:
            raise ValueError(f"subword index {i} not covered by any source span")
        if tgt_word[j] < 0:
            raise ValueError(f"subword index {j} not covered by any target span")
        word_edges.add((src_word[i], tgt_word[j]))
    return AlignmentSet(frozenset(word_edges), len(src_spans), len(tgt_spans))


def build_word_spans(
    word_tokens: Sequence[str],
    subword_tokens: Sequence[str],
    hints: Sequence[int] | Sequence[Span],
) -> tuple[Span, ...]:
    """Validate tokenizer output into word spans over the subword sequence.

    ``hints`` is either one subword count per word or explicit (start, end)
    spans; both forms are checked against the word and subword counts.
    """
    if len(hints) != len(word_tokens):
        raise ValueError(
            f"{len(word_tokens)} words but {len(hints)} span hints"
        )
    if hints and not isinstance(hints[0], (tuple, list)):
        hints = [int(count) for count in hints]  # type: ignore[arg-type]
        total = sum(hints)
        if total != len(subword_tokens):
            raise ValueError(
                f"piece counts sum to {total} but there are {len(subword_tokens)} subwords"
            )
        spans = []
        cursor = 0
        for count in hints:
            spans.append((cursor, cursor + int(count)))
            cursor += int(count)
    else:
        spans = [(int(s), int(e)) for s, e in hints]  # type: ignore[misc]
    return validate_spans(spans, len(subword_tokens))
