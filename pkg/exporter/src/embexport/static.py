"""Word-level export by lookup in a static vector table.

The table is the usual text format: an optional "count dim" header line,
then one "word v1 .. vd" line per entry. Out-of-vocabulary tokens map to
the zero vector and are reported in a warning.
"""
from __future__ import annotations

import warnings
from typing import Iterable, Sequence

import numpy as np

from .embfile import ExportedSentence, write_embedding_file


def read_vector_table(path) -> dict[str, np.ndarray]:
    table: dict[str, np.ndarray] = {}
    dim = None
    with open(path, "r", encoding="utf-8") as fh:
        first = fh.readline().split()
        if len(first) == 2 and all(p.isdigit() for p in first):
            pass  # header line, skip
        elif first:
            table[first[0]] = np.array(first[1:], dtype=np.float32)
            dim = len(first) - 1
        for number, line in enumerate(fh, start=2):
            parts = line.split()
            if not parts:
                continue
            vector = np.array(parts[1:], dtype=np.float32)
            if dim is None:
                dim = vector.shape[0]
            elif vector.shape[0] != dim:
                raise ValueError(
                    f"{path}: line {number}: {vector.shape[0]} values, expected {dim}"
                )
            table[parts[0]] = vector
    if not table:
        raise ValueError(f"{path}: empty vector table")
    return table


def export_static(
    sentences: Iterable[tuple[str, Sequence[str]]],
    table: dict[str, np.ndarray],
) -> tuple[int, list[ExportedSentence]]:
    dim = len(next(iter(table.values())))
    zero = np.zeros(dim, dtype=np.float32)
    oov: set[str] = set()
    exported = []
    for sentence_id, words in sentences:
        rows = []
        for word in words:
            vector = table.get(word)
            if vector is None:
                oov.add(word)
                vector = zero
            rows.append(vector)
        exported.append(
            ExportedSentence(sentence_id, tuple(words), np.vstack(rows).astype(np.float32))
        )
    if oov:
        shown = ", ".join(sorted(oov)[:5])
        warnings.warn(
            f"{len(oov)} out-of-vocabulary tokens mapped to the zero vector ({shown} ...)"
        )
    return dim, exported


def export_static_file(path, sentences, table_path):
    table = read_vector_table(table_path)
    dim, exported = export_static(sentences, table)
    write_embedding_file(path, exported, dim, "word")
    return dim, len(exported)
