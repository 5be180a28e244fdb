"""Writer for the canonical binary embedding-file format.

Layout (all integers little-endian):
  magic b"EMBF", u32 version (1), u32 dim, u8 level (0 word / 1 subword)
  then per sentence:
    u16 id length + utf-8 id
    u32 token count, per token u16 length + utf-8 text
    subword level only: u32 word count, per word u32 start + u32 end
    token_count * dim float32 values, row-major
"""
from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Sequence

import numpy as np

MAGIC = b"EMBF"
FORMAT_VERSION = 1
LEVELS = ("word", "subword")


@dataclass(frozen=True)
class ExportedSentence:
    sentence_id: str
    tokens: tuple[str, ...]
    vectors: np.ndarray
    word_spans: tuple[tuple[int, int], ...] | None = None


def _check(sent: ExportedSentence, dim: int, level: str):
    if not sent.tokens:
        raise ValueError(f"sentence {sent.sentence_id!r}: no tokens")
    if sent.vectors.shape != (len(sent.tokens), dim):
        raise ValueError(
            f"sentence {sent.sentence_id!r}: matrix shape {sent.vectors.shape}, "
            f"expected ({len(sent.tokens)}, {dim})"
        )
    if not np.all(np.isfinite(sent.vectors)):
        raise ValueError(f"sentence {sent.sentence_id!r}: non-finite values")
    if level == "subword":
        spans = sent.word_spans or ()
        cursor = 0
        for start, end in spans:
            if start != cursor or end <= start:
                raise ValueError(f"sentence {sent.sentence_id!r}: bad span ({start}, {end})")
            cursor = end
        if cursor != len(sent.tokens):
            raise ValueError(f"sentence {sent.sentence_id!r}: spans do not cover all tokens")
    elif sent.word_spans is not None:
        raise ValueError(f"sentence {sent.sentence_id!r}: word level carries spans")


def _pack_str(text: str) -> bytes:
    data = text.encode("utf-8")
    return struct.pack("<H", len(data)) + data


def write_embedding_file(path, sentences: Sequence[ExportedSentence], dim: int, level: str):
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<IIB", FORMAT_VERSION, dim, LEVELS.index(level)))
        for sent in sentences:
            _check(sent, dim, level)
            fh.write(_pack_str(sent.sentence_id))
            fh.write(struct.pack("<I", len(sent.tokens)))
            for token in sent.tokens:
                fh.write(_pack_str(token))
            if level == "subword":
                spans = sent.word_spans or ()
                fh.write(struct.pack("<I", len(spans)))
                for start, end in spans:
                    fh.write(struct.pack("<II", start, end))
            fh.write(np.ascontiguousarray(sent.vectors, dtype="<f4").tobytes())
