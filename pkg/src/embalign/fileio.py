"""File formats: embedding files, Pharaoh alignments, gold standards.

Embedding files exist in a canonical binary form (little-endian, float32
payload) and an equivalent text form for debugging; both round-trip the same
float32 values. Alignment files use the Pharaoh convention of
whitespace-separated "i-j" items, one sentence pair per line; gold files may
additionally mark possible-only edges as "ipj".
"""
from __future__ import annotations

import re
import struct
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from .core import AlignmentSet, Edge, Span, validate_spans
from .evaluate import GoldAlignment

MAGIC = b"EMBF"
FORMAT_VERSION = 1
_LEVELS = ("word", "subword")


@dataclass(frozen=True)
class SentenceEmbedding:
    """One sentence of an embedding file: tokens, optional word spans, vectors."""

    sentence_id: str
    tokens: tuple[str, ...]
    vectors: np.ndarray  # (len(tokens), dim) float32
    word_spans: tuple[Span, ...] | None = None


@dataclass(frozen=True)
class EmbeddingCorpus:
    """A fully materialized embedding file."""

    dim: int
    level: str
    sentences: tuple[SentenceEmbedding, ...]

    def __post_init__(self):
        if self.level not in _LEVELS:
            raise ValueError(f"level must be one of {_LEVELS}, got {self.level!r}")

    def __len__(self) -> int:
        return len(self.sentences)


def _check_sentence(sent: SentenceEmbedding, dim: int, level: str):
    sid = sent.sentence_id
    if not sent.tokens:
        raise ValueError(f"sentence {sid!r}: no tokens")
    if sent.vectors.shape != (len(sent.tokens), dim):
        raise ValueError(
            f"sentence {sid!r}: matrix shape {sent.vectors.shape} does not match "
            f"{len(sent.tokens)} tokens x dim {dim}"
        )
    if not np.all(np.isfinite(sent.vectors)):
        raise ValueError(f"sentence {sid!r}: non-finite embedding values")
    if level == "subword":
        if sent.word_spans is None:
            raise ValueError(f"sentence {sid!r}: subword level requires word spans")
        validate_spans(sent.word_spans, len(sent.tokens))
    elif sent.word_spans is not None:
        raise ValueError(f"sentence {sid!r}: word level must not carry word spans")


# --- binary form ---------------------------------------------------------

def _write_str(fh, text: str):
    data = text.encode("utf-8")
    if len(data) > 0xFFFF:
        raise ValueError("string too long for format")
    fh.write(struct.pack("<H", len(data)))
    fh.write(data)


def _read_exact(fh, n: int, context: str) -> bytes:
    data = fh.read(n)
    if len(data) != n:
        raise ValueError(f"truncated record while reading {context}")
    return data


def _read_str(fh, context: str) -> str:
    (n,) = struct.unpack("<H", _read_exact(fh, 2, context))
    return _read_exact(fh, n, context).decode("utf-8")


def _write_binary(fh, corpus_iter: Iterable[SentenceEmbedding], dim: int, level: str):
    fh.write(MAGIC)
    fh.write(struct.pack("<IIB", FORMAT_VERSION, dim, _LEVELS.index(level)))
    for sent in corpus_iter:
        _check_sentence(sent, dim, level)
        _write_str(fh, sent.sentence_id)
        fh.write(struct.pack("<I", len(sent.tokens)))
        for token in sent.tokens:
            _write_str(fh, token)
        if level == "subword":
            spans = sent.word_spans or ()
            fh.write(struct.pack("<I", len(spans)))
            for start, end in spans:
                fh.write(struct.pack("<II", start, end))
        payload = np.ascontiguousarray(sent.vectors, dtype="<f4")
        fh.write(payload.tobytes())


def _iter_binary(fh) -> Iterator[SentenceEmbedding]:
    magic = fh.read(4)
    if magic != MAGIC:
        raise ValueError("not a binary embedding file (bad magic)")
    version, dim, level_code = struct.unpack("<IIB", _read_exact(fh, 9, "header"))
    if version != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {version}")
    if level_code >= len(_LEVELS) or dim < 1:
        raise ValueError("corrupt header")
    level = _LEVELS[level_code]
    yield dim, level  # type: ignore[misc]  # header sentinel
    while True:
        lead = fh.read(2)
        if not lead:
            return
        if len(lead) != 2:
            raise ValueError("truncated record at sentence id")
        (id_len,) = struct.unpack("<H", lead)
        sid = _read_exact(fh, id_len, "sentence id").decode("utf-8")
        (n_tok,) = struct.unpack("<I", _read_exact(fh, 4, f"sentence {sid!r}"))
        tokens = tuple(_read_str(fh, f"sentence {sid!r}") for _ in range(n_tok))
        spans = None
        if level == "subword":
            (n_words,) = struct.unpack("<I", _read_exact(fh, 4, f"sentence {sid!r}"))
            spans = tuple(
                struct.unpack("<II", _read_exact(fh, 8, f"sentence {sid!r}"))
                for _ in range(n_words)
            )
        raw = _read_exact(fh, 4 * n_tok * dim, f"sentence {sid!r} matrix")
        vectors = np.frombuffer(raw, dtype="<f4").reshape(n_tok, dim)
        sent = SentenceEmbedding(sid, tokens, vectors, spans)
        _check_sentence(sent, dim, level)
        yield sent


# --- text form -----------------------------------------------------------

_WS = re.compile(r"\s")


def _write_text(fh, corpus_iter: Iterable[SentenceEmbedding], dim: int, level: str):
    fh.write(f"embfile\t{FORMAT_VERSION}\t{dim}\t{level}\n")
    for sent in corpus_iter:
        _check_sentence(sent, dim, level)
        if _WS.search(sent.sentence_id):
            raise ValueError(f"sentence id {sent.sentence_id!r}: whitespace not allowed in text mode")
        for token in sent.tokens:
            if _WS.search(token):
                raise ValueError(f"sentence {sent.sentence_id!r}: token {token!r} contains whitespace")
        fh.write(f"{sent.sentence_id}\t{len(sent.tokens)}\n")
        fh.write(" ".join(sent.tokens) + "\n")
        if level == "subword":
            fh.write(" ".join(f"{s}:{e}" for s, e in sent.word_spans or ()) + "\n")
        payload = np.asarray(sent.vectors, dtype=np.float32)
        for row in payload:
            fh.write(" ".join(f"{x:.9g}" for x in row) + "\n")


def _iter_text(fh) -> Iterator[SentenceEmbedding]:
    header = fh.readline().rstrip("\n").split("\t")
    if len(header) != 4 or header[0] != "embfile":
        raise ValueError("not a text embedding file (bad header)")
    if int(header[1]) != FORMAT_VERSION:
        raise ValueError(f"unsupported format version {header[1]}")
    dim = int(header[2])
    level = header[3]
    if level not in _LEVELS or dim < 1:
        raise ValueError("corrupt header")
    yield dim, level  # type: ignore[misc]
    while True:
        lead = fh.readline()
        if not lead.strip():
            return
        try:
            sid, n_tok_s = lead.rstrip("\n").split("\t")
            n_tok = int(n_tok_s)
        except ValueError:
            raise ValueError(f"malformed sentence header line: {lead!r}") from None
        token_line = fh.readline()
        if not token_line:
            raise ValueError(f"truncated record in sentence {sid!r}")
        tokens = tuple(token_line.split())
        if len(tokens) != n_tok:
            raise ValueError(f"sentence {sid!r}: expected {n_tok} tokens, found {len(tokens)}")
        spans = None
        if level == "subword":
            span_line = fh.readline()
            if not span_line:
                raise ValueError(f"truncated record in sentence {sid!r}")
            spans = tuple(
                (int(a), int(b))
                for a, b in (item.split(":") for item in span_line.split())
            )
        rows = []
        for r in range(n_tok):
            value_line = fh.readline()
            if not value_line:
                raise ValueError(f"truncated record in sentence {sid!r} matrix")
            row = np.array(value_line.split(), dtype=np.float32)
            if row.shape != (dim,):
                raise ValueError(f"sentence {sid!r}: row {r} has {row.shape[0]} values, expected {dim}")
            rows.append(row)
        sent = SentenceEmbedding(sid, tokens, np.vstack(rows), spans)
        _check_sentence(sent, dim, level)
        yield sent


# --- public embedding API ------------------------------------------------

def write_embeddings(path, corpus: EmbeddingCorpus, mode: str = "binary"):
    if mode == "binary":
        with open(path, "wb") as fh:
            _write_binary(fh, corpus.sentences, corpus.dim, corpus.level)
    elif mode == "text":
        with open(path, "w", encoding="utf-8") as fh:
            _write_text(fh, corpus.sentences, corpus.dim, corpus.level)
    else:
        raise ValueError(f"unknown mode {mode!r}")


def iter_embeddings(path) -> Iterator:
    """Stream (dim, level) first, then one SentenceEmbedding per sentence.

    The mode is sniffed from the first bytes, binary being canonical.
    """
    with open(path, "rb") as probe:
        head = probe.read(4)
    if head == MAGIC:
        with open(path, "rb") as fh:
            yield from _iter_binary(fh)
    else:
        with open(path, "r", encoding="utf-8") as fh:
            yield from _iter_text(fh)


def read_embeddings(path) -> EmbeddingCorpus:
    stream = iter_embeddings(path)
    dim, level = next(stream)
    return EmbeddingCorpus(dim, level, tuple(stream))


# --- Pharaoh alignments and gold standards -------------------------------

_EDGE = re.compile(r"^(\d+)-(\d+)$")
_GOLD_EDGE = re.compile(r"^(\d+)(-|p)(\d+)$")


def write_alignments(alignments: Sequence[AlignmentSet], path):
    """One line per pair of row-major sorted, 0-based "i-j" items."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for alignment in alignments:
            fh.write(" ".join(f"{i}-{j}" for i, j in alignment.sorted_edges()) + "\n")


def _parse_lines(path):
    with open(path, "r", encoding="utf-8") as fh:
        for number, line in enumerate(fh, start=1):
            yield number, line.strip()


def read_alignments(path, base: int = 0) -> list[frozenset[Edge]]:
    """Plain Pharaoh hypothesis files: "i-j" items only."""
    if base not in (0, 1):
        raise ValueError("index base must be 0 or 1")
    out = []
    for number, line in _parse_lines(path):
        edges = set()
        for item in line.split():
            m = _EDGE.match(item)
            if not m:
                raise ValueError(f"{path}: line {number}: malformed edge {item!r}")
            i, j = int(m.group(1)) - base, int(m.group(2)) - base
            if i < 0 or j < 0:
                raise ValueError(f"{path}: line {number}: index below base in {item!r}")
            edges.add((i, j))
        out.append(frozenset(edges))
    return out


def read_gold(path, base: int = 1) -> list[GoldAlignment]:
    """Gold files: "i-j" sure edges, "ipj" possible-only edges."""
    if base not in (0, 1):
        raise ValueError("index base must be 0 or 1")
    out = []
    for number, line in _parse_lines(path):
        sure, possible = set(), set()
        for item in line.split():
            m = _GOLD_EDGE.match(item)
            if not m:
                raise ValueError(f"{path}: line {number}: malformed edge {item!r}")
            i, j = int(m.group(1)) - base, int(m.group(3)) - base
            if i < 0 or j < 0:
                raise ValueError(f"{path}: line {number}: index below base in {item!r}")
            (possible if m.group(2) == "p" else sure).add((i, j))
        out.append(GoldAlignment(frozenset(sure), frozenset(possible), index_base=base))
    return out


def alignment_sets_from_edges(edge_sets: Sequence[frozenset[Edge]]) -> list[AlignmentSet]:
    """Wrap raw edge sets with dimensions inferred from the largest indices."""
    out = []
    for edges in edge_sets:
        src_len = 1 + max((i for i, _ in edges), default=-1)
        tgt_len = 1 + max((j for _, j in edges), default=-1)
        out.append(AlignmentSet(edges, src_len, tgt_len))
    return out


def paired_alignment_sets(
    fwd_edges: Sequence[frozenset[Edge]], bwd_edges: Sequence[frozenset[Edge]]
) -> list[tuple[AlignmentSet, AlignmentSet]]:
    """Wrap forward/backward edge sets with shared per-line dimensions."""
    if len(fwd_edges) != len(bwd_edges):
        raise ValueError(
            f"forward has {len(fwd_edges)} lines but backward has {len(bwd_edges)}"
        )
    out = []
    for fwd, bwd in zip(fwd_edges, bwd_edges):
        both = fwd | bwd
        src_len = 1 + max((i for i, _ in both), default=-1)
        tgt_len = 1 + max((j for _, j in both), default=-1)
        out.append(
            (AlignmentSet(fwd, src_len, tgt_len), AlignmentSet(bwd, src_len, tgt_len))
        )
    return out


# --- auxiliary tables -----------------------------------------------------

def read_frequency_table(path) -> dict[str, int]:
    """Whitespace-separated "word count" lines."""
    table: dict[str, int] = {}
    for number, line in _parse_lines(path):
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"{path}: line {number}: expected 'word count'")
        try:
            table[parts[0]] = int(parts[1])
        except ValueError:
            raise ValueError(f"{path}: line {number}: bad count {parts[1]!r}") from None
    return table


def read_token_lines(path) -> list[tuple[str, ...]]:
    """One whitespace-tokenized sentence per line (text or tag files)."""
    return [tuple(line.split()) for _, line in _parse_lines(path)]
