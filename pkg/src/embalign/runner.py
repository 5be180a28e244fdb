"""Corpus-level orchestration: end-to-end alignment runs, sweeps, bin tables.

Per-pair alignment is pure, so it fans out over a process pool; results are
reduced in corpus order, which keeps output files byte-identical for any
worker count.
"""
from __future__ import annotations

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import Sequence

from .core import EmbeddingMatrix, ExtractionConfig, TokenizedSentencePair, cosine_similarity_matrix
from .evaluate import (
    AVERAGING,
    BinReport,
    GoldAlignment,
    ScoreReport,
    corpus_score,
    frequency_bin_scores,
    tag_bin_scores,
)
from .extract import CorpusAlignmentRun, align_pair_record, null_filter
from .fileio import (
    SentenceEmbedding,
    alignment_sets_from_edges,
    read_alignments,
    read_embeddings,
    read_frequency_table,
    read_gold,
    read_token_lines,
    write_alignments,
)
from .subword import convert_subword_to_word

SWEEP_PARAMS = ("alpha", "n_max", "kappa", "null_percentile", "layer")


@dataclass(frozen=True)
class CorpusPair:
    pair_id: str
    src: SentenceEmbedding
    tgt: SentenceEmbedding


def load_corpus(src_path, tgt_path) -> tuple[str, list[CorpusPair]]:
    """Read both embedding files and pair sentences by position, checking ids."""
    src = read_embeddings(src_path)
    tgt = read_embeddings(tgt_path)
    if src.level != tgt.level:
        raise ValueError(f"level mismatch: source {src.level}, target {tgt.level}")
    if len(src) != len(tgt):
        raise ValueError(
            f"pair count mismatch: source has {len(src)}, target has {len(tgt)}"
        )
    pairs = []
    for s, t in zip(src.sentences, tgt.sentences):
        if s.sentence_id != t.sentence_id:
            raise ValueError(
                f"pair id mismatch: source {s.sentence_id!r} vs target {t.sentence_id!r}"
            )
        pairs.append(CorpusPair(s.sentence_id, s, t))
    return src.level, pairs


def _align_one(payload):
    pair_id, src_values, tgt_values, cfg = payload
    sim = cosine_similarity_matrix(EmbeddingMatrix(src_values), EmbeddingMatrix(tgt_values))
    return align_pair_record(sim, cfg, pair_id)


def align_corpus(
    pairs: Sequence[CorpusPair], cfg: ExtractionConfig, workers: int = 1
) -> CorpusAlignmentRun:
    """Align every pair, then apply the corpus null pass when enabled."""
    payloads = [(p.pair_id, p.src.vectors, p.tgt.vectors, cfg) for p in pairs]
    if workers <= 1:
        records = [_align_one(p) for p in payloads]
    else:
        chunk = max(1, len(payloads) // (workers * 4))
        with ProcessPoolExecutor(max_workers=workers) as pool:
            records = list(pool.map(_align_one, payloads, chunksize=chunk))
    run = CorpusAlignmentRun(tuple(records))
    if cfg.null_enabled:
        run = null_filter(run, cfg.null_percentile)
    return run


def corpus_alignments(
    pairs: Sequence[CorpusPair],
    level: str,
    cfg: ExtractionConfig,
    workers: int = 1,
    output_level: str = "word",
):
    """Aligned corpus as an ordered pair_id -> AlignmentSet mapping."""
    if output_level not in ("word", "subword"):
        raise ValueError(f"unknown output level {output_level!r}")
    if output_level == "subword" and level == "word":
        raise ValueError("cannot produce subword output from word-level embeddings")
    run = align_corpus(pairs, cfg, workers)
    by_id = {p.pair_id: p for p in pairs}
    out = {}
    for record in run:
        alignment = record.alignment
        if level == "subword" and output_level == "word":
            pair = by_id[record.pair_id]
            alignment = convert_subword_to_word(
                alignment, pair.src.word_spans or (), pair.tgt.word_spans or ()
            )
        out[record.pair_id] = alignment
    return out


def golds_by_id(gold_path, gold_base: int, pair_ids: Sequence[str]) -> dict[str, GoldAlignment]:
    golds = read_gold(gold_path, gold_base)
    if len(golds) != len(pair_ids):
        raise ValueError(
            f"gold file has {len(golds)} lines but the corpus has {len(pair_ids)} pairs"
        )
    return dict(zip(pair_ids, golds))


def run_corpus(
    src_path,
    tgt_path,
    cfg: ExtractionConfig,
    out_path,
    gold_path=None,
    gold_base: int = 1,
    report_path=None,
    workers: int = 1,
    output_level: str = "word",
) -> ScoreReport | None:
    """Full pipeline: read, align, write Pharaoh output, optionally score."""
    level, pairs = load_corpus(src_path, tgt_path)
    aligned = corpus_alignments(pairs, level, cfg, workers, output_level)
    write_alignments(list(aligned.values()), out_path)
    if gold_path is None:
        return None
    if output_level != "word":
        raise ValueError("gold standards are word-level; score word-level output")
    golds = golds_by_id(gold_path, gold_base, list(aligned))
    report = corpus_score(aligned, golds)
    if report_path is not None:
        write_score_csv(report_path, [({}, report)])
    return report


def sweep(
    param: str,
    values: Sequence,
    src_path: str,
    tgt_path: str,
    cfg: ExtractionConfig,
    gold_path,
    gold_base: int = 1,
    workers: int = 1,
    output_level: str = "word",
) -> list[tuple[object, ScoreReport]]:
    """Score the corpus once per value of one configuration axis.

    For alpha/n_max the method is forced to itermax, for kappa the distortion
    prior is enabled, for null_percentile the null filter is enabled. For
    layer the embedding paths are templates containing "{layer}".
    """
    if param not in SWEEP_PARAMS:
        raise ValueError(f"unknown sweep parameter {param!r}, expected one of {SWEEP_PARAMS}")
    rows = []
    loaded = None
    for value in values:
        if param == "layer":
            level, pairs = load_corpus(
                str(src_path).format(layer=value), str(tgt_path).format(layer=value)
            )
            run_cfg = cfg
        else:
            if loaded is None:
                loaded = load_corpus(src_path, tgt_path)
            level, pairs = loaded
            if param in ("alpha", "n_max"):
                run_cfg = replace(cfg, method="itermax", **{param: value})
            elif param == "kappa":
                run_cfg = replace(cfg, dist_enabled=True, kappa=value)
            else:
                run_cfg = replace(cfg, null_enabled=True, null_percentile=value)
        aligned = corpus_alignments(pairs, level, run_cfg, workers, output_level)
        golds = golds_by_id(gold_path, gold_base, list(aligned))
        rows.append((value, corpus_score(aligned, golds)))
    return rows


# --- bin table plumbing ----------------------------------------------------

def _load_scorable(hyp_path, gold_path, gold_base):
    hyp = alignment_sets_from_edges(read_alignments(hyp_path, base=0))
    golds = read_gold(gold_path, gold_base)
    if len(hyp) != len(golds):
        raise ValueError(
            f"hypothesis has {len(hyp)} lines but gold has {len(golds)}"
        )
    ids = [str(k) for k in range(len(hyp))]
    return dict(zip(ids, hyp)), dict(zip(ids, golds)), ids


def run_frequency_bins(
    hyp_path, gold_path, gold_base, src_text_path, tgt_text_path, freq_path, bounds
) -> list[BinReport]:
    alignments, golds, ids = _load_scorable(hyp_path, gold_path, gold_base)
    src_lines = read_token_lines(src_text_path)
    tgt_lines = read_token_lines(tgt_text_path)
    if len(src_lines) != len(ids) or len(tgt_lines) != len(ids):
        raise ValueError("text files must have one line per sentence pair")
    pairs = {
        pid: TokenizedSentencePair(src_lines[k], tgt_lines[k], pair_id=pid)
        for k, pid in enumerate(ids)
    }
    return frequency_bin_scores(alignments, golds, pairs, read_frequency_table(freq_path), bounds)


def run_tag_bins(hyp_path, gold_path, gold_base, src_tags_path, tgt_tags_path) -> list[BinReport]:
    alignments, golds, ids = _load_scorable(hyp_path, gold_path, gold_base)
    src_tags = read_token_lines(src_tags_path)
    tgt_tags = read_token_lines(tgt_tags_path)
    if len(src_tags) != len(ids) or len(tgt_tags) != len(ids):
        raise ValueError("tag files must have one line per sentence pair")
    tags = {pid: (src_tags[k], tgt_tags[k]) for k, pid in enumerate(ids)}
    return tag_bin_scores(alignments, golds, tags)


# --- CSV reports -----------------------------------------------------------

_SCORE_FIELDS = (
    "precision",
    "recall",
    "f1",
    "aer",
    "predicted",
    "sure",
    "predicted_and_sure",
    "predicted_and_possible",
)


def _score_row(report: ScoreReport) -> dict:
    row = {name: getattr(report, name) for name in _SCORE_FIELDS}
    row["averaging"] = AVERAGING
    return row


def write_score_csv(path, rows: Sequence[tuple[dict, ScoreReport]]):
    """Rows of (leading columns, report); column set from the first row."""
    lead = list(rows[0][0]) if rows else []
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=lead + list(_SCORE_FIELDS) + ["averaging"])
        writer.writeheader()
        for extra, report in rows:
            writer.writerow({**extra, **_score_row(report)})


def write_sweep_csv(path, param: str, rows: Sequence[tuple[object, ScoreReport]]):
    write_score_csv(path, [({"param": param, "value": value}, report) for value, report in rows])


def write_bins_csv(path, kind: str, reports: Sequence[BinReport]):
    rows = [
        ({"kind": kind, "bin": item.label, "empty": item.empty}, item.report)
        for item in reports
    ]
    write_score_csv(path, rows)
