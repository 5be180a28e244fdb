"""Per-layer hidden-state export from multilingual contextual models.

Sentences arrive pre-tokenized into words. The model's own subword
tokenizer refines them; special tokens ([CLS], [SEP], ...) are excluded
from the emitted vectors and from every word span. Word-level export mean-
pools each word's subword vectors. The model is used as-is, no fine-tuning.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np
import torch

from .embfile import ExportedSentence, write_embedding_file

DEFAULT_LAYER = 8
DEFAULT_MAX_LEN = 128


@dataclass(frozen=True)
class ContextualExportConfig:
    model_id: str
    layer: int = DEFAULT_LAYER
    level: str = "word"
    concat: bool = False
    max_len: int = DEFAULT_MAX_LEN
    batch_size: int = 16

    def __post_init__(self):
        if self.level not in ("word", "subword"):
            raise ValueError(f"level must be word or subword, got {self.level!r}")
        if self.layer < 0:
            raise ValueError("layer must be >= 0")
        if self.max_len < 2:
            raise ValueError("max_len too small for any sentence")


def load_model(model_id: str):
    from transformers import AutoModel, AutoTokenizer

    tokenizer = AutoTokenizer.from_pretrained(model_id, use_fast=True)
    if not getattr(tokenizer, "is_fast", False):
        raise ValueError("a fast tokenizer is required for word span extraction")
    model = AutoModel.from_pretrained(model_id)
    model.eval()
    return model, tokenizer


def _word_spans_from_ids(word_ids: Sequence, sentence_id: str, n_words: int):
    """Spans over the non-special subword positions, one per word."""
    spans = []
    position = 0
    current, start = None, None
    for wid in word_ids:
        if wid is None:  # special token, excluded from output entirely
            continue
        if wid != current:
            if current is not None:
                spans.append((start, position))
            if wid != len(spans):
                raise ValueError(
                    f"sentence {sentence_id!r}: word {len(spans)} produced no subword tokens"
                )
            current, start = wid, position
        position += 1
    if current is not None:
        spans.append((start, position))
    if len(spans) != n_words:
        raise ValueError(
            f"sentence {sentence_id!r}: {n_words} words but {len(spans)} tokenized groups"
        )
    return tuple(spans), position


def export_contextual(
    sentences: Iterable[tuple[str, Sequence[str]]],
    model,
    tokenizer,
    cfg: ContextualExportConfig,
) -> tuple[int, list[ExportedSentence]]:
    """Embed (id, words) pairs; returns (dim, exported sentences)."""
    sentences = list(sentences)
    n_layers = model.config.num_hidden_layers
    if not cfg.concat and cfg.layer > n_layers:
        raise ValueError(f"layer {cfg.layer} exceeds model depth {n_layers}")
    hidden = model.config.hidden_size
    dim = hidden * (n_layers + 1) if cfg.concat else hidden

    exported = []
    for chunk_start in range(0, len(sentences), cfg.batch_size):
        chunk = sentences[chunk_start : chunk_start + cfg.batch_size]
        encoding = tokenizer(
            [list(words) for _, words in chunk],
            is_split_into_words=True,
            padding=True,
            return_tensors="pt",
        )
        lengths = encoding["attention_mask"].sum(dim=1)
        for k, (sentence_id, _) in enumerate(chunk):
            if int(lengths[k]) > cfg.max_len:
                raise ValueError(
                    f"sentence {sentence_id!r}: {int(lengths[k])} subword tokens "
                    f"exceed the maximum length {cfg.max_len}"
                )
        with torch.no_grad():
            output = model(**encoding, output_hidden_states=True)
        if cfg.concat:
            states = torch.cat(output.hidden_states, dim=-1)
        else:
            states = output.hidden_states[cfg.layer]
        for k, (sentence_id, words) in enumerate(chunk):
            word_ids = encoding.word_ids(k)
            real = [p for p, wid in enumerate(word_ids) if wid is not None]
            spans, n_subwords = _word_spans_from_ids(word_ids, sentence_id, len(words))
            vectors = states[k, real, :].numpy().astype(np.float32)
            assert vectors.shape[0] == n_subwords
            if cfg.level == "word":
                pooled = np.vstack(
                    [vectors[start:end].mean(axis=0) for start, end in spans]
                )
                exported.append(ExportedSentence(sentence_id, tuple(words), pooled))
            else:
                piece_tokens = tokenizer.convert_ids_to_tokens(
                    encoding["input_ids"][k][real]
                )
                exported.append(
                    ExportedSentence(sentence_id, tuple(piece_tokens), vectors, spans)
                )
    return dim, exported


def export_contextual_file(
    path,
    sentences: Iterable[tuple[str, Sequence[str]]],
    cfg: ContextualExportConfig,
    model=None,
    tokenizer=None,
):
    if model is None or tokenizer is None:
        model, tokenizer = load_model(cfg.model_id)
    dim, exported = export_contextual(sentences, model, tokenizer, cfg)
    write_embedding_file(path, exported, dim, cfg.level)
    return dim, len(exported)
