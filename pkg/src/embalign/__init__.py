"""Word alignment from embedding similarity matrices."""

from .core import (
    AlignmentSet,
    EmbeddingMatrix,
    ExtractionConfig,
    SimilarityMatrix,
    TokenizedSentencePair,
    apply_distortion,
    cosine_similarity_matrix,
    pool_subword_to_word,
)
from .evaluate import (
    BinReport,
    GoldAlignment,
    ScoreReport,
    corpus_score,
    frequency_bin_scores,
    score,
    tag_bin_scores,
)
from .extract import (
    CorpusAlignmentRun,
    PairAlignmentRecord,
    align_pair,
    align_pair_record,
    argmax_align,
    edge_entropies,
    itermax_align,
    match_align,
    null_filter,
)
from .subword import build_word_spans, convert_subword_to_word
from .symmetrize import grow_diag_final_and, intersect

__all__ = [
    "AlignmentSet",
    "BinReport",
    "CorpusAlignmentRun",
    "EmbeddingMatrix",
    "ExtractionConfig",
    "GoldAlignment",
    "PairAlignmentRecord",
    "ScoreReport",
    "SimilarityMatrix",
    "TokenizedSentencePair",
    "align_pair",
    "align_pair_record",
    "apply_distortion",
    "argmax_align",
    "build_word_spans",
    "convert_subword_to_word",
    "corpus_score",
    "cosine_similarity_matrix",
    "edge_entropies",
    "frequency_bin_scores",
    "grow_diag_final_and",
    "intersect",
    "itermax_align",
    "match_align",
    "null_filter",
    "pool_subword_to_word",
    "score",
    "tag_bin_scores",
]

__version__ = "0.1.0"
