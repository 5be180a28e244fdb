"""Embedding-file exporters for contextual models and static vector tables."""

from .contextual import ContextualExportConfig, export_contextual, export_contextual_file, load_model
from .embfile import ExportedSentence, write_embedding_file
from .static import export_static, export_static_file, read_vector_table

__all__ = [
    "ContextualExportConfig",
    "ExportedSentence",
    "export_contextual",
    "export_contextual_file",
    "export_static",
    "export_static_file",
    "load_model",
    "read_vector_table",
    "write_embedding_file",
]

__version__ = "0.1.0"
