"""Tag-controlled synthetic grammatical error generation."""

from ._core import (
    EmptyCorpus,
    Infeasible,
    InfeasibleQuota,
    TagCorruptError,
    annotate,
    corrupt,
    corrupt_corpus,
    estimate,
    tags,
    tokenize,
    tv_distance,
)

__all__ = [
    "EmptyCorpus",
    "Infeasible",
    "InfeasibleQuota",
    "TagCorruptError",
    "annotate",
    "corrupt",
    "corrupt_corpus",
    "estimate",
    "tags",
    "tokenize",
    "tv_distance",
]
