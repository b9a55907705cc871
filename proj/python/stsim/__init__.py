"""Siamese CNN+LSTM sentence similarity.

Thin wrapper around the compiled core: word-embedding tables, the pair
scoring model, training, rank-correlation metrics and the local-regression
calibration.
"""

from stsim._core import (
    CalibrationModel,
    DataError,
    DistanceMatrix,
    EmbeddingTable,
    EpochStats,
    EvaluationReport,
    EvaluationResult,
    NumericError,
    OovPolicy,
    PairScore,
    SentencePair,
    SiameseModel,
    TrainResult,
    UsageError,
    __version__,
    context_distance_matrix,
    cosine_distance,
    evaluate,
    load_sick_pairs,
    mse,
    pearson,
    spearman,
    tokenize,
    train,
    word_distance_matrix,
)

__all__ = [
    "CalibrationModel",
    "DataError",
    "DistanceMatrix",
    "EmbeddingTable",
    "EpochStats",
    "EvaluationReport",
    "EvaluationResult",
    "NumericError",
    "OovPolicy",
    "PairScore",
    "SentencePair",
    "SiameseModel",
    "TrainResult",
    "UsageError",
    "__version__",
    "context_distance_matrix",
    "cosine_distance",
    "evaluate",
    "load_sick_pairs",
    "mse",
    "pearson",
    "spearman",
    "tokenize",
    "train",
    "word_distance_matrix",
]
