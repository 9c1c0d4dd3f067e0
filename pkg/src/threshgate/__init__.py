"""Automatic cosine-distance thresholding for prompt-based image retrieval."""

__version__ = "0.1.0"

from .store import (
    DistanceTable,
    EmbeddingRecord,
    EmbeddingStore,
    read_distance_table,
    read_embedding_store,
    read_labels,
    write_distance_table,
    write_embedding_store,
)
from .similarity import compute_distances, cosine_distance, sort_by_distance
from .histogram import Histogram, build_histogram
from .gaussfit import (
    DualGaussianParams,
    FitReport,
    GaussianParams,
    eval_dual,
    eval_gaussian,
    fit_dual,
    fit_single,
    sum_abs_error,
)
from .model_select import ModelChoice, ModelKind, select_model
from .threshold import (
    ThresholdDecision,
    auto_threshold,
    fallback_threshold,
    intersection_threshold,
    select_images,
)
from .evaluation import (
    ConfusionCounts,
    MetricsReport,
    RocCurve,
    confusion,
    metrics,
    optimal_f1_threshold,
    roc_curve,
)
from .estimator import DistanceThresholder

__all__ = [
    "ConfusionCounts",
    "DistanceTable",
    "DistanceThresholder",
    "DualGaussianParams",
    "EmbeddingRecord",
    "EmbeddingStore",
    "FitReport",
    "GaussianParams",
    "Histogram",
    "MetricsReport",
    "ModelChoice",
    "ModelKind",
    "RocCurve",
    "ThresholdDecision",
    "auto_threshold",
    "build_histogram",
    "compute_distances",
    "confusion",
    "cosine_distance",
    "eval_dual",
    "eval_gaussian",
    "fallback_threshold",
    "fit_dual",
    "fit_single",
    "intersection_threshold",
    "metrics",
    "optimal_f1_threshold",
    "read_distance_table",
    "read_embedding_store",
    "read_labels",
    "roc_curve",
    "select_images",
    "select_model",
    "sort_by_distance",
    "sum_abs_error",
    "write_distance_table",
    "write_embedding_store",
]
