"""Target-achievement scoring and evaluation metrics for generated design sets."""

from .dtai import DtaiBreakdown, dtai_batch, dtai_scores, objective_score, ratio
from .model import (
    ColumnKind,
    ColumnSchema,
    DesignRecord,
    DesignSet,
    Direction,
    ObjectiveSpec,
    TargetSpec,
    adjust_performance,
    adjust_set,
    ingest_csv,
    percentile_reference,
    percentile_targets,
)

__version__ = "0.1.0"
