"""Domain types, tabular ingestion and percentile-derived targets.

A :class:`DesignSet` stores a table of parametric designs column-wise: a float
matrix for the continuous columns and an integer matrix of category indices for
the categorical ones. Raw objective values read from a file are turned into
strictly positive, larger-is-better *adjusted* values by
:func:`adjust_performance` before anything downstream scores them.
"""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field, replace
from os import PathLike
from typing import Iterator, Sequence

import numpy as np

from .errors import (
    DimensionMismatch,
    EmptyDataset,
    InvalidParameter,
    MissingColumn,
    NonNumericCell,
    NonPositiveAdjusted,
    NoPerformance,
    SchemaMismatch,
    TooFewDesigns,
    UnknownCategory,
)

DEFAULT_EPSILON = 1e-9
DEFAULT_BETA = 4.0


class ColumnKind(str, enum.Enum):
    CONTINUOUS = "continuous"
    CATEGORICAL = "categorical"


class Direction(str, enum.Enum):
    MAXIMIZE = "maximize"
    MINIMIZE_MAGNITUDE = "minimize_magnitude"


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class ColumnSchema:
    name: str
    kind: ColumnKind = ColumnKind.CONTINUOUS
    categories: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "kind", ColumnKind(self.kind))
        object.__setattr__(self, "categories", tuple(self.categories))
        if self.kind is ColumnKind.CATEGORICAL and not self.categories:
            raise SchemaMismatch(f"categorical column {self.name!r} declares no categories")
        if self.kind is ColumnKind.CONTINUOUS and self.categories:
            raise SchemaMismatch(f"continuous column {self.name!r} cannot declare categories")
        if len(set(self.categories)) != len(self.categories):
            raise SchemaMismatch(f"column {self.name!r} has duplicate categories")

    @property
    def is_categorical(self) -> bool:
        return self.kind is ColumnKind.CATEGORICAL

    @classmethod
    def continuous(cls, name: str) -> "ColumnSchema":
        return cls(name)

    @classmethod
    def categorical(cls, name: str, categories: Sequence[str]) -> "ColumnSchema":
        return cls(name, ColumnKind.CATEGORICAL, tuple(categories))


def validate_schema(schema: Sequence[ColumnSchema]) -> tuple[ColumnSchema, ...]:
    schema = tuple(schema)
    names = [c.name for c in schema]
    if len(set(names)) != len(names):
        raise SchemaMismatch(f"duplicate column names in schema: {names}")
    return schema


def continuous_columns(schema: Sequence[ColumnSchema]) -> list[str]:
    return [c.name for c in schema if not c.is_categorical]


def categorical_columns(schema: Sequence[ColumnSchema]) -> list[ColumnSchema]:
    return [c for c in schema if c.is_categorical]


@dataclass(frozen=True)
class DesignRecord:
    """One design: continuous values and category indices, both in schema order."""

    values: tuple[float, ...]
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "values", tuple(float(v) for v in self.values))
        object.__setattr__(self, "labels", tuple(int(v) for v in self.labels))

    def validate(self, schema: Sequence[ColumnSchema]) -> None:
        cats = categorical_columns(schema)
        if len(self.values) != len(schema) - len(cats) or len(self.labels) != len(cats):
            raise SchemaMismatch(
                f"record has {len(self.values)} values / {len(self.labels)} labels, "
                f"schema expects {len(schema) - len(cats)} / {len(cats)}"
            )
        for col, lab in zip(cats, self.labels):
            if not 0 <= lab < len(col.categories):
                raise SchemaMismatch(f"label {lab} out of range for column {col.name!r}")


@dataclass(frozen=True)
class ObjectiveSpec:
    name: str
    direction: Direction = Direction.MAXIMIZE
    epsilon: float = DEFAULT_EPSILON

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        if not self.epsilon > 0:
            raise InvalidParameter(f"objective {self.name!r}: epsilon must be > 0")


@dataclass(frozen=True)
class TargetSpec:
    """Per-objective targets ``t`` with importance ``alpha`` and decay ``beta``."""

    t: np.ndarray
    alpha: np.ndarray = None
    beta: np.ndarray = None

    def __post_init__(self):
        t = np.atleast_1d(np.asarray(self.t, dtype=float))
        alpha = np.ones_like(t) if self.alpha is None else self.alpha
        beta = np.full_like(t, DEFAULT_BETA) if self.beta is None else self.beta
        alpha = np.broadcast_to(np.asarray(alpha, dtype=float), t.shape)
        beta = np.broadcast_to(np.asarray(beta, dtype=float), t.shape)
        if t.ndim != 1 or t.size == 0:
            raise DimensionMismatch("targets must be a nonempty vector")
        for name, arr in (("t", t), ("alpha", alpha), ("beta", beta)):
            if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
                raise InvalidParameter(f"every entry of {name} must be finite and > 0")
        object.__setattr__(self, "t", _frozen(t))
        object.__setattr__(self, "alpha", _frozen(alpha))
        object.__setattr__(self, "beta", _frozen(beta))

    @property
    def n(self) -> int:
        return self.t.size


@dataclass(frozen=True)
class DesignSet:
    """A table of designs with optional per-design performance and feasibility.

    ``values`` has shape ``(m, n_continuous)`` and ``labels`` ``(m, n_categorical)``;
    ``performance`` is ``(m, n_objectives)`` and ``feasible`` ``(m,)`` when present.
    ``adjusted`` records whether ``performance`` already went through
    :func:`adjust_performance`.
    """

    schema: tuple[ColumnSchema, ...]
    values: np.ndarray
    labels: np.ndarray = None
    performance: np.ndarray | None = None
    feasible: np.ndarray | None = None
    objective_names: tuple[str, ...] = ()
    adjusted: bool = False

    def __post_init__(self):
        schema = validate_schema(self.schema)
        object.__setattr__(self, "schema", schema)
        n_cont = len(continuous_columns(schema))
        cats = categorical_columns(schema)
        values = np.asarray(self.values, dtype=float)
        if values.ndim == 1 and values.size == 0:
            values = values.reshape(0, n_cont)
        m = values.shape[0]
        values = values.reshape(m, n_cont)
        labels = self.labels
        labels = np.zeros((m, 0), dtype=np.int64) if labels is None else np.asarray(labels, dtype=np.int64)
        labels = labels.reshape(m, len(cats))
        for j, col in enumerate(cats):
            if m and (labels[:, j].min() < 0 or labels[:, j].max() >= len(col.categories)):
                raise SchemaMismatch(f"label out of range in column {col.name!r}")
        object.__setattr__(self, "values", _frozen(values))
        object.__setattr__(self, "labels", _frozen(labels))
        if self.performance is not None:
            perf = np.asarray(self.performance, dtype=float)
            if perf.ndim == 1:
                perf = perf.reshape(m, -1)
            if perf.shape[0] != m:
                raise DimensionMismatch(f"{perf.shape[0]} performance rows for {m} designs")
            if self.objective_names and perf.shape[1] != len(self.objective_names):
                raise DimensionMismatch("performance width does not match objective names")
            object.__setattr__(self, "performance", _frozen(perf))
        if self.feasible is not None:
            feas = np.asarray(self.feasible, dtype=bool).reshape(-1)
            if feas.shape[0] != m:
                raise DimensionMismatch(f"{feas.shape[0]} feasibility flags for {m} designs")
            object.__setattr__(self, "feasible", _frozen(feas))
        object.__setattr__(self, "objective_names", tuple(self.objective_names))

    def __len__(self) -> int:
        return self.values.shape[0]

    def __iter__(self) -> Iterator[DesignRecord]:
        for i in range(len(self)):
            yield self.record(i)

    def record(self, i: int) -> DesignRecord:
        return DesignRecord(tuple(self.values[i]), tuple(self.labels[i]))

    @property
    def records(self) -> list[DesignRecord]:
        return list(self)

    @classmethod
    def from_records(cls, schema, records: Sequence[DesignRecord], **kwargs) -> "DesignSet":
        schema = validate_schema(schema)
        for r in records:
            r.validate(schema)
        n_cont = len(continuous_columns(schema))
        n_cat = len(schema) - n_cont
        values = np.array([r.values for r in records], dtype=float).reshape(len(records), n_cont)
        labels = np.array([r.labels for r in records], dtype=np.int64).reshape(len(records), n_cat)
        return cls(schema, values, labels, **kwargs)

    def take(self, indices) -> "DesignSet":
        """Subset (or resample) rows; attached performance and flags follow."""
        idx = np.asarray(indices)
        return replace(
            self,
            values=self.values[idx],
            labels=self.labels[idx],
            performance=None if self.performance is None else self.performance[idx],
            feasible=None if self.feasible is None else self.feasible[idx],
        )

    def with_performance(self, performance, adjusted: bool = True, objective_names=None) -> "DesignSet":
        names = self.objective_names if objective_names is None else tuple(objective_names)
        return replace(self, performance=performance, adjusted=adjusted, objective_names=names)

    def with_feasible(self, feasible) -> "DesignSet":
        return replace(self, feasible=feasible)

    def column(self, name: str) -> np.ndarray:
        """Values of one column: floats for continuous, category indices otherwise."""
        cont = continuous_columns(self.schema)
        if name in cont:
            return self.values[:, cont.index(name)]
        cats = [c.name for c in categorical_columns(self.schema)]
        if name in cats:
            return self.labels[:, cats.index(name)]
        raise MissingColumn(f"no column named {name!r}")


# --------------------------------------------------------------------------- io


def _read_rows(path):
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise EmptyDataset(f"{path}: file has no header row") from None
        rows = [row for row in reader if row and any(cell.strip() for cell in row)]
    return header, rows


def _parse_float(cell: str, row: int, column: str) -> float:
    try:
        return float(cell)
    except ValueError:
        raise NonNumericCell(row, column, cell) from None


def ingest_csv(
    path: str | PathLike,
    schema: Sequence[ColumnSchema],
    objective_columns: Sequence[str] = (),
) -> DesignSet:
    """Read a design table from a UTF-8 CSV file.

    The header must contain every schema column and every objective column;
    other columns are ignored. Objective values are attached *unadjusted*.
    Row numbers in errors are 1-based data rows (the header is row 0).
    """
    schema = validate_schema(schema)
    header, rows = _read_rows(path)
    wanted = [c.name for c in schema] + list(objective_columns)
    missing = [name for name in wanted if name not in header]
    if missing:
        raise MissingColumn(f"{path}: missing column(s) {', '.join(missing)}")
    if not rows:
        raise EmptyDataset(f"{path}: no data rows")
    pos = {name: header.index(name) for name in wanted}

    values, labels, perf = [], [], []
    for r, row in enumerate(rows, start=1):
        if len(row) < len(header):
            row = row + [""] * (len(header) - len(row))
        vals, labs = [], []
        for col in schema:
            cell = row[pos[col.name]].strip()
            if col.is_categorical:
                try:
                    labs.append(col.categories.index(cell))
                except ValueError:
                    raise UnknownCategory(r, col.name, cell) from None
            else:
                vals.append(_parse_float(cell, r, col.name))
        values.append(vals)
        labels.append(labs)
        perf.append([_parse_float(row[pos[c]].strip(), r, c) for c in objective_columns])

    m = len(rows)
    return DesignSet(
        schema,
        np.array(values, dtype=float).reshape(m, -1),
        np.array(labels, dtype=np.int64).reshape(m, -1),
        performance=np.array(perf, dtype=float).reshape(m, -1) if objective_columns else None,
        objective_names=tuple(objective_columns),
        adjusted=False,
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def write_csv(path: str | PathLike, dataset: DesignSet, raw_performance=None) -> None:
    """Write a set in the same layout :func:`ingest_csv` reads.

    ``raw_performance`` (shape ``(m, n_obj)``) is written under the set's
    objective names; by default the attached performance is written as-is.
    """
    perf = dataset.performance if raw_performance is None else np.asarray(raw_performance)
    names = list(dataset.objective_names) if perf is not None else []
    cont = continuous_columns(dataset.schema)
    cats = [c for c in dataset.schema if c.is_categorical]
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow([c.name for c in dataset.schema] + names)
        for i in range(len(dataset)):
            row = []
            for col in dataset.schema:
                if col.is_categorical:
                    row.append(col.categories[dataset.labels[i, cats.index(col)]])
                else:
                    row.append(_fmt(dataset.values[i, cont.index(col.name)]))
            if perf is not None:
                row.extend(_fmt(v) for v in perf[i])
            w.writerow(row)


# ------------------------------------------------------------------ adjustment


def adjust_performance(raw, specs: Sequence[ObjectiveSpec]) -> np.ndarray:
    """Map raw objective values to strictly positive maximization values.

    ``Maximize`` entries pass through; ``MinimizeMagnitude`` entries become
    ``1 / (|raw| + epsilon)``. Accepts one vector or a ``(m, n)`` matrix.
    """
    raw = np.asarray(raw, dtype=float)
    if raw.shape[-1] != len(specs):
        raise DimensionMismatch(f"{raw.shape[-1]} raw values for {len(specs)} objectives")
    out = raw.copy()
    for i, spec in enumerate(specs):
        col = raw[..., i]
        if spec.direction is Direction.MINIMIZE_MAGNITUDE:
            out[..., i] = 1.0 / (np.abs(col) + spec.epsilon)
        else:
            bad = ~(col > 0)
            if np.any(bad):
                raise NonPositiveAdjusted(i, float(np.asarray(col)[bad].flat[0]))
    return out


def adjust_set(dataset: DesignSet, specs: Sequence[ObjectiveSpec]) -> DesignSet:
    if dataset.performance is None:
        raise NoPerformance("dataset carries no performance values")
    if dataset.adjusted:
        return dataset
    return dataset.with_performance(
        adjust_performance(dataset.performance, specs), adjusted=True,
    )


# ------------------------------------------------------------------ percentiles


def _adjusted_matrix(dataset: DesignSet) -> np.ndarray:
    if dataset.performance is None or not dataset.adjusted:
        raise NoPerformance("adjusted performance must be attached")
    if len(dataset) < 2:
        raise TooFewDesigns(f"need at least 2 designs, got {len(dataset)}")
    return dataset.performance


def percentile_targets(dataset: DesignSet, q: float) -> np.ndarray:
    """Per-objective ``q``-th percentile (inclusive linear interpolation)."""
    if not 0 <= q <= 100:
        raise InvalidParameter(f"percentile {q} outside [0, 100]")
    perf = _adjusted_matrix(dataset)
    return np.percentile(perf, q, axis=0, method="linear")


def percentile_reference(dataset: DesignSet, q: float) -> np.ndarray:
    """Hypervolume reference point at the ``q``-th percentile of each objective."""
    return percentile_targets(dataset, q)


# -------------------------------------------------------------------- encoding


@dataclass(frozen=True)
class Standardizer:
    """Per-continuous-column mean and standard deviation for z-scoring."""

    columns: tuple[str, ...]
    mean: np.ndarray = field(repr=False)
    std: np.ndarray = field(repr=False)

    @classmethod
    def fit(cls, dataset: DesignSet) -> "Standardizer":
        if len(dataset) == 0:
            raise EmptyDataset("cannot fit a standardizer on an empty set")
        return cls(
            tuple(continuous_columns(dataset.schema)),
            _frozen(dataset.values.mean(axis=0)),
            _frozen(dataset.values.std(axis=0)),
        )

    def transform(self, values: np.ndarray) -> np.ndarray:
        values = np.asarray(values, dtype=float)
        safe = np.where(self.std > 0, self.std, 1.0)
        # zero-variance columns collapse to 0
        return np.where(self.std > 0, (values - self.mean) / safe, 0.0)


def _check_standardizer(schema, standardizer: Standardizer | None) -> None:
    if standardizer is not None and tuple(continuous_columns(schema)) != standardizer.columns:
        raise SchemaMismatch("standardizer was fit on a different set of continuous columns")


def encode_for_distance(
    record: DesignRecord,
    schema: Sequence[ColumnSchema],
    standardizer: Standardizer | None = None,
) -> np.ndarray:
    """Numeric vector for one design: continuous block, then one-hot categoricals."""
    record.validate(schema)
    _check_standardizer(schema, standardizer)
    values = np.asarray(record.values, dtype=float)
    if standardizer is not None:
        values = standardizer.transform(values)
    parts = [values]
    for col, lab in zip(categorical_columns(schema), record.labels):
        hot = np.zeros(len(col.categories))
        hot[lab] = 1.0
        parts.append(hot)
    return np.concatenate(parts)


def encode_set(dataset: DesignSet, standardizer: Standardizer | None = None) -> np.ndarray:
    """Row-wise :func:`encode_for_distance` for a whole set, shape ``(m, width)``."""
    _check_standardizer(dataset.schema, standardizer)
    values = dataset.values
    if standardizer is not None:
        values = standardizer.transform(values)
    parts = [values]
    for j, col in enumerate(categorical_columns(dataset.schema)):
        parts.append(np.eye(len(col.categories))[dataset.labels[:, j]])
    return np.hstack(parts) if parts else np.zeros((len(dataset), 0))
