"""Declarative geometric feasibility rules.

Rules are plain data (loadable from JSON) checked against the continuous
columns of a design. A design is feasible when every rule passes.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Mapping, Sequence

import numpy as np

from .errors import ConfigError, UnknownColumn
from .model import ColumnSchema, DesignRecord, DesignSet, continuous_columns


class RuleKind(str, enum.Enum):
    NON_NEGATIVE = "non_negative"
    LOWER_BOUND = "lower_bound"
    UPPER_BOUND = "upper_bound"
    LINEAR_INEQUALITY = "linear_inequality"
    TRIANGLE_INEQUALITY = "triangle_inequality"


@dataclass(frozen=True)
class FeasibilityRule:
    """One named check.

    ``parameters`` by kind:

    * ``non_negative``: ``column``
    * ``lower_bound`` / ``upper_bound``: ``column``, ``bound`` (inclusive)
    * ``linear_inequality``: ``coeffs`` (column -> weight), ``rhs``; passes when
      ``sum(weight * value) <= rhs``
    * ``triangle_inequality``: ``a``, ``b``, ``c``; passes when each side is
      strictly shorter than the sum of the other two
    """

    kind: RuleKind
    label: str
    parameters: Mapping = field(default_factory=dict)

    def __post_init__(self):
        try:
            object.__setattr__(self, "kind", RuleKind(self.kind))
        except ValueError:
            raise ConfigError(f"rule {self.label!r}: unknown kind {self.kind!r}") from None
        object.__setattr__(self, "parameters", dict(self.parameters))
        required = {
            RuleKind.NON_NEGATIVE: ("column",),
            RuleKind.LOWER_BOUND: ("column", "bound"),
            RuleKind.UPPER_BOUND: ("column", "bound"),
            RuleKind.LINEAR_INEQUALITY: ("coeffs", "rhs"),
            RuleKind.TRIANGLE_INEQUALITY: ("a", "b", "c"),
        }[self.kind]
        missing = [k for k in required if k not in self.parameters]
        if missing:
            raise ConfigError(f"rule {self.label!r}: missing parameter(s) {missing}")
        if self.kind is RuleKind.TRIANGLE_INEQUALITY:
            sides = [self.parameters[k] for k in "abc"]
            if len(set(sides)) != 3:
                raise ConfigError(f"rule {self.label!r}: triangle sides must be distinct columns")

    @classmethod
    def from_dict(cls, doc: Mapping) -> "FeasibilityRule":
        try:
            return cls(doc["kind"], doc["label"], doc.get("parameters", {}))
        except KeyError as exc:
            raise ConfigError(f"rule missing key {exc}") from None

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "label": self.label, "parameters": dict(self.parameters)}

    def columns(self) -> list[str]:
        p = self.parameters
        if self.kind is RuleKind.LINEAR_INEQUALITY:
            return list(p["coeffs"])
        if self.kind is RuleKind.TRIANGLE_INEQUALITY:
            return [p["a"], p["b"], p["c"]]
        return [p["column"]]

    def evaluate(self, values: np.ndarray, index: Mapping[str, int]) -> np.ndarray:
        """Pass/fail for each row of a ``(m, n_continuous)`` value matrix."""
        p = self.parameters
        col = lambda name: values[:, index[name]]  # noqa: E731
        if self.kind is RuleKind.NON_NEGATIVE:
            return col(p["column"]) >= 0
        if self.kind is RuleKind.LOWER_BOUND:
            return col(p["column"]) >= float(p["bound"])
        if self.kind is RuleKind.UPPER_BOUND:
            return col(p["column"]) <= float(p["bound"])
        if self.kind is RuleKind.LINEAR_INEQUALITY:
            lhs = sum(float(w) * col(name) for name, w in p["coeffs"].items())
            return np.asarray(lhs) <= float(p["rhs"])
        a, b, c = col(p["a"]), col(p["b"]), col(p["c"])
        return (a < b + c) & (b < a + c) & (c < a + b)


def _column_index(schema: Sequence[ColumnSchema], rules: Sequence[FeasibilityRule]) -> dict[str, int]:
    index = {name: i for i, name in enumerate(continuous_columns(schema))}
    for rule in rules:
        for name in rule.columns():
            if name not in index:
                raise UnknownColumn(
                    f"rule {rule.label!r} references {name!r}, which is not a continuous column"
                )
    return index


def _violations(values: np.ndarray, schema, rules) -> tuple[np.ndarray, list[np.ndarray]]:
    index = _column_index(schema, rules)
    passed = [rule.evaluate(values, index) for rule in rules]
    ok = np.logical_and.reduce(passed) if passed else np.ones(len(values), dtype=bool)
    return ok, passed


def check(
    design: DesignRecord,
    rules: Sequence[FeasibilityRule],
    schema: Sequence[ColumnSchema],
) -> tuple[bool, list[str]]:
    """Check one design; returns the verdict and the sorted labels of failing rules."""
    design.validate(schema)
    values = np.asarray(design.values, dtype=float).reshape(1, -1)
    ok, passed = _violations(values, schema, rules)
    violated = sorted(rule.label for rule, p in zip(rules, passed) if not p[0])
    return bool(ok[0]), violated


def check_set(dataset: DesignSet, rules: Sequence[FeasibilityRule]) -> np.ndarray:
    ok, _ = _violations(dataset.values, dataset.schema, rules)
    return ok


def flag_set(dataset: DesignSet, rules: Sequence[FeasibilityRule]) -> DesignSet:
    """Copy of ``dataset`` with its ``feasible`` flags set from ``rules``."""
    return dataset.with_feasible(check_set(dataset, rules))


def load_rules(docs: Sequence[Mapping]) -> list[FeasibilityRule]:
    return [FeasibilityRule.from_dict(d) for d in docs]
