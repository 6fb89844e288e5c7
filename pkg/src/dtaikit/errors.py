"""Exception types raised across dtaikit.

Every exception carries a short machine-readable ``code`` (the class name by
default) which the command-line interface prints on failure.
"""


class DtaiError(ValueError):
    """Base class for all dtaikit errors."""

    @property
    def code(self) -> str:
        return type(self).__name__


# data / schema
class MissingColumn(DtaiError):
    pass


class UnknownCategory(DtaiError):
    def __init__(self, row: int, column: str, value: str = ""):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: unknown category {value!r}")


class NonNumericCell(DtaiError):
    def __init__(self, row: int, column: str, value: str = ""):
        self.row = row
        self.column = column
        super().__init__(f"row {row}, column {column!r}: not a number: {value!r}")


class EmptyDataset(DtaiError):
    pass


class SchemaMismatch(DtaiError):
    pass


class UnknownColumn(DtaiError):
    pass


class NoPerformance(DtaiError):
    pass


class TooFewDesigns(DtaiError):
    pass


class NoFeasibleDesigns(DtaiError):
    pass


# numerics
class NonPositiveAdjusted(DtaiError):
    def __init__(self, index: int, value: float):
        self.index = index
        super().__init__(f"objective {index}: adjusted value {value!r} is not > 0")


class NonPositiveInput(DtaiError):
    def __init__(self, index: int, what: str = "value"):
        self.index = index
        super().__init__(f"{what} at index {index} must be strictly positive")


class InvalidParameter(DtaiError):
    pass


class InvalidDimension(DtaiError):
    pass


class DimensionMismatch(DtaiError):
    pass


class EmptyFront(DtaiError):
    pass


class EmptyInput(DtaiError):
    pass


class DegenerateSamples(DtaiError):
    pass


class OutOfRange(DtaiError):
    def __init__(self, index: int, value: float):
        self.index = index
        super().__init__(f"entry {index} = {value!r} lies outside [0, 1]")


class ConstantObjective(DtaiError):
    def __init__(self, index: int):
        self.index = index
        super().__init__(f"objective {index} is constant; min-max normalization undefined")


class ConfigError(DtaiError):
    """Malformed or inconsistent run configuration."""
