"""Exception types shared across the package.

Data-quality problems derive from ValidationError so callers can tell bad
input apart from wiring mistakes (DimensionMismatch, WrongNormalization)
and from file-format trouble (CsvFormatError, which names file and line).
"""

from __future__ import annotations


class LisaKitError(Exception):
    """Base class for every error raised by lisa_kit."""


class ValidationError(LisaKitError):
    """Input data violates a structural invariant."""


class AsymmetricDistance(ValidationError):
    """d[i][j] and d[j][i] disagree beyond tolerance."""


class NonZeroDiagonal(ValidationError):
    """A self-distance is not zero."""


class NonPositiveOffDiagonal(ValidationError):
    """An off-diagonal distance is zero or negative."""


class EmptyRow(ValidationError):
    """A contiguity row sums to zero, so row normalization is undefined."""


class ZeroVariance(ValidationError):
    """All attribute values are identical; standardization is undefined."""


class ZeroRange(ValidationError):
    """max(x) equals min(x); range normalization is undefined."""


class ZeroSum(ValidationError):
    """The attribute values sum to zero; share normalization is undefined."""


class LabelMismatch(ValidationError):
    """Unit labels of two inputs do not line up."""


class DimensionMismatch(LisaKitError):
    """Two inputs describe a different number of spatial units."""


class WrongNormalization(LisaKitError):
    """A weight matrix with the wrong normalization was passed to a statistic."""


class CsvFormatError(LisaKitError):
    """A CSV file could not be parsed."""

    def __init__(self, path: str, line: int, message: str):
        super().__init__(f"{path}:{line}: {message}")
        self.path = str(path)
        self.line = line
