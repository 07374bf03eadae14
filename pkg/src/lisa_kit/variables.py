"""Attribute-vector transforms.

transform() centers a variable and standardizes it twice: once with the
population standard deviation (divisor n) and once with the sample one
(divisor n-1). Both versions are always computed and carried side by side
because the local statistics downstream mix them on purpose, and the two
are close enough numerically that picking the wrong one by accident goes
unnoticed until sums stop matching.

Moments use the plain two-pass algorithm (mean first, then deviations),
which at the n <= ~1e4 scale this package targets is as accurate as it
needs to be and trivially auditable against the definitions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError, ZeroRange, ZeroSum, ZeroVariance
from .matrices import FloatArray, check_labels


@dataclass(frozen=True)
class AttributeVector:
    """One observed value per labeled unit."""

    labels: tuple[str, ...]
    x: FloatArray

    @classmethod
    def from_values(cls, labels, x) -> "AttributeVector":
        arr = np.array(x, dtype=np.float64)
        if arr.ndim != 1:
            raise ValidationError(f"attribute vector must be 1-D, got shape {arr.shape}")
        if arr.size < 2:
            raise ValidationError("need at least 2 values")
        if not np.all(np.isfinite(arr)):
            raise ValidationError("attribute vector contains non-finite entries")
        arr.setflags(write=False)
        return cls(check_labels(labels, arr.size), arr)

    @property
    def n(self) -> int:
        return self.x.size


@dataclass(frozen=True)
class TransformSet:
    """Centered and standardized views of one attribute vector.

    y  = x - mean(x)
    z  = y / sigma   with sigma**2 = sum(y**2) / n        (population)
    zs = y / s       with s**2     = sum(y**2) / (n - 1)  (sample)

    The two scalings differ only by sqrt((n-1)/n), but sums of squares
    built from them differ by n/(n-1), which is exactly the factor the
    Moran/Geary identities keep track of.
    """

    labels: tuple[str, ...]
    y: FloatArray
    z: FloatArray
    zs: FloatArray
    mean: float
    sigma2: float
    s2: float

    @property
    def n(self) -> int:
        return self.y.size

    @property
    def sigma(self) -> float:
        return math.sqrt(self.sigma2)

    @property
    def s(self) -> float:
        return math.sqrt(self.s2)


def transform(values: AttributeVector) -> TransformSet:
    """Center and doubly standardize; rejects constant input (ZeroVariance)."""
    x = values.x
    n = x.size
    mean = float(x.mean())
    y = x - mean
    sumsq = float(y @ y)
    sigma2 = sumsq / n
    if sigma2 == 0.0:
        raise ZeroVariance("attribute vector is constant, standardization undefined")
    s2 = sumsq / (n - 1)
    z = y / math.sqrt(sigma2)
    zs = y / math.sqrt(s2)
    for arr in (y, z, zs):
        arr.setflags(write=False)
    return TransformSet(values.labels, y, z, zs, mean, sigma2, s2)


def range_normalize(values: AttributeVector) -> FloatArray:
    """Rescale onto [0, 1]: (x - min) / (max - min)."""
    x = values.x
    lo = float(x.min())
    hi = float(x.max())
    if hi == lo:
        raise ZeroRange("all values identical, range normalization undefined")
    out = (x - lo) / (hi - lo)
    out.setflags(write=False)
    return out


def global_normalize_vector(values: AttributeVector) -> FloatArray:
    """Divide by the total so the entries become shares summing to 1."""
    total = float(values.x.sum())
    if total == 0.0:
        raise ZeroSum("values sum to zero, share normalization undefined")
    out = values.x / total
    out.setflags(write=False)
    return out
