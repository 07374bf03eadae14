"""Global spatial autocorrelation statistics.

Both statistics are defined over globally normalized weights (the matrix
sums to 1), which is what lets them drop the usual normalizing quotients:

    I = sum_ij w[i][j] * z[i] * z[j]            z population-standardized
    C = 1/2 * sum_ij w[i][j] * (zs[i]-zs[j])**2  zs sample-standardized

Moran's I is a covariance-style measure and inherits the population
scaling; Geary's C is a squared-difference measure and inherits the sample
scaling. The pair is linked by one exact identity:

    C = (n-1)/n * (sum_ij w[i][j]*z[j]**2 - I)

which moran_geary_identity() exposes as a testable left/right pair.

Passing row-normalized weights here is a wiring error and raises
WrongNormalization instead of producing a plausible wrong number.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .matrices import (
    Normalization,
    WeightMatrix,
    require_normalization,
    require_same_units,
)
from .variables import TransformSet


def _aligned_global(w: WeightMatrix, t: TransformSet, what: str) -> None:
    require_normalization(w, Normalization.GLOBAL, what)
    require_same_units(w.labels, t.labels, what)


def global_moran(w: WeightMatrix, t: TransformSet) -> float:
    """Moran's I over globally normalized weights."""
    _aligned_global(w, t, "global_moran")
    return float(t.z @ (w.w @ t.z))


def global_geary(w: WeightMatrix, t: TransformSet) -> float:
    """Geary's C over globally normalized weights."""
    _aligned_global(w, t, "global_geary")
    diff = t.zs[:, None] - t.zs[None, :]
    return float(0.5 * np.sum(w.w * diff * diff))


def moran_geary_identity(w: WeightMatrix, t: TransformSet) -> tuple[float, float]:
    """Both sides of the exact link between C and I.

    Returns (lhs, rhs) with lhs = C computed from its definition and
    rhs = (n-1)/n * (sum_ij w[i][j]*z[j]**2 - I). The two agree to within
    float rounding on every valid input; a visible gap means a bug.
    """
    _aligned_global(w, t, "moran_geary_identity")
    n = t.n
    lhs = global_geary(w, t)
    weighted_sq = float(np.sum(w.w @ (t.z * t.z)))
    rhs = (n - 1) / n * (weighted_sq - global_moran(w, t))
    return lhs, rhs


def expected_values(w: WeightMatrix, t: TransformSet) -> tuple[float, float]:
    """No-autocorrelation reference points (i0, c0).

    i0 = 1/(1-n) for Moran's I; c0 = (n-1)/n * sum_ij w[i][j]*z[j]**2 + 1/n
    for Geary's C. c0 depends on the weights, i0 only on n.
    """
    _aligned_global(w, t, "expected_values")
    n = t.n
    i0 = 1.0 / (1.0 - n)
    weighted_sq = float(np.sum(w.w @ (t.z * t.z)))
    c0 = (n - 1) / n * weighted_sq + 1.0 / n
    return i0, c0


@dataclass(frozen=True)
class GlobalStats:
    """The two global statistics with their reference points."""

    n: int
    moran_i: float
    geary_c: float
    expected_i: float
    expected_c: float


def compute_global_stats(w: WeightMatrix, t: TransformSet) -> GlobalStats:
    i0, c0 = expected_values(w, t)
    return GlobalStats(
        n=t.n,
        moran_i=global_moran(w, t),
        geary_c=global_geary(w, t),
        expected_i=i0,
        expected_c=c0,
    )
