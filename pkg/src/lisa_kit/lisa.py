"""Local indicators of spatial association in three formulations.

Each global statistic can be decomposed into one term per unit, but the
decomposition is only meaningful when the per-unit terms sum back to a
known multiple of the global value. Three pairings of weight matrix and
variable scaling circulate, and they are not interchangeable:

set 1 (raw): unnormalized contiguity v with the centered variable y
    MI1[i] = y[i] * sum_j v[i][j] * y[j]
    GC1[i] = sum_j v[i][j] * (y[i] - y[j])**2

set 2 (row): row-normalized weights w* with population-standardized z
    MI2[i] = z[i] * sum_j w*[i][j] * z[j]
    GC2[i] = sum_j w*[i][j] * (z[i] - z[j])**2

set 3 (canonical): globally normalized weights w, Moran side on
population z, Geary side on sample zs
    MI3[i] = z[i] * sum_j w[i][j] * z[j]
    GC3[i] = 1/2 * sum_j w[i][j] * (zs[i] - zs[j])**2

Sets 1 and 3 satisfy exact sum laws: sum(MI1) = sigma2*V0*I, sum(MI3) = I,
sum(GC1) = gamma_c*sigma2*C, sum(GC3) = C. Set 2 does not sum to the
widely claimed n*I (Moran side) or 2*n^2*C/(n-1) (Geary side); the
verification module quantifies those gaps. What set 2 does satisfy is a
per-unit ratio law shared with set 1:

    MI1[i]/MI2[i] = GC1[i]/GC2[i] = sigma2 * Vi[i]

so the raw and row formulations contain the same local information up to
a known per-unit factor, while only sets 1 and 3 aggregate cleanly.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch
from .matrices import (
    ContiguityMatrix,
    FloatArray,
    Normalization,
    WeightMatrix,
    require_normalization,
    require_same_units,
    normalize_global,
    normalize_row,
)
from .variables import TransformSet


def local_moran_raw(v: ContiguityMatrix, t: TransformSet) -> FloatArray:
    """MI1[i] = y[i] * sum_j v[i][j]*y[j]; sums to sigma2*V0*I."""
    require_same_units(v.labels, t.labels, "local_moran_raw")
    out = t.y * (v.v @ t.y)
    out.setflags(write=False)
    return out


def local_moran_row(w: WeightMatrix, t: TransformSet) -> FloatArray:
    """MI2[i] = z[i] * sum_j w*[i][j]*z[j] over row-normalized weights.

    Population-standardized z on purpose: this is the formulation whose
    per-unit ratio against MI1 is exactly sigma2*Vi[i]. Its sum is NOT
    n*I in general.
    """
    require_normalization(w, Normalization.ROW, "local_moran_row")
    require_same_units(w.labels, t.labels, "local_moran_row")
    out = t.z * (w.w @ t.z)
    out.setflags(write=False)
    return out


def local_moran(w: WeightMatrix, t: TransformSet) -> FloatArray:
    """MI3[i] = z[i] * sum_j w[i][j]*z[j]; sums exactly to Moran's I."""
    require_normalization(w, Normalization.GLOBAL, "local_moran")
    require_same_units(w.labels, t.labels, "local_moran")
    out = t.z * (w.w @ t.z)
    out.setflags(write=False)
    return out


def local_geary_raw(v: ContiguityMatrix, t: TransformSet) -> FloatArray:
    """GC1[i] = sum_j v[i][j]*(y[i]-y[j])**2; sums to gamma_c*sigma2*C."""
    require_same_units(v.labels, t.labels, "local_geary_raw")
    diff = t.y[:, None] - t.y[None, :]
    out = np.sum(v.v * diff * diff, axis=1)
    out.setflags(write=False)
    return out


def local_geary_row(w: WeightMatrix, t: TransformSet) -> FloatArray:
    """GC2[i] = sum_j w*[i][j]*(z[i]-z[j])**2 over row-normalized weights.

    Population z again, matching MI2. The sum is not 2*n^2*C/(n-1); the
    true aggregate carries a data-dependent coefficient instead.
    """
    require_normalization(w, Normalization.ROW, "local_geary_row")
    require_same_units(w.labels, t.labels, "local_geary_row")
    diff = t.z[:, None] - t.z[None, :]
    out = np.sum(w.w * diff * diff, axis=1)
    out.setflags(write=False)
    return out


def local_geary(w: WeightMatrix, t: TransformSet) -> FloatArray:
    """GC3[i] = 1/2 * sum_j w[i][j]*(zs[i]-zs[j])**2; sums exactly to C."""
    require_normalization(w, Normalization.GLOBAL, "local_geary")
    require_same_units(w.labels, t.labels, "local_geary")
    diff = t.zs[:, None] - t.zs[None, :]
    out = 0.5 * np.sum(w.w * diff * diff, axis=1)
    out.setflags(write=False)
    return out


def local_geary_from_moran(
    w: WeightMatrix, t: TransformSet, moran_local: FloatArray
) -> FloatArray:
    """Convert MI3 values into GC3 values without touching zs:

        GC3[i] = (n-1)/(2n) * (sum_j w[i][j]*(z[i]**2 + z[j]**2) - 2*MI3[i])

    Equals local_geary() to float rounding; exists so the Moran and Geary
    decompositions can be cross-checked from one another.
    """
    require_normalization(w, Normalization.GLOBAL, "local_geary_from_moran")
    require_same_units(w.labels, t.labels, "local_geary_from_moran")
    moran_local = np.asarray(moran_local, dtype=np.float64)
    if moran_local.shape != (t.n,):
        raise DimensionMismatch(
            f"expected {t.n} local Moran values, got shape {moran_local.shape}"
        )
    n = t.n
    z2 = t.z * t.z
    pair_sq = z2 * w.w.sum(axis=1) + w.w @ z2
    out = (n - 1) / (2 * n) * (pair_sq - 2.0 * moran_local)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class LisaTable:
    """All six local decompositions plus the exact per-unit ratios.

    ratio12[i] = sigma2 * Vi[i]  (MI1/MI2 and GC1/GC2, unit-dependent)
    ratio13    = sigma2 * V0     (MI1/MI3, one constant)
    gratio13   = 2 * s2 * V0     (GC1/GC3, one constant)

    Ratios are stored in product form, computed from the scaling constants
    rather than by dividing table columns, so units where a local value
    crosses zero do not blow anything up.
    """

    labels: tuple[str, ...]
    mi1: FloatArray
    mi2: FloatArray
    mi3: FloatArray
    gc1: FloatArray
    gc2: FloatArray
    gc3: FloatArray
    ratio12: FloatArray
    ratio13: float
    gratio13: float

    @property
    def n(self) -> int:
        return len(self.labels)


def ratios(v: ContiguityMatrix, t: TransformSet) -> tuple[FloatArray, float, float]:
    """The three cross-set scaling factors, in product form.

    Returns (ratio12, ratio13, gratio13) = (sigma2*vi, sigma2*v0, 2*s2*v0).
    """
    require_same_units(v.labels, t.labels, "ratios")
    ratio12 = t.sigma2 * v.vi
    ratio12.setflags(write=False)
    return ratio12, t.sigma2 * v.v0, 2.0 * t.s2 * v.v0


def compute_lisa_table(v: ContiguityMatrix, t: TransformSet) -> LisaTable:
    """Build all three formulation pairs from one contiguity matrix."""
    wg = normalize_global(v)
    wr = normalize_row(v)
    ratio12, ratio13, gratio13 = ratios(v, t)
    return LisaTable(
        labels=v.labels,
        mi1=local_moran_raw(v, t),
        mi2=local_moran_row(wr, t),
        mi3=local_moran(wg, t),
        gc1=local_geary_raw(v, t),
        gc2=local_geary_row(wr, t),
        gc3=local_geary(wg, t),
        ratio12=ratio12,
        ratio13=ratio13,
        gratio13=gratio13,
    )
