"""Distance, contiguity, and weight matrices.

The pipeline runs in three steps: a symmetric positive distance matrix is
turned into a contiguity matrix by a distance-decay kernel, and the
contiguity matrix is normalized into a weight matrix, either globally
(every entry divided by the grand total, so the whole matrix sums to 1 and
symmetry survives) or by row (each entry divided by its row total, so each
row sums to 1 and symmetry is generally destroyed). The two normalizations
are deliberately kept apart as tagged values: every downstream statistic
states which one it needs, and mixing them up is exactly the mistake this
package exists to expose.

All matrix payloads are float64 numpy arrays marked read-only, so shared
instances are safe to use concurrently.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np
from numpy.typing import NDArray

from .errors import (
    AsymmetricDistance,
    DimensionMismatch,
    EmptyRow,
    LabelMismatch,
    NonPositiveOffDiagonal,
    NonZeroDiagonal,
    ValidationError,
    WrongNormalization,
)

FloatArray = NDArray[np.float64]

#: Relative tolerance beyond which distance input is rejected as asymmetric.
SYMMETRY_RTOL = 1e-9


def _readonly(values, shape_name: str) -> FloatArray:
    out = np.array(values, dtype=np.float64)
    if not np.all(np.isfinite(out)):
        raise ValidationError(f"{shape_name} contains non-finite entries")
    out.setflags(write=False)
    return out


def check_labels(labels, n: int) -> tuple[str, ...]:
    labels = tuple(str(lab) for lab in labels)
    if len(labels) != n:
        raise DimensionMismatch(f"{len(labels)} labels for {n} units")
    if len(set(labels)) != len(labels):
        raise ValidationError("unit labels must be unique")
    return labels


def require_same_units(a: tuple[str, ...], b: tuple[str, ...], what: str) -> None:
    """Reject inputs that do not describe the same units in the same order."""
    if len(a) != len(b):
        raise DimensionMismatch(f"{what}: {len(a)} units vs {len(b)} units")
    if a != b:
        raise LabelMismatch(f"{what}: unit labels disagree or are ordered differently")


@dataclass(frozen=True)
class Kernel:
    """Distance-decay kernel mapping positive distances to contiguity values.

    Three kinds are supported:

    * ``inverse``      v = 1/d
    * ``power``        v = d**(-beta), beta > 0
    * ``threshold``    v = 1 if d <= radius else 0, radius > 0
    """

    kind: str
    param: float | None = None

    @classmethod
    def inverse(cls) -> "Kernel":
        return cls("inverse")

    @classmethod
    def power(cls, beta: float) -> "Kernel":
        beta = float(beta)
        if not beta > 0:
            raise ValueError(f"power kernel exponent must be > 0, got {beta}")
        return cls("power", beta)

    @classmethod
    def threshold(cls, radius: float) -> "Kernel":
        radius = float(radius)
        if not radius > 0:
            raise ValueError(f"threshold kernel radius must be > 0, got {radius}")
        return cls("threshold", radius)

    @classmethod
    def parse(cls, text: str) -> "Kernel":
        """Parse the CLI spellings ``inverse``, ``power:B``, ``threshold:R``."""
        name, sep, arg = text.strip().partition(":")
        if name == "inverse":
            if sep:
                raise ValueError("inverse kernel takes no parameter")
            return cls.inverse()
        if name in ("power", "threshold"):
            if not sep or not arg:
                raise ValueError(f"{name} kernel needs a parameter, e.g. {name}:2")
            try:
                value = float(arg)
            except ValueError:
                raise ValueError(f"bad {name} kernel parameter: {arg!r}") from None
            return cls.power(value) if name == "power" else cls.threshold(value)
        raise ValueError(f"unknown kernel {text!r} (expected inverse, power:B or threshold:R)")

    def apply(self, distances: FloatArray) -> FloatArray:
        """Map an array of strictly positive distances through the kernel."""
        if self.kind == "inverse":
            return 1.0 / distances
        if self.kind == "power":
            return distances ** (-self.param)
        if self.kind == "threshold":
            return (distances <= self.param).astype(np.float64)
        raise ValueError(f"unknown kernel kind {self.kind!r}")

    def __str__(self) -> str:
        if self.param is None:
            return self.kind
        return f"{self.kind}:{self.param:g}"


class Normalization(Enum):
    """How a contiguity matrix was turned into weights."""

    GLOBAL = "global"
    ROW = "row"


@dataclass(frozen=True)
class DistanceMatrix:
    """Pairwise distances between n labeled units.

    Invariants enforced at construction: square, n >= 2, zero diagonal,
    symmetric within SYMMETRY_RTOL, strictly positive off the diagonal.
    """

    labels: tuple[str, ...]
    d: FloatArray

    @classmethod
    def from_array(cls, labels, d) -> "DistanceMatrix":
        arr = _readonly(d, "distance matrix")
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise DimensionMismatch(f"distance matrix must be square, got shape {arr.shape}")
        n = arr.shape[0]
        if n < 2:
            raise ValidationError("need at least 2 units")
        labels = check_labels(labels, n)
        diag = np.diag(arr)
        if np.any(diag != 0.0):
            bad = int(np.flatnonzero(diag != 0.0)[0])
            raise NonZeroDiagonal(f"self-distance of {labels[bad]} is {diag[bad]}, expected 0")
        gap = np.abs(arr - arr.T)
        tol = SYMMETRY_RTOL * np.maximum(1.0, np.abs(arr))
        if np.any(gap > tol):
            i, j = np.unravel_index(int(np.argmax(gap - tol)), arr.shape)
            raise AsymmetricDistance(
                f"d[{labels[i]},{labels[j]}]={arr[i, j]} but d[{labels[j]},{labels[i]}]={arr[j, i]}"
            )
        off = ~np.eye(n, dtype=bool)
        if np.any(arr[off] <= 0.0):
            flat = np.where(off & (arr <= 0.0))
            i, j = int(flat[0][0]), int(flat[1][0])
            raise NonPositiveOffDiagonal(
                f"distance between {labels[i]} and {labels[j]} is {arr[i, j]}, expected > 0"
            )
        return cls(labels, arr)

    @property
    def n(self) -> int:
        return self.d.shape[0]


@dataclass(frozen=True)
class ContiguityMatrix:
    """Kernel-transformed distances: v[i][j] = kernel(d[i][j]), zero diagonal.

    Carries its grand total v0 and row totals vi because both reappear as
    scaling constants all over the local statistics.
    """

    labels: tuple[str, ...]
    v: FloatArray
    v0: float
    vi: FloatArray
    kernel: Kernel

    @property
    def n(self) -> int:
        return self.v.shape[0]


@dataclass(frozen=True)
class WeightMatrix:
    """A normalized contiguity matrix tagged with how it was normalized."""

    labels: tuple[str, ...]
    w: FloatArray
    norm: Normalization

    @property
    def n(self) -> int:
        return self.w.shape[0]


def build_contiguity(distances: DistanceMatrix, kernel: Kernel) -> ContiguityMatrix:
    """Apply a kernel off-diagonal; diagonal stays zero.

    Raises EmptyRow when a threshold kernel isolates a unit (its whole row
    becomes zero), because such a matrix cannot be row-normalized and the
    per-unit statistics for that unit would silently collapse.
    """
    n = distances.n
    off = ~np.eye(n, dtype=bool)
    v = np.zeros((n, n), dtype=np.float64)
    v[off] = kernel.apply(distances.d[off])
    vi = v.sum(axis=1)
    if np.any(vi == 0.0):
        bad = int(np.flatnonzero(vi == 0.0)[0])
        raise EmptyRow(
            f"unit {distances.labels[bad]} has no neighbors under kernel {kernel}"
        )
    v.setflags(write=False)
    vi.setflags(write=False)
    return ContiguityMatrix(distances.labels, v, float(v.sum()), vi, kernel)


def normalize_global(v: ContiguityMatrix) -> WeightMatrix:
    """Divide every entry by the grand total: weights sum to 1, symmetry kept."""
    w = v.v / v.v0
    w.setflags(write=False)
    return WeightMatrix(v.labels, w, Normalization.GLOBAL)


def normalize_row(v: ContiguityMatrix) -> WeightMatrix:
    """Divide each row by its total: every row sums to 1, matrix sums to n.

    Row normalization does not preserve symmetry unless all row totals
    coincide, which is why statistics built on it stop matching their
    globally normalized counterparts.
    """
    if np.any(v.vi == 0.0):
        bad = int(np.flatnonzero(v.vi == 0.0)[0])
        raise EmptyRow(f"unit {v.labels[bad]} has an all-zero contiguity row")
    w = v.v / v.vi[:, None]
    w.setflags(write=False)
    return WeightMatrix(v.labels, w, Normalization.ROW)


def require_normalization(w: WeightMatrix, norm: Normalization, what: str) -> None:
    if w.norm is not norm:
        raise WrongNormalization(
            f"{what} needs {norm.value}-normalized weights, got {w.norm.value}-normalized"
        )
