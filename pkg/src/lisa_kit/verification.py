"""Mechanical verification of the identities linking the local statistics.

run_identity_suite() checks the ten exact relations (sum laws, per-unit
scalings, the cross-set ratio, the Moran/Geary link and the Moran-to-Geary
conversion) and expects every one to hold. run_refutation_audit() checks
the two widely circulated but false aggregation claims for the
row-normalized formulation and expects both to fail, while their corrected
counterparts hold on the same data. Both suites report numbers, never bare
booleans: each check record carries its left and right side, the absolute
and relative gap, the tolerance applied, and a verdict.

Tolerances come in three tiers. Relations that are the same float algebra
resummed get 1e-12; single-expression identities get 1e-9; checks that
chain several separately computed scalars (products like gamma_c*sigma2*C)
get 1e-6. Relative gaps are measured against the larger side, floored by
the magnitude of the summed terms so that a per-unit value which happens
to cancel to ~0 cannot manufacture a spurious failure out of float noise.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .matrices import (
    ContiguityMatrix,
    DistanceMatrix,
    Kernel,
    WeightMatrix,
    build_contiguity,
    normalize_global,
    normalize_row,
    require_same_units,
)
from .variables import AttributeVector, TransformSet, transform
from .global_stats import global_geary, global_moran
from .lisa import (
    LisaTable,
    compute_lisa_table,
    local_geary_from_moran,
)

TOL_EXACT = 1e-12
TOL_IDENTITY = 1e-9
TOL_CHAINED = 1e-6
#: A refuted claim must miss by more than this (relative) to count as refuted.
REFUTATION_MIN_GAP = 1e-6

VERDICT_HOLDS = "Identity-Holds"
VERDICT_REFUTED = "Claim-Refuted-As-Expected"
VERDICT_UNEXPECTED = "Unexpected"


@dataclass(frozen=True)
class Dataset:
    """A distance matrix, an attribute vector over the same units, a kernel."""

    distances: DistanceMatrix
    values: AttributeVector
    kernel: Kernel = Kernel.inverse()

    def __post_init__(self):
        require_same_units(self.distances.labels, self.values.labels, "dataset")

    @property
    def labels(self) -> tuple[str, ...]:
        return self.distances.labels

    @property
    def n(self) -> int:
        return self.distances.n


def random_instance(n: int, seed: int, kernel: Kernel = Kernel.inverse()) -> Dataset:
    """Deterministic random dataset: same (n, seed) gives bitwise-equal data.

    Distances are uniform on [1, 100], symmetrized by averaging with the
    transpose, diagonal zeroed. Values are uniform on [1, 1000], redrawn in
    the (practically unreachable) event the variance underflows to zero.
    """
    if n < 3:
        raise ValueError(f"need n >= 3, got {n}")
    rng = np.random.default_rng(seed)
    raw = rng.uniform(1.0, 100.0, size=(n, n))
    d = (raw + raw.T) / 2.0
    np.fill_diagonal(d, 0.0)
    width = len(str(n))
    labels = tuple(f"u{i + 1:0{width}d}" for i in range(n))
    while True:
        x = rng.uniform(1.0, 1000.0, size=n)
        if float(np.var(x)) > 0.0:
            break
    return Dataset(
        distances=DistanceMatrix.from_array(labels, d),
        values=AttributeVector.from_values(labels, x),
        kernel=kernel,
    )


@dataclass(frozen=True)
class ScalarContext:
    """The scaling constants every check is phrased in.

    gamma = sigma2*V0 converts set 3 Moran values to set 1;
    gamma_c = 2n*V0/(n-1) appears in the raw Geary sum law; their product
    relation gamma_c*sigma2 = 2*s2*V0 is enforced here at construction.
    gamma_c_star is the data-dependent coefficient in the true aggregate of
    the row-normalized Geary values.
    """

    n: int
    v0: float
    sigma2: float
    s2: float
    gamma: float
    gamma_c: float
    gamma_c_star: float
    moran_i: float
    geary_c: float

    def __post_init__(self):
        lhs = self.gamma_c * self.sigma2
        rhs = 2.0 * self.s2 * self.v0
        if abs(lhs - rhs) > 1e-12 * max(abs(lhs), abs(rhs)):
            raise ValidationError(
                f"inconsistent scaling constants: gamma_c*sigma2={lhs!r} "
                f"but 2*s2*V0={rhs!r}"
            )


@dataclass(frozen=True)
class IdentityCheck:
    """One verified relation, with both sides on the record."""

    check_id: str
    relation: str
    lhs: float
    rhs: float
    abs_gap: float
    rel_gap: float
    tolerance: float
    verdict: str

    def as_dict(self) -> dict:
        return {
            "check_id": self.check_id,
            "relation": self.relation,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_gap": self.abs_gap,
            "rel_gap": self.rel_gap,
            "tolerance": self.tolerance,
            "verdict": self.verdict,
        }


def _rel_gap(lhs: float, rhs: float, floor: float = 0.0) -> float:
    gap = abs(lhs - rhs)
    if gap == 0.0:
        return 0.0
    denom = max(abs(lhs), abs(rhs), floor)
    return gap / denom if denom > 0.0 else math.inf


def _identity_scalar(
    check_id: str, relation: str, lhs: float, rhs: float, tol: float, floor: float = 0.0
) -> IdentityCheck:
    rel = _rel_gap(lhs, rhs, floor)
    verdict = VERDICT_HOLDS if rel <= tol else VERDICT_UNEXPECTED
    return IdentityCheck(check_id, relation, float(lhs), float(rhs),
                         abs(float(lhs) - float(rhs)), rel, tol, verdict)


def _identity_vector(
    check_id: str,
    relation: str,
    lhs: np.ndarray,
    rhs: np.ndarray,
    tol: float,
    floor: np.ndarray | None = None,
) -> IdentityCheck:
    """Check a per-unit relation; the record carries the worst unit."""
    lhs = np.asarray(lhs, dtype=np.float64)
    rhs = np.asarray(rhs, dtype=np.float64)
    if floor is None:
        floor = np.zeros_like(lhs)
    rels = np.array(
        [_rel_gap(float(a), float(b), float(f)) for a, b, f in zip(lhs, rhs, floor)]
    )
    worst = int(np.argmax(rels))
    rel = float(rels[worst])
    verdict = VERDICT_HOLDS if rel <= tol else VERDICT_UNEXPECTED
    return IdentityCheck(
        check_id, relation, float(lhs[worst]), float(rhs[worst]),
        float(abs(lhs[worst] - rhs[worst])), rel, tol, verdict,
    )


def _refuted_claim(check_id: str, relation: str, lhs: float, rhs: float) -> IdentityCheck:
    rel = _rel_gap(lhs, rhs)
    verdict = VERDICT_REFUTED if rel > REFUTATION_MIN_GAP else VERDICT_UNEXPECTED
    return IdentityCheck(check_id, relation, float(lhs), float(rhs),
                         abs(float(lhs) - float(rhs)), rel, REFUTATION_MIN_GAP, verdict)


@dataclass(frozen=True)
class VerificationReport:
    """Scalar context plus check records, ordered by check id."""

    context: ScalarContext
    checks: tuple[IdentityCheck, ...]

    @property
    def all_as_expected(self) -> bool:
        return all(
            c.verdict in (VERDICT_HOLDS, VERDICT_REFUTED) for c in self.checks
        )

    def as_dict(self) -> dict:
        ctx = self.context
        return {
            "context": {
                "n": ctx.n,
                "V0": ctx.v0,
                "sigma2": ctx.sigma2,
                "s2": ctx.s2,
                "gamma": ctx.gamma,
                "gamma_c": ctx.gamma_c,
                "gamma_c_star": ctx.gamma_c_star,
                "I": ctx.moran_i,
                "C": ctx.geary_c,
            },
            "checks": [c.as_dict() for c in self.checks],
        }

    def to_json(self) -> str:
        return json.dumps(self.as_dict(), indent=2)

    def to_text(self, precision: int = 4, header: bool = True) -> str:
        ctx = self.context
        p = precision
        lines = []
        if header:
            lines += [
                f"n={ctx.n}  V0={ctx.v0:.{p}f}  sigma2={ctx.sigma2:.{p}f}  s2={ctx.s2:.{p}f}",
                f"gamma={ctx.gamma:.{p}f}  gamma_c={ctx.gamma_c:.{p}f}  "
                f"gamma_c_star={ctx.gamma_c_star:.{p}f}",
                f"I={ctx.moran_i:.{p}f}  C={ctx.geary_c:.{p}f}",
                "",
            ]
        width = max(len(c.check_id) for c in self.checks)
        for c in self.checks:
            lines.append(
                f"[{c.verdict:<26}] {c.check_id:<{width}}  "
                f"lhs={c.lhs:.{p}f}  rhs={c.rhs:.{p}f}  "
                f"rel_gap={c.rel_gap:.3e}  tol={c.tolerance:g}"
            )
            lines.append(f"{'':{29 + width}}{c.relation}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class _Pieces:
    """Everything the checks consume, computed once per dataset."""

    v: ContiguityMatrix
    t: TransformSet
    wg: WeightMatrix
    wr: WeightMatrix
    table: LisaTable
    moran_i: float
    geary_c: float


def _prepare(dataset: Dataset) -> tuple[ScalarContext, _Pieces]:
    v = build_contiguity(dataset.distances, dataset.kernel)
    t = transform(dataset.values)
    wg = normalize_global(v)
    wr = normalize_row(v)
    table = compute_lisa_table(v, t)
    moran_i = global_moran(wg, t)
    geary_c = global_geary(wg, t)
    n = t.n
    zs_diff = t.zs[:, None] - t.zs[None, :]
    sq = zs_diff * zs_diff
    row_weighted = float(np.sum(wr.w * sq))
    global_weighted = float(np.sum(wg.w * sq))
    gamma_c_star = (2.0 * n / (n - 1)) * row_weighted / global_weighted
    ctx = ScalarContext(
        n=n,
        v0=v.v0,
        sigma2=t.sigma2,
        s2=t.s2,
        gamma=t.sigma2 * v.v0,
        gamma_c=2.0 * n * v.v0 / (n - 1),
        gamma_c_star=gamma_c_star,
        moran_i=moran_i,
        geary_c=geary_c,
    )
    return ctx, _Pieces(v, t, wg, wr, table, moran_i, geary_c)


def _sorted(checks: list[IdentityCheck]) -> tuple[IdentityCheck, ...]:
    return tuple(sorted(checks, key=lambda c: c.check_id))


def run_identity_suite(dataset: Dataset) -> VerificationReport:
    """Check the ten exact relations; every verdict should be Identity-Holds."""
    ctx, p = _prepare(dataset)
    t, v, lt = p.t, p.v, p.table
    n = ctx.n
    ay = np.abs(t.y)
    az = np.abs(t.z)
    moran_terms = ay * (v.v @ ay)

    checks = [
        _identity_scalar(
            "moran-raw-sum",
            "sum(MI1) == sigma2 * V0 * I",
            float(lt.mi1.sum()),
            ctx.gamma * ctx.moran_i,
            TOL_CHAINED,
            floor=float(moran_terms.sum()),
        ),
        _identity_scalar(
            "moran-canonical-sum",
            "sum(MI3) == I",
            float(lt.mi3.sum()),
            ctx.moran_i,
            TOL_EXACT,
            floor=float(az @ (p.wg.w @ az)),
        ),
        _identity_vector(
            "moran-raw-scaling",
            "MI1[i] == sigma2 * V0 * MI3[i]",
            lt.mi1,
            ctx.gamma * lt.mi3,
            TOL_IDENTITY,
            floor=moran_terms,
        ),
        _identity_scalar(
            "geary-raw-sum",
            "sum(GC1) == gamma_c * sigma2 * C",
            float(lt.gc1.sum()),
            ctx.gamma_c * ctx.sigma2 * ctx.geary_c,
            TOL_CHAINED,
        ),
        _identity_scalar(
            "geary-canonical-sum",
            "sum(GC3) == C",
            float(lt.gc3.sum()),
            ctx.geary_c,
            TOL_EXACT,
        ),
        _identity_vector(
            "geary-raw-scaling",
            "GC1[i] == 2 * s2 * V0 * GC3[i]",
            lt.gc1,
            lt.gratio13 * lt.gc3,
            TOL_IDENTITY,
        ),
        _identity_scalar(
            "geary-row-sum-true",
            "sum(GC2) == gamma_c_star * C",
            float(lt.gc2.sum()),
            ctx.gamma_c_star * ctx.geary_c,
            TOL_CHAINED,
        ),
        _identity_vector(
            "cross-ratio-raw-vs-row",
            "MI1[i] == sigma2*Vi[i]*MI2[i] and GC1[i] == sigma2*Vi[i]*GC2[i]",
            np.concatenate([lt.mi1, lt.gc1]),
            np.concatenate([lt.ratio12 * lt.mi2, lt.ratio12 * lt.gc2]),
            TOL_IDENTITY,
            floor=np.concatenate([moran_terms, np.zeros(n)]),
        ),
        _identity_scalar(
            "moran-geary-global-link",
            "C == (n-1)/n * (sum_ij w[i][j]*z[j]**2 - I)",
            ctx.geary_c,
            (n - 1) / n * (float(np.sum(p.wg.w @ (t.z * t.z))) - ctx.moran_i),
            TOL_IDENTITY,
            floor=(n - 1) / n * (float(np.sum(p.wg.w @ (t.z * t.z))) + abs(ctx.moran_i)),
        ),
        _identity_vector(
            "conversion-moran-to-geary",
            "GC3[i] == (n-1)/(2n) * (sum_j w[i][j]*(z[i]**2+z[j]**2) - 2*MI3[i])",
            lt.gc3,
            local_geary_from_moran(p.wg, t, lt.mi3),
            TOL_IDENTITY,
            floor=(n - 1)
            / (2 * n)
            * (t.z * t.z * p.wg.w.sum(axis=1) + p.wg.w @ (t.z * t.z) + 2 * np.abs(lt.mi3)),
        ),
    ]
    return VerificationReport(ctx, _sorted(checks))


def run_refutation_audit(dataset: Dataset) -> VerificationReport:
    """Show the false row-normalized sum claims failing while the corrected
    aggregates hold on the very same data."""
    ctx, p = _prepare(dataset)
    t, lt = p.t, p.table
    n = ctx.n
    az = np.abs(t.z)
    sum_mi2 = float(lt.mi2.sum())
    sum_gc2 = float(lt.gc2.sum())
    row_cross = float(t.z @ (p.wr.w @ t.z))
    global_cross = float(t.z @ (p.wg.w @ t.z))

    checks = [
        _refuted_claim(
            "claim-moran-row-sum",
            "sum(MI2) == n * I  (claimed aggregation law; expected to fail)",
            sum_mi2,
            n * ctx.moran_i,
        ),
        _refuted_claim(
            "claim-geary-row-sum",
            "sum(GC2) == 2*n^2*C/(n-1)  (claimed aggregation law; expected to fail)",
            sum_gc2,
            2.0 * n * n * ctx.geary_c / (n - 1),
        ),
        _identity_scalar(
            "true-moran-row-sum",
            "sum(MI2) == (sum_ij w*[i][j]z[i]z[j] / sum_ij w[i][j]z[i]z[j]) * I",
            sum_mi2,
            (row_cross / global_cross) * ctx.moran_i,
            TOL_IDENTITY,
            floor=float(az @ (p.wr.w @ az)),
        ),
        _identity_scalar(
            "true-geary-row-sum",
            "sum(GC2) == gamma_c_star * C",
            sum_gc2,
            ctx.gamma_c_star * ctx.geary_c,
            TOL_CHAINED,
        ),
    ]
    return VerificationReport(ctx, _sorted(checks))
