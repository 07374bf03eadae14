"""Scatter data for comparing the local Moran formulations.

Two views of the same per-unit values: MI1 against MI3 is exactly
collinear through the origin with slope 1/gamma = 1/(sigma2*V0), because
the two sets differ by that one constant. MI1 against MI2 is not collinear
in general, since their per-unit ratio sigma2*Vi[i] varies with the unit;
the least-squares line through the origin leaves visible residuals, and
that contrast is the point of the figure.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lisa import LisaTable
from .matrices import FloatArray


@dataclass(frozen=True)
class OriginFit:
    """Least-squares line through the origin: slope = sum(xy)/sum(x^2)."""

    slope: float
    fitted: FloatArray
    residuals: FloatArray
    max_abs_residual: float
    r_squared: float


def fit_through_origin(x: np.ndarray, y: np.ndarray) -> OriginFit:
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    sxx = float(x @ x)
    if sxx == 0.0:
        raise ValueError("cannot fit a line through the origin to all-zero x")
    slope = float(x @ y) / sxx
    fitted = slope * x
    residuals = y - fitted
    syy = float(y @ y)
    r_squared = 1.0 if syy == 0.0 else 1.0 - float(residuals @ residuals) / syy
    for arr in (fitted, residuals):
        arr.setflags(write=False)
    return OriginFit(slope, fitted, residuals, float(np.max(np.abs(residuals))), r_squared)


@dataclass(frozen=True)
class ScatterData:
    """Per-unit points plus both origin fits.

    fit_mi3.slope reproduces 1/(sigma2*V0) to float precision and its
    residuals vanish; fit_mi2 generally does not, and its max_abs_residual
    quantifies by how much the row-normalized formulation deviates from a
    single shared scale.
    """

    labels: tuple[str, ...]
    mi1: FloatArray
    mi2: FloatArray
    mi3: FloatArray
    fit_mi2: OriginFit
    fit_mi3: OriginFit


def build_scatter(table: LisaTable) -> ScatterData:
    return ScatterData(
        labels=table.labels,
        mi1=table.mi1,
        mi2=table.mi2,
        mi3=table.mi3,
        fit_mi2=fit_through_origin(table.mi1, table.mi2),
        fit_mi3=fit_through_origin(table.mi1, table.mi3),
    )


def render_svg(scatter: ScatterData, path: str) -> None:
    """Write a static two-panel SVG of both scatters with their fit lines."""
    import matplotlib

    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    with matplotlib.rc_context({"svg.hashsalt": "lisa-kit"}):
        fig, axes = plt.subplots(1, 2, figsize=(11, 4.5))
        panels = (
            (axes[0], scatter.mi2, scatter.fit_mi2, "row-normalized (MI2)"),
            (axes[1], scatter.mi3, scatter.fit_mi3, "globally normalized (MI3)"),
        )
        for ax, yvals, fit, title in panels:
            ax.scatter(scatter.mi1, yvals, s=22, color="#1f77b4", zorder=3)
            order = np.argsort(scatter.mi1)
            ax.plot(
                scatter.mi1[order],
                fit.fitted[order],
                color="#d62728",
                linewidth=1.2,
                label=f"slope {fit.slope:.6e}",
            )
            ax.axhline(0.0, color="#999999", linewidth=0.6)
            ax.axvline(0.0, color="#999999", linewidth=0.6)
            ax.set_xlabel("raw local Moran (MI1)")
            ax.set_ylabel(title)
            ax.legend(loc="best", fontsize=8)
        fig.tight_layout()
        fig.savefig(path, format="svg", metadata={"Date": None})
        plt.close(fig)
