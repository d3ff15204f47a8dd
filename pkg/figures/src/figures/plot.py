"""Paper-style scatter plots from a results CSV.

Each instance is placed at (mu_norm, pi_norm) and colored by how far the
SP/HH cost ratio is from 1 on a log scale: blue means SP was cheaper, red
means HH was cheaper, white means a tie. Optional overlay points (e.g.
time-series instances) are drawn on top with text labels.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np
from matplotlib.colors import LinearSegmentedColormap, Normalize

# colorbar twin of ratio_colors' analytic ramp
_DIVERGING = LinearSegmentedColormap.from_list(
    "sp_hh", [(0.0, 0.0, 1.0), (1.0, 1.0, 1.0), (1.0, 0.0, 0.0)]
)

DEFAULT_BOUND = math.log(2.0)

_COST_COLUMNS = {
    "link": ("sp_link_cost", "hh_link_cost"),
    "node": ("sp_node_cost", "hh_node_cost"),
}


class FigureInputError(ValueError):
    """Raised for malformed or unusable input CSVs."""


@dataclass(frozen=True)
class PlotSpec:
    csv_path: str
    cost: str = "link"  # "link" or "node"
    out_path: str = "figure.png"
    overlay_path: str | None = None
    bound: float = DEFAULT_BOUND

    def __post_init__(self):
        if self.cost not in _COST_COLUMNS:
            raise FigureInputError(f"cost must be 'link' or 'node', got {self.cost!r}")
        if not self.bound > 0:
            raise FigureInputError("bound must be positive")


def _read_csv(path: str) -> list[dict[str, str]]:
    with open(path, newline="", encoding="utf-8") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise FigureInputError(f"{path}: no data rows")
    return rows


def _column(rows: list[dict[str, str]], name: str, path: str) -> np.ndarray:
    if name not in rows[0]:
        raise FigureInputError(f"{path}: missing column {name!r}")
    return np.array([float(r[name]) for r in rows])


def log_ratios(rows: list[dict[str, str]], cost: str, path: str) -> np.ndarray:
    """Signed log of the SP/HH cost ratio; positive where HH is cheaper."""
    sp_col, hh_col = _COST_COLUMNS[cost]
    sp = _column(rows, sp_col, path)
    hh = _column(rows, hh_col, path)
    with np.errstate(divide="ignore"):
        return np.log(sp) - np.log(hh)


def ratio_colors(log_ratio: np.ndarray, bound: float) -> np.ndarray:
    """RGBA per point: diverging blue-white-red, clipped at +-bound.

    Computed analytically (not via a sampled colormap LUT) so log_ratio = 0
    maps to exact white and +-bound to fully saturated red/blue.
    """
    t = np.clip(np.asarray(log_ratio, dtype=float) / bound, -1.0, 1.0)
    rgba = np.ones(t.shape + (4,))
    rgba[..., 0] = 1.0 + np.minimum(t, 0.0)  # red channel fades on the blue side
    rgba[..., 1] = 1.0 - np.abs(t)
    rgba[..., 2] = 1.0 - np.maximum(t, 0.0)
    return rgba


def load_overlay(path: str) -> list[tuple[str, float, float]]:
    """Labeled overlay points. Accepts either an explicit `label` column or
    a results CSV, whose `sigma` tag becomes the label."""
    rows = _read_csv(path)
    label_col = "label" if "label" in rows[0] else "sigma"
    if label_col not in rows[0]:
        raise FigureInputError(f"{path}: need a 'label' or 'sigma' column")
    xs = _column(rows, "mu_norm", path)
    ys = _column(rows, "pi_norm", path)
    return [(r[label_col], x, y) for r, x, y in zip(rows, xs, ys)]


def render_scatter(spec: PlotSpec) -> None:
    rows = _read_csv(spec.csv_path)
    xs = _column(rows, "mu_norm", spec.csv_path)
    ys = _column(rows, "pi_norm", spec.csv_path)
    colors = ratio_colors(log_ratios(rows, spec.cost, spec.csv_path), spec.bound)

    fig, ax = plt.subplots(figsize=(6.4, 5.6))
    ax.scatter(xs, ys, c=colors, s=14, edgecolors="none", rasterized=False)
    ax.set_xlabel(r"$\|\mu\|_2$ (marginal strength)")
    ax.set_ylabel(r"$\|\pi\|_2$ (peak strength)")
    kind = "link" if spec.cost == "link" else "node"
    ax.set_title(f"SP vs HH {kind} cost (red: HH cheaper)")

    if spec.overlay_path is not None:
        for label, x, y in load_overlay(spec.overlay_path):
            ax.plot([x], [y], marker="o", markersize=6, color="black",
                    markerfacecolor="none")
            ax.annotate(label, (x, y), textcoords="offset points",
                        xytext=(5, 5), fontsize=8)

    sm = plt.cm.ScalarMappable(
        cmap=_DIVERGING, norm=Normalize(vmin=-spec.bound, vmax=spec.bound)
    )
    fig.colorbar(sm, ax=ax, label="log(SP cost / HH cost)")
    fig.tight_layout()
    # pinned metadata so repeated renders are byte-identical regardless of
    # library patch version
    fig.savefig(spec.out_path, dpi=150, metadata={"Software": "figures"})
    plt.close(fig)
