"""Figure rendering for CLI runs.

Renders the sweep / integrand data already written as CSV into matplotlib
figures on disk.  Purely a presentation layer: nothing here feeds back
into the numerics.
"""

from __future__ import annotations

from typing import Dict, List, Sequence

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

_STYLE = {
    "font.size": 11,
    "axes.labelsize": 11,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "grid.linestyle": ":",
    "lines.linewidth": 1.4,
    "figure.dpi": 150,
    "savefig.bbox": "tight",
}

_LABELS = {
    "a_m": "separation a [m]",
    "T_K": "temperature T [K]",
    "delta_m": "offset delta [m]",
    "P_Pa": "pressure [Pa]",
    "P_over_PC": "P / P_C",
    "P_over_PCref": "P / P_C",
    "P_TE_Pa": "TE pressure [Pa]",
    "P_TM_Pa": "TM pressure [Pa]",
    "F_J_per_m2": "free energy [J/m^2]",
    "S_J_per_m2K": "entropy [J/(m^2 K)]",
}


def _column(rows: List[Dict[str, float]], name: str) -> np.ndarray:
    return np.array([row[name] for row in rows], dtype=float)


def render_rows(path: str, rows: List[Dict[str, float]], xcol: str,
                ycols: Sequence[str], logx: bool = False,
                title: str = "") -> None:
    """Line plot of selected columns against xcol, saved to path."""
    if not rows:
        raise ValueError("no rows to plot")
    with plt.rc_context(_STYLE):
        fig, ax = plt.subplots(figsize=(5.2, 3.6))
        x = _column(rows, xcol)
        for ycol in ycols:
            y = _column(rows, ycol)
            ax.plot(x, y, label=_LABELS.get(ycol, ycol))
        if logx:
            ax.set_xscale("log")
        ax.set_xlabel(_LABELS.get(xcol, xcol))
        if len(ycols) == 1:
            ax.set_ylabel(_LABELS.get(ycols[0], ycols[0]))
        else:
            ax.legend(frameon=False)
        if title:
            ax.set_title(title)
        fig.savefig(path)
        plt.close(fig)


def render_integrand(path: str, rows: List[Dict[str, float]],
                     title: str = "") -> None:
    """Heatmaps of the TE, TM and total integrands on the (zeta, kperp) grid."""
    if not rows:
        raise ValueError("no rows to plot")
    zetas = np.unique(_column(rows, "zeta_rad_per_s"))
    kperps = np.unique(_column(rows, "kperp_per_m"))
    shape = (len(zetas), len(kperps))
    with plt.rc_context(_STYLE):
        fig, axes = plt.subplots(1, 3, figsize=(11.5, 3.4), sharey=True)
        for ax, col in zip(axes, ("I_TE", "I_TM", "I_total")):
            grid = np.abs(_column(rows, col)).reshape(shape)
            mesh = ax.pcolormesh(kperps, zetas, grid, shading="auto")
            ax.set_xscale("log")
            ax.set_yscale("log")
            ax.set_xlabel("k_perp [1/m]")
            ax.set_title(f"|{col}|")
            fig.colorbar(mesh, ax=ax)
        axes[0].set_ylabel("zeta [rad/s]")
        if title:
            fig.suptitle(title)
        fig.savefig(path)
        plt.close(fig)
