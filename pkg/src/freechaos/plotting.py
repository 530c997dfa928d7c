"""Figures written next to the CSV reports of the command line tool."""
from __future__ import annotations

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402
import numpy as np  # noqa: E402

from .spectra import SpectralMeasure, semicircle_reference  # noqa: E402

__all__ = ["plot_spectrum", "plot_atom_scan", "plot_moments"]

FIGSIZE = (6.4, 4.0)


def _finish(fig, path):
    fig.tight_layout()
    fig.savefig(path, dpi=120, metadata={"Software": None})
    plt.close(fig)


def plot_spectrum(measure: SpectralMeasure, edges, weights, path, title=None, semicircle_t=None):
    """Histogram of the truncated vacuum measure with its atoms as stems.

    If ``semicircle_t`` is given the semicircle density of that variance is
    overlaid, scaled to the bin width.
    """
    fig, ax = plt.subplots(figsize=FIGSIZE)
    widths = np.diff(edges)
    ax.bar(edges[:-1], weights, width=widths, align="edge", color="0.8", edgecolor="0.4",
           label="binned weight")
    ax.vlines(measure.eigenvalues, 0, measure.weights, color="C3", lw=1.2, label="eigenvalue weight")
    if semicircle_t:
        r = 2 * np.sqrt(semicircle_t)
        x = np.linspace(-r, r, 400)
        density = np.sqrt(np.clip(4 * semicircle_t - x**2, 0, None)) / (2 * np.pi * semicircle_t)
        ax.plot(x, density * widths.mean(), color="C0", lw=1, label="semicircle x bin width")
    ax.set_xlabel("spectral value")
    ax.set_ylabel("vacuum weight")
    if title:
        ax.set_title(title)
    ax.legend(frameon=False, fontsize=8)
    _finish(fig, path)


def plot_atom_scan(rows, eps: float, path, title=None):
    """Maximum window weight against truncation degree."""
    d = np.array([r[0] for r in rows])
    w = np.array([r[1] for r in rows])
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(d, w, "o-", color="C0")
    ax.set_xlabel("truncation degree D")
    ax.set_ylabel(f"max weight in window of radius {eps:g}")
    ax.set_ylim(0, max(1.05 * w.max(), 1e-3))
    if title:
        ax.set_title(title)
    _finish(fig, path)


def plot_moments(rows, path, semicircle_t=None):
    """Exact moments against those of the truncated measure."""
    k = np.array([r.k for r in rows])
    exact = np.array([complex(r.exact).real for r in rows])
    fig, ax = plt.subplots(figsize=FIGSIZE)
    ax.plot(k, exact, "o", color="C0", label="exact")
    trunc = [r.truncated for r in rows]
    if all(t is not None for t in trunc):
        ax.plot(k, trunc, "x", color="C3", label="truncated measure")
    if semicircle_t:
        ax.plot(k, [semicircle_reference(semicircle_t, int(j)) for j in k], "--", color="0.5",
                lw=0.8, label="semicircle")
    ax.set_xlabel("order k")
    ax.set_ylabel("moment")
    ax.legend(frameon=False, fontsize=8)
    _finish(fig, path)
