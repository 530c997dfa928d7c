"""Vacuum spectral measures of self-adjoint chaos elements.

The distribution of ``Y`` under the vacuum state is approximated by the
spectral measure of the compressed matrix ``P_D Y P_D`` in the vacuum vector:
eigenvalues ``lambda_i`` carry weight ``|<Omega, v_i>|^2``.  Moments of
order ``k`` are reproduced exactly once ``k * deg(Y) <= D``.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
import scipy.linalg

from .chaos import ChaosElement, matrix_rep, moment
from .exceptions import DomainError

__all__ = [
    "SpectralMeasure",
    "MomentRow",
    "vacuum_spectral_measure",
    "moment_compare",
    "semicircle_reference",
    "catalan",
    "max_window_weight",
    "atom_scan",
    "histogram",
]

MERGE_TOL = 1e-9
# eigenvectors with smaller vacuum overlap are invisible to the state
WEIGHT_FLOOR = 1e-14


@dataclass(frozen=True)
class SpectralMeasure:
    eigenvalues: np.ndarray
    weights: np.ndarray

    @property
    def points(self) -> list[tuple[float, float]]:
        return list(zip(self.eigenvalues.tolist(), self.weights.tolist()))

    def moment(self, k: int) -> float:
        return float(np.sum(self.weights * self.eigenvalues**k))

    def total_mass(self) -> float:
        return float(self.weights.sum())


def _merge(evals: np.ndarray, weights: np.ndarray, tol: float):
    groups, cur = [], [0]
    for i in range(1, len(evals)):
        if evals[i] - evals[cur[-1]] <= tol:
            cur.append(i)
        else:
            groups.append(cur)
            cur = [i]
    groups.append(cur)
    lam = np.array([evals[g].mean() for g in groups])
    w = np.array([weights[g].sum() for g in groups])
    return lam, w


def vacuum_spectral_measure(y: ChaosElement, max_degree: int, tol: float = 1e-12) -> SpectralMeasure:
    """Spectral measure of ``matrix_rep(y, max_degree)`` in the vacuum.

    Eigenvalues closer than ``1e-9`` are merged; points whose weight falls
    below ``1e-14`` are dropped.
    """
    if not y.is_self_adjoint(tol):
        raise DomainError("spectral measures need a self-adjoint element")
    if not y.is_zero() and max_degree < y.top_degree:
        raise DomainError(f"truncation {max_degree} below top degree {y.top_degree}")
    a = matrix_rep(y, max_degree).dense()
    if np.all(a.imag == 0):
        a = a.real
    a = 0.5 * (a + a.conj().T)
    evals, vecs = scipy.linalg.eigh(a)
    weights = np.abs(vecs[0, :]) ** 2
    lam, w = _merge(evals, weights, MERGE_TOL)
    keep = w > WEIGHT_FLOOR
    return SpectralMeasure(lam[keep], w[keep])


@dataclass(frozen=True)
class MomentRow:
    k: int
    exact: complex
    truncated: float | None
    in_window: bool

    @property
    def error(self) -> float | None:
        if self.truncated is None:
            return None
        return abs(self.exact - self.truncated)


def moment_compare(y: ChaosElement, max_degree: int, max_k: int) -> list[MomentRow]:
    """Exact moments next to those of the ``max_degree`` truncation.

    ``in_window`` flags the orders where agreement is guaranteed.
    """
    measure = vacuum_spectral_measure(y, max_degree)
    top = 0 if y.is_zero() else y.top_degree
    return [
        MomentRow(k, moment(y, k), measure.moment(k), k * top <= max_degree)
        for k in range(max_k + 1)
    ]


def catalan(n: int) -> int:
    return math.comb(2 * n, n) // (n + 1)


def semicircle_reference(t: float, k: int) -> float:
    """``k``'th moment of the semicircle law with variance ``t``."""
    if t <= 0:
        raise DomainError("variance must be positive")
    if k < 0:
        raise DomainError("moment order must be >= 0")
    if k % 2:
        return 0.0
    return catalan(k // 2) * t ** (k // 2)


def max_window_weight(measure: SpectralMeasure, eps: float) -> float:
    """Largest mass inside any closed interval of length ``2 * eps``."""
    lam, w = measure.eigenvalues, measure.weights
    best, lo, acc = 0.0, 0, 0.0
    for hi in range(len(lam)):
        acc += w[hi]
        while lam[hi] - lam[lo] > 2 * eps:
            acc -= w[lo]
            lo += 1
        best = max(best, acc)
    return float(best)


def atom_scan(y: ChaosElement, degrees, eps: float) -> list[tuple[int, float]]:
    """``max_window_weight`` of the truncated measure for each degree.

    A genuine atom of mass ``w`` keeps the column above ``w``; decay towards
    zero is consistent with an atomless law but proves nothing.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    return [(int(d), max_window_weight(vacuum_spectral_measure(y, d), eps)) for d in degrees]


def histogram(measure: SpectralMeasure, bins: int, lo: float | None = None, hi: float | None = None):
    """Bin the measure; returns ``(edges, weights)``.

    A measure on a single point gets one bin around it.
    """
    if bins < 1:
        raise DomainError("need at least one bin")
    lam = measure.eigenvalues
    lo = float(lam.min()) if lo is None else lo
    hi = float(lam.max()) if hi is None else hi
    if hi - lo < 1e-12:
        lo, hi, bins = lo - 0.5, hi + 0.5, 1
    counts, edges = np.histogram(lam, bins=bins, range=(lo, hi), weights=measure.weights)
    return edges, counts
