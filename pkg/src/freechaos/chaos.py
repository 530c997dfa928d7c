"""Finite Wigner chaos as exact coefficient data.

A :class:`ChaosElement` stores the kernels ``(f_0, ..., f_N)`` of
``Y = sum_n I_n(f_n)``.  Products are evaluated with the contraction formula

    I_n(f) I_k(g) = sum_p I_{n+k-2p}(f ~p g),

which keeps the finite chaos closed, so nothing here truncates.  Fock
matrices (:func:`matrix_rep`) are only built for spectra and norm estimates.
"""
from __future__ import annotations

from collections.abc import Mapping
from numbers import Number

import numpy as np
import scipy.sparse as sp

from .exceptions import DomainError, ShapeError
from .fock import FockBasis, FockVector, OperatorMatrix
from .grid import CoeffTensor, GridSpec, contract_arrays, project_indicator, reverse_conj

__all__ = [
    "ChaosElement",
    "wigner",
    "ito_product",
    "adjoint",
    "trace",
    "l2_inner",
    "l2_norm",
    "matrix_rep",
    "fock_vector",
    "free_bm",
    "moment",
    "haagerup_bound",
]


def _array(value, grid: GridSpec) -> np.ndarray:
    if isinstance(value, CoeffTensor):
        if value.grid != grid:
            raise ShapeError("tensor lives on a different grid")
        return value.coeffs
    return CoeffTensor(grid, value).coeffs


class ChaosElement:
    """``sum_n I_n(f_n)`` for finitely many kernels on one grid.

    Parameters
    ----------
    grid : GridSpec
    degrees : mapping of int to CoeffTensor or array-like
        Kernel of each chaos order; absent orders are zero.
    """

    __slots__ = ("grid", "_parts")

    def __init__(self, grid: GridSpec, degrees: Mapping | None = None):
        parts = {}
        for n, value in (degrees or {}).items():
            n = int(n)
            if n < 0:
                raise DomainError(f"negative chaos order {n}")
            arr = _array(value, grid)
            if arr.ndim != n:
                raise ShapeError(f"order {n} kernel has {arr.ndim} axes")
            parts[n] = arr
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "_parts", dict(sorted(parts.items())))

    def __setattr__(self, name, value):
        raise AttributeError("ChaosElement is immutable")

    # -- constructors -------------------------------------------------------
    @classmethod
    def zero(cls, grid: GridSpec) -> "ChaosElement":
        return cls(grid)

    @classmethod
    def scalar(cls, grid: GridSpec, value: complex) -> "ChaosElement":
        return cls(grid, {0: np.asarray(value, dtype=complex)})

    # -- access -------------------------------------------------------------
    @property
    def degrees(self) -> dict[int, CoeffTensor]:
        return {n: CoeffTensor(self.grid, a) for n, a in self._parts.items()}

    def kernel(self, n: int) -> np.ndarray:
        """Coefficient array of chaos order ``n`` (zeros when absent)."""
        arr = self._parts.get(n)
        if arr is None:
            return np.zeros((self.grid.cells,) * n, dtype=complex)
        return arr

    def arrays(self) -> dict[int, np.ndarray]:
        return dict(self._parts)

    @property
    def top_degree(self) -> int:
        """Highest order with a nonzero kernel; the zero element has none."""
        nonzero = [n for n, a in self._parts.items() if np.any(a)]
        if not nonzero:
            raise DomainError("the zero element has no top degree")
        return max(nonzero)

    def is_zero(self) -> bool:
        return not any(np.any(a) for a in self._parts.values())

    def is_self_adjoint(self, tol: float = 0.0) -> bool:
        return all(
            a.size == 0 or np.max(np.abs(a - reverse_conj(a))) <= tol
            for a in self._parts.values()
        )

    # -- algebra ------------------------------------------------------------
    def _combine(self, other, sign):
        if isinstance(other, Number):
            other = ChaosElement.scalar(self.grid, other)
        if not isinstance(other, ChaosElement):
            return NotImplemented
        if other.grid != self.grid:
            raise ShapeError("chaos elements live on different grids")
        out = dict(self._parts)
        for n, a in other._parts.items():
            out[n] = out[n] + sign * a if n in out else sign * a
        return ChaosElement(self.grid, out)

    def __add__(self, other):
        return self._combine(other, 1)

    __radd__ = __add__

    def __sub__(self, other):
        return self._combine(other, -1)

    def __rsub__(self, other):
        return (-self)._combine(other, 1)

    def __neg__(self):
        return ChaosElement(self.grid, {n: -a for n, a in self._parts.items()})

    def __mul__(self, other):
        if isinstance(other, Number):
            return ChaosElement(self.grid, {n: a * other for n, a in self._parts.items()})
        if isinstance(other, ChaosElement):
            return ito_product(self, other)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Number):
            return self * other
        return NotImplemented

    def __truediv__(self, other):
        if isinstance(other, Number):
            return self * (1.0 / other)
        return NotImplemented

    def __repr__(self):
        return f"ChaosElement(orders={list(self._parts)}, cells={self.grid.cells})"


def wigner(f: CoeffTensor) -> ChaosElement:
    """The multiple Wigner integral ``I_n(f)``."""
    return ChaosElement(f.grid, {f.degree: f})


def _same_grid(y: ChaosElement, z: ChaosElement) -> GridSpec:
    if y.grid != z.grid:
        raise ShapeError(f"grid mismatch: {y.grid} vs {z.grid}")
    return y.grid


def ito_product(y: ChaosElement, z: ChaosElement) -> ChaosElement:
    """Exact product of two finite chaos elements."""
    grid = _same_grid(y, z)
    out: dict[int, np.ndarray] = {}
    for n, f in y.arrays().items():
        for k, g in z.arrays().items():
            for p in range(min(n, k) + 1):
                c = contract_arrays(f, g, p)
                d = n + k - 2 * p
                out[d] = out[d] + c if d in out else c
    return ChaosElement(grid, out)


def adjoint(y: ChaosElement) -> ChaosElement:
    return ChaosElement(y.grid, {n: reverse_conj(a) for n, a in y.arrays().items()})


def trace(y: ChaosElement) -> complex:
    """Vacuum state; only the order-0 kernel survives."""
    return complex(y.kernel(0))


def l2_inner(y: ChaosElement, z: ChaosElement) -> complex:
    """``<Y, Z>_2 = tau(Z* Y)``, computed kernel-wise."""
    _same_grid(y, z)
    za = z.arrays()
    return complex(
        sum(np.vdot(za[n].ravel(), a.ravel()) for n, a in y.arrays().items() if n in za)
    )


def l2_norm(y: ChaosElement) -> float:
    return float(np.sqrt(sum(np.vdot(a, a).real for a in y.arrays().values())))


def fock_vector(y: ChaosElement, basis: FockBasis) -> FockVector:
    if basis.grid != y.grid:
        raise ShapeError("Fock basis lives on a different grid")
    return FockVector.from_tensors(basis, y.arrays())


def _reverse_last(a: np.ndarray, p: int) -> np.ndarray:
    n = a.ndim
    return a.transpose(tuple(range(n - p)) + tuple(range(n - 1, n - p - 1, -1)))


def matrix_rep(y: ChaosElement, max_degree: int) -> OperatorMatrix:
    """Compression of ``Y`` to Fock words of length ``<= max_degree``.

    The column of word ``g`` is ``sum_n sum_p f_n ~p e_g``.  The block from
    length ``l`` to length ``n + l - 2p`` is ``kron(F, I_{m^(l-p)})`` where
    ``F`` pairs the reversed last ``p`` axes of ``f_n`` with the first ``p``
    letters of ``g``.
    """
    if max_degree < 0:
        raise DomainError("max_degree must be >= 0")
    basis = FockBasis(y.grid, max_degree)
    m = y.grid.cells
    rows, cols, vals = [], [], []
    for n, f in y.arrays().items():
        if not np.any(f):
            continue
        for length in range(max_degree + 1):
            for p in range(min(n, length) + 1):
                out_len = n + length - 2 * p
                if out_len > max_degree:
                    continue
                fmat = sp.csr_array(_reverse_last(f, p).reshape(m ** (n - p), m**p))
                block = sp.kron(fmat, sp.identity(m ** (length - p), format="csr")).tocoo()
                rows.append(block.row + basis.offsets[out_len])
                cols.append(block.col + basis.offsets[length])
                vals.append(block.data)
    if rows:
        entries = sp.coo_array(
            (np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))),
            shape=(basis.dim, basis.dim),
        ).tocsr()
        entries.sum_duplicates()
    else:
        entries = sp.csr_array((basis.dim, basis.dim), dtype=complex)
    return OperatorMatrix(basis, entries)


def free_bm(grid: GridSpec, t: float) -> ChaosElement:
    """Free Brownian motion ``S_t = I_1(1_[0,t])`` (grid-projected)."""
    if not 0 <= t <= grid.horizon:
        raise DomainError(f"time {t} outside [0, {grid.horizon}]")
    if t == 0:
        return ChaosElement.zero(grid)
    return wigner(project_indicator(grid, 0.0, t))


def moment(y: ChaosElement, k: int) -> complex:
    """``tau(Y^k)`` through repeated exact products."""
    if k < 0:
        raise DomainError("moment order must be >= 0")
    power = ChaosElement.scalar(y.grid, 1.0)
    for _ in range(k):
        power = ito_product(power, y)
    return trace(power)


def haagerup_bound(y: ChaosElement) -> float:
    """``sum_n (n + 1) ||f_n||``, an upper bound for the operator norm."""
    return float(sum((n + 1) * np.linalg.norm(a.ravel()) for n, a in y.arrays().items()))
