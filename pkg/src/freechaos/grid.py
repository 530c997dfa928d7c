"""Step-function discretization of L^2(R_+^n).

A :class:`GridSpec` cuts ``[0, T)`` into ``m`` equal cells.  The normalized
indicators ``e_k = (m/T)^{1/2} 1_{cell k}`` form an orthonormal family, and a
function of ``n`` time variables is stored through its coefficients in the
product basis ``e_{i1} x ... x e_{in}``.  Every L^2 formula then becomes a
Euclidean tensor formula on the coefficient arrays.

The inner product is linear in the first slot and conjugate-linear in the
second, ``<f, g> = sum c_f * conj(c_g)``.
"""
from __future__ import annotations

from dataclasses import dataclass
import math
from numbers import Number

import numpy as np

from .exceptions import DomainError, ShapeError

__all__ = [
    "GridSpec",
    "CoeffTensor",
    "contract_arrays",
    "inner",
    "tensor",
    "contract_p",
    "involution",
    "is_mirror_symmetric",
    "project_indicator",
]


@dataclass(frozen=True)
class GridSpec:
    """Uniform partition of ``[0, horizon)`` into ``cells`` cells."""

    horizon: float
    cells: int

    def __post_init__(self):
        if not (isinstance(self.cells, (int, np.integer)) and self.cells >= 1):
            raise DomainError(f"cells must be a positive integer, got {self.cells!r}")
        if not (math.isfinite(self.horizon) and self.horizon > 0):
            raise DomainError(f"horizon must be positive, got {self.horizon!r}")
        object.__setattr__(self, "horizon", float(self.horizon))
        object.__setattr__(self, "cells", int(self.cells))

    @property
    def width(self) -> float:
        """Length ``T/m`` of a single cell."""
        return self.horizon / self.cells

    def cell(self, k: int) -> tuple[float, float]:
        return k * self.width, (k + 1) * self.width

    def basis(self, k: int) -> "CoeffTensor":
        """Orthonormal step function ``e_k`` as a degree-1 tensor."""
        if not 0 <= k < self.cells:
            raise DomainError(f"cell index {k} outside [0, {self.cells})")
        c = np.zeros(self.cells, dtype=complex)
        c[k] = 1.0
        return CoeffTensor(self, c)


class CoeffTensor:
    """Coefficients of ``f in L^2(R_+^n)`` in the grid's product basis.

    ``coeffs`` is a complex array of shape ``(m,) * n``; degree 0 is a
    zero-dimensional array holding one scalar.  Instances are immutable.
    """

    __slots__ = ("grid", "coeffs")

    def __init__(self, grid: GridSpec, coeffs):
        arr = np.array(coeffs, dtype=complex)
        if any(s != grid.cells for s in arr.shape):
            raise ShapeError(
                f"coefficient shape {arr.shape} does not match {grid.cells} cells"
            )
        if not np.all(np.isfinite(arr)):
            raise DomainError("coefficients must be finite")
        arr.setflags(write=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "coeffs", arr)

    def __setattr__(self, name, value):
        raise AttributeError("CoeffTensor is immutable")

    @classmethod
    def zeros(cls, grid: GridSpec, degree: int) -> "CoeffTensor":
        return cls(grid, np.zeros((grid.cells,) * degree, dtype=complex))

    @classmethod
    def scalar(cls, grid: GridSpec, value: complex) -> "CoeffTensor":
        return cls(grid, np.asarray(value, dtype=complex))

    @classmethod
    def from_word(cls, grid: GridSpec, word) -> "CoeffTensor":
        """Basis tensor ``e_{w1} x ... x e_{wn}``."""
        c = np.zeros((grid.cells,) * len(word), dtype=complex)
        c[tuple(word)] = 1.0
        return cls(grid, c)

    @property
    def degree(self) -> int:
        return self.coeffs.ndim

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs.ravel()))

    def is_zero(self) -> bool:
        return not np.any(self.coeffs)

    def _check(self, other: "CoeffTensor"):
        if not isinstance(other, CoeffTensor):
            return NotImplemented
        if other.grid != self.grid or other.degree != self.degree:
            raise ShapeError("tensors differ in grid or degree")
        return None

    def __add__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CoeffTensor(self.grid, self.coeffs + other.coeffs)

    def __sub__(self, other):
        if self._check(other) is NotImplemented:
            return NotImplemented
        return CoeffTensor(self.grid, self.coeffs - other.coeffs)

    def __neg__(self):
        return CoeffTensor(self.grid, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, Number):
            return CoeffTensor(self.grid, self.coeffs * other)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Number):
            return CoeffTensor(self.grid, self.coeffs / other)
        return NotImplemented

    def __repr__(self):
        return f"CoeffTensor(degree={self.degree}, cells={self.grid.cells})"


def _same_grid(*tensors: CoeffTensor) -> GridSpec:
    grid = tensors[0].grid
    for t in tensors[1:]:
        if t.grid != grid:
            raise ShapeError(f"grid mismatch: {grid} vs {t.grid}")
    return grid


def contract_arrays(a: np.ndarray, b: np.ndarray, p: int) -> np.ndarray:
    """Pair the last ``p`` axes of ``a`` with the first ``p`` axes of ``b``.

    The pairing is reversed, i.e. the last axis of ``a`` meets the first axis
    of ``b``, and bilinear (no conjugation).  Output axes are the remaining
    axes of ``a`` followed by the remaining axes of ``b``.
    """
    na = a.ndim
    if p == 0:
        return np.multiply.outer(a, b)
    return np.tensordot(a, b, axes=(list(range(na - p, na)), list(range(p - 1, -1, -1))))


def inner(f: CoeffTensor, g: CoeffTensor) -> complex:
    """L^2 inner product, linear in ``f`` and conjugate-linear in ``g``."""
    _same_grid(f, g)
    if f.degree != g.degree:
        raise ShapeError(f"degree mismatch: {f.degree} vs {g.degree}")
    return complex(np.vdot(g.coeffs.ravel(), f.coeffs.ravel()))


def tensor(f: CoeffTensor, g: CoeffTensor) -> CoeffTensor:
    """Tensor product ``f x g`` of degree ``n + k``."""
    grid = _same_grid(f, g)
    return CoeffTensor(grid, np.multiply.outer(f.coeffs, g.coeffs))


def contract_p(f: CoeffTensor, g: CoeffTensor, p: int) -> CoeffTensor:
    """The ``p``'th contraction of ``f`` and ``g``.

    ``out[t, u] = sum_s f[t, s_1..s_p] g[s_p..s_1, u]``, degree ``n + k - 2p``.
    """
    grid = _same_grid(f, g)
    if not 0 <= p <= min(f.degree, g.degree):
        raise DomainError(
            f"contraction order {p} outside [0, {min(f.degree, g.degree)}]"
        )
    return CoeffTensor(grid, contract_arrays(f.coeffs, g.coeffs, p))


def reverse_conj(arr: np.ndarray) -> np.ndarray:
    """``conj(a[i_n, ..., i_1])`` for an array of any rank."""
    return np.conj(arr.transpose(tuple(range(arr.ndim - 1, -1, -1))))


def involution(f: CoeffTensor) -> CoeffTensor:
    """Mirror map ``f*(t_1..t_n) = conj(f(t_n..t_1))``."""
    return CoeffTensor(f.grid, reverse_conj(f.coeffs))


def is_mirror_symmetric(f: CoeffTensor, tol: float = 0.0) -> bool:
    if tol < 0:
        raise DomainError("tol must be non-negative")
    if f.coeffs.size == 0:
        return True
    return bool(np.max(np.abs(f.coeffs - reverse_conj(f.coeffs))) <= tol)


def project_indicator(grid: GridSpec, a: float, b: float) -> CoeffTensor:
    """Coefficients of ``1_[a,b]`` projected onto the grid span.

    Exact when ``a`` and ``b`` fall on cell boundaries.  Otherwise the squared
    norm of the result falls short of ``b - a`` by the projection loss.
    """
    if a < 0 or a > b:
        raise DomainError(f"need 0 <= a <= b, got a={a}, b={b}")
    left = np.arange(grid.cells) * grid.width
    right = left + grid.width
    overlap = np.clip(np.minimum(right, b) - np.maximum(left, a), 0.0, None)
    return CoeffTensor(grid, overlap / math.sqrt(grid.width))
