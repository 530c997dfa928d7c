"""Free Malliavin operators at grid scale.

Elements of ``L^2 x L^2`` over the chaos are :class:`ChaosBitensor` values:
for each pair of chaos orders ``(a, b)`` one merged coefficient array with
``a + b`` axes, the first ``a`` of which belong to the left leg.  A pure
tensor ``I_a(f) x I_b(g)`` is stored as ``f x g`` under key ``(a, b)``.

Time-dependent biprocesses are piecewise constant on the grid
(:class:`SimpleBiprocess`); on cell ``i`` the gradient of ``Y`` equals
``(m/T)^{1/2} grad^{e_i} Y``.
"""
from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass
import math
from numbers import Number

import numpy as np

from .chaos import ChaosElement, free_bm
from .exceptions import DomainError, ShapeError
from .grid import CoeffTensor, GridSpec, contract_arrays, reverse_conj

__all__ = [
    "ChaosBitensor",
    "SimpleBiprocess",
    "pure_bitensor",
    "bitensor_inner",
    "directional_gradient",
    "directional_divergence",
    "gradient_biprocess",
    "biprocess_pair",
    "divergence_simple",
    "stochastic_integral",
    "is_adapted",
    "number_operator",
    "partial_trace",
    "bimodule_action",
    "dagger",
    "multiply_legs",
    "sharp",
    "gradient_left_leg",
    "gradient_right_leg",
]


def _accumulate(store: dict, key, arr: np.ndarray) -> None:
    if key in store:
        store[key] = store[key] + arr
    else:
        store[key] = arr


class ChaosBitensor:
    """Element of ``L^2(chaos) x L^2(chaos)`` in canonical merged form."""

    __slots__ = ("grid", "_parts")

    def __init__(self, grid: GridSpec, components: Mapping | None = None):
        parts = {}
        for (a, b), value in (components or {}).items():
            arr = value.coeffs if isinstance(value, CoeffTensor) else np.asarray(value, dtype=complex)
            if arr.ndim != a + b or any(s != grid.cells for s in arr.shape):
                raise ShapeError(f"component {(a, b)} has shape {arr.shape}")
            parts[(int(a), int(b))] = arr.astype(complex, copy=False)
        object.__setattr__(self, "grid", grid)
        object.__setattr__(self, "_parts", dict(sorted(parts.items())))

    def __setattr__(self, name, value):
        raise AttributeError("ChaosBitensor is immutable")

    @classmethod
    def unit(cls, grid: GridSpec) -> "ChaosBitensor":
        """``1 x 1``."""
        return cls(grid, {(0, 0): np.asarray(1.0 + 0j)})

    @property
    def components(self) -> dict[tuple[int, int], np.ndarray]:
        return dict(self._parts)

    def component(self, a: int, b: int) -> np.ndarray:
        arr = self._parts.get((a, b))
        if arr is None:
            return np.zeros((self.grid.cells,) * (a + b), dtype=complex)
        return arr

    def norm(self) -> float:
        return float(np.sqrt(sum(np.vdot(c, c).real for c in self._parts.values())))

    def is_zero(self) -> bool:
        return not any(np.any(c) for c in self._parts.values())

    def _combine(self, other, sign):
        if not isinstance(other, ChaosBitensor):
            return NotImplemented
        if other.grid != self.grid:
            raise ShapeError("bitensors live on different grids")
        out = dict(self._parts)
        for key, c in other._parts.items():
            _accumulate(out, key, sign * c)
        return ChaosBitensor(self.grid, out)

    def __add__(self, other):
        return self._combine(other, 1)

    def __sub__(self, other):
        return self._combine(other, -1)

    def __neg__(self):
        return ChaosBitensor(self.grid, {k: -c for k, c in self._parts.items()})

    def __mul__(self, other):
        if isinstance(other, Number):
            return ChaosBitensor(self.grid, {k: c * other for k, c in self._parts.items()})
        return NotImplemented

    __rmul__ = __mul__

    def __repr__(self):
        return f"ChaosBitensor(components={list(self._parts)}, cells={self.grid.cells})"


def pure_bitensor(y1: ChaosElement, y2: ChaosElement) -> ChaosBitensor:
    """``y1 x y2`` expanded into components."""
    if y1.grid != y2.grid:
        raise ShapeError("grid mismatch")
    out = {}
    for a, f in y1.arrays().items():
        for b, g in y2.arrays().items():
            _accumulate(out, (a, b), np.multiply.outer(f, g))
    return ChaosBitensor(y1.grid, out)


def bitensor_inner(u: ChaosBitensor, w: ChaosBitensor) -> complex:
    """Inner product, linear in ``u``."""
    if u.grid != w.grid:
        raise ShapeError("grid mismatch")
    wc = w.components
    return complex(
        sum(np.vdot(wc[k].ravel(), c.ravel()) for k, c in u.components.items() if k in wc)
    )


@dataclass(frozen=True)
class SimpleBiprocess:
    """Biprocess equal to ``values[i]`` on grid cell ``i``."""

    grid: GridSpec
    values: tuple[ChaosBitensor, ...]

    def __post_init__(self):
        values = tuple(self.values)
        if len(values) != self.grid.cells:
            raise ShapeError(f"need {self.grid.cells} cell values, got {len(values)}")
        if any(v.grid != self.grid for v in values):
            raise ShapeError("cell value on a different grid")
        object.__setattr__(self, "values", values)

    @classmethod
    def zero(cls, grid: GridSpec) -> "SimpleBiprocess":
        return cls(grid, tuple(ChaosBitensor(grid) for _ in range(grid.cells)))

    def b2_norm(self) -> float:
        """``(int ||U_t||^2 dt)^{1/2}`` for the step biprocess."""
        return math.sqrt(self.grid.width * sum(v.norm() ** 2 for v in self.values))


def _direction(h: CoeffTensor, grid: GridSpec) -> np.ndarray:
    if h.degree != 1:
        raise ShapeError(f"direction must have degree 1, got {h.degree}")
    if h.grid != grid:
        raise ShapeError("direction lives on a different grid")
    return h.coeffs


def _pair_slot(arr: np.ndarray, slot: int, hbar: np.ndarray) -> np.ndarray:
    return np.tensordot(arr, hbar, axes=([slot], [0]))


def directional_gradient(y: ChaosElement, h: CoeffTensor) -> ChaosBitensor:
    """``grad^h Y = int grad_t Y conj(h(t)) dt``.

    Pairing slot ``k`` (1-based) of ``f_n`` against ``conj(h)`` lands in
    component ``(k - 1, n - k)``.
    """
    hbar = np.conj(_direction(h, y.grid))
    out = {}
    for n, f in y.arrays().items():
        for slot in range(n):
            _accumulate(out, (slot, n - slot - 1), _pair_slot(f, slot, hbar))
    return ChaosBitensor(y.grid, out)


def _insert(arr: np.ndarray, pos: int, vec: np.ndarray) -> np.ndarray:
    return np.moveaxis(np.multiply.outer(arr, vec), -1, pos)


def directional_divergence(u: ChaosBitensor, h: CoeffTensor) -> ChaosElement:
    """Adjoint of :func:`directional_gradient`: inserts ``h`` at the split.

    ``delta^h(I_a(f) x I_b(g)) = I_{a+1+b}(f x h x g)``.
    """
    hv = _direction(h, u.grid)
    out = {}
    for (a, b), c in u.components.items():
        _accumulate(out, a + 1 + b, _insert(c, a, hv))
    return ChaosElement(u.grid, out)


def gradient_biprocess(y: ChaosElement) -> SimpleBiprocess:
    """Full gradient ``t -> grad_t Y`` as a step biprocess."""
    grid = y.grid
    scale = math.sqrt(grid.cells / grid.horizon)
    return SimpleBiprocess(
        grid,
        tuple(scale * directional_gradient(y, grid.basis(i)) for i in range(grid.cells)),
    )


def biprocess_pair(u: SimpleBiprocess, h: CoeffTensor) -> ChaosBitensor:
    """``<U, h> = int U_t conj(h(t)) dt``."""
    hv = _direction(h, u.grid)
    scale = math.sqrt(u.grid.width)
    out = ChaosBitensor(u.grid)
    for i, v in enumerate(u.values):
        out = out + (scale * complex(np.conj(hv[i]))) * v
    return out


def divergence_simple(u: SimpleBiprocess) -> ChaosElement:
    """Divergence of a step biprocess, ``sum_i (T/m)^{1/2} delta^{e_i}(V_i)``."""
    grid = u.grid
    scale = math.sqrt(grid.width)
    out = ChaosElement.zero(grid)
    for i, v in enumerate(u.values):
        out = out + scale * directional_divergence(v, grid.basis(i))
    return out


def _max_letter(c: np.ndarray) -> int:
    """Largest index appearing in any nonzero entry; -1 if none can appear."""
    if c.ndim == 0 or not np.any(c):
        return -1
    nz = np.nonzero(c)
    return int(max(ax.max() for ax in nz))


def is_adapted(u: SimpleBiprocess) -> bool:
    """True iff the value on cell ``i`` only uses basis indices ``< i``."""
    return all(
        _max_letter(c) < i for i, v in enumerate(u.values) for c in v.components.values()
    )


def multiply_legs(u: ChaosBitensor) -> ChaosElement:
    """Multiplication map ``x1 x x2 -> x1 x2``."""
    out = {}
    for (a, b), c in u.components.items():
        cur = c
        _accumulate(out, a + b, cur)
        for p in range(1, min(a, b) + 1):
            split = a - p
            cur = np.trace(cur, axis1=split, axis2=split + 1)
            _accumulate(out, a + b - 2 * p, cur)
    return ChaosElement(u.grid, out)


def _leg_right_action(u: ChaosBitensor, x: ChaosElement) -> ChaosBitensor:
    """``(x1 x x2) -> (x1 X) x x2``."""
    out = {}
    for (a, b), c in u.components.items():
        for n, f in x.arrays().items():
            for p in range(min(a, n) + 1):
                axes_c = list(range(a - p, a))
                axes_f = list(range(p - 1, -1, -1))
                t = np.tensordot(c, f, axes=(axes_c, axes_f)) if p else np.multiply.outer(c, f)
                # axes now: left remainder, right leg (b), x remainder
                left = a - p
                t = np.moveaxis(t, list(range(left + b, t.ndim)), list(range(left, left + n - p)))
                _accumulate(out, (left + n - p, b), t)
    return ChaosBitensor(u.grid, out)


def sharp(u: ChaosBitensor, x: ChaosElement) -> ChaosElement:
    """``(x1 x x2) # X = x1 X x2``."""
    if u.grid != x.grid:
        raise ShapeError("grid mismatch")
    return multiply_legs(_leg_right_action(u, x))


def stochastic_integral(u: SimpleBiprocess) -> ChaosElement:
    """``int U # dS = sum_i V_i # (S_{t_{i+1}} - S_{t_i})`` for adapted ``U``."""
    if not is_adapted(u):
        raise DomainError("stochastic integral needs an adapted biprocess")
    grid = u.grid
    out = ChaosElement.zero(grid)
    for i, v in enumerate(u.values):
        lo, hi = grid.cell(i)
        increment = free_bm(grid, min(hi, grid.horizon)) - free_bm(grid, lo)
        out = out + sharp(v, increment)
    return out


def number_operator(y: ChaosElement) -> ChaosElement:
    return ChaosElement(y.grid, {n: n * f for n, f in y.arrays().items()})


def partial_trace(u: ChaosBitensor, side: str) -> ChaosElement:
    """``side="right"`` is ``(id x tau)``, ``side="left"`` is ``(tau x id)``."""
    if side == "right":
        return ChaosElement(u.grid, {a: c for (a, b), c in u.components.items() if b == 0})
    if side == "left":
        return ChaosElement(u.grid, {b: c for (a, b), c in u.components.items() if a == 0})
    raise DomainError(f"side must be 'left' or 'right', got {side!r}")


def bimodule_action(left: ChaosElement, u: ChaosBitensor, right: ChaosElement) -> ChaosBitensor:
    """``L . (x1 x x2) . R = (L x1) x (x2 R)``."""
    if not (left.grid == u.grid == right.grid):
        raise ShapeError("grid mismatch")
    stage = {}
    for (a, b), c in u.components.items():
        for n, f in left.arrays().items():
            for p in range(min(n, a) + 1):
                _accumulate(stage, (n + a - 2 * p, b), contract_arrays(f, c, p))
    out = {}
    for (a, b), c in stage.items():
        for n, f in right.arrays().items():
            for p in range(min(n, b) + 1):
                _accumulate(out, (a, b + n - 2 * p), contract_arrays(c, f, p))
    return ChaosBitensor(u.grid, out)


def dagger(u: ChaosBitensor) -> ChaosBitensor:
    """``(x1 x x2)^dagger = x2* x x1*``.

    On the merged array this is a full index reversal plus conjugation.
    """
    return ChaosBitensor(u.grid, {(b, a): reverse_conj(c) for (a, b), c in u.components.items()})


def gradient_left_leg(u: ChaosBitensor, h: CoeffTensor) -> dict[tuple[int, int, int], np.ndarray]:
    """``(grad^h x id) U`` as a map from order triples to arrays."""
    hbar = np.conj(_direction(h, u.grid))
    out = {}
    for (a, b), c in u.components.items():
        for slot in range(a):
            _accumulate(out, (slot, a - slot - 1, b), _pair_slot(c, slot, hbar))
    return out


def gradient_right_leg(u: ChaosBitensor, h: CoeffTensor) -> dict[tuple[int, int, int], np.ndarray]:
    """``(id x grad^h) U`` as a map from order triples to arrays."""
    hbar = np.conj(_direction(h, u.grid))
    out = {}
    for (a, b), c in u.components.items():
        for slot in range(b):
            _accumulate(out, (a, slot, b - slot - 1), _pair_slot(c, a + slot, hbar))
    return out

