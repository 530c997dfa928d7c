"""Degree-reducing operators ``Delta_{p,h} Y = (tau x id)((p x 1) grad^h Y)``.

Iterating ``N`` of them on an element of top order ``N`` leaves the scalar
``tau(p_1) ... tau(p_N) <f_N, h_1 x ... x h_N>``; this is how a zero divisor
in the finite chaos would be pushed down to order zero.  The test elements
``p`` may be arbitrary chaos elements, since every formula here is linear in
``p``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import reduce as _fold

import numpy as np

from .chaos import ChaosElement, adjoint, haagerup_bound, ito_product, l2_inner, l2_norm, trace
from .exceptions import DomainError, ShapeError
from .grid import CoeffTensor, contract_arrays
from .malliavin import bimodule_action, bitensor_inner, directional_gradient, pure_bitensor

__all__ = [
    "ReductionStep",
    "ReductionReport",
    "ZeroDivisorReport",
    "KeyInequalityReport",
    "tau_p",
    "delta_ph",
    "iterate_reduction",
    "zero_divisor_probe",
    "key_inequality_check",
]


@dataclass(frozen=True)
class ReductionStep:
    p: ChaosElement
    h: CoeffTensor

    def __post_init__(self):
        if self.h.degree != 1:
            raise ShapeError("reduction direction must have degree 1")
        if self.p.grid != self.h.grid:
            raise ShapeError("test element and direction live on different grids")


@dataclass
class ReductionReport:
    steps: list[ReductionStep]
    intermediates: list[ChaosElement]
    intermediate_top_degrees: list[int | None]
    final_scalar: complex
    predicted_scalar: complex
    tol: float = 1e-10
    residual: float = field(init=False)

    def __post_init__(self):
        self.residual = abs(self.final_scalar - self.predicted_scalar)

    @property
    def agrees(self) -> bool:
        return self.residual <= self.tol


@dataclass(frozen=True)
class ZeroDivisorReport:
    normYu: float
    normYstaru: float


@dataclass(frozen=True)
class KeyInequalityReport:
    lhs: float
    rhs: float
    holds: bool


def tau_p(p: ChaosElement, f: ChaosElement) -> complex:
    """``tau(p I(f))``.

    For self-adjoint ``p = I(g)`` this is ``<f, g>``; in general it is
    ``<f, p*>``, which keeps the Delta formula consistent for every ``p``.
    """
    if p.grid != f.grid:
        raise ShapeError("grid mismatch")
    return l2_inner(f, adjoint(p))


def delta_ph(p: ChaosElement, h: CoeffTensor, y: ChaosElement) -> ChaosElement:
    """Chaos formula for ``Delta_{p,h}``.

    Slot ``k`` of ``f_n`` is paired with ``conj(h)``; the ``k - 1`` slots to
    its left are absorbed by ``tau_p`` and the ``n - k`` slots to its right
    survive as an order ``n - k`` kernel.
    """
    if not (p.grid == h.grid == y.grid):
        raise ShapeError("grid mismatch")
    if h.degree != 1:
        raise ShapeError("direction must have degree 1")
    hbar = np.conj(h.coeffs)
    out: dict[int, np.ndarray] = {}
    for n, f in y.arrays().items():
        for k in range(1, n + 1):
            paired = np.tensordot(f, hbar, axes=([k - 1], [0]))
            g = p.kernel(k - 1)
            term = contract_arrays(g, paired, k - 1)
            out[n - k] = out[n - k] + term if n - k in out else term
    return ChaosElement(y.grid, out)


def _top_or_none(y: ChaosElement) -> int | None:
    return None if y.is_zero() else y.top_degree


def iterate_reduction(y: ChaosElement, steps, tol: float = 1e-10) -> ReductionReport:
    """Apply ``Delta_{p_1,h_1}``, then ``Delta_{p_2,h_2}``, ... to ``y``.

    The number of steps must equal the top order of ``y``; the final element
    is a scalar and is compared against the closed-form prediction.
    """
    if y.is_zero():
        raise DomainError("cannot reduce the zero element")
    steps = [s if isinstance(s, ReductionStep) else ReductionStep(*s) for s in steps]
    top = y.top_degree
    if len(steps) != top:
        raise DomainError(f"{len(steps)} steps given for top degree {top}")
    cur = y
    intermediates = [y]
    degrees = [top]
    for step in steps:
        cur = delta_ph(step.p, step.h, cur)
        intermediates.append(cur)
        degrees.append(_top_or_none(cur))
    if top:
        hs = _fold(lambda acc, h: np.multiply.outer(acc, h), [np.conj(s.h.coeffs) for s in steps])
        coefficient = complex(np.sum(y.kernel(top) * hs))
    else:
        coefficient = complex(y.kernel(0))
    predicted = coefficient * complex(np.prod([trace(s.p) for s in steps]))
    return ReductionReport(steps, intermediates, degrees, trace(cur), predicted, tol)


def zero_divisor_probe(y: ChaosElement, u: ChaosElement) -> ZeroDivisorReport:
    """Report ``||Y u||_2`` and ``||Y* u||_2``; nothing is asserted."""
    if y.grid != u.grid:
        raise ShapeError("grid mismatch")
    return ZeroDivisorReport(
        normYu=l2_norm(ito_product(y, u)),
        normYstaru=l2_norm(ito_product(adjoint(y), u)),
    )


def key_inequality_check(
    x: ChaosElement,
    u: ChaosElement,
    v: ChaosElement,
    y1: ChaosElement,
    y2: ChaosElement,
    h: CoeffTensor,
    atol: float = 1e-9,
) -> KeyInequalityReport:
    """Compare ``|<v* . grad^h x . u, y1 x y2>|`` with its upper bound.

    Operator norms on the bound side are replaced by :func:`haagerup_bound`,
    which dominates them, so the reported inequality is implied by the
    exact one.
    """
    if not (x.grid == u.grid == v.grid == y1.grid == y2.grid == h.grid):
        raise ShapeError("grid mismatch")
    if np.any(h.coeffs.imag != 0):
        raise DomainError("key inequality needs a real direction")
    acted = bimodule_action(adjoint(v), directional_gradient(x, h), u)
    lhs = abs(bitensor_inner(acted, pure_bitensor(y1, y2)))
    rhs = (
        4.0
        * h.norm()
        * (
            haagerup_bound(v) * l2_norm(ito_product(x, u))
            + haagerup_bound(u) * l2_norm(ito_product(adjoint(x), v))
        )
        * haagerup_bound(y1)
        * haagerup_bound(y2)
    )
    return KeyInequalityReport(lhs=lhs, rhs=rhs, holds=bool(lhs <= rhs + atol))
