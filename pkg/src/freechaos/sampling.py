"""Seeded random test objects.

All draws go through ``numpy.random.Generator`` on the counter-based Philox
bit generator, so a seed pins the stream across platforms.
"""
from __future__ import annotations

import numpy as np

from .chaos import ChaosElement, adjoint, l2_norm
from .grid import CoeffTensor, GridSpec
from .malliavin import ChaosBitensor, SimpleBiprocess


def make_rng(seed: int, *stream: int) -> np.random.Generator:
    """Generator for ``seed``; extra integers select an independent stream."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, *stream])))


def random_array(rng: np.random.Generator, cells: int, degree: int, real: bool = False) -> np.ndarray:
    shape = (cells,) * degree
    a = rng.standard_normal(shape)
    if real:
        return a.astype(complex)
    return a + 1j * rng.standard_normal(shape)


def random_tensor(rng, grid: GridSpec, degree: int, real: bool = False) -> CoeffTensor:
    return CoeffTensor(grid, random_array(rng, grid.cells, degree, real))


def random_direction(rng, grid: GridSpec) -> CoeffTensor:
    """Real degree-1 tensor."""
    return random_tensor(rng, grid, 1, real=True)


def random_chaos(
    rng,
    grid: GridSpec,
    max_degree: int,
    self_adjoint: bool = False,
    min_degree: int = 0,
    normalize: bool = True,
) -> ChaosElement:
    """Dense random element with every order in ``[min_degree, max_degree]``.

    With ``normalize`` the result has unit L^2 norm.
    """
    y = ChaosElement(
        grid,
        {n: random_array(rng, grid.cells, n) for n in range(min_degree, max_degree + 1)},
    )
    if self_adjoint:
        y = 0.5 * (y + adjoint(y))
    if normalize:
        y = y / l2_norm(y)
    return y


def random_bitensor(rng, grid: GridSpec, max_degree: int) -> ChaosBitensor:
    return ChaosBitensor(
        grid,
        {
            (a, b): random_array(rng, grid.cells, a + b)
            for a in range(max_degree + 1)
            for b in range(max_degree + 1 - a)
        },
    )


def random_adapted_biprocess(rng, grid: GridSpec, max_degree: int) -> SimpleBiprocess:
    """Step biprocess whose value on cell ``i`` only uses indices ``< i``."""
    m = grid.cells
    values = []
    for i in range(m):
        parts = {}
        for a in range(max_degree + 1):
            for b in range(max_degree + 1 - a):
                if i == 0 and a + b:
                    continue
                arr = np.zeros((m,) * (a + b), dtype=complex)
                window = tuple(slice(0, i) for _ in range(a + b))
                arr[window] = random_array(rng, i, a + b)
                parts[(a, b)] = arr
        values.append(ChaosBitensor(grid, parts))
    return SimpleBiprocess(grid, tuple(values))
