import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from freechaos.chaos import (
    ChaosElement,
    adjoint,
    fock_vector,
    free_bm,
    haagerup_bound,
    ito_product,
    l2_inner,
    l2_norm,
    matrix_rep,
    moment,
    trace,
    wigner,
)
from freechaos.exceptions import DomainError, ShapeError
from freechaos.fock import FockBasis, FockVector, field_matrix, operator_norm_estimate
from freechaos.grid import CoeffTensor, GridSpec, tensor
from freechaos.sampling import make_rng, random_chaos

G1 = GridSpec(1.0, 1)
G2 = GridSpec(2.0, 2)
E = G1.basis(0)
EE = tensor(E, E)


def close(y, z, tol=1e-12):
    return l2_norm(y - z) <= tol


def test_product_examples():
    x = wigner(E)
    assert close(x * x, wigner(EE) + 1)
    y = random_chaos(make_rng(3), G2, 3)
    assert close(y * 1, y) and close(ito_product(y, ChaosElement.scalar(G2, 1)), y)
    assert close(wigner(EE) * x, wigner(tensor(EE, E)) + x)


def test_product_grid_mismatch():
    with pytest.raises(ShapeError):
        ito_product(wigner(E), wigner(G2.basis(0)))


def test_adjoint_examples():
    assert close(adjoint(wigner(EE)), wigner(EE))
    assert close(adjoint(wigner(E * 1j)), wigner(E * -1j))


def test_trace_and_inner_examples():
    assert trace(ChaosElement.scalar(G1, 5)) == 5
    assert trace(wigner(EE)) == 0
    assert trace(wigner(E) * wigner(E)) == pytest.approx(1)
    assert l2_inner(wigner(E), wigner(E)) == pytest.approx(1)
    assert l2_inner(wigner(E), wigner(EE)) == 0


def test_matrix_rep_examples():
    basis = FockBasis(G1, 4)
    assert np.array_equal(matrix_rep(wigner(E), 4).dense(), field_matrix(basis, E).dense())
    assert np.allclose(matrix_rep(ChaosElement.scalar(G1, 2.5), 3).dense(), 2.5 * np.eye(4))
    col = matrix_rep(wigner(EE), 3).apply_vacuum().coefficients
    assert np.array_equal(col, FockVector.from_word(FockBasis(G1, 3), (0, 0)).coefficients)


def test_free_bm_examples():
    assert free_bm(G2, 0).is_zero()
    assert close(free_bm(G2, 1), wigner(G2.basis(0)))
    s2 = free_bm(G2, 2)
    assert close(s2, wigner(G2.basis(0) + G2.basis(1)))
    assert l2_norm(s2) ** 2 == pytest.approx(2)
    with pytest.raises(DomainError):
        free_bm(G2, 2.5)


def test_moment_examples():
    s1 = free_bm(G1, 1)
    assert moment(s1, 2) == pytest.approx(1)
    assert moment(s1, 4) == pytest.approx(2)
    assert moment(random_chaos(make_rng(1), G2, 2), 0) == 1
    assert moment(wigner(EE), 1) == 0


def test_haagerup_examples():
    assert haagerup_bound(wigner(E)) == pytest.approx(2)
    assert haagerup_bound(ChaosElement.scalar(G1, 3)) == pytest.approx(3)
    assert haagerup_bound(wigner(EE) + 1) == pytest.approx(4)


def test_top_degree_of_zero_raises():
    with pytest.raises(DomainError):
        ChaosElement.zero(G2).top_degree


def test_element_is_immutable():
    y = wigner(E)
    with pytest.raises(AttributeError):
        y.grid = G2


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_star_algebra_laws(seed):
    rng = make_rng(seed)
    y, z, w = (random_chaos(rng, G2, 2) for _ in range(3))
    assert close(adjoint(y * z), adjoint(z) * adjoint(y), 1e-12)
    assert close((y * z) * w, y * (z * w), 1e-10)
    assert l2_inner(y, y) == pytest.approx(trace(adjoint(y) * y), abs=1e-12)
    assert trace(y * z) == pytest.approx(trace(z * y), abs=1e-12)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), dy=st.integers(0, 2), dz=st.integers(0, 2))
def test_product_agrees_with_operator_product(seed, dy, dz):
    rng = make_rng(seed)
    y, z = random_chaos(rng, G2, dy), random_chaos(rng, G2, dz)
    d = dy + dz
    col = (matrix_rep(y, d) @ matrix_rep(z, d)).apply_vacuum()
    assert np.allclose(col.coefficients, fock_vector(y * z, col.basis).coefficients, atol=1e-12)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(0, 5))
def test_truncated_norm_below_haagerup(seed, d):
    y = random_chaos(make_rng(seed), G2, 2)
    assert operator_norm_estimate(matrix_rep(y, d)) <= haagerup_bound(y) + 1e-9


def test_semicircle_moments_of_free_bm():
    g = GridSpec(3.0, 3)
    for t in (1.0, 2.0, 3.0):
        s = free_bm(g, t)
        for k in range(5):
            assert moment(s, 2 * k) == pytest.approx(math.comb(2 * k, k) / (k + 1) * t**k, rel=1e-12)
            assert abs(moment(s, 2 * k + 1)) < 1e-10
