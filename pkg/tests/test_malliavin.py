import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from freechaos import malliavin as mv
from freechaos.chaos import ChaosElement, adjoint, l2_inner, l2_norm, wigner
from freechaos.exceptions import DomainError
from freechaos.grid import GridSpec, tensor
from freechaos.sampling import (
    make_rng,
    random_adapted_biprocess,
    random_bitensor,
    random_chaos,
    random_direction,
)

G1 = GridSpec(1.0, 1)
G2 = GridSpec(2.0, 2)
E = G1.basis(0)
ONE1 = ChaosElement.scalar(G1, 1)
ONE2 = ChaosElement.scalar(G2, 1)


def close(y, z, tol=1e-12):
    return l2_norm(y - z) <= tol


def bclose(u, w, tol=1e-12):
    return (u - w).norm() <= tol


def test_gradient_examples():
    grad = mv.directional_gradient(wigner(tensor(E, E)), E)
    assert set(grad.components) == {(0, 1), (1, 0)}
    assert np.allclose(grad.component(0, 1), [1]) and np.allclose(grad.component(1, 0), [1])
    assert mv.directional_gradient(ChaosElement.scalar(G1, 4), E).is_zero()
    assert mv.directional_gradient(wigner(G2.basis(0)), G2.basis(1)).is_zero()


def test_divergence_examples():
    assert close(mv.directional_divergence(mv.ChaosBitensor.unit(G1), E), wigner(E))
    x = wigner(E)
    assert close(mv.directional_divergence(mv.pure_bitensor(x, ONE1), E), wigner(tensor(E, E)))
    assert mv.directional_divergence(mv.ChaosBitensor(G1), E).is_zero()


def test_gradient_biprocess_examples():
    v = mv.gradient_biprocess(wigner(E))
    assert bclose(v.values[0], mv.ChaosBitensor.unit(G1))
    zero = mv.gradient_biprocess(ChaosElement.scalar(G2, 2))
    assert all(val.is_zero() for val in zero.values)
    assert mv.gradient_biprocess(wigner(tensor(E, E))).b2_norm() == pytest.approx(np.sqrt(2))


def test_pairing_examples():
    y = random_chaos(make_rng(0), G2, 3)
    h = random_direction(make_rng(1), G2)
    assert bclose(mv.biprocess_pair(mv.gradient_biprocess(y), h), mv.directional_gradient(y, h))
    assert mv.biprocess_pair(mv.gradient_biprocess(y), h * 0).is_zero()


def test_divergence_simple_examples():
    u = mv.SimpleBiprocess(G2, [mv.ChaosBitensor.unit(G2), mv.ChaosBitensor(G2)])
    assert close(mv.divergence_simple(u), wigner(G2.basis(0)))
    assert mv.divergence_simple(mv.SimpleBiprocess.zero(G2)).is_zero()


def test_stochastic_integral_examples():
    u = mv.SimpleBiprocess(G2, [mv.ChaosBitensor.unit(G2), mv.ChaosBitensor(G2)])
    assert close(mv.stochastic_integral(u), wigner(G2.basis(0)))
    v = mv.SimpleBiprocess(G2, [mv.ChaosBitensor(G2), mv.pure_bitensor(wigner(G2.basis(0)), ONE2)])
    assert close(mv.stochastic_integral(v), wigner(tensor(G2.basis(0), G2.basis(1))))


def test_stochastic_integral_rejects_non_adapted():
    u = mv.gradient_biprocess(wigner(tensor(G2.basis(0), G2.basis(0))))
    assert not mv.is_adapted(u)
    with pytest.raises(DomainError):
        mv.stochastic_integral(u)


def test_adaptedness_examples():
    const = mv.SimpleBiprocess(G2, [mv.ChaosBitensor.unit(G2)] * 2)
    assert mv.is_adapted(const)
    v = mv.SimpleBiprocess(G2, [mv.ChaosBitensor(G2), mv.pure_bitensor(wigner(G2.basis(0)), ONE2)])
    assert mv.is_adapted(v)


def test_number_operator_examples():
    assert mv.number_operator(ChaosElement.scalar(G2, 3)).is_zero()
    f = wigner(tensor(G2.basis(0), G2.basis(1)))
    assert close(mv.number_operator(f), 2 * f)
    y, z = random_chaos(make_rng(2), G2, 3), random_chaos(make_rng(3), G2, 3)
    assert close(mv.number_operator(y + z), mv.number_operator(y) + mv.number_operator(z))


def test_partial_trace_examples():
    grad = mv.directional_gradient(wigner(tensor(E, E)), E)
    assert close(mv.partial_trace(grad, "right"), wigner(E))
    assert close(mv.partial_trace(mv.pure_bitensor(ONE1, wigner(E)), "left"), wigner(E))
    assert mv.partial_trace(mv.pure_bitensor(wigner(E), wigner(E)), "right").is_zero()


def test_bimodule_and_dagger_examples():
    u = random_bitensor(make_rng(4), G2, 2)
    assert bclose(mv.bimodule_action(ONE2, u, ONE2), u)
    x = wigner(E)
    assert bclose(mv.bimodule_action(x, mv.ChaosBitensor.unit(G1), ONE1), mv.pure_bitensor(x, ONE1))
    out = mv.bimodule_action(x, mv.pure_bitensor(x, ONE1), ONE1)
    assert bclose(out, mv.pure_bitensor(wigner(tensor(E, E)) + 1, ONE1))
    assert bclose(mv.dagger(mv.pure_bitensor(x, ONE1)), mv.pure_bitensor(ONE1, x))
    assert bclose(mv.dagger(mv.ChaosBitensor.unit(G1)), mv.ChaosBitensor.unit(G1))


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_gradient_is_a_real_derivation(seed):
    rng = make_rng(seed)
    y, z, h = random_chaos(rng, G2, 2), random_chaos(rng, G2, 2), random_direction(rng, G2)
    lhs = mv.directional_gradient(y * z, h)
    rhs = mv.bimodule_action(ONE2, mv.directional_gradient(y, h), z) + mv.bimodule_action(
        y, mv.directional_gradient(z, h), ONE2
    )
    assert bclose(lhs, rhs, 1e-10)
    assert bclose(mv.directional_gradient(adjoint(y), h), mv.dagger(mv.directional_gradient(y, h)), 1e-12)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_gradient_divergence_duality(seed):
    rng = make_rng(seed)
    y, h, u = random_chaos(rng, G2, 3), random_direction(rng, G2), random_bitensor(rng, G2, 2)
    lhs = mv.bitensor_inner(mv.directional_gradient(y, h), u)
    assert lhs == pytest.approx(l2_inner(y, mv.directional_divergence(u, h)), abs=1e-10)


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_number_operator_factorization(seed):
    y = random_chaos(make_rng(seed), G2, 3)
    assert close(mv.divergence_simple(mv.gradient_biprocess(y)), mv.number_operator(y), 1e-12)


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_adapted_integral_isometry(seed):
    u = random_adapted_biprocess(make_rng(seed), GridSpec(1.0, 3), 2)
    s = mv.stochastic_integral(u)
    assert l2_norm(s) == pytest.approx(u.b2_norm(), abs=1e-10)
    assert close(s, mv.divergence_simple(u), 1e-10)
