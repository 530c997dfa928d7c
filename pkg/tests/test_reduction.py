import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from freechaos.chaos import ChaosElement, l2_norm, trace, wigner
from freechaos.exceptions import DomainError, ShapeError
from freechaos.grid import CoeffTensor, GridSpec, inner, tensor
from freechaos.reduction import (
    ReductionStep,
    delta_ph,
    iterate_reduction,
    key_inequality_check,
    tau_p,
    zero_divisor_probe,
)
from freechaos.sampling import make_rng, random_chaos, random_direction, random_tensor
from freechaos.verify import near_kernel_pair

G1 = GridSpec(1.0, 1)
G2 = GridSpec(2.0, 2)
E = G1.basis(0)
ONE = ChaosElement.scalar(G1, 1)


def test_tau_p_examples():
    y = random_chaos(make_rng(0), G2, 3)
    assert tau_p(ChaosElement.scalar(G2, 1), y) == pytest.approx(trace(y))
    assert tau_p(wigner(E), wigner(E)) == pytest.approx(1)
    assert tau_p(wigner(tensor(E, E)), wigner(E)) == 0


def test_delta_examples():
    assert l2_norm(delta_ph(ONE, E, wigner(E)) - 1) < 1e-14
    assert delta_ph(wigner(E), E, ChaosElement.scalar(G1, 2)).is_zero()
    assert l2_norm(delta_ph(ONE, E, wigner(tensor(E, E))) - wigner(E)) < 1e-14


def test_reduction_examples():
    rep = iterate_reduction(wigner(tensor(E, E)), [(ONE, E), (ONE, E)])
    assert rep.final_scalar == pytest.approx(1) and rep.predicted_scalar == pytest.approx(1)
    assert rep.agrees and rep.intermediate_top_degrees == [2, 1, 0]
    one2 = ChaosElement.scalar(G2, 1)
    rep = iterate_reduction(wigner(G2.basis(0)), [(one2, G2.basis(1))])
    assert rep.final_scalar == 0 and rep.agrees


def test_reduction_step_count_and_degree_checks():
    with pytest.raises(DomainError):
        iterate_reduction(wigner(tensor(E, E)), [(ONE, E)])
    with pytest.raises(DomainError):
        iterate_reduction(ChaosElement.zero(G1), [])
    with pytest.raises(ShapeError):
        ReductionStep(ONE, tensor(E, E))


def test_reduction_brute_force_prediction():
    # predicted value computed independently: tau of each p times the top pairing
    rng = make_rng(5)
    y = random_chaos(rng, G2, 3, min_degree=1)
    ps = [random_chaos(rng, G2, 2, self_adjoint=True) for _ in range(3)]
    hs = [random_direction(rng, G2) for _ in range(3)]
    rep = iterate_reduction(y, list(zip(ps, hs)))
    h_all = tensor(tensor(hs[0], hs[1]), hs[2])
    expected = np.prod([trace(p) for p in ps]) * inner(y.degrees[3], h_all)
    assert rep.final_scalar == pytest.approx(expected, abs=1e-12)


def test_zero_divisor_examples():
    zero = ChaosElement.zero(G1)
    assert zero_divisor_probe(zero, wigner(E)).normYu == 0
    assert zero_divisor_probe(wigner(E), zero).normYu == 0
    assert zero_divisor_probe(wigner(E), wigner(E)).normYu == pytest.approx(np.sqrt(2))


def test_key_inequality_examples():
    rep = key_inequality_check(wigner(E), ONE, ONE, ONE, ONE, E)
    assert rep.lhs == pytest.approx(1) and rep.rhs == pytest.approx(8) and rep.holds
    zero = ChaosElement.zero(G1)
    assert key_inequality_check(wigner(E), zero, zero, ONE, ONE, E).lhs == 0
    with pytest.raises(DomainError):
        key_inequality_check(wigner(E), ONE, ONE, ONE, ONE, E * 1j)


def test_near_kernel_pair_shrinks():
    eps = []
    for order in (4, 8, 16):
        x, u = near_kernel_pair(G1, 0.3, order)
        assert l2_norm(u) == pytest.approx(1)
        eps.append(l2_norm(x * u))
    assert eps[0] > eps[1] > eps[2]


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_delta_lowers_degree_and_is_linear(seed):
    rng = make_rng(seed)
    p, y1, y2 = random_chaos(rng, G2, 2), random_chaos(rng, G2, 3, min_degree=1), random_chaos(rng, G2, 3)
    h = random_tensor(rng, G2, 1)
    out = delta_ph(p, h, y1)
    assert out.is_zero() or out.top_degree <= y1.top_degree - 1
    a, b = complex(*rng.standard_normal(2)), complex(*rng.standard_normal(2))
    lhs = delta_ph(p, h, a * y1 + b * y2)
    assert l2_norm(lhs - (a * out + b * delta_ph(p, h, y2))) < 1e-12


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_key_inequality_random(seed):
    rng = make_rng(seed)
    args = [random_chaos(rng, G2, 2) for _ in range(5)]
    h = random_direction(rng, G2)
    assert key_inequality_check(*args, h / h.norm()).holds


@settings(max_examples=30, deadline=None)
@given(seed=st.integers(0, 2**32 - 1))
def test_no_zero_divisors_random(seed):
    rng = make_rng(seed)
    y, u = random_chaos(rng, G2, 3), random_chaos(rng, G2, 3)
    assert zero_divisor_probe(y, u).normYu > 1e-8
