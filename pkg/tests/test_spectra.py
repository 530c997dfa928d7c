import math

import numpy as np
import pytest
from scipy.integrate import quad
from hypothesis import given, settings, strategies as st

from freechaos.chaos import ChaosElement, free_bm, l2_inner, moment, trace, wigner
from freechaos.exceptions import DomainError
from freechaos.grid import GridSpec, tensor
from freechaos.sampling import make_rng, random_chaos
from freechaos.spectra import (
    SpectralMeasure,
    atom_scan,
    catalan,
    histogram,
    max_window_weight,
    moment_compare,
    semicircle_reference,
    vacuum_spectral_measure,
)

G1 = GridSpec(1.0, 1)
G2 = GridSpec(2.0, 2)
E = G1.basis(0)
S1 = free_bm(G1, 1.0)


def test_constant_measure():
    meas = vacuum_spectral_measure(ChaosElement.scalar(G1, 0.7), 4)
    assert meas.points == [(pytest.approx(0.7), pytest.approx(1.0))]


def test_two_point_measure():
    meas = vacuum_spectral_measure(S1, 1)
    assert np.allclose(meas.eigenvalues, [-1, 1]) and np.allclose(meas.weights, [0.5, 0.5])


@pytest.mark.parametrize("d", [2, 3, 5, 9])
def test_truncated_field_closed_form(d):
    meas = vacuum_spectral_measure(S1, d)
    k = np.arange(1, d + 2)
    lam = 2 * np.cos(k * np.pi / (d + 2))
    order = np.argsort(lam)
    w = (2 / (d + 2)) * np.sin(k * np.pi / (d + 2)) ** 2
    assert np.allclose(meas.eigenvalues, lam[order], atol=1e-12)
    assert np.allclose(meas.weights, w[order], atol=1e-12)


def test_measure_domain_errors():
    with pytest.raises(DomainError):
        vacuum_spectral_measure(wigner(E * 1j), 3)
    with pytest.raises(DomainError):
        vacuum_spectral_measure(wigner(tensor(E, E)), 1)


def test_moment_compare_examples():
    rows = moment_compare(S1, 4, 8)
    assert [round(r.exact.real) for r in rows] == [1, 0, 1, 0, 2, 0, 5, 0, 14]
    assert all(abs(r.truncated - r.exact) < 1e-10 for r in rows)
    assert moment_compare(S1, 4, 0)[0].truncated == pytest.approx(1)
    y = wigner(tensor(E, E))
    assert moment(y, 2) == pytest.approx(l2_inner(y, y))
    assert vacuum_spectral_measure(y, 4).moment(2) == pytest.approx(1, abs=1e-12)


def test_semicircle_reference_examples():
    assert semicircle_reference(1, 2) == 1
    assert semicircle_reference(1, 3) == 0
    assert semicircle_reference(2, 4) == 8
    assert [catalan(n) for n in range(6)] == [1, 1, 2, 5, 14, 42]
    with pytest.raises(DomainError):
        semicircle_reference(0, 2)


def test_semicircle_reference_against_quadrature():
    for t in (1.0, 2.5):
        r = 2 * math.sqrt(t)
        for k in range(0, 9):
            value, _ = quad(lambda x: x**k * math.sqrt(max(4 * t - x * x, 0.0)) / (2 * math.pi * t), -r, r)
            assert value == pytest.approx(semicircle_reference(t, k), rel=1e-8, abs=1e-10)


def test_atom_scan_examples():
    assert [w for _, w in atom_scan(ChaosElement.scalar(G1, 3), [2, 4, 6], 0.05)] == pytest.approx([1, 1, 1])
    rows = atom_scan(S1, [4, 6, 8, 10], 0.05)
    for d, w in rows:
        assert w <= 2 / (d + 2) + 1e-12
    with pytest.raises(DomainError):
        atom_scan(S1, [4], 0)


def test_atom_scan_regression_fixture():
    y = wigner(tensor(E, E)) + wigner(E)
    col = [w for _, w in atom_scan(y, [4, 6, 8, 10], 0.05)]
    assert all(a > b for a, b in zip(col, col[1:]))
    assert col == pytest.approx([0.571, 0.422, 0.335, 0.283], abs=2e-3)


def test_max_window_weight_window_is_closed():
    meas = SpectralMeasure(np.array([0.0, 0.1, 0.3]), np.array([0.25, 0.25, 0.5]))
    assert max_window_weight(meas, 0.05) == pytest.approx(0.5)
    assert max_window_weight(meas, 0.0999) == pytest.approx(0.5)
    # width 0.2 reaches from 0.1 to 0.3 inclusive
    assert max_window_weight(meas, 0.1) == pytest.approx(0.75)


def test_histogram_single_point():
    edges, weights = histogram(SpectralMeasure(np.array([2.0]), np.array([1.0])), 10)
    assert len(weights) == 1 and weights[0] == pytest.approx(1) and edges[0] < 2 < edges[1]


@settings(max_examples=20, deadline=None)
@given(seed=st.integers(0, 2**32 - 1), d=st.integers(2, 6))
def test_measure_is_probability_with_exact_low_moments(seed, d):
    y = random_chaos(make_rng(seed), G2, 2, self_adjoint=True)
    meas = vacuum_spectral_measure(y, d)
    assert meas.total_mass() == pytest.approx(1, abs=1e-10)
    assert np.all(meas.weights > 0)
    assert meas.moment(1) == pytest.approx(trace(y).real, abs=1e-10)
    assert meas.moment(2) == pytest.approx(moment(y, 2).real, abs=1e-10)
    for row in moment_compare(y, d, d // 2):
        if row.in_window:
            assert row.error < 1e-9


def test_free_bm_measure_matches_semicircle():
    g = GridSpec(2.0, 2)
    meas = vacuum_spectral_measure(free_bm(g, 2.0), 6)
    for k in range(7):
        assert meas.moment(k) == pytest.approx(semicircle_reference(2.0, k), abs=1e-9)
    assert math.isclose(meas.total_mass(), 1.0, abs_tol=1e-12)
