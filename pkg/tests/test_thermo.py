import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from spatialent.thermo import (
    bose_occupation,
    choose_truncation,
    mean_number,
    solve_chemical_potential,
    tail_bound,
    thermal_state,
)

BOSE_1_2_HALF = 0.8952551344023435155138831  # 1/(e^0.75 - 1), mpmath


def direct_tail(K, T, mu, terms=200_000):
    k = np.arange(K, K + terms, dtype=float)
    with np.errstate(over="ignore"):
        return float(np.sum(1.0 / np.expm1((k - mu) / T)))


def test_occupation_values():
    assert bose_occupation(0, 1.0, -math.log(2.0)) == pytest.approx(1.0, rel=1e-15)
    assert bose_occupation(1, 2.0, -0.5) == pytest.approx(BOSE_1_2_HALF, rel=1e-14)
    assert bose_occupation(5000, 1.0, -0.1) == 0.0


@pytest.mark.parametrize("mu", [0.0, 0.3])
def test_rejects_non_negative_mu(mu):
    with pytest.raises(ValueError):
        bose_occupation(0, 1.0, mu)


def test_rejects_non_positive_temperature():
    with pytest.raises(ValueError):
        bose_occupation(0, 0.0, -1.0)


def test_mean_number_against_brute_force():
    T, mu = 3.0, -0.7
    assert mean_number(T, mu) == pytest.approx(direct_tail(0, T, mu), rel=1e-13)


def test_round_trip_minus_ln2():
    T = 1.0
    k = np.arange(200)
    N = float(np.sum(1.0 / (2.0 * np.exp(k) - 1.0)))
    assert solve_chemical_potential(T, N) == pytest.approx(-math.log(2.0), rel=1e-10)


def test_low_temperature_limit():
    mu = solve_chemical_potential(1e-3, 10.0)
    assert -1e-3 < mu < 0.0
    n = bose_occupation(np.arange(4), 1e-3, mu)
    assert n[0] == pytest.approx(10.0, rel=1e-10)
    assert np.all(n[1:] < 1e-100)


def test_mu_increases_with_n():
    assert solve_chemical_potential(1.0, 50.0) > solve_chemical_potential(1.0, 5.0)


@pytest.mark.parametrize("N", [1.0, 10.0, 100.0])
def test_residual_on_grid(N):
    for T in np.geomspace(0.05, 100.0, 25):
        mu = solve_chemical_potential(T, N)
        assert abs(mean_number(T, mu) - N) / N <= 1e-8


def test_condensate_fraction_decreases_with_temperature():
    fracs = [thermal_state(T, 10.0).condensate_fraction for T in np.geomspace(0.05, 50.0, 30)]
    assert all(b < a for a, b in zip(fracs, fracs[1:]))


def test_truncation_small_at_low_temperature():
    mu = solve_chemical_potential(0.01, 10.0)
    assert choose_truncation(0.01, mu, 10.0, 1e-8) <= 5


def test_truncation_against_direct_tail():
    T, N, eps = 10.0, 10.0, 1e-8
    mu = solve_chemical_potential(T, N)
    K = choose_truncation(T, mu, N, eps)
    assert 100 < K < 500
    actual = direct_tail(K, T, mu)
    assert actual <= tail_bound(K, T, mu) <= eps * N
    # minimal with respect to the bound
    assert tail_bound(K - 1, T, mu) > eps * N


def test_truncation_monotone_in_eps():
    mu = solve_chemical_potential(5.0, 10.0)
    ks = [choose_truncation(5.0, mu, 10.0, eps) for eps in (1e-4, 1e-6, 1e-8, 1e-10)]
    assert ks == sorted(ks)


@settings(max_examples=40, deadline=None)
@given(T=st.floats(0.05, 100.0), N=st.floats(0.5, 200.0))
def test_state_invariants(T, N):
    s = thermal_state(T, N, eps=1e-6)
    assert s.mu < 0.0
    assert np.all(np.diff(s.n) < 0.0)
    assert direct_tail(s.K_max, T, s.mu, terms=50_000) <= s.tail_bound * (1 + 1e-12) + 1e-300
    assert s.retained_number + s.tail_bound == pytest.approx(N, rel=1e-6)
