import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from sphere_riesz.errors import DomainError
from sphere_riesz.special_fn import (
    assoc_legendre,
    gauss_legendre_rule,
    gegenbauer_at_one,
    gegenbauer_eval,
    normalized_gegenbauer_table,
    sphere_surface_area,
)

T_GRID = np.linspace(-1.0, 1.0, 41)


@pytest.mark.parametrize("nu,k,t,expected", [
    (0.5, 0, 0.7, 1.0),
    (0.5, 2, 0.0, -0.5),
    (1.0, 2, 1.0, 3.0),
])
def test_gegenbauer_examples(nu, k, t, expected):
    assert gegenbauer_eval(nu, k, t) == pytest.approx(expected, abs=1e-14)


@pytest.mark.parametrize("nu", [0.25, 0.5, 1.0, 1.5, 2.5])
@pytest.mark.parametrize("k", [0, 1, 3, 10, 40])
def test_gegenbauer_matches_scipy(nu, k):
    ref = special.eval_gegenbauer(k, nu, T_GRID)
    got = gegenbauer_eval(nu, k, T_GRID)
    assert np.allclose(got, ref, rtol=1e-11, atol=1e-11 * max(1.0, np.max(np.abs(ref))))


def test_gegenbauer_domain_errors():
    with pytest.raises(DomainError):
        gegenbauer_eval(0.5, 3, 1.5)
    with pytest.raises(DomainError):
        gegenbauer_eval(-0.5, 3, 0.2)
    # roundoff just past the endpoint is tolerated
    assert gegenbauer_eval(0.5, 3, 1.0 + 1e-13) == pytest.approx(1.0)


@settings(max_examples=60, deadline=None)
@given(nu=st.sampled_from([0.5, 1.0, 1.5, 2.0, 2.5]), k=st.integers(0, 64))
def test_gegenbauer_parity_and_max_at_one(nu, k):
    even = gegenbauer_eval(nu, k, -T_GRID)
    odd = (-1) ** k * gegenbauer_eval(nu, k, T_GRID)
    scale = gegenbauer_at_one(nu, k)
    assert np.max(np.abs(even - odd)) <= 1e-12 * scale
    assert np.max(np.abs(gegenbauer_eval(nu, k, T_GRID))) <= scale * (1 + 1e-12)


@pytest.mark.parametrize("nu,k,expected", [(0.5, 7, 1.0), (1.0, 2, 3.0), (1.5, 1, 3.0)])
def test_gegenbauer_at_one_examples(nu, k, expected):
    assert gegenbauer_at_one(nu, k) == pytest.approx(expected, rel=1e-13)


@pytest.mark.parametrize("nu", [-0.25, 0.0, 0.3, 1.0, 2.5])
def test_gegenbauer_at_one_against_recurrence(nu):
    for k in range(0, 30):
        assert gegenbauer_at_one(nu, k) == pytest.approx(gegenbauer_eval(nu, k, 1.0), rel=1e-11, abs=1e-14)


def test_gegenbauer_at_one_guard():
    with pytest.raises(OverflowError):
        gegenbauer_at_one(1.0, 10**6 + 1)


def test_normalized_table_rows():
    for nu in (0.5, 1.0, 2.0):
        table = normalized_gegenbauer_table(nu, 20, T_GRID)
        for k in range(21):
            ref = special.eval_gegenbauer(k, nu, T_GRID) / special.eval_gegenbauer(k, nu, 1.0)
            assert np.allclose(table[k], ref, atol=1e-12)


@pytest.mark.parametrize("l,m,t,expected", [
    (2, 0, 0.0, -0.5),
    (1, 1, 0.0, 1.0),
    (3, 2, 0.5, 15 * 0.5 * (1 - 0.25)),
])
def test_assoc_legendre_examples(l, m, t, expected):
    assert assoc_legendre(l, m, t) == pytest.approx(expected, abs=1e-14)


def test_assoc_legendre_against_scipy_without_phase():
    for l in range(0, 12):
        for m in range(0, l + 1):
            ref = (-1) ** m * special.lpmv(m, l, T_GRID)
            got = assoc_legendre(l, m, T_GRID)
            assert np.allclose(got, ref, rtol=1e-10, atol=1e-10 * max(1.0, np.max(np.abs(ref))))


def test_assoc_legendre_domain():
    with pytest.raises(DomainError):
        assoc_legendre(2, 3, 0.1)
    with pytest.raises(DomainError):
        assoc_legendre(2, 1, -1.2)


@pytest.mark.parametrize("k", range(0, 65, 8))
def test_legendre_consistency(k):
    assert np.allclose(gegenbauer_eval(0.5, k, T_GRID), assoc_legendre(k, 0, T_GRID), atol=1e-11)


def test_rule_small_cases():
    r1 = gauss_legendre_rule(1)
    assert list(r1.nodes) == [0.0] and list(r1.weights) == [2.0]
    r2 = gauss_legendre_rule(2)
    assert np.allclose(r2.nodes, [-1 / math.sqrt(3), 1 / math.sqrt(3)], atol=1e-10)
    assert np.allclose(r2.weights, [1.0, 1.0], atol=1e-14)


def test_rule_integrates_t30():
    r = gauss_legendre_rule(16)
    assert abs(np.dot(r.weights, r.nodes**30) - 2 / 31) <= 1e-12


@pytest.mark.parametrize("m", [3, 7, 20, 64])
def test_rule_matches_numpy(m):
    x, w = np.polynomial.legendre.leggauss(m)
    r = gauss_legendre_rule(m)
    assert np.allclose(r.nodes, x, atol=1e-14)
    assert np.allclose(r.weights, w, atol=1e-14)


@pytest.mark.parametrize("m", [1, 2, 5, 16, 31, 64])
def test_rule_invariants_and_exactness(m):
    r = gauss_legendre_rule(m)
    assert r.order == m
    assert np.all(np.diff(r.nodes) > 0) and np.all(np.abs(r.nodes) < 1)
    assert np.all(r.weights > 0)
    assert abs(r.weights.sum() - 2.0) <= 1e-12
    for j in range(2 * m):
        exact = 2.0 / (j + 1) if j % 2 == 0 else 0.0
        assert abs(np.dot(r.weights, r.nodes**j) - exact) <= 1e-10


def test_rule_is_read_only_and_large_rule_converges():
    r = gauss_legendre_rule(4160)
    with pytest.raises(ValueError):
        r.nodes[0] = 0.0
    assert abs(r.weights.sum() - 2.0) <= 1e-12
    with pytest.raises(DomainError):
        gauss_legendre_rule(0)


@pytest.mark.parametrize("N,expected", [(1, 2 * math.pi), (2, 4 * math.pi), (3, 2 * math.pi**2)])
def test_sphere_surface_area(N, expected):
    assert sphere_surface_area(N) == pytest.approx(expected, rel=1e-14)


def test_sphere_surface_area_recursion():
    # omega_N = 2 pi / (N - 1) * omega_{N-2}
    for N in range(3, 10):
        assert sphere_surface_area(N) == pytest.approx(2 * math.pi / (N - 1) * sphere_surface_area(N - 2))
