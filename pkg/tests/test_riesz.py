import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import special

from sphere_riesz.distributions import (
    GeneralDistribution,
    dirac,
    funk_hecke_density,
    laplacian_power,
    zero,
    zonal_function,
)
from sphere_riesz.errors import DomainError, HypothesisError
from sphere_riesz.riesz import (
    ExperimentReport,
    exponent_fit,
    localization_experiment,
    reconstruction_experiment,
    riesz_mean_eval,
    riesz_mean_values,
    sharpness_probe,
    sup_on_grid,
    weak_convergence_probe,
    windowed_max,
)
from sphere_riesz.sphere_geom import Cap, CapComplement, SpherePoint, cap_grid
from sphere_riesz.spectrum import kernel_eval, riesz_profile

NORTH = SpherePoint.north()
V = CapComplement(NORTH, math.pi / 4)
K = CapComplement(NORTH, math.pi / 3)
ONE = GeneralDistribution.from_dict({(0, 0): math.sqrt(4 * math.pi)})
Y10 = GeneralDistribution.from_dict({(1, 0): math.sqrt(4 * math.pi / 3)})


def random_table(rng, kmax):
    c = rng.normal(size=(kmax + 1, 2 * kmax + 1))
    for k in range(kmax + 1):
        c[k, : kmax - k] = 0.0
        c[k, kmax + k + 1:] = 0.0
    return c


def test_constant_reproduction_small():
    x = SpherePoint.from_angles(2.0, 0.3)
    for alpha in (0, 1, 2):
        for n in (1, 2, 17):
            assert riesz_mean_eval(ONE, n, alpha, x) == pytest.approx(1.0, abs=1e-12)
            assert riesz_mean_eval(zonal_function(2, NORTH, [4 * math.pi]), n, alpha, x) == pytest.approx(1.0, abs=1e-12)


def test_riesz_examples():
    assert riesz_mean_eval(dirac(NORTH), 1, 0.0, NORTH) == pytest.approx(1 / (4 * math.pi), rel=1e-14)
    x = SpherePoint([1.0, 0.0, 0.0])
    k = np.arange(8)
    lam = k * (k + 1.0)
    ref = math.fsum((1 - lam / 72.0) ** 2 * (2 * k + 1) / (4 * math.pi) * special.eval_legendre(k, 0.0))
    assert riesz_mean_eval(dirac(NORTH), 8, 2.0, x) == pytest.approx(ref, abs=1e-14)


def test_sup_on_grid_examples():
    grid = cap_grid(K, 8)
    assert sup_on_grid(zero(2), 16, 2.0, grid) == 0.0
    x = grid[5]
    assert sup_on_grid(dirac(NORTH), 16, 2.0, [x]) == abs(riesz_mean_eval(dirac(NORTH), 16, 2.0, x))
    with pytest.raises(DomainError):
        sup_on_grid(dirac(NORTH), 16, 2.0, [])


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-3, 3), b=st.floats(-3, 3), n=st.integers(1, 40), alpha=st.sampled_from([0.0, 1.0, 2.0, 2.5]))
def test_linearity(a, b, n, alpha):
    f = dirac(NORTH)
    h = laplacian_power(dirac(NORTH), 1)
    pts = cap_grid(Cap(NORTH, 2.0), 4)
    lhs = riesz_mean_values(a * f + b * h, n, alpha, pts)
    rhs = a * riesz_mean_values(f, n, alpha, pts) + b * riesz_mean_values(h, n, alpha, pts)
    scale = max(1.0, np.max(np.abs(rhs)))
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * scale


def test_linearity_of_general_tables():
    rng = np.random.default_rng(8)
    f, g = GeneralDistribution(random_table(rng, 5)), GeneralDistribution(random_table(rng, 9))
    pts = cap_grid(Cap(NORTH, 3.0), 4)
    lhs = riesz_mean_values(2.0 * f + (-0.5) * g, 7, 1.5, pts)
    rhs = 2.0 * riesz_mean_values(f, 7, 1.5, pts) - 0.5 * riesz_mean_values(g, 7, 1.5, pts)
    assert np.allclose(lhs, rhs, atol=1e-12)


def test_kernel_consistency():
    rng = np.random.default_rng(4)
    for _ in range(10):
        p, x = SpherePoint(rng.normal(size=3)), SpherePoint(rng.normal(size=3))
        n, alpha = int(rng.integers(1, 80)), float(rng.choice([0.0, 1.0, 2.0, 3.5]))
        a = riesz_mean_eval(dirac(p), n, alpha, x)
        b = kernel_eval(riesz_profile(2, n, alpha), float(np.dot(p.coords, x.coords)))
        assert a == pytest.approx(b, abs=1e-12)


def test_zonal_and_table_paths_agree():
    p = SpherePoint.from_angles(1.0, 4.0)
    f = laplacian_power(dirac(p), 1)
    from sphere_riesz.distributions import zonal_table_on_s2
    table = GeneralDistribution(zonal_table_on_s2(f, 30))
    pts = cap_grid(Cap(NORTH, 2.5), 6)
    assert np.allclose(riesz_mean_values(f, 30, 2.0, pts), riesz_mean_values(table, 30, 2.0, pts), atol=1e-10)


def test_exponent_fit_examples():
    fit = exponent_fit([(2, 0.25), (4, 0.0625), (8, 0.015625)])
    assert fit.slope == pytest.approx(-2.0, abs=1e-14) and fit.r_squared == 1.0
    assert exponent_fit([(2, 3.0), (4, 3.0), (8, 3.0)]).slope == 0.0
    fit = exponent_fit([(n, 3 * n**-1.5) for n in (8, 16, 32, 64, 128, 256)])
    assert abs(fit.slope + 1.5) <= 1e-12
    assert fit.intercept == pytest.approx(math.log(3), abs=1e-12)
    with pytest.raises(DomainError):
        exponent_fit([(2, 1.0), (4, 0.0), (8, 1.0)])
    with pytest.raises(DomainError):
        exponent_fit([(2, 1.0), (4, 1.0)])


def test_windowed_max_grows_with_window():
    vals = lambda m: math.sin(m) * m
    for n in (3, 10, 40):
        w = [windowed_max(vals, n, k) for k in (1, 2, 3, 5)]
        assert w == sorted(w)


def test_zero_distribution_is_degenerate():
    rep = localization_experiment(zero(2), V, 1.2, 2.0, [32, 64, 128], resolution=16)
    assert rep.verdicts["info_degenerate"] is True
    assert all(r.sup_value == 0.0 for r in rep.rows)
    assert rep.fit is None


def test_localization_hypothesis_gates():
    with pytest.raises(HypothesisError, match="alpha"):
        localization_experiment(dirac(NORTH), V, 1.2, 1.0, [32, 64, 128])
    with pytest.raises(HypothesisError, match="vanish"):
        localization_experiment(dirac(NORTH), Cap(NORTH, 1.0), 1.2, 2.0, [32, 64, 128])
    with pytest.raises(HypothesisError, match="H\\^-"):
        localization_experiment(dirac(NORTH), V, 0.9, 2.0, [32, 64, 128])
    with pytest.raises(HypothesisError, match="margin"):
        localization_experiment(dirac(NORTH), V, 1.2, 2.0, [32, 64, 128], K=CapComplement(NORTH, 0.8))


def test_localization_default_compact_and_report():
    rep = localization_experiment(dirac(NORTH), V, 1.2, 2.0, [16, 32, 64, 128], resolution=16)
    assert rep.config["K"]["radius"] == pytest.approx(math.pi / 4 + 0.1)
    assert rep.verdicts["theoretical_exponent"] == pytest.approx(-0.3)
    assert rep.verdicts["kernel_rate_exponent"] == pytest.approx(-1.5)
    assert rep.passed
    d = rep.to_dict()
    assert set(d) == {"command", "config", "rows", "fit", "verdicts"}


def test_report_passed_ignores_info_flags():
    rep = ExperimentReport("x", {}, [], None, {"a": True, "info_b": False, "value": 0.0})
    assert rep.passed
    rep.verdicts["c"] = False
    assert not rep.passed


def test_reconstruction_with_constant_part():
    n_list = [16, 32, 64]
    a = reconstruction_experiment(dirac(NORTH), ONE, V, 1.2, 2.0, n_list, resolution=16, K=K)
    b = localization_experiment(dirac(NORTH), V, 1.2, 2.0, n_list, resolution=16, K=K)
    for ra, rb in zip(a.rows, b.rows):
        assert ra.sup_value == pytest.approx(rb.sup_value, abs=1e-14)
        assert ra.extra["deformation_sup"] <= 1e-14


def test_smooth_part_alone_deforms_in_closed_form():
    n_list = [16, 32, 64, 128]
    rep = reconstruction_experiment(zero(2), Y10, V, 1.2, 2.0, n_list, resolution=16, K=K)
    # g = cos(gamma); K reaches the antipode, so sup_K |g| = 1
    for r in rep.rows:
        lam_n = r.n * (r.n + 1.0)
        assert r.extra["singular_sup"] == 0.0
        assert r.extra["deformation_sup"] == pytest.approx(abs((1 - 2 / lam_n) ** 2 - 1), rel=1e-10)
        assert r.sup_value == pytest.approx(r.extra["deformation_sup"], rel=1e-12)
    fit = exponent_fit([(r.n, r.sup_value) for r in rep.rows])
    assert fit.slope == pytest.approx(-2.0, abs=0.05)


def test_reconstruction_boundary_order_is_informational():
    rep = reconstruction_experiment(dirac(NORTH), ONE, V, 1.5, 2.0, [16, 32, 64], resolution=8, K=K)
    assert rep.verdicts["info_boundary_order"] is True


def test_sharpness_contrast():
    n_list = [16, 32, 64, 128, 256]
    assert sharpness_probe(dirac(NORTH), math.pi / 2 + 0.1, n_list).slope == pytest.approx(0.5, abs=0.25)
    assert sharpness_probe(dirac(NORTH), math.pi / 2 + 0.1, n_list, alpha=2.0).slope == pytest.approx(-1.5, abs=0.25)
    with pytest.raises(DomainError):
        sharpness_probe(dirac(NORTH), 0.2, n_list)


def test_weak_convergence_examples():
    rows = weak_convergence_probe(dirac(NORTH), ONE, range(1, 6))
    assert all(v == pytest.approx(1.0, abs=1e-14) for _, v, _ in rows)
    cos = funk_hecke_density(np.cos, NORTH, 2, 1)
    g = zonal_function(2, NORTH, cos.coefficients(1))
    rows = weak_convergence_probe(dirac(NORTH), g, range(1, 6))
    assert rows[0][1] == pytest.approx(0.0, abs=1e-12)
    assert all(v == pytest.approx(1.0, abs=1e-12) for n, v, _ in rows if n >= 2)


@pytest.mark.parametrize("seed", range(5))
def test_weak_convergence_saturates_bitwise(seed):
    rng = np.random.default_rng(seed)
    deg = int(rng.integers(1, 9))
    g = GeneralDistribution(random_table(rng, deg))
    f = laplacian_power(dirac(SpherePoint(rng.normal(size=3))), 1)
    rows = weak_convergence_probe(f, g, range(1, deg + 6))
    assert all(v == exact for n, v, exact in rows if n > deg)
