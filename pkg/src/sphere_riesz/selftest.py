"""Fast invariant battery behind ``sphere-riesz selftest``.

Each check is small enough to finish in well under a second; the full pytest
suite covers the same ground at the stated sizes.
"""
from __future__ import annotations

import math

import numpy as np

from . import distributions as dist
from .harmonics_s2 import addition_residual, harmonic_table, product_grid
from .riesz import riesz_mean_eval, weak_convergence_probe
from .special_fn import gauss_legendre_rule, gegenbauer_eval, sphere_surface_area
from .sphere_geom import SpherePoint, zonal_integral
from .spectrum import (
    abel_weighted_kernel,
    kernel_eval,
    kernel_norm_band,
    kernel_norm_full,
    riesz_profile,
)


def _random_point(rng):
    return SpherePoint(rng.normal(size=3))


def check_quadrature():
    worst = 0.0
    for m in (1, 2, 5, 16, 33):
        r = gauss_legendre_rule(m)
        for j in range(2 * m):
            exact = 2.0 / (j + 1) if j % 2 == 0 else 0.0
            worst = max(worst, abs(float(np.dot(r.weights, r.nodes**j)) - exact))
    return worst <= 1e-10, f"max moment error {worst:.2e}"


def check_gegenbauer_symmetry():
    t = np.linspace(-1, 1, 21)
    worst = 0.0
    for nu in (0.5, 1.0, 1.5):
        for k in range(0, 33, 4):
            a, b = gegenbauer_eval(nu, k, -t), (-1) ** k * gegenbauer_eval(nu, k, t)
            worst = max(worst, float(np.max(np.abs(a - b) / (1.0 + np.abs(b)))))
    return worst <= 1e-12, f"max asymmetry {worst:.2e}"


def check_surface_areas():
    worst = max(abs(zonal_integral(np.ones_like, 0.0, math.pi, N, 64) - sphere_surface_area(N))
                for N in (2, 3, 4))
    return worst <= 1e-9, f"max area error {worst:.2e}"


def check_addition_theorem(seed):
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(5):
        x, y = _random_point(rng), _random_point(rng)
        worst = max(worst, max(addition_residual(k, x, y) for k in range(0, 17)))
    return worst <= 1e-9, f"max residual {worst:.2e}"


def check_gram():
    kmax = 4
    th, ph, w = product_grid(kmax + 1)
    table = harmonic_table(kmax, th.ravel(), ph.ravel()).reshape((kmax + 1) * (2 * kmax + 1), -1)
    rows = [(k, m) for k in range(kmax + 1) for m in range(-k, k + 1)]
    idx = [k * (2 * kmax + 1) + m + kmax for k, m in rows]
    y = table[idx]
    gram = (y * w.ravel()) @ y.T
    err = float(np.max(np.abs(gram - np.eye(len(rows)))))
    return err <= 1e-9, f"max Gram defect {err:.2e}"


def check_parseval():
    worst = 0.0
    for alpha in (0, 1, 2):
        p = riesz_profile(2, 12, alpha)
        worst = max(worst, abs(kernel_norm_band(p, 0.0) / kernel_norm_full(p) - 1.0))
    return worst <= 1e-6, f"max relative defect {worst:.2e}"


def check_constant_reproduction():
    one = dist.GeneralDistribution.from_dict({(0, 0): math.sqrt(4 * math.pi)})
    x = SpherePoint.from_angles(0.3, 1.1)
    worst = max(abs(riesz_mean_eval(one, n, a, x) - 1.0) for a in (0, 1, 2) for n in (1, 7, 32))
    return worst <= 1e-12, f"max deviation {worst:.2e}"


def check_abel():
    t = np.linspace(-1, 1, 33)
    worst = 0.0
    for l in (0.0, 1.0, 2.4):
        direct = kernel_eval(riesz_profile(2, 24, 1.0, l), t)
        abel = abel_weighted_kernel(2, 24, 1.0, l, t)
        worst = max(worst, float(np.max(np.abs(abel - direct)) / np.max(np.abs(direct))))
    return worst <= 1e-9, f"max relative defect {worst:.2e}"


def check_kernel_consistency():
    p = SpherePoint.north()
    x = SpherePoint.from_angles(1.2, 0.4)
    a = riesz_mean_eval(dist.dirac(p), 20, 2.0, x)
    b = kernel_eval(riesz_profile(2, 20, 2.0), math.cos(1.2))
    return abs(a - b) <= 1e-12, f"difference {abs(a - b):.2e}"


def check_weak_convergence(seed):
    rng = np.random.default_rng(seed)
    g = dist.GeneralDistribution(_random_table(rng, 6))
    rows = weak_convergence_probe(dist.dirac(_random_point(rng)), g, range(1, 12))
    ok = all(v == exact for n, v, exact in rows if n > 6)
    return ok, "saturated past the bandlimit" if ok else "pairing drifted past the bandlimit"


def check_funk_hecke():
    f = dist.funk_hecke_density(np.cos, SpherePoint.north(), 2, 4)
    d = f.coefficients(4)
    ok = abs(d[1] - 4 * math.pi / 3) <= 1e-10 and np.all(np.abs(d[[0, 2, 3, 4]]) <= 1e-10)
    return bool(ok), f"d_1 = {d[1]:.12f}"


def _random_table(rng, kmax):
    c = rng.normal(size=(kmax + 1, 2 * kmax + 1))
    for k in range(kmax + 1):
        c[k, : kmax - k] = 0.0
        c[k, kmax + k + 1:] = 0.0
    return c


def run_checks(seed: int = 42):
    """Yield (name, passed, detail) for every check."""
    checks = [
        ("quadrature exactness", check_quadrature),
        ("gegenbauer parity", check_gegenbauer_symmetry),
        ("surface areas", check_surface_areas),
        ("addition theorem", lambda: check_addition_theorem(seed)),
        ("harmonic orthonormality", check_gram),
        ("kernel parseval", check_parseval),
        ("constant reproduction", check_constant_reproduction),
        ("abel identity", check_abel),
        ("kernel consistency", check_kernel_consistency),
        ("funk-hecke", check_funk_hecke),
        ("weak convergence", lambda: check_weak_convergence(seed)),
    ]
    for name, fn in checks:
        try:
            ok, detail = fn()
        except Exception as exc:  # a crash is a failed check, not a crashed battery
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        yield name, bool(ok), detail

