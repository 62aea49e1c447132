"""Real orthonormal spherical harmonics on S^2.

Index convention: Y_{k,m} with -k <= m <= k; m > 0 carries sqrt(2) cos(m phi),
m < 0 carries sqrt(2) sin(|m| phi). No Condon-Shortley phase anywhere.
Coefficient tables are arrays c[k, m + kmax] of shape (kmax+1, 2*kmax+1).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .errors import DomainError
from .special_fn import assoc_legendre, gauss_legendre_rule
from .sphere_geom import SpherePoint, cos_angle
from .spectrum import zonal_eigenkernel


@dataclass(frozen=True)
class HarmonicIndex:
    k: int
    m: int

    def __post_init__(self):
        if self.k < 0 or abs(self.m) > self.k:
            raise DomainError(f"invalid harmonic index (k={self.k}, m={self.m})")


def indices(kmax: int) -> Iterator[HarmonicIndex]:
    for k in range(kmax + 1):
        for m in range(-k, k + 1):
            yield HarmonicIndex(k, m)


def _norm(k, m):
    am = abs(m)
    return math.sqrt((2 * k + 1) / (4 * math.pi) * math.exp(math.lgamma(k - am + 1) - math.lgamma(k + am + 1)))


def real_harmonic(k: int, m: int, theta, phi):
    """Y_{k,m}(theta, phi) from the associated Legendre function and N_{km}."""
    HarmonicIndex(k, m)
    theta = np.asarray(theta, dtype=float)
    phi = np.asarray(phi, dtype=float)
    radial = _norm(k, m) * assoc_legendre(k, abs(m), np.cos(theta), np.sin(theta))
    if m > 0:
        return (math.sqrt(2.0) * radial * np.cos(m * phi))[()]
    if m < 0:
        return (math.sqrt(2.0) * radial * np.sin(-m * phi))[()]
    return (radial * np.ones_like(phi))[()]


def normalized_legendre_table(kmax: int, t, s=None) -> np.ndarray:
    """Table p[k, m, :] = N_{km} P_k^m(t) for 0 <= m <= k <= kmax.

    Built from the fully normalized recurrences, so nothing overflows at high
    degree; entries with m > k are zero. ``s`` optionally supplies
    sqrt(1 - t^2) directly.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if s is None:
        s = np.sqrt(np.clip((1.0 - t) * (1.0 + t), 0.0, None))
    else:
        s = np.abs(np.atleast_1d(np.asarray(s, dtype=float)))
    p = np.zeros((kmax + 1, kmax + 1) + t.shape)
    p[0, 0] = 1.0 / math.sqrt(4.0 * math.pi)
    for m in range(1, kmax + 1):
        p[m, m] = math.sqrt((2.0 * m + 1.0) / (2.0 * m)) * s * p[m - 1, m - 1]
    for m in range(0, kmax):
        p[m + 1, m] = math.sqrt(2.0 * m + 3.0) * t * p[m, m]
    for m in range(0, kmax + 1):
        for k in range(m + 2, kmax + 1):
            a = math.sqrt((4.0 * k * k - 1.0) / (k * k - m * m))
            b = math.sqrt(((k - 1.0) ** 2 - m * m) / (4.0 * (k - 1.0) ** 2 - 1.0))
            p[k, m] = a * (t * p[k - 1, m] - b * p[k - 2, m])
    return p


def harmonic_table(kmax: int, theta, phi) -> np.ndarray:
    """All Y_{k,m} at the given points: array [k, m + kmax, point]."""
    theta = np.atleast_1d(np.asarray(theta, dtype=float))
    phi = np.atleast_1d(np.asarray(phi, dtype=float))
    leg = normalized_legendre_table(kmax, np.cos(theta), np.sin(theta))
    out = np.zeros((kmax + 1, 2 * kmax + 1) + theta.shape)
    out[:, kmax] = leg[:, 0]
    root2 = math.sqrt(2.0)
    for m in range(1, kmax + 1):
        c, s = root2 * np.cos(m * phi), root2 * np.sin(m * phi)
        out[:, kmax + m] = leg[:, m] * c
        out[:, kmax - m] = leg[:, m] * s
    return out


def points_to_angles(points) -> tuple[np.ndarray, np.ndarray]:
    xyz = np.array([p.coords for p in points], dtype=float)
    if xyz.shape[1] != 3:
        raise DomainError("harmonics are only available on S^2")
    theta = np.arctan2(np.hypot(xyz[:, 0], xyz[:, 1]), xyz[:, 2])
    phi = np.arctan2(xyz[:, 1], xyz[:, 0]) % (2.0 * math.pi)
    return theta, phi


def product_grid(mq: int):
    """Gauss-Legendre in cos(theta) times 2*mq equispaced longitudes.

    Returns theta, phi meshes and the matching quadrature weights.
    """
    rule = gauss_legendre_rule(mq)
    theta = np.arccos(rule.nodes)
    phi = 2.0 * math.pi * np.arange(2 * mq) / (2 * mq)
    th, ph = np.meshgrid(theta, phi, indexing="ij")
    w = np.outer(rule.weights, np.full(2 * mq, 2.0 * math.pi / (2 * mq)))
    return th, ph, w


def forward_transform(f: Callable, kmax: int, mq: int) -> np.ndarray:
    """Coefficients c_{km} = int f Y_{km} d sigma by product quadrature.

    ``f`` is called once with theta, phi meshes of equal shape. Exact for
    integrands bandlimited to degree kmax when mq >= kmax + 1.
    """
    if kmax < 0:
        raise DomainError("kmax must be >= 0")
    if mq < kmax + 1:
        raise DomainError(f"quadrature size mq={mq} must be >= kmax + 1 = {kmax + 1}")
    th, ph, w = product_grid(mq)
    vals = np.asarray(f(th, ph), dtype=float) * w
    table = harmonic_table(kmax, th.ravel(), ph.ravel())
    return table @ vals.ravel()


def synthesize(coeffs: np.ndarray, theta, phi, weights=None) -> np.ndarray:
    """Evaluate sum_{k,m} w_k c_{km} Y_{km}(theta, phi)."""
    coeffs = np.asarray(coeffs, dtype=float)
    kmax = coeffs.shape[0] - 1
    table = harmonic_table(kmax, theta, phi)
    if weights is not None:
        coeffs = coeffs * np.asarray(weights, dtype=float)[:, None]
    per_degree = np.einsum("km,kmp->kp", coeffs, table)
    return _ascending_sum(per_degree)


def _ascending_sum(rows: np.ndarray) -> np.ndarray:
    total = np.zeros(rows.shape[1:])
    comp = np.zeros_like(total)
    for row in rows:
        y = row - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return total


def addition_residual(k: int, x: SpherePoint, y: SpherePoint) -> float:
    """|sum_m Y_{km}(x) Y_{km}(y) - Z_k(<x, y>)| on S^2."""
    if x.dim != 2 or y.dim != 2:
        raise DomainError("addition residual is defined on S^2")
    (tx, ty), (px, py) = zip(x.angles(), y.angles())
    lhs = math.fsum(real_harmonic(k, m, tx, px) * real_harmonic(k, m, ty, py)
                    for m in range(-k, k + 1))
    return abs(lhs - zonal_eigenkernel(2, k, cos_angle(x, y)))
