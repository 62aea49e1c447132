"""Laplace-Beltrami spectrum of S^N and the zonal kernels built from it.

Degrees are the only spectral parameter: the cutoff lambda is always an
eigenvalue lambda_n, and a kernel is a weight sequence w_0..w_n applied to the
zonal eigenspace kernels Z_k(t), t = cos(gamma).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import DomainError
from .special_fn import normalized_gegenbauer_table, sphere_surface_area
from .sphere_geom import default_node_count, zonal_integral


def _check_dim(N):
    if int(N) != N or N < 2:
        raise DomainError(f"sphere dimension N={N} must be an integer >= 2")


def eigenvalue(N: int, k):
    """lambda_k = k (k + N - 1); vectorizes over k."""
    _check_dim(N)
    k = np.asarray(k, dtype=float)
    return (k * (k + N - 1.0))[()]


def multiplicity(N: int, k: int) -> int:
    """Dimension of the degree-k eigenspace, C(N+k, N) - C(N+k-2, N)."""
    _check_dim(N)
    if k < 0:
        raise DomainError("degree must be nonnegative")
    return math.comb(N + k, N) - (math.comb(N + k - 2, N) if k >= 2 else 0)


def multiplicities(N: int, kmax: int) -> np.ndarray:
    return np.array([multiplicity(N, k) for k in range(kmax + 1)], dtype=float)


def zonal_eigenkernel(N: int, k: int, t):
    """Z_k(t) = a_k / omega_N * C_k^nu(t) / C_k^nu(1), nu = (N-1)/2."""
    _check_dim(N)
    table = normalized_gegenbauer_table((N - 1) / 2.0, k, t)
    val = multiplicity(N, k) / sphere_surface_area(N) * table[k]
    return val if np.ndim(t) else float(val[0])


def zonal_series(N: int, coeffs, t):
    """Sum_k coeffs[k] * Z_k(t), ascending in k with Kahan compensation.

    The recurrence runs alongside the sum so no (kmax x len(t)) table is held.
    """
    _check_dim(N)
    coeffs = np.asarray(coeffs, dtype=float)
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(t) > 1.0 + 1e-12):
        raise DomainError("t must lie in [-1, 1]")
    t = np.clip(t, -1.0, 1.0)
    nu = (N - 1) / 2.0
    omega = sphere_surface_area(N)
    total = np.zeros_like(t)
    comp = np.zeros_like(t)
    r_prev = r = None
    for k, ck in enumerate(coeffs):
        if k == 0:
            r = np.ones_like(t)
        elif k == 1:
            r_prev, r = r, t.copy()
        else:
            r_prev, r = r, (2.0 * (k + nu - 1.0) * t * r - (k - 1.0) * r_prev) / (k + 2.0 * nu - 1.0)
        if ck == 0.0:
            continue
        term = (ck * multiplicity(N, k) / omega) * r
        y = term - comp
        s = total + y
        comp = (s - total) - y
        total = s
    return float(total[0]) if scalar else total


@dataclass(frozen=True, eq=False)
class WeightSequence:
    """Per-degree weights w_0..w_n on S^N.

    Built by :func:`riesz_weights` for Riesz/Sobolev factors; ``alpha`` and
    ``l`` are ``None`` for sequences built from raw values.
    """

    N: int
    n: int
    w: np.ndarray
    alpha: Optional[float] = None
    l: Optional[float] = None

    def __post_init__(self):
        w = np.array(self.w, dtype=float)
        if w.shape != (self.n + 1,):
            raise DomainError(f"expected {self.n + 1} weights, got shape {w.shape}")
        w.flags.writeable = False
        object.__setattr__(self, "w", w)

    @classmethod
    def from_values(cls, N: int, values) -> "WeightSequence":
        values = np.asarray(values, dtype=float)
        return cls(N, len(values) - 1, values)


def riesz_weights(N: int, n: int, alpha: float, l: float = 0.0) -> WeightSequence:
    """w_k = (1 - lambda_k/lambda_n)_+^alpha * (1 + lambda_k)^(l/2), with w_n = 0."""
    _check_dim(N)
    if int(n) != n or n < 1:
        raise DomainError(f"cutoff degree n={n} must be a positive integer")
    if alpha < 0:
        raise DomainError(f"Riesz order alpha={alpha} must be >= 0")
    lam = eigenvalue(N, np.arange(n + 1))
    base = np.clip(1.0 - lam / lam[-1], 0.0, None)
    w = base**alpha * (1.0 + lam) ** (l / 2.0)
    w[-1] = 0.0
    return WeightSequence(N, int(n), w, float(alpha), float(l))


@dataclass(frozen=True)
class KernelProfile:
    """Zonal kernel t -> sum_k w_k Z_k(t)."""

    weights: WeightSequence

    @property
    def N(self) -> int:
        return self.weights.N

    def __call__(self, t):
        return kernel_eval(self, t)


def riesz_profile(N: int, n: int, alpha: float, l: float = 0.0) -> KernelProfile:
    return KernelProfile(riesz_weights(N, n, alpha, l))


def kernel_eval(profile: KernelProfile, t):
    return zonal_series(profile.N, profile.weights.w, t)


def kernel_norm_outside(profile: KernelProfile, r0: float, m: Optional[int] = None) -> float:
    """L2 norm of the kernel over the cap complement {gamma >= r0}."""
    if not 0.0 < r0 < math.pi:
        raise DomainError(f"r0={r0} must lie in (0, pi)")
    return _band_norm(profile, r0, m)


def _band_norm(profile, lo, m):
    if m is None:
        m = default_node_count(profile.weights.n)
    sq = zonal_integral(lambda g: kernel_eval(profile, np.cos(g)) ** 2, lo, math.pi, profile.N, m)
    return math.sqrt(max(sq, 0.0))


def kernel_norm_full(profile: KernelProfile) -> float:
    """Parseval: sqrt(sum_k w_k^2 a_k / omega_N)."""
    w = profile.weights.w
    a = multiplicities(profile.N, len(w) - 1)
    return math.sqrt(math.fsum(w * w * a) / sphere_surface_area(profile.N))


def kernel_norm_band(profile: KernelProfile, lo: float, m: Optional[int] = None) -> float:
    """Quadrature norm over {gamma >= lo}, lo may be 0 (whole sphere)."""
    return _band_norm(profile, lo, m)


def regime1_interval(n: int):
    """Angles admitted by the first envelope regime, read as a closed interval."""
    d = math.pi / (2.0 * (n + 1))
    return d, math.pi - d


def kernel_envelope(N: int, n: int, alpha: float, gamma: float, regime: int,
                     gamma0: Optional[float] = None) -> float:
    """Pointwise Riesz-kernel envelopes with every O(1) constant set to 1.

    regime 1: three-term bound away from the pole and the antipode;
    regime 2: n^N everywhere; regime 3: n^(N-1-alpha) for gamma >= gamma0 > 0.
    """
    if not 0.0 <= gamma <= math.pi:
        raise DomainError(f"gamma={gamma} must lie in [0, pi]")
    if regime == 2:
        return float(n) ** N
    if regime == 3:
        if gamma0 is None or not gamma0 > 0 or gamma < gamma0:
            raise DomainError("regime 3 needs gamma >= gamma0 > 0")
        return float(n) ** (N - 1 - alpha)
    if regime == 1:
        lo, hi = regime1_interval(n)
        if not lo <= gamma <= hi:
            raise DomainError(f"gamma={gamma} outside regime-1 window [{lo}, {hi}]")
        s, h = math.sin(gamma), math.sin(gamma / 2.0) ** (1.0 + alpha)
        return (n ** ((N - 1) / 2.0) / (s ** ((N - 1) / 2.0) * h)
                + n ** ((N - 3) / 2.0) / (s ** ((N + 1) / 2.0) * h)
                + 1.0 / (n * (s / 2.0) ** (1 + N)))
    raise DomainError(f"unknown regime {regime}")


def abel_weighted_kernel(N: int, n: int, alpha: float, l: float, t):
    """Sobolev-weighted Riesz kernel through summation by parts.

    With u_k = (1 + lambda_k)^(l/2) and partial sums S_k of the plain Riesz
    kernel (fixed lambda_n), returns
    sum_{k<n} (u_k - u_{k+1}) S_k + u_n S_n.
    """
    plain = riesz_weights(N, n, alpha, 0.0).w
    u = (1.0 + eigenvalue(N, np.arange(n + 1))) ** (l / 2.0)
    scalar = np.ndim(t) == 0
    t = np.atleast_1d(np.asarray(t, dtype=float))
    table = normalized_gegenbauer_table((N - 1) / 2.0, n, t)
    z = (multiplicities(N, n) / sphere_surface_area(N))[:, None] * table
    partial = np.cumsum(plain[:, None] * z, axis=0)
    out = (u[:-1] - u[1:]) @ partial[:-1] + u[-1] * partial[-1]
    return float(out[0]) if scalar else out


def increment_ratio(N: int, l: float, k):
    """|(1+lambda_k)^(l/2) - (1+lambda_{k+1})^(l/2)| / (1+k)^(l-1).

    The difference is formed as u_k * expm1(...) to avoid cancellation.
    """
    k = np.asarray(k, dtype=float)
    base = 1.0 + eigenvalue(N, k)
    step = 2.0 * k + N  # lambda_{k+1} - lambda_k
    diff = base ** (l / 2.0) * np.expm1((l / 2.0) * np.log1p(step / base))
    return (np.abs(diff) / (1.0 + k) ** (l - 1.0))[()]
