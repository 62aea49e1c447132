"""Scalar special functions: Gegenbauer and associated Legendre polynomials,
Gauss-Legendre rules and sphere surface areas.

Everything here works in float64. Functions taking ``t`` accept scalars or
numpy arrays and return the same shape.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import ConvergenceError, DomainError

_T_SLACK = 1e-12
_MAX_DEGREE = 10**6


def _check_t(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0 + _T_SLACK):
        raise DomainError("argument t must lie in [-1, 1]")
    return np.clip(t, -1.0, 1.0)


def _check_nu(nu):
    if not nu > -0.5:
        raise DomainError(f"Gegenbauer parameter nu={nu} must exceed -1/2")


def _check_k(k):
    if k < 0 or int(k) != k:
        raise DomainError(f"degree k={k} must be a nonnegative integer")


def gegenbauer_eval(nu: float, k: int, t):
    """Gegenbauer polynomial C_k^nu(t) by forward three-term recurrence."""
    _check_nu(nu)
    _check_k(k)
    t = _check_t(t)
    c_prev = np.ones_like(t)
    if k == 0:
        return c_prev[()]
    c = 2.0 * nu * t
    for j in range(2, k + 1):
        c_prev, c = c, (2.0 * (j + nu - 1.0) * t * c - (j + 2.0 * nu - 2.0) * c_prev) / j
    return c[()]


def gegenbauer_at_one(nu: float, k: int) -> float:
    """C_k^nu(1) = binomial(k + 2 nu - 1, k)."""
    _check_nu(nu)
    _check_k(k)
    if k > _MAX_DEGREE:
        raise OverflowError(f"degree k={k} beyond supported range {_MAX_DEGREE}")
    if k == 0:
        return 1.0
    if nu > 0:
        log_val = math.lgamma(k + 2.0 * nu) - math.lgamma(k + 1.0) - math.lgamma(2.0 * nu)
        if log_val > 709.0:
            raise OverflowError(f"C_{k}^{nu}(1) overflows float64")
        return math.exp(log_val)
    # 2nu - 1 in (-2, -1]: the gamma route hits poles, the product is short-lived
    val = 1.0
    for i in range(1, k + 1):
        val *= (2.0 * nu - 1.0 + i) / i
        if val == 0.0:
            break
    return val


def normalized_gegenbauer_table(nu: float, kmax: int, t) -> np.ndarray:
    """Rows R_k(t) = C_k^nu(t) / C_k^nu(1) for k = 0..kmax.

    Uses the recurrence for the normalized polynomials,
    (k + 2nu - 1) R_k = 2 (k + nu - 1) t R_{k-1} - (k - 1) R_{k-2},
    which stays O(1) on [-1, 1]. Requires nu > 0.
    """
    if not nu > 0:
        raise DomainError("normalized table needs nu > 0 (sphere dimension N >= 2)")
    _check_k(kmax)
    t = np.atleast_1d(_check_t(t))
    out = np.empty((kmax + 1,) + t.shape)
    out[0] = 1.0
    if kmax >= 1:
        out[1] = t
    for k in range(2, kmax + 1):
        out[k] = (2.0 * (k + nu - 1.0) * t * out[k - 1] - (k - 1.0) * out[k - 2]) / (k + 2.0 * nu - 1.0)
    return out


def assoc_legendre(l: int, m: int, t, sin_t=None):
    """Associated Legendre function P_l^m(t), no Condon-Shortley phase.

    P_m^m(t) = (2m-1)!! (1-t^2)^(m/2), then upward recurrence in l.
    ``sin_t`` may carry sqrt(1 - t^2) computed upstream (sin(theta) for
    t = cos(theta)); near t = +-1 that keeps digits the subtraction loses.
    """
    _check_k(l)
    if int(m) != m or not 0 <= m <= l:
        raise DomainError(f"order m={m} must satisfy 0 <= m <= l={l}")
    t = _check_t(t)
    if sin_t is None:
        s = np.sqrt((1.0 - t) * (1.0 + t))
    else:
        s = np.abs(np.asarray(sin_t, dtype=float))
    p_mm = np.ones_like(t)
    for i in range(1, m + 1):
        p_mm = p_mm * (2 * i - 1) * s
    if l == m:
        return p_mm[()]
    p_prev, p = p_mm, (2 * m + 1) * t * p_mm
    for j in range(m + 2, l + 1):
        p_prev, p = p, ((2 * j - 1) * t * p - (j + m - 1) * p_prev) / (j - m)
    return p[()]


@dataclass(frozen=True)
class QuadratureRule:
    """Gauss-Legendre nodes and weights on [-1, 1]; arrays are read-only."""

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def order(self) -> int:
        return len(self.nodes)

    def mapped(self, a: float, b: float):
        """Nodes and weights transplanted affinely onto [a, b]."""
        half = 0.5 * (b - a)
        return a + half * (self.nodes + 1.0), half * self.weights


def _legendre_and_derivative(m, x):
    p_prev = np.ones_like(x)
    p = x.copy()
    for j in range(2, m + 1):
        p_prev, p = p, ((2 * j - 1) * x * p - (j - 1) * p_prev) / j
    dp = m * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@lru_cache(maxsize=64)
def gauss_legendre_rule(m: int) -> QuadratureRule:
    """m-point Gauss-Legendre rule via Newton iteration on P_m.

    Chebyshev-like initial guesses cos(pi (i - 1/4) / (m + 1/2)); the result
    is symmetrized so nodes are exactly antisymmetric and weights symmetric.
    """
    if int(m) != m or not 1 <= m <= 100000:
        raise DomainError(f"rule size m={m} must be an integer in [1, 100000]")
    m = int(m)
    if m == 1:
        nodes, weights = np.array([0.0]), np.array([2.0])
    else:
        i = np.arange(1, m + 1)
        x = np.cos(np.pi * (i - 0.25) / (m + 0.5))
        for _ in range(100):
            p, dp = _legendre_and_derivative(m, x)
            dx = p / dp
            x = x - dx
            if np.max(np.abs(dx)) <= 1e-14:
                break
        else:
            raise ConvergenceError(f"Newton iteration for Gauss-Legendre m={m} did not converge")
        _, dp = _legendre_and_derivative(m, x)
        w = 2.0 / ((1.0 - x * x) * dp * dp)
        x, w = x[::-1], w[::-1]
        nodes = 0.5 * (x - x[::-1])
        weights = 0.5 * (w + w[::-1])
    nodes.flags.writeable = False
    weights.flags.writeable = False
    return QuadratureRule(nodes, weights)


def sphere_surface_area(N: int) -> float:
    """Total measure of the unit sphere S^N in R^(N+1)."""
    if N < 1:
        raise DomainError(f"sphere dimension N={N} must be >= 1")
    return 2.0 * math.pi ** ((N + 1) / 2.0) / math.gamma((N + 1) / 2.0)
