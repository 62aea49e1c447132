"""Distributions on the sphere, represented by their harmonic coefficients.

A :class:`ZonalDistribution` is rotation invariant about a pole: its degree-k
component at x is d_k Z_k(<x, pole>), equivalently <f, Y> = d_k Y(pole) for
every degree-k harmonic Y. A :class:`GeneralDistribution` is a finite
coefficient table on S^2 (a bandlimited test function).

Support is tracked symbolically from the constructors; nothing here tries to
decide numerically where a distribution vanishes.
"""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable, Optional, Union

import numpy as np
from scipy import integrate

from .errors import DivergenceError, DomainError
from .harmonics_s2 import forward_transform, harmonic_table, points_to_angles
from .special_fn import gauss_legendre_rule, normalized_gegenbauer_table, sphere_surface_area
from .sphere_geom import Cap, Region, SpherePoint, cos_angle, geodesic_distance
from .spectrum import eigenvalue, multiplicities


# --- support descriptors -------------------------------------------------

@dataclass(frozen=True)
class PointSupport:
    point: SpherePoint


@dataclass(frozen=True)
class BandSupport:
    """Support inside {gamma_lo <= gamma(x, pole) <= gamma_hi}."""

    pole: SpherePoint
    gamma_lo: float
    gamma_hi: float


Support = Union[PointSupport, BandSupport]


@dataclass(frozen=True, eq=False)
class ZonalDistribution:
    """Zonal distribution given by a coefficient rule d(k).

    ``coeff`` maps an integer array of degrees to coefficients. ``tail``, when
    given, is a smooth extension of d(k) to real k, valid above ``tail_start``;
    the Sobolev tail estimate integrates it. ``growth`` is the exponent g with
    d_k = O(k^g) when known. ``supports`` lists closed sets covering the
    support (``None``: unknown, ``()``: vanishes identically). ``available``
    bounds the degrees that can be produced at all, and ``bandlimit`` marks
    coefficients as exactly zero beyond it.
    """

    N: int
    pole: SpherePoint
    coeff: Callable[[np.ndarray], np.ndarray]
    label: str
    growth: Optional[float] = None
    supports: Optional[tuple] = None
    tail: Optional[Callable[[float], float]] = None
    tail_start: int = 0
    available: Optional[int] = None
    bandlimit: Optional[int] = None

    def __post_init__(self):
        if self.pole.dim != self.N:
            raise DomainError(f"pole lives on S^{self.pole.dim}, distribution on S^{self.N}")

    def coefficients(self, kmax: int) -> np.ndarray:
        """d_0..d_kmax as a fresh array."""
        if self.available is not None and kmax > self.available:
            raise CoefficientError(
                f"{self.label}: coefficients known only up to degree {self.available}, asked {kmax}")
        k = np.arange(kmax + 1)
        d = np.broadcast_to(np.asarray(self.coeff(k), dtype=float), k.shape).copy()
        if self.bandlimit is not None:
            d[k > self.bandlimit] = 0.0
        return d

    def member_of(self, s: float, tail_tol: float = 1e-8) -> bool:
        """Whether the H_2^s norm series passes the tail test."""
        try:
            sobolev_norm(self, s, tail_tol)
        except DivergenceError:
            return False
        return True

    def __add__(self, other):
        return linear_combination(1.0, self, 1.0, other)

    def __sub__(self, other):
        return linear_combination(1.0, self, -1.0, other)

    def __rmul__(self, a):
        return linear_combination(float(a), self, 0.0, None)


class CoefficientError(LookupError):
    """Coefficients were requested beyond the degrees a distribution provides."""


def _maybe_min(a, b):
    if a is None or b is None:
        return None
    return min(a, b)


def _maybe_max(a, b):
    if a is None or b is None:
        return None
    return max(a, b)


def linear_combination(a: float, f: ZonalDistribution, b: float,
                       g: Optional[ZonalDistribution]) -> ZonalDistribution:
    """a f + b g at coefficient level; both must share the sphere and pole."""
    if g is None:
        g, b = zero(f.N, f.pole), 0.0
    if f.N != g.N or f.pole != g.pole:
        raise DomainError("zonal combinations need a common sphere and pole")

    def coeff(k):
        return a * np.asarray(f.coeff(k), dtype=float) + b * np.asarray(g.coeff(k), dtype=float)

    tail = None
    if f.tail is not None and g.tail is not None:
        ft, gt = f.tail, g.tail

        def tail(k):
            return a * ft(k) + b * gt(k)

    supports = None
    if f.supports is not None and g.supports is not None:
        supports = (f.supports if a != 0 else ()) + (g.supports if b != 0 else ())
    growth = _combine_growth(f, g)
    return ZonalDistribution(
        f.N, f.pole, coeff, f"{a:g}*({f.label}) + {b:g}*({g.label})",
        growth=growth, supports=supports, tail=tail,
        tail_start=max(f.tail_start, g.tail_start),
        available=_maybe_min(f.available, g.available),
        bandlimit=_maybe_max(f.bandlimit, g.bandlimit))


def _combine_growth(f, g):
    gs = [-math.inf if h.bandlimit is not None else h.growth for h in (f, g)]
    if any(x is None for x in gs):
        return None
    return max(gs)


# --- constructors --------------------------------------------------------

def dirac(pole: SpherePoint) -> ZonalDistribution:
    """Point evaluation at ``pole``: d_k = 1 for every k."""
    return ZonalDistribution(pole.dim, pole, lambda k: np.ones(np.shape(k)), "dirac",
                             growth=0.0, supports=(PointSupport(pole),), tail=lambda k: 1.0)


def zero(N: int, pole: Optional[SpherePoint] = None) -> ZonalDistribution:
    pole = pole or SpherePoint.north(N)
    return ZonalDistribution(N, pole, lambda k: np.zeros(np.shape(k)), "zero",
                             growth=-math.inf, supports=(), tail=lambda k: 0.0, bandlimit=0)


def laplacian_power(f: ZonalDistribution, m: int) -> ZonalDistribution:
    """(I - Laplacian)^m f, coefficientwise d_k -> (1 + lambda_k)^m d_k."""
    if int(m) != m or m < 0:
        raise DomainError(f"power m={m} must be a nonnegative integer")
    if m == 0:
        return f
    N = f.N

    def coeff(k):
        return (1.0 + eigenvalue(N, k)) ** m * np.asarray(f.coeff(k), dtype=float)

    tail = None
    if f.tail is not None:
        ft = f.tail

        def tail(k):
            return (1.0 + k * (k + N - 1.0)) ** m * ft(k)

    growth = None if f.growth is None else f.growth + 2 * m
    return ZonalDistribution(N, f.pole, coeff, f"(I-Lap)^{m} {f.label}", growth=growth,
                             supports=f.supports, tail=tail, tail_start=f.tail_start,
                             available=f.available, bandlimit=f.bandlimit)


def zonal_function(N: int, pole: SpherePoint, values, label: str = "zonal function") -> ZonalDistribution:
    """Bandlimited zonal function from explicit coefficients d_0..d_K."""
    values = np.array(values, dtype=float)
    values.flags.writeable = False
    K = len(values) - 1

    def coeff(k):
        k = np.asarray(k)
        out = np.zeros(k.shape)
        inside = (k >= 0) & (k <= K)
        out[inside] = values[k[inside].astype(int)]
        return out

    return ZonalDistribution(N, pole, coeff, label, growth=-math.inf,
                             tail=lambda k: 0.0, tail_start=K + 1, bandlimit=K)


def funk_hecke_density(rho: Callable, pole: SpherePoint, N: int, kmax: int,
                       support: Optional[tuple] = None, nodes: Optional[int] = None,
                       max_nodes: int = 1 << 15, tol: float = 1e-12) -> ZonalDistribution:
    """Coefficients of the zonal density rho(gamma) by Funk-Hecke reduction.

    d_k = omega_{N-1} int_{-1}^{1} rho(arccos t) C_k(t)/C_k(1) (1-t^2)^((N-2)/2) dt.
    The node count doubles until two successive tables agree to ``tol``
    (relative to the largest coefficient) or ``max_nodes`` is exceeded.
    ``support`` = (gamma_lo, gamma_hi) declares where rho may be nonzero;
    the integral is then restricted to that band.
    """
    if kmax < 0:
        raise DomainError("kmax must be >= 0")
    lo, hi = support if support is not None else (0.0, math.pi)
    nu = (N - 1) / 2.0
    scale = sphere_surface_area(N - 1)

    def table(m):
        rule = gauss_legendre_rule(m)
        if N % 2 == 0:
            t, w = rule.mapped(math.cos(hi), math.cos(lo))
            g = np.arccos(np.clip(t, -1.0, 1.0))
            wt = w * (1.0 - t * t) ** ((N - 2) // 2)
        else:
            g, w = rule.mapped(lo, hi)
            t = np.cos(g)
            wt = w * np.sin(g) ** (N - 1)
        vals = np.asarray(rho(g), dtype=float) * wt
        return scale * (normalized_gegenbauer_table(nu, kmax, t) @ vals)

    m = nodes or max(2 * kmax + 64, 64)
    d = table(m)
    if nodes is None:
        while True:
            m2 = 2 * m
            if m2 > max_nodes:
                raise DomainError(f"Funk-Hecke quadrature did not settle within {max_nodes} nodes")
            d2 = table(m2)
            settled = np.max(np.abs(d2 - d)) <= tol * max(1.0, np.max(np.abs(d2)))
            d, m = d2, m2
            if settled:
                break
    d.flags.writeable = False
    supports = (BandSupport(pole, lo, hi),) if support is not None else None

    def coeff(k):
        return d[np.asarray(k, dtype=int)]

    return ZonalDistribution(N, pole, coeff, "funk-hecke density", growth=None,
                             supports=supports, available=kmax)


# --- general (bandlimited) distributions on S^2 ----------------------------

@dataclass(frozen=True, eq=False)
class GeneralDistribution:
    """Finite table c[k, m + kmax] on S^2; zero beyond kmax."""

    coeffs: np.ndarray
    label: str = "bandlimited"
    supports: Optional[tuple] = None

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=float)
        if c.ndim != 2 or c.shape[1] != 2 * c.shape[0] - 1:
            raise DomainError(f"coefficient table shape {c.shape} is not (K+1, 2K+1)")
        c.flags.writeable = False
        object.__setattr__(self, "coeffs", c)

    N = 2

    @property
    def kmax(self) -> int:
        return self.coeffs.shape[0] - 1

    @classmethod
    def from_function(cls, f: Callable, kmax: int, mq: Optional[int] = None, label: str = "bandlimited"):
        return cls(forward_transform(f, kmax, mq or kmax + 1), label)

    @classmethod
    def from_dict(cls, entries: dict, kmax: Optional[int] = None, label: str = "bandlimited"):
        K = kmax if kmax is not None else max(k for k, _ in entries)
        c = np.zeros((K + 1, 2 * K + 1))
        for (k, m), v in entries.items():
            c[k, m + K] = v
        return cls(c, label)

    def padded(self, kmax: int) -> np.ndarray:
        """Coefficient table zero-padded (or truncated) to degree kmax."""
        out = np.zeros((kmax + 1, 2 * kmax + 1))
        K = min(kmax, self.kmax)
        out[:K + 1, kmax - K:kmax + K + 1] = self.coeffs[:K + 1, self.kmax - K:self.kmax + K + 1]
        return out

    def values(self, points) -> np.ndarray:
        """Pointwise values sum_{k,m} c_{km} Y_{km}(x)."""
        from .harmonics_s2 import synthesize
        theta, phi = points_to_angles(points)
        return synthesize(self.coeffs, theta, phi)

    def __add__(self, other: "GeneralDistribution"):
        K = max(self.kmax, other.kmax)
        return GeneralDistribution(self.padded(K) + other.padded(K),
                                   f"({self.label}) + ({other.label})")

    def __rmul__(self, a):
        return GeneralDistribution(float(a) * self.coeffs, f"{a}*({self.label})")


def zonal_table_on_s2(f: ZonalDistribution, kmax: int) -> np.ndarray:
    """Harmonic coefficients c_{km} = d_k Y_{km}(pole) of a zonal f on S^2."""
    if f.N != 2:
        raise DomainError("explicit coefficient tables exist only on S^2")
    theta, phi = points_to_angles([f.pole])
    y = harmonic_table(kmax, theta, phi)[..., 0]
    return f.coefficients(kmax)[:, None] * y


# --- Sobolev norms ----------------------------------------------------------

def _degree_energy(f, kmax):
    """sum_j <f, Y_j^k>^2 for k = 0..kmax."""
    if isinstance(f, GeneralDistribution):
        c = f.padded(kmax)
        return np.sum(c * c, axis=1)
    d = f.coefficients(kmax)
    return d * d * multiplicities(f.N, kmax) / sphere_surface_area(f.N)


def _zonal_term(f, s):
    """Smooth extension k -> (1+lambda_k)^s d(k)^2 a(k)/omega_N for real k."""
    omega = sphere_surface_area(f.N)
    N = f.N

    def term(k):
        # a_k as a polynomial in k: (2k + N - 1) (k + N - 2)! / (k! (N - 1)!)
        a = (2 * k + N - 1) * math.exp(math.lgamma(k + N - 1) - math.lgamma(k + 1) - math.lgamma(N))
        d = f.tail(k)
        return (1.0 + k * (k + N - 1)) ** s * d * d * a / omega

    return term


def _tail_estimate(term, M):
    """sum_{k > M} term(k) by Euler-Maclaurin around the integral from M.

    The integral runs over x = M/k in (0, 1]; slowly decaying power tails
    become mild endpoint singularities there, which quad handles well.
    """
    def pulled_back(x):
        return term(M / x) * M / (x * x) if x > 0 else 0.0

    # quad may warn that 1e-10 is out of reach on slow tails; its best effort
    # is kept, and the M-vs-2M comparison in the caller judges the result
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", integrate.IntegrationWarning)
        integral, _ = integrate.quad(pulled_back, 0.0, 1.0, limit=200, epsabs=0.0, epsrel=1e-10)
    h = 1e-3 * M
    d1 = (term(M + h) - term(M - h)) / (2 * h)
    return integral - 0.5 * term(M) - d1 / 12.0


def sobolev_norm(f, s: float, tail_tol: float = 1e-8, max_degree: int = 1 << 20) -> float:
    """H_2^s norm sqrt(sum_k (1 + lambda_k)^s sum_j <f, Y_j^k>^2).

    Bandlimited inputs are summed exactly. Otherwise the series must pass a
    tail test: when the coefficient growth is known the term exponent
    2 g + (N-1) + 2 s has to be below -1, and partial sums (with an
    Euler-Maclaurin tail when the coefficients extend smoothly) at degrees M
    and 2M must agree to ``tail_tol``. Failure raises DivergenceError.
    """
    N = f.N
    bandlimit = f.kmax if isinstance(f, GeneralDistribution) else f.bandlimit
    if bandlimit is not None:
        e = _degree_energy(f, bandlimit)
        return math.sqrt(math.fsum((1.0 + eigenvalue(N, np.arange(bandlimit + 1))) ** s * e))
    if f.growth is not None:
        exponent = 2.0 * f.growth + (N - 1) + 2.0 * s
        if exponent >= -1.0:
            raise DivergenceError(
                f"{f.label} is not in H^{s}: term exponent {exponent:g} >= -1")
    if f.available is not None:
        e = _degree_energy(f, f.available)
        return math.sqrt(math.fsum((1.0 + eigenvalue(N, np.arange(f.available + 1))) ** s * e))

    term = _zonal_term(f, s) if f.tail is not None else None
    M = max(256, 2 * f.tail_start)
    prev = None
    while M <= max_degree:
        e = _degree_energy(f, M)
        partial = math.fsum((1.0 + eigenvalue(N, np.arange(M + 1))) ** s * e)
        total = partial + (_tail_estimate(term, M) if term else 0.0)
        if prev is not None and abs(total - prev) <= tail_tol * abs(total):
            return math.sqrt(total)
        prev = total
        M *= 2
    raise DivergenceError(f"{f.label}: H^{s} partial sums did not settle by degree {max_degree}")


def dual_norm_check(f: ZonalDistribution, l: float, kmax: int):
    """Compare the Parseval norm in H^-l with the dual-pairing ratio.

    The matched test element u* has zonal coefficients (1+lambda_k)^-l d_k
    for k <= kmax; returns (parseval_value, |<f,u*>| / ||u*||_{H^l}).
    """
    if l <= 0:
        raise DomainError("dual norm needs l > 0")
    parseval = sobolev_norm(f, -l)
    d = f.coefficients(kmax)
    lam1 = 1.0 + eigenvalue(f.N, np.arange(kmax + 1))
    a = multiplicities(f.N, kmax) / sphere_surface_area(f.N)
    u = lam1 ** (-l) * d
    pairing = math.fsum(d * u * a)
    u_norm = math.sqrt(math.fsum(lam1**l * u * u * a))
    if u_norm == 0.0:
        return parseval, 0.0
    return parseval, abs(pairing) / u_norm


def pairing(f, g, kmax: Optional[int] = None) -> float:
    """<f, g> = sum_k sum_j <f, Y_j^k> <g, Y_j^k> up to degree kmax.

    ``g`` must be bandlimited; the sum stops at min(kmax, deg g), so terms
    that are identically zero are never added.
    """
    deg = g.kmax if isinstance(g, GeneralDistribution) else g.bandlimit
    if deg is None:
        raise DomainError("the test element of a pairing must be bandlimited")
    K = deg if kmax is None else min(kmax, deg)
    if K < 0:
        return 0.0
    if isinstance(f, GeneralDistribution) or isinstance(g, GeneralDistribution):
        cf = f.padded(K) if isinstance(f, GeneralDistribution) else zonal_table_on_s2(f, K)
        cg = g.padded(K) if isinstance(g, GeneralDistribution) else zonal_table_on_s2(g, K)
        per_degree = np.sum(cf * cg, axis=1)
    else:
        if f.N != g.N:
            raise DomainError("pairing across different spheres")
        from .spectrum import zonal_eigenkernel
        t = cos_angle(f.pole, g.pole)
        z = np.array([zonal_eigenkernel(f.N, k, t) for k in range(K + 1)])
        per_degree = f.coefficients(K) * g.coefficients(K) * z
    total = 0.0
    for v in per_degree:
        total += float(v)
    return total


# --- support certification ------------------------------------------------

def _angle_interval(region: Region):
    return region.gamma_interval()


def restrict_to_vanish(f, V: Region) -> bool:
    """True only when the constructors certify that f vanishes on V.

    V is treated as open: a cap {gamma < r} or a complement {gamma > r}.
    Unknown support always yields False.
    """
    supports = getattr(f, "supports", None)
    if supports is None:
        return False
    return all(_support_misses(s, V) for s in supports)


def _support_misses(s, V: Region) -> bool:
    if isinstance(s, PointSupport):
        g = geodesic_distance(V.pole, s.point)
        if isinstance(V, Cap):
            return g >= V.radius
        return g <= V.radius
    if isinstance(s, BandSupport):
        if s.pole != V.pole:
            return False
        vlo, vhi = _angle_interval(V)
        # open V against closed support band
        if isinstance(V, Cap):
            return s.gamma_lo >= vhi
        return s.gamma_hi <= vlo
    return False
