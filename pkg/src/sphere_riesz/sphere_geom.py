"""Points, caps, band integrals and evaluation grids on the unit sphere S^N."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import DomainError
from .special_fn import gauss_legendre_rule, sphere_surface_area


@dataclass(frozen=True, eq=False)
class SpherePoint:
    """Unit vector in R^(N+1); coordinates are normalized on construction."""

    coords: np.ndarray

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).ravel()
        if c.size < 2:
            raise DomainError("a sphere point needs at least 2 coordinates")
        norm = np.linalg.norm(c)
        if not np.isfinite(norm) or norm == 0.0:
            raise DomainError("cannot normalize a zero or non-finite vector")
        c = c / norm
        c.flags.writeable = False
        object.__setattr__(self, "coords", c)

    @property
    def dim(self) -> int:
        return self.coords.size - 1

    def __eq__(self, other):
        return isinstance(other, SpherePoint) and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash(self.coords.tobytes())

    def __repr__(self):
        return f"SpherePoint({np.array2string(self.coords, precision=6)})"

    @classmethod
    def north(cls, N: int = 2) -> "SpherePoint":
        c = np.zeros(N + 1)
        c[-1] = 1.0
        return cls(c)

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "SpherePoint":
        """Point of S^2 from colatitude theta and longitude phi."""
        s = math.sin(theta)
        return cls(np.array([s * math.cos(phi), s * math.sin(phi), math.cos(theta)]))

    def angles(self):
        """(colatitude, longitude) of a point on S^2, longitude in [0, 2 pi)."""
        if self.dim != 2:
            raise DomainError("angles are only defined on S^2")
        x, y, z = self.coords
        theta = math.atan2(math.hypot(x, y), z)
        phi = math.atan2(y, x) % (2.0 * math.pi)
        return theta, phi


def cos_angle(x: SpherePoint, y: SpherePoint) -> float:
    """Inner product <x, y> clamped to [-1, 1]."""
    if x.dim != y.dim:
        raise DomainError(f"dimension mismatch: S^{x.dim} vs S^{y.dim}")
    return min(1.0, max(-1.0, float(np.dot(x.coords, y.coords))))


def geodesic_distance(x: SpherePoint, y: SpherePoint) -> float:
    """Geodesic angle gamma(x, y) in [0, pi].

    atan2 of the sine and cosine parts keeps full accuracy near 0 and pi,
    where acos of the inner product would lose half the digits.
    """
    t = cos_angle(x, y)
    s = float(np.linalg.norm(x.coords - t * y.coords))
    return math.atan2(s, t)


def tangent_frame(pole: SpherePoint) -> np.ndarray:
    """Orthonormal basis of R^(N+1) whose last row is the pole."""
    p = pole.coords
    # Householder reflection mapping e_last to p
    e = np.zeros_like(p)
    e[-1] = 1.0
    v = p - e
    vv = float(np.dot(v, v))
    basis = np.eye(p.size)
    if vv > 1e-30:
        basis = basis - 2.0 * np.outer(basis @ v, v) / vv
    return basis


@dataclass(frozen=True)
class Cap:
    """Closed geodesic ball {x : gamma(x, pole) <= radius}."""

    pole: SpherePoint
    radius: float

    def __post_init__(self):
        if not 0.0 < self.radius < math.pi:
            raise DomainError(f"cap radius {self.radius} must lie in (0, pi)")

    @property
    def dim(self) -> int:
        return self.pole.dim

    def gamma_interval(self):
        return 0.0, self.radius

    def contains(self, x: SpherePoint, tol: float = 0.0) -> bool:
        return geodesic_distance(self.pole, x) <= self.radius + tol

    def complement(self) -> "CapComplement":
        return CapComplement(self.pole, self.radius)

    def shrink(self, margin: float) -> "Cap":
        return Cap(self.pole, self.radius - margin)


@dataclass(frozen=True)
class CapComplement:
    """Closed region {x : gamma(x, pole) >= radius}, the outside of a cap."""

    pole: SpherePoint
    radius: float

    def __post_init__(self):
        if not 0.0 < self.radius < math.pi:
            raise DomainError(f"cap radius {self.radius} must lie in (0, pi)")

    @property
    def dim(self) -> int:
        return self.pole.dim

    def gamma_interval(self):
        return self.radius, math.pi

    def contains(self, x: SpherePoint, tol: float = 0.0) -> bool:
        return geodesic_distance(self.pole, x) >= self.radius - tol

    def complement(self) -> Cap:
        return Cap(self.pole, self.radius)

    def shrink(self, margin: float) -> "CapComplement":
        return CapComplement(self.pole, self.radius + margin)


Region = Union[Cap, CapComplement]


def inner_margin(inner: Region, outer: Region) -> float:
    """Angular gap by which ``inner`` sits inside ``outer``; negative if not nested.

    Only regions sharing a pole and of the same kind are compared.
    """
    if type(inner) is not type(outer) or inner.pole != outer.pole:
        return -math.inf
    if isinstance(inner, Cap):
        return outer.radius - inner.radius
    return inner.radius - outer.radius


def zonal_integral(f: Callable, gamma_lo: float, gamma_hi: float, N: int, m: int) -> float:
    """Integral of a zonal function f(gamma) over the band gamma_lo <= gamma <= gamma_hi.

    Equals omega_{N-1} * int f(gamma) sin^(N-1)(gamma) d gamma. For even N the
    substitution t = cos(gamma) turns the weight into the polynomial
    (1 - t^2)^((N-2)/2), so polynomial integrands in t are integrated exactly.
    For odd N that weight has a square-root endpoint singularity, so the rule
    is applied in gamma directly where sin^(N-1) is smooth.
    """
    if not 0.0 <= gamma_lo < gamma_hi <= math.pi:
        raise DomainError(f"invalid band [{gamma_lo}, {gamma_hi}]")
    if N < 2:
        raise DomainError("zonal integrals need N >= 2")
    if m < 2:
        raise DomainError("node count m must be >= 2")
    rule = gauss_legendre_rule(int(m))
    scale = sphere_surface_area(N - 1)
    if N % 2 == 0:
        t, w = rule.mapped(math.cos(gamma_hi), math.cos(gamma_lo))
        gamma = np.arccos(np.clip(t, -1.0, 1.0))
        vals = np.asarray(f(gamma), dtype=float)
        if N > 2:
            vals = vals * (1.0 - t * t) ** ((N - 2) // 2)
    else:
        gamma, w = rule.mapped(gamma_lo, gamma_hi)
        vals = np.asarray(f(gamma), dtype=float) * np.sin(gamma) ** (N - 1)
    return scale * math.fsum(w * vals)


def default_node_count(max_degree: int) -> int:
    """Band-integration node count 4 * (max kernel degree) + 64."""
    return 4 * int(max_degree) + 64


def _grid_angles(region: Region, resolution: int):
    lo, hi = region.gamma_interval()
    return [lo + (hi - lo) * (i / resolution) for i in range(resolution + 1)]


def cap_grid(region: Region, resolution: int, zonal: bool | None = None) -> list[SpherePoint]:
    """Deterministic evaluation grid on a cap or cap complement.

    On S^2 this is a (gamma, phi) product grid in the frame of the region's
    pole with resolution+1 angles and 2*resolution longitudes; doubling the
    resolution yields a superset. With ``zonal=True`` (forced for N > 2) only
    one representative per angle is returned, on a fixed meridian.
    """
    if int(resolution) != resolution or resolution < 1:
        raise DomainError(f"resolution {resolution} must be a positive integer")
    N = region.dim
    if zonal is None:
        zonal = N > 2
    if not zonal and N != 2:
        raise DomainError(f"full grids exist only on S^2, got N={N}; request a zonal grid")
    frame = tangent_frame(region.pole)
    e1, pole = frame[0], frame[-1]
    e2 = frame[1]
    points = []
    n_phi = 2 * resolution
    for g in _grid_angles(region, resolution):
        sg, cg = math.sin(g), math.cos(g)
        if zonal or g == 0.0 or g == math.pi:
            points.append(SpherePoint(sg * e1 + cg * pole))
            continue
        for j in range(n_phi):
            phi = 2.0 * math.pi * (j / n_phi)
            points.append(SpherePoint(sg * (math.cos(phi) * e1 + math.sin(phi) * e2) + cg * pole))
    return points
