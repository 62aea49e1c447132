"""Riesz means of distributions and the decay experiments built on them."""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from .distributions import (
    GeneralDistribution,
    ZonalDistribution,
    pairing,
    restrict_to_vanish,
    sobolev_norm,
)
from .errors import DivergenceError, DomainError, HypothesisError
from .harmonics_s2 import points_to_angles, synthesize
from .sphere_geom import CapComplement, Region, SpherePoint, cap_grid, inner_margin
from .spectrum import riesz_weights, zonal_series

Distribution = Union[ZonalDistribution, GeneralDistribution]

COMPACT_MARGIN = 0.1
ENVELOPE_WINDOW = 3
EXPONENT_TOL = 0.2
OSCILLATORY_EXPONENT_TOL = 0.25
RATIO_TREND_TOL = 0.1


def _as_points(x) -> list[SpherePoint]:
    if isinstance(x, SpherePoint):
        return [x]
    return list(x)


def riesz_mean_values(f: Distribution, n: int, alpha: float, points) -> np.ndarray:
    """E_n^alpha f at each point, summed in ascending degree."""
    points = _as_points(points)
    if not points:
        return np.zeros(0)
    if isinstance(f, GeneralDistribution):
        w = riesz_weights(2, n, alpha).w
        K = min(n, f.kmax)
        theta, phi = points_to_angles(points)
        return synthesize(f.padded(K), theta, phi, w[:K + 1])
    w = riesz_weights(f.N, n, alpha).w
    d = f.coefficients(n)
    poles = f.pole.coords
    t = np.clip(np.array([p.coords for p in points]) @ poles, -1.0, 1.0)
    # evaluate once per distinct angle; grids repeat angles along parallels
    uniq, inverse = np.unique(t, return_inverse=True)
    return zonal_series(f.N, w * d, uniq)[inverse]


def riesz_mean_eval(f: Distribution, n: int, alpha: float, x: SpherePoint) -> float:
    """E_n^alpha f(x) = sum_k (1 - lambda_k/lambda_n)_+^alpha sum_j Y_j^k(x) <f, Y_j^k>."""
    return float(riesz_mean_values(f, n, alpha, [x])[0])


def sup_on_grid(f: Distribution, n: int, alpha: float, grid) -> float:
    grid = _as_points(grid)
    if not grid:
        raise DomainError("sup over an empty grid")
    return float(np.max(np.abs(riesz_mean_values(f, n, alpha, grid))))


@dataclass(frozen=True)
class DecayFit:
    """Least-squares line through (log n, log value)."""

    points: tuple
    slope: float
    intercept: float
    r_squared: float


def exponent_fit(points: Sequence[tuple]) -> DecayFit:
    pts = tuple((float(n), float(v)) for n, v in points)
    if len(pts) < 3:
        raise DomainError("an exponent fit needs at least 3 points")
    ns = np.array([p[0] for p in pts])
    vals = np.array([p[1] for p in pts])
    if np.any(np.diff(ns) <= 0):
        raise DomainError("n values must be strictly increasing")
    if np.any(vals <= 0) or not np.all(np.isfinite(vals)):
        raise DomainError("exponent fit needs positive finite values; floor or drop exact zeros")
    x, y = np.log(ns), np.log(vals)
    xm, ym = x.mean(), y.mean()
    sxx = float(np.sum((x - xm) ** 2))
    slope = float(np.sum((x - xm) * (y - ym)) / sxx)
    intercept = float(ym - slope * xm)
    ss_tot = float(np.sum((y - ym) ** 2))
    ss_res = float(np.sum((y - intercept - slope * x) ** 2))
    r2 = 1.0 if ss_tot == 0.0 else min(1.0, max(0.0, 1.0 - ss_res / ss_tot))
    return DecayFit(pts, slope, intercept, r2)


def windowed_max(values_at, n: int, window: int = ENVELOPE_WINDOW) -> float:
    """max |values_at(m)| over m = n .. n + window - 1."""
    return max(abs(values_at(m)) for m in range(n, n + window))


@dataclass
class Row:
    n: int
    sup_value: float
    bound_value: float
    ratio: float
    extra: dict = field(default_factory=dict)


@dataclass
class ExperimentReport:
    """Per-n table, fits and verdicts of one experiment run."""

    command: str
    config: dict
    rows: list
    fit: Optional[DecayFit]
    verdicts: dict

    @property
    def passed(self) -> bool:
        return all(v for k, v in self.verdicts.items() if isinstance(v, bool) and not k.startswith("info_"))

    def to_dict(self) -> dict:
        return {
            "command": self.command,
            "config": self.config,
            "rows": [asdict(r) for r in self.rows],
            "fit": None if self.fit is None else asdict(self.fit),
            "verdicts": self.verdicts,
        }


def localization_exponent(N: int, alpha: float, l: float) -> float:
    """Bound exponent (N-1)/2 - alpha + l for the Riesz means on compacts."""
    return (N - 1) / 2.0 - alpha + l


def _check_order(N, alpha, l, strict=False):
    need = l + (N - 1) / 2.0
    if alpha < need or (strict and alpha == need):
        rel = ">" if strict else ">="
        raise HypothesisError(
            f"localization needs alpha {rel} l + (N-1)/2 = {need:g}, got alpha={alpha:g}")


def _compact(V: Region, K: Optional[Region]) -> Region:
    if K is None:
        return V.shrink(COMPACT_MARGIN)
    if inner_margin(K, V) < COMPACT_MARGIN - 1e-12:
        raise HypothesisError(f"compact K must sit inside V with margin >= {COMPACT_MARGIN} rad")
    return K


def _check_singular_part(F, V, l):
    if not restrict_to_vanish(F, V):
        raise HypothesisError(f"{F.label} is not certified to vanish on V")
    try:
        return sobolev_norm(F, -l)
    except DivergenceError as exc:
        raise HypothesisError(f"{F.label} is not in H^-{l:g}: {exc}") from exc


def _config_echo(**kw):
    out = {}
    for k, v in kw.items():
        if isinstance(v, (CapComplement,)) or hasattr(v, "radius"):
            out[k] = {"kind": type(v).__name__, "pole": list(map(float, v.pole.coords)),
                      "radius": float(v.radius)}
        elif hasattr(v, "label"):
            out[k] = v.label
        elif isinstance(v, (list, tuple)):
            out[k] = [x for x in v]
        else:
            out[k] = v
    return out


def _envelope_fit(rows, key="envelope"):
    pts = [(r.n, r.extra[key]) for r in rows]
    if any(v <= 0 for _, v in pts):
        return None
    return exponent_fit(pts)


def localization_experiment(f: ZonalDistribution, V: Region, l: float, alpha: float,
                            n_list: Sequence[int], resolution: int = 64,
                            K: Optional[Region] = None,
                            window: int = ENVELOPE_WINDOW) -> ExperimentReport:
    """Sup of E_n^alpha f over a compact K inside a domain V where f vanishes.

    The table carries the raw sup, its windowed envelope over consecutive
    cutoffs, and the bound ||f||_{-l} n^((N-1)/2 - alpha + l). Fits are taken
    on the envelope since the means oscillate in n at fixed points.
    """
    N = f.N
    norm = _check_singular_part(f, V, l)
    _check_order(N, alpha, l)
    K = _compact(V, K)
    grid = cap_grid(K, resolution)
    bound_exp = localization_exponent(N, alpha, l)
    growth = f.growth if f.growth is not None else 0.0
    kernel_exp = (N - 1) / 2.0 - alpha + growth

    cache: dict[int, float] = {}

    def sup_at(m):
        if m not in cache:
            cache[m] = sup_on_grid(f, m, alpha, grid)
        return cache[m]

    rows = []
    for n in n_list:
        bound = norm * float(n) ** bound_exp
        env = windowed_max(sup_at, n, window)
        rows.append(Row(n, sup_at(n), bound, sup_at(n) / bound if bound else math.inf,
                        {"envelope": env, "envelope_ratio": env / bound if bound else math.inf}))
    config = _config_echo(distribution=f, V=V, K=K, l=l, alpha=alpha, N=N,
                          n_list=list(n_list), resolution=resolution, window=window)
    fit = _envelope_fit(rows)
    verdicts = {"sobolev_norm": norm, "theoretical_exponent": bound_exp,
                "kernel_rate_exponent": kernel_exp}
    if fit is None:
        verdicts.update(info_degenerate=True, fitted_exponent=None, bound_respected=True,
                        tends_to_zero=all(r.sup_value == 0.0 for r in rows))
        return ExperimentReport("localize", config, rows, None, verdicts)
    ratio_fit = _envelope_fit(rows, "envelope_ratio")
    ratios = [r.extra["envelope_ratio"] for r in rows]
    verdicts.update(
        info_degenerate=False,
        fitted_exponent=fit.slope,
        ratio_slope=ratio_fit.slope,
        max_ratio=max(ratios),
        min_ratio=min(ratios),
        bound_respected=bool(all(map(math.isfinite, ratios)) and ratio_fit.slope <= RATIO_TREND_TOL),
        exponent_within_bound=bool(fit.slope <= bound_exp + EXPONENT_TOL),
        tends_to_zero=bool(rows[-1].sup_value < rows[0].sup_value and fit.slope < 0),
    )
    return ExperimentReport("localize", config, rows, fit, verdicts)


def _values(f, n, alpha, points):
    if f is None:
        return np.zeros(len(points))
    return riesz_mean_values(f, n, alpha, points)


def _pointwise(g, points):
    if isinstance(g, GeneralDistribution):
        return g.values(points)
    if g.bandlimit is None:
        raise DomainError("the continuous part g must be bandlimited")
    t = np.clip(np.array([p.coords for p in points]) @ g.pole.coords, -1.0, 1.0)
    return zonal_series(g.N, g.coefficients(g.bandlimit), t)


def reconstruction_experiment(F: ZonalDistribution, g: Distribution, V: Region, l: float,
                              alpha: float, n_list: Sequence[int], resolution: int = 64,
                              K: Optional[Region] = None,
                              window: int = ENVELOPE_WINDOW) -> ExperimentReport:
    """sup_K |E_n^alpha (F + g) - g| where F vanishes on V and g is bandlimited.

    The means are assembled as E F + E g; the table also keeps
    sup_K |E_n^alpha F| and the deformation sup_K |E_n^alpha g - g| apart.
    """
    N = F.N
    norm = _check_singular_part(F, V, l)
    _check_order(N, alpha, l)
    K = _compact(V, K)
    grid = cap_grid(K, resolution)
    g_vals = _pointwise(g, grid)
    bound_exp = localization_exponent(N, alpha, l)

    cache: dict[int, tuple] = {}

    def measure(m):
        if m not in cache:
            eF = _values(F, m, alpha, grid)
            eg = riesz_mean_values(g, m, alpha, grid)
            cache[m] = (float(np.max(np.abs(eF + eg - g_vals))),
                        float(np.max(np.abs(eF))),
                        float(np.max(np.abs(eg - g_vals))))
        return cache[m]

    rows = []
    for n in n_list:
        err, sing, deform = measure(n)
        bound = norm * float(n) ** bound_exp
        env = windowed_max(lambda m: measure(m)[0], n, window)
        rows.append(Row(n, err, bound, err / bound if bound else math.inf,
                        {"envelope": env, "singular_sup": sing, "deformation_sup": deform}))
    config = _config_echo(singular_part=F, continuous_part=g, V=V, K=K, l=l, alpha=alpha, N=N,
                          n_list=list(n_list), resolution=resolution, window=window)
    fit = _envelope_fit(rows)
    need = l + (N - 1) / 2.0
    verdicts = {"sobolev_norm": norm, "theoretical_exponent": bound_exp,
                "info_boundary_order": bool(alpha == need)}
    if fit is None:
        verdicts.update(info_degenerate=True, fitted_exponent=None,
                        tends_to_zero=all(r.sup_value == 0.0 for r in rows))
    else:
        verdicts.update(info_degenerate=False, fitted_exponent=fit.slope,
                        tends_to_zero=bool(rows[-1].sup_value < rows[0].sup_value and fit.slope < 0))
    return ExperimentReport("reconstruct", config, rows, fit, verdicts)


def sharpness_probe(f: ZonalDistribution, x0_distance: float, n_list: Sequence[int],
                    alpha: float = 0.0, window: int = ENVELOPE_WINDOW) -> DecayFit:
    """Envelope growth of |E_n^alpha f| at a fixed angle from the pole.

    With alpha = 0 (plain partial sums of a point mass) the envelope grows
    like n^((N-1)/2): partial sums do not localize.
    """
    if not math.pi / 6 <= x0_distance <= math.pi:
        raise DomainError("probe angle must be at least pi/6 from the pole")
    from .sphere_geom import tangent_frame
    frame = tangent_frame(f.pole)
    x = SpherePoint(math.sin(x0_distance) * frame[0] + math.cos(x0_distance) * frame[-1])
    pts = []
    for n in n_list:
        env = windowed_max(lambda m: riesz_mean_eval(f, m, alpha, x), n, window)
        if env == 0.0:
            raise DomainError(f"all-zero window at n={n}; perturb the probe angle")
        pts.append((n, env))
    return exponent_fit(pts)


def weak_convergence_probe(f: Distribution, g: Distribution, n_list: Sequence[int]):
    """Rows (n, <E_n f, g>, <f, g>) for a bandlimited test element g.

    E_n is the plain partial sum over degrees k < n, so the pairing runs over
    k <= min(n - 1, deg g) and saturates once n exceeds deg g.
    """
    exact = pairing(f, g)
    return [(int(n), pairing(f, g, kmax=int(n) - 1), exact) for n in n_list]
