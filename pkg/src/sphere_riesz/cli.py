"""``sphere-riesz`` command line: parse a config, run a driver, write outputs.

Exit codes: 0 success, 1 a verdict of the run failed, 2 configuration or
hypothesis error.
"""
from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import asdict, dataclass, fields
from typing import Optional

import numpy as np

from . import distributions as dist
from .errors import DomainError, HypothesisError
from .output import emit
from .riesz import (
    EXPONENT_TOL,
    OSCILLATORY_EXPONENT_TOL,
    ExperimentReport,
    Row,
    exponent_fit,
    localization_experiment,
    reconstruction_experiment,
    sharpness_probe,
    weak_convergence_probe,
)
from .selftest import run_checks
from .sphere_geom import CapComplement, SpherePoint
from .spectrum import kernel_norm_outside, riesz_profile

log = logging.getLogger("sphere_riesz")

COMMANDS = ("kernel-norm", "localize", "reconstruct", "sharpness", "weak-convergence", "selftest")


class ConfigError(ValueError):
    """A configuration field is malformed or out of range."""


@dataclass
class ExperimentConfig:
    command: str
    N: int = 2
    alpha: Optional[float] = None
    l: float = 1.2
    pole_theta: float = 0.0
    pole_phi: float = 0.0
    v_radius: float = math.pi / 4
    k_radius: Optional[float] = None
    r0: float = math.pi / 3
    gamma: float = math.pi / 2 + 0.1
    laplacian_power: int = 0
    degree: int = 8
    n_list: tuple = (32, 64, 128, 256, 512)
    resolution: int = 64
    out: Optional[str] = None
    seed: int = 42

    @property
    def order(self) -> float:
        """Riesz order; sharpness probes default to plain partial sums."""
        if self.alpha is not None:
            return self.alpha
        return 0.0 if self.command == "sharpness" else 2.0

    @property
    def prefix(self) -> str:
        return self.out or self.command

    def pole(self) -> SpherePoint:
        if self.N == 2:
            return SpherePoint.from_angles(self.pole_theta, self.pole_phi)
        return SpherePoint.north(self.N)


def parse_n_list(spec) -> tuple:
    """'32..1024' or '32..1024 dyadic' -> powers of two; '1..8 linear'; '3,5,9'."""
    if isinstance(spec, (list, tuple)):
        values = [int(v) for v in spec]
    else:
        text = str(spec).strip()
        if ".." in text:
            head, _, mode = text.partition(" ")
            lo, hi = (int(p) for p in head.split(".."))
            mode = mode.strip() or "dyadic"
            if mode == "dyadic":
                if lo < 1 or lo & (lo - 1):
                    raise ConfigError(f"n_list: dyadic start {lo} must be a power of two")
                values, v = [], lo
                while v <= hi:
                    values.append(v)
                    v *= 2
            elif mode == "linear":
                values = list(range(lo, hi + 1))
            else:
                raise ConfigError(f"n_list: unknown spacing '{mode}' (use dyadic or linear)")
        else:
            try:
                values = [int(p) for p in text.split(",") if p.strip()]
            except ValueError as exc:
                raise ConfigError(f"n_list: cannot parse '{text}'") from exc
    if not values or any(v < 1 for v in values) or any(b <= a for a, b in zip(values, values[1:])):
        raise ConfigError("n_list: needs strictly increasing positive integers")
    return tuple(values)


_RANGES = {
    "N": (2, 6, "an integer in [2, 6]"),
    "alpha": (0.0, 8.0, "a real in [0, 8]"),
    "l": (0.0, 6.0, "a real in [0, 6]"),
    "resolution": (1, 4096, "an integer in [1, 4096]"),
    "laplacian_power": (0, 4, "an integer in [0, 4]"),
    "degree": (0, 64, "an integer in [0, 64]"),
}
_RADII = ("v_radius", "k_radius", "r0", "gamma")


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    if cfg.command not in COMMANDS:
        raise ConfigError(f"command: unknown '{cfg.command}', expected one of {', '.join(COMMANDS)}")
    for name, (lo, hi, desc) in _RANGES.items():
        v = getattr(cfg, name)
        if v is None:
            continue
        if not isinstance(v, (int, float)) or isinstance(v, bool) or not lo <= v <= hi:
            raise ConfigError(f"{name}: {v!r} out of range, expected {desc}")
    for name in _RADII:
        v = getattr(cfg, name)
        if v is not None and not 0.0 < v < math.pi:
            raise ConfigError(f"{name}: {v!r} out of range, expected a radius in (0, pi)")
    if not 0.0 <= cfg.pole_theta <= math.pi:
        raise ConfigError(f"pole_theta: {cfg.pole_theta!r} out of range, expected [0, pi]")
    cfg.n_list = parse_n_list(cfg.n_list)
    return cfg


_INT_FIELDS = {"N", "resolution", "laplacian_power", "degree", "seed"}


def _coerce(name, value):
    if value is None:
        return None
    try:
        if name in _INT_FIELDS:
            if isinstance(value, float) and not value.is_integer():
                raise ValueError
            return int(value)
        if name in ("command", "out", "n_list"):
            return value
        return float(value)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"{name}: cannot interpret {value!r}") from exc


def parse_config(command: str, config_file: Optional[str] = None, **flags) -> ExperimentConfig:
    """Merge a JSON config file with flags (flags win) and validate."""
    values = {}
    if config_file:
        try:
            with open(config_file, encoding="utf-8") as fh:
                raw = json.load(fh)
        except OSError as exc:
            raise ConfigError(f"config: cannot read {config_file}: {exc}") from exc
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config: {config_file} is not valid JSON: {exc}") from exc
        values.update({k.replace("-", "_"): v for k, v in raw.items()})
    values.update({k: v for k, v in flags.items() if v is not None})
    values["command"] = command
    known = {f.name for f in fields(ExperimentConfig)}
    unknown = set(values) - known
    if unknown:
        raise ConfigError(f"config: unknown field(s) {', '.join(sorted(unknown))}")
    return validate(ExperimentConfig(**{k: _coerce(k, v) for k, v in values.items()}))


# --- drivers ----------------------------------------------------------------

def _singular_part(cfg):
    return dist.laplacian_power(dist.dirac(cfg.pole()), cfg.laplacian_power)


def _regions(cfg):
    pole = cfg.pole()
    V = CapComplement(pole, cfg.v_radius)
    K = CapComplement(pole, cfg.k_radius) if cfg.k_radius is not None else None
    return V, K


def _config_dict(cfg):
    d = asdict(cfg)
    d["alpha"] = cfg.order
    d["n_list"] = list(cfg.n_list)
    d.pop("out")
    return d


def _kernel_norm(cfg) -> ExperimentReport:
    exp = (cfg.N - 1) / 2.0 - cfg.order + cfg.l
    rows = []
    for n in cfg.n_list:
        v = kernel_norm_outside(riesz_profile(cfg.N, n, cfg.order, cfg.l), cfg.r0)
        b = float(n) ** exp
        rows.append(Row(n, v, b, v / b))
    fit = exponent_fit([(r.n, r.sup_value) for r in rows]) if len(rows) >= 3 else None
    tol = EXPONENT_TOL if cfg.l == 0 else OSCILLATORY_EXPONENT_TOL
    verdicts = {"theoretical_exponent": exp,
                "fitted_exponent": None if fit is None else fit.slope,
                "exponent_matches": None if fit is None else bool(abs(fit.slope - exp) <= tol)}
    return ExperimentReport("kernel-norm", _config_dict(cfg), rows, fit, verdicts)


def _localize(cfg) -> ExperimentReport:
    V, K = _regions(cfg)
    rep = localization_experiment(_singular_part(cfg), V, cfg.l, cfg.order, cfg.n_list,
                                  cfg.resolution, K=K)
    rep.config = _config_dict(cfg)
    return rep


def _continuous_part(cfg):
    """g = 1 + cos(gamma) about the pole."""
    from .special_fn import sphere_surface_area
    omega = sphere_surface_area(cfg.N)
    return dist.zonal_function(cfg.N, cfg.pole(), [omega, omega / (cfg.N + 1)], "1 + cos(gamma)")


def _reconstruct(cfg) -> ExperimentReport:
    V, K = _regions(cfg)
    rep = reconstruction_experiment(_singular_part(cfg), _continuous_part(cfg), V, cfg.l,
                                    cfg.order, cfg.n_list, cfg.resolution, K=K)
    rep.config = _config_dict(cfg)
    return rep


def _sharpness(cfg) -> ExperimentReport:
    f = dist.dirac(cfg.pole())
    fit = sharpness_probe(f, cfg.gamma, cfg.n_list, alpha=cfg.order)
    exp = (cfg.N - 1) / 2.0 - cfg.order
    rows = [Row(int(n), v, float(n) ** exp, v / float(n) ** exp) for n, v in fit.points]
    verdicts = {"theoretical_exponent": exp, "fitted_exponent": fit.slope,
                "exponent_matches": bool(abs(fit.slope - exp) <= OSCILLATORY_EXPONENT_TOL)}
    return ExperimentReport("sharpness", _config_dict(cfg), rows, fit, verdicts)


def _weak_convergence(cfg) -> ExperimentReport:
    if cfg.N != 2:
        raise HypothesisError("weak-convergence probes use explicit S^2 test functions; set N=2")
    rng = np.random.default_rng(cfg.seed)
    K = cfg.degree
    c = rng.normal(size=(K + 1, 2 * K + 1))
    for k in range(K + 1):
        c[k, :K - k] = 0.0
        c[k, K + k + 1:] = 0.0
    g = dist.GeneralDistribution(c, f"random degree-{K} test function (seed {cfg.seed})")
    f = _singular_part(cfg)
    table = weak_convergence_probe(f, g, cfg.n_list)
    rows = [Row(n, v, exact, v / exact if exact else math.nan) for n, v, exact in table]
    saturated = all(v == exact for n, v, exact in table if n > K)
    verdicts = {"pairing": table[0][2], "saturated": bool(saturated)}
    return ExperimentReport("weak-convergence", _config_dict(cfg), rows, None, verdicts)


DRIVERS = {
    "kernel-norm": _kernel_norm,
    "localize": _localize,
    "reconstruct": _reconstruct,
    "sharpness": _sharpness,
    "weak-convergence": _weak_convergence,
}


def run(cfg: ExperimentConfig, stream=None) -> int:
    stream = stream or sys.stdout
    if cfg.command == "selftest":
        ok = True
        for name, passed, detail in run_checks(cfg.seed):
            ok &= passed
            print(f"{'PASS' if passed else 'FAIL'}  {name}: {detail}", file=stream)
        return 0 if ok else 1
    try:
        report = DRIVERS[cfg.command](cfg)
    except (HypothesisError, DomainError, dist.CoefficientError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    paths = emit(report, cfg.prefix)
    for key, value in report.verdicts.items():
        print(f"{key}: {value}", file=stream)
    print("wrote " + ", ".join(str(p) for p in paths), file=stream)
    return 0 if report.passed else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="sphere-riesz",
                                description="Riesz means of spectral expansions on the sphere.")
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--config", help="JSON file with config fields; flags override it")
    p.add_argument("--N", type=int, dest="N")
    p.add_argument("--alpha", type=float)
    p.add_argument("--l", type=float, dest="l")
    p.add_argument("--pole-theta", type=float)
    p.add_argument("--pole-phi", type=float)
    p.add_argument("--v-radius", type=float)
    p.add_argument("--k-radius", type=float)
    p.add_argument("--r0", type=float)
    p.add_argument("--gamma", type=float)
    p.add_argument("--laplacian-power", type=int)
    p.add_argument("--degree", type=int)
    p.add_argument("--n", dest="n_list", help="e.g. 32..1024 (dyadic), 1..16 linear, or 8,16,40")
    p.add_argument("--resolution", type=int)
    p.add_argument("--out", help="output prefix; writes PREFIX.csv/.json/.svg")
    p.add_argument("--seed", type=int)
    p.add_argument("-v", "--verbose", action="store_true")
    return p


def main(argv=None) -> int:
    args = vars(build_parser().parse_args(argv))
    logging.basicConfig(level=logging.DEBUG if args.pop("verbose") else logging.WARNING)
    command = args.pop("command")
    config_file = args.pop("config")
    try:
        cfg = parse_config(command, config_file, **args)
    except ConfigError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
