"""Spectral expansions and Riesz means of distributions on the sphere S^N."""
from .distributions import (
    GeneralDistribution,
    ZonalDistribution,
    dirac,
    dual_norm_check,
    funk_hecke_density,
    laplacian_power,
    pairing,
    restrict_to_vanish,
    sobolev_norm,
    zero,
    zonal_function,
)
from .errors import ConvergenceError, DivergenceError, DomainError, HypothesisError
from .riesz import (
    DecayFit,
    ExperimentReport,
    exponent_fit,
    localization_experiment,
    reconstruction_experiment,
    riesz_mean_eval,
    sharpness_probe,
    sup_on_grid,
    weak_convergence_probe,
)
from .sphere_geom import Cap, CapComplement, SpherePoint, cap_grid, geodesic_distance, zonal_integral
from .spectrum import (
    KernelProfile,
    WeightSequence,
    abel_weighted_kernel,
    eigenvalue,
    kernel_eval,
    kernel_norm_full,
    kernel_norm_outside,
    multiplicity,
    riesz_profile,
    riesz_weights,
    zonal_eigenkernel,
)

__version__ = "0.1.0"
