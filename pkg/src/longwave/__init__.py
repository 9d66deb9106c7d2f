"""Spectral laboratory for long-wave approximations of bidirectional wave equations."""

from .grid import Grid, make_grid, sobolev_norm
from .kernels import Kernel, bessel_kernel, default_registry, exponential_kernel, gaussian_kernel
from .unidirectional import BBM, CH, KDV, KappaModel, get_model, solve_unidirectional
from .bidirectional import solve_bidirectional
from .experiments import RunRecord, SweepConfig, fit_error_law, run_approximation

__all__ = [
    "BBM", "CH", "KDV", "Grid", "Kernel", "KappaModel", "RunRecord", "SweepConfig",
    "bessel_kernel", "default_registry", "exponential_kernel", "fit_error_law", "gaussian_kernel",
    "get_model", "make_grid", "run_approximation", "sobolev_norm", "solve_bidirectional",
    "solve_unidirectional",
]
