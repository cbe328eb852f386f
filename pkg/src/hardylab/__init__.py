"""Numerics for Gaussian-decay uncertainty principles.

Exact decay-gain recursions, fractional Fourier transforms, oscillator and
free Schrodinger evolution, weighted-class membership tests and a-priori
derivative bounds, all on a shared uniform grid.
"""
__version__ = "0.1.0"

from .exceptions import (DegenerateAngleError, FitError, GainOverflowError, GridError,
                         HardyLabError, ResolutionError, TruncationWarning)
from .grid import Grid, SampledFunction
from .fourier import fourier_transform
from .hermite import build_hermite_basis, hermite_functions, hermite_project, hermite_synthesize
from .gain import gain_spectrum, iterate_gain, limit_gain, sandwich_check
from .oscillator import (frft, frft_gaussian_closed_form, oscillator_evolve, oscillator_state,
                         schrodinger_evolve, vemuri_curve, vemuri_R)
from .decay import (class_membership, derivative_decay_check, fit_gaussian_decay,
                    weighted_l2)
from .bounds import apriori_bounds
from .families import (GaussianFamily, chirp_family, fourier_family, laplace_family,
                       load_families, theorem_check)

__all__ = [
    "DegenerateAngleError", "FitError", "GainOverflowError", "GridError", "HardyLabError",
    "ResolutionError", "TruncationWarning", "Grid", "SampledFunction", "fourier_transform",
    "build_hermite_basis", "hermite_functions", "hermite_project", "hermite_synthesize",
    "gain_spectrum", "iterate_gain", "limit_gain", "sandwich_check", "frft",
    "frft_gaussian_closed_form", "oscillator_evolve", "oscillator_state", "schrodinger_evolve",
    "vemuri_curve", "vemuri_R", "class_membership", "derivative_decay_check",
    "fit_gaussian_decay", "weighted_l2", "apriori_bounds", "GaussianFamily", "chirp_family",
    "fourier_family", "laplace_family", "load_families", "theorem_check",
]
