"""Hermite functions normalised so that ``F h_n = (-i)^n h_n``.

``h_n(x) = (2 pi)^(1/4) psi_n(sqrt(2 pi) x)`` where ``psi_n`` are the
physicists' Hermite functions. They are generated by the stable
three-term recurrence in the rescaled variable.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.integrate import trapezoid

from .exceptions import GridError, ResolutionError
from .grid import Grid, SampledFunction

GRAM_TOL = 1e-8
OUTSIDE_MASS_TOL = 1e-10


def hermite_functions(n_max: int, x) -> np.ndarray:
    """Evaluate ``h_0..h_{n_max}`` at ``x``; returns shape ``(n_max+1, len(x))``."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    x = np.asarray(x, dtype=float)
    u = np.sqrt(2 * np.pi) * x
    out = np.empty((n_max + 1,) + x.shape)
    out[0] = 2 ** 0.25 * np.exp(-np.pi * x * x)
    if n_max >= 1:
        out[1] = np.sqrt(2.0) * u * out[0]
    for k in range(1, n_max):
        out[k + 1] = np.sqrt(2.0 / (k + 1)) * u * out[k] - np.sqrt(k / (k + 1)) * out[k - 1]
    return out


def _outside_mass(n: int, grid: Grid) -> float:
    # L2 mass of h_n beyond the grid, by trapezoid on a tail extension
    L = grid.half_extent
    tail = np.linspace(L, L + 10.0, 4001)
    h = hermite_functions(n, tail)[n]
    return float(2 * trapezoid(h * h, tail))


@dataclass(frozen=True, eq=False)
class HermiteBasis:
    """Sampled ``h_0..h_N`` on a grid, orthonormal to ``tolerance``."""

    grid: Grid
    samples: np.ndarray
    tolerance: float = GRAM_TOL

    @property
    def max_degree(self) -> int:
        return self.samples.shape[0] - 1

    def function(self, n: int) -> SampledFunction:
        return SampledFunction(self.grid, self.samples[n])

    def gram(self) -> np.ndarray:
        return self.samples @ self.samples.T * self.grid.spacing


def build_hermite_basis(n_max: int, grid: Grid, tolerance: float = GRAM_TOL) -> HermiteBasis:
    """Sample and validate ``h_0..h_{n_max}`` on ``grid``.

    Raises
    ------
    ResolutionError
        If ``h_{n_max}`` leaks more than ``1e-10`` of its mass outside the
        grid, oscillates faster than the grid resolves, or the Gram matrix
        deviates from the identity by more than ``tolerance``.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    # turning point sqrt((2n+1)/(2 pi)); local frequency there must be below Nyquist
    if np.sqrt((2 * n_max + 1) / (2 * np.pi)) * grid.spacing > 0.5:
        raise ResolutionError(f"grid spacing {grid.spacing:g} too coarse for degree {n_max}")
    if _outside_mass(n_max, grid) > OUTSIDE_MASS_TOL:
        raise ResolutionError(
            f"grid half-extent {grid.half_extent:g} too small for Hermite degree {n_max}")
    h = hermite_functions(n_max, grid.points)
    h /= np.sqrt(np.sum(h * h, axis=1) * grid.spacing)[:, None]
    h.setflags(write=False)
    basis = HermiteBasis(grid, h, tolerance)
    err = np.abs(basis.gram() - np.eye(n_max + 1)).max()
    if err > tolerance:
        raise ResolutionError(f"Hermite Gram error {err:.3g} exceeds {tolerance:g}")
    return basis


@dataclass(frozen=True)
class HermiteProjection:
    """Coefficients ``a_n = <f, h_n>`` and the relative L2 synthesis residual."""

    coeffs: np.ndarray
    residual: float


def hermite_project(f: SampledFunction, basis: HermiteBasis) -> HermiteProjection:
    if not f.grid.matches(basis.grid):
        raise GridError("function and Hermite basis live on different grids")
    a = basis.samples @ f.values * basis.grid.spacing
    approx = a @ basis.samples
    fn = f.norm()
    diff = np.sqrt(np.sum(np.abs(f.values - approx) ** 2) * f.grid.spacing)
    return HermiteProjection(a, float(diff / fn) if fn > 0 else 0.0)


def hermite_synthesize(a, basis: HermiteBasis) -> SampledFunction:
    """Pointwise sum ``sum_n a_n h_n`` on the basis grid."""
    a = np.asarray(a, dtype=complex)
    if a.ndim != 1 or a.shape[0] > basis.max_degree + 1:
        raise ValueError(
            f"expected at most {basis.max_degree + 1} coefficients, got shape {a.shape}")
    return SampledFunction(basis.grid, a @ basis.samples[: a.shape[0]])
