"""Fractional Fourier transform, harmonic-oscillator and free Schrodinger flows.

``F_beta`` acts on Hermite functions by ``F_beta h_k = exp(-i k beta) h_k``;
``F_{pi/2}`` is the ordinary Fourier transform. The oscillator solution
``Phi(., t)`` multiplies the ``n``-th Hermite coefficient by
``exp(2 (2n+1) pi i t)``, which equals ``exp(2 pi i t) F_{-4 pi t}``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np
from scipy.optimize import minimize_scalar

from .exceptions import DegenerateAngleError, ResolutionError
from .grid import Grid, SampledFunction
from .hermite import (HermiteBasis, build_hermite_basis, hermite_functions,
                      hermite_project, hermite_synthesize)

PROJECTION_TOL = 1e-8
DEFAULT_DEGREE = 64
ESCALATION = (64, 128, 256)
SIN_FLOOR = 1e-6
KERNEL_CHUNK = 512


@lru_cache(maxsize=16)
def cached_basis(grid: Grid, n_max: int = DEFAULT_DEGREE) -> HermiteBasis:
    return build_hermite_basis(n_max, grid)


def project_adaptive(f: SampledFunction, n_max: int | None = None, tol: float = PROJECTION_TOL):
    """Project onto the smallest basis from 64/128/256 meeting ``tol``.

    With an explicit ``n_max`` only that degree is tried. Returns
    ``(coeffs, basis, residual)``.
    """
    degrees = (n_max,) if n_max is not None else ESCALATION
    last = None
    for n in degrees:
        try:
            basis = cached_basis(f.grid, n)
        except ResolutionError as exc:
            last = exc
            break
        proj = hermite_project(f, basis)
        if proj.residual <= tol:
            return proj.coeffs, basis, proj.residual
        last = ResolutionError(
            f"Hermite projection residual {proj.residual:.3g} exceeds {tol:g} at degree {n}")
    raise last


def _near_multiple_of_pi(beta: float) -> int | None:
    """Return ``m mod 2`` if ``beta`` is numerically ``m*pi``, else None."""
    if abs(math.sin(beta)) > SIN_FLOOR:
        return None
    return int(round(beta / math.pi)) % 2


def frft_coefficients(a, beta: float) -> np.ndarray:
    """Hermite-coefficient multiplier ``a_k -> exp(-i k beta) a_k``."""
    a = np.asarray(a, dtype=complex)
    return a * np.exp(-1j * beta * np.arange(a.shape[0]))


def frft(f, beta: float, method: str = "hermite", basis: HermiteBasis | None = None,
         n_max: int | None = None, fallback: bool = True) -> SampledFunction:
    """Fractional Fourier transform of angle ``beta``.

    Parameters
    ----------
    f : SampledFunction or array of Hermite coefficients
        Coefficient input requires ``basis``.
    beta : float
        Rotation angle; ``pi/2`` gives the ordinary Fourier transform.
    method : {"hermite", "kernel"}
        ``hermite`` is the reference definition. ``kernel`` evaluates the
        chirped integral representation by dense quadrature; it agrees
        with ``hermite`` in modulus, up to a global phase (see
        :func:`compare_frft_methods`).
    basis : HermiteBasis, optional
        Basis for projection; by default degrees 64, 128, 256 are tried
        until the projection residual is below ``1e-8``.
    fallback : bool
        Kernel method only: at angles with ``|sin beta| <= 1e-6`` return the
        exact identity or reflection instead of raising.
    """
    if method not in ("hermite", "kernel"):
        raise ValueError(f"method must be 'hermite' or 'kernel', got {method!r}")
    if not isinstance(f, SampledFunction):
        if basis is None:
            raise ValueError("coefficient input needs an explicit basis")
        return hermite_synthesize(frft_coefficients(f, beta), basis)
    if method == "kernel":
        return _frft_kernel(f, beta, fallback)
    if beta % (2 * math.pi) == 0.0:
        return f
    if basis is not None:
        proj = hermite_project(f, basis)
        if proj.residual > PROJECTION_TOL:
            raise ResolutionError(
                f"Hermite projection residual {proj.residual:.3g} exceeds {PROJECTION_TOL:g}")
        coeffs = proj.coeffs
    else:
        coeffs, basis, _ = project_adaptive(f, n_max)
    return hermite_synthesize(frft_coefficients(coeffs, beta), basis)


def kernel_prefactor(beta: float) -> complex:
    theta = math.copysign(1.0, math.sin(beta))
    return complex(np.exp(1j * (theta * math.pi / 2 - beta / 2)) / math.sqrt(abs(math.sin(beta))))


def _extent(values: np.ndarray, pts: np.ndarray, floor: float = 1e-14) -> float:
    mod = np.abs(values)
    return float(np.abs(pts[mod >= floor * mod.max()]).max()) if mod.max() > 0 else 0.0


def _frft_kernel(f: SampledFunction, beta: float, fallback: bool = True) -> SampledFunction:
    special = _near_multiple_of_pi(beta)
    if special is not None:
        if not fallback:
            raise DegenerateAngleError(
                f"beta={beta!r} is within 1e-6 of a multiple of pi; kernel undefined")
        return f if special == 0 else f.reflect()
    x = f.grid.points
    cot = math.cos(beta) / math.sin(beta)
    csc = 1.0 / math.sin(beta)
    band = abs(cot) * _extent(f.values, x) + _extent(np.fft.fft(f.values), np.fft.fftfreq(f.grid.n, f.grid.spacing))
    if band > 0.5 / f.grid.spacing:
        raise ResolutionError(
            f"kernel integrand at beta={beta:.6g} needs frequencies up to {band:.3g}, "
            f"beyond the grid Nyquist limit {0.5 / f.grid.spacing:.3g}")
    chirped = f.values * np.exp(1j * math.pi * cot * x * x) * f.grid.spacing
    out = np.empty(f.grid.n, dtype=complex)
    for start in range(0, f.grid.n, KERNEL_CHUNK):
        rows = x[start:start + KERNEL_CHUNK]
        out[start:start + KERNEL_CHUNK] = np.exp(-2j * math.pi * csc * np.outer(rows, x)) @ chirped
    out *= kernel_prefactor(beta) * np.exp(1j * math.pi * cot * x * x)
    return SampledFunction(f.grid, out, f.truncated)


@dataclass(frozen=True)
class KernelComparison:
    beta: float
    max_modulus_diff: float
    l2_modulus_diff: float
    l2_diff_after_phase: float
    phase_offset: float  # arg of <hermite, kernel>


def compare_frft_methods(f: SampledFunction, beta: float,
                         basis: HermiteBasis | None = None) -> KernelComparison:
    """Measure kernel-vs-Hermite discrepancy and the global phase between them."""
    ref = frft(f, beta, "hermite", basis=basis)
    ker = frft(f, beta, "kernel")
    dmod = np.abs(np.abs(ref.values) - np.abs(ker.values))
    ip = np.vdot(ref.values, ker.values)
    phase = float(np.angle(ip)) if abs(ip) > 0 else 0.0
    aligned = ker.values * np.exp(-1j * phase)
    dx = f.grid.spacing
    return KernelComparison(
        beta=float(beta),
        max_modulus_diff=float(dmod.max()),
        l2_modulus_diff=float(np.sqrt(np.sum(dmod ** 2) * dx)),
        l2_diff_after_phase=float(np.sqrt(np.sum(np.abs(aligned - ref.values) ** 2) * dx)),
        phase_offset=phase,
    )


@dataclass(frozen=True)
class ComplexGaussianParams:
    """``x -> amplitude * exp(-pi * exponent * x**2)``."""

    amplitude: complex
    exponent: complex

    def __post_init__(self):
        if not self.exponent.real > 0:
            raise ValueError(f"exponent must have positive real part, got {self.exponent!r}")

    @property
    def decay(self) -> float:
        return float(self.exponent.real)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return self.amplitude * np.exp(-math.pi * self.exponent * x * x)

    def sample(self, grid: Grid) -> SampledFunction:
        return SampledFunction(grid, self(grid.points))


def frft_gaussian_closed_form(lam: complex, beta: float) -> ComplexGaussianParams:
    """Closed form of ``F_beta exp(-pi lam x^2)``.

    Chirping the input by ``exp(i pi cot(beta) y^2)`` leaves the Gaussian
    ``exp(-pi (lam - i cot beta) y^2)``, whose Fourier transform at
    ``x csc(beta)`` yields the output exponent
    ``csc^2(beta)/(lam - i cot beta) - i cot beta``. The amplitude is the
    one matching the Hermite-multiplier definition.
    """
    lam = complex(lam)
    if not lam.real > 0:
        raise ValueError(f"Gaussian parameter must have positive real part, got {lam!r}")
    if abs(math.sin(beta)) <= SIN_FLOOR:
        raise DegenerateAngleError(f"beta={beta!r} is too close to a multiple of pi")
    cot = math.cos(beta) / math.sin(beta)
    csc2 = 1.0 / math.sin(beta) ** 2
    shifted = lam - 1j * cot
    exponent = csc2 / shifted - 1j * cot
    amplitude = np.sqrt(1 - 1j * cot) / np.sqrt(shifted)
    return ComplexGaussianParams(complex(amplitude), complex(exponent))


@dataclass(frozen=True)
class OscillatorState:
    """Hermite coefficients of ``Phi(., t)``; ``degree`` is the truncation degree."""

    coeffs: np.ndarray
    t: float = 0.0

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def norm(self) -> float:
        return float(np.linalg.norm(self.coeffs))


def oscillator_state(f: SampledFunction, n_max: int | None = None) -> tuple[OscillatorState, HermiteBasis]:
    coeffs, basis, _ = project_adaptive(f, n_max)
    return OscillatorState(coeffs, 0.0), basis


def oscillator_evolve(state: OscillatorState, t: float) -> OscillatorState:
    """Evolve by time ``t``: ``a_n -> exp(2 (2n+1) pi i t) a_n``."""
    n = np.arange(len(state.coeffs))
    return OscillatorState(state.coeffs * np.exp(2j * math.pi * (2 * n + 1) * t), state.t + t)


def _dilation(t: float) -> float:
    return math.sqrt(1 + 16 * math.pi ** 2 * t * t)


def _schrodinger_envelope(x: np.ndarray, t: float) -> np.ndarray:
    chirp = np.exp(1j * 4 * math.pi ** 2 * t * x * x / (1 + 16 * math.pi ** 2 * t * t))
    return chirp / np.sqrt(1 + 4j * math.pi * t)


def schrodinger_evolve(f: SampledFunction, t: float, basis: HermiteBasis | None = None) -> SampledFunction:
    """Free evolution ``exp(i t d^2/dx^2) f`` mode by mode.

    Each Hermite mode is dilated by ``sqrt(1 + 16 pi^2 t^2)``, chirped and
    multiplied by the ``n``-th power of ``sqrt((1 - 4 pi i t)/(1 + 4 pi i t))``.
    Dilated modes are evaluated exactly, not interpolated; the output
    lives on ``f.grid`` and must fit inside it.
    """
    if t == 0:
        return f
    if basis is None:
        coeffs, basis, _ = project_adaptive(f)
    else:
        proj = hermite_project(f, basis)
        if proj.residual > PROJECTION_TOL:
            raise ResolutionError(
                f"Hermite projection residual {proj.residual:.3g} exceeds {PROJECTION_TOL:g}")
        coeffs = proj.coeffs
    x = f.grid.points
    modes = hermite_functions(len(coeffs) - 1, x / _dilation(t))
    ratio = np.sqrt((1 - 4j * math.pi * t) / (1 + 4j * math.pi * t))
    weights = coeffs * ratio ** np.arange(len(coeffs))
    return SampledFunction(f.grid, _schrodinger_envelope(x, t) * (weights @ modes))


def free_propagator(f: SampledFunction, t: float) -> SampledFunction:
    """Reference free evolution through the Fourier multiplier ``exp(-4 pi^2 i t xi^2)``."""
    xi = f.grid.dual().points
    v = np.fft.fft(np.fft.ifftshift(f.values))
    mult = np.fft.ifftshift(np.exp(-4j * math.pi ** 2 * t * xi * xi))
    return SampledFunction(f.grid, np.fft.fftshift(np.fft.ifft(v * mult)), f.truncated)


def correspondence_residual(f: SampledFunction, t: float) -> float:
    """L2 distance between free evolution and its oscillator representation.

    The right-hand side is the oscillator solution at time
    ``s = arctan(-4 pi t)/(4 pi)``, stripped of its ``exp(2 pi i s)`` phase,
    dilated, chirped and scaled by ``(1 + 4 pi i t)^(-1/2)``.
    """
    coeffs, basis, _ = project_adaptive(f)
    lhs = schrodinger_evolve(f, t, basis)
    s = math.atan(-4 * math.pi * t) / (4 * math.pi)
    phi = oscillator_evolve(OscillatorState(coeffs), s).coeffs
    x = f.grid.points
    modes = hermite_functions(len(coeffs) - 1, x / _dilation(t))
    rhs = _schrodinger_envelope(x, t) * np.exp(-2j * math.pi * s) * (phi @ modes)
    return float(np.sqrt(np.sum(np.abs(lhs.values - rhs) ** 2) * f.grid.spacing))


def vemuri_R(a: float, eps: float = 0.0) -> float:
    """Least positive root ``R`` of ``(a - eps)/4 = R / (2 (1 + R^2))``."""
    c = a - eps
    if not 0 < c < 1:
        raise ValueError(f"a - eps must lie in (0, 1), got {c!r}")
    # rationalised root avoids cancellation for small c
    return c / (1 + math.sqrt(1 - c * c))


def vemuri_omega(a: float, eps: float, t) -> np.ndarray | float:
    """Decay exponent curve ``Omega(t)``; minimum ``pi R`` at ``t = 1/(4 pi)``."""
    R = vemuri_R(a, eps)
    u = 4 * math.pi * np.asarray(t, dtype=float)
    om = (1 + u * u) * 4 * math.pi * R / (2 * ((u + 1) ** 2 + R * R * (u - 1) ** 2))
    return float(om) if om.ndim == 0 else om


def vemuri_gap_bound(R: float, t) -> np.ndarray | float:
    """The displayed lower bound for ``Omega(t) - pi R``."""
    u = 4 * math.pi * np.asarray(t, dtype=float)
    out = (1 - R * R) * (u - 1) ** 2 / (2 * ((u + 1) ** 2 + R * R * (u - 1) ** 2))
    return float(out) if out.ndim == 0 else out


def vemuri_gap_exact(R: float, t) -> np.ndarray | float:
    """Exact ``Omega(t) - pi R = pi R (1 - R^2)(u - 1)^2 / D`` with ``u = 4 pi t``."""
    u = 4 * math.pi * np.asarray(t, dtype=float)
    out = math.pi * R * (1 - R * R) * (u - 1) ** 2 / ((u + 1) ** 2 + R * R * (u - 1) ** 2)
    return float(out) if out.ndim == 0 else out


def is_exceptional_time(t) -> bool:
    """Whether ``t`` lies in ``{1/16 + k/8}``; exact for rationals, ``1e-12`` otherwise."""
    if isinstance(t, (Fraction, int)):
        return ((Fraction(t) - Fraction(1, 16)) * 8).denominator == 1
    m = (float(t) - 1 / 16) * 8
    return abs(m - round(m)) / 8 < 1e-12


@dataclass(frozen=True)
class VemuriCurve:
    a: float
    eps: float
    R: float
    t: np.ndarray
    omega: np.ndarray

    @property
    def pi_R(self) -> float:
        return math.pi * self.R

    def exceptional(self) -> np.ndarray:
        return np.array([is_exceptional_time(float(s)) for s in self.t])

    def refined_minimum(self) -> tuple[float, float]:
        """Golden-section refinement of the sampled minimiser; returns ``(t, Omega)``."""
        i = int(np.argmin(self.omega))
        if i == 0 or i == len(self.t) - 1:
            return float(self.t[i]), float(self.omega[i])
        bracket = (self.t[i - 1], self.t[i], self.t[i + 1])
        res = minimize_scalar(lambda s: vemuri_omega(self.a, self.eps, s),
                              bracket=bracket, method="golden", tol=1e-12)
        return float(res.x), float(res.fun)


def vemuri_curve(a: float, eps: float, t) -> VemuriCurve:
    t = np.asarray(t, dtype=float)
    if t.ndim != 1 or t.size == 0:
        raise ValueError("t must be a nonempty one-dimensional sequence")
    return VemuriCurve(a, eps, vemuri_R(a, eps), t, vemuri_omega(a, eps, t))


def sample_times(t_min: float, t_max: float, points: int) -> np.ndarray:
    if points < 2 or not t_max > t_min:
        raise ValueError("need points >= 2 and t_max > t_min")
    return np.linspace(t_min, t_max, points)
