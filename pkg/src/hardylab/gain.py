"""Decay-gain bootstrap recurrences, their companion system and limits.

The depth-``k`` state is the vector ``theta(0..k)`` of Gaussian decay
exponents (as fractions of ``a``) for ``f, f', ..., f^(k)``. One stage of
the bootstrap replaces every entry by the average of its neighbours, with
``theta(-1) = 1`` (the Fourier side contributes full decay) and
``theta(k+1) = 1/2`` (derivatives beyond depth ``k`` are not tracked).
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .exceptions import GainOverflowError
from .grid import fmt

HALF = Fraction(1, 2)
VARIANTS = ("original", "auxiliary")
DEFAULT_MAX_BITS = 4096


@dataclass(frozen=True)
class GainState:
    depth: int
    stage: int
    theta: tuple

    def floats(self) -> np.ndarray:
        return np.array([float(t) for t in self.theta])


def initial_state(k: int) -> GainState:
    if k < 0:
        raise ValueError(f"depth must be nonnegative, got {k}")
    return GainState(k, 0, (HALF,) * (k + 1))


def step_gain(state: GainState, variant: str = "original") -> GainState:
    """Advance one stage.

    ``original`` sweeps rows top-down and feeds each freshly updated row
    into the next one (Gauss-Seidel order). ``auxiliary`` only reads the
    previous stage (Jacobi order); its iterates stay below the original ones.
    """
    if variant not in VARIANTS:
        raise ValueError(f"variant must be one of {VARIANTS}, got {variant!r}")
    old = state.theta
    k = state.depth
    new = list(old)
    for j in range(k + 1):
        if j == 0:
            left = Fraction(1)
        else:
            left = new[j - 1] if variant == "original" else old[j - 1]
        right = HALF if j == k else old[j + 1]
        new[j] = (left + right) / 2
    return GainState(k, state.stage + 1, tuple(new))


def _check_bits(state: GainState, max_bits: int):
    for t in state.theta:
        if max(t.numerator.bit_length(), t.denominator.bit_length()) > max_bits:
            raise GainOverflowError(
                f"rational iterate at stage {state.stage} exceeds {max_bits} bits")


def iterate_gain(k: int, stages: int, variant: str = "original",
                 max_bits: int = DEFAULT_MAX_BITS) -> list[GainState]:
    """Exact trajectory ``[state_0, ..., state_stages]`` from ``theta = 1/2``."""
    if stages < 0:
        raise ValueError(f"stages must be nonnegative, got {stages}")
    traj = [initial_state(k)]
    for _ in range(stages):
        nxt = step_gain(traj[-1], variant)
        _check_bits(nxt, max_bits)
        traj.append(nxt)
    return traj


def companion_matrix(k: int) -> list[list[Fraction]]:
    """Tridiagonal ``A`` with ``1/2`` off the diagonal, zeros on it."""
    A = [[Fraction(0)] * (k + 1) for _ in range(k + 1)]
    for i in range(k):
        A[i][i + 1] = HALF
        A[i + 1][i] = HALF
    return A


def companion_vector(k: int) -> list[Fraction]:
    """Constant term ``b`` of the companion system ``Theta <- A Theta + b``."""
    b = [Fraction(0)] * (k + 1)
    b[0] += HALF
    b[k] += Fraction(1, 4)
    return b


@dataclass(frozen=True)
class GainSpectrum:
    depth: int
    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # row mu-1 holds v_mu
    alpha: float

    def residuals(self) -> np.ndarray:
        A = np.array(companion_matrix(self.depth), dtype=float)
        return np.array([np.linalg.norm(A @ v - lam * v)
                         for lam, v in zip(self.eigenvalues, self.eigenvectors)])


def gain_spectrum(k: int) -> GainSpectrum:
    """Closed-form eigenpairs ``cos(mu pi/(k+2))``, ``sin((j+1) mu pi/(k+2))``."""
    if k < 0:
        raise ValueError(f"depth must be nonnegative, got {k}")
    mu = np.arange(1, k + 2)
    j = np.arange(k + 1)
    lam = np.cos(mu * np.pi / (k + 2))
    vecs = np.sin(np.outer(mu, j + 1) * np.pi / (k + 2))
    return GainSpectrum(k, lam, vecs, math.sqrt((k + 2) / 2))


def _solve_exact(A, b) -> list[Fraction]:
    # Gaussian elimination on (I - A) x = b; the matrix is tridiagonal and
    # diagonally dominant so no pivoting is needed
    n = len(b)
    M = [[(Fraction(1) if i == j else Fraction(0)) - A[i][j] for j in range(n)] + [b[i]]
         for i in range(n)]
    for c in range(n):
        piv = M[c][c]
        assert piv != 0, "I - A is singular"
        for r in range(c + 1, min(c + 2, n)):
            f = M[r][c] / piv
            if f:
                M[r] = [x - f * y for x, y in zip(M[r], M[c])]
    x = [Fraction(0)] * n
    for r in range(n - 1, -1, -1):
        s = M[r][n] - sum(M[r][c] * x[c] for c in range(r + 1, n))
        x[r] = s / M[r][r]
    return x


@dataclass(frozen=True)
class GainLimit:
    depth: int
    values: tuple
    method: str

    def floats(self) -> np.ndarray:
        return np.array([float(v) for v in self.values])


def limit_gain(k: int, method: str = "linear_solve") -> GainLimit:
    """Limit of the bootstrap, ``(I - A)^{-1} b``.

    ``linear_solve`` returns exact rationals. ``spectral`` sums the
    eigen-expansion in floating point.
    """
    if k < 0:
        raise ValueError(f"depth must be nonnegative, got {k}")
    if method == "linear_solve":
        vals = _solve_exact(companion_matrix(k), companion_vector(k))
        return GainLimit(k, tuple(vals), method)
    if method == "spectral":
        sp = gain_spectrum(k)
        b = np.array([float(v) for v in companion_vector(k)])
        mu = np.arange(1, k + 2)
        one_minus = 2 * np.sin(mu * np.pi / (2 * (k + 2))) ** 2
        assert np.all(one_minus > 0), "1 is an eigenvalue of A"
        coef = (sp.eigenvectors @ b) / one_minus
        vals = coef @ sp.eigenvectors / sp.alpha ** 2
        return GainLimit(k, tuple(float(v) for v in vals), method)
    raise ValueError(f"method must be 'spectral' or 'linear_solve', got {method!r}")


def gain_f(k: int) -> float:
    """First gain ``g_k(0)`` from the scalar spectral sum with the odd/even weight."""
    total = 0.0
    for mu in range(1, k + 2):
        s = math.sin(mu * math.pi / (k + 2))
        h = 1.5 if mu % 2 else 0.5
        # v_mu(0) * (v_mu . b) = s * s * h / 2 when v_mu(k) = (-1)^(mu+1) s
        total += s * s * h / 2 / (2 * math.sin(mu * math.pi / (2 * (k + 2))) ** 2)
    return total / ((k + 2) / 2)


def gain_first_exact(k: int) -> Fraction:
    return Fraction(2 * k + 3, 2 * k + 4)


@dataclass(frozen=True)
class SandwichReport:
    """Outcome of the two-sided comparison between the two update orders.

    ``holds``/``first_violation`` refer to the full double inequality.
    ``lower_holds`` covers only ``aux(mu, l) <= orig(mu, l)`` and
    ``limit_bound_holds`` the weaker upper bound ``orig(mu, l) <= g_k(mu)``.
    """

    depth: int
    stages: int
    holds: bool
    first_violation: tuple | None  # (mu, stage)
    lower_holds: bool
    limit_bound_holds: bool


def sandwich_check(k: int, stages: int) -> SandwichReport:
    """Check ``aux(mu, l) <= orig(mu, l) <= aux(mu, l+1)`` exactly for ``l <= stages``.

    The upper inequality fails for every ``k >= 1`` by stage 2:
    top-down updates propagate the boundary gain through all rows within
    one stage, while the Jacobi order moves one row per stage. The report
    therefore also records the lower inequality and the bound by the limit.
    """
    if stages < 1:
        raise ValueError("stages must be at least 1")
    orig = iterate_gain(k, stages, "original")
    aux = iterate_gain(k, stages + 1, "auxiliary")
    limit = limit_gain(k).values
    first = None
    lower = bound = True
    for ell in range(stages + 1):
        for mu in range(k + 1):
            lo, mid, hi = aux[ell].theta[mu], orig[ell].theta[mu], aux[ell + 1].theta[mu]
            lower &= lo <= mid
            bound &= mid <= limit[mu]
            if first is None and not (lo <= mid <= hi):
                first = (mu, ell)
    return SandwichReport(k, stages, first is None, first, lower, bound)


def gain_table_csv(traj: list[GainState]) -> str:
    """CSV with ``stage``, exact ``theta_j`` as ``p/q`` and ``theta_j_float`` columns."""
    k = traj[0].depth
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["stage"] + [f"theta_{j}" for j in range(k + 1)]
               + [f"theta_{j}_float" for j in range(k + 1)])
    for st in traj:
        w.writerow([st.stage] + [f"{t.numerator}/{t.denominator}" for t in st.theta]
                   + [fmt(t) for t in st.theta])
    return buf.getvalue()
