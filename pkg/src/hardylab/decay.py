"""Gaussian-weighted norms, decay fits and related diagnostics.

All quantities are computed from samples on a resolved window: the range
``|x| <= X`` where ``|f|`` stays above ``floor * max|f|``. Weighted
integrands are assembled in log space so that ``exp(2 a pi x^2)`` never
overflows before it meets the decay of ``f``.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy.special import erf

from .exceptions import FitError, GridError
from .fourier import fourier_transform
from .grid import SampledFunction

FLOOR = 1e-14
TAIL_THRESHOLD = 0.5
EDGE_THRESHOLD = 0.5
TREND_TOL = 1e-2
MIN_FIT_POINTS = 32
DERIV_CUTOFF = 1e-15


def _resolved_extent(mod: np.ndarray, x: np.ndarray, floor: float) -> float:
    peak = mod.max()
    if peak == 0:
        return 0.0
    return float(np.abs(x[mod >= floor * peak]).max())


@dataclass(frozen=True)
class WeightedNormReport:
    """``(int |f|^2 exp(2 a pi x^2))^(1/2)`` with divergence diagnostics.

    ``value`` is ``inf`` when ``divergent``; ``partial_value`` keeps the
    window sum. ``tail_ratio`` is the share of the integral from the outer
    decile of the window, ``edge_ratio`` the integrand at the window edge
    relative to its peak.
    """

    a: float
    p: float
    value: float
    partial_value: float
    tail_ratio: float
    edge_ratio: float
    divergent: bool
    window: tuple

    def to_dict(self) -> dict:
        return asdict(self)


def weighted_l2(f: SampledFunction, a: float, floor: float = FLOOR) -> WeightedNormReport:
    """Trapezoidal weighted L2 norm on the resolved window.

    The integral is declared divergent when more than half of it comes
    from the outer decile of the window, or when the integrand at the
    window edge is still more than half its peak (a non-decaying integrand
    cut off by the floor).
    """
    if a < 0:
        raise ValueError(f"weight parameter must be nonnegative, got {a!r}")
    x = f.x
    mod = np.abs(f.values)
    X = _resolved_extent(mod, x, floor)
    if X == 0.0:
        return WeightedNormReport(a, 2, 0.0, 0.0, 0.0, 0.0, False, (0.0, 0.0))
    inside = (np.abs(x) <= X) & (mod > 0)
    xs = x[inside]
    logw = 2 * np.log(mod[inside]) + 2 * a * math.pi * xs * xs
    top = logw.max()
    w = np.exp(logw - top)
    total = w.sum()
    tail_ratio = float(w[np.abs(xs) >= 0.9 * X].sum() / total)
    edge = max(w[0], w[-1])
    edge_ratio = float(edge)
    log_half = 0.5 * (top + math.log(total * f.grid.spacing))
    partial = math.exp(log_half) if log_half < 709 else math.inf
    divergent = tail_ratio > TAIL_THRESHOLD or edge_ratio > EDGE_THRESHOLD or math.isinf(partial)
    return WeightedNormReport(a, 2, math.inf if divergent else partial, partial,
                              tail_ratio, edge_ratio, divergent, (-X, X))


@dataclass(frozen=True)
class DecayFit:
    """``|f(x)| ~ c_hat * exp(-b_hat * pi * x^2)`` on ``window`` (in ``|x|``)."""

    b_hat: float
    c_hat: float
    window: tuple
    residual: float
    n_points: int

    def to_dict(self) -> dict:
        return {"b_hat": self.b_hat, "c_hat": self.c_hat, "window": list(self.window),
                "residual": self.residual, "n_points": self.n_points}


def upper_envelope(r: np.ndarray, mod: np.ndarray) -> np.ndarray:
    """Indices of tail records: scanning ``r`` from the outside in, keep new maxima.

    Values within a relative ``1e-9`` of the running maximum count as ties,
    so mirror points ``x`` and ``-x`` are kept or dropped together.
    """
    order = np.argsort(-r, kind="stable")
    running = np.maximum.accumulate(mod[order])
    keep = mod[order] >= running * (1 - 1e-9)
    return np.sort(order[keep])


def fit_gaussian_decay(f: SampledFunction, window=None, floor: float = FLOOR,
                       min_points: int = MIN_FIT_POINTS) -> DecayFit:
    """Least-squares fit of ``log|f|`` against ``-pi x^2`` on the upper envelope.

    Parameters
    ----------
    f : SampledFunction
    window : (float, float), optional
        Range of ``|x|`` to use. Defaults to ``[X/2, X]`` with ``X`` the
        resolved extent.
    floor : float
        Samples below ``floor * max|f|`` are ignored. Exact closed-form
        samples tolerate a much lower floor than transformed ones.
    min_points : int
        Minimum number of samples above the floor inside the window.
    """
    x = f.x
    mod = np.abs(f.values)
    X = _resolved_extent(mod, x, floor)
    if window is None:
        window = (0.5 * X, X)
    lo, hi = float(window[0]), float(window[1])
    if hi > f.grid.half_extent or lo < 0 or hi <= lo:
        raise GridError(f"fit window {window} is not inside [0, {f.grid.half_extent:g}]")
    r = np.abs(x)
    peak = mod.max()
    sel = np.flatnonzero((r >= lo) & (r <= hi) & (mod >= floor * peak) & (mod > 0))
    if sel.size < min_points:
        raise FitError(
            f"only {sel.size} samples above the floor in window [{lo:g}, {hi:g}]; need {min_points}")
    env = sel[upper_envelope(r[sel], mod[sel])]
    if env.size < 3:
        raise FitError(f"upper envelope has only {env.size} points")
    xx = x[env] ** 2
    ly = np.log(mod[env])
    slope, intercept = np.polyfit(xx, ly, 1)
    resid = float(np.abs(ly - (slope * xx + intercept)).max())
    return DecayFit(float(-slope / math.pi), float(math.exp(intercept)),
                    (lo, hi), resid, int(env.size))


def sup_trend(f: SampledFunction, a: float, floor: float = FLOOR) -> tuple[float, float]:
    """``(log sup |f| e^{a pi x^2}, slope)`` where the slope of ``log(|f| e^{a pi x^2})``
    against ``x^2`` is taken on the outer decile of the resolved window."""
    x = f.x
    mod = np.abs(f.values)
    X = _resolved_extent(mod, x, floor)
    if X == 0.0:
        return -math.inf, 0.0
    r = np.abs(x)
    inside = np.flatnonzero((r <= X) & (mod > 0))
    s = np.log(mod[inside]) + a * math.pi * x[inside] ** 2
    outer = inside[r[inside] >= 0.9 * X]
    env = outer[upper_envelope(r[outer], mod[outer])]
    if env.size >= 3:
        slope = float(np.polyfit(x[env] ** 2, np.log(mod[env]) + a * math.pi * x[env] ** 2, 1)[0])
    else:
        slope = 0.0
    return float(s.max()), slope


@dataclass(frozen=True)
class MembershipReport:
    a: float
    in_E2: bool
    in_Einf: bool
    norm_f: WeightedNormReport
    norm_fhat: WeightedNormReport
    fit_f: DecayFit | None
    fit_fhat: DecayFit | None
    trend_f: float
    trend_fhat: float
    truncated: bool

    def to_dict(self) -> dict:
        return {
            "a": self.a, "in_E2": self.in_E2, "in_Einf": self.in_Einf,
            "weighted_l2_f": self.norm_f.to_dict(), "weighted_l2_fhat": self.norm_fhat.to_dict(),
            "fit_f": None if self.fit_f is None else self.fit_f.to_dict(),
            "fit_fhat": None if self.fit_fhat is None else self.fit_fhat.to_dict(),
            "trend_f": self.trend_f, "trend_fhat": self.trend_fhat,
            "truncated": self.truncated,
        }


def _safe_fit(f: SampledFunction) -> DecayFit | None:
    try:
        return fit_gaussian_decay(f)
    except FitError:
        return None


def class_membership(f: SampledFunction, a: float, fhat: SampledFunction | None = None) -> MembershipReport:
    """Numeric certification of ``f`` in the weighted classes at level ``a``.

    ``in_E2`` requires both weighted L2 norms to be non-divergent.
    ``in_Einf`` requires ``|f| e^{a pi x^2}`` (and the same for ``fhat``) not
    to trend upward across the outer decile of the window; the slope test
    resolves exponent excesses of about ``0.003``.
    """
    if fhat is None:
        fhat = fourier_transform(f)
    nf, nh = weighted_l2(f, a), weighted_l2(fhat, a)
    _, tf = sup_trend(f, a)
    _, th = sup_trend(fhat, a)
    return MembershipReport(
        a=a,
        in_E2=not (nf.divergent or nh.divergent),
        in_Einf=tf <= TREND_TOL and th <= TREND_TOL,
        norm_f=nf, norm_fhat=nh,
        fit_f=_safe_fit(f), fit_fhat=_safe_fit(fhat),
        trend_f=tf, trend_fhat=th,
        truncated=f.truncated or fhat.truncated,
    )


@dataclass(frozen=True)
class EnvelopeResult:
    j_star: float
    j_int: int
    log_bound: float
    log_bound_int: float


def envelope_exponent(j, a: float, xi: float):
    """``G(j, xi) = (j/2)(log j - 1 - log(a pi) - 2 log|xi|)`` with ``G(0, xi) = 0``."""
    j = np.asarray(j, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        g = 0.5 * j * (np.log(j) - 1 - math.log(a * math.pi) - 2 * math.log(abs(xi)))
    g = np.where(j == 0, 0.0, g)
    return float(g) if g.ndim == 0 else g


def envelope_from_moments(a: float, xi: float) -> EnvelopeResult:
    """Optimal moment order for the bound ``|fhat(xi)| <~ exp(G(j, xi))``.

    The continuous minimiser is ``j* = a pi xi^2`` with value
    ``-a pi xi^2 / 2``; the integer minimiser is the better of
    ``floor(j*)`` and ``ceil(j*)`` by convexity.
    """
    if a <= 0:
        raise ValueError(f"a must be positive, got {a!r}")
    if xi == 0:
        return EnvelopeResult(0.0, 0, 0.0, 0.0)
    js = a * math.pi * xi * xi
    cands = sorted({math.floor(js), math.ceil(js)})
    vals = [envelope_exponent(c, a, xi) for c in cands]
    best = int(cands[int(np.argmin(vals))])
    return EnvelopeResult(js, best, -js / 2, float(min(vals)))


@dataclass(frozen=True)
class BadSetReport:
    j: int
    interval: tuple
    measure: float
    paper_bound: float
    weighted_norm: float

    @property
    def holds(self) -> bool:
        return self.measure <= self.paper_bound


def bad_set_measure(f: SampledFunction, b: float, beta: float, j: int,
                    weighted_norm: float | None = None) -> BadSetReport:
    """Measure of ``{x in I_j : |f(x)| > exp(-beta b pi x^2)}``, ``I_j = (sqrt j, sqrt(j+1))``.

    The bound ``C_b(f) |I_j|^(1/2) exp(-(1-beta) b pi j)`` follows from
    Chebyshev and Cauchy-Schwarz. ``weighted_norm`` overrides the sampled
    ``C_b(f)`` (e.g. with an exact value).
    """
    if j < 1:
        raise ValueError(f"j must be at least 1, got {j}")
    lo, hi = math.sqrt(j), math.sqrt(j + 1)
    if hi > f.grid.half_extent:
        raise GridError(f"interval ({lo:g}, {hi:g}) exceeds the grid half-extent")
    x = f.x
    inside = (x > lo) & (x < hi)
    exceed = np.abs(f.values[inside]) > np.exp(-beta * b * math.pi * x[inside] ** 2)
    frac = float(exceed.mean()) if exceed.size else 0.0
    length = hi - lo
    if weighted_norm is None:
        weighted_norm = weighted_l2(f, b).value
    bound = weighted_norm * math.sqrt(length) * math.exp(-(1 - beta) * b * math.pi * j)
    return BadSetReport(j, (lo, hi), frac * length, bound, weighted_norm)


def spectral_derivative(f: SampledFunction, k: int, cutoff: float = DERIV_CUTOFF):
    """``D^k f`` through the multiplier ``(2 pi i xi)^k``; returns ``(g, noise)``.

    Fourier samples below ``cutoff * max`` are zeroed so that amplified
    rounding noise at high frequency does not swamp the tails; ``noise``
    estimates the absolute rounding level of the result.
    """
    n = f.grid.n
    xi = f.grid.dual().points
    fh = np.fft.fftshift(np.fft.fft(np.fft.ifftshift(f.values))) * f.grid.spacing
    mod = np.abs(fh)
    fh = np.where(mod >= cutoff * mod.max(), fh, 0)
    mult = (2j * math.pi * xi) ** k
    g = fh * mult
    dxi = 1.0 / (n * f.grid.spacing)
    # each kept coefficient carries an absolute rounding error ~ eps * max|fhat|
    kept = mod >= cutoff * mod.max()
    noise = 1e-15 * float(mod.max() * np.sum(np.abs(mult[kept])) * dxi + np.sum(np.abs(g)) * dxi)
    out = np.fft.fftshift(np.fft.ifft(np.fft.ifftshift(g))) * n * dxi
    return SampledFunction(f.grid, out, f.truncated), noise


@dataclass(frozen=True)
class DerivativeDecayReport:
    k: int
    a: float
    fit: DecayFit | None
    threshold: float
    passes: bool
    noise_floor: float
    message: str = ""

    def to_dict(self) -> dict:
        return {"k": self.k, "a": self.a, "fit": None if self.fit is None else self.fit.to_dict(),
                "threshold": self.threshold, "passes": self.passes,
                "noise_floor": self.noise_floor, "message": self.message}


def derivative_decay_check(f: SampledFunction, k: int, a: float) -> DerivativeDecayReport:
    """Fit the Gaussian decay of ``D^k f`` and compare with ``a/2 - 0.05``."""
    if not 0 <= k <= 6:
        raise ValueError(f"derivative order must be in 0..6, got {k}")
    g, noise = spectral_derivative(f, k)
    peak = float(np.abs(g.values).max())
    floor = max(FLOOR, 10 * noise / peak) if peak > 0 else FLOOR
    threshold = a / 2 - 0.05
    try:
        fit = fit_gaussian_decay(g, floor=floor)
    except FitError as exc:
        return DerivativeDecayReport(k, a, None, threshold, False, floor,
                                     f"differentiation noise floor reached: {exc}")
    return DerivativeDecayReport(k, a, fit, threshold, fit.b_hat >= threshold, floor)


def beurling_integral(f: SampledFunction, R: float, fhat=None) -> float:
    """``int int_{[-R,R]^2} |f(x)| |fhat(y)| exp(2 pi |x y|) dx dy``.

    ``fhat`` may be a callable evaluating the Fourier transform exactly, in
    which case both variables use ``f``'s grid; otherwise the transform is
    sampled on the dual grid.
    """
    if R > f.grid.half_extent:
        raise GridError(f"R={R:g} exceeds the grid half-extent {f.grid.half_extent:g}")
    x = f.x
    mx = np.abs(x) <= R
    xs, fx = np.abs(x[mx]), np.abs(f.values[mx]) * _trapezoid_weights(x[mx], R)
    if fhat is None:
        fh = fourier_transform(f)
        y = fh.x
        my = np.abs(y) <= R
        ys, fy, dy = np.abs(y[my]), np.abs(fh.values[my]) * _trapezoid_weights(y[my], R), fh.grid.spacing
    else:
        ys, fy, dy = xs, np.abs(np.asarray(fhat(x[mx]))) * _trapezoid_weights(x[mx], R), f.grid.spacing
    if not fx.any() or not fy.any():
        return 0.0
    total = 0.0
    for start in range(0, xs.size, 512):
        xb = xs[start:start + 512, None]
        total += float(np.sum(fx[start:start + 512, None] * fy[None, :] * np.exp(2 * math.pi * xb * ys[None, :])))
    return total * f.grid.spacing * dy


def _trapezoid_weights(pts: np.ndarray, R: float) -> np.ndarray:
    # half weight on samples sitting on the truncation edge
    w = np.ones(pts.size)
    w[np.isclose(np.abs(pts), R, rtol=0, atol=1e-12 * max(1.0, R))] = 0.5
    return w


def beurling_gaussian(R: float) -> float:
    """Closed form of the truncated integral for ``exp(-pi x^2)``."""
    return 4 * (R * erf(math.sqrt(math.pi) * R) - (1 - math.exp(-math.pi * R * R)) / math.pi)


@dataclass(frozen=True)
class SupportEstimate:
    c0_hat: float
    n_envelope: int
    window: tuple

    def to_dict(self) -> dict:
        return asdict(self)


def laplace_support_inf(s, L, min_samples: int = 16) -> SupportEstimate:
    """Estimate the left end of a measure's support from its Laplace transform.

    Uses minus the slope of the upper envelope of ``log|L(s)|`` over the
    last third of the samples. The envelope is the set of local maxima
    when ``|L|`` oscillates, otherwise every sample.
    """
    s = np.asarray(s, dtype=float)
    L = np.asarray(L, dtype=complex)
    if s.ndim != 1 or s.shape != L.shape:
        raise ValueError("s and L must be one-dimensional and of equal length")
    if s.size < min_samples:
        raise ValueError(f"need at least {min_samples} samples, got {s.size}")
    if np.any(np.diff(s) <= 0) or s[0] <= 0:
        raise ValueError("s must be positive and strictly increasing")
    start = (2 * s.size) // 3
    ss, mod = s[start:], np.abs(L[start:])
    if np.any(mod <= 0):
        raise FitError("|L| vanishes inside the estimation window")
    lm = np.log(mod)
    peaks = np.flatnonzero((lm[1:-1] > lm[:-2]) & (lm[1:-1] >= lm[2:])) + 1
    idx = peaks if peaks.size >= 3 else (np.arange(ss.size) if peaks.size == 0 else peaks)
    if idx.size < 3:
        raise FitError(f"oscillation too severe: only {idx.size} envelope points")
    slope = np.polyfit(ss[idx], lm[idx], 1)[0]
    return SupportEstimate(float(-slope), int(idx.size), (float(ss[0]), float(ss[-1])))
