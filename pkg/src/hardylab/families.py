"""Laplace-type and chirped Gaussian superpositions driven by atomic measures.

A Laplace family is ``phi(x) = sum_j w_j exp(-pi t_j x^2)``; a chirp family
is ``phi(x) = sum_j w_j exp(-pi (r_j + i sqrt(1 - r_j^2)) x^2)``. Both are
finite sums of complex Gaussians, so values, derivatives, Fourier and
fractional Fourier images and weighted norms all have closed forms.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .decay import class_membership, fit_gaussian_decay, laplace_support_inf
from .exceptions import FitError
from .fourier import fourier_transform
from .grid import Grid, SampledFunction
from .oscillator import frft_gaussian_closed_form

EXPONENT_TOL = 0.02
# closed-form samples carry no transform noise, so fits may use the whole tail
EXACT_FLOOR = 1e-300
KINDS = ("laplace", "chirp")


@dataclass(frozen=True)
class AtomicMeasure:
    """Finite atomic measure ``sum_j w_j delta_{t_j}`` on ``(0, inf)``."""

    locations: tuple
    weights: tuple

    def __post_init__(self):
        locs = tuple(float(t) for t in self.locations)
        ws = tuple(complex(w) for w in self.weights)
        if len(locs) != len(ws) or not locs:
            raise ValueError("need a nonempty, equal number of locations and weights")
        if any(not (t > 0 and math.isfinite(t)) for t in locs):
            raise ValueError("atom locations must be positive and finite")
        order = sorted(range(len(locs)), key=locs.__getitem__)
        locs = tuple(locs[i] for i in order)
        ws = tuple(ws[i] for i in order)
        if any(b <= a for a, b in zip(locs, locs[1:])):
            raise ValueError("atom locations must be distinct")
        object.__setattr__(self, "locations", locs)
        object.__setattr__(self, "weights", ws)

    @classmethod
    def from_pairs(cls, pairs) -> "AtomicMeasure":
        pairs = list(pairs)
        return cls(tuple(p[0] for p in pairs), tuple(p[1] for p in pairs))

    @property
    def support_min(self) -> float:
        return self.locations[0]

    @property
    def support_max(self) -> float:
        return self.locations[-1]

    @property
    def total_variation(self) -> float:
        return float(sum(abs(w) for w in self.weights))

    def laplace(self, s) -> np.ndarray:
        """``L mu(s) = sum_j w_j exp(-t_j s)``."""
        s = np.asarray(s, dtype=float)
        return sum(w * np.exp(-t * s) for t, w in zip(self.locations, self.weights))


@dataclass(frozen=True)
class CircleMeasure:
    """Atoms at ``exp(i theta_j)`` on the open right half of the unit circle."""

    angles: tuple
    weights: tuple

    def __post_init__(self):
        if len(self.angles) != len(self.weights) or not self.angles:
            raise ValueError("need a nonempty, equal number of angles and weights")
        if any(not -math.pi / 2 < th < math.pi / 2 for th in self.angles):
            raise ValueError("circle atoms must have positive real part")

    @property
    def points(self) -> np.ndarray:
        return np.exp(1j * np.asarray(self.angles))

    @property
    def total_variation(self) -> float:
        return float(sum(abs(w) for w in self.weights))

    @property
    def min_real_part(self) -> float:
        return float(self.points.real.min())

    def laplace(self, s) -> np.ndarray:
        """``L nu(s) = sum_j w_j exp(-z_j s)``."""
        s = np.asarray(s, dtype=float)
        return sum(w * np.exp(-z * s) for z, w in zip(self.points, self.weights))


def pushforward_circle(measure: AtomicMeasure) -> CircleMeasure:
    """Push atoms ``r`` in ``(0, 1)`` to ``r + i sqrt(1 - r^2)``, i.e. angle ``arccos r``."""
    if measure.support_min <= 0 or measure.support_max >= 1:
        raise ValueError("pushforward needs all atom locations in (0, 1)")
    return CircleMeasure(tuple(math.acos(r) for r in measure.locations), measure.weights)


def chirp_parameter(r: float, conjugate: bool = False) -> complex:
    lam = complex(r, math.sqrt(1 - r * r))
    return lam.conjugate() if conjugate else lam


def _hermite_phys(n: int, y: np.ndarray) -> np.ndarray:
    h0 = np.ones_like(y)
    if n == 0:
        return h0
    h1 = 2 * y
    for m in range(1, n):
        h0, h1 = h1, 2 * y * h1 - 2 * m * h0
    return h1


@dataclass(frozen=True)
class GaussianSum:
    """``x -> sum_j weights_j exp(-pi lams_j x^2)`` with ``Re lams_j > 0``."""

    lams: np.ndarray
    weights: np.ndarray

    def __post_init__(self):
        lams = np.asarray(self.lams, dtype=complex)
        ws = np.asarray(self.weights, dtype=complex)
        if lams.shape != ws.shape or lams.ndim != 1:
            raise ValueError("lams and weights must be matching 1-d arrays")
        if np.any(lams.real <= 0):
            raise ValueError("every Gaussian needs a positive real exponent")
        object.__setattr__(self, "lams", lams)
        object.__setattr__(self, "weights", ws)

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.exp(-math.pi * np.multiply.outer(x * x, self.lams)) @ self.weights

    def sample(self, grid: Grid) -> SampledFunction:
        return SampledFunction(grid, self(grid.points))

    def derivative(self, k: int, x) -> np.ndarray:
        """Exact ``D^k``: ``D^k e^{-c x^2} = (-sqrt c)^k H_k(sqrt c x) e^{-c x^2}``."""
        x = np.asarray(x, dtype=float)
        out = np.zeros(x.shape, dtype=complex)
        for lam, w in zip(self.lams, self.weights):
            rc = np.sqrt(math.pi * lam)
            out += w * (-rc) ** k * _hermite_phys(k, rc * x) * np.exp(-math.pi * lam * x * x)
        return out

    def fourier(self) -> "GaussianSum":
        return GaussianSum(1 / self.lams, self.weights / np.sqrt(self.lams))

    def frft(self, beta: float) -> "GaussianSum":
        """Closed-form fractional Fourier image (exact identity/reflection at multiples of pi)."""
        if abs(math.sin(beta)) <= 1e-6:
            return self
        lams, ws = [], []
        for lam, w in zip(self.lams, self.weights):
            p = frft_gaussian_closed_form(lam, beta)
            lams.append(p.exponent)
            ws.append(w * p.amplitude)
        return GaussianSum(np.array(lams), np.array(ws))

    def weighted_norm(self, a: float) -> float:
        """Exact ``(int |phi|^2 e^{2 a pi x^2})^(1/2)``; ``inf`` unless every ``Re lam > a``."""
        if np.any(self.lams.real <= a):
            return math.inf
        s = self.lams[:, None] + np.conj(self.lams)[None, :] - 2 * a
        val = np.sum(self.weights[:, None] * np.conj(self.weights)[None, :] / np.sqrt(s))
        return float(math.sqrt(max(val.real, 0.0)))

    def l2_norm(self) -> float:
        s = self.lams[:, None] + np.conj(self.lams)[None, :]
        val = np.sum(self.weights[:, None] * np.conj(self.weights)[None, :] / np.sqrt(s))
        return float(math.sqrt(max(val.real, 0.0)))

    def decay_exponent(self) -> float:
        """Pointwise Gaussian decay rate: the smallest real exponent carrying weight."""
        live = self.weights != 0
        return float(self.lams.real[live].min()) if live.any() else math.inf

    def modulus_profile(self, s) -> np.ndarray:
        """``sum_j w_j exp(-lam_j s)``, the profile ``phi(x)`` as a function of ``s = pi x^2``."""
        s = np.asarray(s, dtype=float)
        return np.exp(-np.multiply.outer(s, self.lams)) @ self.weights


@dataclass(frozen=True)
class GaussianFamily:
    """Laplace or chirp superposition driven by an :class:`AtomicMeasure`.

    ``conjugate`` flips the sign of the imaginary exponent part of chirp
    atoms; Fourier images of chirp families carry it.
    """

    kind: str
    measure: AtomicMeasure
    conjugate: bool = field(default=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"kind must be one of {KINDS}, got {self.kind!r}")
        if self.kind == "chirp" and (self.measure.support_min <= 0 or self.measure.support_max >= 1):
            raise ValueError("chirp atoms must lie in (0, 1)")

    def to_sum(self) -> GaussianSum:
        m = self.measure
        if self.kind == "laplace":
            lams = np.array(m.locations, dtype=complex)
        else:
            lams = np.array([chirp_parameter(r, self.conjugate) for r in m.locations])
        return GaussianSum(lams, np.array(m.weights))

    def __call__(self, x) -> np.ndarray:
        return self.to_sum()(x)

    def to_dict(self) -> dict:
        d = {"kind": self.kind,
             "atoms": [{"location": t, "weight_re": w.real, "weight_im": w.imag}
                       for t, w in zip(self.measure.locations, self.measure.weights)]}
        if self.conjugate:
            d["conjugate"] = True
        return d

    @classmethod
    def from_dict(cls, d: dict) -> "GaussianFamily":
        try:
            atoms = d["atoms"]
            measure = AtomicMeasure(
                tuple(float(at["location"]) for at in atoms),
                tuple(complex(float(at.get("weight_re", 0.0)), float(at.get("weight_im", 0.0)))
                      for at in atoms))
            return cls(str(d["kind"]), measure, bool(d.get("conjugate", False)))
        except (KeyError, TypeError) as exc:
            raise ValueError(f"malformed family record: {exc}") from None


def laplace_family(pairs) -> GaussianFamily:
    return GaussianFamily("laplace", AtomicMeasure.from_pairs(pairs))


def chirp_family(pairs) -> GaussianFamily:
    return GaussianFamily("chirp", AtomicMeasure.from_pairs(pairs))


def family_eval(fam: GaussianFamily, grid: Grid) -> SampledFunction:
    """Exact samples of the family on ``grid``."""
    return fam.to_sum().sample(grid)


def fourier_family(fam: GaussianFamily) -> GaussianFamily:
    """Closed-form Fourier image.

    Laplace atoms move ``t -> 1/t`` with weight ``w t^(-1/2)``. Chirp atoms
    keep ``r`` and conjugate the exponent, with weight
    ``w (r + i sqrt(1 - r^2))^(-1/2)`` (or its conjugate-parameter analogue).
    """
    m = fam.measure
    if fam.kind == "laplace":
        pairs = [(1 / t, w / math.sqrt(t)) for t, w in zip(m.locations, m.weights)]
        return laplace_family(pairs)
    ws = [w / np.sqrt(chirp_parameter(r, fam.conjugate)) for r, w in zip(m.locations, m.weights)]
    return GaussianFamily("chirp", AtomicMeasure(m.locations, tuple(ws)), not fam.conjugate)


def family_derivative(fam: GaussianFamily, k: int, grid: Grid) -> SampledFunction:
    return SampledFunction(grid, fam.to_sum().derivative(k, grid.points))


def load_families(path) -> list[GaussianFamily]:
    """Read a JSON list of ``{kind, atoms: [{location, weight_re, weight_im}]}``."""
    try:
        data = json.loads(Path(path).read_text())
    except OSError as exc:
        raise ValueError(f"cannot read family file {path}: {exc.strerror}") from None
    except json.JSONDecodeError as exc:
        raise ValueError(f"family file {path} is not valid JSON: {exc.msg} (line {exc.lineno})") from None
    if isinstance(data, dict):
        data = [data]
    if not isinstance(data, list) or not data:
        raise ValueError(f"family file {path} must hold a nonempty JSON list")
    return [GaussianFamily.from_dict(d) for d in data]


def save_families(families, path=None) -> str:
    text = json.dumps([f.to_dict() for f in families], indent=2, sort_keys=True) + "\n"
    if path is not None:
        Path(path).write_text(text)
    return text


@dataclass(frozen=True)
class AngleCheck:
    beta: float
    b_hat: float | None
    exact_exponent: float
    meets_level: bool
    strict_excess: bool
    at_quarter_turn: bool


@dataclass
class TheoremReport:
    """End-to-end check of the sharp pointwise conclusions for one family."""

    kind: str
    a: float
    in_E2: bool
    in_Einf: bool
    support: tuple
    b_hat_f: float | None
    b_hat_fhat: float | None
    exact_exponent_f: float
    exact_exponent_fhat: float
    pointwise_ok: bool | None
    support_estimate: float | None
    alpha: float
    target: float
    angles: list = field(default_factory=list)
    tolerance: float = EXPONENT_TOL
    messages: list = field(default_factory=list)

    @property
    def angles_ok(self) -> bool:
        return all(c.meets_level for c in self.angles)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind, "a": self.a, "in_E2": self.in_E2, "in_Einf": self.in_Einf,
            "support": list(self.support), "b_hat_f": self.b_hat_f, "b_hat_fhat": self.b_hat_fhat,
            "exact_exponent_f": self.exact_exponent_f, "exact_exponent_fhat": self.exact_exponent_fhat,
            "pointwise_ok": self.pointwise_ok, "support_estimate": self.support_estimate,
            "alpha": self.alpha, "target": self.target, "tolerance": self.tolerance,
            "angles_ok": self.angles_ok,
            "angles": [c.__dict__ for c in self.angles],
            "messages": list(self.messages),
        }


def _fit_or_none(f: SampledFunction, messages: list, label: str):
    try:
        return fit_gaussian_decay(f, floor=EXACT_FLOOR).b_hat
    except FitError as exc:
        messages.append(f"{label}: {exc}")
        return None


def _is_quarter_turn(beta: float) -> bool:
    m = beta / (math.pi / 2)
    return abs(m - round(m)) < 1e-9


def theorem_check(fam: GaussianFamily, a: float, betas=(), grid: Grid | None = None,
                  jobs: int = 1) -> TheoremReport:
    """Numerically check the sharp decay conclusions for ``fam`` at level ``a``.

    The report holds (i) weighted-class membership of ``phi`` at level
    ``a``; (ii) fitted decay exponents of ``phi`` and ``phi^`` with the
    check ``b_hat >= a - 0.02`` when (i) holds; (iii) for each angle, the
    fitted exponent of ``|F_beta phi|`` against ``tanh(alpha)`` where
    ``a = tanh(2 alpha)``, and whether it strictly exceeds that level
    away from quarter turns.
    """
    if not 0 < a < 1:
        raise ValueError(f"a must lie in (0, 1), got {a!r}")
    grid = grid or Grid.from_extent()
    gs = fam.to_sum()
    ghat = gs.fourier()
    f = gs.sample(grid)
    fh = ghat.sample(grid)
    messages: list = []
    mem = class_membership(f, a, fhat=fh)
    bf = _fit_or_none(f, messages, "phi")
    bh = _fit_or_none(fh, messages, "fourier image")
    pointwise = None
    if mem.in_E2:
        pointwise = all(b is not None and b >= a - EXPONENT_TOL for b in (bf, bh))
    support = None
    if fam.kind == "laplace":
        s = np.linspace(1.0, 60.0, 600)
        try:
            support = laplace_support_inf(s, fam.measure.laplace(s)).c0_hat
        except (FitError, ValueError) as exc:
            messages.append(f"support estimate: {exc}")
    alpha = 0.5 * math.atanh(a)
    target = math.tanh(alpha)

    def one(beta):
        img = gs.frft(beta)
        b = _fit_or_none(img.sample(grid), messages, f"beta={beta:.6g}")
        exact = img.decay_exponent()
        quarter = _is_quarter_turn(beta)
        return AngleCheck(float(beta), b, exact,
                          b is not None and b >= target - EXPONENT_TOL,
                          b is not None and b > target + EXPONENT_TOL,
                          quarter)

    betas = list(betas)
    if jobs > 1 and len(betas) > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            angles = list(pool.map(one, betas))
    else:
        angles = [one(b) for b in betas]
    return TheoremReport(fam.kind, a, mem.in_E2, mem.in_Einf,
                         (fam.measure.support_min, fam.measure.support_max), bf, bh,
                         gs.decay_exponent(), ghat.decay_exponent(), pointwise, support,
                         alpha, target, angles, EXPONENT_TOL, messages)


def numeric_fourier_mismatch(fam: GaussianFamily, grid: Grid) -> float:
    """L2 distance between the closed-form and the sampled Fourier images."""
    num = fourier_transform(family_eval(fam, grid))
    exact = family_eval(fourier_family(fam), num.grid)
    return (num - exact).norm()

