"""A-priori bounds on derivatives and moments of functions in the weighted classes.

Every constant is recomputed from its definition:
``C1 = ||(1+|x|)^-1||_2 = sqrt(2)`` and the Gaussian moment norm
``A_j = ||y^j exp(-a pi y^2)||_2`` from the Gamma-function integral.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass

from scipy.special import gammaln

C1 = math.sqrt(2.0)


def moment_norm(j: int, a: float) -> float:
    """``A_j = sqrt(Gamma(j + 1/2) / (2 a pi)^(j + 1/2))``."""
    return math.exp(0.5 * (gammaln(j + 0.5) - (j + 0.5) * math.log(2 * a * math.pi)))


def _pow(base: float, e: float) -> float:
    return 1.0 if e == 0 else base ** e


def sobolev_l2_bound(k: int, a: float, c2fhat: float) -> float:
    """``||D^k f||_2 <= (2 pi)^k (k/(2 pi a))^(k/2) e^(-k/2) C_a(fhat)``."""
    return (2 * math.pi) ** k * _pow(k / (2 * math.pi * a), k / 2) * math.exp(-k / 2) * c2fhat


def deriv_sup_bound(k: int, a: float, c2fhat: float) -> float:
    """``sup |D^k f| <= (2 pi)^k A_k C_a(fhat)``."""
    return (2 * math.pi) ** k * moment_norm(k, a) * c2fhat


def gamma_constant(j: int, a: float) -> float:
    alpha = math.pi ** (-j + 0.5) * 2 * math.pi / math.sqrt(2 * math.pi * a)
    beta = math.pi ** (1 - j) / (a * j)
    return max(alpha, beta)


def deriv_l1_bound(j: int, a: float, c2f: float, c2fhat: float) -> float:
    """Bound on ``||D^j f||_1`` via ``C1 (||D^j f||_2 + ||x D^j f||_2)``.

    At ``j = 0`` the second norm is bounded through ``||D fhat||_2``.
    """
    if j == 0:
        return C1 * (c2fhat + math.exp(-0.5) / math.sqrt(2 * math.pi * a) * c2f)
    tp = 2 * math.pi
    t1 = sobolev_l2_bound(j, a, c2fhat)
    t2 = tp ** (j - 1) * j * _pow((j - 1) / (tp * a), (j - 1) / 2) * math.exp(-(j - 1) / 2) * c2fhat
    t3 = (tp ** (j - 1) * 2 * math.sqrt(j * gamma_constant(j, a)) * (j / a) ** (j / 2)
          * math.exp(-j / 2) * math.sqrt(c2f * c2fhat))
    return C1 * (t1 + t2 + t3)


@dataclass(frozen=True)
class AprioriBounds:
    """Bounds for derivative order ``k`` and moment order ``j``.

    ``implied_M`` is the constant ``M_j`` for which
    ``||D^j f||_1 <= M_j (2 pi)^j j^(j/2) e^(-j/2) a^(-j/2)`` reproduces
    ``deriv_l1``.
    """

    k: int
    j: int
    a: float
    c2f: float
    c2fhat: float
    sobolev_l2: float
    deriv_sup: float
    deriv_l1: float
    moment_sup: float
    implied_M: float

    def to_dict(self) -> dict:
        return asdict(self)


def apriori_bounds(k: int, j: int, a: float, c2f: float, c2fhat: float) -> AprioriBounds:
    """Evaluate the derivative and moment bounds.

    Parameters
    ----------
    k, j : int
        Derivative order for the L2 and sup bounds; moment order for the
        L1 and ``sup |xi^j fhat|`` bounds.
    a : float
        Weight level in ``(0, 1)``.
    c2f, c2fhat : float
        Weighted L2 norms of ``f`` and ``fhat`` at level ``a``.
    """
    if not 0 < a < 1:
        raise ValueError(f"a must lie in (0, 1), got {a!r}")
    if k < 0 or j < 0:
        raise ValueError("orders must be nonnegative")
    l1 = deriv_l1_bound(j, a, c2f, c2fhat)
    scale = (2 * math.pi) ** j * _pow(j, j / 2) * math.exp(-j / 2) * a ** (-j / 2)
    return AprioriBounds(
        k=k, j=j, a=a, c2f=c2f, c2fhat=c2fhat,
        sobolev_l2=sobolev_l2_bound(k, a, c2fhat),
        deriv_sup=deriv_sup_bound(k, a, c2fhat),
        deriv_l1=l1,
        moment_sup=l1 / (2 * math.pi) ** j,
        implied_M=l1 / scale,
    )
