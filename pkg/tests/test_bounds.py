import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from scipy.integrate import quad

from hardylab.bounds import (C1, apriori_bounds, deriv_l1_bound, moment_norm, sobolev_l2_bound)
from hardylab.grid import Grid

from conftest import bound_cases, measured_norms


def test_c1_definition():
    assert C1 ** 2 == pytest.approx(2 * quad(lambda x: (1 + x) ** -2, 0, math.inf)[0], rel=1e-12)


@pytest.mark.parametrize("a", [0.1, 0.5, 0.9])
def test_a0_gaussian_norm(a):
    assert moment_norm(0, a) == pytest.approx((2 * a) ** -0.25, rel=1e-14)


@pytest.mark.parametrize("j", [1, 2, 5, 9])
@pytest.mark.parametrize("a", [0.25, 0.7])
def test_moment_norm_matches_integral(j, a):
    val = 2 * quad(lambda y: y ** (2 * j) * math.exp(-2 * a * math.pi * y * y), 0, math.inf, epsabs=0, epsrel=1e-13)[0]
    assert moment_norm(j, a) == pytest.approx(math.sqrt(val), rel=1e-10)


def test_k0_sobolev_bound_is_c2fhat():
    assert sobolev_l2_bound(0, 0.5, 3.7) == 3.7


def test_k1_sobolev_bound():
    b = apriori_bounds(1, 1, 0.5, 1.0, 2.0)
    assert b.sobolev_l2 == pytest.approx(2 * math.pi * math.pi ** -0.5 * math.exp(-0.5) * 2.0, rel=1e-14)


def test_rejects_bad_level():
    for a in (0.0, 1.0, -0.2):
        with pytest.raises(ValueError):
            apriori_bounds(1, 1, a, 1, 1)
    with pytest.raises(ValueError):
        apriori_bounds(-1, 0, 0.5, 1, 1)


@given(st.integers(0, 12), st.integers(0, 12), st.floats(0.01, 0.99),
       st.floats(1e-3, 1e3), st.floats(1e-3, 1e3))
def test_bounds_positive_finite(k, j, a, c2f, c2fhat):
    b = apriori_bounds(k, j, a, c2f, c2fhat)
    for v in (b.sobolev_l2, b.deriv_sup, b.deriv_l1, b.moment_sup, b.implied_M):
        assert math.isfinite(v) and v > 0


@given(st.integers(0, 8), st.floats(0.05, 0.95))
def test_bounds_scale_with_inputs(j, a):
    # linear in C_a(fhat) when C_a(f) = C_a(fhat)
    one = deriv_l1_bound(j, a, 1.0, 1.0)
    assert deriv_l1_bound(j, a, 3.0, 3.0) == pytest.approx(3 * one, rel=1e-12)


@pytest.fixture(scope="module")
def wide():
    return Grid.from_extent(8192, 24)


@pytest.mark.parametrize("idx", range(8))
def test_bounds_dominate_measured_norms(idx, wide):
    fam, a = bound_cases()[idx]
    gs = fam.to_sum()
    c2f, c2fhat = gs.weighted_norm(a), gs.fourier().weighted_norm(a)
    for k in range(7):
        b = apriori_bounds(k, k, a, c2f, c2fhat)
        m = measured_norms(gs, k, wide)
        lim = (b.sobolev_l2, b.deriv_sup, b.deriv_l1, b.moment_sup)
        assert all(v <= L * (1 + 1e-9) for v, L in zip(m, lim)), (k, m, lim)
