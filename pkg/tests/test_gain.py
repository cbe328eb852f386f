import math
from fractions import Fraction as F

import numpy as np
import pytest
from hypothesis import given, strategies as st

from hardylab.exceptions import GainOverflowError
from hardylab.gain import (GainState, companion_matrix, companion_vector, gain_f,
                           gain_first_exact, gain_spectrum, gain_table_csv, initial_state,
                           iterate_gain, limit_gain, sandwich_check, step_gain)


def test_depth1_first_stage():
    s = step_gain(initial_state(1), "original")
    assert s.theta == (F(3, 4), F(5, 8)) and s.stage == 1


def test_depth2_auxiliary_first_stage():
    assert step_gain(initial_state(2), "auxiliary").theta == (F(3, 4), F(1, 2), F(1, 2))


@pytest.mark.parametrize("k", [0, 1, 2, 5])
@pytest.mark.parametrize("variant", ["original", "auxiliary"])
def test_fixed_point_is_stationary(k, variant):
    g = limit_gain(k).values
    assert step_gain(GainState(k, 7, g), variant).theta == g


def test_bad_variant():
    with pytest.raises(ValueError):
        step_gain(initial_state(1), "gauss")


def test_depth1_closed_forms():
    for s in iterate_gain(1, 60):
        q = F(1, 4 ** s.stage)
        assert s.theta == (F(5, 6) - q / 3, F(2, 3) - q / 6)


def test_depth2_limits():
    last = iterate_gain(2, 60)[-1].floats()
    np.testing.assert_allclose(last, [7 / 8, 3 / 4, 5 / 8], atol=1e-12, rtol=0)


def test_overflow_guard():
    with pytest.raises(GainOverflowError):
        iterate_gain(3, 400, max_bits=64)


def test_negative_arguments():
    with pytest.raises(ValueError):
        iterate_gain(-1, 3)
    with pytest.raises(ValueError):
        iterate_gain(1, -3)


@pytest.mark.parametrize("k,expected", [(1, [0.5, -0.5]), (2, [math.sqrt(2) / 2, 0, -math.sqrt(2) / 2])])
def test_spectrum_examples(k, expected):
    np.testing.assert_allclose(gain_spectrum(k).eigenvalues, expected, atol=1e-15)


@pytest.mark.parametrize("k", [0, 1, 3, 10, 50])
def test_spectrum_properties(k):
    sp = gain_spectrum(k)
    assert sp.residuals().max() < 1e-12
    assert np.abs(sp.eigenvalues).max() == pytest.approx(math.cos(math.pi / (k + 2)), abs=1e-15)
    gram = sp.eigenvectors @ sp.eigenvectors.T
    np.testing.assert_allclose(gram, sp.alpha ** 2 * np.eye(k + 1), atol=1e-12)


def test_companion_system():
    assert companion_vector(0) == [F(3, 4)]
    assert companion_vector(3) == [F(1, 2), 0, 0, F(1, 4)]
    A = companion_matrix(2)
    assert A == [[0, F(1, 2), 0], [F(1, 2), 0, F(1, 2)], [0, F(1, 2), 0]]


@pytest.mark.parametrize("k,expected", [(0, F(3, 4)), (1, F(5, 6)), (2, F(7, 8)), (10, F(23, 24))])
def test_limit_examples(k, expected):
    assert limit_gain(k).values[0] == expected
    assert abs(limit_gain(k, "spectral").values[0] - float(expected)) < 1e-12
    assert gain_f(k) == pytest.approx(float(expected), abs=1e-12)


def test_limit_depth2_vector():
    assert limit_gain(2).values == (F(7, 8), F(3, 4), F(5, 8))


def test_limit_bad_method():
    with pytest.raises(ValueError):
        limit_gain(2, "guess")


@pytest.mark.parametrize("k", [0, 1, 4, 17])
def test_limit_shape(k):
    g = limit_gain(k).values
    assert all(F(1, 2) < v < 1 for v in g)
    assert all(a > b for a, b in zip(g, g[1:]))


def test_depth_monotone_to_one():
    g = [gain_f(k) for k in range(0, 1001)]
    assert all(b > a for a, b in zip(g, g[1:]))
    assert 1 - g[-1] < 1e-3
    assert abs(g[-1] - 2003 / 2004) < 1e-9


def test_sandwich_trivial_cases():
    rep = sandwich_check(0, 50)
    assert rep.holds and rep.first_violation is None
    traj = iterate_gain(1, 2, "auxiliary")
    assert traj[1].theta[0] == F(3, 4) == iterate_gain(1, 1)[1].theta[0] <= traj[2].theta[0]


def test_sandwich_upper_counterexample():
    # orig(1, 2) = 2/3 - 1/96 = 21/32 exceeds aux(1, 3) = 5/8
    orig = iterate_gain(1, 2)[2].theta[1]
    aux = iterate_gain(1, 3, "auxiliary")[3].theta[1]
    assert orig == F(21, 32) and aux == F(5, 8)
    rep = sandwich_check(1, 10)
    assert not rep.holds and rep.first_violation == (1, 2)
    assert rep.lower_holds and rep.limit_bound_holds


@pytest.mark.parametrize("k", range(0, 11))
def test_sandwich_lower_and_limit_bound(k):
    rep = sandwich_check(k, 200)
    assert rep.lower_holds and rep.limit_bound_holds


def test_gain_table_csv():
    lines = gain_table_csv(iterate_gain(1, 2)).splitlines()
    assert lines[0] == "stage,theta_0,theta_1,theta_0_float,theta_1_float"
    assert lines[2] == "1,3/4,5/8,0.75,0.625"


@given(st.integers(0, 10), st.sampled_from(["original", "auxiliary"]))
def test_trajectory_monotone_and_bounded(k, variant):
    traj = iterate_gain(k, 60, variant)
    for a, b in zip(traj, traj[1:]):
        assert all(y >= x for x, y in zip(a.theta, b.theta))
    assert all(F(1, 2) <= t < 1 for s in traj for t in s.theta)


@given(st.integers(0, 10))
def test_original_nonincreasing_in_row(k):
    for s in iterate_gain(k, 40)[1:]:
        assert all(a >= b for a, b in zip(s.theta, s.theta[1:]))


@given(st.integers(0, 10), st.sampled_from(["original", "auxiliary"]))
def test_convergence_rate(k, variant):
    rho = math.cos(math.pi / (k + 2))
    g = gain_first_exact(k)
    for s in iterate_gain(k, 200, variant):
        assert abs(float(s.theta[0] - g)) <= rho ** s.stage + 1e-15


@given(st.integers(0, 50))
def test_two_method_agreement(k):
    exact = limit_gain(k).floats()
    assert np.abs(exact - np.array(limit_gain(k, "spectral").values)).max() < 1e-12
    assert limit_gain(k).values[0] == gain_first_exact(k)
