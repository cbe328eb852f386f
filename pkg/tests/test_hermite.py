import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from numpy.polynomial.hermite import hermval

from hardylab.exceptions import GridError, ResolutionError
from hardylab.grid import Grid
from hardylab.hermite import (build_hermite_basis, hermite_functions, hermite_project,
                              hermite_synthesize)

from conftest import gaussian


def _oracle_hermite(n, x):
    # physicists' polynomial in the rescaled variable, normalized in closed form
    u = math.sqrt(2 * math.pi) * x
    c = np.zeros(n + 1)
    c[n] = 1
    norm = (2 * math.pi) ** 0.25 / math.sqrt(2.0 ** n * math.factorial(n) * math.sqrt(math.pi))
    return norm * hermval(u, c) * np.exp(-u * u / 2)


@pytest.fixture(scope="module")
def basis(selfdual):
    return build_hermite_basis(40, selfdual)


def test_h0_closed_form(selfdual):
    x = selfdual.points
    np.testing.assert_allclose(hermite_functions(0, x)[0], 2 ** 0.25 * np.exp(-math.pi * x * x), rtol=0, atol=1e-15)
    # unit norm because int e^{-2 pi x^2} dx = 2^{-1/2}
    h0 = hermite_functions(0, x)[0]
    assert np.sum(h0 * h0) * selfdual.spacing == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("n", [1, 2, 5, 12, 20])
def test_recurrence_matches_closed_form(n):
    x = np.linspace(-3, 3, 201)
    np.testing.assert_allclose(hermite_functions(n, x)[n], _oracle_hermite(n, x), atol=1e-12)


def test_gram_identity(basis):
    assert np.abs(basis.gram()[:6, :6] - np.eye(6)).max() < 1e-8
    assert np.abs(basis.gram() - np.eye(41)).max() < 1e-8


def test_basis_real_valued(basis):
    assert basis.samples.dtype == float


def test_fourier_of_h3_is_i_h3(selfdual, basis):
    from hardylab.fourier import fourier_transform
    fh = fourier_transform(basis.function(3))
    np.testing.assert_allclose(fh.values, 1j * basis.samples[3], atol=1e-12)


def test_underresolved_grid_rejected():
    with pytest.raises(ResolutionError):
        build_hermite_basis(64, Grid.from_extent(256, 3.0))
    with pytest.raises(ResolutionError):
        build_hermite_basis(200, Grid.from_extent(64, 12.0))


def test_project_h2(basis):
    a = hermite_project(basis.function(2), basis).coeffs
    e = np.zeros(41)
    e[2] = 1
    np.testing.assert_allclose(a, e, atol=1e-12)


def test_project_gaussian(selfdual, basis):
    proj = hermite_project(selfdual.sample(gaussian(1)), basis)
    assert proj.coeffs[0] == pytest.approx(2 ** -0.25, abs=1e-12)
    assert np.abs(proj.coeffs[1::2]).max() < 1e-14
    assert proj.residual < 1e-12


def test_parseval_finite_expansion(basis):
    f = basis.function(0).scale(3) + basis.function(5).scale(4)
    assert np.linalg.norm(hermite_project(f, basis).coeffs) == pytest.approx(5, abs=1e-12)


def test_synthesize_unit_vector(basis):
    np.testing.assert_array_equal(hermite_synthesize([1], basis).values, basis.samples[0])


def test_synthesize_h0_plus_i_h1(basis):
    f = hermite_synthesize([1, 1j], basis)
    assert f.norm() == pytest.approx(math.sqrt(2), abs=1e-12)


def test_synthesize_rejects_long_input(basis):
    with pytest.raises(ValueError):
        hermite_synthesize(np.ones(42), basis)


def test_project_grid_mismatch(basis):
    with pytest.raises(GridError):
        hermite_project(Grid.from_extent(512, 16).sample(gaussian(1)), basis)


@given(st.lists(st.complex_numbers(max_magnitude=5, allow_nan=False, allow_infinity=False),
                min_size=1, max_size=41))
def test_project_after_synthesize_is_identity(coeffs):
    basis = build_hermite_basis(40, Grid(1024, 1 / 32))
    a = np.zeros(41, dtype=complex)
    a[: len(coeffs)] = coeffs
    back = hermite_project(hermite_synthesize(a, basis), basis).coeffs
    assert np.abs(back - a).max() < 1e-10 * max(1.0, np.abs(a).max())
