import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqgvar import ConfigurationError, DomainError, ScalarField, ShapeError, make_grid
from sqgvar.fields import build_field, gaussian_bump, random_bandlimited, single_mode
from sqgvar.grid import Grid2D, from_spectral, to_spectral
from sqgvar.spectral import (
    divergence,
    fractional_laplacian,
    gradient,
    nonlinear_term,
    riesz_transform,
    spectral_derivative,
    spectral_divergence_max,
    velocity_from_theta,
)


@pytest.mark.parametrize("n", [0, 6, 12, 100])
def test_grid_rejects_bad_sizes(n):
    with pytest.raises(ConfigurationError):
        Grid2D(n)


def test_grid_rejects_bad_side():
    with pytest.raises(ConfigurationError):
        Grid2D(16, -1.0)


def test_grid_geometry(grid32):
    assert grid32.spacing == pytest.approx(2 * np.pi / 32)
    assert grid32.area == pytest.approx(4 * np.pi**2)
    x1, x2 = grid32.mesh
    assert x1[1, 0] > x1[0, 0] and x2[0, 1] > x2[0, 0]


def test_scalar_field_validation(grid32):
    with pytest.raises(ShapeError):
        ScalarField(grid32, np.zeros((16, 16)))
    bad = np.zeros(grid32.shape)
    bad[0, 0] = np.nan
    with pytest.raises(ValueError):
        ScalarField(grid32, bad)
    with pytest.raises(DomainError):
        ScalarField(grid32, np.ones(grid32.shape), mean_zero=True)


def test_cos_mode_coefficients(grid32):
    F = to_spectral(single_mode(grid32, 3, 0, "cos"))
    assert abs(F.mode(3, 0)) == pytest.approx(0.5)
    assert abs(F.mode(-3, 0)) == pytest.approx(0.5)
    assert F.hermitian_defect() < 1e-15


@given(seed=st.integers(0, 2**31 - 1))
def test_transform_round_trip(seed):
    grid = make_grid(32)
    f = ScalarField(grid, np.random.default_rng(seed).standard_normal(grid.shape))
    back = from_spectral(to_spectral(f))
    assert np.max(np.abs(back.values - f.values)) <= 1e-13 * f.max_abs


def test_riesz_identity_on_band_limited(grid64):
    f = random_bandlimited(grid64, seed=3, band=12)
    total = riesz_transform(riesz_transform(f, 1), 1).values + riesz_transform(riesz_transform(f, 2), 2).values
    assert np.max(np.abs(total + f.values)) <= 1e-12 * f.max_abs


def test_riesz_needs_mean_zero(grid32):
    with pytest.raises(DomainError):
        riesz_transform(ScalarField(grid32, np.ones(grid32.shape)), 1)


def test_velocity_divergence_free(grid64):
    theta = random_bandlimited(grid64, seed=5, band=20)
    u = velocity_from_theta(theta)
    assert spectral_divergence_max(u) <= 1e-15 * theta.max_abs
    assert np.max(np.abs(divergence(u).values)) <= 1e-12 * theta.max_abs


def test_fractional_laplacian_on_mode(grid32):
    f = single_mode(grid32, 2, 1)
    out = fractional_laplacian(f, 1.5)
    assert np.allclose(out.values, 5**0.75 * f.values, atol=1e-12)
    back = fractional_laplacian(out, -1.5)
    assert np.allclose(back.values, f.values, atol=1e-12)
    with pytest.raises(DomainError):
        fractional_laplacian(f, -2.0)


@pytest.mark.parametrize(
    "orders, kind, expect",
    [((1, 0), "sin", lambda x1, x2: np.cos(x1)), ((0, 0), "sin", lambda x1, x2: np.sin(x1))],
)
def test_spectral_derivative_examples(grid32, orders, kind, expect):
    out = spectral_derivative(single_mode(grid32, 1, 0, kind), orders)
    x1, x2 = grid32.mesh
    assert np.allclose(out.values, expect(x1, x2), atol=1e-13)


def test_second_derivative_of_cos3(grid32):
    out = spectral_derivative(single_mode(grid32, 3, 0, "cos"), (2, 0))
    x1, _ = grid32.mesh
    assert np.allclose(out.values, -9 * np.cos(3 * x1), atol=1e-12)


def test_gradient_of_mode(grid32):
    g1, g2 = gradient(single_mode(grid32, 1, 2))
    x1, x2 = grid32.mesh
    assert np.allclose(g1.values, np.cos(x1 + 2 * x2), atol=1e-13)
    assert np.allclose(g2.values, 2 * np.cos(x1 + 2 * x2), atol=1e-13)


def test_nonlinear_term_vanishes_on_a_single_shell(grid32):
    theta = single_mode(grid32, 1, 2) + single_mode(grid32, 2, 1, "cos")
    u = velocity_from_theta(theta)
    assert np.max(np.abs(nonlinear_term(u, theta).values)) < 1e-12


def test_dealiasing_removes_aliased_content(grid32):
    # K = 10: sin(8 x2) * d2 sin(9 x2) carries mode 17, which aliases to -15 without the mask
    u = (ScalarField.zeros(grid32), single_mode(grid32, 0, 8))
    b = single_mode(grid32, 0, 9)
    raw = to_spectral(nonlinear_term(u, b, dealias=False))
    clean = to_spectral(nonlinear_term(u, b, dealias=True))
    assert abs(raw.mode(0, 15)) > 1
    assert abs(clean.mode(0, 15)) < 1e-14
    assert abs(clean.mode(0, 1)) == pytest.approx(abs(raw.mode(0, 1)))


def test_build_field_sum(grid32):
    f = build_field("single_mode:k1=1,k2=0,kind=sin + gaussian_bump:width=0.5", grid32, amplitude=2)
    ref = 2 * (single_mode(grid32, 1, 0).values + gaussian_bump(grid32, 0.5).values)
    assert np.allclose(f.values, ref)
    with pytest.raises(ConfigurationError):
        build_field("nosuch:k=1", grid32)
    with pytest.raises(ConfigurationError):
        build_field("single_mode:kind=tan", grid32)


def test_random_bandlimited_is_reproducible(grid32):
    a = random_bandlimited(grid32, seed=9, band=5)
    b = random_bandlimited(grid32, seed=9, band=5)
    assert np.array_equal(a.values, b.values)
    assert a.is_mean_zero() and a.max_abs == pytest.approx(1.0)
