import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from sqgvar import ConfigurationError, DomainError, make_grid
from sqgvar.fields import gaussian_bump, random_bandlimited, single_mode
from sqgvar.semigroup import (
    DecayProbe,
    apply_semigroup,
    gaussian_gradient_l2_oracle,
    measure_decay_slope,
    self_similar_times,
    semigroup_composition_check,
    semigroup_symbol,
    theoretical_decay_slope,
)
from sqgvar.spectral import derivative_symbol, spectral_derivative


def test_single_mode_decay(grid32):
    f = single_mode(grid32, 2, 1)
    out = apply_semigroup(f, 0.3, 1.5)
    assert np.allclose(out.values, np.exp(-0.3 * 5**0.75) * f.values, atol=1e-14)


def test_zero_time_is_identity(grid32):
    f = random_bandlimited(grid32, seed=1, band=6)
    assert np.allclose(apply_semigroup(f, 0.0, 1.2).values, f.values, atol=1e-15)


def test_symbol_rejects_bad_arguments(grid32):
    with pytest.raises(DomainError):
        semigroup_symbol(grid32, -1.0, 1.5)
    with pytest.raises(DomainError):
        semigroup_symbol(grid32, 1.0, 2.5)
    with pytest.raises(DomainError):
        semigroup_symbol(grid32, 1.0, 1.5, nu=-1)


def test_batched_symbol_matches_scalar(grid32):
    ts = np.array([0.1, 0.2, 0.5])
    batch = semigroup_symbol(grid32, ts, 1.7, nu=0.5)
    for i, t in enumerate(ts):
        assert np.array_equal(batch[i], semigroup_symbol(grid32, t, 1.7, nu=0.5))


@given(t=st.floats(0, 2), s=st.floats(0, 2), alpha=st.floats(0.2, 2))
def test_composition(t, s, alpha):
    grid = make_grid(32)
    f = random_bandlimited(grid, seed=2, band=8)
    assert semigroup_composition_check(f, t, s, alpha) <= 1e-13


def test_derivative_commutes_with_semigroup(grid64):
    f = random_bandlimited(grid64, seed=4, band=12)
    fh = grid64.fft(f.values)
    d = derivative_symbol(grid64, (1, 2))
    g = semigroup_symbol(grid64, 0.1, 1.5)
    one, two = d * (g * fh), g * (d * fh)
    assert np.max(np.abs(one - two)) <= 1e-13 * np.max(np.abs(one))
    a = spectral_derivative(apply_semigroup(f, 0.1, 1.5), (1, 2)).values
    b = apply_semigroup(spectral_derivative(f, (1, 2)), 0.1, 1.5).values
    assert np.max(np.abs(a - b)) <= 1e-12 * np.max(np.abs(a))


def test_theoretical_slope_formula():
    assert theoretical_decay_slope(2, 2, np.inf, 0) == pytest.approx(-0.5)
    assert theoretical_decay_slope(1.5, 2, 2, 1) == pytest.approx(-2 / 3)
    assert theoretical_decay_slope(1.2, 1, 2, 0) == pytest.approx(-(2 / 1.2) * 0.5)


def test_times_span_resolved_scales(grid64):
    t = self_similar_times(grid64, 1.5)
    widths = 2 * np.pi * t ** (1 / 1.5)
    assert widths[0] == pytest.approx(8 * grid64.spacing)
    assert widths[-1] == pytest.approx(grid64.box_side / 8)


def test_probe_validation(grid32):
    with pytest.raises(ConfigurationError):
        DecayProbe(grid32, 1.5, 4, 2)
    with pytest.raises(ConfigurationError):
        DecayProbe(grid32, 1.5, 2, 4, times=(0.1, 0.2))
    with pytest.raises(ConfigurationError):
        DecayProbe(grid32, 1.5, 2, 4, dilate=False)


@pytest.mark.parametrize("alpha", [1.2, 2.0])
def test_heat_slope_on_coarse_grid(grid128, alpha):
    rep = measure_decay_slope(DecayProbe(grid128, alpha, 2, np.inf))
    assert rep.passed
    assert len(rep.per_time_norms) == 6


def test_fixed_field_probe_flat_series_is_degenerate(grid32):
    # the semigroup leaves a constant untouched, so every ratio is the same
    const = gaussian_bump(grid32, 0.5) * 0 + 1.0
    probe = DecayProbe(grid32, 1.5, 2, 2, times=(0.01, 0.02, 0.04, 0.08), dilate=False, test_field=const)
    rep = measure_decay_slope(probe)
    assert rep.degenerate
    assert rep.measured_slope == pytest.approx(0.0, abs=1e-12)
    assert rep.passed


def test_heat_gradient_oracle():
    # alpha = 2, nu = 1, L^2 of the gradient of a heat-evolved Gaussian on a large box
    grid = make_grid(256, box_side=40.0)
    width, t = 1.0, 0.5
    f = gaussian_bump(grid, width)
    mass = float(grid.integrate(f.values))
    out = apply_semigroup(f, t, 2.0, nu=1.0)
    l2 = np.sqrt(grid.integrate(out.values**2))
    assert l2 == pytest.approx(gaussian_gradient_l2_oracle(mass, width, t), rel=1e-8)


@pytest.mark.parametrize("p,q,nu", [(2.0, np.inf, 0.0), (2.0, 4.0, 0.0)])
def test_decay_slope_below_solver_range(p, q, nu):
    grid = make_grid(256)
    rep = measure_decay_slope(DecayProbe(grid, 0.8, p, q, nu))
    assert rep.passed
