import numpy as np
import pytest

from sqgvar import ConfigurationError, DomainError, PreconditionError, make_grid
from sqgvar.fields import gaussian_bump, single_mode
from sqgvar.regularity import MultiIndex, gaussian_lp_norm, regularity_report, scaling_check
from sqgvar.solver import SolverConfig, picard_solve
from sqgvar.spectral import spectral_derivative


def test_multi_index():
    b = MultiIndex.parse("(1,1)")
    assert b.total == 2 and str(b) == "(1,1)"
    assert [str(g) for g in b.up_to_total()] == ["(0,0)", "(1,0)", "(0,1)", "(2,0)", "(1,1)", "(0,2)"]
    assert len(b.below()) == 4
    with pytest.raises(ConfigurationError):
        MultiIndex.parse("2,2")
    with pytest.raises(ConfigurationError):
        MultiIndex.parse("a,b")
    with pytest.raises(ConfigurationError):
        MultiIndex(-1, 0)


def test_zero_run_has_zero_entries(grid32):
    cfg = SolverConfig(grid32, n_time=8)
    run = picard_solve(single_mode(grid32, 1, 0) * 0.0, None, cfg)
    rep = regularity_report(run, MultiIndex(1, 1))
    assert rep.passed()
    assert all(e.direct_norm == 0 and e.eta == 0 for e in rep.entries)


def test_unconverged_run_rejected(grid32):
    cfg = SolverConfig(grid32, n_time=8, picard_max_iter=1)
    run = picard_solve(single_mode(grid32, 1, 1), None, cfg)
    assert not run.converged
    with pytest.raises(PreconditionError):
        regularity_report(run, MultiIndex(1, 0))


def test_small_run_regularity(small_run64):
    rep = regularity_report(small_run64, MultiIndex(1, 1))
    assert len(rep.entries) == 6
    assert rep.max_distance <= 1e-5
    assert all(e.finite and e.within_bound for e in rep.entries)


def test_linear_regime_matches_linear_part(grid64):
    # tiny data: the solution is the linear part to O(eps^2)
    eps = 1e-6
    cfg = SolverConfig(grid64, n_time=16, p_bar_family="logdecay:base=6,amp=1")
    run = picard_solve(single_mode(grid64, 1, 1) * eps + single_mode(grid64, 1, -2, "cos") * eps, None, cfg)
    rep = regularity_report(run, MultiIndex(1, 1))
    for e in rep.entries:
        assert e.direct_norm == pytest.approx(e.eta, rel=0.05)


def test_leibniz_on_product(grid64):
    f, g = single_mode(grid64, 1, 2), single_mode(grid64, 2, -1, "cos")
    lhs = spectral_derivative(f * g, (1, 0)).values
    rhs = (spectral_derivative(f, (1, 0)) * g + f * spectral_derivative(g, (1, 0))).values
    assert np.max(np.abs(lhs - rhs)) <= 1e-10


def test_gaussian_lp_norm_formula():
    assert gaussian_lp_norm(2.0, 0.5, 2.0) == pytest.approx(2.0 * np.sqrt(np.pi * 0.25))


def _bump(n, width=0.2):
    return gaussian_bump(make_grid(n), width)


def test_scaling_identity_at_lambda_one():
    rep = scaling_check(_bump(64), 1, 1.5)
    assert rep.critical_ratio == pytest.approx(1.0, abs=1e-14)
    assert rep.contrast_ratio == pytest.approx(1.0, abs=1e-14)
    assert rep.passed()


def test_scaling_lambda_two():
    rep = scaling_check(_bump(128), 2, 1.5)
    assert rep.critical_error <= 0.01
    assert rep.contrast_expected == pytest.approx(2**-0.5)
    assert rep.contrast_error <= 0.01


def test_scaling_rejections():
    f = _bump(64)
    with pytest.raises(DomainError):
        scaling_check(f, 1.5, 1.5)
    with pytest.raises(DomainError):
        scaling_check(f, 2, 1.0)
    with pytest.raises(DomainError):
        scaling_check(f, 2, 1.01)
    with pytest.raises(PreconditionError):
        scaling_check(gaussian_bump(make_grid(64), 1.5), 2, 1.5)
