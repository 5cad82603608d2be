import numpy as np
import pytest

from sqgvar import ConfigurationError, make_grid
from sqgvar.estimates import EstimateScenario, _fit_constant, estimate_suite
from sqgvar.fields import single_mode
from sqgvar.lab import estimate_family
from sqgvar.solver import SolverConfig


@pytest.fixture(scope="module")
def cfg():
    return SolverConfig(make_grid(32), n_time=12, p_bar_family="logdecay:base=6,amp=1")


def test_fit_constant():
    assert _fit_constant([2, 4, 6], [1, 2, 3]) == pytest.approx(2.0)
    assert np.isnan(_fit_constant([1.0], [0.0]))
    assert _fit_constant([2, np.nan], [1, 1]) == pytest.approx(2.0)


def test_empty_family_rejected(cfg):
    with pytest.raises(ConfigurationError):
        estimate_suite(cfg, [])
    with pytest.raises(ConfigurationError):
        estimate_suite(cfg, estimate_family(cfg.grid), T_values=())


def test_suite_rows_and_constants(cfg):
    rep = estimate_suite(cfg, estimate_family(cfg.grid), T_values=(0.1, 0.2))
    assert len(rep.rows) == 6
    assert all(np.isfinite(r.linear_ratio) and r.linear_ratio > 0 for r in rep.rows)
    assert all(np.isfinite(r.bilinear_ratio) for r in rep.rows)
    forced = [r for r in rep.rows if r.scenario != "modes"]
    assert all(r.forcing_l1 > 0 and r.forcing_lq > 0 for r in forced)
    assert np.isnan(rep.rows[0].forcing_ratio)
    assert 0 < rep.C1 <= rep.C1_max * (1 + 1e-12)
    assert 0 < rep.C2 <= rep.C2_max * (1 + 1e-12)
    assert rep.threshold(cfg) > 0


def test_zero_data_skips_with_note(cfg):
    zero = single_mode(cfg.grid, 1, 0) * 0.0
    rep = estimate_suite(cfg, [EstimateScenario("zero", zero, forcing=zero)], T_values=(0.1,))
    assert any("linear ratio skipped" in n for n in rep.notes)
    assert any("forcing ratio skipped" in n for n in rep.notes)
    assert any("bilinear ratio skipped" in n for n in rep.notes)
    assert np.isnan(rep.C1) and np.isnan(rep.C2)


def test_linear_ratio_bounded_for_single_mode(cfg):
    # ||G_t f||_{L^p} <= ||f||_{L^p}, and the data-norm embedding constant is O(1)
    rep = estimate_suite(cfg, [EstimateScenario("m", single_mode(cfg.grid, 1, 1))], T_values=(0.1, 0.4))
    assert all(r.linear_ratio < 10 for r in rep.rows)
