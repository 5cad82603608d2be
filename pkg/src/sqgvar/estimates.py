"""Measured constants of the linear and bilinear a priori estimates.

For each scenario and each horizon ``T`` three ratios are recorded:

* linear:   ``||G_t theta0||_X / (tf(T) ||theta0||_{p_bar})``
* forcing:  ``||int G f||_X / (tf(T) ||f||_{L^1_t L^{p_bar}})``
* bilinear: ``||B(th, th)||_X / ((1 + T) ||th||_X^2)`` on ``th = G_t theta0``

with ``tf(T) = max(T^(1/q^-), T^(1/q^+))``.  The forcing ratio is also
recorded against the ``L^q_t`` norm of the forcing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError
from .grid import ScalarField
from .solver import (
    SolverConfig,
    Trajectory,
    bilinear_B,
    forcing_l1_norm,
    forcing_lq_norm,
    linear_part,
    smallness_threshold,
)
from .varlebesgue.norms import variable_norm

DEFAULT_T_VALUES = (0.1, 0.2, 0.4)


@dataclass(frozen=True, eq=False)
class EstimateScenario:
    """Initial data plus an optional time-independent forcing."""

    name: str
    theta0: ScalarField
    forcing: ScalarField | None = None


@dataclass
class EstimateRow:
    scenario: str
    T: float
    time_factor: float
    linear_ratio: float = float("nan")
    forcing_ratio: float = float("nan")
    forcing_ratio_lq: float = float("nan")
    bilinear_ratio: float = float("nan")
    forcing_l1: float = 0.0
    forcing_lq: float = 0.0


def _fit_constant(num, den) -> float:
    """Least-squares ``C`` in ``num ~ C den``."""
    num, den = np.asarray(num, float), np.asarray(den, float)
    ok = np.isfinite(num) & np.isfinite(den) & (den > 0)
    if not ok.any():
        return float("nan")
    return float(np.dot(num[ok], den[ok]) / np.dot(den[ok], den[ok]))


def _nanmax(values) -> float:
    values = [v for v in values if np.isfinite(v)]
    return max(values) if values else float("nan")


@dataclass
class EstimateReport:
    rows: list
    notes: list = field(default_factory=list)
    fits: dict = field(default_factory=dict)

    def _column(self, name: str) -> list:
        return [getattr(r, name) for r in self.rows]

    @property
    def C1_max(self) -> float:
        return _nanmax(self._column("linear_ratio") + self._column("forcing_ratio"))

    @property
    def C2_max(self) -> float:
        return _nanmax(self._column("bilinear_ratio"))

    @property
    def C1(self) -> float:
        """Largest per-scenario least-squares constant of the two linear estimates."""
        return _nanmax([v for k, v in self.fits.items() if k[1] in ("linear", "forcing")])

    @property
    def C2(self) -> float:
        return _nanmax([v for k, v in self.fits.items() if k[1] == "bilinear"])

    def threshold(self, config: SolverConfig) -> float:
        return smallness_threshold(config, self.C1, self.C2)


def estimate_suite(config: SolverConfig, scenarios, T_values=DEFAULT_T_VALUES) -> EstimateReport:
    """Measure the estimate ratios for every scenario and horizon.

    Scenarios whose data vanish have the affected ratios skipped with a note.
    The least-squares fits take, per scenario, the measured numerators
    against the right-hand-side shapes across ``T_values``.
    """
    scenarios = list(scenarios)
    if not scenarios:
        raise ConfigurationError("the estimate scenario family is empty")
    if not len(T_values):
        raise ConfigurationError("need at least one horizon T")
    rows, notes = [], []
    pairs: dict = {}
    for sc in scenarios:
        for T in T_values:
            cfg = config.with_(T=float(T))
            tf = cfg.time_factor
            row = EstimateRow(sc.name, float(T), tf)
            th0_norm = variable_norm(sc.theta0, cfg.p_bar)
            lin = linear_part(sc.theta0, None, cfg)
            if th0_norm > 0:
                row.linear_ratio = lin.xt_norm() / (tf * th0_norm)
                pairs.setdefault((sc.name, "linear"), []).append((lin.xt_norm(), tf * th0_norm))
            else:
                notes.append(f"{sc.name} T={T:g}: zero initial data, linear ratio skipped")
            if sc.forcing is not None and np.any(sc.forcing.values):
                f = Trajectory.constant(cfg, sc.forcing)
                zero = ScalarField(cfg.grid, np.zeros(cfg.grid.shape), mean_zero=True)
                duhamel = linear_part(zero, f, cfg).xt_norm()
                row.forcing_l1 = forcing_l1_norm(f, cfg)
                row.forcing_lq = forcing_lq_norm(f, cfg)
                row.forcing_ratio = duhamel / (tf * row.forcing_l1)
                row.forcing_ratio_lq = duhamel / (tf * row.forcing_lq)
                pairs.setdefault((sc.name, "forcing"), []).append((duhamel, tf * row.forcing_l1))
            elif sc.forcing is not None:
                notes.append(f"{sc.name} T={T:g}: zero forcing, forcing ratio skipped")
            lin_norm = lin.xt_norm()
            if lin_norm > 0:
                b = bilinear_B(lin, lin, cfg).xt_norm()
                row.bilinear_ratio = b / ((1.0 + T) * lin_norm**2)
                pairs.setdefault((sc.name, "bilinear"), []).append((b, (1.0 + T) * lin_norm**2))
            else:
                notes.append(f"{sc.name} T={T:g}: zero trajectory, bilinear ratio skipped")
            rows.append(row)
    fits = {key: _fit_constant(*zip(*vals)) for key, vals in pairs.items()}
    return EstimateReport(rows, notes, fits)
