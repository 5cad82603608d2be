"""Derivative propagation along converged solutions and critical-scaling diagnostics."""

from __future__ import annotations

from dataclasses import dataclass, field
from math import comb

import numpy as np

from .errors import ConfigurationError, DomainError, PreconditionError
from .grid import Grid2D, ScalarField
from .solver import PicardRun, SolverConfig, Trajectory, _duhamel_hat, linear_part, picard_map, xt_distance
from .spectral import derivative_symbol, flux_divergence_hat, spectral_derivative
from .varlebesgue.norms import classical_lp_norm

MAX_ORDER = 3
BOUND_RTOL = 1e-6
SCALING_MAX_EXPONENT = 64.0

__all__ = [
    "MAX_ORDER",
    "MultiIndex",
    "RegularityEntry",
    "RegularityReport",
    "ScalingReport",
    "gaussian_lp_norm",
    "regularity_report",
    "scaling_check",
    "spectral_derivative",
]


@dataclass(frozen=True, order=True)
class MultiIndex:
    g1: int
    g2: int
    max_total: int = field(default=MAX_ORDER, compare=False, repr=False)

    def __post_init__(self):
        if int(self.g1) != self.g1 or int(self.g2) != self.g2 or self.g1 < 0 or self.g2 < 0:
            raise ConfigurationError(f"multi-index orders must be non-negative integers, got ({self.g1}, {self.g2})")
        if self.total > self.max_total:
            raise ConfigurationError(f"|gamma| = {self.total} exceeds the maximum order {self.max_total}")

    @classmethod
    def parse(cls, text: str, max_total: int = MAX_ORDER) -> "MultiIndex":
        try:
            a, b = (int(s) for s in text.replace("(", "").replace(")", "").split(","))
        except ValueError:
            raise ConfigurationError(f"multi-index must look like 'g1,g2', got {text!r}") from None
        return cls(a, b, max_total)

    @property
    def orders(self) -> tuple:
        return (self.g1, self.g2)

    @property
    def total(self) -> int:
        return self.g1 + self.g2

    def below(self) -> list:
        """All ``mu <= self`` componentwise."""
        return [MultiIndex(a, b, self.max_total) for a in range(self.g1 + 1) for b in range(self.g2 + 1)]

    def up_to_total(self) -> list:
        """All ``gamma`` with ``|gamma| <= |self|``, ordered by total then ``g1``."""
        out = []
        for s in range(self.total + 1):
            out += [MultiIndex(a, s - a, self.max_total) for a in range(s, -1, -1)]
        return out

    def __str__(self):
        return f"({self.g1},{self.g2})"


@dataclass
class RegularityEntry:
    gamma: MultiIndex
    direct_norm: float
    eta: float
    bound: float
    fixed_point_distance: float
    fixed_point_iterations: int

    @property
    def finite(self) -> bool:
        return bool(np.isfinite(self.direct_norm))

    @property
    def within_bound(self) -> bool:
        return self.finite and self.direct_norm <= self.bound


@dataclass
class RegularityReport:
    beta: MultiIndex
    entries: list
    fixed_point_residual: float

    @property
    def max_distance(self) -> float:
        return max(e.fixed_point_distance for e in self.entries)

    def passed(self, distance_tol: float = 1e-5) -> bool:
        return all(e.within_bound for e in self.entries) and self.max_distance <= distance_tol


def _derivative_trajectory(traj: Trajectory, gamma: MultiIndex) -> Trajectory:
    if gamma.total == 0:
        return traj
    grid = traj.grid
    sym = derivative_symbol(grid, gamma.orders)
    return Trajectory(traj.config, grid.ifft(grid.fft(traj.values) * sym))


def _derivative_field(f: ScalarField, gamma: MultiIndex) -> ScalarField:
    return spectral_derivative(f, gamma.orders)


def _solve_derivative_equation(config: SolverConfig, linear_hat: np.ndarray, theta_hat: np.ndarray,
                               lower_hat: np.ndarray, tol: float, max_iter: int):
    """Fixed point ``w = L_gamma - B(w, theta) - B(theta, w) - lower`` on coefficients."""
    grid = config.grid
    target = linear_hat - lower_hat
    w = np.zeros_like(target)
    for k in range(1, max_iter + 1):
        source = flux_divergence_hat(grid, w, theta_hat, config.dealias) + \
            flux_divergence_hat(grid, theta_hat, w, config.dealias)
        new = target - _duhamel_hat(config, source)
        step = float(np.max(np.abs(new - w)))
        scale = max(float(np.max(np.abs(new))), 1e-300)
        w = new
        if step <= tol * scale:
            return w, k
    return w, max_iter


def regularity_report(run: PicardRun, beta: MultiIndex, f: Trajectory | None = None,
                      config: SolverConfig | None = None, tol: float = 1e-13,
                      max_iter: int = 200) -> RegularityReport:
    """Compare ``D^gamma theta`` with the solution of the differentiated fixed-point equation.

    For each ``gamma`` with ``|gamma| <= |beta|`` the differentiated equation

        w = L_gamma - sum_{mu <= gamma} C(gamma, mu) B(W_mu, W_{gamma - mu})

    is solved for ``w = W_gamma`` with ``W_0 = theta`` frozen at the converged
    solution and lower-order ``W`` taken from earlier fixed points.  ``L_gamma``
    is the linear part with data ``(D^gamma theta0, D^gamma f)``; its norm
    ``eta_gamma`` gives the bound ``2 eta_gamma``.
    """
    if not run.converged:
        raise PreconditionError(f"regularity needs a converged Picard run ({run.message})")
    config = run.config if config is None else config
    f = run.forcing if f is None else f
    grid = config.grid
    theta = run.solution
    theta_hat = grid.fft(theta.values)
    solved = {(0, 0): theta_hat}
    residual = xt_distance(theta, picard_map(theta, run.linear, config))
    entries = []
    for gamma in beta.up_to_total():
        d0 = _derivative_field(run.theta0, gamma)
        df = None if f is None else _derivative_trajectory(f, gamma)
        lin = linear_part(d0, df, config)
        eta = lin.xt_norm()
        direct = _derivative_trajectory(theta, gamma)
        direct_norm = direct.xt_norm()
        if gamma.total == 0:
            entries.append(RegularityEntry(gamma, direct_norm, eta, 2 * eta * (1 + BOUND_RTOL), residual, 0))
            continue
        lower = np.zeros_like(theta_hat)
        for mu in gamma.below():
            rest = (gamma.g1 - mu.g1, gamma.g2 - mu.g2)
            if mu.total == 0 or rest == (0, 0):
                continue
            c = comb(gamma.g1, mu.g1) * comb(gamma.g2, mu.g2)
            lower += c * flux_divergence_hat(grid, solved[mu.orders], solved[rest], config.dealias)
        lower_hat = _duhamel_hat(config, lower)
        w_hat, iters = _solve_derivative_equation(config, grid.fft(lin.values), theta_hat, lower_hat, tol, max_iter)
        solved[gamma.orders] = w_hat
        w = Trajectory(config, grid.ifft(w_hat))
        entries.append(RegularityEntry(gamma, direct_norm, eta, 2 * eta * (1 + BOUND_RTOL),
                                       xt_distance(direct, w), iters))
    return RegularityReport(beta, entries, residual)


# --- critical scaling --------------------------------------------------------


def gaussian_lp_norm(amplitude: float, width: float, p: float) -> float:
    """``||A exp(-|x|^2 / (2 s^2))||_p`` on the plane: ``A (2 pi s^2 / p)^(1/p)``."""
    return abs(amplitude) * (2 * np.pi * width**2 / p) ** (1.0 / p)


def _lattice_dilation(values: np.ndarray, lam: int) -> np.ndarray:
    """``g(x_c + y) = f(x_c + lam y)`` on nodes, centred on node ``N/2``, zero off the box."""
    n = values.shape[0]
    c = n // 2
    idx = c + lam * (np.arange(n) - c)
    inside = (idx >= 0) & (idx < n)
    out = np.zeros_like(values)
    sel = np.nonzero(inside)[0]
    out[np.ix_(sel, sel)] = values[np.ix_(idx[sel], idx[sel])]
    return out


@dataclass
class ScalingReport:
    lam: int
    alpha: float
    critical_exponent: float
    critical_ratio: float
    contrast_exponent: float
    contrast_ratio: float
    contrast_expected: float
    boundary_mass: float

    @property
    def critical_error(self) -> float:
        return abs(self.critical_ratio - 1.0)

    @property
    def contrast_error(self) -> float:
        return abs(self.contrast_ratio - self.contrast_expected)

    def passed(self, tol: float = 0.01) -> bool:
        return self.critical_error <= tol and self.contrast_error <= tol


def scaling_check(theta0: ScalarField, lam: int, alpha: float, contrast_p: float = 2.0,
                  mass_tol: float = 1e-8) -> ScalingReport:
    """Norm ratios of ``lam^(alpha-1) theta0(x_c + lam (x - x_c))`` against ``theta0``.

    The dilation is taken about the box centre node and reads the original
    samples at lattice points, so no interpolation enters.  In the critical
    exponent ``2/(alpha-1)`` the continuum ratio is 1; in ``contrast_p`` it is
    ``lam^(alpha - 1 - 2/p)``.  Data must be concentrated away from the
    boundary; ``boundary_mass`` reports the largest value outside the
    central half of the box.
    """
    if int(lam) != lam or lam < 1:
        raise DomainError(f"scaling factor must be a positive integer on the torus, got {lam}")
    lam = int(lam)
    if not 1 < alpha <= 2:
        raise DomainError(f"alpha must lie in (1, 2], got {alpha}")
    crit = 2.0 / (alpha - 1.0)
    if crit > SCALING_MAX_EXPONENT:
        raise DomainError(f"critical exponent {crit:g} exceeds {SCALING_MAX_EXPONENT:g}; quadrature unreliable")
    grid: Grid2D = theta0.grid
    n = grid.n_points
    v = theta0.values
    peak = float(np.max(np.abs(v)))
    ring = np.ones(v.shape, dtype=bool)
    ring[n // 4: 3 * n // 4, n // 4: 3 * n // 4] = False
    boundary = float(np.max(np.abs(v[ring]))) if peak > 0 else 0.0
    if peak > 0 and boundary > mass_tol * peak:
        raise PreconditionError(
            f"data not concentrated in the central half: boundary value {boundary:.3e} vs peak {peak:.3e}"
        )
    scaled = lam ** (alpha - 1.0) * _lattice_dilation(v, lam)
    h2 = grid.cell_area

    def ratio(p):
        den = classical_lp_norm(v, p, h2)
        return classical_lp_norm(scaled, p, h2) / den if den > 0 else 1.0

    return ScalingReport(lam, alpha, crit, ratio(crit), float(contrast_p), ratio(contrast_p),
                         lam ** (alpha - 1.0 - 2.0 / contrast_p), boundary / peak if peak else 0.0)
