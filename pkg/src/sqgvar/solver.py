"""Mild solutions by Picard iteration on the Duhamel formulation.

Time integrals use the left-endpoint product rule with the semigroup
applied exactly on every subinterval:

    int_0^{t_i} G_{t_i - s} g(s) ds  ~  sum_{j < i} dt G_{t_i - s_j} g(s_j)

which is evaluated by the recursion ``acc_{i+1} = G_dt (acc_i + dt g_i)``.
The nonlinearity enters in divergence form ``div(u theta)``.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field, replace
from functools import cached_property

import numpy as np

from .errors import ConfigurationError, ShapeError
from .grid import Grid2D, ScalarField, is_mean_zero
from .semigroup import semigroup_symbol
from .spectral import advection_hat, flux_divergence_hat, fractional_symbol, velocity_hat
from .varlebesgue.exponent import (
    Exponent,
    embedding_class_check,
    spatial_exponent,
    temporal_exponent,
    time_nodes,
)
from .varlebesgue.norms import classical_lp_norm, l1_time_norm, variable_norm, xt_norm

log = logging.getLogger(__name__)

DIVERGENCE_BLOWUP = 1e12


@dataclass(frozen=True, eq=False)
class SolverConfig:
    """Parameters of one mild-solution computation.

    ``q_family`` and ``p_bar_family`` name analytic exponent families (see
    :mod:`sqgvar.varlebesgue.exponent`); they are sampled on the time grid
    and the spatial grid respectively.  With ``strict_indices`` unset, the
    index constraints are recorded in :attr:`violations` instead of raising.
    """

    grid: Grid2D
    alpha: float = 1.5
    T: float = 0.25
    n_time: int = 32
    p: float = 6.0
    q_family: str = "const:10"
    p_bar_family: str = "const:6"
    mu: float = 1.0
    dealias: bool = True
    picard_tol: float = 1e-9
    picard_max_iter: int = 60
    strict_indices: bool = True

    def __post_init__(self):
        problems = []
        if not 1 < self.alpha <= 2:
            raise ConfigurationError(f"alpha must lie in (1, 2], got {self.alpha}")
        if self.mu != 1.0:
            raise ConfigurationError(f"the dissipation coefficient is fixed to 1, got mu={self.mu}")
        if not self.T > 0:
            raise ConfigurationError(f"T must be positive, got {self.T}")
        if int(self.n_time) != self.n_time or self.n_time < 8:
            raise ConfigurationError(f"n_time must be an integer >= 8, got {self.n_time}")
        if not self.picard_tol > 0:
            raise ConfigurationError(f"picard_tol must be positive, got {self.picard_tol}")
        if int(self.picard_max_iter) != self.picard_max_iter or self.picard_max_iter < 1:
            raise ConfigurationError(f"picard_max_iter must be a positive integer, got {self.picard_max_iter}")
        critical = 2.0 / (self.alpha - 1.0)
        if not self.p > critical:
            problems.append(f"p > 2/(alpha-1) violated: p={self.p:g}, 2/(alpha-1)={critical:g}")
        q = self.q_exponent
        if not q.p_minus > 2:
            problems.append(f"q^- > 2 violated: q^-={q.p_minus:g}")
        lhs = self.alpha / q.values + 2.0 / self.p
        bad = np.nonzero(lhs >= self.alpha - 1.0)[0]
        if bad.size:
            i = int(bad[0])
            problems.append(
                f"alpha/q + 2/p < alpha-1 violated at t={q.nodes[i]:.6g}: "
                f"{lhs[i]:.6g} >= {self.alpha - 1.0:.6g}"
            )
        emb = embedding_class_check(self.p, self.p_bar)
        if not emb.member:
            problems.append(f"p_bar is not in the embedding class of p: {emb.reason}")
        if problems and self.strict_indices:
            raise ConfigurationError("; ".join(problems))
        object.__setattr__(self, "violations", tuple(problems))

    @cached_property
    def q_exponent(self) -> Exponent:
        return temporal_exponent(self.q_family, self.T, self.n_time)

    @cached_property
    def p_bar(self) -> Exponent:
        return spatial_exponent(self.p_bar_family, self.grid)

    @property
    def dt(self) -> float:
        return self.T / (self.n_time - 1)

    @cached_property
    def times(self) -> np.ndarray:
        return time_nodes(self.T, self.n_time)

    @property
    def time_factor(self) -> float:
        """``max(T^(1/q^-), T^(1/q^+))``."""
        q = self.q_exponent
        return max(self.T ** (1.0 / q.p_minus), self.T ** (1.0 / q.p_plus))

    def with_(self, **changes) -> "SolverConfig":
        return replace(self, **changes)

    # --- cached spectral symbols -----------------------------------------

    @cached_property
    def step_symbol(self) -> np.ndarray:
        return semigroup_symbol(self.grid, self.dt, self.alpha)

    @cached_property
    def node_symbols(self) -> np.ndarray:
        return semigroup_symbol(self.grid, self.times, self.alpha)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Fields at the uniform time nodes ``t_i = i T / (n_time - 1)``."""

    config: SolverConfig
    values: np.ndarray = field(repr=False)

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        expected = (self.config.n_time,) + self.config.grid.shape
        if values.shape != expected:
            raise ShapeError(f"trajectory shape {values.shape}, expected {expected}")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, config: SolverConfig) -> "Trajectory":
        return cls(config, np.zeros((config.n_time,) + config.grid.shape))

    @classmethod
    def constant(cls, config: SolverConfig, f: ScalarField) -> "Trajectory":
        if f.grid != config.grid:
            raise ShapeError("field grid differs from the configured grid")
        return cls(config, np.broadcast_to(f.values, (config.n_time,) + f.grid.shape))

    @classmethod
    def from_function(cls, config: SolverConfig, func) -> "Trajectory":
        """Sample ``func(t, x1, x2)`` at every node."""
        x1, x2 = config.grid.mesh
        return cls(config, np.stack([np.broadcast_to(func(t, x1, x2), x1.shape) for t in config.times]))

    @property
    def grid(self) -> Grid2D:
        return self.config.grid

    @property
    def times(self) -> np.ndarray:
        return self.config.times

    def field(self, i: int) -> ScalarField:
        return ScalarField(self.grid, self.values[i])

    @property
    def fields(self) -> list:
        return [self.field(i) for i in range(self.config.n_time)]

    def spatial_norms(self, p: float | None = None) -> np.ndarray:
        p = self.config.p if p is None else p
        return np.array([classical_lp_norm(v, p, self.grid.cell_area) for v in self.values])

    def xt_norm(self) -> float:
        return xt_norm(self.spatial_norms(), self.config.q_exponent).norm_value

    def is_mean_zero(self) -> bool:
        return all(not np.any(v) or is_mean_zero(self.grid, v) for v in self.values)

    def __add__(self, other: "Trajectory") -> "Trajectory":
        return Trajectory(self.config, self.values + other.values)

    def __sub__(self, other: "Trajectory") -> "Trajectory":
        return Trajectory(self.config, self.values - other.values)

    def __mul__(self, c: float) -> "Trajectory":
        return Trajectory(self.config, self.values * c)

    __rmul__ = __mul__


def xt_distance(a: Trajectory, b: Trajectory) -> float:
    return (a - b).xt_norm()


# --- building blocks ---------------------------------------------------------


def _duhamel_hat(config: SolverConfig, source_hat: np.ndarray) -> np.ndarray:
    """``sum_{j<i} dt G_{t_i - s_j} g_j`` for every node ``i`` (coefficients)."""
    out = np.zeros_like(source_hat)
    acc = np.zeros_like(source_hat[0])
    step = config.step_symbol
    dt = config.dt
    for i in range(config.n_time - 1):
        acc = step * (acc + dt * source_hat[i])
        out[i + 1] = acc
    return out


def _require_mean_zero_data(what: str, values: np.ndarray, grid: Grid2D):
    for v in np.reshape(values, (-1,) + grid.shape):
        if np.any(v) and not is_mean_zero(grid, v):
            raise ConfigurationError(
                f"{what} has nonzero mean {v.mean():.3e}; the velocity law needs mean-zero data "
                "(use --project-mean to subtract it)"
            )


def _check_trajectory(config: SolverConfig, traj: Trajectory, what: str):
    if traj.config.grid != config.grid or traj.config.n_time != config.n_time or traj.config.T != config.T:
        raise ShapeError(f"{what} does not share the configured grid and time nodes")


def linear_part(theta0: ScalarField, f: Trajectory | None, config: SolverConfig) -> Trajectory:
    """``G_t theta0 + int_0^t G_{t-s} f(s) ds`` at every node."""
    grid = config.grid
    if theta0.grid != grid:
        raise ShapeError("initial data grid differs from the configured grid")
    _require_mean_zero_data("initial data", theta0.values, grid)
    out_hat = config.node_symbols * grid.fft(theta0.values)[None]
    if f is not None:
        _check_trajectory(config, f, "forcing")
        _require_mean_zero_data("forcing", f.values, grid)
        if np.any(f.values):
            out_hat = out_hat + _duhamel_hat(config, grid.fft(f.values))
    return Trajectory(config, grid.ifft(out_hat))


def bilinear_hat(config: SolverConfig, a_hat: np.ndarray, b_hat: np.ndarray) -> np.ndarray:
    grid = config.grid
    source = flux_divergence_hat(grid, a_hat, b_hat, config.dealias)
    return _duhamel_hat(config, source)


def bilinear_B(theta_a: Trajectory, theta_b: Trajectory, config: SolverConfig) -> Trajectory:
    """``int_0^t G_{t-s} div(u(theta_a) theta_b)(s) ds`` at every node."""
    _check_trajectory(config, theta_a, "first argument")
    _check_trajectory(config, theta_b, "second argument")
    grid = config.grid
    out = bilinear_hat(config, grid.fft(theta_a.values), grid.fft(theta_b.values))
    return Trajectory(config, grid.ifft(out))


def bilinear_B_direct(theta_a: Trajectory, theta_b: Trajectory, config: SolverConfig) -> Trajectory:
    """Same sum as :func:`bilinear_B` but evaluated term by term (reference path)."""
    grid = config.grid
    source = flux_divergence_hat(grid, grid.fft(theta_a.values), grid.fft(theta_b.values), config.dealias)
    out = np.zeros_like(source)
    for i in range(1, config.n_time):
        for j in range(i):
            out[i] += config.dt * semigroup_symbol(grid, config.times[i] - config.times[j], config.alpha) * source[j]
    return Trajectory(config, grid.ifft(out))


# --- Picard iteration --------------------------------------------------------


@dataclass
class PicardState:
    iterate_index: int
    trajectory: Trajectory | None = field(repr=False)
    xt_norm: float
    residual: float
    contraction_ratio: float


@dataclass
class PicardRun:
    states: list
    linear: Trajectory = field(repr=False)
    eta: float
    converged: bool
    diverged: bool
    message: str = ""
    config: SolverConfig | None = field(default=None, repr=False)
    theta0: ScalarField | None = field(default=None, repr=False)
    forcing: Trajectory | None = field(default=None, repr=False)

    @property
    def final(self) -> PicardState:
        return self.states[-1]

    @property
    def solution(self) -> Trajectory:
        return self.final.trajectory

    @property
    def iterations(self) -> int:
        return self.final.iterate_index

    @property
    def contraction_ratios(self) -> list:
        return [s.contraction_ratio for s in self.states]


def picard_map(theta: Trajectory, linear: Trajectory, config: SolverConfig) -> Trajectory:
    grid = config.grid
    th = grid.fft(theta.values)
    return Trajectory(config, linear.values - grid.ifft(bilinear_hat(config, th, th)))


def picard_solve(theta0: ScalarField, f: Trajectory | None, config: SolverConfig,
                 initial_guess: Trajectory | None = None, keep_history: bool = True) -> PicardRun:
    """Iterate ``theta <- L - B(theta, theta)`` from ``initial_guess`` (default zero).

    Stops when the step ``||theta_k - theta_{k-1}||`` drops below
    ``picard_tol * max(1, ||theta_k||)`` or after ``picard_max_iter`` steps.
    Overflow or NaN ends the run with ``diverged`` set.
    """
    linear = linear_part(theta0, f, config)
    eta = linear.xt_norm()
    prev = Trajectory.zeros(config) if initial_guess is None else initial_guess
    if initial_guess is not None:
        _check_trajectory(config, initial_guess, "initial guess")
    states: list[PicardState] = []
    prev_residual = None
    converged = diverged = False
    message = ""
    for k in range(1, config.picard_max_iter + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            current = picard_map(prev, linear, config)
        if not np.all(np.isfinite(current.values)):
            diverged, message = True, f"non-finite iterate at step {k}"
            break
        norm = current.xt_norm()
        residual = (current - prev).xt_norm()
        ratio = residual / prev_residual if prev_residual else float("nan")
        states.append(PicardState(k, current, norm, residual, ratio))
        if not keep_history and len(states) > 1:
            states[-2].trajectory = None
        log.debug("picard %d: norm=%.6e residual=%.3e ratio=%.3f", k, norm, residual, ratio)
        if residual <= config.picard_tol * max(1.0, norm):
            converged = True
            message = f"converged after {k} iterations"
            break
        if norm > DIVERGENCE_BLOWUP * max(1.0, eta):
            diverged, message = True, f"iterate norm {norm:.3e} exceeded the blow-up threshold at step {k}"
            break
        prev, prev_residual = current, residual
    else:
        message = f"no convergence within {config.picard_max_iter} iterations"
    if not states:
        states.append(PicardState(0, prev, float("nan"), float("nan"), float("nan")))
    if diverged and states[-1].trajectory is None:
        states[-1].trajectory = prev
    return PicardRun(states, linear, eta, converged, diverged, message, config, theta0, f)


def fixed_point_residual(theta: Trajectory, linear: Trajectory, config: SolverConfig) -> float:
    """``||theta - (L - B(theta, theta))||`` in the solution-space norm."""
    return xt_distance(theta, picard_map(theta, linear, config))


# --- smallness and data norms -----------------------------------------------


def smallness_threshold(config: SolverConfig, C1: float, C2: float) -> float:
    """Right-hand side of the data-size condition that makes the Picard map contract."""
    if not (C1 > 0 and C2 > 0):
        from .errors import DomainError

        raise DomainError(f"constants must be positive, got C1={C1}, C2={C2}")
    return 1.0 / (4.0 * C1 * C2 * (1.0 + config.T) * config.time_factor)


def forcing_l1_norm(f: Trajectory | None, config: SolverConfig) -> float:
    """``int_0^T ||f(t)||_{L^{p_bar(.)}} dt``."""
    if f is None or not np.any(f.values):
        return 0.0
    norms = [variable_norm(v, config.p_bar) for v in f.values]
    return l1_time_norm(norms, config.T)


def forcing_lq_norm(f: Trajectory | None, config: SolverConfig) -> float:
    """``|| ||f(t)||_{L^{p_bar(.)}} ||_{L^{q(.)}(0,T)}``, the norm in the forcing hypothesis."""
    if f is None or not np.any(f.values):
        return 0.0
    norms = [variable_norm(v, config.p_bar) for v in f.values]
    return xt_norm(norms, config.q_exponent).norm_value


def data_norm(theta0: ScalarField, f: Trajectory | None, config: SolverConfig) -> float:
    """``||theta0||_{L^{p_bar(.)}} + ||f||_{L^1_t L^{p_bar(.)}_x}``."""
    return variable_norm(theta0, config.p_bar) + forcing_l1_norm(f, config)


# --- strong-form consistency -------------------------------------------------


def pde_residual(theta: Trajectory, f: Trajectory | None, config: SolverConfig) -> np.ndarray:
    """``L^p`` norms of ``d_t theta + u.grad theta + Lambda^alpha theta - f`` at interior nodes.

    The time derivative is the centred difference.
    """
    grid = config.grid
    th = grid.fft(theta.values)
    u1, u2 = velocity_hat(grid, th)
    adv = advection_hat(grid, u1, u2, th, config.dealias)
    diss = fractional_symbol(grid, config.alpha) * th
    rhs = grid.ifft(adv + diss)
    if f is not None:
        rhs = rhs - f.values
    dtheta = (theta.values[2:] - theta.values[:-2]) / (2 * config.dt)
    res = dtheta + rhs[1:-1]
    return np.array([classical_lp_norm(r, config.p, grid.cell_area) for r in res])
