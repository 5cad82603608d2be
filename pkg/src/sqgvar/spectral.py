"""Fourier-multiplier operators on the periodic grid.

Public functions take and return :class:`ScalarField`.  The ``*_hat``
helpers act on rfft2 coefficient arrays with arbitrary leading batch axes
and are what the solver uses internally.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, ShapeError
from .grid import Grid2D, ScalarField


def _require_mean_zero(f: ScalarField, what: str):
    if not f.is_mean_zero():
        raise DomainError(f"{what} is undefined on fields with nonzero mean (mean={f.mean:.3e})")


def _same_grid(*fields: ScalarField) -> Grid2D:
    grid = fields[0].grid
    for other in fields[1:]:
        if other.grid != grid:
            raise ShapeError("fields live on different grids")
    return grid


# --- multiplier symbols -----------------------------------------------------


def fractional_symbol(grid: Grid2D, nu: float) -> np.ndarray:
    """``|xi|^nu`` with the zero mode set to 0 (``nu != 0``) or 1 (``nu == 0``)."""
    if nu == 0:
        return np.ones_like(grid.kmag)
    with np.errstate(divide="ignore"):
        sym = np.where(grid.zero_mode, 0.0, grid.kmag ** float(nu))
    return sym


def riesz_symbol(grid: Grid2D, axis: int) -> np.ndarray:
    """``i xi_j / |xi|``; zero mode and Nyquist of axis ``j`` are zeroed."""
    ik = _ik(grid, axis)
    with np.errstate(divide="ignore", invalid="ignore"):
        sym = np.where(grid.zero_mode, 0.0, ik / np.where(grid.zero_mode, 1.0, grid.kmag))
    return sym


def _ik(grid: Grid2D, axis: int) -> np.ndarray:
    if axis == 1:
        return grid.ik1
    if axis == 2:
        return grid.ik2
    raise DomainError(f"axis must be 1 or 2, got {axis}")


def derivative_symbol(grid: Grid2D, orders) -> np.ndarray:
    """``(i xi_1)^g1 (i xi_2)^g2``; odd orders vanish on the matching Nyquist line."""
    g1, g2 = orders
    sym = np.ones(grid.kmag.shape, dtype=complex)
    if g1:
        sym = sym * (grid.ik1 if g1 % 2 else 1j * grid.k1) ** g1
    if g2:
        sym = sym * (grid.ik2 if g2 % 2 else 1j * grid.k2) ** g2
    return sym


# --- coefficient-level helpers ---------------------------------------------


def velocity_hat(grid: Grid2D, theta_hat: np.ndarray):
    """Velocity law ``u = (-R2 theta, R1 theta)`` on coefficients."""
    return -riesz_symbol(grid, 2) * theta_hat, riesz_symbol(grid, 1) * theta_hat


def dealias_hat(grid: Grid2D, coeffs: np.ndarray) -> np.ndarray:
    return coeffs * grid.dealias_mask


def product_hat(grid: Grid2D, a_hat: np.ndarray, b_hat: np.ndarray, dealias: bool) -> np.ndarray:
    """Pseudo-spectral product of two fields given by coefficients."""
    if dealias:
        a_hat = dealias_hat(grid, a_hat)
        b_hat = dealias_hat(grid, b_hat)
    prod = grid.fft(grid.ifft(a_hat) * grid.ifft(b_hat))
    return dealias_hat(grid, prod) if dealias else prod


def flux_divergence_hat(grid: Grid2D, a_hat: np.ndarray, b_hat: np.ndarray, dealias: bool) -> np.ndarray:
    """``div(u(a) b)`` with ``u(a)`` from the velocity law, returned as coefficients."""
    u1_hat, u2_hat = velocity_hat(grid, a_hat)
    if dealias:
        u1_hat, u2_hat, b_hat = (dealias_hat(grid, c) for c in (u1_hat, u2_hat, b_hat))
    b = grid.ifft(b_hat)
    flux1 = grid.fft(grid.ifft(u1_hat) * b)
    flux2 = grid.fft(grid.ifft(u2_hat) * b)
    div = grid.ik1 * flux1 + grid.ik2 * flux2
    return dealias_hat(grid, div) if dealias else div


def advection_hat(grid: Grid2D, u1_hat, u2_hat, theta_hat, dealias: bool) -> np.ndarray:
    """``u . grad(theta)`` as coefficients."""
    if dealias:
        u1_hat, u2_hat, theta_hat = (dealias_hat(grid, c) for c in (u1_hat, u2_hat, theta_hat))
    d1 = grid.ifft(grid.ik1 * theta_hat)
    d2 = grid.ifft(grid.ik2 * theta_hat)
    prod = grid.fft(grid.ifft(u1_hat) * d1 + grid.ifft(u2_hat) * d2)
    return dealias_hat(grid, prod) if dealias else prod


# --- public field-level operators -----------------------------------------


def apply_multiplier(f: ScalarField, symbol: np.ndarray, mean_zero: bool | None = None) -> ScalarField:
    grid = f.grid
    values = grid.ifft(grid.fft(f.values) * symbol)
    return ScalarField(grid, values, mean_zero=bool(mean_zero))


def fractional_laplacian(f: ScalarField, nu: float) -> ScalarField:
    """Apply ``Lambda^nu``, the multiplier ``|xi|^nu``.

    Negative orders are accepted for ``-2 < nu < 0`` on mean-zero fields.
    """
    if nu < 0:
        if nu <= -2:
            raise DomainError(f"negative order must lie in (-2, 0), got {nu}")
        _require_mean_zero(f, "Lambda^nu with nu < 0")
    if nu == 0:
        return f
    return apply_multiplier(f, fractional_symbol(f.grid, nu), mean_zero=True)


def riesz_transform(f: ScalarField, j: int) -> ScalarField:
    """Riesz transform ``R_j`` with symbol ``i xi_j / |xi|``."""
    _require_mean_zero(f, "the Riesz transform")
    return apply_multiplier(f, riesz_symbol(f.grid, j), mean_zero=True)


def velocity_from_theta(theta: ScalarField):
    """Return ``(u1, u2) = (-R2 theta, R1 theta)``."""
    _require_mean_zero(theta, "the velocity law")
    grid = theta.grid
    u1_hat, u2_hat = velocity_hat(grid, grid.fft(theta.values))
    return (
        ScalarField(grid, grid.ifft(u1_hat), mean_zero=True),
        ScalarField(grid, grid.ifft(u2_hat), mean_zero=True),
    )


def gradient(f: ScalarField):
    grid = f.grid
    fh = grid.fft(f.values)
    return (
        ScalarField(grid, grid.ifft(grid.ik1 * fh), mean_zero=True),
        ScalarField(grid, grid.ifft(grid.ik2 * fh), mean_zero=True),
    )


def divergence(u) -> ScalarField:
    u1, u2 = u
    grid = _same_grid(u1, u2)
    div = grid.ik1 * grid.fft(u1.values) + grid.ik2 * grid.fft(u2.values)
    return ScalarField(grid, grid.ifft(div), mean_zero=True)


def spectral_divergence_max(u) -> float:
    """Max modulus of ``i xi . u_hat`` over all modes (no inverse transform)."""
    u1, u2 = u
    grid = _same_grid(u1, u2)
    n2 = grid.n_points**2
    div = grid.ik1 * grid.fft(u1.values) + grid.ik2 * grid.fft(u2.values)
    return float(np.max(np.abs(div))) / n2


def nonlinear_term(u, theta: ScalarField, dealias: bool = True) -> ScalarField:
    """Advection ``u1 d1 theta + u2 d2 theta``, computed pseudo-spectrally."""
    u1, u2 = u
    grid = _same_grid(u1, u2, theta)
    out = advection_hat(grid, grid.fft(u1.values), grid.fft(u2.values), grid.fft(theta.values), dealias)
    return ScalarField(grid, grid.ifft(out))


def spectral_derivative(f: ScalarField, orders) -> ScalarField:
    """``D^gamma f`` for a multi-index ``gamma = (g1, g2)``."""
    g1, g2 = (int(g) for g in orders)
    if g1 < 0 or g2 < 0:
        raise DomainError(f"derivative orders must be non-negative, got {orders}")
    if g1 == g2 == 0:
        return f
    return apply_multiplier(f, derivative_symbol(f.grid, (g1, g2)), mean_zero=True)
