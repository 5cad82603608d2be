"""Maximal function and Riesz potentials on the discrete domains."""

from __future__ import annotations

import numpy as np
from scipy.ndimage import uniform_filter

from ..errors import DataError, DomainError
from ..grid import ScalarField
from ..spectral import apply_multiplier, fractional_symbol
from .exponent import time_nodes


def maximal_half_widths(n_points: int) -> list[int]:
    """Half-widths in cells: the single cell, then 1, 2, 4, ... up to ``N/4``."""
    widths = [0]
    m = 1
    while m <= n_points // 4:
        widths.append(m)
        m *= 2
    return widths


def maximal_function(f: ScalarField) -> ScalarField:
    """Centred-square maximal function of ``|f|`` on the periodic grid.

    The supremum runs over squares of ``(2m+1)^2`` cells centred on each node
    for ``m`` in :func:`maximal_half_widths`; ``m = 0`` is the node's own cell,
    so the result dominates ``|f|`` pointwise.
    """
    if not np.all(np.isfinite(f.values)):
        raise DataError("maximal function needs finite values")
    a = np.abs(f.values)
    out = a.copy()
    for m in maximal_half_widths(f.grid.n_points)[1:]:
        np.maximum(out, uniform_filter(a, size=2 * m + 1, mode="wrap"), out=out)
    return ScalarField(f.grid, out)


def riesz_potential_2d(f: ScalarField, beta: float) -> ScalarField:
    """Fractional integral ``Lambda^{-beta}`` of a mean-zero field, ``0 < beta < 2``."""
    if not 0 < beta < 2:
        raise DomainError(f"Riesz potential order must lie in (0, 2), got {beta}")
    if not f.is_mean_zero():
        raise DomainError("the periodic Riesz potential needs a mean-zero field")
    return apply_multiplier(f, fractional_symbol(f.grid, -beta), mean_zero=True)


def _power_antiderivative(x: np.ndarray, beta: float) -> np.ndarray:
    return np.sign(x) * np.abs(x) ** beta / beta


def riesz_potential_1d(psi, beta: float, T: float, at=None) -> np.ndarray:
    """``s -> sum_j |psi_j| int_{cell j} |t - s|^(beta-1) dt`` on ``[0, T]``.

    ``psi`` holds samples on uniform nodes of ``[0, T]`` and is extended by
    zero outside; cells are node-centred and clipped to the interval.  The
    weakly singular kernel is integrated exactly on every cell.  By default
    the potential is evaluated at the nodes; ``at`` gives other points.
    """
    if not 0 < beta < 1:
        raise DomainError(f"1D Riesz potential order must lie in (0, 1), got {beta}")
    psi = np.abs(np.asarray(psi, dtype=float))
    n = psi.size
    t = time_nodes(T, n)
    dt = T / (n - 1)
    left = np.clip(t - dt / 2, 0.0, T)
    right = np.clip(t + dt / 2, 0.0, T)
    s = t if at is None else np.atleast_1d(np.asarray(at, dtype=float))
    kernel = _power_antiderivative(right[None, :] - s[:, None], beta) - _power_antiderivative(
        left[None, :] - s[:, None], beta
    )
    return kernel @ psi
