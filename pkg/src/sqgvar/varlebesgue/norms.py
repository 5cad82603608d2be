"""Modulars, Luxemburg norms and the time-variable solution-space norm."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DataError, DomainError, ShapeError
from ..grid import ScalarField
from .exponent import Exponent, time_weights

BISECTION_RTOL = 1e-12
_TINY = 1e-300


@dataclass(frozen=True)
class LuxemburgResult:
    norm_value: float
    modular_at_norm: float
    iterations: int
    bracket: tuple

    def __float__(self):
        return self.norm_value


def _samples(f, weights=None):
    """Flatten ``f`` (ScalarField or array) into values and quadrature weights."""
    if isinstance(f, ScalarField):
        values = f.values
        w = f.grid.cell_area if weights is None else weights
    else:
        values = np.asarray(f, dtype=float)
        if weights is None:
            raise ShapeError("raw arrays need explicit quadrature weights")
        w = weights
    w = np.broadcast_to(np.asarray(w, dtype=float), values.shape)
    return values, w


def classical_lp_norm(f, p: float, weights=None) -> float:
    """Rectangle-rule ``(sum |f|^p w)^(1/p)``; ``p = inf`` is the max-abs."""
    if not p >= 1:
        raise DomainError(f"Lebesgue exponent must be >= 1, got {p}")
    values, w = _samples(f, weights)
    a = np.abs(values)
    if np.isinf(p):
        return float(a.max()) if a.size else 0.0
    peak = float(a.max()) if a.size else 0.0
    if peak == 0.0:
        return 0.0
    # factor out the peak to keep |f|^p in range for large p
    return peak * float(np.sum(w * (a / peak) ** p)) ** (1.0 / p)


def _check_domain(values: np.ndarray, p: Exponent):
    if values.shape != p.values.shape:
        raise ShapeError(f"function shape {values.shape} does not match exponent shape {p.values.shape}")


def modular(f, p: Exponent) -> float:
    """``rho(f) = sum |f(x)|^p(x) w(x)`` over the exponent's domain."""
    values = f.values if isinstance(f, ScalarField) else np.asarray(f, dtype=float)
    if isinstance(f, ScalarField) and p.grid is not None and f.grid != p.grid:
        raise ShapeError("field and exponent live on different grids")
    _check_domain(values, p)
    return float(np.sum(p.weights * np.abs(values) ** p.values))


class _Modular:
    """``lam -> rho(f / lam)`` evaluated in log space on the support of ``f``."""

    def __init__(self, values: np.ndarray, p: Exponent):
        a = np.abs(values).ravel()
        mask = a > 0
        self.log_a = np.log(a[mask])
        self.p = p.values.ravel()[mask]
        self.w = p.weights.ravel()[mask]
        self.empty = not mask.any()

    def __call__(self, lam: float) -> float:
        if self.empty:
            return 0.0
        return float(np.sum(self.w * np.exp(self.p * (self.log_a - np.log(lam)))))


def luxemburg_norm(f, p: Exponent, rtol: float = BISECTION_RTOL) -> LuxemburgResult:
    """``inf{lam > 0 : rho(f / lam) <= 1}`` by bracketing and bisection.

    The starting guess is the classical norm with exponent ``p^+``; the
    bracket is widened by doubling or halving until the modular crosses 1,
    then bisected to relative width ``rtol``.  The upper end of the final
    bracket is returned, so ``modular_at_norm <= 1``.
    """
    values = f.values if isinstance(f, ScalarField) else np.asarray(f, dtype=float)
    if isinstance(f, ScalarField) and p.grid is not None and f.grid != p.grid:
        raise ShapeError("field and exponent live on different grids")
    _check_domain(values, p)
    if np.any(np.isnan(values)):
        raise DataError("cannot take the norm of a field containing NaN")
    if not np.all(np.isfinite(values)):
        raise DataError("cannot take the norm of a field containing Inf")

    rho = _Modular(values, p)
    if rho.empty:
        return LuxemburgResult(0.0, 0.0, 0, (0.0, 0.0))

    guess = classical_lp_norm(values, p.p_plus, p.weights)
    lam = max(_TINY, guess)
    iterations = 0
    if rho(lam) > 1.0:
        lo = lam
        hi = 2.0 * lam
        while rho(hi) > 1.0:
            lo, hi = hi, 2.0 * hi
            iterations += 1
    else:
        hi = lam
        lo = 0.5 * lam
        while rho(lo) <= 1.0 and lo > 0.0:
            lo, hi = 0.5 * lo, lo
            iterations += 1

    while hi - lo > rtol * hi:
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            # subnormal range: the bracket cannot be split further
            break
        if rho(mid) > 1.0:
            lo = mid
        else:
            hi = mid
        iterations += 1
    return LuxemburgResult(hi, rho(hi), iterations, (lo, hi))


def variable_norm(f, p: Exponent) -> float:
    """Shorthand for ``luxemburg_norm(f, p).norm_value``."""
    return luxemburg_norm(f, p).norm_value


def time_series_norm(series, T: float, q: float) -> float:
    """Constant-exponent ``L^q(0, T)`` norm of nodal samples."""
    series = np.asarray(series, dtype=float)
    return classical_lp_norm(series, q, time_weights(T, series.size))


def xt_norm(norm_series, q: Exponent) -> LuxemburgResult:
    """Luxemburg norm in time of the nodal spatial norms ``||theta(t_i)||_{L^p}``."""
    if q.T is None:
        raise DomainError("the solution-space norm needs a temporal exponent")
    series = np.asarray(norm_series, dtype=float)
    if series.shape != q.values.shape:
        raise ShapeError(f"{series.size} norm samples for {q.values.size} time nodes")
    if np.any(np.isnan(series)):
        raise DataError("norm series contains NaN")
    return luxemburg_norm(series, q)


def l1_time_norm(norm_series, T: float) -> float:
    """``int_0^T g(t) dt`` on nodal samples with the time-cell weights."""
    series = np.asarray(norm_series, dtype=float)
    return float(np.sum(np.abs(series) * time_weights(T, series.size)))
