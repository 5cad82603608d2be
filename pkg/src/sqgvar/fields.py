"""Named generators for initial data, forcing and test fields."""

from __future__ import annotations

import numpy as np

from .errors import ConfigurationError
from .grid import Grid2D, ScalarField


def single_mode(grid: Grid2D, k1: int = 1, k2: int = 0, kind: str = "sin", amplitude: float = 1.0) -> ScalarField:
    """``amplitude * sin(k . x)`` (or ``cos``) with integer mode numbers."""
    x1, x2 = grid.mesh
    phase = 2 * np.pi * (k1 * x1 + k2 * x2) / grid.box_side
    if kind == "sin":
        values = np.sin(phase)
    elif kind == "cos":
        values = np.cos(phase)
    else:
        raise ConfigurationError(f"single_mode kind must be 'sin' or 'cos', got {kind!r}")
    mean_zero = (k1, k2) != (0, 0) or kind == "sin"
    return ScalarField(grid, amplitude * values, mean_zero=mean_zero)


def gaussian_bump(grid: Grid2D, width: float, x1: float | None = None, x2: float | None = None,
                  amplitude: float = 1.0) -> ScalarField:
    """Gaussian ``exp(-|x-c|^2 / (2 width^2))``, centred on the box by default."""
    c1 = grid.center if x1 is None else x1
    c2 = grid.center if x2 is None else x2
    X1, X2 = grid.mesh
    r2 = (X1 - c1) ** 2 + (X2 - c2) ** 2
    return ScalarField(grid, amplitude * np.exp(-r2 / (2 * width**2)))


def difference_of_gaussians(grid: Grid2D, width: float, ratio: float = 2.0, amplitude: float = 1.0) -> ScalarField:
    """Mean-zero pair of centred Gaussians with equal mass and widths ``w`` and ``ratio * w``.

    The exact-mass mismatch of the discrete sums is removed so the grid mean
    vanishes to rounding.
    """
    narrow = gaussian_bump(grid, width).values
    wide = gaussian_bump(grid, ratio * width).values
    values = narrow - wide * (narrow.sum() / wide.sum())
    values -= values.mean()
    return ScalarField(grid, amplitude * values, mean_zero=True)


def random_bandlimited(grid: Grid2D, seed: int = 0, band: int = 8, amplitude: float = 1.0,
                       decay: float = 1.0) -> ScalarField:
    """Mean-zero random field with modes ``|k_j| <= band`` and spectrum ``~ (1+|k|)^-decay``.

    Scaled so its max-abs equals ``amplitude``.
    """
    n = grid.n_points
    if not 0 < band < n // 3:
        raise ConfigurationError(f"band must lie in (0, N/3), got {band}")
    rng = np.random.default_rng(seed)
    coeffs = np.zeros((n, n // 2 + 1), dtype=complex)
    k1 = grid.mode_numbers[:, None]
    k2 = np.arange(n // 2 + 1)[None, :]
    mask = (np.abs(k1) <= band) & (k2 <= band)
    mask[0, 0] = False
    shape = coeffs.shape
    noise = rng.standard_normal(shape) + 1j * rng.standard_normal(shape)
    envelope = (1.0 + np.hypot(k1, k2)) ** (-decay)
    coeffs[mask] = (noise * envelope)[mask]
    values = grid.ifft(coeffs)
    values -= values.mean()
    values *= amplitude / np.max(np.abs(values))
    return ScalarField(grid, values, mean_zero=True)


GENERATORS = {
    "single_mode": single_mode,
    "gaussian_bump": gaussian_bump,
    "dog": difference_of_gaussians,
    "random_bandlimited": random_bandlimited,
}

_INT_PARAMS = {"k1", "k2", "seed", "band"}
_STR_PARAMS = {"kind"}


def parse_generator(spec: str):
    """``"name:key=val,..."`` to ``(name, kwargs)`` with typed values."""
    name, _, rest = spec.strip().partition(":")
    name = name.strip()
    if name not in GENERATORS:
        raise ConfigurationError(f"unknown field generator {name!r}; known: {sorted(GENERATORS)}")
    kwargs = {}
    for item in filter(None, (s.strip() for s in rest.split(","))):
        key, eq, val = item.partition("=")
        key = key.strip()
        if not eq:
            raise ConfigurationError(f"generator parameter {item!r} must be key=value")
        try:
            if key in _INT_PARAMS:
                kwargs[key] = int(val)
            elif key in _STR_PARAMS:
                kwargs[key] = val.strip()
            else:
                kwargs[key] = float(val)
        except ValueError:
            raise ConfigurationError(f"bad value in generator parameter {item!r}") from None
    return name, kwargs


def build_field(spec: str, grid: Grid2D, amplitude: float = 1.0) -> ScalarField:
    """Sum of ``+``-separated generator terms, scaled by ``amplitude``."""
    total = np.zeros(grid.shape)
    for term in spec.split("+"):
        name, kwargs = parse_generator(term)
        try:
            total += GENERATORS[name](grid, **kwargs).values
        except TypeError as exc:
            raise ConfigurationError(f"bad parameters for {name}: {exc}") from None
    return ScalarField(grid, amplitude * total)
