"""
Periodic grid and field containers.

The computational domain is the square ``[0, L)^2`` with ``N`` points per
side.  Array axis 0 is ``x1`` and axis 1 is ``x2``.  Spectral work uses the
real-to-complex layout of :func:`scipy.fft.rfft2` (axis 1 halved); the
public :class:`SpectralField` exposes the full complex table normalised so
that a single mode ``cos(k.x)`` has two coefficients of modulus 1/2.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.fft as sfft

from .errors import ConfigurationError, DataError, DomainError, ShapeError

MEAN_ZERO_RTOL = 1e-13


def _is_power_of_two(n: int) -> bool:
    return n > 0 and (n & (n - 1)) == 0


@dataclass(frozen=True)
class Grid2D:
    """Uniform periodic ``N x N`` grid on a box of side ``box_side``."""

    n_points: int
    box_side: float = 2 * np.pi

    def __post_init__(self):
        if isinstance(self.n_points, bool) or int(self.n_points) != self.n_points:
            raise ConfigurationError(f"n_points must be an integer, got {self.n_points!r}")
        n = int(self.n_points)
        if n < 8 or not _is_power_of_two(n):
            raise ConfigurationError(f"n_points must be a power of two >= 8, got {n}")
        if not (np.isfinite(self.box_side) and self.box_side > 0):
            raise ConfigurationError(f"box_side must be positive, got {self.box_side}")
        object.__setattr__(self, "n_points", n)
        object.__setattr__(self, "box_side", float(self.box_side))

    @property
    def shape(self):
        return (self.n_points, self.n_points)

    @property
    def spacing(self) -> float:
        return self.box_side / self.n_points

    @property
    def cell_area(self) -> float:
        return self.spacing**2

    @property
    def area(self) -> float:
        return self.box_side**2

    @cached_property
    def mode_numbers(self) -> np.ndarray:
        """Integer mode numbers in FFT order, symmetric range ``-N/2 .. N/2-1``."""
        return np.rint(np.fft.fftfreq(self.n_points, d=1.0 / self.n_points)).astype(int)

    @cached_property
    def wavenumbers(self) -> np.ndarray:
        """Physical wavenumbers ``2 pi k / L`` in FFT order."""
        return 2 * np.pi * self.mode_numbers / self.box_side

    @cached_property
    def coords(self) -> np.ndarray:
        return np.arange(self.n_points) * self.spacing

    @cached_property
    def mesh(self):
        """``(x1, x2)`` coordinate arrays of shape ``(N, N)``."""
        return np.meshgrid(self.coords, self.coords, indexing="ij")

    @property
    def center(self) -> float:
        """Coordinate of the box centre, used as the stand-in origin."""
        return self.box_side / 2

    @cached_property
    def radius(self) -> np.ndarray:
        """Distance of every node from the box centre."""
        x1, x2 = self.mesh
        return np.hypot(x1 - self.center, x2 - self.center)

    # --- rfft2 layout tables -------------------------------------------------

    @cached_property
    def k1(self) -> np.ndarray:
        """Wavenumbers along x1, shape ``(N, 1)``."""
        return self.wavenumbers[:, None]

    @cached_property
    def k2(self) -> np.ndarray:
        """Wavenumbers along x2, shape ``(1, N//2+1)`` (non-negative half)."""
        n = self.n_points
        half = np.arange(n // 2 + 1)
        return (2 * np.pi * half / self.box_side)[None, :]

    @cached_property
    def kmag(self) -> np.ndarray:
        return np.sqrt(self.k1**2 + self.k2**2)

    @cached_property
    def zero_mode(self) -> np.ndarray:
        mask = np.zeros((self.n_points, self.n_points // 2 + 1), dtype=bool)
        mask[0, 0] = True
        return mask

    @cached_property
    def ik1(self) -> np.ndarray:
        """``i xi_1`` with the Nyquist row zeroed."""
        k = self.k1.copy()
        k[self.n_points // 2, 0] = 0.0
        return 1j * k

    @cached_property
    def ik2(self) -> np.ndarray:
        """``i xi_2`` with the Nyquist column zeroed."""
        k = self.k2.copy()
        k[0, -1] = 0.0
        return 1j * k

    @cached_property
    def dealias_mask(self) -> np.ndarray:
        """2/3-rule mask: keep modes with ``|k_j| <= K`` where ``3K < N``."""
        kmax = (self.n_points - 1) // 3
        m1 = np.abs(self.mode_numbers)[:, None] <= kmax
        m2 = np.arange(self.n_points // 2 + 1)[None, :] <= kmax
        return m1 & m2

    # --- transforms on raw arrays (batched over leading axes) ---------------

    def fft(self, values: np.ndarray) -> np.ndarray:
        return sfft.rfft2(values, axes=(-2, -1))

    def ifft(self, coeffs: np.ndarray) -> np.ndarray:
        return sfft.irfft2(coeffs, s=self.shape, axes=(-2, -1))

    def integrate(self, values: np.ndarray) -> np.ndarray:
        """Rectangle-rule integral over the box (batched over leading axes)."""
        return values.sum(axis=(-2, -1)) * self.cell_area

    def mean(self, values: np.ndarray) -> np.ndarray:
        return values.mean(axis=(-2, -1))

    def check_shape(self, values: np.ndarray):
        if values.shape[-2:] != self.shape:
            raise ShapeError(f"field shape {values.shape[-2:]} does not match grid {self.shape}")


def make_grid(n_points: int, box_side: float = 2 * np.pi) -> Grid2D:
    return Grid2D(n_points, box_side)


def is_mean_zero(grid: Grid2D, values: np.ndarray, rtol: float = MEAN_ZERO_RTOL) -> bool:
    scale = float(np.max(np.abs(values))) if values.size else 0.0
    return abs(float(values.mean())) <= rtol * max(scale, np.finfo(float).tiny)


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Real scalar field sampled on a :class:`Grid2D`."""

    grid: Grid2D
    values: np.ndarray
    mean_zero: bool = False

    def __post_init__(self):
        values = np.asarray(self.values, dtype=float)
        if values.shape != self.grid.shape:
            raise ShapeError(f"values have shape {values.shape}, grid expects {self.grid.shape}")
        if not np.all(np.isfinite(values)):
            raise DataError("field values must be finite")
        if self.mean_zero and np.any(values) and not is_mean_zero(self.grid, values):
            raise DomainError(
                f"field flagged mean-zero has mean {values.mean():.3e}"
            )
        values.setflags(write=False)
        object.__setattr__(self, "values", values)

    @classmethod
    def zeros(cls, grid: Grid2D) -> "ScalarField":
        return cls(grid, np.zeros(grid.shape), mean_zero=True)

    @classmethod
    def from_function(cls, grid: Grid2D, func, mean_zero: bool = False) -> "ScalarField":
        x1, x2 = grid.mesh
        return cls(grid, np.broadcast_to(func(x1, x2), grid.shape).astype(float), mean_zero)

    def with_values(self, values: np.ndarray, mean_zero: bool | None = None) -> "ScalarField":
        flag = self.mean_zero if mean_zero is None else mean_zero
        return ScalarField(self.grid, values, mean_zero=flag)

    @property
    def max_abs(self) -> float:
        return float(np.max(np.abs(self.values)))

    @property
    def mean(self) -> float:
        return float(self.values.mean())

    def is_mean_zero(self) -> bool:
        return not np.any(self.values) or is_mean_zero(self.grid, self.values)

    def projected_mean_zero(self) -> "ScalarField":
        return ScalarField(self.grid, self.values - self.values.mean(), mean_zero=True)

    def _compatible(self, other: "ScalarField"):
        if other.grid != self.grid:
            raise ShapeError("fields live on different grids")

    def __add__(self, other):
        if isinstance(other, ScalarField):
            self._compatible(other)
            return ScalarField(self.grid, self.values + other.values)
        return ScalarField(self.grid, self.values + other)

    def __sub__(self, other):
        if isinstance(other, ScalarField):
            self._compatible(other)
            return ScalarField(self.grid, self.values - other.values)
        return ScalarField(self.grid, self.values - other)

    def __mul__(self, other):
        if isinstance(other, ScalarField):
            self._compatible(other)
            return ScalarField(self.grid, self.values * other.values)
        return ScalarField(self.grid, self.values * other, mean_zero=self.mean_zero)

    __rmul__ = __mul__

    def __neg__(self):
        return ScalarField(self.grid, -self.values, mean_zero=self.mean_zero)


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Full complex Fourier table, ``coeffs[k1, k2]`` in FFT order, scaled by ``1/N^2``."""

    grid: Grid2D
    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        coeffs = np.asarray(self.coeffs, dtype=complex)
        if coeffs.shape != self.grid.shape:
            raise ShapeError(f"coefficients have shape {coeffs.shape}, grid expects {self.grid.shape}")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    def mode(self, k1: int, k2: int) -> complex:
        n = self.grid.n_points
        return complex(self.coeffs[k1 % n, k2 % n])

    def hermitian_defect(self) -> float:
        """Max ``|c(-k) - conj(c(k))|``; zero for a real field."""
        flipped = np.roll(self.coeffs[::-1, ::-1], 1, axis=(0, 1))
        return float(np.max(np.abs(flipped - np.conj(self.coeffs))))


def to_spectral(f: ScalarField) -> SpectralField:
    n = f.grid.n_points
    return SpectralField(f.grid, sfft.fft2(f.values) / n**2)


def from_spectral(F: SpectralField, mean_zero: bool = False) -> ScalarField:
    n = F.grid.n_points
    values = np.real(sfft.ifft2(F.coeffs * n**2))
    return ScalarField(F.grid, values, mean_zero=mean_zero)
