"""Mild solutions of the dissipative SQG equation in variable-exponent Lebesgue spaces."""

from .errors import (
    ConfigurationError,
    DataError,
    DomainError,
    FormatError,
    PreconditionError,
    ShapeError,
    SQGError,
)
from .grid import Grid2D, ScalarField, SpectralField, from_spectral, make_grid, to_spectral

__all__ = [
    "ConfigurationError",
    "DataError",
    "DomainError",
    "FormatError",
    "PreconditionError",
    "ShapeError",
    "SQGError",
    "Grid2D",
    "ScalarField",
    "SpectralField",
    "from_spectral",
    "make_grid",
    "to_spectral",
]
