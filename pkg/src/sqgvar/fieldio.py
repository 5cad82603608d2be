"""SQGF binary field files.

Layout, all little-endian::

    offset 0   magic      b"SQGF"
    offset 4   version    u16 (= 1)
    offset 6   n_points   u32
    offset 10  box_side   f64
    offset 18  values     n_points**2 f64, row-major (axis 0 = x1)
"""

from __future__ import annotations

import os
import struct

import numpy as np

from .errors import FormatError
from .grid import Grid2D, ScalarField, _is_power_of_two

MAGIC = b"SQGF"
VERSION = 1
_HEADER = struct.Struct("<4sHId")
HEADER_SIZE = _HEADER.size
_OFFSET_VERSION = 4
_OFFSET_N = 6
_OFFSET_SIDE = 10


def encode_field(f: ScalarField) -> bytes:
    grid = f.grid
    header = _HEADER.pack(MAGIC, VERSION, grid.n_points, float(grid.box_side))
    return header + np.ascontiguousarray(f.values, dtype="<f8").tobytes()


def decode_field(data: bytes) -> ScalarField:
    if len(data) < HEADER_SIZE:
        if data[: min(len(data), 4)] != MAGIC[: min(len(data), 4)]:
            raise FormatError("bad magic, expected b'SQGF'", 0)
        raise FormatError(f"truncated header: {len(data)} of {HEADER_SIZE} bytes", len(data))
    magic, version, n, side = _HEADER.unpack_from(data)
    if magic != MAGIC:
        raise FormatError(f"bad magic {magic!r}, expected b'SQGF'", 0)
    if version != VERSION:
        raise FormatError(f"unsupported version {version}", _OFFSET_VERSION)
    if n == 0 or n < 8 or not _is_power_of_two(n):
        raise FormatError(f"n_points must be a power of two >= 8, got {n}", _OFFSET_N)
    if not (np.isfinite(side) and side > 0):
        raise FormatError(f"box_side must be positive and finite, got {side}", _OFFSET_SIDE)
    expected = HEADER_SIZE + 8 * n * n
    if len(data) < expected:
        raise FormatError(f"truncated data: {len(data)} of {expected} bytes", len(data))
    if len(data) > expected:
        raise FormatError(f"{len(data) - expected} trailing bytes after the data", expected)
    values = np.frombuffer(data, dtype="<f8", count=n * n, offset=HEADER_SIZE).reshape(n, n)
    if not np.all(np.isfinite(values)):
        bad = int(np.flatnonzero(~np.isfinite(values))[0])
        raise FormatError("non-finite value in data", HEADER_SIZE + 8 * bad)
    return ScalarField(Grid2D(int(n), float(side)), values.astype(float))


def write_field(f: ScalarField, path) -> None:
    data = encode_field(f)
    tmp = f"{os.fspath(path)}.tmp"
    with open(tmp, "wb") as fh:
        fh.write(data)
    os.replace(tmp, path)


def read_field(path) -> ScalarField:
    with open(path, "rb") as fh:
        data = fh.read()
    return decode_field(data)
