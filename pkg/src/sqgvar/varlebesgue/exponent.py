"""Variable exponents on the spatial grid or on a uniform time grid."""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from ..errors import ConfigurationError, DomainError, ShapeError
from ..grid import Grid2D


def time_nodes(T: float, n_nodes: int) -> np.ndarray:
    return np.linspace(0.0, T, n_nodes)


def time_weights(T: float, n_nodes: int) -> np.ndarray:
    """Lengths of node-centred cells clipped to ``[0, T]``; they sum to ``T``."""
    if n_nodes < 2:
        raise ConfigurationError("a time grid needs at least two nodes")
    dt = T / (n_nodes - 1)
    w = np.full(n_nodes, dt)
    w[0] = w[-1] = dt / 2
    return w


@dataclass(frozen=True, eq=False)
class Exponent:
    """Sampled exponent ``p(.)`` with its quadrature weights.

    Exactly one of ``grid`` (spatial) or ``T`` (temporal) is set.  ``weights``
    has the same shape as ``values`` and carries the cell measures used by
    every modular on this domain.
    """

    values: np.ndarray
    weights: np.ndarray = field(repr=False)
    grid: Grid2D | None = None
    T: float | None = None
    p_infinity: float | None = None

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        weights = np.broadcast_to(np.asarray(self.weights, dtype=float), values.shape).copy()
        if not np.all(np.isfinite(values)):
            raise DomainError("exponent values must be finite")
        if np.any(values <= 1.0):
            raise DomainError(f"exponent must satisfy p(x) > 1, min is {values.min()}")
        if (self.grid is None) == (self.T is None):
            raise ConfigurationError("an exponent lives on exactly one of a grid or a time interval")
        if self.grid is not None and values.shape != self.grid.shape:
            raise ShapeError(f"exponent shape {values.shape} does not match grid {self.grid.shape}")
        if self.T is not None and values.ndim != 1:
            raise ShapeError("temporal exponents are one-dimensional")
        values.setflags(write=False)
        weights.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "weights", weights)

    # --- constructors ---------------------------------------------------

    @classmethod
    def spatial(cls, grid: Grid2D, values, p_infinity: float | None = None) -> "Exponent":
        """Spatial exponent from a constant, an array, or a callable ``p(x1, x2)``."""
        if callable(values):
            x1, x2 = grid.mesh
            values = values(x1, x2)
        values = np.broadcast_to(np.asarray(values, dtype=float), grid.shape)
        return cls(values, np.full(grid.shape, grid.cell_area), grid=grid, p_infinity=p_infinity)

    @classmethod
    def temporal(cls, T: float, n_nodes: int, values) -> "Exponent":
        """Temporal exponent on ``n_nodes`` uniform nodes of ``[0, T]``."""
        if not T > 0:
            raise ConfigurationError(f"time interval length must be positive, got {T}")
        if callable(values):
            values = values(time_nodes(T, n_nodes))
        values = np.broadcast_to(np.asarray(values, dtype=float), (n_nodes,))
        return cls(values, time_weights(T, n_nodes), T=float(T))

    # --- cached summaries -----------------------------------------------

    @cached_property
    def p_minus(self) -> float:
        return float(self.values.min())

    @cached_property
    def p_plus(self) -> float:
        return float(self.values.max())

    @property
    def is_constant(self) -> bool:
        return self.p_minus == self.p_plus

    @property
    def measure(self) -> float:
        return float(self.weights.sum())

    @property
    def is_spatial(self) -> bool:
        return self.grid is not None

    @cached_property
    def nodes(self) -> np.ndarray:
        if self.T is None:
            raise DomainError("spatial exponents have no time nodes")
        return time_nodes(self.T, self.values.size)

    def with_values(self, values, p_infinity: float | None = None) -> "Exponent":
        return Exponent(values, self.weights, grid=self.grid, T=self.T, p_infinity=p_infinity)

    def same_domain(self, other: "Exponent") -> bool:
        return (
            self.values.shape == other.values.shape
            and self.grid == other.grid
            and self.T == other.T
        )


def conjugate_exponent(p: Exponent) -> Exponent:
    """Pointwise conjugate ``p' = p / (p - 1)``."""
    if p.p_minus <= 1.0:
        raise DomainError("the conjugate of an exponent touching 1 is unbounded")
    p_inf = None if p.p_infinity is None else p.p_infinity / (p.p_infinity - 1)
    return p.with_values(p.values / (p.values - 1.0), p_infinity=p_inf)


def harmonic_sum(p1: Exponent, p2: Exponent) -> Exponent:
    """Exponent ``p`` with ``1/p = 1/p1 + 1/p2``."""
    if not p1.same_domain(p2):
        raise ShapeError("exponents live on different domains")
    inv = 1.0 / p1.values + 1.0 / p2.values
    if np.any(inv >= 1.0):
        raise DomainError("harmonic sum of the exponents reaches 1; the product space is not normable")
    return p1.with_values(1.0 / inv)


# --- named analytic families ---------------------------------------------


def _spatial_family(name: str, grid: Grid2D, params: dict) -> Exponent:
    r = grid.radius
    x1, x2 = grid.mesh
    if name == "const":
        v = params["value"]
        return Exponent.spatial(grid, v, p_infinity=v)
    if name == "logdecay":
        base, amp = params.get("base", 3.0), params.get("amp", 1.0)
        return Exponent.spatial(grid, base + amp / np.log(np.e + r**2), p_infinity=base)
    if name == "gaussian":
        base, amp = params.get("base", 2.0), params.get("amp", 1.0)
        width = params.get("width", grid.box_side / 8)
        return Exponent.spatial(grid, base + amp * np.exp(-(r**2) / (2 * width**2)), p_infinity=base)
    if name == "wave":
        base, amp = params.get("base", 3.0), params.get("amp", 0.5)
        k = 2 * np.pi * params.get("k", 1.0) / grid.box_side
        return Exponent.spatial(grid, base + amp * np.cos(k * x1) * np.sin(k * x2))
    if name == "tanh":
        base, amp = params.get("base", 2.5), params.get("amp", 0.5)
        width = params.get("width", grid.box_side / 16)
        return Exponent.spatial(grid, base + amp * np.tanh((x1 - grid.center) / width))
    if name == "jump":
        lo, hi = params.get("lo", 2.0), params.get("hi", 3.0)
        return Exponent.spatial(grid, np.where(x1 - grid.center > 0, hi, lo))
    raise ConfigurationError(f"unknown spatial exponent family {name!r}")


def _temporal_family(name: str, T: float, n_nodes: int, params: dict) -> Exponent:
    if name == "const":
        return Exponent.temporal(T, n_nodes, params["value"])
    if name == "logdrift":
        base, amp = params.get("base", 4.0), params.get("amp", 0.5)
        return Exponent.temporal(T, n_nodes, lambda t: base + amp / np.log(np.e + t))
    if name == "linear":
        start, end = params.get("start", 4.0), params.get("end", 5.0)
        return Exponent.temporal(T, n_nodes, lambda t: start + (end - start) * t / T)
    raise ConfigurationError(f"unknown temporal exponent family {name!r}")


def parse_family(spec: str):
    """Split ``"name:key=val,key=val"`` (or ``"const:4"``) into name and params."""
    name, _, rest = spec.strip().partition(":")
    name = name.strip()
    params = {}
    if rest.strip():
        for item in rest.split(","):
            item = item.strip()
            if not item:
                continue
            key, eq, val = item.partition("=")
            try:
                if eq:
                    params[key.strip()] = float(val)
                else:
                    params["value"] = float(key)
            except ValueError:
                raise ConfigurationError(f"bad exponent parameter {item!r} in {spec!r}") from None
    if name == "const" and "value" not in params:
        raise ConfigurationError(f"constant exponent needs a value: {spec!r}")
    return name, params


def spatial_exponent(spec: str, grid: Grid2D) -> Exponent:
    name, params = parse_family(spec)
    return _spatial_family(name, grid, params)


def temporal_exponent(spec: str, T: float, n_nodes: int) -> Exponent:
    name, params = parse_family(spec)
    return _temporal_family(name, T, n_nodes, params)


# --- log-Hoelder diagnostics ---------------------------------------------


@dataclass
class LogHolderReport:
    c_local: float
    c_infinity: float
    p_infinity: float
    band_distances: np.ndarray
    band_moduli: np.ndarray
    non_log_holder: bool

    @property
    def is_log_holder(self) -> bool:
        return not self.non_log_holder


def log_holder_check(p: Exponent, max_points_per_side: int = 64, chunk: int = 512) -> LogHolderReport:
    """Smallest constants in the local and at-infinity log-Hoelder bounds.

    Pairs are taken over the grid nodes (subsampled to at most
    ``max_points_per_side`` per side) with Euclidean distances inside the box;
    the box centre is the origin.  ``band_moduli[j]`` is the largest
    ``|1/p(x) - 1/p(y)|`` among pairs at distance in ``[d_j, 2 d_j)``; a
    modulus that fails to shrink at the finest band marks a discontinuity.
    """
    if p.grid is None:
        raise DomainError("log-Hoelder diagnostics need a spatial exponent")
    grid = p.grid
    stride = max(1, grid.n_points // max_points_per_side)
    x1, x2 = grid.mesh
    xs = (x1[::stride, ::stride] - grid.center).ravel()
    ys = (x2[::stride, ::stride] - grid.center).ravel()
    inv = (1.0 / p.values[::stride, ::stride]).ravel()

    if p.p_infinity is not None:
        p_inf = float(p.p_infinity)
    else:
        ring = grid.radius >= 0.45 * grid.box_side
        p_inf = float(1.0 / np.mean(1.0 / p.values[ring]))

    rad = np.hypot(xs, ys)
    c_inf = float(np.max(np.abs(inv - 1.0 / p_inf) * np.log(np.e + rad)))

    d_min = stride * grid.spacing
    n_bands = int(np.ceil(np.log2(np.sqrt(2) * grid.box_side / d_min))) + 1
    band_mod = np.zeros(n_bands)
    c_loc = 0.0
    for start in range(0, xs.size, chunk):
        sl = slice(start, start + chunk)
        d = np.hypot(xs[sl, None] - xs[None, :], ys[sl, None] - ys[None, :])
        diff = np.abs(inv[sl, None] - inv[None, :])
        off = d > 0
        dd, df = d[off], diff[off]
        if dd.size:
            c_loc = max(c_loc, float(np.max(df * np.log(np.e + 1.0 / dd))))
            band = np.clip(np.floor(np.log2(dd / d_min + 1e-12)).astype(int), 0, n_bands - 1)
            np.maximum.at(band_mod, band, df)

    fine, coarse = band_mod[0], band_mod[1] if n_bands > 1 else 0.0
    jump = fine > 1e-12 and fine >= 0.75 * coarse
    return LogHolderReport(
        c_local=c_loc,
        c_infinity=c_inf,
        p_infinity=p_inf,
        band_distances=d_min * 2.0 ** np.arange(n_bands),
        band_moduli=band_mod,
        non_log_holder=bool(jump),
    )


# --- the embedding class --------------------------------------------------


@dataclass
class EmbeddingClassReport:
    member: bool
    p: float
    p_bar_minus: float
    p_bar_plus: float
    growth_profile: np.ndarray
    reason: str = ""


def embedding_class_check(p: float, p_bar: Exponent, n_rings: int = 12, rtol: float = 1e-9) -> EmbeddingClassReport:
    """Check ``p_bar`` against the embedding class for the constant exponent ``p``.

    On a finite box the growth condition on ``p p_bar / (p_bar - p)`` toward
    infinity is replaced by: the ring-wise minimum of that quantity is
    non-decreasing from the centre to the inscribed boundary and ends larger
    than it started.
    """
    if p_bar.grid is None:
        raise DomainError("the embedding class is defined for spatial exponents")
    grid = p_bar.grid
    with np.errstate(divide="ignore"):
        growth = np.where(p_bar.values > p, p * p_bar.values / (p_bar.values - p), np.inf)
    edges = np.linspace(0.0, grid.box_side / 2, n_rings + 1)
    profile = np.empty(n_rings)
    for i in range(n_rings):
        ring = (grid.radius >= edges[i]) & (grid.radius < edges[i + 1])
        profile[i] = growth[ring].min() if np.any(ring) else np.nan
    reason = ""
    finite = np.isfinite(profile)
    if p_bar.p_minus < p * (1 - rtol):
        reason = f"p_bar^- = {p_bar.p_minus:.6g} is below p = {p:.6g}"
    elif not finite.any():
        pass  # p_bar == p everywhere: the quantity is identically infinite
    elif not np.all(np.diff(np.where(finite, profile, np.inf)) >= -rtol * np.abs(profile[1:])):
        reason = "growth quantity is not monotone toward the boundary"
    elif not profile[-1] > profile[0]:
        reason = "growth quantity does not increase toward the boundary"
    return EmbeddingClassReport(
        member=not reason,
        p=float(p),
        p_bar_minus=p_bar.p_minus,
        p_bar_plus=p_bar.p_plus,
        growth_profile=profile,
        reason=reason,
    )
