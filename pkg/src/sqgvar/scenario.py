"""Scenario files: flat ``key = value`` text with ``#`` comments.

Example::

    name = small_data
    grid = 128
    alpha = 1.5
    p = 6
    q = const:10
    p_bar = logdecay:base=6,amp=1
    theta0 = single_mode:k1=1,k2=1,kind=sin + single_mode:k1=1,k2=-2,kind=cos
    theta0_amplitude = 1.0
    forcing = zero
    checks = picard estimates regularity:1,1 scaling:2

Exponents name an analytic family (``const:4``, ``logdrift:base=4,amp=0.5``)
and are sampled by the loader.  Fields are ``+``-separated generator terms.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from pathlib import Path

import numpy as np

from .errors import ConfigurationError
from .fields import build_field, parse_generator
from .grid import Grid2D, ScalarField, is_mean_zero
from .regularity import MultiIndex
from .solver import SolverConfig, Trajectory

CHECK_ORDER = (
    "decay_slopes",
    "norm_axioms",
    "holder",
    "duality",
    "embedding",
    "maximal",
    "riesz_potential",
    "picard",
    "estimates",
    "regularity",
    "scaling",
)
_CHECKS_WITH_ARG = {"regularity", "scaling"}

_FLOAT_KEYS = {"box_side", "alpha", "T", "p", "picard_tol", "theta0_amplitude", "forcing_amplitude"}
_INT_KEYS = {"grid", "n_time", "picard_max_iter", "seed", "decay_grid"}
_BOOL_KEYS = {"dealias", "strict_indices"}
_STR_KEYS = {"name", "q", "p_bar", "theta0", "forcing", "checks", "stability_grids"}
KNOWN_KEYS = _FLOAT_KEYS | _INT_KEYS | _BOOL_KEYS | _STR_KEYS


def _parse_bool(text: str, key: str) -> bool:
    low = text.strip().lower()
    if low in ("1", "true", "yes", "on"):
        return True
    if low in ("0", "false", "no", "off"):
        return False
    raise ConfigurationError(f"{key} must be a boolean, got {text!r}")


def parse_config_text(text: str, source: str = "<string>") -> dict:
    """Raw key-value pairs with typed values; unknown or repeated keys are errors."""
    out = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, eq, value = line.partition("=")
        key, value = key.strip(), value.strip()
        where = f"{source}:{lineno}"
        if not eq or not key:
            raise ConfigurationError(f"{where}: expected 'key = value', got {raw.strip()!r}")
        if key not in KNOWN_KEYS:
            raise ConfigurationError(f"{where}: unknown key {key!r}")
        if key in out:
            raise ConfigurationError(f"{where}: key {key!r} given twice")
        try:
            if key in _FLOAT_KEYS:
                out[key] = float(value)
            elif key in _INT_KEYS:
                out[key] = int(value)
            elif key in _BOOL_KEYS:
                out[key] = _parse_bool(value, key)
            else:
                out[key] = value
        except ValueError:
            raise ConfigurationError(f"{where}: bad value for {key}: {value!r}") from None
    return out


@dataclass(frozen=True)
class CheckSpec:
    name: str
    arg: str = ""

    @classmethod
    def parse(cls, token: str) -> "CheckSpec":
        name, _, arg = token.partition(":")
        if name not in CHECK_ORDER:
            raise ConfigurationError(f"unknown check {name!r}; known: {', '.join(CHECK_ORDER)}")
        if name in _CHECKS_WITH_ARG and not arg:
            raise ConfigurationError(f"check {name!r} needs an argument, e.g. regularity:1,1 or scaling:2")
        if name not in _CHECKS_WITH_ARG and arg:
            raise ConfigurationError(f"check {name!r} takes no argument")
        if name == "regularity":
            MultiIndex.parse(arg)
        if name == "scaling":
            try:
                lam = float(arg)
            except ValueError:
                raise ConfigurationError(f"scaling factor must be a number, got {arg!r}") from None
            if lam not in (1, 2, 4):
                raise ConfigurationError(f"scaling factor must be 1, 2 or 4 on the torus, got {arg}")
        return cls(name, arg)

    @property
    def label(self) -> str:
        return f"{self.name}:{self.arg}" if self.arg else self.name

    def sort_key(self):
        return (CHECK_ORDER.index(self.name), self.arg)


def _with_seed(spec: str, seed: int) -> str:
    """Give every random term without an explicit seed the scenario seed."""
    terms = []
    for term in spec.split("+"):
        name, kwargs = parse_generator(term)
        if name == "random_bandlimited" and "seed" not in kwargs:
            term = term.strip() + ("," if ":" in term else ":") + f"seed={seed}"
        terms.append(term.strip())
    return " + ".join(terms)


@dataclass(frozen=True)
class Scenario:
    name: str
    grid_n: int = 128
    box_side: float = 2 * np.pi
    alpha: float = 1.5
    T: float = 0.25
    n_time: int = 32
    p: float = 6.0
    q: str = "const:10"
    p_bar: str = "logdecay:base=6,amp=1"
    dealias: bool = True
    picard_tol: float = 1e-9
    picard_max_iter: int = 60
    strict_indices: bool = True
    theta0: str = "zero"
    theta0_amplitude: float = 1.0
    forcing: str = "zero"
    forcing_amplitude: float = 1.0
    seed: int = 0
    checks: tuple = field(default_factory=tuple)
    stability_grids: tuple = (64, 256)
    decay_grid: int = 0
    project_mean: bool = False

    def __post_init__(self):
        for spec in (self.theta0, self.forcing):
            if spec.strip() != "zero":
                for term in spec.split("+"):
                    parse_generator(term)
        if len(self.stability_grids) < 2:
            raise ConfigurationError("stability_grids needs at least two resolutions")
        for n in self.stability_grids + ((self.decay_grid,) if self.decay_grid else ()):
            Grid2D(n, self.box_side)

    @property
    def grid(self) -> Grid2D:
        return Grid2D(self.grid_n, self.box_side)

    def config(self, grid: Grid2D | None = None) -> SolverConfig:
        return SolverConfig(
            grid or self.grid, alpha=self.alpha, T=self.T, n_time=self.n_time, p=self.p,
            q_family=self.q, p_bar_family=self.p_bar, dealias=self.dealias,
            picard_tol=self.picard_tol, picard_max_iter=self.picard_max_iter,
            strict_indices=self.strict_indices,
        )

    def _field(self, spec: str, amplitude: float, what: str) -> ScalarField | None:
        grid = self.grid
        if spec.strip() == "zero":
            return None
        f = build_field(_with_seed(spec, self.seed), grid, amplitude)
        if self.project_mean:
            return f.projected_mean_zero()
        if np.any(f.values) and not is_mean_zero(grid, f.values):
            raise ConfigurationError(
                f"{what} has nonzero mean {f.mean:.3e}; the velocity law needs mean-zero data "
                "(use --project-mean to subtract it)"
            )
        return ScalarField(grid, f.values, mean_zero=True)

    def initial_data(self) -> ScalarField:
        f = self._field(self.theta0, self.theta0_amplitude, "initial data")
        return ScalarField.zeros(self.grid) if f is None else f

    def forcing_field(self) -> ScalarField | None:
        return self._field(self.forcing, self.forcing_amplitude, "forcing")

    def forcing_trajectory(self, config: SolverConfig) -> Trajectory | None:
        f = self.forcing_field()
        return None if f is None else Trajectory.constant(config, f)

    def ordered_checks(self) -> list:
        return sorted(self.checks, key=CheckSpec.sort_key)

    def with_(self, **changes) -> "Scenario":
        return replace(self, **changes)


def scenario_from_dict(values: dict, default_name: str = "scenario") -> Scenario:
    kw = dict(values)
    if "grid" in kw:
        kw["grid_n"] = kw.pop("grid")
    if "checks" in kw:
        tokens = kw["checks"].split()
        specs = tuple(CheckSpec.parse(t) for t in tokens)
        if len(set(specs)) != len(specs):
            raise ConfigurationError("a check is listed twice")
        kw["checks"] = specs
    if "stability_grids" in kw:
        try:
            kw["stability_grids"] = tuple(int(s) for s in kw["stability_grids"].split())
        except ValueError:
            raise ConfigurationError(f"stability_grids must be integers: {kw['stability_grids']!r}") from None
    kw.setdefault("name", default_name)
    return Scenario(**kw)


def parse_scenario(text: str, source: str = "<string>", default_name: str = "scenario") -> Scenario:
    return scenario_from_dict(parse_config_text(text, source), default_name)


def load_scenario(path) -> Scenario:
    path = Path(path)
    text = path.read_text(encoding="utf-8")
    return parse_scenario(text, str(path), default_name=path.stem)
