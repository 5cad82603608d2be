"""Fixed test families and resolution sweeps for the existential constants.

The families are defined in box coordinates, so the same continuum objects
are sampled at every resolution and measured constants can be compared
across grids.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .estimates import EstimateScenario, estimate_suite
from .fields import difference_of_gaussians, gaussian_bump, random_bandlimited, single_mode
from .grid import Grid2D, make_grid
from .solver import SolverConfig
from .varlebesgue.checks import (
    dual_sandwich_check,
    embedding_check,
    holder_product_check,
    maximal_ratio,
    norm_axioms,
    riesz_potential_ratio,
    riesz_transform_ratio,
)
from .varlebesgue.exponent import Exponent, spatial_exponent
from .varlebesgue.norms import classical_lp_norm, luxemburg_norm

GROWTH_LIMIT = 2.0
POTENTIAL_BETA = 0.5

SPATIAL_FAMILIES = {
    "logdecay": "logdecay:base=3,amp=1",
    "wave": "wave:base=3,amp=0.5",
    "tanh": "tanh:base=2.5,amp=0.5",
    "gaussian": "gaussian:base=2,amp=1",
}


def exponent_family(grid: Grid2D) -> dict:
    return {name: spatial_exponent(spec, grid) for name, spec in SPATIAL_FAMILIES.items()}


def field_family(grid: Grid2D, seed: int = 0) -> list:
    """Mean-zero test fields: smooth modes, a localized pair and band-limited noise."""
    L = grid.box_side
    bump = gaussian_bump(grid, L / 20, x1=0.4 * L, x2=0.55 * L)
    top = grid.n_points // 3 - 1
    return [
        (single_mode(grid, 1, 0) + single_mode(grid, 2, 3, "cos")).projected_mean_zero(),
        difference_of_gaussians(grid, L / 24),
        bump.projected_mean_zero(),
        random_bandlimited(grid, seed=seed, band=min(6, top)),
        random_bandlimited(grid, seed=seed + 1, band=min(10, top), decay=0.5),
    ]


def measure_space_constants(grid: Grid2D, seed: int = 0) -> dict:
    """Largest ratio over the family for each inequality with an unspecified constant."""
    fields = field_family(grid, seed)
    exps = exponent_family(grid)
    p1, p2 = exps["logdecay"], exps["wave"]
    holder = max(holder_product_check(f, g, p1, p2) for f in fields for g in fields)
    maximal = max(maximal_ratio(f, p) for f in fields for p in exps.values())
    riesz = max(riesz_transform_ratio(f, p, j) for f in fields for p in exps.values() for j in (1, 2))
    pot_exps = [p for p in exps.values() if POTENTIAL_BETA * p.p_plus < 2]
    potential = max(riesz_potential_ratio(f, p, POTENTIAL_BETA) for f in fields for p in pot_exps)
    return {"holder": holder, "maximal": maximal, "riesz_transform": riesz, "riesz_potential": potential}


def estimate_family(grid: Grid2D, seed: int = 0) -> list:
    return [
        EstimateScenario("modes", single_mode(grid, 1, 1) + single_mode(grid, 1, -2, "cos")),
        EstimateScenario("bandlimited", random_bandlimited(grid, seed=seed, band=6),
                         forcing=single_mode(grid, 1, 1, "cos")),
        EstimateScenario("dog", difference_of_gaussians(grid, grid.box_side / 16),
                         forcing=single_mode(grid, 0, 2, "sin", amplitude=0.5)),
    ]


def measure_estimate_constants(config: SolverConfig, seed: int = 0, T_values=(0.1, 0.2, 0.4)) -> dict:
    report = estimate_suite(config, estimate_family(config.grid, seed), T_values)
    return {"linear": report.C1, "bilinear": report.C2, "report": report}


@dataclass
class StabilityRow:
    name: str
    values: dict
    limit: float = GROWTH_LIMIT

    @property
    def growth(self) -> float:
        keys = sorted(self.values)
        lo, hi = self.values[keys[0]], self.values[keys[-1]]
        return hi / lo if lo > 0 else float("inf")

    @property
    def stable(self) -> bool:
        return self.growth <= self.limit


@dataclass
class StabilityReport:
    grids: tuple
    rows: list = field(default_factory=list)

    @property
    def stable(self) -> bool:
        return all(r.stable for r in self.rows)

    def row(self, name: str) -> StabilityRow:
        return next(r for r in self.rows if r.name == name)


def stability_sweep(grids=(64, 256), seed: int = 0, config: SolverConfig | None = None,
                    include_estimates: bool = True) -> StabilityReport:
    """Measure every constant on each grid; growth is finest over coarsest."""
    grids = tuple(sorted(int(n) for n in grids))
    values: dict = {}
    for n in grids:
        grid = make_grid(n) if config is None else Grid2D(n, config.grid.box_side)
        for name, v in measure_space_constants(grid, seed).items():
            values.setdefault(name, {})[n] = v
        if include_estimates:
            cfg = SolverConfig(grid, p_bar_family="logdecay:base=6,amp=1") if config is None \
                else config.with_(grid=grid)
            est = measure_estimate_constants(cfg, seed)
            values.setdefault("linear", {})[n] = est["linear"]
            values.setdefault("bilinear", {})[n] = est["bilinear"]
    return StabilityReport(grids, [StabilityRow(name, vals) for name, vals in values.items()])



# --- sweeps with fixed, stated constants ---------------------------------------


def random_pair(grid: Grid2D, rng: np.random.Generator):
    """Two band-limited fields, one with a mean offset, with seeds drawn from ``rng``."""
    s1, s2 = (int(s) for s in rng.integers(0, 2**31, size=2))
    top = min(12, grid.n_points // 3)
    f = random_bandlimited(grid, seed=s1, band=int(rng.integers(2, top)), amplitude=float(rng.uniform(0.1, 5)))
    g = random_bandlimited(grid, seed=s2, band=int(rng.integers(2, top)), amplitude=float(rng.uniform(0.1, 5)))
    return f + float(rng.normal()), g


@dataclass
class AxiomSummary:
    constant_agreement: float
    homogeneity: float
    triangle_excess: float
    unit_modular: float
    pairs: int


def norm_axiom_sweep(grid: Grid2D, n_pairs: int = 50, seed: int = 0,
                     classical_p=(1.5, 2.0, 3.0, 8.0)) -> AxiomSummary:
    """Worst defects over ``n_pairs`` random pairs for every exponent family.

    ``triangle_excess`` is relative to ``||f|| + ||g||``; ``unit_modular`` is
    ``|rho(f / ||f||) - 1|``.
    """
    rng = np.random.default_rng(seed)
    agree = 0.0
    for f in field_family(grid, seed):
        for p in classical_p:
            lux = luxemburg_norm(f, Exponent.spatial(grid, p)).norm_value
            ref = classical_lp_norm(f, p)
            agree = max(agree, abs(lux - ref) / ref)
    homog = tri = unit = 0.0
    for p in exponent_family(grid).values():
        for _ in range(n_pairs):
            f, g = random_pair(grid, rng)
            scale = float(rng.uniform(-10, 10))
            d = norm_axioms(f, g, p, scale)
            homog = max(homog, d["homogeneity_rel"])
            nf = luxemburg_norm(f, p).norm_value
            ng = luxemburg_norm(g, p).norm_value
            tri = max(tri, d["triangle_excess"] / (nf + ng))
            unit = max(unit, abs(d["unit_modular"] - 1.0))
    return AxiomSummary(agree, homog, tri, unit, n_pairs)


def duality_sweep(grid: Grid2D, seed: int = 0) -> list:
    """Sandwich results for every (field, exponent); the dictionary is the family itself."""
    fields = field_family(grid, seed)
    out = []
    for name, p in exponent_family(grid).items():
        for i, f in enumerate(fields):
            res = dual_sandwich_check(f, p, fields, include_witness=True)
            out.append((f"{name}/field{i}", res))
    return out


EMBEDDING_PAIRS = (
    ("const:2", "logdecay:base=3,amp=1"),
    ("gaussian:base=2,amp=1", "const:3"),
    ("tanh:base=2.5,amp=0.5", "const:3.5"),
    ("wave:base=3,amp=0.5", "logdecay:base=3.5,amp=1"),
    ("const:4", "const:2"),
)


def embedding_sweep(grid: Grid2D, seed: int = 0) -> list:
    """Embedding results on the box; the last pair is deliberately reversed."""
    fields = field_family(grid, seed)
    out = []
    for s1, s2 in EMBEDDING_PAIRS:
        p1, p2 = spatial_exponent(s1, grid), spatial_exponent(s2, grid)
        for i, f in enumerate(fields):
            out.append((f"{s1} <= {s2} / field{i}", embedding_check(f, p1, p2)))
    return out
