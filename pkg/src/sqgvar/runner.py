"""Scenario orchestration: run the requested checks and collect their results."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, PreconditionError
from .estimates import EstimateScenario, estimate_suite
from .fields import gaussian_bump
from .grid import Grid2D
from .lab import (
    GROWTH_LIMIT,
    duality_sweep,
    embedding_sweep,
    estimate_family,
    exponent_family,
    measure_space_constants,
    norm_axiom_sweep,
)
from .regularity import MultiIndex, gaussian_lp_norm, regularity_report, scaling_check
from .report import FAIL, PASS, WARN, CheckResult, Table, emit_report, overall_status
from .scenario import Scenario
from .semigroup import DecayProbe, measure_decay_slope
from .solver import SolverConfig, Trajectory, data_norm, fixed_point_residual, picard_solve, smallness_threshold
from .varlebesgue.checks import embedding_class_ratio
from .varlebesgue.exponent import log_holder_check, spatial_exponent
from .varlebesgue.norms import classical_lp_norm, xt_norm

log = logging.getLogger(__name__)

EXIT_OK, EXIT_CHECK, EXIT_CONFIG, EXIT_IO = 0, 1, 2, 3

DECAY_ALPHAS = (1.2, 1.5, 2.0)
DECAY_CASES = ((2.0, np.inf, 0.0), (1.0, 2.0, 0.0), (2.0, 2.0, 1.0), (2.0, 4.0, 0.0))
CONTRACTION_LIMIT = 0.75
BALL_RTOL = 1e-6
AXIOM_PAIRS = 10
SECOND_GUESS_SCALE = 1.5


def _g(x) -> str:
    return f"{x:.6g}"


@dataclass
class RunContext:
    scenario: Scenario
    config: SolverConfig
    theta0: object
    forcing: Trajectory | None
    cache: dict = field(default_factory=dict)

    @property
    def grid(self) -> Grid2D:
        return self.config.grid

    def space_constants(self) -> dict:
        if "space" not in self.cache:
            sc = self.scenario
            self.cache["space"] = {
                n: measure_space_constants(Grid2D(n, sc.box_side), sc.seed) for n in sorted(sc.stability_grids)
            }
        return self.cache["space"]

    def estimate_scenarios(self, grid: Grid2D) -> list:
        family = estimate_family(grid, self.scenario.seed)
        if grid == self.grid and (np.any(self.theta0.values) or self.forcing is not None):
            f = None if self.forcing is None else self.forcing.field(0)
            family.insert(0, EstimateScenario("scenario", self.theta0, f))
        return family

    def estimate_report(self):
        if "estimates" not in self.cache:
            self.cache["estimates"] = estimate_suite(self.config, self.estimate_scenarios(self.grid))
        return self.cache["estimates"]

    def smallness(self):
        rep = self.estimate_report()
        threshold = smallness_threshold(self.config, rep.C1, rep.C2)
        size = data_norm(self.theta0, self.forcing, self.config)
        return size, threshold, size <= threshold

    def picard(self):
        if "picard" not in self.cache:
            self.cache["picard"] = picard_solve(self.theta0, self.forcing, self.config)
        return self.cache["picard"]


# --- individual checks ---------------------------------------------------------


def check_decay_slopes(ctx: RunContext, spec) -> CheckResult:
    sc = ctx.scenario
    grid = Grid2D(sc.decay_grid or sc.grid_n, sc.box_side)
    lines, tables, ok = [f"grid {grid.n_points}"], {}, True
    for alpha in DECAY_ALPHAS:
        for p, q, nu in DECAY_CASES:
            rep = measure_decay_slope(DecayProbe(grid, alpha, p, q, nu))
            ok &= rep.passed
            qs = "inf" if np.isinf(q) else f"{q:g}"
            name = f"slope_a{alpha:g}_p{p:g}_q{qs}_nu{nu:g}"
            lines.append(
                f"alpha={alpha:g} p={p:g} q={qs} nu={nu:g}: slope {rep.measured_slope:.5f} "
                f"theory {rep.theoretical_slope:.5f} r2 {rep.r_squared:.6f} {'ok' if rep.passed else 'FAILED'}"
            )
            tables[name] = Table(
                ["t", "norm"], [[t, v] for t, v in rep.per_time_norms],
                [["fitted_slope", rep.measured_slope], ["theoretical_slope", rep.theoretical_slope],
                 ["r_squared", rep.r_squared]],
            )
    return CheckResult("decay_slopes", spec.label, PASS if ok else FAIL, lines, tables)


def check_norm_axioms(ctx: RunContext, spec) -> CheckResult:
    s = norm_axiom_sweep(ctx.grid, AXIOM_PAIRS, ctx.scenario.seed)
    ok = s.constant_agreement <= 1e-8 and s.homogeneity <= 1e-10 and s.triangle_excess <= 1e-10 \
        and s.unit_modular <= 1e-8
    lines = [
        f"constant-exponent agreement (rel) {s.constant_agreement:.3e} (limit 1e-8)",
        f"homogeneity defect (rel) {s.homogeneity:.3e} (limit 1e-10)",
        f"triangle excess (rel) {s.triangle_excess:.3e} (limit 1e-10)",
        f"unit modular |rho - 1| {s.unit_modular:.3e} (limit 1e-8)",
        f"{s.pairs} random pairs per exponent family",
    ]
    return CheckResult("norm_axioms", spec.label, PASS if ok else FAIL, lines)


def _stability(ctx: RunContext, spec, names) -> CheckResult:
    consts = ctx.space_constants()
    grids = sorted(consts)
    lines, rows, ok = [], [], True
    for name in names:
        vals = [consts[n][name] for n in grids]
        growth = vals[-1] / vals[0] if vals[0] > 0 else float("inf")
        ok &= growth <= GROWTH_LIMIT
        lines.append(f"{name}: " + ", ".join(f"N={n} {_g(v)}" for n, v in zip(grids, vals))
                     + f"; growth {growth:.4f} (limit {GROWTH_LIMIT:g})")
        rows += [[name, n, v] for n, v in zip(grids, vals)]
    table = Table(["constant", "grid", "value"], rows)
    return CheckResult(spec.name, spec.label, PASS if ok else WARN, lines, {f"constants_{spec.name}": table})


def check_holder(ctx, spec):
    return _stability(ctx, spec, ["holder"])


def check_maximal(ctx, spec):
    res = _stability(ctx, spec, ["maximal", "riesz_transform"])
    for name, p in exponent_family(ctx.grid).items():
        lh = log_holder_check(p)
        res.lines.append(
            f"log-Hoelder {name}: C_local {_g(lh.c_local)}, C_infinity {_g(lh.c_infinity)}"
            + (" (not log-Hoelder)" if lh.non_log_holder else "")
        )
    jump = log_holder_check(spatial_exponent("jump:lo=2,hi=3", ctx.grid))
    res.lines.append(f"log-Hoelder jump exponent flagged: {jump.non_log_holder}")
    return res


def check_riesz_potential(ctx, spec):
    return _stability(ctx, spec, ["riesz_potential"])


def check_duality(ctx: RunContext, spec) -> CheckResult:
    results = duality_sweep(ctx.grid, ctx.scenario.seed)
    ok = all(r.passed for _, r in results)
    lo = min(r.lower_ratio for _, r in results if not r.vacuous)
    hi = max(r.upper_ratio for _, r in results if not r.vacuous)
    lines = [f"{len(results)} cases, canonical witness included",
             f"S/||f|| in [{lo:.12f}, {hi:.12f}]; required [0.5, 2] with slack 1e-6"]
    lines += [f"FAILED {label}" for label, r in results if not r.passed]
    return CheckResult("duality", spec.label, PASS if ok else FAIL, lines)


def check_embedding(ctx: RunContext, spec) -> CheckResult:
    results = embedding_sweep(ctx.grid, ctx.scenario.seed)
    applicable = [(label, r) for label, r in results if r.applicable]
    ok = all(r.passed for _, r in results)
    bound = applicable[0][1].bound if applicable else float("nan")
    worst = max((r.ratio for _, r in applicable), default=float("nan"))
    lines = [f"{len(applicable)} applicable cases, largest ratio {_g(worst)}, bound 1+|Omega| = {_g(bound)}"]
    skipped = sorted({label.split(" / ")[0] for label, r in results if not r.applicable})
    lines += [f"{s}: embedding not applicable" for s in skipped]
    cfg = ctx.config
    if np.any(ctx.theta0.values):
        try:
            ratio = embedding_class_ratio(ctx.theta0, cfg.p, cfg.p_bar)
            lines.append(f"||theta0||_p / ||theta0||_p_bar = {_g(ratio)} (report only)")
        except ValueError as exc:
            lines.append(f"embedding class: {exc}")
    lines += [f"FAILED {label}" for label, r in results if not r.passed]
    return CheckResult("embedding", spec.label, PASS if ok else FAIL, lines)


def _picard_tables(run, config: SolverConfig) -> dict:
    sol = run.solution
    norms = sol.spatial_norms()
    q = config.q_exponent
    lam = xt_norm(norms, q).norm_value
    if lam > 0:
        partial = np.cumsum(q.weights * (norms / lam) ** q.values)
    else:
        partial = np.zeros_like(norms)
    series = Table(["t", "lp_norm", "xt_partial_modular"],
                   [[float(t), float(n), float(m)] for t, n, m in zip(config.times, norms, partial)])
    iterates = Table(["iterate", "xt_norm", "residual", "contraction_ratio"],
                     [[s.iterate_index, s.xt_norm, s.residual, s.contraction_ratio] for s in run.states])
    return {"picard_timeseries": series, "picard_iterates": iterates}


def check_picard(ctx: RunContext, spec) -> CheckResult:
    cfg = ctx.config
    run = ctx.picard()
    size, threshold, small = ctx.smallness()
    lines = [
        f"data norm {_g(size)}, smallness threshold {_g(threshold)}: "
        + ("condition holds" if small else "condition violated"),
        f"eta = {_g(run.eta)}; {run.message}",
        "contraction ratios: " + ", ".join(
            f"{s.iterate_index}:{'-' if not np.isfinite(s.contraction_ratio) else f'{s.contraction_ratio:.4f}'}"
            for s in run.states),
    ]
    for v in getattr(cfg, "violations", ()):
        lines.append(f"index constraint: {v} (diagnostic run)")
    hard_ok = True
    fields = {"theta0": ctx.theta0}
    if ctx.forcing is not None:
        fields["forcing"] = ctx.forcing.field(0)
    if run.diverged or not run.converged:
        status = FAIL if small else WARN
        lines.append("no converged solution" + ("" if small else "; recorded, not asserted"))
        return CheckResult("picard", spec.label, status, lines, {}, fields)
    sol = run.solution
    norm = sol.xt_norm()
    resid = fixed_point_residual(sol, run.linear, cfg)
    resid_limit = 2 * cfg.picard_tol * max(1.0, norm)
    ratios = [r for r in run.contraction_ratios[1:] if np.isfinite(r)]
    worst = max(ratios, default=0.0)
    ball = 2 * run.eta * (1 + BALL_RTOL)
    # starting from L itself only replays the zero-start sequence one step ahead
    other = picard_solve(ctx.theta0, ctx.forcing, cfg, initial_guess=run.linear * SECOND_GUESS_SCALE,
                         keep_history=False)
    dist = (other.solution - sol).xt_norm() if other.converged else float("inf")
    dist_limit = 10 * cfg.picard_tol * max(1.0, norm)
    checks = [
        (f"fixed-point residual {resid:.3e} (limit {resid_limit:.3e})", resid <= resid_limit),
        (f"largest contraction ratio from iterate 2 {worst:.4f} (limit {CONTRACTION_LIMIT})",
         worst <= CONTRACTION_LIMIT),
        (f"||theta|| = {_g(norm)} vs 2 eta = {_g(2 * run.eta)}", norm <= ball),
        (f"second start ({SECOND_GUESS_SCALE:g} x linear part): distance {dist:.3e} (limit {dist_limit:.3e})", dist <= dist_limit),
    ]
    for text, ok in checks:
        lines.append(text + ("" if ok else " FAILED"))
        hard_ok &= ok
    lines.append(f"iterations: {run.iterations}")
    fields["theta_T"] = sol.field(cfg.n_time - 1)
    status = PASS if hard_ok else (FAIL if small else WARN)
    return CheckResult("picard", spec.label, status, lines, _picard_tables(run, cfg), fields)


def check_estimates(ctx: RunContext, spec) -> CheckResult:
    rep = ctx.estimate_report()
    size, threshold, small = ctx.smallness()
    lines = [f"C1 (fit) {_g(rep.C1)}, C2 (fit) {_g(rep.C2)}; row maxima {_g(rep.C1_max)}, {_g(rep.C2_max)}",
             f"smallness: data norm {_g(size)} vs threshold {_g(threshold)} "
             + ("(holds)" if small else "(violated)")]
    lines += rep.notes
    rows = [[r.scenario, r.T, r.time_factor, r.linear_ratio, r.forcing_ratio, r.forcing_ratio_lq,
             r.bilinear_ratio, r.forcing_l1, r.forcing_lq] for r in rep.rows]
    tables = {"estimates": Table(["scenario", "T", "time_factor", "linear_ratio", "forcing_ratio_l1",
                                  "forcing_ratio_lq", "bilinear_ratio", "forcing_l1", "forcing_lq"], rows)}
    sc = ctx.scenario
    per_grid = {}
    for n in sorted(sc.stability_grids):
        cfg = ctx.config.with_(grid=Grid2D(n, sc.box_side))
        r = estimate_suite(cfg, estimate_family(cfg.grid, sc.seed))
        per_grid[n] = (r.C1, r.C2)
    grids = sorted(per_grid)
    ok = True
    for k, name in enumerate(("C1", "C2")):
        vals = [per_grid[n][k] for n in grids]
        growth = vals[-1] / vals[0] if vals[0] > 0 else float("inf")
        ok &= growth <= GROWTH_LIMIT
        lines.append(f"{name}: " + ", ".join(f"N={n} {_g(v)}" for n, v in zip(grids, vals))
                     + f"; growth {growth:.4f} (limit {GROWTH_LIMIT:g})")
    return CheckResult("estimates", spec.label, PASS if ok else WARN, lines, tables)


def check_regularity(ctx: RunContext, spec) -> CheckResult:
    beta = MultiIndex.parse(spec.arg)
    run = ctx.picard()
    try:
        rep = regularity_report(run, beta)
    except PreconditionError as exc:
        return CheckResult("regularity", spec.label, FAIL, [str(exc)])
    lines = [f"fixed-point residual {rep.fixed_point_residual:.3e}"]
    for e in rep.entries:
        lines.append(
            f"gamma {e.gamma}: ||D theta|| {_g(e.direct_norm)} bound 2 eta {_g(e.bound)}"
            f"{'' if e.within_bound else ' EXCEEDED'}; distance {e.fixed_point_distance:.3e}"
        )
    rows = [[str(e.gamma), e.direct_norm, e.eta, e.bound, e.fixed_point_distance, e.fixed_point_iterations]
            for e in rep.entries]
    table = Table(["gamma", "direct_norm", "eta", "bound", "distance", "iterations"], rows)
    status = PASS if rep.passed() else FAIL
    return CheckResult("regularity", spec.label, status, lines, {f"regularity_{beta.g1}_{beta.g2}": table})


def check_scaling(ctx: RunContext, spec) -> CheckResult:
    lam = int(float(spec.arg))
    grid = ctx.grid
    width = grid.box_side / 32
    rep = scaling_check(gaussian_bump(grid, width), lam, ctx.config.alpha)
    oracle = gaussian_lp_norm(1.0, width, rep.critical_exponent)
    measured = classical_lp_norm(gaussian_bump(grid, width).values, rep.critical_exponent, grid.cell_area)
    lines = [
        f"lambda {lam}, critical exponent {rep.critical_exponent:g}: ratio {rep.critical_ratio:.10f} (expect 1)",
        f"contrast p={rep.contrast_exponent:g}: ratio {rep.contrast_ratio:.10f} (expect {rep.contrast_expected:.10f})",
        f"Gaussian closed form: discrete {measured:.10f} vs {oracle:.10f}",
    ]
    return CheckResult("scaling", spec.label, PASS if rep.passed() else FAIL, lines)


CHECKS = {
    "decay_slopes": check_decay_slopes,
    "norm_axioms": check_norm_axioms,
    "holder": check_holder,
    "duality": check_duality,
    "embedding": check_embedding,
    "maximal": check_maximal,
    "riesz_potential": check_riesz_potential,
    "picard": check_picard,
    "estimates": check_estimates,
    "regularity": check_regularity,
    "scaling": check_scaling,
}


# --- orchestration ---------------------------------------------------------------


def prepare(scenario: Scenario) -> RunContext:
    """Validate and build every input; raises ``ConfigurationError`` before any heavy work."""
    config = scenario.config()
    theta0 = scenario.initial_data()
    forcing = scenario.forcing_trajectory(config)
    return RunContext(scenario, config, theta0, forcing)


def header_lines(scenario: Scenario) -> list:
    sc = scenario
    return [
        f"scenario {sc.name}",
        f"grid {sc.grid_n}, box side {sc.box_side!r}, seed {sc.seed}",
        f"alpha {sc.alpha:g}, p {sc.p:g}, q {sc.q}, p_bar {sc.p_bar}, T {sc.T:g}, n_time {sc.n_time}",
        f"theta0 = {sc.theta0} (amplitude {sc.theta0_amplitude:g}); forcing = {sc.forcing}"
        + ("" if sc.forcing == "zero" else f" (amplitude {sc.forcing_amplitude:g})"),
        f"mean projection {'on' if sc.project_mean else 'off'}; stability grids "
        + " ".join(str(n) for n in sc.stability_grids),
    ]


def run_checks(ctx: RunContext) -> list:
    results = []
    for spec in ctx.scenario.ordered_checks():
        log.info("running %s", spec.label)
        results.append(CHECKS[spec.name](ctx, spec))
    return results


@dataclass
class RunOutcome:
    exit_code: int
    results: list
    message: str = ""
    written: list = field(default_factory=list)


def run_scenario(scenario: Scenario, out_dir, strict: bool = False) -> RunOutcome:
    """Run every check and write the artifacts.

    Exit codes: 0 all hard checks pass, 1 a check failed (or warned under
    ``strict``), 2 invalid configuration, 3 output could not be written.
    """
    try:
        ctx = prepare(scenario)
        if not scenario.checks:
            raise ConfigurationError("scenario lists no checks")
    except ConfigurationError as exc:
        return RunOutcome(EXIT_CONFIG, [], f"configuration error: {exc}")
    results = run_checks(ctx)
    try:
        written = emit_report(results, out_dir, header_lines(scenario), strict)
    except OSError as exc:
        return RunOutcome(EXIT_IO, results, f"I/O error: {exc}")
    status = overall_status(results, strict)
    code = EXIT_CHECK if status == FAIL else EXIT_OK
    return RunOutcome(code, results, f"overall {status}", written)
