import csv
from pathlib import Path

import pytest

from sqgvar import ConfigurationError, PreconditionError
from sqgvar.cli import main
from sqgvar.report import CheckResult, Table, emit_report, table_text
from sqgvar.runner import EXIT_CHECK, EXIT_CONFIG, EXIT_IO, EXIT_OK, run_scenario
from sqgvar.scenario import CheckSpec, load_scenario, parse_config_text, parse_scenario

SCENARIOS = Path(__file__).resolve().parent.parent / "scenarios"

SMALL = """
name = small
grid = 32
n_time = 8
theta0 = single_mode:k1=1,k2=1,kind=sin + single_mode:k1=1,k2=-2,kind=cos
stability_grids = 32 64
checks = picard
"""


def test_config_errors_name_the_line():
    with pytest.raises(ConfigurationError, match="<string>:2"):
        parse_config_text("grid = 32\nbogus = 1\n")
    with pytest.raises(ConfigurationError, match="twice"):
        parse_config_text("grid = 32\ngrid = 64\n")
    with pytest.raises(ConfigurationError, match="bad value"):
        parse_config_text("grid = many\n")
    with pytest.raises(ConfigurationError):
        parse_config_text("no equals sign\n")


def test_check_specs():
    assert CheckSpec.parse("regularity:1,1").label == "regularity:1,1"
    for bad in ("nonsense", "regularity", "scaling:3", "picard:1", "regularity:3,1"):
        with pytest.raises(ConfigurationError):
            CheckSpec.parse(bad)
    sc = parse_scenario("checks = scaling:2 picard decay_slopes\n")
    assert [c.name for c in sc.ordered_checks()] == ["decay_slopes", "picard", "scaling"]
    with pytest.raises(ConfigurationError):
        parse_scenario("checks = picard picard\n")


def test_seed_reaches_random_terms():
    a = parse_scenario("grid = 32\ntheta0 = random_bandlimited:band=4\nseed = 1\n")
    b = a.with_(seed=2)
    assert (a.initial_data().values != b.initial_data().values).any()
    assert (a.initial_data().values == a.initial_data().values).all()


def test_nonzero_mean_needs_projection():
    sc = parse_scenario("grid = 32\ntheta0 = gaussian_bump:width=0.5\n")
    with pytest.raises(ConfigurationError, match="project-mean"):
        sc.initial_data()
    assert sc.with_(project_mean=True).initial_data().is_mean_zero()


def test_shipped_scenarios_parse():
    for path in sorted(SCENARIOS.glob("*.cfg")):
        if path.stem == "bad_p":
            with pytest.raises(ConfigurationError):
                load_scenario(path).config()
        else:
            load_scenario(path).config()


def test_zero_scenario_exit_zero(tmp_path, capsys):
    code = main(["run", str(SCENARIOS / "zero.cfg"), "--out", str(tmp_path)])
    assert code == EXIT_OK
    text = (tmp_path / "report.txt").read_text()
    assert "converged after 1 iterations" in text
    assert "overall: pass" in text


def test_bad_p_exit_config(tmp_path, capsys):
    assert main(["run", str(SCENARIOS / "bad_p.cfg"), "--out", str(tmp_path)]) == EXIT_CONFIG
    assert "configuration error" in capsys.readouterr().err
    assert not (tmp_path / "report.txt").exists()


def test_missing_file_exit_io(tmp_path, capsys):
    assert main(["run", str(tmp_path / "absent.cfg")]) == EXIT_IO


def test_nonzero_mean_exit_and_projection(tmp_path, capsys):
    cfg = tmp_path / "mean.cfg"
    cfg.write_text("grid = 32\nn_time = 8\ntheta0 = gaussian_bump:width=0.5\ntheta0_amplitude = 0.1\n"
                   "stability_grids = 32 64\nchecks = picard\n")
    assert main(["run", str(cfg), "--out", str(tmp_path / "a")]) == EXIT_CONFIG
    assert main(["run", str(cfg), "--out", str(tmp_path / "b"), "--project-mean"]) in (EXIT_OK, EXIT_CHECK)
    assert (tmp_path / "b" / "report.txt").exists()


def test_bad_grid_override(tmp_path, capsys):
    assert main(["run", str(SCENARIOS / "zero.cfg"), "--grid", "48", "--out", str(tmp_path)]) == EXIT_CONFIG


def test_unwritable_output_exit_io(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    outcome = run_scenario(parse_scenario(SMALL), blocker / "sub")
    assert outcome.exit_code == EXIT_IO
    assert outcome.results


def test_picard_outputs(tmp_path):
    outcome = run_scenario(parse_scenario(SMALL), tmp_path)
    assert outcome.exit_code == EXIT_OK, outcome.message
    rows = list(csv.reader((tmp_path / "picard_timeseries.csv").open(newline="")))
    assert rows[0] == ["t", "lp_norm", "xt_partial_modular"]
    assert len(rows) == 1 + 8
    assert float(rows[-1][2]) == pytest.approx(1.0, abs=1e-6)
    for name in ("theta0.sqgf", "theta_T.sqgf", "picard_iterates.csv", "report.txt"):
        assert (tmp_path / name).exists()


def test_runs_are_byte_identical(tmp_path):
    sc = parse_scenario(SMALL)
    a = run_scenario(sc, tmp_path / "a")
    b = run_scenario(sc, tmp_path / "b")
    names = sorted(p.name for p in (tmp_path / "a").iterdir())
    assert names == sorted(p.name for p in (tmp_path / "b").iterdir())
    assert len(a.written) == len(b.written)
    for name in names:
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()


def test_decay_csv_layout(tmp_path):
    sc = parse_scenario("grid = 32\ndecay_grid = 128\nstability_grids = 32 64\nchecks = decay_slopes\n")
    outcome = run_scenario(sc, tmp_path)
    assert outcome.exit_code == EXIT_OK, outcome.message
    files = sorted(tmp_path.glob("slope_*.csv"))
    assert len(files) == 12
    rows = list(csv.reader(files[0].open(newline="")))
    assert rows[0] == ["t", "norm"]
    assert len(rows) == 1 + 6 + 3
    assert [r[0] for r in rows[-3:]] == ["fitted_slope", "theoretical_slope", "r_squared"]


def test_strict_turns_warnings_into_failures(tmp_path):
    sc = parse_scenario(SMALL).with_(theta0_amplitude=1e4, picard_max_iter=20)
    relaxed = run_scenario(sc, tmp_path / "a")
    assert relaxed.exit_code == EXIT_OK
    assert relaxed.results[0].status == "warn"
    assert run_scenario(sc, tmp_path / "b", strict=True).exit_code == EXIT_CHECK


def test_report_helpers(tmp_path):
    with pytest.raises(PreconditionError):
        emit_report([], tmp_path)
    t = Table(["a", "b"], [[0.1, 2]], [["m", 1e-20]])
    assert table_text(t) == "a,b\r\n0.1,2\r\nm,1e-20\r\n"
    r = CheckResult("holder", "holder", "pass", ["ok"])
    paths = emit_report([r], tmp_path)
    assert paths == [tmp_path / "report.txt"]
    assert "Hoelder" in paths[0].read_text()
