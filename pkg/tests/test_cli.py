import json

import pytest

from cltkit.cli import (DEFAULT_N_GRID, Scenario, clt_expectation,
                        list_fixtures, load_scenario, main, parse_scenario,
                        run_scenario)
from cltkit.conditions import SingularityVerdict, UniformityVerdict
from cltkit.errors import ScenarioParseError

SMALL = """
fixture = dyadic_bounded
n_grid = 5, 10
samples = 300
eps = 0.5
seed = 777
"""


# -------------------------------------------------------------------- parsing

def test_parse_full_scenario():
    scenario = parse_scenario(SMALL)
    assert scenario.fixture == "dyadic_bounded"
    assert scenario.n_grid == (5, 10)
    assert scenario.samples == 300
    assert scenario.eps == 0.5
    assert scenario.seed == 777
    assert scenario.workers == 1


def test_parse_defaults():
    scenario = parse_scenario("fixture = iid_rademacher\n")
    assert scenario.n_grid == DEFAULT_N_GRID
    assert scenario.samples == 100_000
    assert scenario.eps == 0.5
    assert len(scenario.s_grid) == 50


@pytest.mark.parametrize("text,line", [
    ("fixture iid_rademacher\n", 1),
    ("fixture = iid_rademacher\nsamples = many\n", 2),
    ("fixture = iid_rademacher\nn_grid = 5,,10\n", 2),
    ("fixture = iid_rademacher\nbogus = 1\n", 2),
    ("fixture = iid_rademacher\nsamples = 0\n", 2),
    ("fixture = iid_rademacher\neps = -1\n", 2),
    ("fixture = iid_rademacher\nseed = -3\n", 2),
    ("fixture = iid_rademacher\nfixture = bc_spikes\n", 2),
    ("fixture = iid_rademacher\ns_grid = 1.0, 0.5\n", 2),
    ("samples = 10\n", 2),  # missing fixture reported past the last line
])
def test_parse_errors_carry_line(text, line):
    with pytest.raises(ScenarioParseError) as excinfo:
        parse_scenario(text)
    assert excinfo.value.line == line
    assert excinfo.value.column >= 1


def test_parse_comments_and_blanks():
    scenario = parse_scenario("# study\n\nfixture = bc_spikes\n# done\n")
    assert scenario.fixture == "bc_spikes"


# ----------------------------------------------------------------- exit codes

def test_run_missing_file(tmp_path, capsys):
    assert run_scenario(tmp_path / "none.scn") == 2
    assert "cannot read" in capsys.readouterr().err


def test_run_parse_error_exit_2(tmp_path, capsys):
    path = tmp_path / "bad.scn"
    path.write_text("fixture = iid_rademacher\nsamples = lots\n")
    assert run_scenario(path) == 2
    err = capsys.readouterr().err
    assert f"{path}:2:" in err


def test_run_unknown_fixture_exit_3(tmp_path, capsys):
    path = tmp_path / "unknown.scn"
    path.write_text("fixture = mystery\n")
    assert run_scenario(path) == 3
    assert "mystery" in capsys.readouterr().err


def test_run_runtime_error_exit_4(tmp_path, capsys):
    path = tmp_path / "tiny.scn"
    # samples below the engine minimum of 100 passes parsing, fails at run.
    path.write_text("fixture = iid_rademacher\nsamples = 50\nn_grid = 5\n")
    assert run_scenario(path, out=str(tmp_path)) == 4
    assert "runtime error" in capsys.readouterr().err


def test_run_success_writes_artifacts(tmp_path, capsys):
    path = tmp_path / "ok.scn"
    path.write_text(SMALL)
    out = tmp_path / "out"
    assert run_scenario(path, out=str(out)) == 0
    for suffix in ("alpha.csv", "report.csv", "report.json", "summary.txt"):
        assert (out / f"dyadic_bounded_{suffix}").exists()
    summary = (out / "dyadic_bounded_summary.txt").read_text()
    assert "CLT expected: no (total variance bounded)" in summary
    assert "uniform convergence: HoldsCertified" in summary
    stdout = capsys.readouterr().out
    assert "CLT expected" in stdout


def test_run_quiet_suppresses_stdout(tmp_path, capsys):
    path = tmp_path / "ok.scn"
    path.write_text(SMALL)
    assert run_scenario(path, out=str(tmp_path / "o"), quiet=True) == 0
    assert capsys.readouterr().out == ""


def test_rerun_is_byte_identical(tmp_path):
    path = tmp_path / "ok.scn"
    path.write_text(SMALL)
    out1, out2 = tmp_path / "one", tmp_path / "two"
    assert run_scenario(path, out=str(out1), quiet=True) == 0
    assert run_scenario(path, out=str(out2), quiet=True, workers=3) == 0
    for suffix in ("alpha.csv", "report.csv", "report.json", "summary.txt"):
        a = (out1 / f"dyadic_bounded_{suffix}").read_bytes()
        b = (out2 / f"dyadic_bounded_{suffix}").read_bytes()
        assert a == b, suffix


def test_cli_overrides_scenario(tmp_path):
    path = tmp_path / "ok.scn"
    path.write_text(SMALL)
    out = tmp_path / "o"
    assert run_scenario(path, out=str(out), seed=1234, samples=200,
                        quiet=True) == 0
    doc = json.loads((out / "dyadic_bounded_report.json").read_text())
    assert doc["root_seed"] == 1234
    assert doc["samples"] == 200


def test_main_entry_points(tmp_path, capsys):
    assert main(["list-fixtures"]) == 0
    out = capsys.readouterr().out.strip().splitlines()
    assert len(out) == 6
    assert any(line.startswith("bc_spikes") for line in out)
    assert any(line.startswith("dyadic_bounded") for line in out)

    path = tmp_path / "ok.scn"
    path.write_text(SMALL)
    code = main(["run", str(path), "--out", str(tmp_path / "o"), "--quiet"])
    assert code == 0


def test_list_fixtures_has_six_rows():
    assert len(list_fixtures().splitlines()) == 6


# -------------------------------------------------------------- verdict logic

@pytest.mark.parametrize("name,verdict_line", [
    ("iid_rademacher", "CLT expected: yes"),
    ("mixed_two_families", "CLT expected: yes"),
    ("dyadic_bounded", "CLT expected: no (total variance bounded)"),
    ("bc_spikes", "CLT expected: out-of-hypothesis (uniform convergence fails)"),
    ("iid_normal", "CLT expected: out-of-hypothesis (singular sequence)"),
    ("all_degenerate", "CLT expected: out-of-hypothesis (singular sequence)"),
])
def test_summary_verdict_lines(tmp_path, name, verdict_line):
    path = tmp_path / f"{name}.scn"
    path.write_text(f"fixture = {name}\nn_grid = 5, 10\nsamples = 300\n")
    out = tmp_path / "out"
    assert run_scenario(path, out=str(out), quiet=True) == 0
    summary = (out / f"{name}_summary.txt").read_text()
    assert verdict_line in summary.splitlines()


def test_clt_expectation_matrix():
    yes = clt_expectation(SingularityVerdict.NON_SINGULAR,
                          UniformityVerdict.HOLDS_CERTIFIED, "diverging")
    assert yes == "yes"
    assert clt_expectation(SingularityVerdict.NON_SINGULAR,
                           UniformityVerdict.HOLDS_CERTIFIED,
                           "bounded") == "no (total variance bounded)"
    assert clt_expectation(SingularityVerdict.SINGULAR,
                           UniformityVerdict.HOLDS_CERTIFIED,
                           "diverging") == "out-of-hypothesis (singular sequence)"
    assert clt_expectation(SingularityVerdict.SINGULAR_ON_PREFIX,
                           UniformityVerdict.HOLDS_CERTIFIED,
                           "diverging") == "out-of-hypothesis (singular sequence)"
    assert clt_expectation(SingularityVerdict.NON_SINGULAR,
                           UniformityVerdict.FAILS,
                           "diverging") == "out-of-hypothesis (uniform convergence fails)"
    assert clt_expectation(SingularityVerdict.NON_SINGULAR,
                           UniformityVerdict.HOLDS_ON_PREFIX, "zero") == \
        "no (total variance bounded)"
    assert "indeterminate" in clt_expectation(
        SingularityVerdict.NON_SINGULAR, UniformityVerdict.HOLDS_CERTIFIED,
        "indeterminate")


def test_load_scenario_reads_files(tmp_path):
    path = tmp_path / "s.scn"
    path.write_text("fixture = iid_normal\nworkers = 2\n")
    scenario = load_scenario(path)
    assert scenario == Scenario(fixture="iid_normal", workers=2)
