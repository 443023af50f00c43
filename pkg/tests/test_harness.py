import csv
import io
import json

import pytest

from netcalc import cli, harness
from netcalc.errors import ConfigError, UsageError
from netcalc.harness import (
    SUITES,
    ExperimentConfig,
    ExperimentReport,
    emit_report,
    render_report,
    run_suite,
)
from netcalc.report import FAIL, HYPOTHESIS_NOT_MET, INCONCLUSIVE, PASS, CheckRecord


def small():
    return ExperimentConfig("transposition", depth=16, grid=33)


def test_suite_registry():
    assert set(SUITES) == {"functor-laws", "finite-exhaustive", "transposition",
                           "lim-continuity", "main-theorem", "diff-theorem", "counterexamples"}


def test_unknown_suite_is_a_usage_error():
    with pytest.raises(UsageError):
        run_suite("nope")


@pytest.mark.parametrize("kw", [{"tolerance": 0}, {"tolerance": -1e-3}, {"budget": 0},
                                {"depth": -4}, {"grid": 2}, {"format": "xml"}])
def test_config_invariants(kw):
    with pytest.raises(ConfigError):
        ExperimentConfig("transposition", **kw)


def test_functor_laws_suite_passes():
    rep = run_suite("functor-laws")
    assert rep.aggregate == PASS
    assert all(r.verdict == PASS and r.residual == 0 for r in rep.records)


def test_counterexamples_suite_asserts_witnesses():
    rep = run_suite("counterexamples")
    assert rep.aggregate == PASS
    hnm = [r for r in rep.records if r.verdict == HYPOTHESIS_NOT_MET]
    assert any("xn" in r.sample_id for r in hnm)
    assert any("sin" in r.sample_id for r in hnm)
    assert all(r.verdict == r.expected for r in rep.records)


def test_main_theorem_suite_residuals():
    rep = run_suite("main-theorem")
    assert rep.aggregate == PASS
    assert all(r.residual <= 1e-6 for r in rep.records)


def _fake(verdict, expected=None, kind="check"):
    return CheckRecord("fake", "s", verdict, expected=expected, kind=kind)


@pytest.mark.parametrize("records, aggregate", [
    ([], PASS),
    ([_fake(PASS), _fake(HYPOTHESIS_NOT_MET)], PASS),
    ([_fake(PASS), _fake(INCONCLUSIVE)], INCONCLUSIVE),
    ([_fake(INCONCLUSIVE, expected=INCONCLUSIVE)], PASS),
    ([_fake(INCONCLUSIVE), _fake(FAIL, kind="theorem")], FAIL),
    ([_fake(FAIL, expected=PASS)], FAIL),
    ([_fake(FAIL, expected=FAIL)], PASS),
])
def test_aggregate_rules(records, aggregate):
    assert ExperimentReport("fake", records).aggregate == aggregate


def test_json_round_trip(tmp_path):
    rep = run_suite("transposition", small())
    path = emit_report(rep, tmp_path / "t.json")
    back = ExperimentReport.from_json(json.loads(path.read_text()))
    assert back.to_json() == json.loads(render_report(rep))
    assert back.aggregate == rep.aggregate


def test_csv_has_one_row_per_record(tmp_path):
    rep = run_suite("transposition", small())
    path = emit_report(rep, tmp_path / "t.csv", "csv")
    rows = list(csv.DictReader(io.StringIO(path.read_text())))
    assert len(rows) == len(rep.records)
    assert list(rows[0]) == ["suite", "check", "sample", "verdict", "residual"]


def test_empty_report_is_valid_json():
    obj = json.loads(render_report(ExperimentReport("empty")))
    assert obj["records"] == [] and obj["aggregate"] == PASS


def test_unwritable_path_names_the_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("")
    with pytest.raises(OSError, match="file"):
        emit_report(ExperimentReport("empty"), blocker / "sub" / "r.json")


def test_reports_are_deterministic():
    a, b = (run_suite("transposition", small()).to_json() for _ in range(2))
    a.pop("wall_time"), b.pop("wall_time")
    assert a == b


# -- CLI ---------------------------------------------------------------------


def test_cli_run_writes_to_netcalc_out(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("NETCALC_OUT", str(tmp_path))
    assert cli.main(["run", "lim-continuity", "--depth", "16"]) == 0
    obj = json.loads((tmp_path / "lim-continuity.json").read_text())
    assert obj["config"]["depth"] == 16 and "out" not in obj["config"]
    assert "lim-continuity: pass" in capsys.readouterr().out


def test_cli_out_overrides_env(tmp_path, monkeypatch):
    monkeypatch.setenv("NETCALC_OUT", str(tmp_path / "unused"))
    target = tmp_path / "r.csv"
    assert cli.main(["run", "functor-laws", "--out", str(target), "--format", "csv"]) == 0
    assert target.read_text().startswith("suite,check,sample,verdict,residual")


@pytest.mark.parametrize("verdict, expected, kind, code", [
    (PASS, None, "check", 0),
    (FAIL, None, "theorem", 1),
    (INCONCLUSIVE, None, "check", 2),
])
def test_cli_exit_codes(tmp_path, monkeypatch, verdict, expected, kind, code):
    monkeypatch.setitem(harness.SUITES, "transposition",
                        lambda cfg: [_fake(verdict, expected, kind)])
    assert cli.main(["run", "transposition", "--out", str(tmp_path / "r.json")]) == code


@pytest.mark.parametrize("argv", [
    ["run", "nope"],
    ["run", "transposition", "--budget", "0"],
    ["run", "transposition", "--tolerance", "-1"],
    ["run", "transposition", "--format", "xml"],
    ["frobnicate"],
])
def test_cli_usage_errors_exit_3(argv, tmp_path, monkeypatch):
    monkeypatch.setenv("NETCALC_OUT", str(tmp_path))
    with pytest.raises(SystemExit) as info:
        code = cli.main(argv)
        raise SystemExit(code)
    assert info.value.code == 3


def test_cli_list_suites(capsys):
    assert cli.main(["list-suites"]) == 0
    assert capsys.readouterr().out.split() == list(SUITES)


def test_cli_validate_space(tmp_path, capsys):
    good = tmp_path / "s.json"
    good.write_text(json.dumps({"points": [0, 1], "opens": [[], [0], [1], [0, 1]]}))
    assert cli.main(["validate-space", str(good)]) == 0
    assert "hausdorff=True" in capsys.readouterr().out
    bad = tmp_path / "b.json"
    bad.write_text(json.dumps({"points": [0, 1], "opens": [[0]]}))
    assert cli.main(["validate-space", str(bad)]) == 3
    (tmp_path / "x.json").write_text("{")
    assert cli.main(["validate-space", str(tmp_path / "x.json")]) == 3
    assert cli.main(["validate-space", str(tmp_path / "missing.json")]) == 3
