import json
from unittest.mock import patch

import pytest

from condmodel.cli import (
    EXIT_CONFIG,
    EXIT_FAILURE,
    EXIT_OK,
    EXIT_SCENARIO,
    EXIT_SYNTAX,
    main,
    parse_bounds,
    parse_tolerances,
)
from condmodel.config import SUITE
from condmodel.errors import ConfigError
from condmodel.suites import SuiteReport


@pytest.fixture
def workdir(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "s2.json").write_text(json.dumps({"weights": ["1/2", "1/2"]}))
    (tmp_path / "beta.json").write_text(json.dumps({"num": {"y": ["2", "3"]}}))
    (tmp_path / "formulas.l2").write_text("# parity\nexists x. x + x = y\ny < y + 1\n")
    (tmp_path / "scenario.csv").write_text(
        "atom,lo,hi,delta,integrand\n0,-1,1,1,x^2\n1,-1,1,1,(x - 1)^2\n"
    )
    return tmp_path


def read(path):
    return json.loads(path.read_text())


def test_parse_bounds():
    assert parse_bounds("4,5").set_bound == 5
    assert parse_bounds("3").set_bound == 4
    for bad in ("a,b", "1,2,3", "4,2"):
        with pytest.raises(ConfigError):
            parse_bounds(bad)


def test_parse_tolerances():
    assert [str(t) for t in parse_tolerances("1/2,1/4")] == ["1/2", "1/4"]
    with pytest.raises(ConfigError):
        parse_tolerances("1/0")


def test_eval(workdir):
    code = main(
        [
            "eval", "formulas.l2", "--space", "s2.json", "--bounds", "4,5",
            "--assignment", "beta.json", "--out", "eval.json", "--quiet",
        ]
    )
    assert code == EXIT_OK
    report = read(workdir / "eval.json")
    assert report["schema"] == "condmodel/1"
    assert report["bounds"] == {"num_bound": 4, "set_bound": 5}
    first, second = report["formulas"]
    assert first["line"] == 2
    assert first["event"] == [0]
    assert first["witnesses"] == [{"quantifier": "exists x", "witness": ["1", "0"]}]
    assert second["event"] == [0, 1]


def test_eval_missing_space(workdir, capsys):
    code = main(["eval", "formulas.l2", "--space", "missing.json", "--quiet"])
    assert code == EXIT_CONFIG
    assert "space file not found" in capsys.readouterr().out


def test_eval_unassigned_variable(workdir):
    assert main(["eval", "formulas.l2", "--quiet", "--out", "e.json"]) == EXIT_CONFIG


def test_eval_syntax_error(workdir, capsys):
    (workdir / "bad.l2").write_text("x = x\nx <\n")
    code = main(["eval", "bad.l2", "--quiet"])
    assert code == EXIT_SYNTAX
    assert "line 2, column 4" in capsys.readouterr().out


def test_eval_missing_formula_file(workdir):
    assert main(["eval", "nothing.l2", "--quiet"]) == EXIT_CONFIG


def test_suite_axioms(workdir):
    code = main(
        ["suite", "axioms", "--trials", "3", "--seed", "7", "--space", "s2.json",
         "--out", "suite.json", "--quiet"]
    )
    assert code == EXIT_OK
    report = read(workdir / "suite.json")
    assert report["seed"] == 7
    assert report["suite"] == "axioms"
    assert report["passed"] is True


def test_suite_axiom_failure(workdir, monkeypatch):
    monkeypatch.setattr("condmodel.suites.BASIC_AXIOMS", ("x = 0",))
    code = main(["suite", "axioms", "--trials", "5", "--space", "s2.json", "--out", "f.json", "--quiet"])
    assert code == EXIT_FAILURE
    report = read(workdir / "f.json")
    assert report["passed"] is False
    assert report["failure"]["axiom"] == "x = 0"


@pytest.mark.parametrize("flags,expected", [((), SUITE.rule_trials), (("--trials", "3"), 3)])
def test_rule_suite_trials(workdir, monkeypatch, flags, expected):
    seen = []

    def run(sampler, trials, bounds, progress):
        seen.append(trials)
        return SuiteReport("rules")

    monkeypatch.setattr("condmodel.suites.rule_suite", run)
    assert main(["suite", "rules", *flags, "--out", "r.json", "--quiet"]) == EXIT_OK
    assert seen == [expected]


def test_argmin(workdir):
    code = main(["argmin", "scenario.csv", "--out", "argmin.json", "--quiet"])
    assert code == EXIT_OK
    selection = read(workdir / "argmin.json")["selection"]
    assert selection == {"point": [["0"], ["1"]], "value": ["0", "0"]}


def test_argmin_is_deterministic(workdir):
    main(["argmin", "scenario.csv", "--out", "a.json", "--quiet"])
    main(["argmin", "scenario.csv", "--out", "b.json", "--quiet"])
    assert (workdir / "a.json").read_bytes() == (workdir / "b.json").read_bytes()


def test_argmin_division_by_zero(workdir, capsys):
    (workdir / "div.csv").write_text("atom,lo,hi,delta,integrand\n0,-1,1,1,1 / x\n")
    code = main(["argmin", "div.csv", "--quiet"])
    assert code == EXIT_SCENARIO
    assert "atom 0" in capsys.readouterr().out


def test_argmin_malformed(workdir):
    (workdir / "empty.csv").write_text("atom,lo,hi,delta,integrand\n0,1,0,1,x\n")
    assert main(["argmin", "empty.csv", "--quiet"]) == EXIT_SCENARIO


@patch("condmodel.cli.VisualizationCreator")
def test_argmin_plot(mock_creator, workdir):
    code = main(["argmin", "scenario.csv", "--plot", "--quiet", "--out", "p.json"])
    assert code == EXIT_OK
    mock_creator.return_value.create_argmin_plot.assert_called_once()


@patch("condmodel.cli.ReportStore")
def test_store_flag(mock_store, workdir):
    code = main(["argmin", "scenario.csv", "--store", "--quiet", "--out", "s.json"])
    assert code == EXIT_OK
    store = mock_store.return_value
    collection, report = store.save_report.call_args[0]
    assert collection == "argmin_reports"
    assert report["command"] == "argmin"
    store.close.assert_called_once()


def test_bw(workdir):
    code = main(
        ["bw", "alternating|harmonic", "--tolerances", "1/2,1/4,1/8", "--out", "bw.json", "--quiet"]
    )
    assert code == EXIT_OK
    report = read(workdir / "bw.json")
    (result,) = report["fixtures"]
    assert result["indices"] == [["0", "1"], ["2", "3"], ["4", "7"]]
    assert result["limsup"] == ["1", "0"]
    assert result["passed"] is True


def test_bw_all_fixtures(workdir):
    assert main(["bw", "--out", "all.json", "--quiet"]) == EXIT_OK
    report = read(workdir / "all.json")
    assert len(report["fixtures"]) == 20
    assert report["passed"] is True


def test_bw_unknown_fixture(workdir):
    assert main(["bw", "nope", "--quiet"]) == EXIT_CONFIG


def test_bw_bad_tolerances(workdir):
    assert main(["bw", "--tolerances", "1/4,1/2", "--quiet"]) == EXIT_CONFIG


def test_bad_bounds(workdir):
    assert main(["eval", "formulas.l2", "--bounds", "4,2", "--quiet"]) == EXIT_CONFIG
