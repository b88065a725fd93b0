"""Command-line front end.

Subcommands::

    condmodel eval FORMULAS [--space S] [--bounds B,Bset] [--assignment A]
    condmodel suite {axioms,rules,boolean-laws} [--trials N] [--seed S] [--spaces K]
    condmodel argmin SCENARIO [--space S] [--plot]
    condmodel bw [FIXTURE ...] [--horizon T] [--window W] [--tolerances 1/2,1/4] [--plot]

Every subcommand writes a JSON report (``--out``, default under ``reports/``)
and can archive it in MongoDB (``--store``).

Exit codes: 0 success, 1 suite failure, 2 formula syntax error,
3 configuration error, 4 malformed scenario or evaluation error.
"""

import argparse
import json
import sys
import warnings
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence

from . import analysis, fixtures, suites
from .config import COLLECTIONS, SUITE, RunConfig
from .database import ReportStore
from .errors import (
    AxiomFailure,
    BoundTooSmallWarning,
    ConfigError,
    EvaluationError,
    FormulaSyntaxError,
    MalformedScenario,
    NoAdmissibleIndex,
    UnboundVariable,
)
from .evaluator import Assignment, Bounds, evaluate_report
from .measure import MeasureSpace, load_space, make_space
from .plots import VisualizationCreator
from .reports import envelope, write_report
from .sampling import Sampler
from .scenarios import load_scenario
from .sets import cond_set_from_json
from .syntax import read_formula_file
from .values import parse_value

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_SYNTAX = 2
EXIT_CONFIG = 3
EXIT_SCENARIO = 4

_COLLECTION = {
    "eval": COLLECTIONS.eval_reports,
    "suite": COLLECTIONS.suite_reports,
    "argmin": COLLECTIONS.argmin_reports,
    "bw": COLLECTIONS.bw_reports,
}


def parse_bounds(text: str) -> Bounds:
    """``"4,5"`` to ``Bounds(4, 5)``; a single number sets the set bound to ``B + 1``."""
    try:
        parts = [int(p) for p in text.split(",")]
    except ValueError:
        raise ConfigError(f"bounds must look like B,Bset: {text!r}")
    if len(parts) == 1:
        parts.append(parts[0] + 1)
    if len(parts) != 2:
        raise ConfigError(f"bounds must look like B,Bset: {text!r}")
    return Bounds(*parts)


def parse_tolerances(text: str) -> List[Fraction]:
    try:
        return [Fraction(p) for p in text.split(",")]
    except (ValueError, ZeroDivisionError):
        raise ConfigError(f"tolerances must be comma-separated rationals: {text!r}")


def load_assignment(path: Path, space: MeasureSpace) -> Assignment:
    """Read ``{"num": {"y": ["2", "3"]}, "set": {"Y": {"carrier": [...], "fibers": [...]}}}``."""
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
        num = {name: parse_value(space, values) for name, values in data.get("num", {}).items()}
        sets = {name: cond_set_from_json(space, value) for name, value in data.get("set", {}).items()}
        return Assignment(space, num, sets)
    except OSError as e:
        raise ConfigError(f"cannot read assignment file {path}: {e}")
    except (ValueError, KeyError, TypeError) as e:
        raise ConfigError(f"invalid assignment file {path}: {e}")


def _space(config: RunConfig) -> MeasureSpace:
    if config.space_path is None:
        return make_space([Fraction(1, 2), Fraction(1, 2)])
    return load_space(config.space_path)


def _say(config: RunConfig, message: str) -> None:
    if not config.quiet:
        print(message)


def _finish(config: RunConfig, command: str, report: dict) -> None:
    path = write_report(report, config.out_path)
    _say(config, f"Wrote report to {path}")
    if config.store:
        store = ReportStore()
        try:
            store.save_report(_COLLECTION[command], report)
        finally:
            store.close()


def run_eval(config: RunConfig, formula_file: Path) -> int:
    space = _space(config)
    bounds = Bounds(config.num_bound, config.set_bound)
    _say(config, f"Loaded space with {space.atom_count} atoms")
    formulas = read_formula_file(formula_file)
    beta = load_assignment(config.assignment_path, space) if config.assignment_path else Assignment(space)
    results = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundTooSmallWarning)
        for line, text, formula in formulas:
            truth = evaluate_report(formula, beta, bounds)
            results.append({"line": line, **truth.to_json()})
            _say(config, f"line {line}: {truth.formula} -> {truth.event.atoms()} (measure {truth.event.measure()})")
    report = envelope(
        "eval",
        {"space": space.to_json(), "formulas": results},
        bounds=bounds,
    )
    _finish(config, "eval", report)
    return EXIT_OK


def run_suite(config: RunConfig, which: str, spaces: int) -> int:
    bounds = Bounds(config.num_bound, config.set_bound)
    sampler = Sampler(config.seed)
    space = load_space(config.space_path) if config.space_path else None
    progress = not config.quiet
    try:
        if which == "axioms":
            trials = config.trials or SUITE.trials
            result = suites.axiom_suite(space, bounds, sampler, trials, spaces, progress)
        elif which == "rules":
            trials = config.trials or SUITE.rule_trials
            result = suites.rule_suite(sampler, trials, bounds, progress=progress)
        else:
            result = suites.boolean_laws(sampler, progress=progress)
    except AxiomFailure as e:
        print(f"Axiom failure: {e}")
        report = envelope(
            "suite",
            {
                "suite": which,
                "passed": False,
                "failure": {
                    "axiom": e.axiom,
                    "assignment": e.assignment.to_json(),
                    "event": e.event.atoms(),
                },
            },
            seed=config.seed,
            bounds=bounds,
        )
        _finish(config, "suite", report)
        return EXIT_FAILURE
    report = envelope("suite", result.to_json(), seed=config.seed, bounds=bounds)
    _finish(config, "suite", report)
    total = sum(result.checks.values())
    if result.passed:
        _say(config, f"Suite {which}: all {total} checks passed")
        return EXIT_OK
    print(f"Suite {which}: {len(result.failures)} failures in {total} checks")
    return EXIT_FAILURE


def run_argmin(config: RunConfig, scenario_file: Path) -> int:
    space = load_space(config.space_path) if config.space_path else None
    scenario = load_scenario(scenario_file, space)
    _say(config, f"Loaded scenario with {scenario.field.space.atom_count} atoms")
    selection = analysis.argmin(scenario.field, scenario.integrand)
    report = envelope(
        "argmin",
        {
            "scenario": str(scenario_file),
            "field": scenario.field.to_json(),
            "integrand": list(scenario.integrand.texts),
            "selection": selection.to_json(),
        },
    )
    _finish(config, "argmin", report)
    if config.plot:
        path = VisualizationCreator().create_argmin_plot(selection)
        _say(config, f"Saved plot to {path}")
    return EXIT_OK


def run_bw(
    config: RunConfig,
    names: Sequence[str],
    horizon: int,
    window: int,
    tolerances: Sequence[Fraction],
) -> int:
    chosen = [fixtures.get_fixture(n) for n in names] if names else fixtures.FIXTURES
    results, passed = [], True
    plotter = VisualizationCreator() if config.plot else None
    for fixture in chosen:
        seq, exact = fixture.sequence(), fixture.limsup()
        indices = analysis.bw_subsequence(seq, exact, tolerances, horizon=fixtures.SEARCH_HORIZON)
        estimate = analysis.limsup(seq, horizon, window)
        increasing = all(
            all(p < q for p, q in zip(earlier.values, later.values))
            for earlier, later in zip(indices, indices[1:])
        )
        within = all(
            abs(e - x) <= err
            for e, x, err in zip(estimate.values, exact.values, fixture.error().values)
        )
        ok = increasing and within
        passed = passed and ok
        results.append(
            {
                "fixture": fixture.name,
                "indices": [n.to_json() for n in indices],
                "limsup_estimate": estimate.to_json(),
                "limsup": exact.to_json(),
                "passed": ok,
            }
        )
        if plotter is not None:
            plotter.create_bw_plot(seq, indices, exact, horizon, f"bw_{fixture.name.replace('|', '_')}.png")
    report = envelope(
        "bw",
        {
            "horizon": horizon,
            "window": window,
            "tolerances": [str(t) for t in tolerances],
            "fixtures": results,
            "passed": passed,
        },
    )
    _finish(config, "bw", report)
    _say(config, f"BW: {sum(r['passed'] for r in results)}/{len(results)} fixtures passed")
    return EXIT_OK if passed else EXIT_FAILURE


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="condmodel", description=__doc__.split("\n\n")[0])
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--space", type=Path, help="measure space JSON")
    common.add_argument("--bounds", default=None, help="quantifier bounds B,Bset")
    common.add_argument("--out", type=Path, help="report path")
    common.add_argument("--store", action="store_true", help="archive the report in MongoDB")
    common.add_argument("--quiet", action="store_true", help="no progress output")
    sub = parser.add_subparsers(dest="command", required=True)

    ev = sub.add_parser("eval", parents=[common], help="evaluate a formula file")
    ev.add_argument("formulas", type=Path)
    ev.add_argument("--assignment", type=Path)

    su = sub.add_parser("suite", parents=[common], help="run a check suite")
    su.add_argument("which", choices=["axioms", "rules", "boolean-laws"])
    su.add_argument(
        "--trials",
        type=int,
        default=None,
        help=f"assignments per axiom (default {SUITE.trials}) or checked trials per rule (default {SUITE.rule_trials})",
    )
    su.add_argument("--seed", type=int, default=SUITE.seed)
    su.add_argument("--spaces", type=int, default=20, help="random spaces when --space is not given")

    am = sub.add_parser("argmin", parents=[common], help="conditional minimum of a scenario")
    am.add_argument("scenario", type=Path)
    am.add_argument("--plot", action="store_true")

    bw = sub.add_parser("bw", parents=[common], help="Bolzano-Weierstrass extraction on fixtures")
    bw.add_argument("fixtures", nargs="*")
    bw.add_argument("--horizon", type=int, default=fixtures.HORIZON)
    bw.add_argument("--window", type=int, default=fixtures.WINDOW)
    bw.add_argument("--tolerances", default=",".join(str(t) for t in fixtures.TOLERANCES))
    bw.add_argument("--plot", action="store_true")
    return parser


def _config(args: argparse.Namespace) -> RunConfig:
    bounds = parse_bounds(args.bounds) if args.bounds else Bounds()
    return RunConfig(
        space_path=args.space,
        num_bound=bounds.num_bound,
        set_bound=bounds.set_bound,
        assignment_path=getattr(args, "assignment", None),
        trials=getattr(args, "trials", None),
        seed=getattr(args, "seed", SUITE.seed),
        out_path=args.out,
        store=args.store,
        plot=getattr(args, "plot", False),
        quiet=args.quiet,
    )


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = _config(args)
        if args.command == "eval":
            return run_eval(config, args.formulas)
        if args.command == "suite":
            return run_suite(config, args.which, args.spaces)
        if args.command == "argmin":
            return run_argmin(config, args.scenario)
        return run_bw(config, args.fixtures, args.horizon, args.window, parse_tolerances(args.tolerances))
    except FormulaSyntaxError as e:
        print(f"Syntax error at line {e.line}, column {e.col}: {e.message}")
        return EXIT_SYNTAX
    except (ConfigError, UnboundVariable, KeyError, OSError) as e:
        print(f"Configuration error: {e}")
        return EXIT_CONFIG
    except (MalformedScenario, EvaluationError) as e:
        print(f"Scenario error: {e}")
        return EXIT_SCENARIO
    except NoAdmissibleIndex as e:
        print(f"BW extraction failed: {e}")
        return EXIT_FAILURE
    except ValueError as e:
        print(f"Error: {e}")
        return EXIT_SCENARIO if args.command == "argmin" else EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
