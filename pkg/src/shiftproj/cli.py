"""Command-line entry point: verify | design | simulate | rank-demo.

Every command is deterministic given its flags (all randomness is
seed-derived) and emits either human-readable text or JSON.  Exit codes are
a stable contract: 0 success, 1 a verification failed, 2 usage or scenario
error, 3 design infeasible.  Timestamps are the one non-reproducible field
in reports; ``--no-timestamp`` drops them so identical invocations produce
byte-identical output.
"""

from __future__ import annotations

import argparse
import json
import sys
from datetime import datetime, timezone

import numpy as np

from .counterexamples import (
    power_basis_rank_demo,
    rank_requirement_vacuity,
    shared_diagonal_asymmetric,
    shared_diagonal_projector,
    zero_shift_check,
)
from .design import DesignProblem, DesignResult, Infeasible, feasible_shift
from .reporting import ClaimCheck, CounterexampleReport, merge_worst
from .scenario import ScenarioError, load_scenario
from .shifts import FilterCoefficients
from .simulate import LocalityViolationError, compare_with_centralized, run_filter

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3

ZERO_SHIFT_GRID = [(n, r) for n in range(1, 9) for r in range(1, n + 1)]
RANK_GRID = range(3, 9)


def _jsonable(value):
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, (np.floating, float)):
        return float(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, dict):
        return {k: _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _emit(report: dict, text: str, args) -> None:
    if args.format == "json":
        if not args.no_timestamp:
            report = {**report, "timestamp": datetime.now(timezone.utc).isoformat(timespec="seconds")}
        payload = json.dumps(_jsonable(report), indent=2) + "\n"
    else:
        header = "" if args.no_timestamp else f"# {datetime.now(timezone.utc).isoformat(timespec='seconds')}\n"
        payload = header + text + "\n"
    sys.stdout.write(payload)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(payload)


def _merge_zero_shift(reports_low, reports_full) -> CounterexampleReport:
    claims = []
    if reports_low:
        claims.extend(merge_worst(reports_low, "zero-shift r<n").claims)
    if reports_full:
        claims.extend(merge_worst(reports_full, "zero-shift r=n").claims)
    return CounterexampleReport(name="zero-shift", claims=tuple(claims))


def _verify_checks(seed: int, trials: int, tol: float | None) -> list[CounterexampleReport]:
    closeness = 1e-10 if tol is None else tol
    seeds = range(seed, seed + trials)
    sections = [
        merge_worst(
            [shared_diagonal_projector(s, tol=closeness).report for s in seeds],
            "shared-diagonal-projector",
        ),
        merge_worst(
            [shared_diagonal_asymmetric(s, tol=closeness).report for s in seeds],
            "shared-diagonal-asymmetric",
        ),
        _merge_zero_shift(
            [zero_shift_check(n, r, seed, tol=closeness) for n, r in ZERO_SHIFT_GRID if r < n],
            [zero_shift_check(n, n, seed, tol=closeness) for n in range(1, 9)],
        ),
        merge_worst(
            [power_basis_rank_demo(n, 2 * n, trials, seed) for n in RANK_GRID],
            "power-basis-rank",
        ),
    ]
    vac_claims = []
    for n in RANK_GRID:
        rr = rank_requirement_vacuity(n, n)
        vac_claims.append(
            ClaimCheck(
                description=f"n={n}: required rank {rr.required_rank} vs bound {rr.rank_bound}",
                measured=float(rr.required_rank),
                threshold=float(rr.rank_bound),
                passed=rr.vacuous == (n >= 4),
            )
        )
    sections.append(CounterexampleReport(name="rank-requirement-vacuity", claims=tuple(vac_claims)))
    return sections


def cmd_verify(args) -> int:
    sections = _verify_checks(args.seed, args.trials, args.tol)
    all_passed = all(s.overall for s in sections)
    report = {
        "command": "verify",
        "seed": args.seed,
        "trials": args.trials,
        "tol": args.tol,
        "checks": [s.to_dict() for s in sections],
        "all_passed": all_passed,
    }
    text = "\n".join(s.to_text() for s in sections)
    text += f"\noverall: {'PASS' if all_passed else 'FAIL'}"
    _emit(report, text, args)
    return EXIT_OK if all_passed else EXIT_CHECK_FAILED


def _design_payload(result: DesignResult) -> dict:
    return {
        "feasible": True,
        "shift": result.shift,
        "coefficients": result.coeffs.taps,
        "grouping": {
            "eigenvalues": result.grouping.eigenvalues,
            "alignment": result.grouping.alignment,
            "labels": list(result.grouping.labels),
        },
        "residual": result.residual,
        "retries_used": result.retries_used,
        "filter_order": result.coeffs.order,
    }


def _run_design(args):
    scenario = load_scenario(args.scenario)
    scenario = scenario.with_overrides(seed=args.seed, residual_tol=args.tol)
    problem = DesignProblem(scenario.topology, scenario.basis, scenario.options)
    return scenario, problem, feasible_shift(problem)


def cmd_design(args) -> int:
    scenario, problem, result = _run_design(args)
    if isinstance(result, Infeasible):
        report = {
            "command": "design",
            "feasible": False,
            "reason": result.reason,
            "detail": result.detail,
            "best_separation": result.best_separation,
        }
        text = f"infeasible ({result.reason}): {result.detail}"
        _emit(report, text, args)
        return EXIT_INFEASIBLE
    report = {"command": "design", **_design_payload(result)}
    labels = ", ".join(
        f"{lam:.4g}:{lab}" for lam, lab in zip(result.grouping.eigenvalues, result.grouping.labels)
    )
    text = (
        f"feasible design for n={scenario.n} (retries used: {result.retries_used})\n"
        f"filter order L = {result.coeffs.order}, residual = {result.residual:.3e}\n"
        f"spectrum: {labels}"
    )
    _emit(report, text, args)
    return EXIT_OK


def _load_design_file(path, n: int):
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise ScenarioError("$", f"cannot read {path}: {exc}") from None
    except json.JSONDecodeError as exc:
        raise ScenarioError("$", f"invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    if not isinstance(data, dict) or not data.get("feasible", False):
        raise ScenarioError("feasible", "design file does not hold a feasible design")
    shift = np.asarray(data.get("shift"), dtype=float)
    if shift.shape != (n, n):
        raise ScenarioError("shift", f"expected an {n} x {n} matrix, got shape {shift.shape}")
    taps = np.asarray(data.get("coefficients"), dtype=float)
    if taps.ndim != 1 or taps.size < 1:
        raise ScenarioError("coefficients", "expected a non-empty vector")
    return shift, FilterCoefficients(taps)


def _parse_signal(args, n: int) -> np.ndarray:
    if args.signal is not None:
        try:
            x = np.array([float(v) for v in args.signal.split(",")])
        except ValueError:
            raise ScenarioError("signal", f"not a comma-separated vector: {args.signal!r}") from None
        if x.size != n:
            raise ScenarioError("signal", f"expected {n} values, got {x.size}")
        return x
    return np.random.default_rng(args.signal_seed).standard_normal(n)


def cmd_simulate(args) -> int:
    scenario = load_scenario(args.scenario)
    scenario = scenario.with_overrides(seed=args.seed, residual_tol=args.tol)
    x = _parse_signal(args, scenario.n)
    if args.design:
        shift, coeffs = _load_design_file(args.design, scenario.n)
    else:
        problem = DesignProblem(scenario.topology, scenario.basis, scenario.options)
        result = feasible_shift(problem)
        if isinstance(result, Infeasible):
            report = {
                "command": "simulate",
                "feasible": False,
                "reason": result.reason,
                "detail": result.detail,
            }
            _emit(report, f"infeasible ({result.reason}): {result.detail}", args)
            return EXIT_INFEASIBLE
        shift, coeffs = result.shift, result.coeffs
    try:
        run = run_filter(scenario.topology, shift, coeffs, x)
        comparison = compare_with_centralized(scenario.topology, shift, coeffs, x)
    except LocalityViolationError as exc:
        print(f"design/topology mismatch: {exc}", file=sys.stderr)
        return EXIT_USAGE
    report = {
        "command": "simulate",
        "feasible": True,
        "input": x,
        "output": run.y,
        "stats": run.stats.to_dict(),
        "max_abs_diff": comparison.max_abs_diff,
        "pass": comparison.passed,
    }
    text = (
        f"decentralized filter on n={scenario.n}: rounds={run.stats.rounds}, "
        f"messages={run.stats.messages}\n"
        f"output: {np.array2string(run.y, precision=6)}\n"
        f"max |decentralized - centralized| = {comparison.max_abs_diff:.3e} "
        f"-> {'PASS' if comparison.passed else 'FAIL'}"
    )
    _emit(report, text, args)
    return EXIT_OK if comparison.passed else EXIT_CHECK_FAILED


def _span(text: str) -> range:
    try:
        if ".." in text:
            lo, hi = text.split("..", 1)
            lo, hi = int(lo), int(hi)
        else:
            lo = hi = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected N or LO..HI, got {text!r}") from None
    if lo < 1 or hi < lo:
        raise argparse.ArgumentTypeError(f"invalid dimension range {text!r}")
    return range(lo, hi + 1)


def cmd_rank_demo(args) -> int:
    rows = []
    all_ok = True
    for n in args.n:
        m = args.m if args.m is not None else 2 * n
        report = power_basis_rank_demo(n, m, args.trials, args.seed)
        rr = rank_requirement_vacuity(n, n)
        max_rank = max(int(c.measured) for c in report.claims)
        all_ok = all_ok and report.overall
        rows.append(
            {
                "n": n,
                "m": m,
                "max_rank": max_rank,
                "rank_bound": rr.rank_bound,
                "required_rank": rr.required_rank,
                "vacuous": rr.vacuous,
                "bound_holds": report.overall,
            }
        )
    report = {"command": "rank-demo", "trials": args.trials, "rows": rows, "all_passed": all_ok}
    lines = ["   n    m  max_rank  bound  required  vacuous"]
    for row in rows:
        lines.append(
            f"{row['n']:4d} {row['m']:4d}  {row['max_rank']:8d}  {row['rank_bound']:5d}"
            f"  {row['required_rank']:8d}  {str(row['vacuous']).lower():7s}"
        )
    lines.append(f"power-basis rank bound: {'holds' if all_ok else 'VIOLATED'}")
    _emit(report, "\n".join(lines), args)
    return EXIT_OK if all_ok else EXIT_CHECK_FAILED


def _add_common(parser: argparse.ArgumentParser, default_seed=0) -> None:
    parser.add_argument("--seed", type=int, default=default_seed, help="base RNG seed")
    parser.add_argument("--tol", type=float, default=None, help="override the closeness tolerance")
    parser.add_argument("--format", choices=("json", "text"), default="text")
    parser.add_argument("--out", default=None, help="also write the report to this path")
    parser.add_argument("--no-timestamp", action="store_true", help="omit timestamps (reproducible output)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftproj",
        description="verify, design, and simulate subspace-projecting graph filters",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="run the built-in counterexample checks")
    p.add_argument("--trials", type=int, default=100, help="seeds per seeded check")
    _add_common(p)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("design", help="design a shift + filter for a scenario file")
    p.add_argument("scenario", help="path to a JSON scenario")
    _add_common(p, default_seed=None)
    p.set_defaults(func=cmd_design)

    p = sub.add_parser("simulate", help="run the decentralized filter for a scenario file")
    p.add_argument("scenario", help="path to a JSON scenario")
    p.add_argument("--signal", default=None, help="comma-separated input vector")
    p.add_argument("--signal-seed", type=int, default=0, help="seed for a random input signal")
    p.add_argument("--design", default=None, help="reuse a design report instead of re-solving")
    _add_common(p, default_seed=None)
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("rank-demo", help="power-basis rank table over a dimension range")
    p.add_argument("--n", type=_span, default=range(3, 9), help="dimension N or range LO..HI")
    p.add_argument("--m", type=int, default=None, help="max exponent (default 2n)")
    p.add_argument("--trials", type=int, default=100)
    _add_common(p)
    p.set_defaults(func=cmd_rank_demo)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ScenarioError as exc:
        print(f"scenario error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
