"""Command line interface.

Exit codes: 0 success, 1 an identity or statistical check failed, 2 usage
error.  JSON output is wrapped in an envelope with the command, its
parameters and a schema version; rationals are always written as
``{"num": "...", "den": "..."}`` strings, never as floats.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from . import carries_chain, foulkes, idempotents, shuffle_stats
from .combinatorics import BRUTE_FORCE_CAP, CapExceededError
from .report import CheckReport

SCHEMA_VERSION = "1.0"
FORMAT_ENV = "CARRIES_FORMAT"

SUITES = ("eigen", "duality", "branching", "determinant", "regular", "chi-m", "gf", "covariance", "idempotents")


class UsageError(Exception):
    pass


def rational(q) -> dict:
    q = Fraction(q)
    return {"num": str(q.numerator), "den": str(q.denominator)}


def _float(x: float):
    return x if math.isfinite(x) else None


def _jsonable(value):
    if isinstance(value, Fraction):
        return rational(value)
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    if hasattr(value, "item"):  # numpy scalar
        return value.item()
    return value


def envelope(command: str, parameters: dict, payload: dict) -> str:
    doc = {
        "schema_version": SCHEMA_VERSION,
        "command": command,
        "parameters": parameters,
        "payload": _jsonable(payload),
    }
    return json.dumps(doc, indent=2) + "\n"


def _csv(rows) -> str:
    buf = io.StringIO()
    csv.writer(buf, lineterminator="\n").writerows(rows)
    return buf.getvalue()


def _frac_cell(q) -> str:
    q = Fraction(q)
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def _int_at_least(lo, hi=None):
    def parse(text):
        try:
            value = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
        if value < lo:
            raise argparse.ArgumentTypeError(f"must be >= {lo}, got {value}")
        if hi is not None and value > hi:
            raise argparse.ArgumentTypeError(f"must be <= {hi}, got {value}")
        return value
    return parse


def _seed(text):
    value = _int_at_least(0)(text)
    if value >= 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 bits")
    return value


# ---------------------------------------------------------------------------
# commands


def cmd_matrix(args) -> tuple[str, int]:
    m = carries_chain.holte_matrix(args.n, args.b)
    if args.power is not None:
        m = carries_chain.matrix_power(m, args.power)
    if args.format == "csv":
        return _csv([[_frac_cell(x) for x in row] for row in m.rows()]), 0
    params = {"n": args.n, "b": args.b, "power": args.power}
    payload = {
        "n": args.n, "b": args.b, "power": 1 if args.power is None else args.power,
        "entries": m.rows(),
        "approx": [[float(x) for x in row] for row in m.rows()],
    }
    return envelope("matrix", params, payload), 0


def cmd_foulkes(args) -> tuple[str, int]:
    n = args.n
    method = "recursive" if args.check in (None, "all") else args.check
    table = foulkes.foulkes_table(n, method)
    checks = []
    if args.check == "all":
        checks.append(foulkes.triple_agreement(n))
    elif method != "recursive":
        ref = foulkes.foulkes_table_recursive(n)
        checks.append(CheckReport(f"{method}-vs-recursive", table == ref, n * n))
    status = 0 if all(checks) else 1
    if args.format == "csv":
        header = ["k"] + [str(j) for j in range(n, 0, -1)]
        return _csv([header] + [[k] + row for k, row in enumerate(table.display_rows())]), status
    payload = {
        "n": n,
        "method": method,
        "rows": [{"k": k, "chi": {str(j): table[k, j] for j in range(1, n + 1)}} for k in range(n)],
        "display": {"columns": list(range(n, 0, -1)), "rows": table.display_rows()},
        "checks": [_check_json(c) for c in checks],
    }
    return envelope("foulkes", {"n": n, "check": args.check}, payload), status


def _check_json(report: CheckReport, suite: str | None = None) -> dict:
    out = {"name": report.name, "passed": report.passed, "cases": report.cases,
           "failure": report.failure, "info": report.info}
    if suite:
        out["suite"] = suite
    return out


def _skipped(name, reason) -> CheckReport:
    return CheckReport(name, True, 0, None, {"skipped": reason})


def run_suite(suite: str, n: int, b: int, group_cap: int) -> list[CheckReport]:
    if suite == "eigen":
        return [foulkes.left_eigen_check(n, b), idempotents.right_eigen_triple_check(n),
                idempotents.vu_duality(n, bases=(b,))]
    if suite == "duality":
        return [idempotents.vu_duality(n, bases=tuple(sorted({2, 10, b})))]
    if suite == "branching":
        return [foulkes.branching_check(n)] if n >= 2 else [_skipped("branching", "needs n >= 2")]
    if suite == "determinant":
        return [foulkes.determinant_check(n)]
    if suite == "regular":
        out = [foulkes.regular_character_check(n)]
        if n <= BRUTE_FORCE_CAP:
            out.append(foulkes.dimension_check(n))
        return out
    if suite == "chi-m":
        return [foulkes.permutation_character_check(n, m) for m in range(1, 6)]
    if suite == "gf":
        return [shuffle_stats.gf_carry_equivalence(n, b, r) for r in range(4)]
    if suite == "covariance":
        if n < 2:
            return [_skipped("covariance", "needs n >= 2")]
        return [shuffle_stats.covariance_check(n, b)]
    if suite == "idempotents":
        if n > group_cap:
            raise CapExceededError(f"idempotents suite limited to n <= {group_cap} (use --group-cap)")
        return [idempotents.idempotency_check(n, cap=group_cap),
                idempotents.idempotency_check(n, sign_twisted=True, cap=group_cap)]
    raise UsageError(f"unknown suite {suite}")


def cmd_verify(args) -> tuple[str, int]:
    suites = SUITES if args.suite == "all" else (args.suite,)
    results = []
    for suite in suites:
        for report in run_suite(suite, args.n, args.b, args.group_cap):
            results.append((suite, report))
    passed = all(r for _, r in results)
    status = 0 if passed else 1
    if args.format == "text":
        lines = [f"{'PASS' if r.passed else 'FAIL'}  {suite:<12} {r.name:<28} cases={r.cases}"
                 + (f"  failure={r.failure}" if r.failure else "")
                 for suite, r in results]
        return "\n".join(lines) + "\n", status
    payload = {"passed": passed, "results": [_check_json(r, suite) for suite, r in results]}
    params = {"n": args.n, "b": args.b, "suite": args.suite}
    return envelope("verify", params, payload), status


def _record_json(rep: shuffle_stats.MomentReport) -> dict:
    return {
        "statistic": rep.statistic,
        "params": rep.params,
        "estimate": _float(rep.estimate),
        "exact": rational(rep.exact),
        "exact_approx": float(rep.exact),
        "std_error": _float(rep.std_error),
        "z_score": _float(rep.z_score),
    }


def cmd_simulate(args) -> tuple[str, int]:
    config = shuffle_stats.SimulationConfig(
        n=args.n, b=args.b, r=args.r, samples=args.samples, seed=args.seed, s=args.s,
        L=args.chain_length, workers=args.workers)
    extra = {}
    if args.mode == "carries":
        if args.n < 2:
            raise UsageError("carries mode needs --n >= 2")
        records = shuffle_stats.moment_comparison(config) + shuffle_stats.transition_comparison(config)
    else:
        records = shuffle_stats.descent_comparison(config)
        extra["gf"] = list(shuffle_stats.descent_gf(args.n, args.b, args.r).coeffs)
    max_z = max(abs(rep.z_score) for rep in records)
    passed = max_z < shuffle_stats.Z_THRESHOLD
    status = 1 if (args.strict and not passed) else 0
    if args.format == "text":
        lines = [f"{'statistic':<11} {'params':<40} {'estimate':>12} {'exact':>12} {'stderr':>10} {'z':>7}"]
        for rep in records:
            p = " ".join(f"{k}={v}" for k, v in rep.params.items())
            lines.append(f"{rep.statistic:<11} {p:<40} {rep.estimate:12.6f} {float(rep.exact):12.6f} "
                         f"{rep.std_error:10.2e} {rep.z_score:7.2f}")
        lines.append(f"max |z| = {max_z:.2f} ({'ok' if passed else 'exceeds'} threshold {shuffle_stats.Z_THRESHOLD})")
        return "\n".join(lines) + "\n", status
    payload = {"mode": args.mode, "records": [_record_json(r) for r in records],
               "max_abs_z": _float(max_z), "passed": passed, **extra}
    params = {"mode": args.mode, "n": args.n, "b": args.b, "r": args.r, "s": args.s,
              "samples": args.samples, "seed": args.seed}
    return envelope("simulate", params, payload), status


def cmd_tv(args) -> tuple[str, int]:
    curve = carries_chain.tv_curve(args.n, args.b, args.kmax)
    if args.format == "csv":
        return _csv([["k", "tv", "approx"]] + [[k, _frac_cell(v), repr(float(v))] for k, v in enumerate(curve)]), 0
    payload = {"n": args.n, "b": args.b, "kmax": args.kmax,
               "values": [{"k": k, "tv": v, "approx": float(v)} for k, v in enumerate(curve)]}
    return envelope("tv", {"n": args.n, "b": args.b, "kmax": args.kmax}, payload), 0


def limits() -> dict:
    return {
        "brute_force_n": BRUTE_FORCE_CAP,
        "group_algebra_n": idempotents.GROUP_ALGEBRA_CAP,
        "z_threshold": shuffle_stats.Z_THRESHOLD,
        "schema_version": SCHEMA_VERSION,
    }


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="carries", description=__doc__.splitlines()[0])
    parser.add_argument("--limits", action="store_true", help="print computation caps as JSON and exit")
    sub = parser.add_subparsers(dest="command")
    env_format = os.environ.get(FORMAT_ENV)

    def fmt(p, choices):
        default = env_format if env_format in choices else choices[0]
        p.add_argument("--format", choices=choices, default=default)

    p = sub.add_parser("matrix", help="carries transition matrix or its power")
    p.add_argument("--n", type=_int_at_least(1), required=True)
    p.add_argument("--b", type=_int_at_least(2), required=True)
    p.add_argument("--power", type=_int_at_least(0))
    fmt(p, ("json", "csv"))
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("foulkes", help="Foulkes character table")
    p.add_argument("--n", type=_int_at_least(1), required=True)
    p.add_argument("--check", choices=("recursive", "closed", "alt", "all"))
    fmt(p, ("json", "csv"))
    p.set_defaults(func=cmd_foulkes)

    p = sub.add_parser("verify", help="run identity checks")
    p.add_argument("--n", type=_int_at_least(1), required=True)
    p.add_argument("--b", type=_int_at_least(2), default=10)
    p.add_argument("--suite", choices=SUITES + ("all",), default="all")
    p.add_argument("--group-cap", type=_int_at_least(1, idempotents.GROUP_ALGEBRA_CAP),
                   default=idempotents.GROUP_ALGEBRA_CAP, help="largest n for group-algebra suites")
    fmt(p, ("json", "text"))
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("simulate", help="Monte Carlo comparison with exact values")
    p.add_argument("--mode", choices=("carries", "shuffles"), required=True)
    p.add_argument("--n", type=_int_at_least(1), required=True)
    p.add_argument("--b", type=_int_at_least(2), required=True)
    p.add_argument("--r", type=_int_at_least(0), required=True)
    p.add_argument("--s", type=_int_at_least(0), default=1, help="earlier carry index for the covariance")
    p.add_argument("--samples", type=_int_at_least(1), required=True)
    p.add_argument("--seed", type=_seed, required=True)
    p.add_argument("--chain-length", type=_int_at_least(1), default=1000)
    p.add_argument("--workers", type=_int_at_least(1), default=1)
    p.add_argument("--strict", action="store_true", help="exit 1 if any |z| >= 4")
    fmt(p, ("json", "text"))
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("tv", help="exact total variation distance curve")
    p.add_argument("--n", type=_int_at_least(1), required=True)
    p.add_argument("--b", type=_int_at_least(2), required=True)
    p.add_argument("--kmax", type=_int_at_least(0), required=True)
    fmt(p, ("json", "csv"))
    p.set_defaults(func=cmd_tv)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.limits:
        sys.stdout.write(json.dumps(limits(), indent=2) + "\n")
        return 0
    if args.command is None:
        parser.print_usage(sys.stderr)
        return 2
    try:
        text, status = args.func(args)
    except (UsageError, CapExceededError) as exc:
        parser.print_usage(sys.stderr)
        sys.stderr.write(f"carries: error: {exc}\n")
        return 2
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
