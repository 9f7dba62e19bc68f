"""Command-line interface.

Subcommands:
  simulate <scenario> --out trace.csv   run and write the trace; metrics JSON
                                        goes to stdout
  verify <scenario> [more...] [--jobs N]
                                        run compliance checks; exit 0 iff all
                                        scenarios pass
  selftest                              scenario-free property suites
  mu-table <T> --out table.csv          tabulate the shift function and its
                                        rate for external plotting

Exit codes: 0 success, 1 verification or validation failure, 2 usage error.
Failures emit a machine-readable JSON object on stderr.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ProcessPoolExecutor

import numpy as np

from .scenario import ValidationError, resolve_scenario
from .selftest import run_selftest
from .shift import eval_mu, eval_mu_dot, make_shift
from .sim import run_scenario, summarize_metrics
from .transform import PerformanceViolation


def _fail(kind: str, **extra) -> int:
    print(json.dumps({"error": kind, **extra}), file=sys.stderr)
    return 1


def _verify_one(path: str) -> dict:
    try:
        scenario = resolve_scenario(path)
    except ValidationError as ex:
        return {"scenario": path, "passed": False,
                "error": {"error": "validation-error", "field": ex.field, "message": str(ex)}}
    except (ValueError, FileNotFoundError, OSError) as ex:
        return {"scenario": path, "passed": False,
                "error": {"error": "parse-error", "message": str(ex)}}
    trace, report = run_scenario(scenario)
    return {"scenario": path, "passed": report.all_ok, "report": report.to_dict(),
            "rows": 0 if trace is None else trace.n_rows}


def _cmd_simulate(ns) -> int:
    try:
        scenario = resolve_scenario(ns.scenario)
    except ValidationError as ex:
        return _fail("validation-error", field=ex.field, message=str(ex))
    except (ValueError, FileNotFoundError, OSError) as ex:
        return _fail("parse-error", message=str(ex))
    try:
        from .sim import simulate

        trace = simulate(scenario)
    except PerformanceViolation as pv:
        return _fail("performance-violation", time=pv.t, channel=pv.channel, psi=pv.psi)
    trace.to_csv(ns.out)
    print(json.dumps(summarize_metrics(trace).to_dict(), indent=2))
    return 0


def _cmd_verify(ns) -> int:
    paths = list(ns.scenarios)
    if ns.jobs > 1 and len(paths) > 1:
        with ProcessPoolExecutor(max_workers=ns.jobs) as pool:
            results = list(pool.map(_verify_one, paths))
    else:
        results = [_verify_one(p) for p in paths]
    all_ok = True
    for res in results:
        print(json.dumps(res))
        all_ok &= res["passed"]
    if not all_ok:
        failed = [r["scenario"] for r in results if not r["passed"]]
        return _fail("verification-failed", scenarios=failed)
    return 0


def _cmd_selftest(ns) -> int:
    suites = run_selftest()
    ok = True
    for suite in suites:
        status = "PASS" if suite.passed else "FAIL"
        print(f"{suite.name}: {status} ({sum(1 for _, o, _ in suite.checks if o)}/{len(suite.checks)} checks)")
        for label, check_ok, detail in suite.checks:
            if not check_ok:
                print(f"  failed: {label} {detail}")
        ok &= suite.passed
    if not ok:
        return _fail("selftest-failed")
    return 0


def _cmd_mu_table(ns) -> int:
    try:
        sf = make_shift(ns.T, ns.grid_size)
    except ValueError as ex:
        return _fail("validation-error", field="T/grid_size", message=str(ex))
    ts = np.linspace(0.0, sf.T, ns.points)
    with open(ns.out, "w", newline="") as fh:
        fh.write("t,mu,mu_dot\n")
        for t in ts:
            t = float(t)
            fh.write("%.17g,%.17g,%.17g\n" % (t, eval_mu(sf, t), eval_mu_dot(sf, t)))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ppcsim", description=__doc__,
                                     formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = parser.add_subparsers(dest="command", required=True)

    p_sim = sub.add_parser("simulate", help="run a scenario and write the trace CSV")
    p_sim.add_argument("scenario", help="scenario file path or bundled scenario name")
    p_sim.add_argument("--out", required=True, help="trace CSV output path")
    p_sim.set_defaults(fn=_cmd_simulate)

    p_ver = sub.add_parser("verify", help="run compliance checks on one or more scenarios")
    p_ver.add_argument("scenarios", nargs="+", help="scenario file paths or bundled names")
    p_ver.add_argument("--jobs", type=int, default=1, help="run scenarios in parallel")
    p_ver.set_defaults(fn=_cmd_verify)

    p_self = sub.add_parser("selftest", help="run the scenario-free property suites")
    p_self.set_defaults(fn=_cmd_selftest)

    p_mu = sub.add_parser("mu-table", help="tabulate the shift function")
    p_mu.add_argument("T", type=float, help="support length")
    p_mu.add_argument("--out", required=True, help="CSV output path")
    p_mu.add_argument("--grid-size", type=int, default=4096)
    p_mu.add_argument("--points", type=int, default=1001)
    p_mu.set_defaults(fn=_cmd_mu_table)
    return parser


def run_cli(argv) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as ex:  # argparse handles --help (0) and usage errors (2)
        return 0 if ex.code in (0, None) else 2
    return ns.fn(ns)


def main() -> None:
    sys.exit(run_cli(sys.argv[1:]))


if __name__ == "__main__":
    main()
