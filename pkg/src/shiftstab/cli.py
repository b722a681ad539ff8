"""Command-line front end.

    shiftstab run <scenario.toml> [--seed N] [--out DIR] [--threads N] [--grid-scale F]
    shiftstab suite {examples,acceptance} [--out DIR] [--threads N] [--grid-scale F]

Exit codes: 0 success (whatever the mathematical verdict), 2 configuration
error, 3 resource limit, 4 unsupported generator or request.  Heavy imports
happen after argument parsing so --threads can cap the BLAS pools in time.
"""

import argparse
import os
import sys

from .errors import (InvalidArgumentError, ResourceLimitError,
                     UnsupportedGeneratorError, UnsupportedRequestError,
                     UnsupportedSetError)

_THREAD_ENV = ("OPENBLAS_NUM_THREADS", "OMP_NUM_THREADS", "MKL_NUM_THREADS")


def _seed_type(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="shiftstab",
        description="Stability and interpolation diagnostics for shifted generators.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=_seed_type, default=None,
                        help="override the scenario seed (unsigned 64-bit)")
    common.add_argument("--out", default=None, metavar="DIR",
                        help="directory for report files")
    common.add_argument("--threads", type=int, default=None, metavar="N",
                        help="cap BLAS/OpenMP thread pools")
    common.add_argument("--grid-scale", type=float, default=1.0, metavar="F",
                        help="multiply grid resolutions by this factor")

    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", parents=[common],
                         help="execute one scenario file")
    run.add_argument("scenario", help="path to a scenario TOML file")
    suite = sub.add_parser("suite", parents=[common],
                           help="run a preset suite")
    suite.add_argument("name", choices=("examples", "acceptance"),
                       help="suite to run")
    return parser


def _apply_threads(threads) -> None:
    if threads is None:
        return
    if threads < 1:
        raise InvalidArgumentError("--threads must be at least 1")
    for var in _THREAD_ENV:
        os.environ[var] = str(threads)


def _out_path(out_dir, configured, default_name):
    name = configured or default_name
    if out_dir:
        return os.path.join(out_dir, os.path.basename(name))
    return name


def _cmd_run(args) -> int:
    import time

    from . import ops, reports
    from .scenario import parse_scenario

    scenario = parse_scenario(args.scenario)
    if args.seed is not None:
        scenario.seed = args.seed

    start = time.perf_counter()
    results, csv_payload = ops.run_operation(scenario, grid_scale=args.grid_scale)
    wall_ms = 1000.0 * (time.perf_counter() - start)

    report = reports.make_report(scenario.echo, scenario.seed, scenario.operation,
                                 results, wall_ms)
    json_path = _out_path(args.out, scenario.output_json, "report.json")
    reports.write_report_json(report, json_path)
    print(results["summary"])
    print(f"report: {json_path}")

    if scenario.output_csv:
        if csv_payload is None:
            print("note: this operation has no CSV payload; --out csv skipped")
        else:
            csv_path = _out_path(args.out, scenario.output_csv, "profile.csv")
            if csv_payload["kind"] == "profile":
                reports.write_profile_csv(csv_path, csv_payload["grid"],
                                          csv_payload["values"])
            else:
                reports.write_ladder_csv(csv_path, csv_payload["sizes"],
                                         csv_payload["lambda_mins"],
                                         csv_payload["lambda_maxes"])
            print(f"csv: {csv_path}")
    return 0


def _cmd_suite(args) -> int:
    import time

    from . import reports, suites

    start = time.perf_counter()
    rows = suites.SUITES[args.name]()
    wall_ms = 1000.0 * (time.perf_counter() - start)

    width = max(len(row.name) for row in rows)
    for row in rows:
        status = "PASS" if row.passed else "FAIL"
        print(f"[{status}] {row.index:2d}. {row.name:<{width}}  "
              f"({row.runtime_s:.2f}s)  {row.detail}")
    failed = sum(1 for row in rows if not row.passed)
    print(f"{len(rows) - failed}/{len(rows)} rows passed")

    report = reports.make_report({"suite": args.name},
                                 args.seed if args.seed is not None else 0,
                                 f"suite:{args.name}", rows, wall_ms)
    json_path = _out_path(args.out, "", f"suite_{args.name}.json")
    reports.write_report_json(report, json_path)
    csv_path = _out_path(args.out, "", f"suite_{args.name}.csv")
    reports.write_rows_csv(csv_path,
                           ("index", "name", "passed", "runtime_s", "detail"),
                           [(r.index, r.name, r.passed, repr(r.runtime_s), r.detail)
                            for r in rows])
    print(f"report: {json_path}")
    return 0


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        _apply_threads(args.threads)
        if args.command == "run":
            return _cmd_run(args)
        return _cmd_suite(args)
    except InvalidArgumentError as exc:
        where = ""
        line = getattr(exc, "line", None)
        if line is not None:
            where = f" (line {line}, column {getattr(exc, 'column', '?')})"
        print(f"configuration error{where}: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 3
    except (UnsupportedGeneratorError, UnsupportedRequestError,
            UnsupportedSetError) as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return 4


if __name__ == "__main__":
    sys.exit(main())
