# qsg/harness/cli.py
"""Command-line front end: `qsg run`, `qsg list` and `qsg selftest`."""
import argparse
import logging
import sys
from typing import List, Optional

from qsg.harness.config import Config
from qsg.harness.errors import CatalogError, ConfigError, QsgError
from qsg.harness.reporting import emit_report
from qsg.harness.tasks import list_catalog, load_config, run_catalog_scenario, run_scenario
from qsg.scenarios.selftest import run_selftest

EXIT_OK = 0
EXIT_FAILURES = 1
EXIT_CONFIG = 2


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="qsg",
        description="Numerically verify spectral mapping claims for quasi-semigroups on C^n.")
    parser.add_argument("--version", action="version", version=f"%(prog)s {Config.TOOL_VERSION}")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    commands = parser.add_subparsers(dest="command", required=True)

    run = commands.add_parser("run", help="run a scenario and emit its report")
    source = run.add_mutually_exclusive_group(required=True)
    source.add_argument("--config", help="path of a YAML scenario file")
    source.add_argument("--scenario", help="name of a built-in catalog scenario")
    run.add_argument("--format", choices=("json", "table"), default="json")
    run.add_argument("--out", help="write the report here instead of stdout")
    run.add_argument("--timing", action="store_true", help="include wall_time_ms in the report")

    commands.add_parser("list", help="list the built-in catalog")
    commands.add_parser("selftest", help="run the invariant self-test suites")
    return parser


def _write(payload: bytes, out: Optional[str]):
    if out:
        with open(out, "wb") as handle:
            handle.write(payload)
    else:
        sys.stdout.buffer.write(payload)
        sys.stdout.flush()


def _run(args) -> int:
    try:
        if args.config:
            report = run_scenario(load_config(args.config))
        else:
            report = run_catalog_scenario(args.scenario)
    except (ConfigError, CatalogError) as exc:
        logging.error(f"Configuration error: {exc}")
        print(f"qsg: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except QsgError as exc:
        logging.error(f"Scenario aborted: {exc}")
        print(f"qsg: scenario aborted: {exc}", file=sys.stderr)
        return EXIT_FAILURES
    _write(emit_report(report, args.format, include_timing=args.timing), args.out)
    if report.exit_code:
        logging.error(f"Scenario '{report.scenario_id}' has {report.summary.failed} failing records")
    return report.exit_code


def _list() -> int:
    entries = list_catalog()
    width = max(len(name) for name, _ in entries)
    for name, description in entries:
        print(f"{name:<{width}}  {description}")
    return EXIT_OK


def _selftest() -> int:
    results = run_selftest()
    for result in results:
        status = "PASS" if result.passed else "FAIL"
        detail = f"  {result.detail}" if result.detail else ""
        print(f"{result.name:<12} {status:<7} worst normalised residual {result.worst:.3g}{detail}")
    failed = [result.name for result in results if not result.passed]
    if failed:
        logging.error(f"Self-test suites failed: {failed}")
        return EXIT_FAILURES
    return EXIT_OK


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    if args.command == "run":
        return _run(args)
    if args.command == "list":
        return _list()
    return _selftest()


if __name__ == "__main__":
    sys.exit(main())
