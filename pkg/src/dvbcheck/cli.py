"""``dvbcheck``: run the randomized property suites from the command line."""

from __future__ import annotations

import argparse
import os
import sys

from .suites import SUITE_ORDER, SuiteConfig, emit_report, exit_code, run_suites


def _seed_default() -> int:
    raw = os.environ.get("DVBCHECK_SEED")
    if raw is None or raw == "":
        return 0
    try:
        return int(raw)
    except ValueError:
        raise SystemExit(f"dvbcheck: DVBCHECK_SEED must be an integer, got {raw!r}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dvbcheck", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    run = sub.add_parser("run", help="run one suite or all of them")
    run.add_argument("--suite", required=True, choices=[*SUITE_ORDER, "all"])
    run.add_argument("--seed", type=int, default=None, help="defaults to $DVBCHECK_SEED, else 0")
    run.add_argument("--trials", type=int, default=None, help="cases per suite (suite default if omitted)")
    run.add_argument("--dim-base", type=int, default=None, help="largest sampled dimension")
    run.add_argument("--tol-exact", type=float, default=1e-12)
    run.add_argument("--tol-fd", type=float, default=1e-6)
    run.add_argument("--report", choices=["text", "json"], default="text")
    run.add_argument("--negative-controls", action="store_true", help="also run the non-Poisson control bivector")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    seed = args.seed if args.seed is not None else _seed_default()
    try:
        cfg = SuiteConfig(
            suite=args.suite,
            seed=seed,
            trials=args.trials,
            dim_base=args.dim_base,
            tol_exact=args.tol_exact,
            tol_fd=args.tol_fd,
            negative_controls=args.negative_controls,
        )
    except ValueError as exc:
        parser.error(str(exc))
    reports = run_suites(cfg)
    sys.stdout.buffer.write(emit_report(reports, args.report, args.suite))
    sys.stdout.flush()
    return exit_code(reports)


if __name__ == "__main__":
    sys.exit(main())
