"""Command line entry point.

Subcommands: coverage, throughput, hocost, validate. Flags override the
config file, which overrides built-in defaults. Exit codes: 0 success,
1 validation-suite failure, 2 configuration error, 3 I/O error.
"""
from __future__ import annotations

import argparse
import sys

from . import experiments
from .experiments import ConfigError, ExperimentConfig

EXIT_OK = 0
EXIT_VALIDATION_FAILED = 1
EXIT_CONFIG_ERROR = 2
EXIT_IO_ERROR = 3


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hoskip",
        description="Coverage, handover cost, and throughput experiments "
                    "for handover skipping in dense cellular networks.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in [
        ("coverage", "analytical vs simulated coverage over a threshold grid"),
        ("throughput", "average throughput vs velocity, with crossover summary"),
        ("hocost", "handover time-fraction vs velocity"),
        ("validate", "run the invariant suite and emit a pass/fail report"),
    ]:
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", help="YAML config file")
        p.add_argument("--seed", type=int, help="master seed")
        p.add_argument("--trials", type=int, help="Monte Carlo trials per point")
        p.add_argument("--out", help="output directory")
        p.add_argument("--bits", action="store_true",
                       help="also report throughput in Mbps (divide by ln 2)")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = ExperimentConfig.load(path=args.config, seed=args.seed,
                                       trials=args.trials, out=args.out)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG_ERROR
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR

    try:
        if args.command == "coverage":
            path = experiments.cmd_coverage(config)
            print(f"wrote {path}")
        elif args.command == "throughput":
            path = experiments.cmd_throughput(config, bits=args.bits)
            print(f"wrote {path}")
        elif args.command == "hocost":
            path = experiments.cmd_hocost(config)
            print(f"wrote {path}")
        elif args.command == "validate":
            path, passed = experiments.cmd_validate(config)
            print(f"wrote {path}")
            if not passed:
                print("validation suite FAILED", file=sys.stderr)
                return EXIT_VALIDATION_FAILED
    except OSError as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO_ERROR
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
