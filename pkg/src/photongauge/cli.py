"""Command-line runner for the verification experiments.

Usage::

    photongauge <experiment> [--config FILE] [--out DIR] [--tier fast|reference] [--seed N]

The output directory is taken from ``--out``, else the
``PHOTONGAUGE_OUTPUT_DIR`` environment variable, else the config's
``output`` key. The exit status is 0 when every check passes, 1 when any
check fails and 2 for invalid input.
"""
from __future__ import annotations

import argparse
import os
import sys

from .config import ExperimentConfig, load_config, parse_config
from .errors import PhotonGaugeError
from .experiments import EXPERIMENTS, run_all

OUTPUT_ENV = "PHOTONGAUGE_OUTPUT_DIR"

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="photongauge",
                                     description="Verify photon Berry-gauge identities numerically.")
    sub = parser.add_subparsers(dest="experiment", required=True, metavar="experiment")
    for name in (*EXPERIMENTS, "all"):
        p = sub.add_parser(name, help=f"run the {name} experiment" if name != "all" else "run every experiment")
        p.add_argument("--config", help="TOML experiment file (defaults are used when omitted)")
        p.add_argument("--out", help=f"output directory (overrides ${OUTPUT_ENV} and the config)")
        p.add_argument("--tier", choices=("fast", "reference"), help="grid tier: 64^3 or 96^3 points")
        p.add_argument("--seed", type=_seed, help="seed for random-point checks")
    return parser


def resolve_config(args) -> ExperimentConfig:
    """Merge the config file with command-line overrides and revalidate."""
    config = load_config(args.config) if args.config else ExperimentConfig()
    data = config.model_dump()
    data["experiment"] = args.experiment
    if args.tier is not None:
        data["tier"] = args.tier
    if args.seed is not None:
        data["seed"] = args.seed
    out = args.out or os.environ.get(OUTPUT_ENV) or config.output
    data["output"] = out
    return parse_config(data)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        config = resolve_config(args)
        if config.experiment == "all":
            report = run_all(config)
            parts = report.parts
        else:
            report = EXPERIMENTS[config.experiment](config)
            parts = [report]
    except (PhotonGaugeError, OSError) as exc:
        print(f"photongauge: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    for part in parts:
        part.write(config.output)
        print(part.summary_table())
        print()
    if config.experiment == "all":
        report.write(config.output)
        print(f"all: {len(report.records)} checks, {'PASS' if report.passed else 'FAIL'}, "
              f"{report.duration_s:.1f} s")
    print(f"reports written to {config.output}")
    return EXIT_OK if report.passed else EXIT_FAILED
