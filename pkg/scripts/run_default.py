#!/usr/bin/env python3
"""Run the default scenario and print the cost-rate summary.

Usage: python3 scripts/run_default.py [--out results/default] [--workers N]
"""

import argparse
import sys
from pathlib import Path

from cbmsim.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(ROOT / "scenarios" / "default.yaml"))
    parser.add_argument("--out", default=str(ROOT / "results" / "default"))
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--replications", type=int, default=None)
    args = parser.parse_args()

    argv = ["simulate", "--config", args.config, "--out", args.out,
            "--workers", str(args.workers)]
    if args.replications is not None:
        argv += ["--replications", str(args.replications)]
    return cli_main(argv)


if __name__ == "__main__":
    sys.exit(main())
