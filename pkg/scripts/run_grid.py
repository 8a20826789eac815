#!/usr/bin/env python3
"""Grid-search the decision vector (M, K, T, S, Q) of the default scenario.

Writes grid.csv with every evaluated point, replications.csv for the winner,
and a summary. Usage: python3 scripts/run_grid.py [--workers N]
"""

import argparse
import sys
from pathlib import Path

from cbmsim.cli import main as cli_main

ROOT = Path(__file__).resolve().parent.parent


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--config", default=str(ROOT / "scenarios" / "default.yaml"))
    parser.add_argument("--out", default=str(ROOT / "results" / "grid"))
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()

    return cli_main(["optimize", "--config", args.config, "--out", args.out,
                     "--workers", str(args.workers)])


if __name__ == "__main__":
    sys.exit(main())
