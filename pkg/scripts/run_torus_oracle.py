#!/usr/bin/env python3
"""Flat-torus oracle sweep: exact mode-matrix comparison at J = 0.

Runs dimensions 3..5 with orders up to 3 and 20 pseudorandom modes per
cell, the configuration the acceptance suite pins.
"""

import sys
from pathlib import Path

from formlap.cli import main

if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("torus_oracle_report.json")
    sys.exit(main(["oracle", "torus", "--n", "3", "4", "5", "--ell-max", "3",
                   "--modes", "20", "--seed", "1", "--output", str(out)]))
