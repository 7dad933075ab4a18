#!/usr/bin/env python3
"""Run the full symbolic verification sweep and write a JSON report.

Equivalent to `formlap verify` with the default grid; kept as a script
so the sweep can be launched and archived without remembering flags.
"""

import sys
from pathlib import Path

from formlap.cli import main

if __name__ == "__main__":
    out = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("verification_report.json")
    sys.exit(main(["verify", "--output", str(out)]))
