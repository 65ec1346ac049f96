#!/usr/bin/env python3
"""Reproduce the per-position bit-error characterization for both codes.

Writes results/uep/<code>/profile.csv (one row per information position)
plus a shape summary. Full fidelity is 100k transmissions per code; pass
--fast for the 10k variant.
"""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from uepsim import cli


def main() -> int:
    fast = "--fast" in sys.argv
    root = Path(__file__).resolve().parents[1]
    rc = 0
    for code in ("ldpc", "polar"):
        args = [
            "characterize",
            "--config", str(root / "configs" / f"characterize_{code}.json"),
            "--out", str(root / "results" / "uep" / code),
            "--seed", "1",
        ]
        if fast:
            args += ["--trials", "10000"]
        rc |= cli.main(args)
        print(f"{code}: results/uep/{code}/profile.csv")
    return rc


if __name__ == "__main__":
    sys.exit(main())
