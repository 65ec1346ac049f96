#!/usr/bin/env python3
"""Compare the four resource-allocation algorithms over injection
probabilities (seed-averaged metrics). Writes results/schedule/metrics.csv."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from uepsim import cli


def main() -> int:
    root = Path(__file__).resolve().parents[1]
    return cli.main(
        [
            "schedule",
            "--config", str(root / "configs" / "schedule.json"),
            "--out", str(root / "results" / "schedule"),
            "--seed", "1",
        ]
        + sys.argv[1:]
    )


if __name__ == "__main__":
    sys.exit(main())
