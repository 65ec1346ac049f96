#!/usr/bin/env python3
"""Web-page ratio sweep: transfer gain and received image quality per
text:image ratio, for the configured code and channel. Writes
results/ratio_sweep/sweep.csv."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from uepsim import cli


def main() -> int:
    root = Path(__file__).resolve().parents[1]
    return cli.main(
        [
            "transmit",
            "--config", str(root / "configs" / "transmit_ratio.json"),
            "--out", str(root / "results" / "ratio_sweep"),
            "--seed", "1",
        ]
        + sys.argv[1:]
    )


if __name__ == "__main__":
    sys.exit(main())
