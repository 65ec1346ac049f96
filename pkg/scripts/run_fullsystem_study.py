#!/usr/bin/env python3
"""4L vs 3L2P vs 2L2P scenario study over the Eb/No and injection grids
(per-seed performance and gain rows). Writes
results/fullsystem/scenario_gains.csv."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from uepsim import cli


def main() -> int:
    root = Path(__file__).resolve().parents[1]
    return cli.main(
        [
            "fullsystem",
            "--config", str(root / "configs" / "fullsystem.json"),
            "--out", str(root / "results" / "fullsystem"),
            "--seed", "1",
        ]
        + sys.argv[1:]
    )


if __name__ == "__main__":
    sys.exit(main())
