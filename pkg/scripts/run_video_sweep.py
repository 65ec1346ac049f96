#!/usr/bin/env python3
"""GOP video sweep: transfer gain and received video quality as the number
of protected P-frames varies 0..14. Writes results/video_sweep/sweep.csv."""

import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).resolve().parents[1] / "src"))

from uepsim import cli


def main() -> int:
    root = Path(__file__).resolve().parents[1]
    return cli.main(
        [
            "transmit",
            "--config", str(root / "configs" / "transmit_video.json"),
            "--out", str(root / "results" / "video_sweep"),
            "--seed", "1",
        ]
        + sys.argv[1:]
    )


if __name__ == "__main__":
    sys.exit(main())
