"""Deterministic random substreams.

Every stochastic operation in the package draws from a substream derived
from a master seed plus an integer path (for example ``(master_seed, trial)``).
Substreams are mutually independent, so trials can be fanned out over
workers in any order and still accumulate to the same result as a serial
run.
"""

from __future__ import annotations

import numpy as np


def substream(master_seed: int, *path: int) -> np.random.Generator:
    """Return an independent generator for (master_seed, *path)."""
    seq = np.random.SeedSequence(entropy=int(master_seed), spawn_key=tuple(int(p) for p in path))
    return np.random.default_rng(seq)
