"""Shared fixtures. The heavyweight profiles and codes are session-scoped so
the acceptance suite and the unit tests reuse one characterization run."""

from __future__ import annotations

from pathlib import Path

import numpy as np
import pytest

from uepsim import fec, uep
from uepsim.channel import ChannelConfig

REPO = Path(__file__).resolve().parents[1]
DEFAULT_TABLE_PATH = REPO / "data" / "default_gain_table.json"

# parity-check matrix of the 4x6 toy code (rank 3, so K = 3)
TOY_H = np.array(
    [
        [1, 1, 0, 0, 1, 0],
        [1, 0, 1, 1, 0, 0],
        [0, 0, 1, 0, 1, 1],
        [0, 1, 0, 1, 0, 1],
    ],
    dtype=np.uint8,
)


@pytest.fixture(scope="session")
def toy_ldpc():
    from uepsim.fec import alist

    return fec.load_ldpc_matrix(alist.format_alist(TOY_H))


@pytest.fixture(scope="session")
def ldpc_code():
    return fec.generate_ldpc_code(1024, 512, seed=1)


@pytest.fixture(scope="session")
def polar_crc_code():
    return fec.construct_polar_code(1024, 512, 2.0, crc_len=fec.DEFAULT_CRC_LEN)


@pytest.fixture(scope="session")
def polar_plain_code():
    return fec.construct_polar_code(1024, 512, 2.0, crc_len=0)


@pytest.fixture(scope="session")
def ldpc_profile_10k(ldpc_code):
    cfg = ChannelConfig(2.0, fec.code_rate(ldpc_code), rng_seed=101)
    return uep.characterize(ldpc_code, cfg, 10_000)


@pytest.fixture(scope="session")
def polar_profile_10k(polar_plain_code):
    cfg = ChannelConfig(2.0, fec.code_rate(polar_plain_code), rng_seed=102)
    return uep.characterize(polar_plain_code, cfg, 10_000)


@pytest.fixture(scope="session")
def polar_crc_profile(polar_crc_code):
    cfg = ChannelConfig(2.0, fec.code_rate(polar_crc_code), rng_seed=103)
    return uep.characterize(polar_crc_code, cfg, 3000)


@pytest.fixture(scope="session")
def gain_table():
    from uepsim import montecarlo

    if not DEFAULT_TABLE_PATH.exists():
        pytest.fail(f"default gain table missing: {DEFAULT_TABLE_PATH}")
    return montecarlo.GainTable.from_json(DEFAULT_TABLE_PATH.read_text())
