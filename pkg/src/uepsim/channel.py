"""BPSK over AWGN with LLR demapping.

Unit-energy BPSK maps bit 0 -> +1 and bit 1 -> -1. For a code of rate R at
Eb/No (dB) the noise variance is sigma^2 = 1 / (2 * R * 10^(Eb/No / 10)),
and the demapper emits LLR = 2 y / sigma^2 (positive means bit 0 is more
likely).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .rng import substream


@dataclass(frozen=True)
class ChannelConfig:
    ebno_db: float
    code_rate: float
    rng_seed: int = 0

    def __post_init__(self):
        if not 0.0 < self.code_rate <= 1.0:
            raise ValueError(f"code rate must be in (0, 1], got {self.code_rate}")

    @property
    def noise_variance(self) -> float:
        return 1.0 / (2.0 * self.code_rate * 10.0 ** (self.ebno_db / 10.0))


def transmit_batch(bits: np.ndarray, cfg: ChannelConfig, rng: np.random.Generator) -> np.ndarray:
    """Send (B, N) bit rows through the channel; returns (B, N) LLRs."""
    bits = np.atleast_2d(bits)
    sigma2 = cfg.noise_variance
    symbols = 1.0 - 2.0 * bits.astype(np.float64)
    y = symbols + rng.normal(0.0, math.sqrt(sigma2), size=bits.shape)
    return 2.0 * y / sigma2


def transmit(bits: np.ndarray, cfg: ChannelConfig, rng: np.random.Generator) -> np.ndarray:
    """Send one bit vector through the channel; returns its LLR vector."""
    return transmit_batch(bits, cfg, rng)[0]


def transmit_keyed(
    bits: np.ndarray, cfg: ChannelConfig, noise_seed: int, keys, attempt: int
) -> np.ndarray:
    """Send (B, N) bit rows with noise keyed per (row key, attempt).

    Row i draws its noise from substream (noise_seed, keys[i], attempt), so
    repeated sends of the same keyed codeword see the same noise sequence in
    every scenario, regardless of which other rows are in the batch.
    """
    bits = np.atleast_2d(bits)
    sigma2 = cfg.noise_variance
    sigma = math.sqrt(sigma2)
    symbols = 1.0 - 2.0 * bits.astype(np.float64)
    y = np.empty_like(symbols)
    for i, key in enumerate(keys):
        noise = substream(noise_seed, int(key), int(attempt)).standard_normal(bits.shape[1])
        y[i] = symbols[i] + sigma * noise
    return 2.0 * y / sigma2


def uncoded_ber(ebno_db: float) -> float:
    """Closed-form hard-decision BER of uncoded BPSK: Q(sqrt(2 Eb/No))."""
    ebno = 10.0 ** (ebno_db / 10.0)
    return 0.5 * math.erfc(math.sqrt(ebno))
