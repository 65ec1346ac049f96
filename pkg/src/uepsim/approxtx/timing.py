"""Steady-state TCP throughput model and transfer timing.

Throughput as a function of the packet loss probability p:

    a = W_max / RTT
    b = RTT * sqrt(2 b_ack p / 3) + RTO * 3 sqrt(3 b_ack p / 8) * p * (1 + 32 p^2)
    Th(p) = min(a, 1 / b)        [packets per second]

The link delay of the modeled 5G hop is 1.38 ms, so RTT defaults to twice
that and RTO to 4 RTT. The default window of 16 packets of 1500 B matches
the bandwidth-delay product of a ~70 Mbit/s link at that RTT; a much larger
window puts the zero-loss operating point far above the loss-limited branch
and makes measured gains at small loss fractions hypersensitive to single
retransmission events. All parameters are per-call configurable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

LINK_DELAY_S = 1.38e-3


@dataclass(frozen=True)
class ThroughputParams:
    w_max: float = 16.0  # packets; bandwidth-delay product at the default RTT
    rtt: float = 2 * LINK_DELAY_S  # seconds
    rto: float = 8 * LINK_DELAY_S  # seconds
    b_ack: float = 2.0  # delayed-ack factor
    packet_size: float = 1500.0  # bytes

    def __post_init__(self):
        if min(self.w_max, self.rtt, self.rto, self.b_ack, self.packet_size) <= 0:
            raise ValueError("all throughput parameters must be positive")
        if self.rto < self.rtt:
            raise ValueError("RTO must be at least the RTT")


def throughput(p: float, params: ThroughputParams = ThroughputParams()) -> float:
    """Model throughput in bytes per second at loss probability p in [0, 1)."""
    if not 0.0 <= p < 1.0:
        raise ValueError(f"loss probability must be in [0, 1), got {p}")
    a = params.w_max / params.rtt
    if p == 0.0:
        return a * params.packet_size
    b = params.rtt * math.sqrt(2.0 * params.b_ack * p / 3.0) + params.rto * 3.0 * math.sqrt(
        3.0 * params.b_ack * p / 8.0
    ) * p * (1.0 + 32.0 * p * p)
    return min(a, 1.0 / b) * params.packet_size


def transfer_time(stats, params: ThroughputParams, payload_bytes: float) -> float:
    """Seconds to move ``payload_bytes`` given the measured send counts.

    Retransmissions inflate the bytes pushed through the link and set the
    loss probability handed to the throughput model.
    """
    sends = stats.total_codewords + stats.retransmissions
    bytes_sent = payload_bytes * sends / stats.total_codewords
    return bytes_sent / throughput(stats.loss_fraction, params)


def performance(time_s: float) -> float:
    """Reciprocal transfer time."""
    return 1.0 / time_s


def performance_gain(perf: float, perf_baseline: float) -> float:
    return (perf - perf_baseline) / perf_baseline
