"""Selective-retransmission transfer of mapped payloads over the coded channel.

Each codeword is sent, decoded, and compared genie-style against the sent
bits on the mapping's protected positions; any protected mismatch triggers
a retransmission of that codeword with fresh noise. Errors on unprotected
positions stay in the received payload.

Noise is keyed per (codeword index, attempt) from the caller's seed, so two
scenarios transmitting the same payload (say, a selective mapping and its
fully protected baseline) see identical channel realizations attempt by
attempt. A codeword's accepting attempt under a larger protected set can
then never precede its accepting attempt under a smaller one, which makes
the paired retransmission monotonicity exact rather than statistical.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import fec
from ..channel import ChannelConfig, transmit_keyed
from .mapping import PriorityMapping
from .payload import GopPayload, WebPagePayload

_MAX_ROUNDS = 10_000


@dataclass
class TransferStats:
    total_codewords: int
    retransmissions: int
    received_payload: object  # same type as the sent payload

    def __post_init__(self):
        if self.total_codewords <= 0 or self.retransmissions < 0:
            raise ValueError("counts must be non-negative with at least one codeword")

    @property
    def loss_fraction(self) -> float:
        return self.retransmissions / (self.total_codewords + self.retransmissions)


def _assemble_bits(payload, mapping: PriorityMapping) -> np.ndarray:
    """Pack the payload streams into (n_codewords, payload_len) bit rows."""
    npos = mapping.payload_len
    if isinstance(payload, WebPagePayload):
        text, pix = payload.streams()
        n = payload.n_codewords
        bits = np.zeros((n, npos), dtype=np.uint8)
        tpos = mapping.stream_positions["text"]
        ipos = mapping.stream_positions["image"]
        if len(tpos) != payload.ratio[0] or len(ipos) != payload.ratio[1]:
            raise ValueError("mapping ratio does not match payload ratio")
        if len(tpos):
            bits[:, tpos] = text.reshape(n, len(tpos))
        if len(ipos):
            bits[:, ipos] = pix.reshape(n, len(ipos))
        return bits
    if isinstance(payload, GopPayload):
        streams = payload.frame_streams()
        if len(streams) != len(mapping.stream_positions):
            raise ValueError("mapping frame count does not match payload GOP")
        chunk = len(mapping.stream_positions["frame0"])
        n = -(-payload.frame_bits // chunk)
        bits = np.zeros((n, npos), dtype=np.uint8)
        for f, stream in enumerate(streams):
            padded = np.zeros(n * chunk, dtype=np.uint8)
            padded[: len(stream)] = stream
            bits[:, mapping.stream_positions[f"frame{f}"]] = padded.reshape(n, chunk)
        return bits
    raise TypeError(f"unsupported payload type {type(payload).__name__}")


def _extract_payload(payload, mapping: PriorityMapping, received_bits: np.ndarray):
    if isinstance(payload, WebPagePayload):
        text = received_bits[:, mapping.stream_positions["text"]].reshape(-1)
        pix = received_bits[:, mapping.stream_positions["image"]].reshape(-1)
        return payload.with_received(text, pix)
    streams = [
        received_bits[:, mapping.stream_positions[f"frame{f}"]].reshape(-1)
        for f in range(len(mapping.stream_positions))
    ]
    return payload.with_received(streams)


def retransmit_until_clean(
    sent_bits: np.ndarray,
    protected: np.ndarray,
    code: fec.CodeSpec,
    cfg: ChannelConfig,
    noise_seed: int,
    keys=None,
    list_size: int = fec.DEFAULT_LIST_SIZE,
):
    """Core send/decode/compare loop over (n_cw, payload_len) bit rows.

    Returns (retransmissions, received_bits). ``keys`` names each row for
    noise derivation (defaults to the row index); rows keyed identically see
    identical noise per attempt whatever the protected set, so a row's
    accepting attempt is monotone in the protected set.
    """
    n_cw = sent_bits.shape[0]
    keys = np.arange(n_cw) if keys is None else np.asarray(keys)
    codewords = fec.encode_batch(code, sent_bits)
    received = np.empty_like(sent_bits)
    pending = np.arange(n_cw)
    retransmissions = 0
    for attempt in range(_MAX_ROUNDS):
        llrs = transmit_keyed(codewords[pending], cfg, noise_seed, keys[pending], attempt)
        decoded, _ = fec.decode_batch(code, llrs, list_size)
        bad = (decoded[:, protected] != sent_bits[pending][:, protected]).any(axis=1)
        done = pending[~bad]
        received[done] = decoded[~bad]
        pending = pending[bad]
        if len(pending) == 0:
            return retransmissions, received
        retransmissions += len(pending)
    raise RuntimeError("retransmission cap exceeded; channel unusably bad")


def simulate_transfer(
    payload,
    mapping: PriorityMapping,
    code: fec.CodeSpec,
    cfg: ChannelConfig,
    noise_seed: int,
    list_size: int = fec.DEFAULT_LIST_SIZE,
) -> TransferStats:
    """Send one page or GOP; retransmit codewords until protected slots are clean.

    ``noise_seed`` roots the keyed noise substreams; identical seeds pair the
    channel realizations across mappings of the same payload.
    """
    if mapping.payload_len != fec.payload_length(code):
        raise ValueError("mapping payload length does not match the code")
    sent_bits = _assemble_bits(payload, mapping)
    retransmissions, received = retransmit_until_clean(
        sent_bits, mapping.protected, code, cfg, noise_seed, list_size=list_size
    )
    return TransferStats(
        total_codewords=sent_bits.shape[0],
        retransmissions=retransmissions,
        received_payload=_extract_payload(payload, mapping, received),
    )
