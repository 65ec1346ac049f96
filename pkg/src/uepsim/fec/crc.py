"""Cyclic redundancy checks over GF(2).

The generator polynomial is given as an integer mask of the ``crc_len`` low
coefficients; the leading x^crc_len term is implicit. CRC computation is
linear over GF(2), so we precompute a (payload_len x crc_len) matrix once
and batch-encode with a single matrix multiply.
"""

from __future__ import annotations

import numpy as np


def poly_bits(crc_poly: int, crc_len: int) -> np.ndarray:
    """Low ``crc_len`` coefficients of the generator, highest power first."""
    return np.array([(crc_poly >> (crc_len - 1 - i)) & 1 for i in range(crc_len)], dtype=np.uint8)


def remainder_matrix(payload_len: int, crc_len: int, crc_poly: int) -> np.ndarray:
    """Matrix C with crc = (payload @ C) % 2 for row-vector payloads.

    Row i holds the remainder of x^(payload_len - 1 - i + crc_len) modulo the
    generator, built by iterated shift-and-reduce.
    """
    if crc_len == 0:
        return np.zeros((payload_len, 0), dtype=np.uint8)
    g = poly_bits(crc_poly, crc_len)
    # power[j] = x^j mod g, for j = 0 .. payload_len + crc_len - 1
    powers = np.zeros((payload_len + crc_len, crc_len), dtype=np.uint8)
    cur = np.zeros(crc_len, dtype=np.uint8)
    cur[-1] = 1  # x^0
    powers[0] = cur
    for j in range(1, payload_len + crc_len):
        overflow = cur[0]
        cur = np.roll(cur, -1)
        cur[-1] = 0
        if overflow:
            cur ^= g
        powers[j] = cur
    mat = np.empty((payload_len, crc_len), dtype=np.uint8)
    for i in range(payload_len):
        mat[i] = powers[payload_len - 1 - i + crc_len]
    return mat


def crc_append(payload: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """Append CRC bits to payload rows. ``payload`` shape (..., payload_len)."""
    if mat.shape[1] == 0:
        return payload
    rem = (payload.astype(np.int32) @ mat.astype(np.int32)) & 1
    return np.concatenate([payload, rem.astype(payload.dtype)], axis=-1)


def crc_check(blocks: np.ndarray, mat: np.ndarray) -> np.ndarray:
    """Check payload||crc rows; returns boolean array over leading axes."""
    if mat.shape[1] == 0:
        return np.ones(blocks.shape[:-1], dtype=bool)
    crc_len = mat.shape[1]
    payload = blocks[..., :-crc_len]
    crc = blocks[..., -crc_len:]
    rem = (payload.astype(np.int32) @ mat.astype(np.int32)) & 1
    return np.all(rem == crc, axis=-1)
