"""Deterministic synthetic image and GOP generators for tests and demos.

The transmission pipeline treats pixel values as opaque payload, so any
reproducible grayscale content works; these generators mix smooth gradients
with texture and moving shapes so quality scores respond to bit damage the
way natural footage does.
"""

from __future__ import annotations

import numpy as np

from .rng import substream


def synthetic_image(size: int = 64, seed: int = 0) -> np.ndarray:
    """Grayscale test image: gradient background, disk, bars, mild texture."""
    rng = substream(seed, 0xA55E7)
    y, x = np.mgrid[0:size, 0:size]
    img = 96.0 + 80.0 * x / size + 40.0 * np.sin(2 * np.pi * y / (size / 3.0))
    cy, cx, r = size * 0.4, size * 0.55, size * 0.22
    disk = (y - cy) ** 2 + (x - cx) ** 2 < r**2
    img[disk] = 210.0
    img[(x // max(size // 8, 1)) % 2 == 0] -= 25.0
    img += rng.normal(0.0, 6.0, img.shape)
    return np.clip(img, 0, 255).astype(np.uint8)


def synthetic_gop(size: int = 32, n_pframes: int = 14, seed: int = 0):
    """Frames with a slowly drifting disk over a textured background.

    Motion is gentle so successive differences stay within the one-byte
    P-frame representation.
    """
    rng = substream(seed, 0x60B)
    y, x = np.mgrid[0:size, 0:size]
    base = 90.0 + 60.0 * x / size + rng.normal(0.0, 5.0, (size, size))
    frames = []
    for f in range(n_pframes + 1):
        cy = size * (0.3 + 0.02 * f)
        cx = size * (0.3 + 0.025 * f)
        r = size * 0.18
        img = base.copy()
        img[(y - cy) ** 2 + (x - cx) ** 2 < r**2] = 200.0 + 2.0 * f
        frames.append(np.clip(img, 0, 255).astype(np.uint8))
    return frames
