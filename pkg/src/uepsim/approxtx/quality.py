"""Multi-scale structural similarity (MS-SSIM) for 8-bit grayscale images.

Five dyadic scales with the canonical weights
(0.0448, 0.2856, 0.3001, 0.2363, 0.1333), an 11x11 Gaussian window with
sigma 1.5, and C1 = (0.01 * 255)^2, C2 = (0.03 * 255)^2. Contrast-structure
terms enter at every scale, the luminance term only at the coarsest one.
Images too small for five scales use as many scales as fit an 11-pixel
window, with the weights renormalized.
"""

from __future__ import annotations

import numpy as np
from scipy.ndimage import correlate1d

SCALE_WEIGHTS = (0.0448, 0.2856, 0.3001, 0.2363, 0.1333)
WINDOW_SIZE = 11
WINDOW_SIGMA = 1.5
_C1 = (0.01 * 255.0) ** 2
_C2 = (0.03 * 255.0) ** 2


def _gaussian_kernel():
    half = (WINDOW_SIZE - 1) / 2.0
    x = np.arange(WINDOW_SIZE) - half
    k = np.exp(-0.5 * (x / WINDOW_SIGMA) ** 2)
    return k / k.sum()


_KERNEL = _gaussian_kernel()


def _smooth(img: np.ndarray) -> np.ndarray:
    out = correlate1d(img, _KERNEL, axis=0, mode="reflect")
    return correlate1d(out, _KERNEL, axis=1, mode="reflect")


def _ssim_terms(a: np.ndarray, b: np.ndarray):
    """Mean luminance and contrast-structure terms of one scale."""
    mu_a = _smooth(a)
    mu_b = _smooth(b)
    var_a = _smooth(a * a) - mu_a * mu_a
    var_b = _smooth(b * b) - mu_b * mu_b
    cov = _smooth(a * b) - mu_a * mu_b
    lum = (2.0 * mu_a * mu_b + _C1) / (mu_a**2 + mu_b**2 + _C1)
    cs = (2.0 * cov + _C2) / (var_a + var_b + _C2)
    return float(lum.mean()), float(cs.mean())


def _downsample(img: np.ndarray) -> np.ndarray:
    h, w = (img.shape[0] // 2) * 2, (img.shape[1] // 2) * 2
    c = img[:h, :w]
    return 0.25 * (c[0::2, 0::2] + c[1::2, 0::2] + c[0::2, 1::2] + c[1::2, 1::2])


def n_scales(shape) -> int:
    """Scales usable before the image falls below one filter window."""
    m = min(shape)
    scales = 1
    while scales < len(SCALE_WEIGHTS) and m // 2 >= WINDOW_SIZE:
        m //= 2
        scales += 1
    return scales


def ms_ssim(reference: np.ndarray, received: np.ndarray) -> float:
    """MS-SSIM score in [0, 1]; symmetric in its arguments."""
    a = np.asarray(reference, dtype=np.float64)
    b = np.asarray(received, dtype=np.float64)
    if a.shape != b.shape:
        raise ValueError(f"image dimensions differ: {a.shape} vs {b.shape}")
    if a.ndim != 2 or min(a.shape) < WINDOW_SIZE:
        raise ValueError(f"need a 2-D image of at least {WINDOW_SIZE} pixels per side")
    scales = n_scales(a.shape)
    weights = np.asarray(SCALE_WEIGHTS[:scales])
    weights = weights / weights.sum()
    score = 1.0
    for s in range(scales):
        lum, cs = _ssim_terms(a, b)
        term = lum * cs if s == scales - 1 else cs
        score *= max(term, 0.0) ** weights[s]
        if s != scales - 1:
            a = _downsample(a)
            b = _downsample(b)
    return float(score)


def gop_quality(reference_frames, received_frames) -> float:
    """Mean MS-SSIM over corresponding GOP frames."""
    if len(reference_frames) != len(received_frames):
        raise ValueError("frame counts differ")
    return float(np.mean([ms_ssim(r, x) for r, x in zip(reference_frames, received_frames)]))
