"""MS-SSIM scoring."""

import numpy as np
import pytest

from uepsim.approxtx import gop_quality, ms_ssim
from uepsim.approxtx.quality import n_scales
from uepsim.rng import substream
from uepsim.synthassets import synthetic_gop, synthetic_image


def salt_noise(image, fraction, seed):
    rng = substream(seed, 0)
    out = image.copy()
    mask = rng.random(image.shape) < fraction
    out[mask] = rng.integers(0, 256, int(mask.sum()))
    return out


def test_identical_images_score_one():
    img = synthetic_image(128, seed=1)
    assert ms_ssim(img, img) == pytest.approx(1.0, abs=1e-9)


def test_symmetry():
    img = synthetic_image(64, seed=2)
    noisy = salt_noise(img, 0.05, seed=3)
    assert ms_ssim(img, noisy) == ms_ssim(noisy, img)


def test_monotone_degradation_with_noise():
    img = synthetic_image(128, seed=4)
    s1 = ms_ssim(img, salt_noise(img, 0.01, seed=5))
    s2 = ms_ssim(img, salt_noise(img, 0.10, seed=5))
    assert 1.0 > s1 > s2 > 0.0


def test_dimension_mismatch_rejected():
    img = synthetic_image(64, seed=6)
    with pytest.raises(ValueError):
        ms_ssim(img, img[:32, :])
    with pytest.raises(ValueError):
        ms_ssim(img[:8, :8], img[:8, :8])


def test_scale_fallback_for_small_images():
    assert n_scales((256, 256)) == 5
    assert n_scales((64, 64)) == 3
    assert n_scales((16, 16)) == 1
    img = synthetic_image(16, seed=7)
    assert ms_ssim(img, img) == pytest.approx(1.0, abs=1e-9)


def test_gop_quality_mean_over_frames():
    frames = synthetic_gop(32, n_pframes=3, seed=8)
    assert gop_quality(frames, frames) == pytest.approx(1.0, abs=1e-9)
    damaged = [salt_noise(f, 0.05, seed=9) for f in frames]
    per_frame = [ms_ssim(a, b) for a, b in zip(frames, damaged)]
    assert gop_quality(frames, damaged) == pytest.approx(float(np.mean(per_frame)))
    with pytest.raises(ValueError):
        gop_quality(frames, frames[:-1])
