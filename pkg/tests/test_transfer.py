"""Selective-retransmission transfer semantics."""

import numpy as np
import pytest

from uepsim import approxtx, fec, uep
from uepsim.channel import ChannelConfig
from uepsim.rng import substream


@pytest.fixture(scope="module")
def small_code():
    return fec.construct_polar_code(64, 32, 2.0, crc_len=0)


@pytest.fixture(scope="module")
def small_profile(small_code):
    cfg = ChannelConfig(2.0, 0.5, rng_seed=70)
    return uep.characterize(small_code, cfg, 400)


def make_page(seed, n_codewords=6, ratio=(8, 24)):
    return approxtx.make_webpage(ratio, n_codewords=n_codewords, rng=substream(seed, 0))


def test_noiseless_transfer_is_exact(small_code, small_profile):
    page = make_page(1)
    mapping = approxtx.build_webpage_mapping(small_profile, (8, 24), 0)
    stats = approxtx.simulate_transfer(page, mapping, small_code, ChannelConfig(40.0, 0.5), 5)
    assert stats.retransmissions == 0
    assert stats.loss_fraction == 0.0
    assert np.array_equal(stats.received_payload.text_bits, page.text_bits)
    assert np.array_equal(stats.received_payload.pixels, page.pixels)


def test_full_protection_is_exact_under_noise(small_code, small_profile):
    page = make_page(2)
    mapping = approxtx.build_webpage_mapping(small_profile, (8, 24), 0).fully_protected()
    cfg = ChannelConfig(1.0, 0.5)
    stats = approxtx.simulate_transfer(page, mapping, small_code, cfg, 6)
    assert np.array_equal(stats.received_payload.text_bits, page.text_bits)
    assert np.array_equal(stats.received_payload.pixels, page.pixels)
    assert stats.retransmissions > 0  # 1 dB is noisy enough to force retries


def test_text_is_always_exact_even_unprotected_pixels_may_err(small_code, small_profile):
    cfg = ChannelConfig(1.5, 0.5)
    pixel_errors = 0
    for seed in range(8):
        page = make_page(100 + seed, n_codewords=10)
        mapping = approxtx.build_webpage_mapping(small_profile, (8, 24), 0)
        stats = approxtx.simulate_transfer(page, mapping, small_code, cfg, 200 + seed)
        assert np.array_equal(stats.received_payload.text_bits, page.text_bits)
        pixel_errors += int((stats.received_payload.pixels != page.pixels).sum())
    assert pixel_errors > 0  # unprotected damage is kept, not retransmitted away


def test_paired_retransmissions_monotone_in_protection(small_code, small_profile):
    cfg = ChannelConfig(1.5, 0.5)
    for seed in range(5):
        page = make_page(300 + seed, n_codewords=10)
        retx = {}
        for k in (0, 4, 8):
            mapping = approxtx.build_webpage_mapping(small_profile, (8, 24), k)
            stats = approxtx.simulate_transfer(page, mapping, small_code, cfg, 400 + seed)
            retx[k] = stats.retransmissions
        base = approxtx.simulate_transfer(
            page,
            approxtx.build_webpage_mapping(small_profile, (8, 24), 0).fully_protected(),
            small_code,
            cfg,
            400 + seed,
        )
        assert retx[0] <= retx[4] <= retx[8] <= base.retransmissions


def test_gop_transfer_protects_iframe(small_code, small_profile):
    from uepsim.synthassets import synthetic_gop

    frames = synthetic_gop(8, n_pframes=1, seed=9)
    payload = approxtx.GopPayload.from_frames(frames)
    mapping = approxtx.build_video_mapping(small_profile, 0, n_pframes=1)
    cfg = ChannelConfig(1.5, 0.5)
    stats = approxtx.simulate_transfer(payload, mapping, small_code, cfg, 11)
    received = stats.received_payload
    assert np.array_equal(received.i_frame, payload.i_frame)
    rebuilt = received.reconstruct_frames()
    assert rebuilt[0].shape == frames[0].shape


def test_quality_one_at_full_protection_and_degraded_at_k0(small_code, small_profile):
    from uepsim.approxtx import ms_ssim
    from uepsim.synthassets import synthetic_image

    img = synthetic_image(16, seed=12)
    cfg = ChannelConfig(1.25, 0.5)
    scores = {}
    for k, label in ((8, "full"), (0, "none")):
        mapping = approxtx.build_webpage_mapping(small_profile, (8, 24), k)
        vals = []
        for seed in range(12):
            page = approxtx.make_webpage((8, 24), rng=substream(500 + seed, 0), image=img)
            stats = approxtx.simulate_transfer(page, mapping, small_code, cfg, 600 + seed)
            vals.append(ms_ssim(img, stats.received_payload.image()))
        scores[label] = float(np.mean(vals))
    assert scores["full"] == pytest.approx(1.0, abs=1e-9)  # k=8 protects every bit
    assert scores["none"] <= scores["full"]
    assert scores["none"] < 1.0  # some unprotected damage survived at 1.25 dB


def test_mapping_code_mismatch_rejected(small_profile):
    other = fec.construct_polar_code(128, 64, crc_len=0)
    page = make_page(3)
    mapping = approxtx.build_webpage_mapping(small_profile, (8, 24), 0)
    with pytest.raises(ValueError):
        approxtx.simulate_transfer(page, mapping, other, ChannelConfig(2.0, 0.5), 4)


def test_stats_validation():
    with pytest.raises(ValueError):
        approxtx.TransferStats(0, 0, None)
    with pytest.raises(ValueError):
        approxtx.TransferStats(5, -1, None)
