import numpy as np
import pytest
import torch

from nonstat_clf import N_BINS, N_FRAMES, stft_frontend
from nonstat_clf.features import FFT_SIZE, SAMPLE_RATE


def test_shape_is_149_by_257():
    x = torch.randn(3, 24000)
    feats = stft_frontend(x)
    assert feats.shape == (3, 149, 257)
    assert N_FRAMES == 149 and N_BINS == 257


def test_zero_clip_gives_zero_features():
    feats = stft_frontend(torch.zeros(1, 24000))
    assert torch.all(feats == 0.0)  # log1p(0) = 0


def test_tone_peaks_at_bin_32_every_frame():
    t = np.arange(24000) / SAMPLE_RATE
    tone = 0.5 * np.sin(2 * np.pi * 1000.0 * t)
    feats = stft_frontend(tone[None, :])
    expected_bin = round(1000.0 * FFT_SIZE / SAMPLE_RATE)
    assert expected_bin == 32
    assert torch.all(feats[0].argmax(dim=-1) == expected_bin)


def test_wrong_length_rejected():
    with pytest.raises(ValueError):
        stft_frontend(torch.zeros(1, 16000))


def test_log_compression_switchable():
    x = torch.randn(1, 24000)
    raw = stft_frontend(x, log_compress=False)
    compressed = stft_frontend(x, log_compress=True)
    torch.testing.assert_close(compressed, torch.log1p(raw))
    assert torch.all(raw >= 0.0)


def test_1d_input_promoted_to_batch():
    feats = stft_frontend(np.zeros(24000, dtype=np.float32))
    assert feats.shape == (1, 149, 257)
