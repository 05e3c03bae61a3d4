"""Spectrogram frontend for the classifier.

20 ms frames (320 samples at 16 kHz) with 50% overlap, zero-padded to a
512-point transform; magnitudes are log1p-compressed.  A 1.5 s clip becomes
exactly 149 frames of 257 bins.
"""

from __future__ import annotations

import numpy as np
import torch

SAMPLE_RATE = 16000
FRAME_LEN = 320
HOP = 160
FFT_SIZE = 512
N_BINS = FFT_SIZE // 2 + 1
CLIP_SAMPLES = 24000
N_FRAMES = (CLIP_SAMPLES - FRAME_LEN) // HOP + 1  # 149


def stft_frontend(clips: torch.Tensor | np.ndarray, log_compress: bool = True) -> torch.Tensor:
    """(B, 24000) waveforms -> (B, 149, 257) spectrogram features.

    Rectangular 320-sample frames zero-padded to 512 points; magnitude, then
    log(1+x) unless ``log_compress`` is off.
    """
    x = torch.as_tensor(clips, dtype=torch.float32)
    if x.ndim == 1:
        x = x[None, :]
    if x.ndim != 2 or x.shape[1] != CLIP_SAMPLES:
        raise ValueError(f"expected (B, {CLIP_SAMPLES}) waveforms, got {tuple(x.shape)}")
    frames = x.unfold(1, FRAME_LEN, HOP)  # (B, 149, 320)
    spectra = torch.fft.rfft(frames, n=FFT_SIZE, dim=-1)
    mag = spectra.abs()
    return torch.log1p(mag) if log_compress else mag
