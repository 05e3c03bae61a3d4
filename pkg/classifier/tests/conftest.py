"""Shared fixtures.

The labeled corpus is produced by the labeling pipeline's own CLI (`nonstat
batch`) over synthetic WAVs written here — the classifier only ever sees the
pipeline's public JSONL/WAV surfaces.
"""

import json
import subprocess
import sys
from pathlib import Path

import numpy as np
import pytest
from scipy.io import wavfile

RATE = 16000
CLIP = 24000


def _noise(rng, rms=0.2):
    return rng.standard_normal(CLIP) * rms


def make_wave(kind: str, rng) -> np.ndarray:
    """Small synthetic generator family; class balance comes from the labeler."""
    t = np.arange(CLIP) / RATE
    if kind == "white":
        return _noise(rng)
    if kind == "ar1":
        e = rng.standard_normal(CLIP + 500) * 0.08
        x = np.empty_like(e)
        x[0] = 0.0
        for i in range(1, e.shape[0]):
            x[i] = 0.9 * x[i - 1] + e[i]
        return x[500:]
    if kind == "rumble":
        spec = np.fft.rfft(rng.standard_normal(CLIP))
        freqs = np.fft.rfftfreq(CLIP, 1 / RATE)
        spec[freqs > 200] = 0.0
        x = np.fft.irfft(spec, CLIP)
        return 0.2 * x / max(x.std(), 1e-9)
    if kind == "bursts":
        period = rng.uniform(0.2, 0.3)
        env = np.exp(-np.mod(t, period) / 0.012)
        return env * _noise(rng, 0.5)
    if kind == "pulse":
        f = rng.uniform(0.8, 1.2)
        env = (1.0 + np.sin(2 * np.pi * f * t)) / 2.0
        return env * _noise(rng)
    if kind == "tonestep":
        f = rng.uniform(400, 2500)
        amp = np.where(t < 0.75, 0.0, 0.7)
        return amp * np.sin(2 * np.pi * f * t)
    raise ValueError(kind)


KINDS = ("white", "ar1", "rumble", "bursts", "pulse", "tonestep")


def build_corpus(root: Path, n_clips: int, seed: int, surrogates: int = 16) -> tuple[Path, Path]:
    """Write WAVs, label them with the pipeline CLI, return (labels, audio_dir)."""
    audio_dir = root / "audio"
    audio_dir.mkdir(parents=True)
    rng = np.random.default_rng(seed)
    manifest = root / "manifest.jsonl"
    with open(manifest, "w") as fh:
        for i in range(n_clips):
            kind = KINDS[i % len(KINDS)]
            wave = make_wave(kind, rng).astype(np.float32)
            np.clip(wave, -1.0, 1.0, out=wave)
            cid = f"{kind}{i:04d}"
            wavfile.write(str(audio_dir / f"{cid}.wav"), RATE, wave)
            fh.write(json.dumps({"id": cid, "path": str(audio_dir / f"{cid}.wav")}) + "\n")

    labels = root / "labels.jsonl"
    subprocess.run(
        [
            sys.executable, "-m", "nonstat", "batch",
            "--manifest", str(manifest),
            "--out", str(labels),
            "--surrogates", str(surrogates),
            "--jobs", "2",
            "--seed", "7",
        ],
        check=True,
        capture_output=True,
        text=True,
    )
    return labels, audio_dir


@pytest.fixture(scope="session")
def corpus(tmp_path_factory):
    """500 labeled clips; built once per session (~2 min)."""
    root = tmp_path_factory.mktemp("corpus")
    return build_corpus(root, n_clips=500, seed=11)
