"""Dataset assembly from the labeler's JSONL output plus a WAV directory.

Each manifest line is one label record (``id`` and binary ``label`` are all we
consume here); the waveform for id X is ``<audio_dir>/X.wav``, a mono 16 kHz
1.5 s file as written by the labeling pipeline.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np
import torch
from scipy.io import wavfile

from .features import CLIP_SAMPLES, SAMPLE_RATE, stft_frontend


@dataclass
class LabeledSet:
    features: torch.Tensor  # (N, 149, 257) float32
    labels: torch.Tensor    # (N,) float32 in {0, 1}
    ids: list[str]

    def __len__(self) -> int:
        return len(self.ids)

    def subset(self, indices) -> "LabeledSet":
        idx = list(indices)
        return LabeledSet(
            features=self.features[idx],
            labels=self.labels[idx],
            ids=[self.ids[i] for i in idx],
        )

    def class_counts(self) -> tuple[int, int]:
        pos = int(self.labels.sum().item())
        return len(self.ids) - pos, pos


def read_label_manifest(path: str | Path) -> list[tuple[str, int]]:
    pairs = []
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
                label = int(d["label"])
                if label not in (0, 1):
                    raise ValueError(f"label must be 0 or 1, got {label}")
                pairs.append((str(d["id"]), label))
            except (json.JSONDecodeError, KeyError, ValueError) as exc:
                raise ValueError(f"{path}:{lineno}: bad label record: {exc}") from exc
    if not pairs:
        raise ValueError(f"{path}: empty label manifest")
    return pairs


def load_waveform(path: str | Path) -> np.ndarray:
    rate, data = wavfile.read(str(path))
    if rate != SAMPLE_RATE:
        raise ValueError(f"{path}: expected {SAMPLE_RATE} Hz, got {rate}")
    if data.ndim != 1:
        raise ValueError(f"{path}: expected mono audio")
    x = data.astype(np.float32)
    if data.dtype == np.int16:
        x /= 32768.0
    if x.shape[0] != CLIP_SAMPLES:
        raise ValueError(f"{path}: expected {CLIP_SAMPLES} samples, got {x.shape[0]}")
    return x


def load_labeled_set(manifest: str | Path, audio_dir: str | Path) -> LabeledSet:
    audio_dir = Path(audio_dir)
    pairs = read_label_manifest(manifest)
    waves = np.stack([load_waveform(audio_dir / f"{cid}.wav") for cid, _ in pairs])
    features = stft_frontend(waves)
    labels = torch.tensor([lab for _, lab in pairs], dtype=torch.float32)
    return LabeledSet(features=features, labels=labels, ids=[cid for cid, _ in pairs])


def split_train_eval(data: LabeledSet, eval_fraction: float, seed: int) -> tuple[LabeledSet, LabeledSet]:
    """Deterministic shuffled split."""
    n = len(data)
    n_eval = max(1, int(round(eval_fraction * n)))
    order = np.random.default_rng(seed).permutation(n)
    return data.subset(order[n_eval:]), data.subset(order[:n_eval])
