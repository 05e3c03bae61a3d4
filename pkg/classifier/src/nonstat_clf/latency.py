"""Single-clip inference latency and the speedup ratio over the statistical test."""

from __future__ import annotations

import json
import statistics
import time
from dataclasses import dataclass

import torch

from .features import stft_frontend
from .model import StationarityNet


@dataclass
class LatencyReport:
    mean_ms: float
    std_ms: float
    n_clips: int
    ins_total_ms: float | None   # reference cost of the statistical test per clip
    speedup: float | None        # ins_total_ms / mean_ms

    def to_json(self) -> str:
        return json.dumps(
            {
                "per_clip_ms": {"mean": self.mean_ms, "std": self.std_ms},
                "n_clips": self.n_clips,
                "ins_total_ms": self.ins_total_ms,
                "speedup": self.speedup,
            }
        )


@torch.inference_mode()
def infer_bench(
    model: StationarityNet,
    n_clips: int,
    ins_total_ms: float | None = None,
    seed: int = 0,
    warmup: int = 5,
) -> LatencyReport:
    """Time ``n_clips`` single-clip forward passes (STFT included)."""
    if n_clips < 10:
        raise ValueError("need >= 10 clips for a latency estimate")
    model.eval()
    rng = torch.Generator().manual_seed(seed)
    waves = torch.rand((n_clips + warmup, 24000), generator=rng) * 0.4 - 0.2

    times_ms = []
    for i in range(n_clips + warmup):
        t0 = time.perf_counter()
        model(stft_frontend(waves[i : i + 1]))
        elapsed = (time.perf_counter() - t0) * 1000.0
        if i >= warmup:
            times_ms.append(elapsed)

    mean = statistics.mean(times_ms)
    std = statistics.stdev(times_ms) if len(times_ms) > 1 else 0.0
    speedup = (ins_total_ms / mean) if ins_total_ms else None
    return LatencyReport(
        mean_ms=mean, std_ms=std, n_clips=n_clips, ins_total_ms=ins_total_ms, speedup=speedup
    )


def read_ins_bench_report(path: str) -> float:
    """Pull the per-clip cost out of the labeling pipeline's bench JSON."""
    with open(path, encoding="utf-8") as fh:
        doc = json.load(fh)
    return float(doc["ins_total_ms"]["mean"])
