"""Wall-clock accounting for the index computation.

The point of the whole artifact is that this number is large: a full
surrogate-calibrated multi-scale test per 1.5 s clip costs orders of magnitude
more than one classifier forward pass, and the report here is the reference
side of that comparison.
"""

from __future__ import annotations

import json
import platform
import time
from dataclasses import dataclass, replace

import numpy as np

from .hlc import HlcConfig, hlc_label
from .ingest import CLIP_SECONDS, SynthSpec, synth_signal
from .ins import InsConfig, InsCurve, InsPoint, ins_at_scale
from .surrogate import generate_surrogates

_BENCH_KINDS = ("white_noise", "am_noise", "impulse_train")


@dataclass
class StageStats:
    mean_ms: float
    std_ms: float

    @staticmethod
    def of(samples_ms: list[float]) -> "StageStats":
        arr = np.asarray(samples_ms, dtype=np.float64)
        return StageStats(mean_ms=float(arr.mean()), std_ms=float(arr.std(ddof=1) if arr.size > 1 else 0.0))


@dataclass
class BenchReport:
    ins_total: StageStats                 # full index sweep + hard label per clip
    surrogate_gen: StageStats
    per_scale: dict[float, StageStats]
    n_clips: int
    machine: str
    config_fingerprint: str

    def to_json(self) -> str:
        return json.dumps(
            {
                "ins_total_ms": {"mean": self.ins_total.mean_ms, "std": self.ins_total.std_ms},
                "surrogate_gen_ms": {
                    "mean": self.surrogate_gen.mean_ms,
                    "std": self.surrogate_gen.std_ms,
                },
                "per_scale_ms": {
                    str(s): {"mean": st.mean_ms, "std": st.std_ms}
                    for s, st in self.per_scale.items()
                },
                "n_clips": self.n_clips,
                "machine": self.machine,
                "config_fingerprint": self.config_fingerprint,
            }
        )

    def summary(self) -> str:
        lines = [
            f"clips: {self.n_clips} x {CLIP_SECONDS}s   machine: {self.machine}",
            f"ins_total      {self.ins_total.mean_ms:10.1f} +- {self.ins_total.std_ms:.1f} ms",
            f"surrogate_gen  {self.surrogate_gen.mean_ms:10.1f} +- {self.surrogate_gen.std_ms:.1f} ms",
        ]
        for s, st in self.per_scale.items():
            lines.append(f"  scale {s:<6} {st.mean_ms:10.1f} +- {st.std_ms:.1f} ms")
        return "\n".join(lines)


def run_bench(
    n_clips: int,
    seed: int,
    scales,
    ins_cfg: InsConfig = InsConfig(),
    hlc_cfg: HlcConfig = HlcConfig(),
) -> BenchReport:
    """Time the full per-clip pipeline (surrogates, every scale, hard label)."""
    if n_clips < 3:
        raise ValueError("need at least 3 clips for meaningful stats")
    scales = tuple(scales)
    # the hard label only applies when the sweep covers the partition exactly
    label_applies = sorted(scales) == hlc_cfg.partition.all_scales()
    total_ms: list[float] = []
    surr_ms: list[float] = []
    scale_ms: dict[float, list[float]] = {s: [] for s in scales}

    for i in range(n_clips):
        kind = _BENCH_KINDS[i % len(_BENCH_KINDS)]
        clip = synth_signal(SynthSpec(kind, seed=seed + i), CLIP_SECONDS)
        cfg = replace(ins_cfg, seed=seed + 1000 + i)

        t0 = time.perf_counter()
        ts = time.perf_counter()
        surrogates = generate_surrogates(clip, cfg.j_surrogates, cfg.seed)
        surr_ms.append((time.perf_counter() - ts) * 1000.0)

        points: list[InsPoint] = []
        for s in scales:
            tp = time.perf_counter()
            points.append(ins_at_scale(clip, surrogates, s, cfg))
            scale_ms[s].append((time.perf_counter() - tp) * 1000.0)

        if label_applies:
            curve = InsCurve(points=points, clip_id=clip.source_id, config_fingerprint=cfg.fingerprint())
            hlc_label(curve, hlc_cfg)
        total_ms.append((time.perf_counter() - t0) * 1000.0)

    return BenchReport(
        ins_total=StageStats.of(total_ms),
        surrogate_gen=StageStats.of(surr_ms),
        per_scale={s: StageStats.of(v) for s, v in scale_ms.items()},
        n_clips=n_clips,
        machine=f"{platform.machine()} {platform.system()} python{platform.python_version()}",
        config_fingerprint=ins_cfg.fingerprint(),
    )
