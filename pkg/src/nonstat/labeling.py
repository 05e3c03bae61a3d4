"""Batch labeling: manifests in, per-clip label records out.

Per-clip seeds are derived from (base seed, clip id) with a stable hash, so a
record's content depends only on the manifest row and the configuration —
never on worker scheduling or job count.
"""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from pathlib import Path

from .errors import NonstatError, PreconditionError
from .hlc import HlcConfig, HlcResult, hlc_label
from .ingest import AudioClip, load_audio
from .ins import InsConfig, InsCurve, ins_curve


@dataclass
class ManifestRecord:
    id: str
    path: str
    start_sec: float = 0.0


@dataclass
class LabelRecord:
    id: str
    label: int
    region_flags: list[int]
    ins_points: list[tuple[float, float, float]]  # (scale, ins, gamma)
    elapsed_ms: float
    config_fingerprint: str
    seed: int

    def to_json(self) -> str:
        return json.dumps(
            {
                "id": self.id,
                "label": self.label,
                "region_flags": self.region_flags,
                "ins_points": [list(p) for p in self.ins_points],
                "elapsed_ms": self.elapsed_ms,
                "config_fingerprint": self.config_fingerprint,
                "seed": self.seed,
            }
        )

    @classmethod
    def from_json(cls, line: str) -> "LabelRecord":
        d = json.loads(line)
        return cls(
            id=d["id"],
            label=int(d["label"]),
            region_flags=[int(f) for f in d["region_flags"]],
            ins_points=[tuple(p) for p in d["ins_points"]],
            elapsed_ms=float(d["elapsed_ms"]),
            config_fingerprint=d["config_fingerprint"],
            seed=int(d["seed"]),
        )


def clip_seed(base_seed: int, clip_id: str) -> int:
    """Stable 63-bit per-clip seed; independent of worker scheduling."""
    digest = hashlib.sha256(f"{base_seed}|{clip_id}".encode()).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def read_manifest(path: str | Path) -> list[ManifestRecord]:
    records = []
    seen = set()
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, 1):
            line = line.strip()
            if not line:
                continue
            try:
                d = json.loads(line)
                rec = ManifestRecord(
                    id=str(d["id"]), path=str(d["path"]), start_sec=float(d.get("start_sec", 0.0))
                )
            except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
                raise NonstatError(f"{path}:{lineno}: bad manifest record: {exc}") from exc
            if rec.id in seen:
                raise NonstatError(f"{path}:{lineno}: duplicate id {rec.id!r}")
            seen.add(rec.id)
            records.append(rec)
    return records


def extract_clip(path: str, start_sec: float, clip_samples: int) -> AudioClip:
    audio = load_audio(path)
    start = int(round(start_sec * audio.sample_rate))
    if start < 0 or start + clip_samples > audio.n_samples:
        raise PreconditionError(
            f"{path}: clip of {clip_samples} samples at {start_sec}s exceeds "
            f"file length ({audio.n_samples} samples)"
        )
    return AudioClip(
        samples=audio.samples[start : start + clip_samples].copy(),
        sample_rate=audio.sample_rate,
        source_id=f"{path}@{start_sec}",
        offset_sec=start_sec,
    )


def label_clip(
    clip: AudioClip,
    scales,
    ins_cfg: InsConfig,
    hlc_cfg: HlcConfig,
) -> tuple[HlcResult, InsCurve, float]:
    """Full index curve + hard label for one clip; returns wall time in ms."""
    t0 = time.perf_counter()
    curve = ins_curve(clip, scales, ins_cfg)
    result = hlc_label(curve, hlc_cfg)
    elapsed_ms = (time.perf_counter() - t0) * 1000.0
    return result, curve, elapsed_ms


def _record_for(
    rec: ManifestRecord,
    base_seed: int,
    scales: tuple[float, ...],
    ins_cfg: InsConfig,
    hlc_cfg: HlcConfig,
    clip_samples: int,
) -> LabelRecord:
    seed = clip_seed(base_seed, rec.id)
    cfg = replace(ins_cfg, seed=seed)
    clip = extract_clip(rec.path, rec.start_sec, clip_samples)
    result, curve, elapsed_ms = label_clip(clip, scales, cfg, hlc_cfg)
    return LabelRecord(
        id=rec.id,
        label=result.label,
        region_flags=result.region_flags,
        ins_points=[(p.scale, p.ins, p.gamma) for p in curve.points],
        elapsed_ms=elapsed_ms,
        config_fingerprint=curve.config_fingerprint,
        seed=seed,
    )


def _worker(args) -> tuple[str, LabelRecord | None, str | None]:
    rec, base_seed, scales, ins_cfg, hlc_cfg, clip_samples = args
    try:
        return rec.id, _record_for(rec, base_seed, scales, ins_cfg, hlc_cfg, clip_samples), None
    except Exception as exc:  # isolate per-clip crashes; the batch must survive
        return rec.id, None, f"{type(exc).__name__}: {exc}"


def batch_label(
    records: list[ManifestRecord],
    base_seed: int,
    scales: tuple[float, ...],
    ins_cfg: InsConfig,
    hlc_cfg: HlcConfig,
    clip_samples: int,
    jobs: int = 1,
) -> tuple[list[LabelRecord], list[tuple[str, str]]]:
    """Label every manifest row; returns (records in manifest order, failures).

    Failures are (id, reason) pairs; one bad file never aborts the batch.
    """
    tasks = [(r, base_seed, scales, ins_cfg, hlc_cfg, clip_samples) for r in records]
    if jobs <= 1:
        raw = [_worker(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            raw = list(pool.map(_worker, tasks, chunksize=1))

    out: list[LabelRecord] = []
    failures: list[tuple[str, str]] = []
    for rec_id, record, err in raw:
        if record is not None:
            out.append(record)
        else:
            failures.append((rec_id, err or "unknown error"))
    return out, failures


def write_records(records: list[LabelRecord], path: str | Path, sort: bool = False) -> None:
    if sort:
        records = sorted(records, key=lambda r: r.id)
    with open(path, "w", encoding="utf-8") as fh:
        for rec in records:
            fh.write(rec.to_json() + "\n")
