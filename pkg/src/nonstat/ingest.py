"""Audio ingestion: WAV loading, resampling, segmentation, and synthetic test signals.

Everything downstream operates on mono 16 kHz clips; this module is the only
place sample rates other than 16 kHz ever appear.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path

import numpy as np
from scipy import signal as sp_signal
from scipy.io import wavfile

from .errors import AudioReadError, EmptyAudioError, PreconditionError, UnsupportedAudioError

TARGET_RATE = 16000
CLIP_SECONDS = 1.5
CLIP_SAMPLES = int(round(CLIP_SECONDS * TARGET_RATE))  # 24000

# Kaiser beta for the polyphase anti-alias filter; 8.6 gives ~90 dB stopband
# attenuation, comfortably below 16-bit quantization noise.
RESAMPLE_KAISER_BETA = 8.6


@dataclass
class AudioClip:
    """Mono PCM signal. After ingestion the rate is always 16 kHz."""

    samples: np.ndarray        # float64, amplitudes in [-1, 1]
    sample_rate: int = TARGET_RATE
    source_id: str = ""
    offset_sec: float = 0.0

    @property
    def n_samples(self) -> int:
        return int(self.samples.shape[0])

    @property
    def duration_sec(self) -> float:
        return self.n_samples / self.sample_rate


SYNTH_KINDS = (
    "white_noise",
    "ar1_noise",
    "lowpass_rumble",
    "impulse_train",
    "am_noise",
    "tone_step",
    "chirp",
)

# Per-kind parameter names, defaults, and admissible ranges (inclusive unless
# noted).  Anything outside these ranges is rejected by synth_signal.
_PARAM_SPECS: dict[str, dict[str, tuple[float, float, float]]] = {
    # name: (default, lo, hi)
    "white_noise": {"rms": (0.2, 1e-4, 0.5)},
    "ar1_noise": {"ar_coeff": (0.9, -0.998, 0.998), "rms": (0.2, 1e-4, 0.5)},
    "lowpass_rumble": {"cutoff_hz": (150.0, 30.0, 2000.0), "rms": (0.2, 1e-4, 0.5)},
    "impulse_train": {
        "period_sec": (0.25, 0.02, 1.0),
        "decay_sec": (0.02, 1e-3, 0.5),
        "amp": (0.5, 1e-3, 1.0),
    },
    "am_noise": {
        "mod_freq_hz": (4.0, 0.5, 50.0),
        "depth": (1.0, 0.05, 1.0),
        "rms": (0.2, 1e-4, 0.5),
    },
    "tone_step": {
        "freq_hz": (1000.0, 20.0, 7900.0),
        "amp_before": (0.0, 0.0, 1.0),
        "amp_after": (0.8, 1e-3, 1.0),
        "step_frac": (0.5, 0.05, 0.95),
    },
    "chirp": {
        "f0_hz": (200.0, 20.0, 7900.0),
        "f1_hz": (6000.0, 20.0, 7900.0),
        "amp": (0.5, 1e-3, 1.0),
    },
}


@dataclass
class SynthSpec:
    """Deterministic recipe for a synthetic test signal.

    ``params`` may override the documented per-kind defaults; unknown keys or
    out-of-range values are rejected.  Equal specs produce bit-equal signals.
    """

    kind: str
    params: dict = field(default_factory=dict)
    seed: int = 0

    def resolved_params(self) -> dict[str, float]:
        if self.kind not in _PARAM_SPECS:
            raise PreconditionError(f"unknown synth kind {self.kind!r}")
        spec = _PARAM_SPECS[self.kind]
        unknown = set(self.params) - set(spec)
        if unknown:
            raise PreconditionError(
                f"unknown parameter(s) {sorted(unknown)} for kind {self.kind!r}"
            )
        out = {}
        for name, (default, lo, hi) in spec.items():
            value = float(self.params.get(name, default))
            if not np.isfinite(value) or value < lo or value > hi:
                raise PreconditionError(
                    f"{self.kind}.{name}={value} outside admissible range [{lo}, {hi}]"
                )
            out[name] = value
        return out


def load_audio(path: str | Path) -> AudioClip:
    """Load a RIFF/WAVE file as a mono 16 kHz clip.

    Accepts PCM 16/24/32-bit integer or 32/64-bit float, 1-2 channels, any
    sample rate.  Stereo is collapsed by channel mean; other rates are
    resampled with a Kaiser-windowed polyphase sinc filter
    (beta=RESAMPLE_KAISER_BETA).  Amplitudes are clipped to [-1, 1] after
    resampling (the filter may overshoot by a fraction of a percent).
    """
    path = Path(path)
    try:
        rate, data = wavfile.read(str(path))
    except FileNotFoundError as exc:
        raise AudioReadError(f"cannot read {path}: file not found") from exc
    except PermissionError as exc:
        raise AudioReadError(f"cannot read {path}: permission denied") from exc
    except ValueError as exc:
        # scipy raises ValueError both for non-WAV garbage and for WAV
        # variants it does not decode; tell the two apart by message.
        msg = str(exc).lower()
        if "unknown wave file format" in msg:
            raise UnsupportedAudioError(f"{path}: {exc}") from exc
        raise AudioReadError(f"cannot parse {path}: {exc}") from exc
    except struct.error as exc:
        raise AudioReadError(f"cannot parse {path}: truncated or corrupt file") from exc
    except OSError as exc:
        raise AudioReadError(f"cannot read {path}: {exc}") from exc

    if data.size == 0:
        raise EmptyAudioError(f"{path}: zero-length audio")
    if data.ndim == 2 and data.shape[1] > 2:
        raise UnsupportedAudioError(f"{path}: {data.shape[1]} channels (only 1-2 supported)")
    if data.ndim > 2:
        raise UnsupportedAudioError(f"{path}: unexpected sample layout {data.shape}")

    x = data.astype(np.float64)
    if x.ndim == 2:
        x = x.mean(axis=1)

    if data.dtype == np.int16:
        x /= 32768.0
    elif data.dtype == np.int32:
        # scipy returns 24-bit PCM left-justified in int32, so one scale
        # covers both 24- and 32-bit files.
        x /= 2147483648.0
    elif data.dtype in (np.float32, np.float64):
        pass
    elif data.dtype == np.uint8:
        raise UnsupportedAudioError(f"{path}: 8-bit PCM not supported")
    else:
        raise UnsupportedAudioError(f"{path}: sample dtype {data.dtype} not supported")

    x = _resample_to_target(x, int(rate))
    np.clip(x, -1.0, 1.0, out=x)
    return AudioClip(samples=x, sample_rate=TARGET_RATE, source_id=str(path), offset_sec=0.0)


def _resample_to_target(x: np.ndarray, rate: int) -> np.ndarray:
    if rate <= 0:
        raise UnsupportedAudioError(f"nonsensical sample rate {rate}")
    if rate == TARGET_RATE:
        return np.ascontiguousarray(x, dtype=np.float64)
    g = gcd(TARGET_RATE, rate)
    up, down = TARGET_RATE // g, rate // g
    return sp_signal.resample_poly(x, up, down, window=("kaiser", RESAMPLE_KAISER_BETA))


def segment_clips(clip: AudioClip, clip_len_sec: float = CLIP_SECONDS) -> list[AudioClip]:
    """Cut a clip into consecutive non-overlapping analysis windows.

    The trailing remainder shorter than one window is dropped; a clip shorter
    than one window yields an empty list.
    """
    if clip_len_sec <= 0:
        raise PreconditionError(f"clip_len_sec must be positive, got {clip_len_sec}")
    win = int(round(clip_len_sec * clip.sample_rate))
    n = clip.n_samples // win
    out = []
    for i in range(n):
        seg = clip.samples[i * win : (i + 1) * win]
        out.append(
            AudioClip(
                samples=np.array(seg, dtype=np.float64),
                sample_rate=clip.sample_rate,
                source_id=clip.source_id,
                offset_sec=clip.offset_sec + i * win / clip.sample_rate,
            )
        )
    return out


def synth_signal(spec: SynthSpec, duration_sec: float) -> AudioClip:
    """Generate a synthetic test signal; output is fully determined by ``spec``.

    Kinds and their structure:

    * ``white_noise``    flat-spectrum Gaussian noise.
    * ``ar1_noise``      first-order autoregressive noise (stationary; burn-in
                         discarded).
    * ``lowpass_rumble`` Butterworth-lowpassed noise, energy below cutoff_hz.
    * ``impulse_train``  periodic damped noise bursts (onset every period_sec,
                         envelope exp(-t/decay_sec)).
    * ``am_noise``       noise with a raised sinusoidal amplitude envelope
                         (1 + depth*sin(2*pi*f*t)) / (1 + depth).
    * ``tone_step``      sinusoid whose amplitude steps from amp_before to
                         amp_after at step_frac of the clip.
    * ``chirp``          linear frequency sweep f0_hz -> f1_hz.
    """
    if duration_sec <= 0:
        raise PreconditionError(f"duration_sec must be positive, got {duration_sec}")
    params = spec.resolved_params()
    n = int(round(duration_sec * TARGET_RATE))
    t = np.arange(n, dtype=np.float64) / TARGET_RATE
    rng = np.random.default_rng(np.random.SeedSequence(spec.seed))

    if spec.kind == "white_noise":
        x = rng.standard_normal(n) * params["rms"]

    elif spec.kind == "ar1_noise":
        a = params["ar_coeff"]
        burn = 1000
        e = rng.standard_normal(n + burn) * params["rms"] * np.sqrt(1.0 - a * a)
        x = sp_signal.lfilter([1.0], [1.0, -a], e)[burn:]

    elif spec.kind == "lowpass_rumble":
        burn = 8000
        e = rng.standard_normal(n + burn)
        sos = sp_signal.butter(4, params["cutoff_hz"], btype="low", fs=TARGET_RATE, output="sos")
        y = sp_signal.sosfilt(sos, e)[burn:]
        x = y * (params["rms"] / max(np.std(y), 1e-12))

    elif spec.kind == "impulse_train":
        period = params["period_sec"]
        phase = np.mod(t, period)
        env = np.exp(-phase / params["decay_sec"])
        x = env * rng.standard_normal(n) * params["amp"]

    elif spec.kind == "am_noise":
        depth = params["depth"]
        env = (1.0 + depth * np.sin(2.0 * np.pi * params["mod_freq_hz"] * t)) / (1.0 + depth)
        x = rng.standard_normal(n) * params["rms"] * env

    elif spec.kind == "tone_step":
        amp = np.where(t < params["step_frac"] * duration_sec, params["amp_before"], params["amp_after"])
        x = amp * np.sin(2.0 * np.pi * params["freq_hz"] * t)

    elif spec.kind == "chirp":
        f0, f1 = params["f0_hz"], params["f1_hz"]
        phase = 2.0 * np.pi * (f0 * t + 0.5 * (f1 - f0) / duration_sec * t * t)
        x = params["amp"] * np.sin(phase)

    else:  # unreachable after resolved_params()
        raise PreconditionError(f"unknown synth kind {spec.kind!r}")

    np.clip(x, -1.0, 1.0, out=x)
    return AudioClip(
        samples=x,
        sample_rate=TARGET_RATE,
        source_id=f"synth:{spec.kind}:{spec.seed}",
        offset_sec=0.0,
    )


def write_wav(clip: AudioClip, path: str | Path, fmt: str = "float32") -> None:
    """Write a clip as WAV (``float32`` keeps synth output bit-exact, or ``int16``)."""
    path = Path(path)
    if fmt == "float32":
        wavfile.write(str(path), clip.sample_rate, clip.samples.astype(np.float32))
    elif fmt == "int16":
        q = np.clip(np.round(clip.samples * 32767.0), -32768, 32767).astype(np.int16)
        wavfile.write(str(path), clip.sample_rate, q)
    else:
        raise PreconditionError(f"unknown wav format {fmt!r}")
