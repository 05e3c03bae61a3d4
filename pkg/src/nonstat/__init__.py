"""Stationarity assessment for short audio clips.

Surrogate-calibrated per-scale index computation plus a hard global
non-stationarity label, with a batch-labeling CLI for dataset-scale use.
"""

from .errors import (
    AudioReadError,
    DegenerateThetaWarning,
    EmptyAudioError,
    NonstatError,
    PreconditionError,
    UnsupportedAudioError,
)
from .hlc import DEFAULT_ALPHA, HlcConfig, HlcResult, RegionPartition, hlc_label, region_flag
from .ingest import (
    CLIP_SAMPLES,
    CLIP_SECONDS,
    TARGET_RATE,
    AudioClip,
    SynthSpec,
    load_audio,
    segment_clips,
    synth_signal,
    write_wav,
)
from .ins import (
    DEFAULT_EPSILON,
    DEFAULT_SCALES,
    DEFAULT_SURROGATES,
    ContrastSeries,
    DistanceSpec,
    InsConfig,
    InsCurve,
    InsPoint,
    contrast_series,
    gamma_threshold,
    ins_at_scale,
    ins_curve,
    spectral_distance,
    theta_variance,
)
from .spectral import Spectrogram, TaperBank, make_taper_bank, multitaper_spectrogram
from .surrogate import SurrogateSet, generate_surrogates

__version__ = "0.1.0"

__all__ = [
    "AudioClip",
    "AudioReadError",
    "CLIP_SAMPLES",
    "CLIP_SECONDS",
    "ContrastSeries",
    "DEFAULT_ALPHA",
    "DEFAULT_EPSILON",
    "DEFAULT_SCALES",
    "DEFAULT_SURROGATES",
    "DegenerateThetaWarning",
    "DistanceSpec",
    "EmptyAudioError",
    "HlcConfig",
    "HlcResult",
    "InsConfig",
    "InsCurve",
    "InsPoint",
    "NonstatError",
    "PreconditionError",
    "RegionPartition",
    "Spectrogram",
    "SurrogateSet",
    "SynthSpec",
    "TARGET_RATE",
    "TaperBank",
    "UnsupportedAudioError",
    "contrast_series",
    "gamma_threshold",
    "generate_surrogates",
    "hlc_label",
    "ins_at_scale",
    "ins_curve",
    "load_audio",
    "make_taper_bank",
    "multitaper_spectrogram",
    "region_flag",
    "segment_clips",
    "spectral_distance",
    "synth_signal",
    "theta_variance",
    "write_wav",
]
