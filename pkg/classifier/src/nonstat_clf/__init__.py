"""Learned stationarity assessment: a toy transformer trained on hard labels
from the statistical labeling pipeline, replacing the expensive test with a
millisecond forward pass."""

from .data import LabeledSet, load_labeled_set, read_label_manifest, split_train_eval
from .features import CLIP_SAMPLES, N_BINS, N_FRAMES, stft_frontend
from .latency import LatencyReport, infer_bench, read_ins_bench_report
from .metrics import EvalMetrics, evaluate_scores
from .model import (
    PRESETS,
    ClassifierConfig,
    SpectralEncoder,
    StationarityNet,
    build_model,
    spectral_encoder_param_count,
)
from .training import TrainState, accuracy, predict, train

__version__ = "0.1.0"

__all__ = [
    "CLIP_SAMPLES",
    "ClassifierConfig",
    "EvalMetrics",
    "LabeledSet",
    "LatencyReport",
    "N_BINS",
    "N_FRAMES",
    "PRESETS",
    "SpectralEncoder",
    "StationarityNet",
    "TrainState",
    "accuracy",
    "build_model",
    "evaluate_scores",
    "infer_bench",
    "load_labeled_set",
    "predict",
    "read_ins_bench_report",
    "read_label_manifest",
    "spectral_encoder_param_count",
    "split_train_eval",
    "stft_frontend",
    "train",
]
