"""The stationarity index: spectral contrasts, variance statistics, and the
surrogate-calibrated decision threshold.

Per observation scale, local multitaper spectra of the target are compared to
the time-averaged global spectrum; the variance of those contrasts (theta1) is
referenced against the same statistic computed on phase-randomized surrogates
(theta0 population).  The index is sqrt(theta1 / mean(theta0)), approximately
1 when the signal is stationary, and the threshold gamma is the epsilon-tail
quantile of a Gamma fit to the theta0 population, mapped through the same
square-root ratio.
"""

from __future__ import annotations

import hashlib
import warnings
from dataclasses import dataclass, field

import numpy as np
from scipy import stats as sp_stats

from .errors import DegenerateThetaWarning, PreconditionError
from .ingest import AudioClip
from .spectral import DEFAULT_TAPERS, _cached_bank, _power_frames
from .surrogate import SurrogateSet, generate_surrogates

DEFAULT_SCALES = (0.006, 0.012, 0.025, 0.05, 0.1, 0.2, 0.3, 0.4, 0.5)
DEFAULT_EPSILON = 0.05
DEFAULT_SURROGATES = 50
SPECTRAL_FLOOR = 1e-12
MIN_WINDOW = 16
MIN_THETA0 = 8

DISTANCE_MODES = ("kl", "lsd", "combined")


@dataclass(frozen=True)
class DistanceSpec:
    """How local and global spectra are compared."""

    mode: str = "combined"
    floor: float = SPECTRAL_FLOOR

    def __post_init__(self):
        if self.mode not in DISTANCE_MODES:
            raise PreconditionError(f"distance mode must be one of {DISTANCE_MODES}")
        if not self.floor > 0:
            raise PreconditionError("distance floor must be positive")


@dataclass
class ContrastSeries:
    """Per-frame distances to the global spectrum, at one observation scale."""

    values: np.ndarray  # (Z,) non-negative
    scale: float = float("nan")


@dataclass(frozen=True)
class InsConfig:
    """Everything that determines an index computation besides the clip itself."""

    j_surrogates: int = DEFAULT_SURROGATES
    epsilon: float = DEFAULT_EPSILON
    distance: DistanceSpec = field(default_factory=DistanceSpec)
    tapers: int = DEFAULT_TAPERS
    variance: str = "sample"
    seed: int = 0

    def __post_init__(self):
        if not 0 < self.epsilon < 0.5:
            raise PreconditionError(f"epsilon must be in (0, 0.5), got {self.epsilon}")
        if self.j_surrogates < MIN_THETA0:
            raise PreconditionError(
                f"quantile calibration needs >= {MIN_THETA0} surrogates, got {self.j_surrogates}"
            )
        if self.variance != "sample":
            raise PreconditionError(f"unknown variance estimator {self.variance!r}")

    def fingerprint(self) -> str:
        key = "|".join(
            str(v)
            for v in (
                self.j_surrogates,
                self.epsilon,
                self.distance.mode,
                self.distance.floor,
                self.tapers,
                self.variance,
                self.seed,
            )
        )
        return hashlib.sha256(key.encode()).hexdigest()[:12]


@dataclass
class InsPoint:
    """Index value and calibrated threshold at one scale."""

    scale: float
    ins: float
    gamma: float
    theta1: float
    theta0_mean: float


@dataclass
class InsCurve:
    """Per-scale index points for one clip, ascending in scale."""

    points: list[InsPoint]
    clip_id: str
    config_fingerprint: str

    @property
    def scales(self) -> list[float]:
        return [p.scale for p in self.points]


def spectral_distance(local: np.ndarray, global_ref: np.ndarray, spec: DistanceSpec) -> float:
    """Dissimilarity between one local spectrum and the global reference.

    ``kl``: Kullback-Leibler divergence sum(p*log(p/q)) on floor-guarded,
    unit-sum normalizations of the two spectra (nats).
    ``lsd``: mean absolute log-spectral deviation.
    ``combined`` (default): KL * (1 + LSD) — shape divergence modulated by
    level deviation, so pure gain changes between frames still register.
    """
    local = np.asarray(local, dtype=np.float64)
    global_ref = np.asarray(global_ref, dtype=np.float64)
    if local.shape != global_ref.shape or local.ndim != 1:
        raise PreconditionError("spectra must be 1-D and of equal length")
    if np.any(local < 0) or np.any(global_ref < 0):
        raise PreconditionError("spectra must be non-negative")
    c = _contrasts(local[None, :], global_ref, spec)
    return float(c[0])


def _contrasts(values: np.ndarray, global_ref: np.ndarray, spec: DistanceSpec) -> np.ndarray:
    """Distances of each row of ``values`` (Z, F) to ``global_ref`` (F,)."""
    floor = spec.floor
    out = None
    if spec.mode in ("kl", "combined"):
        p = values + floor
        p /= p.sum(axis=1, keepdims=True)
        q = global_ref + floor
        q = q / q.sum()
        out = np.sum(p * np.log(p / q[None, :]), axis=1)
    if spec.mode in ("lsd", "combined"):
        lsd = np.mean(np.abs(np.log(values + floor) - np.log(global_ref[None, :] + floor)), axis=1)
        out = lsd if out is None else out * (1.0 + lsd)
    return out


def contrast_series(spec_gram, spec: DistanceSpec, scale: float = float("nan")) -> ContrastSeries:
    """Contrast of every frame against the arithmetic mean of all frames."""
    values = np.asarray(spec_gram.values, dtype=np.float64)
    if values.shape[0] < 3:
        raise PreconditionError(f"need >= 3 frames for a contrast series, got {values.shape[0]}")
    global_ref = values.mean(axis=0)
    return ContrastSeries(values=_contrasts(values, global_ref, spec), scale=scale)


def theta_variance(series: ContrastSeries) -> float:
    """Unbiased sample variance (divisor Z-1) of the contrast values."""
    values = np.asarray(series.values, dtype=np.float64)
    if values.shape[0] < 2:
        raise PreconditionError("variance needs at least two contrast values")
    return float(np.var(values, ddof=1))


def gamma_threshold(theta0: np.ndarray, epsilon: float = DEFAULT_EPSILON) -> float:
    """Stationarity threshold from the surrogate variance population.

    A Gamma distribution is fit to ``theta0`` by method of moments
    (shape = mean^2/var, scale = var/mean); the threshold is
    sqrt(Q(1 - epsilon) / mean) with Q the fitted quantile function, i.e. the
    index value a stationary signal exceeds with probability ~epsilon.  A
    (near-)constant population degenerates the fit; the threshold then falls
    back to 1 with a DegenerateThetaWarning.
    """
    theta0 = np.asarray(theta0, dtype=np.float64)
    if theta0.shape[0] < MIN_THETA0:
        raise PreconditionError(f"need >= {MIN_THETA0} theta0 values, got {theta0.shape[0]}")
    if np.any(theta0 < 0):
        raise PreconditionError("theta0 values must be non-negative")
    mean = float(theta0.mean())
    if mean <= 0.0:
        raise PreconditionError("all-zero theta0 population; cannot calibrate a threshold")
    var = float(np.var(theta0, ddof=1))
    if var / (mean * mean) < 1e-12:
        warnings.warn(
            "theta0 population is (near-)constant; falling back to gamma=1",
            DegenerateThetaWarning,
        )
        return 1.0
    shape = mean * mean / var
    scale = var / mean
    q = float(sp_stats.gamma.ppf(1.0 - epsilon, a=shape, scale=scale))
    return float(np.sqrt(q / mean))


def _analysis_window(n_samples: int, scale: float) -> int:
    if not 0.0 < scale <= 0.5:
        raise PreconditionError(f"scale must be in (0, 0.5], got {scale}")
    window = int(round(scale * n_samples))
    # round() can land one sample past n/2 for odd clip lengths at scale 0.5.
    window = min(window, n_samples // 2)
    if window < MIN_WINDOW:
        raise PreconditionError(
            f"scale {scale} gives a {window}-sample window; minimum is {MIN_WINDOW}"
        )
    return window


def ins_at_scale(
    clip: AudioClip, surrogates: SurrogateSet, scale: float, cfg: InsConfig
) -> InsPoint:
    """Index value and threshold at one observation scale.

    The local window is ``round(scale * len(clip))`` samples with 50% overlap;
    theta1 comes from the clip's contrast series, the theta0 population from
    the same computation on each surrogate (each against its own global mean).
    """
    x = np.asarray(clip.samples, dtype=np.float64)
    n = x.shape[0]
    if surrogates.surrogates.shape[1] != n:
        raise PreconditionError("surrogate length does not match clip length")
    window = _analysis_window(n, scale)
    hop = max(1, window // 2)
    bank = _cached_bank("hermite", window, cfg.tapers)

    theta1 = _contrast_variance(x, bank, hop, cfg.distance)
    theta0 = np.array(
        [_contrast_variance(s, bank, hop, cfg.distance) for s in surrogates.surrogates]
    )
    theta0_mean = float(theta0.mean())
    if theta0_mean <= 0.0:
        raise PreconditionError(
            "surrogate contrasts have zero variance (silent clip?); index undefined"
        )
    ins = float(np.sqrt(theta1 / theta0_mean))
    gamma = gamma_threshold(theta0, cfg.epsilon)
    return InsPoint(scale=float(scale), ins=ins, gamma=gamma, theta1=theta1, theta0_mean=theta0_mean)


def _contrast_variance(x: np.ndarray, bank, hop: int, dist: DistanceSpec) -> float:
    values = _power_frames(x, bank, hop)
    if values.shape[0] < 3:
        raise PreconditionError("fewer than 3 analysis frames at this scale")
    c = _contrasts(values, values.mean(axis=0), dist)
    return float(np.var(c, ddof=1))


def ins_curve(
    clip: AudioClip,
    scales: tuple[float, ...] | list[float] = DEFAULT_SCALES,
    cfg: InsConfig = InsConfig(),
) -> InsCurve:
    """Sweep the index over ascending scales, reusing one surrogate family.

    The family is generated once from ``cfg.seed`` — the statistic is defined
    against a fixed family, and regeneration per scale would only add noise
    and cost.
    """
    scales = [float(s) for s in scales]
    if not scales:
        raise PreconditionError("scales must be non-empty")
    if any(s2 <= s1 for s1, s2 in zip(scales, scales[1:])):
        raise PreconditionError("scales must be strictly ascending")
    surrogates = generate_surrogates(clip, cfg.j_surrogates, cfg.seed)
    points = [ins_at_scale(clip, surrogates, s, cfg) for s in scales]
    return InsCurve(points=points, clip_id=clip.source_id, config_fingerprint=cfg.fingerprint())
