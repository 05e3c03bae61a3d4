"""Phase-randomized surrogates: the stationary null hypothesis, realized.

A surrogate keeps the magnitude spectrum of the original signal and draws
fresh spectral phases uniformly on [-pi, pi], destroying any time-localized
structure while preserving second-order statistics.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import PreconditionError
from .ingest import AudioClip

MIN_SURROGATE_LEN = 32


@dataclass
class SurrogateSet:
    """Stationarized copies of one source clip plus the seed that made them."""

    surrogates: np.ndarray  # (J, n) real
    seed: int
    source_id: str

    @property
    def j(self) -> int:
        return int(self.surrogates.shape[0])


def _phase_rng(seed: int, index: int) -> np.random.Generator:
    # SeedSequence hashes (seed, index) into independent streams, so surrogate
    # `index` is the same no matter how generation is ordered or parallelized.
    return np.random.default_rng(np.random.SeedSequence((seed, index)))


def generate_surrogates(clip: AudioClip, j: int, seed: int) -> SurrogateSet:
    """Draw ``j`` phase-randomized surrogates of ``clip``.

    Positive-frequency bins get i.i.d. phases from U[-pi, pi]; DC (and Nyquist
    for even lengths) stay untouched, which keeps them real and preserves the
    signal mean including its sign.  The inverse transform enforces conjugate
    symmetry, so the output is real by construction.  Deterministic given
    ``(clip, j, seed)``.
    """
    if j < 1:
        raise PreconditionError(f"need at least one surrogate, got j={j}")
    x = np.asarray(clip.samples, dtype=np.float64)
    n = x.shape[0]
    if n < MIN_SURROGATE_LEN:
        raise PreconditionError(f"clip too short for surrogates ({n} < {MIN_SURROGATE_LEN})")

    spectrum = np.fft.rfft(x)
    magnitude = np.abs(spectrum)
    # Bins whose phase is randomized: everything strictly between DC and
    # (for even n) Nyquist.
    lo = 1
    hi = spectrum.shape[0] - 1 if n % 2 == 0 else spectrum.shape[0]

    out = np.empty((j, n), dtype=np.float64)
    randomized = np.empty_like(spectrum)
    for idx in range(j):
        rng = _phase_rng(seed, idx)
        phases = rng.uniform(-np.pi, np.pi, hi - lo)
        randomized[:] = spectrum
        randomized[lo:hi] = magnitude[lo:hi] * np.exp(1j * phases)
        out[idx] = np.fft.irfft(randomized, n=n)

    return SurrogateSet(surrogates=out, seed=seed, source_id=clip.source_id)
