import numpy as np
import pytest

from nonstat import AudioClip, InsConfig, SynthSpec, synth_signal


@pytest.fixture
def fast_cfg():
    """Small surrogate family for tests where runtime matters more than power."""
    return InsConfig(j_surrogates=8, seed=1234)


@pytest.fixture
def noise_clip():
    return synth_signal(SynthSpec("white_noise", seed=7), 1.5)


def make_clip(samples: np.ndarray, source_id: str = "test") -> AudioClip:
    return AudioClip(samples=np.asarray(samples, dtype=np.float64), source_id=source_id)
