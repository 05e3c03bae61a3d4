import math

import numpy as np
import pytest
from scipy import stats as sp_stats

from nonstat import (
    ContrastSeries,
    DegenerateThetaWarning,
    DistanceSpec,
    InsConfig,
    PreconditionError,
    Spectrogram,
    SynthSpec,
    contrast_series,
    gamma_threshold,
    generate_surrogates,
    ins_at_scale,
    ins_curve,
    multitaper_spectrogram,
    spectral_distance,
    synth_signal,
    theta_variance,
)
from nonstat.ins import DEFAULT_SCALES

from conftest import make_clip


def brute_force_kl(local, ref, floor):
    """Independent oracle: definition evaluated with plain Python loops."""
    p = [v + floor for v in local]
    q = [v + floor for v in ref]
    sp, sq = sum(p), sum(q)
    p = [v / sp for v in p]
    q = [v / sq for v in q]
    return sum(pi * math.log(pi / qi) for pi, qi in zip(p, q))


class TestSpectralDistance:
    @pytest.mark.parametrize("mode", ["kl", "lsd", "combined"])
    def test_identical_spectra_give_zero(self, mode):
        s = np.array([0.3, 1.2, 0.01, 4.0])
        assert spectral_distance(s, s.copy(), DistanceSpec(mode=mode)) == pytest.approx(0.0, abs=1e-12)

    def test_kl_hand_value(self):
        spec = DistanceSpec(mode="kl")
        got = spectral_distance([0.5, 0.5], [0.25, 0.75], spec)
        expected = 0.5 * math.log(2.0) + 0.5 * math.log(2.0 / 3.0)  # ~0.1438 nats
        assert got == pytest.approx(expected, rel=1e-9)
        assert got == pytest.approx(brute_force_kl([0.5, 0.5], [0.25, 0.75], spec.floor), rel=1e-12)

    def test_kl_matches_brute_force_on_random_spectra(self):
        rng = np.random.default_rng(0)
        spec = DistanceSpec(mode="kl")
        for _ in range(20):
            a = rng.uniform(0.0, 5.0, 17)
            b = rng.uniform(0.0, 5.0, 17)
            assert spectral_distance(a, b, spec) == pytest.approx(
                brute_force_kl(a.tolist(), b.tolist(), spec.floor), rel=1e-10
            )

    def test_lsd_hand_value(self):
        got = spectral_distance([1.0, 1.0], [math.e, math.e], DistanceSpec(mode="lsd"))
        assert got == pytest.approx(1.0, rel=1e-9)

    def test_combined_is_kl_times_one_plus_lsd(self):
        rng = np.random.default_rng(1)
        a = rng.uniform(0.0, 2.0, 33)
        b = rng.uniform(0.0, 2.0, 33)
        kl = spectral_distance(a, b, DistanceSpec(mode="kl"))
        lsd = spectral_distance(a, b, DistanceSpec(mode="lsd"))
        combined = spectral_distance(a, b, DistanceSpec(mode="combined"))
        assert combined == pytest.approx(kl * (1.0 + lsd), rel=1e-12)

    def test_length_mismatch_rejected(self):
        with pytest.raises(PreconditionError):
            spectral_distance([1.0, 2.0], [1.0], DistanceSpec())

    def test_negative_entries_rejected(self):
        with pytest.raises(PreconditionError):
            spectral_distance([1.0, -0.1], [1.0, 1.0], DistanceSpec())


def spectrogram_of(values):
    values = np.asarray(values, dtype=np.float64)
    return Spectrogram(
        values=values,
        frame_times=np.arange(values.shape[0], dtype=np.float64),
        freq_bins=np.arange(values.shape[1], dtype=np.float64),
        window_len=2 * (values.shape[1] - 1),
    )


class TestContrastSeries:
    def test_equal_frames_give_zero_contrasts(self):
        sg = spectrogram_of(np.tile([1.0, 2.0, 3.0], (5, 1)))
        c = contrast_series(sg, DistanceSpec())
        np.testing.assert_allclose(c.values, 0.0, atol=1e-12)

    def test_single_outlier_frame_stands_out(self):
        frames = np.tile([1.0, 1.0, 1.0, 1.0], (6, 1))
        frames[2] = [4.0, 0.1, 0.1, 0.1]
        c = contrast_series(spectrogram_of(frames), DistanceSpec())
        assert np.argmax(c.values) == 2
        others = np.delete(c.values, 2)
        assert c.values[2] > others.max()
        np.testing.assert_allclose(others, others[0], rtol=1e-9)

    def test_too_few_frames_rejected(self):
        with pytest.raises(PreconditionError):
            contrast_series(spectrogram_of(np.ones((2, 4))), DistanceSpec())

    def test_white_noise_contrast_variance_matches_surrogate_population(self):
        # the target's theta1 must look like one more draw from the theta0
        # population when the input is already stationary
        clip = synth_signal(SynthSpec("white_noise", seed=21), 1.5)
        surr = generate_surrogates(clip, 40, seed=9)
        spec = DistanceSpec()
        window = 2400

        def theta(x):
            sg = multitaper_spectrogram(make_clip(x), window_len=window, m=5)
            return theta_variance(contrast_series(sg, spec))

        t1 = theta(clip.samples)
        t0 = np.array([theta(s) for s in surr.surrogates])
        lo, hi = np.quantile(t0, [0.025, 0.975])
        assert lo < t1 < hi


class TestThetaVariance:
    def test_constant_series_is_zero(self):
        # exact zero up to float roundoff of the mean
        assert abs(theta_variance(ContrastSeries(values=np.array([3.3, 3.3, 3.3])))) < 1e-24

    def test_012_gives_one(self):
        assert theta_variance(ContrastSeries(values=np.array([0.0, 1.0, 2.0]))) == pytest.approx(1.0)

    def test_two_values(self):
        assert theta_variance(ContrastSeries(values=np.array([1.0, 3.0]))) == pytest.approx(2.0)

    def test_single_value_rejected(self):
        with pytest.raises(PreconditionError):
            theta_variance(ContrastSeries(values=np.array([1.0])))


class TestGammaThreshold:
    def test_constant_population_falls_back_to_one(self):
        with pytest.warns(DegenerateThetaWarning):
            assert gamma_threshold(np.full(20, 2.5), 0.05) == 1.0

    def test_monte_carlo_matches_analytic_gamma_quantile(self):
        rng = np.random.default_rng(7)
        draws = rng.gamma(shape=3.0, scale=2.0, size=100_000)
        got = gamma_threshold(draws, 0.05)
        expected = math.sqrt(sp_stats.gamma.ppf(0.95, a=3.0, scale=2.0) / 6.0)
        assert got == pytest.approx(expected, rel=0.02)

    def test_scale_invariance(self):
        rng = np.random.default_rng(8)
        theta0 = rng.gamma(2.0, 1.5, size=64)
        assert gamma_threshold(7.0 * theta0, 0.05) == pytest.approx(
            gamma_threshold(theta0, 0.05), rel=1e-12
        )

    def test_all_zero_rejected(self):
        with pytest.raises(PreconditionError):
            gamma_threshold(np.zeros(16), 0.05)

    def test_too_few_values_rejected(self):
        with pytest.raises(PreconditionError):
            gamma_threshold(np.ones(5), 0.05)


class TestInsAtScale:
    def test_tone_step_flags_non_stationary(self, fast_cfg):
        clip = synth_signal(SynthSpec("tone_step", seed=13), 1.5)
        surr = generate_surrogates(clip, fast_cfg.j_surrogates, fast_cfg.seed)
        p = ins_at_scale(clip, surr, 0.05, fast_cfg)
        assert p.ins > p.gamma

    def test_white_noise_median_ins_near_one(self):
        # Monte Carlo: under the null the ratio statistic concentrates at 1
        cfg = InsConfig(j_surrogates=12, seed=0)
        values = []
        for seed in range(200):
            clip = synth_signal(SynthSpec("white_noise", seed=seed), 1.5)
            surr = generate_surrogates(clip, cfg.j_surrogates, seed + 10_000)
            values.append(ins_at_scale(clip, surr, 0.1, cfg).ins)
        assert 0.8 <= float(np.median(values)) <= 1.2

    def test_ratio_identity(self, fast_cfg, noise_clip):
        surr = generate_surrogates(noise_clip, fast_cfg.j_surrogates, fast_cfg.seed)
        p = ins_at_scale(noise_clip, surr, 0.2, fast_cfg)
        assert p.ins**2 * p.theta0_mean == pytest.approx(p.theta1, rel=1e-9)

    def test_scale_domain_checked(self, fast_cfg, noise_clip):
        surr = generate_surrogates(noise_clip, fast_cfg.j_surrogates, fast_cfg.seed)
        for bad in (0.0, -0.1, 0.6):
            with pytest.raises(PreconditionError):
                ins_at_scale(noise_clip, surr, bad, fast_cfg)
        with pytest.raises(PreconditionError):
            ins_at_scale(noise_clip, surr, 0.0005, fast_cfg)  # 12-sample window

    def test_matches_composed_public_operations(self, fast_cfg, noise_clip):
        # the engine's fused path must agree with the documented op chain
        surr = generate_surrogates(noise_clip, fast_cfg.j_surrogates, fast_cfg.seed)
        scale = 0.1
        p = ins_at_scale(noise_clip, surr, scale, fast_cfg)

        window = int(round(scale * noise_clip.n_samples))
        spec = fast_cfg.distance

        def theta(x):
            sg = multitaper_spectrogram(make_clip(x), window_len=window, m=fast_cfg.tapers)
            return theta_variance(contrast_series(sg, spec))

        theta1 = theta(noise_clip.samples)
        theta0 = np.array([theta(s) for s in surr.surrogates])
        assert p.theta1 == pytest.approx(theta1, rel=1e-12)
        assert p.theta0_mean == pytest.approx(theta0.mean(), rel=1e-12)
        assert p.ins == pytest.approx(np.sqrt(theta1 / theta0.mean()), rel=1e-12)
        assert p.gamma == pytest.approx(gamma_threshold(theta0, fast_cfg.epsilon), rel=1e-12)


class TestInsCurve:
    def test_default_partition_gives_nine_ascending_points(self, fast_cfg, noise_clip):
        curve = ins_curve(noise_clip, DEFAULT_SCALES, fast_cfg)
        assert len(curve.points) == 9
        scales = curve.scales
        assert scales == sorted(scales)
        assert scales == list(DEFAULT_SCALES)

    def test_rumble_stationary_at_every_scale(self):
        # frozen qualitative pattern: steady rumble stays under gamma everywhere
        clip = synth_signal(SynthSpec("lowpass_rumble", seed=1), 1.5)
        curve = ins_curve(clip, DEFAULT_SCALES, InsConfig(j_surrogates=16, seed=51))
        assert all(p.ins < p.gamma for p in curve.points)

    def test_impulse_crossover_at_large_scales(self):
        # dense damped bursts: non-stationary at short scales, indistinguishable
        # from stationary once windows hold many periods
        clip = synth_signal(
            SynthSpec("impulse_train", {"period_sec": 0.05, "decay_sec": 0.006}, seed=2), 1.5
        )
        curve = ins_curve(clip, DEFAULT_SCALES, InsConfig(j_surrogates=16, seed=52))
        small = [p for p in curve.points if p.scale <= 0.2]
        large = [p for p in curve.points if p.scale >= 0.3]
        assert all(p.ins > p.gamma for p in small)
        assert small[0].ins > 5.0 * small[0].gamma
        assert sum(p.ins < p.gamma for p in large) >= 2

    def test_amplitude_invariance(self, noise_clip):
        cfg = InsConfig(j_surrogates=8, seed=77)
        scales = (0.05, 0.2, 0.5)
        base = ins_curve(noise_clip, scales, cfg)
        for c in (0.1, 3.0, 10.0):
            scaled = ins_curve(make_clip(c * noise_clip.samples, noise_clip.source_id), scales, cfg)
            for p0, p1 in zip(base.points, scaled.points):
                assert p1.ins == pytest.approx(p0.ins, rel=1e-6)
                assert p1.gamma == pytest.approx(p0.gamma, rel=1e-6)

    def test_bitwise_determinism(self, fast_cfg, noise_clip):
        a = ins_curve(noise_clip, (0.1, 0.3), fast_cfg)
        b = ins_curve(noise_clip, (0.1, 0.3), fast_cfg)
        for pa, pb in zip(a.points, b.points):
            assert (pa.ins, pa.gamma, pa.theta1, pa.theta0_mean) == (
                pb.ins,
                pb.gamma,
                pb.theta1,
                pb.theta0_mean,
            )

    def test_scales_must_ascend(self, fast_cfg, noise_clip):
        with pytest.raises(PreconditionError):
            ins_curve(noise_clip, (0.2, 0.1), fast_cfg)
        with pytest.raises(PreconditionError):
            ins_curve(noise_clip, (), fast_cfg)

    def test_config_validation(self):
        with pytest.raises(PreconditionError):
            InsConfig(epsilon=0.7)
        with pytest.raises(PreconditionError):
            InsConfig(j_surrogates=4)
        with pytest.raises(PreconditionError):
            DistanceSpec(mode="cosine")
