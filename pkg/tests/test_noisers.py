"""Rate normalization and the moment identities of the noise families."""

import math

import numpy as np
import pytest
import scipy.stats as st

from sarsim.errors import ParameterError
from sarsim.noisers import (FAMILIES, NoiserSpec, apply, apply_gen_gamma,
                            apply_lognormal, apply_poisson, rate_track,
                            sample_noiser_spec)
from sarsim.pipeline import SimulatorConfig
from sarsim.rng import StreamKey


def fresh(lane, seed=21):
    return StreamKey(seed, (lane,)).stream()


class TestRateTrack:
    def test_affine_formula(self):
        got = rate_track(np.array([0.0, 5.0, 10.0]), 4.0)
        assert np.array_equal(got, [0.0, 2.0, 4.0])

    def test_constant_series_midpoint(self):
        got = rate_track(np.full(5, 7.7), 4.0)
        assert np.array_equal(got, np.full(5, 2.0))

    def test_endpoint_images(self, g):
        y = g.standard_normal((4, 200))
        lam = rate_track(y, 6.5)
        assert np.array_equal(lam.min(axis=-1), np.zeros(4))
        assert np.array_equal(lam.max(axis=-1), np.full(4, 6.5))

    def test_rejects_empty(self):
        with pytest.raises(ParameterError):
            rate_track(np.empty(0), 1.0)


class TestPoissonNoiser:
    def test_zero_fraction_at_low_rate(self):
        # Constant input puts lambda = lambda0 / 2 = 0.05 everywhere, so the
        # zero fraction is exp(-0.05) = 0.9512.
        y = np.full(100_000, 3.0)
        eta = apply_poisson(y, NoiserSpec("poisson", lambda0=0.1), fresh(1))
        assert abs(float(np.mean(eta == 0.0)) - math.exp(-0.05)) < 0.01

    def test_minimum_positions_emit_zero(self):
        y = np.concatenate([np.zeros(500), np.ones(500)])
        eta = apply_poisson(y, NoiserSpec("poisson", lambda0=50.0), fresh(2))
        assert np.array_equal(eta[:500], np.zeros(500))

    def test_mean_at_constant_level(self):
        y = np.full(100_000, 1.0)
        eta = apply_poisson(y, NoiserSpec("poisson", lambda0=8.0), fresh(3))
        # lambda = 4; 3 sigma = 3 * sqrt(4 / n) = 0.019.
        assert abs(float(np.mean(eta)) - 4.0) < 0.019

    def test_tracks_rate(self):
        t = np.arange(10_000)
        y = np.sin(2.0 * np.pi * t / 100.0)
        spec = NoiserSpec("poisson", lambda0=50.0)
        eta = apply_poisson(y, spec, fresh(4))
        lam = rate_track(y, 50.0)
        assert float(np.corrcoef(eta, lam)[0, 1]) > 0.5

    def test_heteroscedastic_variance_monotone_in_rate(self):
        t = np.arange(100_000)
        y = np.sin(2.0 * np.pi * t / 1000.0)
        lam = rate_track(y, 100.0)
        eta = apply_poisson(y, NoiserSpec("poisson", lambda0=100.0), fresh(5))
        deciles = np.quantile(lam, np.arange(1, 10) / 10.0)
        bins = np.digitize(lam, deciles)
        centers, variances = [], []
        for b in range(10):
            mask = bins == b
            centers.append(float(np.mean(lam[mask])))
            variances.append(float(np.var(eta[mask])))
        rho = st.spearmanr(centers, variances).statistic
        assert rho > 0.9


class TestGenGammaNoiser:
    def test_unit_power_cv(self):
        y = np.full(1_000_000, 2.0)
        spec = NoiserSpec("gen_gamma", lambda0=6.0, kappa=9.0, zeta=1.0)
        eta = apply_gen_gamma(y, spec, fresh(6))
        cv = float(np.std(eta) / np.mean(eta))
        assert abs(cv - 1.0 / 3.0) / (1.0 / 3.0) < 0.05

    def test_large_shape_approaches_symmetry(self):
        y = np.full(500_000, 2.0)
        spec = NoiserSpec("gen_gamma", lambda0=6.0, kappa=50.0, zeta=1.0)
        eta = apply_gen_gamma(y, spec, fresh(7))
        assert abs(float(st.skew(eta))) < 0.35

    def test_square_root_power_stays_positive(self):
        y = np.linspace(0.0, 1.0, 10_000)
        spec = NoiserSpec("gen_gamma", lambda0=5.0, kappa=2.0, zeta=0.5)
        eta = apply_gen_gamma(y, spec, fresh(8))
        assert np.all(eta >= 0.0)
        assert np.all(eta[y > 0.0][1:] > 0.0)

    def test_zero_rate_positions_short_circuit(self):
        y = np.concatenate([np.zeros(100), np.ones(100)])
        spec = NoiserSpec("gen_gamma", lambda0=3.0, kappa=4.0, zeta=1.2)
        eta = apply_gen_gamma(y, spec, fresh(9))
        assert np.array_equal(eta[:100], np.zeros(100))


class TestLognormalNoiser:
    def test_small_shape_median(self):
        # Constant input: mu = lambda0 / 2 = 1, so the median tends to e.
        y = np.full(200_000, 5.0)
        spec = NoiserSpec("lognormal", lambda0=2.0, kappa=0.01)
        eta = apply_lognormal(y, spec, fresh(10))
        assert abs(float(np.median(eta)) - math.e) / math.e < 0.02

    def test_mean_at_zero_rate_positions(self):
        # Minimum positions have mu = 0; with kappa = 1 the mean is exp(1/2).
        y = np.concatenate([np.zeros(1_000_000), np.ones(10)])
        spec = NoiserSpec("lognormal", lambda0=2.0, kappa=1.0)
        eta = apply_lognormal(y, spec, fresh(11))
        target = math.exp(0.5)
        assert abs(float(np.mean(eta[:1_000_000])) - target) / target < 0.02

    def test_strictly_positive(self):
        y = np.linspace(-3.0, 3.0, 10_000)
        spec = NoiserSpec("lognormal", lambda0=3.0, kappa=2.0)
        eta = apply_lognormal(y, spec, fresh(12))
        assert np.all(eta > 0.0)


class TestApply:
    def test_passthrough_is_exact_identity(self, g):
        y = g.standard_normal(100)
        assert apply(y, NoiserSpec("passthrough")) is y

    def test_all_outputs_finite_and_nonnegative(self):
        y = np.sin(np.arange(5000) / 7.0) * 3.0
        for i, family in enumerate(("poisson", "gen_gamma", "lognormal")):
            spec = NoiserSpec(family, lambda0=4.0, kappa=2.0, zeta=1.1)
            eta = apply(y, spec, fresh(20 + i))
            assert np.isfinite(eta).all()
            assert np.all(eta >= 0.0)

    def test_family_selection_uniform(self):
        g = StreamKey(23, (0,)).stream()
        config = SimulatorConfig()
        n = 10_000
        counts = {f: 0 for f in FAMILIES}
        for _ in range(n):
            counts[sample_noiser_spec(g, config).family] += 1
        for f in FAMILIES:
            assert abs(counts[f] / n - 0.25) < 0.015

    def test_sampled_hyperparameters_in_brackets(self):
        g = StreamKey(24, (0,)).stream()
        config = SimulatorConfig()
        for _ in range(2000):
            spec = sample_noiser_spec(g, config)
            if spec.family == "poisson":
                assert 0.1 <= spec.lambda0 <= 100.0
            elif spec.family == "gen_gamma":
                assert 0.1 <= spec.lambda0 <= 100.0
                assert 1.0 <= spec.kappa <= 50.0
                assert 0.5 <= spec.zeta <= 1.5
            elif spec.family == "lognormal":
                assert 0.1 <= spec.lambda0 <= 5.0
                assert 1.0 <= spec.kappa <= 3.0

    def test_spec_validation(self):
        with pytest.raises(ParameterError):
            NoiserSpec("sparkle")
        with pytest.raises(ParameterError):
            NoiserSpec("poisson", lambda0=0.0)
        with pytest.raises(ParameterError):
            NoiserSpec("lognormal", lambda0=1.0, kappa=0.0)
        with pytest.raises(ParameterError):
            apply(np.ones(5), NoiserSpec("poisson", lambda0=1.0))
