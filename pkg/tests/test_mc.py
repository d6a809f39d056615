import io
import math

import numpy as np
import pytest
from scipy.interpolate import PchipInterpolator

from fptlevy.checks import CATALOG
from fptlevy.cumulant import psi_derivatives
from fptlevy.errors import ConfigurationError, InsufficientSamplesError
from fptlevy.fpt import FptModel, fpt_cdf_curve
from fptlevy.levy_model import LevyTriplet, diagnose
from fptlevy.mc import FptSampleSet, SimConfig, jump_magnitudes, ks_distance, simulate_fpt, simulate_increments

BROWNIAN = LevyTriplet(1.0, 0.0)
FINITE_VARIANCE = {k: v for k, v in CATALOG.items() if diagnose(v).regime == "gaussian"}


class TestConfig:
    @pytest.mark.parametrize(
        "kwargs",
        [
            {"n_paths": 0, "dt": 0.1, "horizon": 1.0},
            {"n_paths": 10, "dt": 2.0, "horizon": 1.0},
            {"n_paths": 10, "dt": 0.1, "horizon": 1.0, "eps": 0.0},
            {"n_paths": 10, "dt": -0.1, "horizon": 1.0},
        ],
    )
    def test_rejects(self, kwargs):
        with pytest.raises(ConfigurationError):
            SimConfig(**kwargs)


class TestSimulation:
    @pytest.mark.slow
    def test_reflection_fraction(self):
        s = simulate_fpt(BROWNIAN, 1.0, SimConfig(100_000, 1e-3, 1.0, seed=5))
        assert abs(s.crossing_fraction - 0.3173) < 3 * 0.0015
        assert s.crossing_times.size + s.censored_count == s.n_paths
        assert np.all((s.crossing_times > 0) & (s.crossing_times <= 1.0))

    def test_deterministic(self):
        trip = CATALOG["exponential_drift"]
        cfg = SimConfig(20_000, 1e-2, 2.0, seed=42)
        a, b = simulate_fpt(trip, 0.5, cfg), simulate_fpt(trip, 0.5, cfg)
        assert np.array_equal(a.crossing_times, b.crossing_times)
        assert a.censored_count == b.censored_count

    def test_thread_count_irrelevant(self, monkeypatch):
        cfg = SimConfig(20_000, 1e-2, 1.0, seed=9)
        monkeypatch.setenv("FPT_THREADS", "1")
        one = simulate_fpt(BROWNIAN, 1.0, cfg)
        monkeypatch.setenv("FPT_THREADS", "4")
        four = simulate_fpt(BROWNIAN, 1.0, cfg)
        assert np.array_equal(one.crossing_times, four.crossing_times)

    def test_seed_changes_sample(self):
        a = simulate_fpt(BROWNIAN, 1.0, SimConfig(5_000, 1e-2, 1.0, seed=1))
        b = simulate_fpt(BROWNIAN, 1.0, SimConfig(5_000, 1e-2, 1.0, seed=2))
        assert not np.array_equal(a.crossing_times, b.crossing_times)

    def test_level_must_be_positive(self):
        with pytest.raises(ConfigurationError):
            simulate_fpt(BROWNIAN, 0.0, SimConfig(10, 0.1, 1.0))

    def test_compound_poisson_allowed(self):
        # between jumps the path rises at m + a/eta = 2/3, so without a jump it crosses 0.2 at t = 0.3
        n = 20_000
        s = simulate_fpt(CATALOG["compound_poisson"], 0.2, SimConfig(n, 1e-2, 1.0, seed=6))
        direct = np.isclose(s.crossing_times, 0.3, rtol=1e-9).sum() / n
        p = math.exp(-2.0 * 0.3)
        assert abs(direct - p) < 4 * math.sqrt(p * (1 - p) / n)
        assert s.crossing_times.min() == pytest.approx(0.3)

    def test_csv_export(self):
        s = simulate_fpt(BROWNIAN, 1.0, SimConfig(1_000, 1e-2, 1.0, seed=3))
        buf = io.StringIO()
        s.to_csv(buf, {"command": "test"})
        lines = buf.getvalue().splitlines()
        assert lines[0].startswith("# ") and lines[2] == "crossing_time"
        np.testing.assert_array_equal(np.array(lines[3:], dtype=float), s.crossing_times)


class TestMoments:
    @pytest.mark.slow
    @pytest.mark.parametrize("name", sorted(FINITE_VARIANCE))
    def test_first_two_moments(self, name):
        trip = FINITE_VARIANCE[name]
        # variance matching keeps both moments exact for any cutoff; 1e-2 keeps tempered jump counts small
        x = simulate_increments(trip, 100_000, eps=1e-2, seed=17)
        _, mean, var = psi_derivatives(trip, 0.0)
        n = x.size
        dev = (x - x.mean()) ** 2
        assert abs(x.mean() - mean) < 3 * x.std(ddof=1) / math.sqrt(n)
        assert abs(dev.mean() - var) < 3 * dev.std(ddof=1) / math.sqrt(n)

    @pytest.mark.parametrize("name", ["stable", "tempered_stable", "tabulated"])
    def test_small_jumps_substituted(self, name):
        mags = jump_magnitudes(CATALOG[name], 20_000, seed=4)
        assert mags.size == 20_000 and np.all(mags >= 1e-3)

    def test_jumps_are_downward(self):
        # finite activity: every jump is simulated, and every one is negative
        mags = jump_magnitudes(CATALOG["exponential"], 20_000, seed=4)
        assert np.all(mags >= 0)
        assert mags.mean() == pytest.approx(1 / 3, rel=0.03)

    def test_no_jumps_means_no_magnitudes(self):
        assert jump_magnitudes(BROWNIAN, 100).size == 0


def exact_samples(model, horizon, n, seed):
    grid = np.concatenate([[0.0], np.geomspace(horizon * 1e-4, horizon, 200)])
    cdf = np.concatenate([[0.0], fpt_cdf_curve(model, grid[1:])])
    cdf = cdf / cdf[-1]
    # the mass below 1e-9 is invisible to a KS test of this size
    keep = (cdf > 1e-9) & np.concatenate([np.diff(cdf) > 0, [True]])
    keep[0] = True
    inverse = PchipInterpolator(cdf[keep], grid[keep])
    u = np.random.default_rng(seed).uniform(size=n)
    return inverse(u)


class TestKs:
    def test_exact_sampling(self):
        model = FptModel(BROWNIAN, 1.0)
        n = 20_000
        cfg = SimConfig(n, 1e-2, 2.0)
        s = FptSampleSet(exact_samples(model, 2.0, n, 8), 0, n, 1.0, cfg)
        assert ks_distance(s, model) < 2.0 / math.sqrt(n)

    def test_insufficient(self):
        model = FptModel(BROWNIAN, 1.0)
        s = simulate_fpt(BROWNIAN, 1.0, SimConfig(10, 1e-2, 1.0))
        with pytest.raises(InsufficientSamplesError):
            ks_distance(s, model)

    @pytest.mark.slow
    def test_bias_decreases_with_step(self):
        # bridge correction off, so the discretisation bias dominates the sampling noise
        model = FptModel(BROWNIAN, 1.0)
        ks = [
            ks_distance(simulate_fpt(BROWNIAN, 1.0, SimConfig(20_000, dt, 1.0, seed=3, bridge=False)), model)
            for dt in (1e-2, 5e-3, 2.5e-3)
        ]
        assert ks[0] > ks[1] > ks[2]

    def test_bridge_removes_bias(self):
        cfg = dict(n_paths=20_000, dt=1e-2, horizon=1.0, seed=3)
        plain = simulate_fpt(BROWNIAN, 1.0, SimConfig(**cfg, bridge=False))
        bridged = simulate_fpt(BROWNIAN, 1.0, SimConfig(**cfg))
        assert bridged.crossing_fraction > plain.crossing_fraction
        assert abs(bridged.crossing_fraction - 0.3173) < 3 * math.sqrt(0.3173 * 0.6827 / 20_000)
