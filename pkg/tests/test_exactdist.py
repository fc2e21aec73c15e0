import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import logsumexp
from scipy.stats import binom

from conftest import MODELS, representations
from ratldp import examples
from ratldp.errors import DomainError
from ratldp.exactdist import (
    brute_force_distribution,
    empirical_rate,
    exact_distribution,
    moment_generating,
    moments,
    tail,
)
from ratldp.model import tilt
from ratldp.ratefn import binomial_rate, rate
from ratldp.spectral import beta, gamma


class TestExactDistribution:
    def test_n_zero(self, reference_model):
        dist = exact_distribution(reference_model[1], 0)
        np.testing.assert_allclose(dist.probabilities, [1.0], rtol=1e-15)

    @pytest.mark.parametrize("p, n", [(0.3, 1), (0.3, 17), (0.71, 400), (0.5, 3000)])
    def test_bernoulli_is_binomial(self, p, n):
        dist = exact_distribution(examples.bernoulli(p), n)
        k = np.arange(n + 1)
        np.testing.assert_allclose(dist.log_probabilities, binom.logpmf(k, n, p), rtol=1e-10, atol=1e-10)

    @pytest.mark.parametrize("n", range(0, 15))
    def test_matches_brute_force(self, reference_model, n):
        rep = reference_model[1]
        fast, slow = exact_distribution(rep, n), brute_force_distribution(rep, n)
        assert np.abs(fast.probabilities - slow.probabilities).max() <= 1e-12

    @settings(max_examples=30, deadline=None)
    @given(representations(max_dim=3), st.integers(0, 9))
    def test_matches_brute_force_random(self, rep, n):
        fast, slow = exact_distribution(rep, n), brute_force_distribution(rep, n)
        assert np.abs(fast.probabilities - slow.probabilities).max() <= 1e-12
        assert np.array_equal(np.isfinite(fast.log_weights), np.isfinite(slow.log_weights))

    def test_brute_force_examples(self, uniform):
        dist = brute_force_distribution(examples.bernoulli(0.3), 1)
        np.testing.assert_allclose(dist.probabilities, [0.7, 0.3], rtol=1e-15)
        np.testing.assert_allclose(brute_force_distribution(uniform, 2).probabilities, [0.25, 0.5, 0.25], rtol=1e-15)

    def test_guards(self, golden):
        with pytest.raises(DomainError):
            exact_distribution(golden, 10_001)
        with pytest.raises(DomainError):
            brute_force_distribution(golden, 17)

    def test_normalization_large_n(self, golden):
        dist = exact_distribution(golden, 10_000)
        assert abs(dist.probabilities.sum() - 1) <= 1e-10
        assert abs(logsumexp(dist.log_weights) - dist.log_total) <= 1e-10 * abs(dist.log_total)

    def test_tails_do_not_underflow(self):
        # b^n has weight 0.7^n, far below the bulk, yet stays representable in log form
        dist = exact_distribution(examples.bernoulli(0.3), 4000)
        assert dist.log_weights[0] == pytest.approx(4000 * math.log(0.7), rel=1e-12)
        assert dist.log_weights[-1] == pytest.approx(4000 * math.log(0.3), rel=1e-12)

    def test_impossible_counts(self):
        # only words a^n or b^n carry weight
        from ratldp.model import LinearRepresentation

        rep = LinearRepresentation([1, 1], [[1, 0], [0, 0]], [[0, 0], [0, 1]], [1, 1])
        dist = exact_distribution(rep, 5)
        assert np.isneginf(dist.log_weights[1:5]).all()
        np.testing.assert_allclose(dist.probabilities[[0, 5]], [0.5, 0.5])


class TestMoments:
    def test_point_mass(self, golden):
        m = moments(exact_distribution(golden, 0))
        assert (m.mean, m.variance) == (0.0, 0.0)

    @pytest.mark.parametrize("p, n", [(0.3, 10), (0.8, 777)])
    def test_binomial(self, p, n):
        m = moments(exact_distribution(examples.bernoulli(p), n), beta0=p)
        assert m.mean == pytest.approx(p * n, rel=1e-12)
        assert m.variance == pytest.approx(p * (1 - p) * n, rel=1e-10)
        assert abs(m.mean_drift) <= 1e-9

    def test_golden_mean(self, golden):
        m = moments(exact_distribution(golden, 2000))
        assert abs(m.mean / 2000 - 2 / (math.sqrt(5) * (1 + math.sqrt(5)) / 2)) <= 1e-3

    def test_drift_and_variance(self, reference_model):
        rep = reference_model[1]
        b0, g0 = beta(rep, 0.0), gamma(rep, 0.0)
        m1 = moments(exact_distribution(rep, 2000), beta0=b0)
        m2 = moments(exact_distribution(rep, 2001), beta0=b0)
        assert abs(m2.mean - m1.mean - b0) <= 1e-6
        assert abs(m1.variance_per_n - g0) <= 1e-3


class TestTail:
    def test_x_zero(self, golden):
        assert tail(exact_distribution(golden, 30), 0.0, "right") == 0.0

    def test_x_one(self):
        p, n = 0.3, 25
        assert tail(exact_distribution(examples.bernoulli(p), n), 1.0, "right") == pytest.approx(n * math.log(p), rel=1e-12)

    def test_integral_threshold_inclusive(self):
        dist = exact_distribution(examples.bernoulli(0.5), 4)
        # xn = 2 exactly: both tails include k = 2
        assert math.exp(tail(dist, 0.5, "right")) == pytest.approx(11 / 16, rel=1e-14)
        assert math.exp(tail(dist, 0.5, "left")) == pytest.approx(11 / 16, rel=1e-14)
        # xn = 2.4: right starts at 3, left stops at 2
        assert math.exp(tail(dist, 0.6, "right")) == pytest.approx(5 / 16, rel=1e-14)
        assert math.exp(tail(dist, 0.6, "left")) == pytest.approx(11 / 16, rel=1e-14)

    def test_matches_binom_sf(self):
        n, p = 300, 0.4
        dist = exact_distribution(examples.bernoulli(p), n)
        assert tail(dist, 0.5, "right") == pytest.approx(binom.logsf(149, n, p), rel=1e-10)
        assert tail(dist, 0.3, "left") == pytest.approx(binom.logcdf(90, n, p), rel=1e-10)

    def test_bad_side(self, golden):
        with pytest.raises(ValueError):
            tail(exact_distribution(golden, 3), 0.5, "up")

    def test_stirling_gap(self):
        rep = examples.bernoulli(0.5)
        n = 4096
        assert abs(empirical_rate(rep, n, 0.6) - binomial_rate(0.5, 0.6)) <= 5 * math.log(n) / n


class TestEmpiricalRate:
    def test_at_beta(self, golden):
        b0 = beta(golden, 0.0)
        vals = [empirical_rate(golden, n, b0) for n in (100, 400, 1600)]
        assert all(v <= math.log(2) / n + 0.01 for v, n in zip(vals, (100, 400, 1600)))
        assert vals[-1] < vals[0]

    def test_golden_convergence(self, golden):
        target = rate(golden, 0.75).rate
        errs = [abs(empirical_rate(golden, n, 0.75) - target) for n in (250, 500, 1000, 2000, 4000)]
        assert all(np.diff(errs) < 0)


class TestMomentGenerating:
    def test_zero(self, golden):
        assert moment_generating(golden, 100, 0.0) == 0.0

    @pytest.mark.parametrize("t", [-3.0, 0.2, 1.5])
    def test_bernoulli(self, t):
        p, n = 0.3, 123
        assert moment_generating(examples.bernoulli(p), n, t) == pytest.approx(n * math.log(p * math.exp(t) + 1 - p), rel=1e-12)

    @pytest.mark.parametrize("n", [1, 37, 500])
    @pytest.mark.parametrize("t", [-2.0, 0.5, 2.0])
    def test_matches_distribution(self, reference_model, n, t):
        rep = reference_model[1]
        dist = exact_distribution(rep, n)
        via_dist = logsumexp(dist.log_probabilities + t * np.arange(n + 1))
        assert moment_generating(rep, n, t) == pytest.approx(via_dist, rel=1e-10, abs=1e-10)

    def test_large_n(self, golden):
        assert math.isfinite(moment_generating(golden, 10**6, 1.0))


@pytest.mark.parametrize("name", sorted(MODELS))
def test_change_of_measure(name):
    rep = MODELS[name]
    for t in (-2.0, -0.5, 0.5, 2.0):
        tilted = tilt(rep, t)
        for n in (1, 10, 77, 200):
            base = exact_distribution(rep, n).log_probabilities
            tlp = exact_distribution(tilted, n).log_probabilities
            rhs = tlp + moment_generating(rep, n, t) - t * np.arange(n + 1)
            assert np.abs(np.expm1(rhs - base)).max() <= 1e-9


@settings(max_examples=25, deadline=None)
@given(representations(max_dim=3), st.floats(-5, 5), st.integers(1, 60))
def test_change_of_measure_random(rep, t, n):
    base = exact_distribution(rep, n).log_probabilities
    tlp = exact_distribution(tilt(rep, t), n).log_probabilities
    rhs = tlp + moment_generating(rep, n, t) - t * np.arange(n + 1)
    finite = np.isfinite(base)
    assert np.array_equal(finite, np.isfinite(rhs))
    assert np.abs(np.expm1(rhs[finite] - base[finite])).max() <= 1e-9
