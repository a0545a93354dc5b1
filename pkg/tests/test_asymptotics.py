import math

import numpy as np
import pytest
from scipy.stats import norm

from resolvability import (
    Channel,
    DomainError,
    FiniteDistribution,
    MemorylessModel,
    Spectrum,
    ball_membership,
    convergence_sweep,
    gaussian_approx_quantile,
    normal_quantile,
    normalize_second_order,
    spectrum_mean_var,
)
from resolvability.asymptotics import subsequence_quantiles

from conftest import LOG2, h2

U2 = FiniteDistribution.uniform(("0", "1"))
ID2 = Channel.identity(("0", "1"))


class TestNormalize:
    def test_point_mass_at_nR(self):
        s = normalize_second_order(Spectrum.point_mass(6.0, n=3), 3, 2.0)
        assert s.values[0] == 0.0

    def test_identity_transform(self):
        s = Spectrum.from_atoms([0.1, 0.4], [0.5, 0.5])
        assert np.array_equal(normalize_second_order(s, 1, 0.0).values, s.values)

    def test_mean_shift_and_mass(self):
        s = Spectrum.from_atoms([1.0, 3.0, 4.0], [0.2, 0.3, 0.5], n=4)
        t = normalize_second_order(s, 4, 0.5)
        m, _ = spectrum_mean_var(s)
        assert spectrum_mean_var(t)[0] == pytest.approx(math.sqrt(4) * (m / 4 - 0.5))
        assert t.probs.sum() == s.probs.sum()


class TestBall:
    def test_all_zero(self):
        d = [(n, 0.0) for n in range(1, 11)]
        assert ball_membership(d, 0.0, "limsup").member and ball_membership(d, 0.0, "liminf").member

    def test_alternating(self):
        d = [(n, float(n % 2)) for n in range(1, 21)]
        assert ball_membership(d, 0.0, "liminf").member
        assert not ball_membership(d, 0.0, "limsup").member

    def test_constant_above(self):
        d = [(n, 0.3) for n in range(1, 11)]
        assert not ball_membership(d, 0.2, "limsup").member
        assert not ball_membership(d, 0.2, "liminf").member

    def test_empty(self):
        with pytest.raises(DomainError):
            ball_membership([], 0.1)


class TestGaussian:
    def test_zero_variance(self):
        assert gaussian_approx_quantile(0.0, 0.1) == 0.0

    def test_median(self):
        assert gaussian_approx_quantile(2.0, 0.5) == 0.0

    def test_one_sigma(self):
        assert gaussian_approx_quantile(1.0, 0.158655) == pytest.approx(1.0, abs=1e-5)

    def test_domain(self):
        with pytest.raises(DomainError):
            gaussian_approx_quantile(1.0, 1.0)

    @pytest.mark.parametrize("p", [1e-12, 1e-6, 0.01, 0.02425, 0.2, 0.5, 0.7, 0.975, 0.999999])
    def test_against_scipy(self, p):
        assert normal_quantile(p) == pytest.approx(norm.ppf(p), rel=1e-8, abs=1e-8)


class TestSweep:
    def test_deterministic_source(self):
        P = FiniteDistribution.point_mass("01", "0")
        recs = convergence_sweep(MemorylessModel(((P, ID2),)), [1, 2, 5, 9], 0.1, R=0.0)
        assert all(r.first_order_quantile == 0.0 and r.second_order_quantile == 0.0 for r in recs)

    def test_uniform_identity(self):
        recs = convergence_sweep(MemorylessModel(((U2, ID2),)), [1, 3, 10, 50], 0.3)
        assert all(r.first_order_quantile == pytest.approx(LOG2, abs=1e-12) for r in recs)

    def test_bernoulli_second_order(self):
        P = FiniteDistribution.bernoulli(0.3)
        rec = convergence_sweep(MemorylessModel(((P, ID2),)), [10_000], 0.158655, R=h2(0.3))[0]
        V = 0.3 * 0.7 * math.log(0.7 / 0.3) ** 2
        assert rec.second_order_quantile == pytest.approx(math.sqrt(V), abs=0.05)

    def test_weak_law_trend(self):
        P = FiniteDistribution.bernoulli(0.3)
        ns = [2**k for k in range(6, 13)]
        recs = convergence_sweep(MemorylessModel(((P, ID2),)), ns, 0.2)
        gaps = [abs(r.first_order_quantile - h2(0.3)) for r in recs]
        assert gaps[-1] < gaps[0] and gaps[-1] < 0.02

    def test_alternating_subsequences(self):
        model = MemorylessModel(((U2, ID2), (U2, Channel.constant("01", U2))), "alternating")
        recs = convergence_sweep(model, list(range(1, 65)), 0.1)
        sub = subsequence_quantiles(recs)
        assert np.allclose(sub[0], LOG2) and np.allclose(sub[1], 0.0)

    def test_second_order_symmetry(self):
        P = FiniteDistribution.bernoulli(0.5)
        W = Channel.bsc(0.1)
        model = MemorylessModel(((P, W),))
        I = LOG2 - h2(0.1)
        hi = convergence_sweep(model, [4000], 0.2, R=I)[0].second_order_quantile
        lo = convergence_sweep(model, [4000], 0.8, R=I)[0].second_order_quantile
        assert hi + lo == pytest.approx(0.0, abs=0.05)

    def test_threads_identical(self):
        model = MemorylessModel(((FiniteDistribution.bernoulli(0.2), Channel.bsc(0.05)),))
        a = convergence_sweep(model, [5, 50, 120], 0.1, R=0.2, threads=1)
        b = convergence_sweep(model, [5, 50, 120], 0.1, R=0.2, threads=4)
        assert a == b

    def test_reference_distance(self):
        P = FiniteDistribution.bernoulli(0.4)
        rec = convergence_sweep(MemorylessModel(((P, ID2),)), [1], 0.1, reference=U2)[0]
        assert rec.distance == pytest.approx(0.1)

    def test_n_list_must_increase(self):
        with pytest.raises(DomainError):
            convergence_sweep(MemorylessModel(((U2, ID2),)), [3, 2], 0.1)
