import itertools
from fractions import Fraction

import numpy as np
import pytest

from resolvability import Channel, DomainError, FiniteDistribution, in_AY, truncate_to_typical, type_of
from resolvability.errors import DegenerateTruncationError
from resolvability.probability import ProductSpec, product_distribution
from resolvability.typicality import (
    iid_product_distance,
    is_cond_typical,
    is_typical_output,
    joint_type_of,
    typical_set_probability,
    typical_tolerance,
)

U2 = FiniteDistribution.uniform(("0", "1"))


class TestTypes:
    def test_balanced(self):
        assert type_of("0110").freqs == (Fraction(1, 2), Fraction(1, 2))

    def test_constant(self):
        t = type_of("aaa", alphabet="ab")
        assert t.freq("a") == 1 and t.freq("b") == 0

    def test_thirds(self):
        assert type_of("012", alphabet="012").freqs == (Fraction(1, 3),) * 3

    def test_unknown_symbol(self):
        with pytest.raises(DomainError):
            type_of("012", alphabet="01")

    def test_joint_balanced(self):
        t = joint_type_of("0011", "0101", "01", "01")
        assert t.freqs == (Fraction(1, 4),) * 4

    def test_joint_constant(self):
        t = joint_type_of("aaa", "bbb")
        assert t.counts == (3,)

    def test_joint_diagonal(self):
        t = joint_type_of("012", "012", "012", "012")
        assert t.freq(("1", "1")) == Fraction(1, 3) and t.freq(("0", "1")) == 0

    def test_joint_length_mismatch(self):
        with pytest.raises(DomainError):
            joint_type_of("01", "0")

    def test_round_trip(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            counts = rng.integers(0, 5, size=3)
            seq = [s for s, c in zip("abc", counts) for _ in range(c)]
            if not seq:
                continue
            rng.shuffle(seq)
            assert type_of(seq, alphabet="abc").counts == tuple(int(c) for c in counts)


class TestPredicates:
    def test_exact_type_is_typical(self):
        P = FiniteDistribution(("0", "1"), [0.25, 0.75])
        assert is_typical_output("0111", P, 0.0)

    def test_n1_never_typical_at_04(self):
        assert not any(is_typical_output(y, U2, 0.4) for y in "01")

    def test_eps_one_always(self):
        assert all(is_typical_output("".join(y), U2, 1.0) for y in itertools.product("01", repeat=3))

    def test_exact_boundary_is_inclusive(self):
        # |1/4 - 1/2| = 1/4 exactly
        assert is_typical_output("0111", U2, 0.25)
        assert not is_typical_output("0111", U2, 0.2499999)

    def test_cond_exact_match(self):
        assert is_cond_typical("0101", "0101", Channel.identity("01"), 0.0)

    def test_cond_eps_one(self):
        assert is_cond_typical("0000", "1111", Channel.bsc(0.3), 1.0)

    def test_cond_deterministic_mismatch(self):
        assert not is_cond_typical("0001", "0000", Channel.identity("01"), 0.2)

    def test_in_AY_exact(self):
        W = Channel.bsc(0.2)
        assert in_AY(U2, W, U2, 0.0)

    def test_in_AY_large_eps(self):
        assert in_AY(FiniteDistribution(("0", "1"), [1.0, 0.0]), Channel.identity("01"), U2, 10.0)

    def test_in_AY_arithmetic(self):
        P = FiniteDistribution(("0", "1"), [0.8, 0.2])
        assert not in_AY(P, Channel.identity("01"), U2, 0.05)
        assert in_AY(P, Channel.identity("01"), U2, 0.08)

    def test_tolerance_helper(self):
        assert typical_tolerance(0.05, 3) == pytest.approx(0.15)


class TestTruncation:
    def _bern(self, p, n):
        P = FiniteDistribution.bernoulli(p)
        return P, product_distribution(ProductSpec(((P, Channel.identity("01")),), n))

    def test_everything_typical(self):
        _, Pn = self._bern(0.5, 3)
        out, tau = truncate_to_typical(Pn, U2, 1.0)
        assert tau == pytest.approx(1.0) and np.allclose(out.pmf, Pn.pmf)

    def test_degenerate(self):
        with pytest.raises(DegenerateTruncationError):
            truncate_to_typical(U2, U2, 0.1)

    def test_bernoulli_half_n2(self):
        _, Pn = self._bern(0.5, 2)
        out, tau = truncate_to_typical(Pn, U2, 0.0)
        assert tau == pytest.approx(0.5)
        np.testing.assert_allclose(out.pmf, [0, 0.5, 0.5, 0], atol=1e-15)

    def test_conditional_bound(self):
        P, Pn = self._bern(0.3, 6)
        out, tau = truncate_to_typical(Pn, P, 0.1)
        assert np.all(out.pmf <= Pn.pmf / tau + 1e-15)

    def test_wrong_alphabet(self):
        with pytest.raises(DomainError):
            truncate_to_typical(FiniteDistribution(("a", "b", "c"), [0.2, 0.3, 0.5]), U2, 0.1)

    def test_tau_matches_enumeration(self):
        P, Pn = self._bern(0.3, 8)
        _, tau = truncate_to_typical(Pn, P, 0.1)
        assert typical_set_probability(P, 8, 0.1) == pytest.approx(tau, abs=1e-12)

    def test_tau_grows_with_n(self):
        P = FiniteDistribution.bernoulli(0.3)
        taus = [typical_set_probability(P, n, 0.05) for n in (4, 8, 16, 32, 64, 128, 256)]
        # the lattice of types makes small n erratic; the trend toward 1 is what matters
        assert taus[-1] > 0.9 and taus[-1] > taus[0]
        assert taus[-1] == max(taus)


def test_iid_product_distance_matches_enumeration():
    P = FiniteDistribution(("a", "b", "c"), [0.2, 0.5, 0.3])
    Q = FiniteDistribution(("a", "b", "c"), [0.3, 0.3, 0.4])
    for n in (1, 2, 4):
        pn = qn = np.ones(1)
        for _ in range(n):
            pn, qn = np.kron(pn, P.pmf), np.kron(qn, Q.pmf)
        assert iid_product_distance(P, Q, n) == pytest.approx(0.5 * np.abs(pn - qn).sum(), abs=1e-13)
