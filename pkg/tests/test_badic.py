import cmath
import math

import pytest

from walshdecay.badic import (
    c_factor,
    c_limit,
    constants,
    drop_smallest,
    expand,
    mu,
    mu_alpha,
    mu_per,
    omega_pow,
    tail_high,
    truncate_low,
)


class TestExpand:
    def test_zero(self):
        e = expand(2, 0)
        assert e.digits == ()
        assert e.v == 0
        assert e.a1 == 0

    def test_examples(self):
        assert expand(2, 5).digits == ((1, 3), (1, 1))
        assert expand(3, 7).digits == ((2, 2), (1, 1))
        assert expand(3, 7).v == 2

    def test_reconstruct(self):
        for b in (2, 3, 5, 10):
            for k in range(0, 2000, 7):
                assert expand(b, k).reconstruct() == k

    @pytest.mark.parametrize("b,k", [(1, 3), (0, 0), (2, -1), (2, 2**64)])
    def test_rejects(self, b, k):
        with pytest.raises(ValueError):
            expand(b, k)


class TestTruncation:
    def test_drop_smallest(self):
        assert drop_smallest(expand(2, 5)).k == 4
        assert drop_smallest(expand(3, 7)).k == 6
        assert drop_smallest(expand(2, 4)).k == 0
        with pytest.raises(ValueError):
            drop_smallest(expand(2, 0))

    @pytest.mark.parametrize("n,low,high", [(0, 0, 5), (1, 4, 1), (7, 5, 0)])
    def test_split(self, n, low, high):
        e = expand(2, 5)
        assert truncate_low(e, n).k == low
        assert tail_high(e, n).k == high


class TestMu:
    def test_mu(self):
        assert mu(expand(2, 0)) == 0
        assert mu(expand(2, 5)) == 4
        assert mu(expand(3, 7)) == 3

    def test_mu_alpha(self):
        assert mu_alpha(expand(2, 5), 1) == 3
        assert mu_alpha(expand(2, 5), 2) == 4
        assert mu_alpha(expand(2, 0), 3) == 0

    def test_mu_per(self):
        assert mu_per(expand(2, 4), 3) == 9
        assert mu_per(expand(2, 5), 2) == 4
        assert mu_per(expand(2, 0), 5) == 0
        # v > alpha falls back to mu_alpha
        assert mu_per(expand(2, 7), 2) == mu_alpha(expand(2, 7), 2) == 5

    def test_alpha_must_be_positive(self):
        with pytest.raises(ValueError):
            mu_alpha(expand(2, 5), 0)


class TestConstants:
    def test_values(self):
        assert constants(2).m_b == pytest.approx(2.0)
        assert constants(2).M_b == 2.0
        assert constants(3).m_b == pytest.approx(math.sqrt(3))
        assert constants(3).M_b == pytest.approx(math.sqrt(3))
        assert constants(4).m_b == pytest.approx(math.sqrt(2))
        assert constants(4).M_b == 2.0

    @pytest.mark.parametrize("b", range(2, 65))
    def test_enumeration(self, b):
        c = constants(b)
        dists = [abs(1 - cmath.exp(-2j * math.pi * j / b)) for j in range(1, b)]
        assert abs(min(dists) - c.m_b) <= 1e-12
        assert abs(max(dists) - c.M_b) <= 1e-12
        assert abs(c.omega**b - 1) <= 1e-12
        if b >= 3:
            assert b - c.M_b > 0

    def test_omega_pow_exact_quarters(self):
        assert omega_pow(4, 1) == 1j
        assert omega_pow(2, 1) == -1
        assert omega_pow(4, -1) == -1j


class TestCFactor:
    def test_examples(self):
        assert c_factor(3, 0) == 0.0
        assert c_factor(3, 1) == pytest.approx(math.sqrt(3), abs=1e-12)

    def test_b5_n2_by_enumeration(self):
        dists = [abs(1 - cmath.exp(-2j * math.pi * j / 5)) for j in range(1, 5)]
        m, M = min(dists), max(dists)
        assert c_factor(5, 2) == pytest.approx(5 * m / (5 - M) * (1 - (M / 5) ** 2), rel=1e-14)

    def test_monotone_and_limit(self):
        for b in (3, 5, 7, 10):
            vals = [c_factor(b, n) for n in range(40)]
            assert all(x <= y for x, y in zip(vals, vals[1:]))
            assert vals[-1] <= c_limit(b)
            assert c_factor(b, 400) == pytest.approx(c_limit(b))

    def test_rejects_base_two(self):
        with pytest.raises(ValueError):
            c_factor(2, 1)
        with pytest.raises(ValueError):
            c_limit(2)
