import math
from fractions import Fraction

import numpy as np
import pytest

from walshdecay.bernoulli import (
    b,
    b_tilde,
    bernoulli,
    bernoulli_numbers,
    kernel,
    kernel_per,
    walsh_coeff_bernoulli,
)
from walshdecay.piecewise import gauss_legendre


class TestPolynomials:
    def test_numbers(self):
        B = bernoulli_numbers(8)
        assert B[:5] == (Fraction(1), Fraction(-1, 2), Fraction(1, 6), Fraction(0), Fraction(-1, 30))
        assert B[6] == Fraction(1, 42)

    def test_low_degrees(self):
        x = np.linspace(0, 1, 11)
        np.testing.assert_allclose(b(1, x), x - 0.5)
        np.testing.assert_allclose(b(2, x), (x**2 - x + 1 / 6) / 2)
        np.testing.assert_array_equal(b(-1, x), 0)

    @pytest.mark.parametrize("r", range(1, 12))
    def test_derivative_and_mean(self, r):
        p, q = bernoulli(r), bernoulli(r - 1)
        assert p.derivative_coeffs() == q.b
        assert p.integral_exact() == 0

    def test_large_degree_stable(self):
        # exact rational generation keeps b_24(0) = B_24 / 24!
        p = bernoulli(24)
        assert p.eval_exact(Fraction(0)) == bernoulli_numbers(24)[24] / math.factorial(24)

    def test_degree_cap(self):
        with pytest.raises(ValueError):
            bernoulli(31)
        with pytest.raises(ValueError):
            bernoulli(-1)


class TestKernels:
    def test_b_tilde_sign(self):
        assert b_tilde(1, 0.2, 0.7) == pytest.approx(-b(1, 0.5))
        assert b_tilde(2, 0.2, 0.7) == pytest.approx(b(2, 0.5))

    def test_symmetry(self, rng):
        x, y = rng.random(50), rng.random(50)
        for a in (1, 2, 3):
            np.testing.assert_allclose(kernel(a, x, y), kernel(a, y, x), atol=1e-15)
            np.testing.assert_allclose(kernel_per(a, x, y), kernel_per(a, y, x), atol=1e-15)

    @pytest.mark.parametrize("alpha", [1, 2, 3])
    def test_reproduces_exp(self, alpha):
        # <f, K(., y)> = sum_{i<alpha} int f^(i) int d^i K + int f^(alpha) d^alpha K
        xg, wg = gauss_legendre(20)
        edges = np.linspace(0, 1, 65)
        for y in (0.13, 0.5, 0.91):
            cuts = np.union1d(edges, [y])
            x = (cuts[:-1, None] + np.diff(cuts)[:, None] * xg).ravel()
            w = (np.diff(cuts)[:, None] * wg).ravel()

            def dK(i):
                out = sum(b(j - i, x) * b(j, y) for j in range(alpha + 1))
                return out - (-1) ** alpha * b_tilde(2 * alpha - i, x, y)

            total = sum((np.e - 1) * np.sum(w * dK(i)) for i in range(alpha))
            total += np.sum(w * np.exp(x) * dK(alpha))
            assert total == pytest.approx(np.exp(y), abs=1e-12)


class TestWalshCoefficients:
    def test_known(self):
        assert walsh_coeff_bernoulli(2, 1, 1) == pytest.approx(-0.25)
        assert walsh_coeff_bernoulli(2, 1, 2) == 0
        assert walsh_coeff_bernoulli(2, 3, 1) == 0

    def test_rejects(self):
        with pytest.raises(ValueError):
            walsh_coeff_bernoulli(2, 0, 2)
        with pytest.raises(ValueError):
            walsh_coeff_bernoulli(2, 1, 0)
