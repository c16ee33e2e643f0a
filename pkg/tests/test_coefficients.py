import math

import numpy as np
import pytest

from walshdecay.badic import expand
from walshdecay.bernoulli import bernoulli, walsh_coeff_bernoulli
from walshdecay.coefficients import (
    coeff_formula,
    coeff_formula_multi,
    coeff_higher_order,
    coeff_quadrature,
    coeff_sobolev,
    h1_kernel_integral,
    polynomial_coefficients_exact,
    walsh_partial_sum,
)
from walshdecay.functions import bernoulli_function, exp_function, parse_function, product_function, truncated_power
from walshdecay.wfunctions import sobolev_weight


class TestQuadrature:
    def test_k_zero_is_mean(self):
        assert coeff_quadrature(exp_function(1.0), 2, 0).value == pytest.approx(math.e - 1)

    def test_bernoulli_one(self):
        assert coeff_quadrature(bernoulli_function(1), 2, 1).value == pytest.approx(-0.25)

    def test_exp_k1_closed_form(self):
        # int_0^1/2 e^x - int_1/2^1 e^x
        expected = 2 * math.exp(0.5) - 1 - math.e
        assert coeff_quadrature(exp_function(1.0), 2, 1).value == pytest.approx(expected, abs=1e-15)


class TestRoutes:
    @pytest.mark.parametrize("spec", ["exp:1", "sin:1,1", "bernoulli:5"])
    @pytest.mark.parametrize("b", [2, 3])
    def test_all_routes_agree(self, spec, b):
        f = parse_function(spec)
        for k in range(1, b**3):
            ref = coeff_quadrature(f, b, k).value
            tol = 1e-10 * max(1.0, abs(ref))
            v = expand(b, k).v
            for n in range(v + 1):
                assert abs(coeff_formula(f, b, k, n).value - ref) <= tol
            for r in range(3):
                assert abs(coeff_higher_order(f, b, k, r).value - ref) <= tol
            for alpha in (1, 2, 3):
                assert abs(coeff_sobolev(f, b, k, alpha).value - ref) <= tol

    def test_formula_examples(self):
        # f = b_2, k = 1: -int b_1 W_1 = 0
        assert abs(coeff_formula(bernoulli_function(2), 2, 1, 1).value) <= 1e-15
        r = coeff_higher_order(bernoulli_function(4), 2, 1, 3).value
        assert r == pytest.approx(walsh_coeff_bernoulli(2, 1, 4), abs=1e-16)

    def test_sobolev_on_nonsmooth(self):
        # (x - 0.3)_+^2 has a jump in its second derivative
        f = truncated_power(2, 0.3)
        for k in range(1, 27):
            ref = coeff_quadrature(f, 3, k).value
            res = coeff_sobolev(f, 3, k, 2)
            assert abs(res.value - ref) <= 1e-12
        assert coeff_sobolev(f, 3, 3, 2).params["branch"] == "alpha>=v"
        assert coeff_sobolev(f, 3, 13, 1).params["branch"] == "alpha<v"

    def test_argument_checks(self):
        f = exp_function(1.0)
        with pytest.raises(ValueError):
            coeff_formula(f, 2, 3, 3)
        with pytest.raises(ValueError):
            coeff_higher_order(truncated_power(2, 0.5), 2, 3, 1)
        with pytest.raises(ValueError):
            coeff_sobolev(f, 2, 3, 0)


class TestExactOracle:
    @pytest.mark.parametrize("b,G", [(2, 6), (3, 4), (4, 3), (5, 3)])
    def test_matches_closed_form(self, b, G):
        for r in (1, 2, 5):
            ex = polynomial_coefficients_exact(bernoulli(r).b, b, G)
            for k in range(1, b**G):
                assert abs(ex[k] - walsh_coeff_bernoulli(b, k, r)) <= 1e-14

    def test_constant(self):
        ex = polynomial_coefficients_exact([1], 3, 2)
        assert ex[0] == 1
        assert np.max(np.abs(ex[1:])) == 0


class TestMultivariate:
    def test_product_factorizes(self):
        f1, f2 = exp_function(1.0), parse_function("sin:1,0.5")
        f = product_function(f1, f2)
        for ks in ((1, 2), (3, 0), (5, 6)):
            ref = coeff_quadrature(f1, 2, ks[0]).value * coeff_quadrature(f2, 2, ks[1]).value
            for ns in ((0, 0), (1, 0), (expand(2, ks[0]).v, expand(2, ks[1]).v)):
                assert abs(coeff_formula_multi(f, 2, ks, ns).value - ref) <= 1e-12

    def test_dimension_checks(self):
        f = product_function(exp_function(1.0), exp_function(1.0))
        with pytest.raises(ValueError):
            coeff_formula_multi(f, 2, [1], [0])


class TestKernelIntegral:
    @pytest.mark.parametrize("b", [2, 3])
    def test_h1_equals_weight(self, b, rng):
        x = rng.random(20)
        for k in range(1, b**3):
            for alpha in (1, 2, 3):
                diff = h1_kernel_integral(b, k, alpha, x) - sobolev_weight(b, k, alpha)(x)
                assert np.max(np.abs(diff)) <= 1e-7


class TestPartialSum:
    def test_converges_on_cells(self):
        f = exp_function(1.0)
        x = np.array([0.1, 0.4, 0.9])
        approx = walsh_partial_sum(f, 2, 6, x)
        # the partial sum is the cell average of f
        m = np.floor(x * 64)
        avg = (np.exp((m + 1) / 64) - np.exp(m / 64)) * 64
        np.testing.assert_allclose(approx, avg, atol=1e-12)
