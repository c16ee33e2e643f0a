import math

import pytest

from walshdecay.badic import c_factor, constants, expand
from walshdecay.bounds import (
    SweepConfig,
    bound_bernoulli,
    bound_c_infty,
    bound_periodic,
    bound_smooth,
    bound_smooth_multi,
    bound_sobolev,
    bound_W_lq_dyadic,
    bound_W_sup,
    c_sob_constant,
    conjugate_exponent,
    f_norm_p_alpha,
    make_report,
    summarize,
    verify_sweep,
)
from walshdecay.functions import bernoulli_function, exp_function


class TestEvaluators:
    def test_smooth_dyadic(self):
        # b=2, k=1, alpha=1, p=1: 2^(-1-1+1)
        assert bound_smooth(2, 1, 1, 1.0) == pytest.approx(0.5)

    def test_smooth_non_dyadic_needs_p1(self):
        with pytest.raises(ValueError, match="L1 norm only"):
            bound_smooth(3, 1, 1, 1.0, p=2)

    def test_c_arg(self):
        tight = bound_smooth(3, expand(3, 13), 1, 1.0)
        loose = bound_smooth(3, expand(3, 13), 1, 1.0, c_arg="v")
        assert tight <= loose
        with pytest.raises(ValueError):
            bound_smooth(3, 13, 1, 1.0, c_arg="x")

    def test_multi_is_product(self):
        assert bound_smooth_multi(2, [1, 2], [1, 1], 2.0) == pytest.approx(2.0 * 0.5 * 0.25)
        with pytest.raises(ValueError):
            bound_smooth_multi(2, [1], [1, 2], 1.0)

    def test_c_infty(self):
        assert bound_c_infty(2, 0, 1.0, 3.0) == 3.0
        assert bound_c_infty(2, 1, 1.0, 1.0) == pytest.approx(2.0**-1 * 0.5 * 2)
        with pytest.raises(ValueError):
            bound_c_infty(2, 1, -1.0, 1.0)

    def test_bernoulli_branches(self):
        assert bound_bernoulli(2, 3, 1).kind == "exact-zero"
        assert bound_bernoulli(2, 1, 2).kind == "exact-zero"
        kind, value = bound_bernoulli(2, 1, 3)
        assert kind == "bound" and value == pytest.approx(1 / 64)
        kind, value = bound_bernoulli(3, 1, 1)
        c = constants(3)
        assert value == pytest.approx(3**-1 / c.m_b * (1 + c_factor(3, 1)))

    def test_sobolev_b3_alpha1(self):
        c = constants(3)
        cv = c_factor(3, 1)
        got = bound_sobolev(3, 1, 1, [0.0, 2.0], 5.0)
        want = 2.0 * 3**-1 / c.m_b * (1 + cv) + 5.0 * 3**-1 / c.m_b * (c.M_b + cv)
        assert got == pytest.approx(want)

    def test_sobolev_empty_sum(self):
        # v = 3 > alpha = 1: only the tail term
        assert bound_sobolev(2, 7, 1, [9.0, 9.0], 1.0) == pytest.approx(2.0**-3)

    def test_c_sob_constant(self):
        assert c_sob_constant(2, 1, 1) == pytest.approx(1.5)
        assert c_sob_constant(2, 2, math.inf) == pytest.approx(0.5)

    def test_norm_p_alpha_of_b1(self):
        assert f_norm_p_alpha(bernoulli_function(1), 1, 1) == pytest.approx(2.0)

    def test_periodic(self):
        assert bound_periodic(2, 1, 1, 1.0) == pytest.approx(0.5)
        with pytest.raises(ValueError, match="periodic"):
            bound_periodic(2, 1, 2, 1.0, integrals=[0.0, 1.0])

    def test_conjugate_exponent(self):
        assert conjugate_exponent(1) == math.inf
        assert conjugate_exponent(math.inf) == 1
        assert conjugate_exponent(2) == 2

    def test_W_bounds(self):
        assert bound_W_sup(2, 1) == pytest.approx(0.5)
        assert bound_W_lq_dyadic(1, 1) == pytest.approx(0.25)

    @pytest.mark.parametrize("b", [2, 3, 5])
    def test_nonnegative_and_monotone(self, b):
        # raising a_1 never increases the bound
        for k in range(1, b**3):
            e = expand(b, k)
            shifted = k + (b - 1) * b ** (e.a1 + 1)
            for a in (1, 2, 3):
                lo = bound_smooth(b, shifted, a, 1.0)
                hi = bound_smooth(b, k, a, 1.0)
                assert 0 <= lo <= hi * (1 + 1e-12) or expand(b, shifted).v > e.v


class TestReports:
    def test_ratio(self):
        r = make_report(2, 1, 1, "smooth", -0.25, 0.5)
        assert r.ratio == pytest.approx(0.5) and r.passed

    def test_exact_zero(self):
        assert make_report(2, 3, 1, "bernoulli", 1e-13, 0.0, exact_zero=True).passed
        assert not make_report(2, 3, 1, "bernoulli", 1e-6, 0.0, exact_zero=True).passed

    def test_env_override(self, monkeypatch):
        monkeypatch.setenv("WALSHDECAY_RATIO_TOL", "0.5")
        assert make_report(2, 1, 1, "smooth", 1.4, 1.0).passed


class TestSweeps:
    def test_unknown_tag(self):
        with pytest.raises(ValueError):
            verify_sweep(SweepConfig("nope"))

    def test_empty_range(self):
        assert verify_sweep(SweepConfig("smooth", kmin=5, kmax=5)) == []

    def test_sorted_and_deterministic(self):
        cfg = SweepConfig("smooth", b=3, kmax=27, workers=4)
        a, b = verify_sweep(cfg), verify_sweep(cfg)
        assert [r.k for r in a] == sorted(r.k for r in a)
        assert [(r.k, r.ratio) for r in a] == [(r.k, r.ratio) for r in b]

    @pytest.mark.parametrize(
        "cfg",
        [
            SweepConfig("smooth", b=3, kmax=3**5, family=("exp:1", "sin:1,1", "bernoulli:5")),
            SweepConfig("smooth", b=3, kmax=3**4, c_arg="v"),
            SweepConfig("c-infinity", b=2, kmax=2**6, family=("exp:2",)),
            SweepConfig("bernoulli", b=3, kmax=3**4),
            SweepConfig("periodic", b=3, kmax=3**3, alphas=(1, 2, 3, 4), family=()),
            SweepConfig("w-extra", b=3, kmax=3**3, jmax=2),
        ],
        ids=lambda c: f"{c.theorem}-b{c.b}",
    )
    def test_passes(self, cfg):
        s = summarize(verify_sweep(cfg))
        assert s["passed"], s
        assert s["count"] > 0

    def test_smooth_probe_is_tight(self):
        # k = 0 attains the bound for any integrand: |fhat(0)| = |int f| <= ||f||_1
        reports = verify_sweep(SweepConfig("smooth", b=2, kmax=1, family=("exp:1",)))
        assert reports[0].ratio == pytest.approx(1.0)
