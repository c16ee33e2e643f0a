"""Decay bounds for Walsh coefficients and the sweeps that check them.

Each ``bound_*`` function is a plain evaluator of ``(b, k, ...)``.
:func:`verify_sweep` pairs a bound with an independently computed
coefficient (the quadrature oracle, or a built W-function for the
weight-function bounds) and returns one :class:`BoundReport` per case.
"""

from __future__ import annotations

import functools
import itertools
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple

import numpy as np

from .badic import as_expansion, c_factor, c_limit, constants, mu, mu_alpha, mu_per
from .bernoulli import bernoulli
from .coefficients import coeff_formula_multi, coeff_quadrature, polynomial_coefficients_exact
from .functions import SmoothFunction, bernoulli_function, parse_function, product_function
from .wfunctions import build_W, build_W_extra


def ratio_tolerance() -> float:
    return float(os.environ.get("WALSHDECAY_RATIO_TOL", "1e-9"))


def zero_tolerance() -> float:
    return float(os.environ.get("WALSHDECAY_ZERO_TOL", "1e-11"))


def conjugate_exponent(p: float) -> float:
    if p < 1:
        raise ValueError("exponent must be >= 1")
    if p == 1:
        return math.inf
    if p == math.inf:
        return 1.0
    return p / (p - 1)


def _c(b: int, n: int, v: int, c_arg: str) -> float:
    if c_arg == "min":
        return c_factor(b, n)
    if c_arg == "v":
        return c_factor(b, v)
    raise ValueError(f"c_arg must be 'min' or 'v', got {c_arg!r}")


# weight-function bounds ------------------------------------------------


def bound_W_sup_base(b: int, k) -> float:
    """Bound on ``sup |W_k|`` over ``[0, b^-a_v]`` for ``b > 2``, ``k >= 1``."""
    e = as_expansion(b, k)
    if b == 2 or e.v == 0:
        raise ValueError("defined for b > 2 and k >= 1")
    c = constants(b)
    return b ** -mu(e) / c.m_b ** (e.v - 1) * b / (b - c.M_b) * (1 - (c.M_b / b) ** e.v)


def bound_W_sup(b: int, k) -> float:
    """Bound on ``||W_k||_inf``; exact value ``2^(-mu-v+min(1,v))`` when ``b = 2``."""
    e = as_expansion(b, k)
    v = e.v
    if b == 2:
        return 2.0 ** (-mu(e) - v + min(1, v))
    c = constants(b)
    return b ** -mu(e) / c.m_b**v * (c.M_b + c_factor(b, v)) ** min(1, v)


def bound_W_lq_dyadic(k, q: float) -> float:
    """``||W_k||_q <= 2^(-mu-v+(1-1/q) min(1,v))`` for b = 2, with equality at q = 1 and q = inf."""
    e = as_expansion(2, k)
    inv = 0.0 if q == math.inf else 1.0 / q
    return 2.0 ** (-mu(e) - e.v + (1 - inv) * min(1, e.v))


def bound_W_extra_centered(b: int, k, j: int) -> float:
    """Bound on ``||W^(j)_k - I^(j)(k)||_inf`` for ``k >= 1``."""
    e = as_expansion(b, k)
    if e.v == 0:
        raise ValueError("k must be positive")
    if b == 2:
        return 2.0 ** (-j * (e.av + 1) - mu(e) - e.v)
    c = constants(b)
    return b ** (-mu(e) - j * e.av) / c.m_b ** (e.v + j) * (1 + c_factor(b, e.v))


def bound_I_extra(b: int, k, j: int) -> float:
    """Bound on ``|I^(j)(k)|`` for ``k >= 1`` (the same value as the centred bound)."""
    return bound_W_extra_centered(b, k, j)


def bound_W_extra_sup(b: int, k, j: int) -> float:
    """Bound on ``||W^(j)_k||_inf`` for ``k >= 1``; ``j = 0`` falls back to :func:`bound_W_sup`."""
    e = as_expansion(b, k)
    if e.v == 0:
        raise ValueError("k must be positive")
    if j == 0:
        return bound_W_sup(b, e)
    if b == 2:
        return 2.0 ** (-j * (e.av + 1) - mu(e) - e.v + 1)
    c = constants(b)
    return b ** (-mu(e) - j * e.av) / c.m_b ** (e.v + j) * c.M_b * (1 + c_factor(b, e.v))


# coefficient bounds ------------------------------------------------------


def bound_smooth(b: int, k, alpha: int, norm_value: float, p: float = 1, c_arg: str = "min") -> float:
    """Bound on ``|fhat(k)|`` for ``f`` in ``C^alpha`` given ``||f^(min(alpha,v))||_{L^p}``.

    For ``b > 2`` only ``p = 1`` is available.  ``c_arg`` picks the argument
    of the growth factor: ``min(alpha, v)`` (default) or ``v`` (looser).
    """
    e = as_expansion(b, k)
    v = e.v
    n = min(alpha, v)
    if b == 2:
        inv = 0.0 if p == math.inf else 1.0 / p
        return norm_value * 2.0 ** (-mu_alpha(e, alpha) - n + min(1, v) * inv)
    if p != 1:
        raise ValueError("for b > 2 the smooth-function bound is stated for the L1 norm only (p = 1)")
    if v == 0:
        return float(norm_value)
    c = constants(b)
    return norm_value * b ** -mu_alpha(e, alpha) / c.m_b**n * (c.M_b + _c(b, n, v, c_arg))


def bound_smooth_multi(b: int, ks, alphas, norm_value: float, p: float = 1, c_arg: str = "min") -> float:
    """Product over coordinates of the univariate factors of :func:`bound_smooth`."""
    ks, alphas = list(ks), list(alphas)
    if len(ks) != len(alphas):
        raise ValueError("ks and alphas must have the same length")
    out = float(norm_value)
    for k, a in zip(ks, alphas):
        out *= bound_smooth(b, k, a, 1.0, p, c_arg)
    return out


def c_infinity_constant(b: int) -> float:
    if b == 2:
        return 2.0
    c = constants(b)
    return c.M_b + c_limit(b)


def bound_c_infty(b: int, ks, rates, D: float) -> float:
    """``D b^-mu(k) prod_j (r_j / m_b)^v(k_j) C_b^min(1, v(k_j))`` for ``C^inf`` integrands."""
    ks = [ks] if np.ndim(ks) == 0 and not isinstance(ks, (list, tuple)) else list(ks)
    rates = [rates] if np.ndim(rates) == 0 and not isinstance(rates, (list, tuple)) else list(rates)
    if len(ks) != len(rates):
        raise ValueError("ks and rates must have the same length")
    if D <= 0 or any(r <= 0 for r in rates):
        raise ValueError("D and all rates must be positive")
    c = constants(b)
    cb = c_infinity_constant(b)
    out = float(D)
    for k, r in zip(ks, rates):
        e = as_expansion(b, k)
        out *= float(b) ** -mu(e) * (r / c.m_b) ** e.v * cb ** min(1, e.v)
    return out


class BernoulliBound(NamedTuple):
    kind: str  # "exact-zero" or "bound"
    value: float


def bound_bernoulli(b: int, k, r: int) -> BernoulliBound:
    e = as_expansion(b, k)
    if e.v == 0 or r < 1:
        raise ValueError("need k >= 1 and r >= 1")
    v = e.v
    if r < v:
        return BernoulliBound("exact-zero", 0.0)
    if b == 2:
        if (r - v) % 2:
            return BernoulliBound("exact-zero", 0.0)
        return BernoulliBound("bound", 2.0 ** (-mu_per(e, r) - r))
    c = constants(b)
    return BernoulliBound("bound", b ** -mu_per(e, r) / c.m_b**r * (1 + c_factor(b, v)))


def bound_sobolev(b: int, k, alpha: int, integrals, l1_falpha: float) -> float:
    """Bound for ``f`` in the Sobolev space of smoothness ``alpha``.

    ``integrals[i] = int_0^1 f^(i)`` for ``i = 0..alpha``; ``l1_falpha = int |f^(alpha)|``.
    """
    e = as_expansion(b, k)
    if e.v == 0:
        raise ValueError("k must be positive")
    integrals = list(integrals)
    if len(integrals) < alpha + 1:
        raise ValueError("need int f^(i) for i = 0..alpha")
    v = e.v
    total = 0.0
    if b == 2:
        for i in range(v, alpha + 1):
            if (i - v) % 2 == 0:
                total += abs(integrals[i]) * 2.0 ** (-mu_per(e, i) - i)
        return total + l1_falpha * 2.0 ** (-mu_per(e, alpha) - (alpha - 1))
    c = constants(b)
    cv = c_factor(b, v)
    for i in range(v, alpha + 1):
        total += abs(integrals[i]) * b ** -mu_per(e, i) / c.m_b**i * (1 + cv)
    return total + l1_falpha * b ** -mu_per(e, alpha) / c.m_b**alpha * (c.M_b + cv)


def _q_sum(terms, q: float) -> float:
    if q == math.inf:
        return max(terms)
    return sum(t**q for t in terms) ** (1.0 / q)


def c_sob_constant(b: int, alpha: int, q: float) -> float:
    """Constant multiplying ``b^-mu_alpha(k) ||f||_{p,alpha}``; ``q = inf`` takes the max of the terms."""
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    if q < 1:
        raise ValueError("q must be >= 1")
    if b == 2:
        terms = [2.0**-i for i in range(1, alpha + 1)] + [2.0 ** -(alpha - 1)]
    else:
        c = constants(b)
        cl = c_limit(b)
        terms = [(1 + cl) / c.m_b**i for i in range(1, alpha + 1)] + [(c.M_b + cl) / c.m_b**alpha]
    return _q_sum(terms, q)


def f_norm_p_alpha(f: SmoothFunction, p: float, alpha: int) -> float:
    """``(sum_{i<=alpha} |int f^(i)|^p + int |f^(alpha)|^p)^(1/p)``; ``p = inf`` is the max of the parts."""
    parts = [abs(f.integral(i)) for i in range(alpha + 1)]
    if p == math.inf:
        return max(parts + [f.lp_norm(alpha, math.inf)])
    return (sum(t**p for t in parts) + f.lp_norm(alpha, p) ** p) ** (1.0 / p)


def bound_sobolev_simple(b: int, k, alpha: int, p: float, norm_value: float) -> float:
    """``b^-mu_alpha(k) C_{b,alpha,q} ||f||_{p,alpha}`` with ``1/p + 1/q = 1``."""
    e = as_expansion(b, k)
    q = conjugate_exponent(p)
    return float(b) ** -mu_alpha(e, alpha) * c_sob_constant(b, alpha, q) * norm_value


def bound_periodic(b: int, k, alpha: int, l1_falpha: float, integrals=None, tol: float = 1e-10) -> float:
    """Bound for the periodic subspace (``int f^(i) = 0`` for ``i < alpha``)."""
    e = as_expansion(b, k)
    if e.v == 0:
        raise ValueError("k must be positive")
    if integrals is not None:
        bad = [i for i in range(alpha) if abs(integrals[i]) > tol]
        if bad:
            raise ValueError(f"not in the periodic space: int f^({bad[0]}) = {integrals[bad[0]]!r}")
    if b == 2:
        return l1_falpha * 2.0 ** -mu_per(e, alpha) / 2.0 ** (alpha - 1)
    c = constants(b)
    return l1_falpha * b ** -mu_per(e, alpha) / c.m_b**alpha * c.M_b * (1 + c_factor(b, e.v))


# verification ------------------------------------------------------------


@dataclass(frozen=True)
class BoundReport:
    b: int
    k: object
    alpha: object
    theorem: str
    coeff: complex
    bound: float
    ratio: float
    passed: bool
    tolerance: float
    exact_zero: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def coeff_abs(self) -> float:
        return abs(self.coeff)


def make_report(b, k, alpha, theorem, coeff, bound, exact_zero=False, **meta) -> BoundReport:
    coeff = complex(coeff)
    mag = abs(coeff)
    if exact_zero:
        tol = zero_tolerance()
        passed = mag <= tol
        ratio = 0.0 if passed else math.inf
    else:
        tol = ratio_tolerance()
        ratio = mag / bound if bound > 0 else (0.0 if mag == 0 else math.inf)
        passed = ratio <= 1 + tol
    return BoundReport(b, k, alpha, theorem, coeff, float(bound), ratio, passed, tol, exact_zero, meta)


THEOREMS = (
    "smooth",
    "smooth-multi",
    "c-infinity",
    "bernoulli",
    "sobolev",
    "sobolev-norm",
    "periodic",
    "w-norm",
    "w-extra",
)


@dataclass(frozen=True)
class SweepConfig:
    """What to sweep.  ``ks`` overrides ``range(kmin, kmax)`` when given."""

    theorem: str
    b: int = 2
    kmax: int = 16
    kmin: int = 0
    ks: tuple | None = None
    alphas: tuple[int, ...] = (1, 2, 3)
    family: tuple[str, ...] = ("exp:1",)
    p: float = 1.0
    q: float = 1.0
    rmax: int = 8
    jmax: int = 4
    dim: int | None = None  # 2 for smooth-multi, 1 otherwise
    c_arg: str = "min"
    nodes: int = 16
    workers: int = 1


def _k_list(cfg: SweepConfig, positive: bool) -> list:
    ks = list(cfg.ks) if cfg.ks is not None else list(range(cfg.kmin, cfg.kmax))
    if positive:
        ks = [k for k in ks if (k if np.ndim(k) == 0 else max(k)) > 0]
    return ks


def _exp_rate(f: SmoothFunction) -> float:
    name, _, lam = f.name.partition(":")
    if name != "exp":
        raise ValueError("the C-infinity sweep supports exp:lambda integrands only")
    return float(lam)


@functools.lru_cache(maxsize=None)
def _bernoulli_exact(b: int, r: int, G: int) -> np.ndarray:
    return polynomial_coefficients_exact(bernoulli(r).b, b, G)


def _bernoulli_oracle(b: int, e, r: int) -> complex:
    # exact rational cell integrals: float quadrature cannot resolve the
    # smallest coefficients, which sit far below double-precision cancellation
    return complex(_bernoulli_exact(b, r, max(e.a1, 1))[e.k])


def _sweep_one(cfg: SweepConfig, k, fams) -> list[BoundReport]:
    b = cfg.b
    out: list[BoundReport] = []
    th = cfg.theorem
    if th == "smooth":
        e = as_expansion(b, k)
        for f in fams:
            coeff = coeff_quadrature(f, b, e, cfg.nodes).value
            for a in cfg.alphas:
                n = min(a, e.v)
                bound = bound_smooth(b, e, a, f.lp_norm(n, cfg.p), cfg.p, cfg.c_arg)
                out.append(make_report(b, e.k, a, th, coeff, bound, function=f.name, p=cfg.p, c_arg=cfg.c_arg))
    elif th == "smooth-multi":
        for f in fams:
            coeff = coeff_formula_multi(f, b, k, [0] * len(k), cfg.nodes).value
            for a in cfg.alphas:
                alphas = [a] * len(k)
                ns = [min(a, as_expansion(b, kj).v) for kj in k]
                bound = bound_smooth_multi(b, k, alphas, f.lp_norm(ns, cfg.p), cfg.p, cfg.c_arg)
                name = "&".join(g.name for g in f.factors)
                out.append(make_report(b, tuple(k), a, th, coeff, bound, function=name, p=cfg.p))
    elif th == "c-infinity":
        ks = [k] if np.ndim(k) == 0 else list(k)
        for f in fams:
            factors = f.factors if hasattr(f, "factors") else (f,)
            if hasattr(f, "factors"):
                coeff = coeff_formula_multi(f, b, ks, [0] * len(ks), cfg.nodes).value
            else:
                coeff = coeff_quadrature(f, b, ks[0], cfg.nodes).value
            rates = [_exp_rate(g) for g in factors]
            D = math.prod((math.exp(r) - 1) / r for r in rates)
            bound = bound_c_infty(b, ks, rates, D)
            key = ks[0] if len(ks) == 1 else tuple(ks)
            name = "&".join(g.name for g in factors)
            out.append(make_report(b, key, None, th, coeff, bound, function=name, D=D))
    elif th == "bernoulli":
        e = as_expansion(b, k)
        for r in range(1, cfg.rmax + 1):
            coeff = _bernoulli_oracle(b, e, r)
            kind, value = bound_bernoulli(b, e, r)
            out.append(make_report(b, e.k, r, th, coeff, value, exact_zero=kind == "exact-zero", function=f"bernoulli:{r}"))
    elif th == "sobolev":
        e = as_expansion(b, k)
        for f in fams:
            coeff = coeff_quadrature(f, b, e, cfg.nodes).value
            for a in cfg.alphas:
                ints = [f.integral(i) for i in range(a + 1)]
                bound = bound_sobolev(b, e, a, ints, f.lp_norm(a, 1))
                out.append(make_report(b, e.k, a, th, coeff, bound, function=f.name))
    elif th == "sobolev-norm":
        e = as_expansion(b, k)
        p = conjugate_exponent(cfg.q)
        for f in fams:
            coeff = coeff_quadrature(f, b, e, cfg.nodes).value
            for a in cfg.alphas:
                bound = bound_sobolev_simple(b, e, a, p, f_norm_p_alpha(f, p, a))
                out.append(make_report(b, e.k, a, th, coeff, bound, function=f.name, q=cfg.q))
    elif th == "periodic":
        e = as_expansion(b, k)
        for a in cfg.alphas:
            candidates = fams or (bernoulli_function(a),)
            for f in candidates:
                ints = [f.integral(i) for i in range(a)]
                coeff = coeff_quadrature(f, b, e, cfg.nodes).value
                bound = bound_periodic(b, e, a, f.lp_norm(a, 1), ints)
                out.append(make_report(b, e.k, a, th, coeff, bound, function=f.name))
    elif th == "w-norm":
        e = as_expansion(b, k)
        w = build_W(b, e)
        sup = w.poly.norm(math.inf)
        if b == 2:
            l1 = w.poly.norm(1)
            out.append(make_report(b, e.k, None, th, l1, bound_W_lq_dyadic(e, 1), quantity="L1"))
            out.append(make_report(b, e.k, None, th, sup, bound_W_lq_dyadic(e, math.inf), quantity="Linf"))
            out.append(make_report(b, e.k, None, th, w.poly.norm(2), bound_W_lq_dyadic(e, 2), quantity="L2"))
        else:
            base_sup = w.poly.sup_norm(stop=b ** (e.a1 - e.av))
            out.append(make_report(b, e.k, None, th, base_sup, bound_W_sup_base(b, e), quantity="sup-base"))
            out.append(make_report(b, e.k, None, th, sup, bound_W_sup(b, e), quantity="Linf"))
    elif th == "w-extra":
        e = as_expansion(b, k)
        for j in range(cfg.jmax + 1):
            w = build_W_extra(b, e, j)
            out.append(make_report(b, e.k, j, th, w.centered().norm(math.inf), bound_W_extra_centered(b, e, j), quantity="centered-sup"))
            if b == 2 and j % 2 == 1:
                out.append(make_report(b, e.k, j, th, w.integral, 0.0, exact_zero=True, quantity="integral-zero"))
            else:
                out.append(make_report(b, e.k, j, th, w.integral, bound_I_extra(b, e, j), quantity="integral"))
            out.append(make_report(b, e.k, j, th, w.poly.norm(math.inf), bound_W_extra_sup(b, e, j), quantity="sup"))
    else:
        raise ValueError(f"unknown theorem tag {th!r}; choose from {', '.join(THEOREMS)}")
    return out


def _dim(cfg: SweepConfig) -> int:
    if cfg.dim is not None:
        return cfg.dim
    return 2 if cfg.theorem == "smooth-multi" else 1


def _families(cfg: SweepConfig):
    th = cfg.theorem
    if th in ("bernoulli", "w-norm", "w-extra"):
        return ()
    if th == "periodic" and not cfg.family:
        return ()
    fams = []
    for spec in cfg.family:
        if th == "smooth-multi" or (th == "c-infinity" and _dim(cfg) > 1):
            parts = spec.split("&")
            if len(parts) == 1:
                parts = parts * _dim(cfg)
            fams.append(product_function(*[parse_function(s) for s in parts]))
        else:
            fams.append(parse_function(spec))
    return tuple(fams)


def verify_sweep(cfg: SweepConfig) -> list[BoundReport]:
    """Run one sweep; reports come back in ``k`` order regardless of ``workers``."""
    if cfg.theorem not in THEOREMS:
        raise ValueError(f"unknown theorem tag {cfg.theorem!r}; choose from {', '.join(THEOREMS)}")
    positive = cfg.theorem in ("bernoulli", "sobolev", "sobolev-norm", "periodic", "w-norm", "w-extra")
    ks = _k_list(cfg, positive)
    multi = cfg.theorem == "smooth-multi" or (cfg.theorem == "c-infinity" and _dim(cfg) > 1)
    if multi and cfg.ks is None:
        ks = [tuple(t) for t in itertools.product(range(cfg.kmin, cfg.kmax), repeat=_dim(cfg))]
    fams = _families(cfg)
    if cfg.workers > 1 and len(ks) > 1:
        with ThreadPoolExecutor(max_workers=cfg.workers) as pool:
            chunks = list(pool.map(lambda k: _sweep_one(cfg, k, fams), ks))
    else:
        chunks = [_sweep_one(cfg, k, fams) for k in ks]
    return [r for chunk in chunks for r in chunk]


def summarize(reports) -> dict:
    reports = list(reports)
    finite = [r.ratio for r in reports if not r.exact_zero]
    zeros = [abs(r.coeff) for r in reports if r.exact_zero]
    return {
        "count": len(reports),
        "failed": sum(not r.passed for r in reports),
        "passed": all(r.passed for r in reports),
        "max_ratio": max(finite) if finite else 0.0,
        "max_zero_residual": max(zeros) if zeros else 0.0,
    }
