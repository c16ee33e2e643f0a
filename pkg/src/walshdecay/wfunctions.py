"""The weight functions W_k and W^(j)_k and their integral values.

``W_k`` is the ``v``-fold antiderivative of ``conj(wal_k)``; equivalently it is
built digit by digit, starting from the highest frequency and integrating
against one more Walsh factor at each step.  ``W^(j)_k`` integrates the
centred function ``W^(j-1)_k - I^(j-1)(k)`` once more.  All of them are
exact piecewise polynomials on the grid of resolution ``a_1``.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .badic import (
    KExpansion,
    as_expansion,
    mu,
    omega_pow,
    tail_high,
    truncate_low,
)
from .piecewise import PiecewisePoly
from .walsh import wal_conj_cells

# b^a_1 cells per object; matches a_1 <= 14 (b=2), 9 (b=3), 6 (b=5)
MAX_CELLS = 20000


class ResolutionError(ValueError):
    """The grid needed for this k is too large to build."""


@dataclass(frozen=True, eq=False)
class WFunction:
    expansion: KExpansion
    j: int
    poly: PiecewisePoly
    integral: complex

    @property
    def base(self) -> int:
        return self.expansion.base

    @property
    def k(self) -> int:
        return self.expansion.k

    def __call__(self, x):
        return self.poly(x)

    def centered(self) -> PiecewisePoly:
        return self.poly - self.integral


def _check_size(e: KExpansion) -> None:
    if e.base**e.a1 > MAX_CELLS:
        raise ResolutionError(
            f"k={e.k} in base {e.base} needs {e.base}**{e.a1} cells (cap {MAX_CELLS})"
        )


def _antiderivative_route(e: KExpansion) -> PiecewisePoly:
    p = wal_conj_cells(e.base, e)
    for _ in range(e.v):
        p = p.antiderivative()
    return p


def _recursive_route(e: KExpansion) -> PiecewisePoly:
    b = e.base
    p = PiecewisePoly.constant(b, 1.0)
    for kappa, a in e.digits:
        factor = wal_conj_cells(b, kappa * b ** (a - 1))
        p = (factor * p).antiderivative()
    return p.refine(max(e.a1, p.resolution))


def build_W(b: int, k, method: str = "antiderivative") -> WFunction:
    """Build ``W_k`` (``j = 0``).

    ``method="antiderivative"`` integrates ``conj(wal_k)`` ``v`` times;
    ``method="recursive"`` integrates one Walsh factor per digit, smallest
    frequency last.
    """
    e = as_expansion(b, k)
    _check_size(e)
    if method == "antiderivative":
        poly = _antiderivative_route(e)
    elif method == "recursive":
        poly = _recursive_route(e)
    else:
        raise ValueError(f"unknown method {method!r}")
    return WFunction(e, 0, poly, poly.definite_integral())


@functools.lru_cache(maxsize=1024)
def _extra_cached(b: int, k: int, j: int) -> WFunction:
    if j == 0:
        return build_W(b, k)
    prev = _extra_cached(b, k, j - 1)
    poly = (prev.poly - prev.integral).antiderivative()
    return WFunction(prev.expansion, j, poly, poly.definite_integral())


def build_W_extra(b: int, k, j: int) -> WFunction:
    """Build ``W^(j)_k``; ``j = 0`` is ``W_k``.

    Results are memoized (the cache is safe to share between threads).
    """
    if j < 0:
        raise ValueError("j must be nonnegative")
    e = as_expansion(b, k)
    _check_size(e)
    return _extra_cached(b, e.k, j)


def I_extra(b: int, k, j: int) -> complex:
    """``I^(j)(k)``, the integral of ``W^(j)_k`` over [0, 1]."""
    return build_W_extra(b, k, j).integral


def I_extra_quotient(b: int, k, j: int) -> complex:
    """``W^(j)_k(b^-a_v) / (1 - conj(omega)^kappa_v)``, an independent route to ``I^(j)(k)``."""
    e = as_expansion(b, k)
    if e.v == 0:
        raise ValueError("the quotient identity needs k >= 1")
    w = build_W_extra(b, e, j)
    return w(float(b) ** -e.av) / (1 - omega_pow(b, -e.kappa_v))


def I_closed_form(b: int, k) -> complex:
    """``I(k) = b^-mu(k) / prod_i (1 - conj(omega)^kappa_i)``."""
    e = as_expansion(b, k)
    denom = 1 + 0j
    for kappa in e.kappas:
        denom *= 1 - omega_pow(b, -kappa)
    return float(b) ** -mu(e) / denom


def W_at_base_closed_form(b: int, k) -> complex:
    """``W_k(b^-a_v)``: as :func:`I_closed_form` but without the last factor."""
    e = as_expansion(b, k)
    if e.v == 0:
        raise ValueError("W_k(b^-a_v) needs k >= 1")
    denom = 1 + 0j
    for kappa in e.kappas[:-1]:
        denom *= 1 - omega_pow(b, -kappa)
    return float(b) ** -mu(e) / denom


def eval_W_fast(b: int, k, x, w: WFunction | None = None):
    """Evaluate ``W_k`` from its piece on ``[0, b^-a_v]`` and the closed-form ``I(k)``.

    Writes ``x = c b^-a_v + x'`` and uses
    ``W_k(x) = (1 - conj(omega)^(c kappa_v)) I(k) + conj(omega)^(c kappa_v) W_k(x')``.
    """
    e = as_expansion(b, k)
    if e.v == 0:
        raise ValueError("eval_W_fast needs k >= 1")
    w = build_W(b, e) if w is None else w
    scalar = np.ndim(x) == 0
    x = np.atleast_1d(np.asarray(x, dtype=float))
    if np.any((x < 0) | (x > 1)):
        raise ValueError("x must lie in [0, 1]")
    period = float(b) ** -e.av
    c = np.floor(x / period).astype(np.int64)
    xp = x - c * period
    # float rounding can leave x' a hair past the period
    over = xp >= period
    c[over] += 1
    xp[over] -= period
    xp = np.clip(xp, 0.0, period)
    base_cells = b ** (e.a1 - e.av)
    h = w.poly.h
    m = np.minimum(np.floor(xp / h).astype(np.int64), base_cells - 1)
    t = np.clip(xp - m * h, 0.0, h)
    wx = w.poly.eval_local(m, t)
    rot = np.exp(-2j * math.pi * ((c * e.kappa_v) % b) / b)
    out = (1 - rot) * I_closed_form(b, e) + rot * wx
    return complex(out[0]) if scalar else out


def formula_weight(b: int, k, n: int) -> PiecewisePoly:
    """``conj(wal_{k>n}) W_{k<=n}`` at resolution ``a_1``: the n-th antiderivative of ``conj(wal_k)``."""
    e = as_expansion(b, k)
    if not 0 <= n <= e.v:
        raise ValueError(f"n must be in [0, v={e.v}], got {n}")
    _check_size(e)
    low = truncate_low(e, n)
    high = tail_high(e, n)
    p = wal_conj_cells(b, high) * build_W_extra(b, low, 0).poly
    return p.refine(max(e.a1, p.resolution))


def sobolev_weight(b: int, k, alpha: int) -> PiecewisePoly:
    """Kernel weight of the Sobolev-space representation.

    ``W^(alpha-v)_k - I^(alpha-v)(k)`` when ``alpha >= v``, otherwise
    ``conj(wal_{k>alpha}) W_{k<=alpha}``.
    """
    e = as_expansion(b, k)
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    if alpha >= e.v:
        return build_W_extra(b, e, alpha - e.v).centered()
    return formula_weight(b, e, alpha)


@dataclass(frozen=True)
class DyadicReport:
    k: int
    min_value: float
    symmetry_error: float
    complement_error: float
    l1: float
    l1_expected: float
    sup: float
    sup_expected: float

    @property
    def passed(self) -> bool:
        return (
            self.min_value >= -1e-12
            and self.symmetry_error <= 1e-11
            and self.complement_error <= 1e-11
            and abs(self.l1 - self.l1_expected) <= 1e-10
            and abs(self.sup - self.sup_expected) <= 1e-9
        )


def dyadic_properties(k, samples: int = 200, seed: int = 0) -> DyadicReport:
    """Check nonnegativity, the two reflection identities and the exact norms of ``W_k`` for b = 2."""
    e = as_expansion(2, k)
    if e.v == 0:
        raise ValueError("dyadic_properties needs k >= 1")
    w = build_W(2, e)
    p = w.poly
    rng = np.random.default_rng(seed)

    xs = np.concatenate([np.linspace(0, 1, 4001), rng.random(samples)])
    min_value = float(np.min(p(xs).real))

    period = 2.0 ** (-e.av + 1)
    half = 2.0 ** -e.av
    x1 = rng.random(samples)
    # x1 + x2 = c * period with x2 in [0, 1]
    lo = np.ceil(x1 / period)
    hi = np.floor((1 + x1) / period)
    c = lo + np.floor(rng.random(samples) * (hi - lo + 1))
    x2 = np.clip(c * period - x1, 0, 1)
    symmetry = float(np.max(np.abs(p(x1) - p(x2))))

    # x1 + x2 = odd multiple of 2^-a_v
    lo = np.ceil((x1 / half - 1) / 2)
    hi = np.floor(((1 + x1) / half - 1) / 2)
    c = lo + np.floor(rng.random(samples) * (hi - lo + 1))
    x2 = np.clip((2 * c + 1) * half - x1, 0, 1)
    complement = float(np.max(np.abs(p(x1) + p(x2) - p(half))))

    v, m = e.v, mu(e)
    return DyadicReport(
        k=e.k,
        min_value=min_value,
        symmetry_error=symmetry,
        complement_error=complement,
        l1=p.norm(1),
        l1_expected=2.0 ** (-m - v),
        sup=p.norm(math.inf),
        sup_expected=2.0 ** (-m - v + min(1, v)),
    )

