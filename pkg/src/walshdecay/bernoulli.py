"""Bernoulli polynomials, the Sobolev reproducing kernels, and Walsh coefficients of b_r."""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from math import comb, factorial

import numpy as np

from .badic import as_expansion
from .wfunctions import I_extra

MAX_DEGREE = 30


@functools.lru_cache(maxsize=None)
def bernoulli_numbers(n: int) -> tuple[Fraction, ...]:
    """``B_0, ..., B_n`` (convention ``B_1 = -1/2``) from ``sum_j C(m+1, j) B_j = 0``."""
    B = [Fraction(1)]
    for m in range(1, n + 1):
        B.append(-sum(comb(m + 1, j) * B[j] for j in range(m)) / (m + 1))
    return tuple(B)


@dataclass(frozen=True)
class BernoulliPoly:
    """``B_r`` and the normalized ``b_r = B_r / r!``; coefficients in ascending powers."""

    r: int
    B: tuple[Fraction, ...]
    b: tuple[Fraction, ...]

    @functools.cached_property
    def _float_coeffs(self) -> np.ndarray:
        return np.array([float(c) for c in self.b])

    def __call__(self, x):
        """Evaluate ``b_r`` (not ``B_r``)."""
        return np.polynomial.polynomial.polyval(x, self._float_coeffs)

    def eval_exact(self, x: Fraction) -> Fraction:
        out = Fraction(0)
        for c in reversed(self.b):
            out = out * x + c
        return out

    def derivative_coeffs(self) -> tuple[Fraction, ...]:
        return tuple(i * c for i, c in enumerate(self.b))[1:] or (Fraction(0),)

    def integral_exact(self) -> Fraction:
        return sum((c / (i + 1) for i, c in enumerate(self.b)), Fraction(0))


@functools.lru_cache(maxsize=None)
def bernoulli(r: int) -> BernoulliPoly:
    if r < 0:
        raise ValueError("r must be nonnegative")
    if r > MAX_DEGREE:
        raise ValueError(f"r={r} exceeds the degree cap {MAX_DEGREE}")
    nums = bernoulli_numbers(r)
    # B_r(x) = sum_j C(r, j) B_j x^(r-j)
    B = [Fraction(0)] * (r + 1)
    for j in range(r + 1):
        B[r - j] = comb(r, j) * nums[j]
    fr = factorial(r)
    return BernoulliPoly(r, tuple(B), tuple(c / fr for c in B))


def b(r: int, x):
    """``b_r(x) = B_r(x) / r!``; zero for negative ``r`` (derivatives past the degree)."""
    if r < 0:
        return np.zeros_like(np.asarray(x, dtype=float))
    return bernoulli(r)(x)


def b_tilde(alpha: int, x, y):
    """``b_alpha(|x - y|)``, with sign ``-1`` for ``x < y`` when ``alpha`` is odd."""
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    out = b(alpha, np.abs(x - y))
    if alpha % 2:
        out = np.where(x < y, -out, out)
    return out


def kernel(alpha: int, x, y):
    """Reproducing kernel of the unanchored Sobolev space of smoothness ``alpha``."""
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    out = sum(b(i, x) * b(i, y) for i in range(alpha + 1))
    return out - (-1) ** alpha * b_tilde(2 * alpha, x, y)


def kernel_per(alpha: int, x, y):
    """Reproducing kernel of the periodic subspace (vanishing lower-order integrals)."""
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    return b(alpha, x) * b(alpha, y) + (-1) ** (alpha + 1) * b_tilde(2 * alpha, x, y)


def walsh_coeff_bernoulli(base: int, k, r: int) -> complex:
    """Walsh coefficient of ``b_r``: 0 when ``r < v``, else ``(-1)^r I^(r-v)(k)``."""
    e = as_expansion(base, k)
    if r < 1 or e.v == 0:
        raise ValueError("need r >= 1 and k >= 1")
    if r < e.v:
        return 0j
    return (-1) ** r * I_extra(base, e, r - e.v)
