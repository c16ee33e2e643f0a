"""b-adic digit machinery for Walsh indices.

A nonnegative integer ``k`` is written as

    k = kappa_1 b^(a_1 - 1) + ... + kappa_v b^(a_v - 1)

with nonzero digits ``kappa_i`` and strictly decreasing positions
``a_1 > ... > a_v >= 1``.  Everything downstream (Walsh functions, the
weight functions W_k, the decay exponents) is phrased in terms of these
pairs, so they are stored explicitly instead of as a plain digit string.
"""

from __future__ import annotations

import cmath
import functools
import math
from dataclasses import dataclass

MAX_K = 2**64 - 1
MAX_EXPONENT = 2**31 - 1


@dataclass(frozen=True)
class KExpansion:
    """Nonzero b-adic digits of ``k`` as ``(kappa, a)`` pairs, largest ``a`` first."""

    base: int
    k: int
    digits: tuple[tuple[int, int], ...]

    @property
    def v(self) -> int:
        """Hamming weight: number of nonzero digits."""
        return len(self.digits)

    @property
    def kappas(self) -> tuple[int, ...]:
        return tuple(kappa for kappa, _ in self.digits)

    @property
    def exponents(self) -> tuple[int, ...]:
        return tuple(a for _, a in self.digits)

    @property
    def a1(self) -> int:
        """Largest digit position (0 for k = 0)."""
        return self.digits[0][1] if self.digits else 0

    @property
    def av(self) -> int:
        """Smallest digit position (0 for k = 0)."""
        return self.digits[-1][1] if self.digits else 0

    @property
    def kappa_v(self) -> int:
        return self.digits[-1][0] if self.digits else 0

    def reconstruct(self) -> int:
        return sum(kappa * self.base ** (a - 1) for kappa, a in self.digits)

    def __int__(self) -> int:
        return self.k


def _check_base(b: int) -> None:
    if int(b) != b or b < 2:
        raise ValueError(f"base must be an integer >= 2, got {b!r}")


def _from_digits(b: int, digits) -> KExpansion:
    digits = tuple(digits)
    k = sum(kappa * b ** (a - 1) for kappa, a in digits)
    return KExpansion(b, k, digits)


def expand(b: int, k: int) -> KExpansion:
    """Return the b-adic expansion of ``k``.

    >>> expand(2, 5).digits
    ((1, 3), (1, 1))
    """
    _check_base(b)
    if int(k) != k or k < 0:
        raise ValueError(f"k must be a nonnegative integer, got {k!r}")
    k = int(k)
    if k > MAX_K:
        raise ValueError(f"k exceeds the 64-bit range: {k}")
    digits = []
    a, rest = 1, k
    while rest:
        rest, d = divmod(rest, b)
        if d:
            digits.append((d, a))
        a += 1
    digits.reverse()
    return KExpansion(b, k, tuple(digits))


def as_expansion(b: int, k) -> KExpansion:
    """Accept either an int or an existing expansion in base ``b``."""
    if isinstance(k, KExpansion):
        if k.base != b:
            raise ValueError(f"expansion is in base {k.base}, expected {b}")
        return k
    return expand(b, k)


def drop_smallest(e: KExpansion) -> KExpansion:
    """Expansion of ``k' = k - kappa_v b^(a_v - 1)``."""
    if e.v == 0:
        raise ValueError("cannot drop a digit from k = 0")
    return _from_digits(e.base, e.digits[:-1])


def truncate_low(e: KExpansion, n: int) -> KExpansion:
    """Keep the ``n`` largest digits (``k_{<=n}``)."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _from_digits(e.base, e.digits[: min(n, e.v)])


def tail_high(e: KExpansion, n: int) -> KExpansion:
    """Drop the ``n`` largest digits (``k_{>n}``); complement of :func:`truncate_low`."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    return _from_digits(e.base, e.digits[min(n, e.v):])


def mu(e: KExpansion) -> int:
    return sum(e.exponents)


def mu_alpha(e: KExpansion, alpha: int) -> int:
    """Sum of the ``alpha`` largest digit positions."""
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    return sum(e.exponents[:alpha])


def mu_per(e: KExpansion, alpha: int) -> int:
    """Like :func:`mu_alpha`, but pads with ``(alpha - v) a_v`` when ``v < alpha``."""
    if alpha < 1:
        raise ValueError("alpha must be a positive integer")
    if e.v == 0:
        return 0
    if e.v <= alpha:
        return mu(e) + (alpha - e.v) * e.av
    return sum(e.exponents[:alpha])


@dataclass(frozen=True)
class BaseConstants:
    base: int
    omega: complex
    m_b: float
    M_b: float


@functools.lru_cache(maxsize=None)
def constants(b: int) -> BaseConstants:
    """Root of unity and the min/max of ``|1 - conj(omega)^c|`` over ``c = 1..b-1``."""
    _check_base(b)
    omega = cmath.exp(2j * math.pi / b)
    m_b = 2.0 * math.sin(math.pi / b)
    M_b = 2.0 if b % 2 == 0 else 2.0 * math.sin((b + 1) * math.pi / (2 * b))
    return BaseConstants(b, omega, m_b, M_b)


@functools.lru_cache(maxsize=None)
def roots_of_unity(b: int):
    """Tuple ``(omega^0, ..., omega^(b-1))`` with exact values at the quarter points."""
    out = []
    for e in range(b):
        if 4 * e % b == 0:
            out.append((1, 1j, -1, -1j)[4 * e // b])
        else:
            out.append(cmath.exp(2j * math.pi * e / b))
    return tuple(complex(z) for z in out)


def omega_pow(b: int, e: int) -> complex:
    """``omega_b ** e`` for any integer ``e``."""
    return roots_of_unity(b)[e % b]


def c_factor(b: int, n: int) -> float:
    """Growth factor ``(b m_b / (b - M_b)) (1 - (M_b / b)^n)`` of the non-dyadic sup bounds.

    Only defined for ``b >= 3``; for ``b = 2`` the denominator vanishes.
    """
    _check_base(b)
    if b == 2:
        raise ValueError("c_factor is undefined for b = 2 (b - M_b = 0)")
    if n < 0:
        raise ValueError("n must be nonnegative")
    c = constants(b)
    return b * c.m_b / (b - c.M_b) * (1.0 - (c.M_b / b) ** n)


def c_limit(b: int) -> float:
    """``lim_{n -> oo} c_factor(b, n) = b m_b / (b - M_b)``."""
    _check_base(b)
    if b == 2:
        raise ValueError("c_limit is undefined for b = 2")
    c = constants(b)
    return b * c.m_b / (b - c.M_b)
