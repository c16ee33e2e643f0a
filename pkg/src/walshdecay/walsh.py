"""b-adic Walsh functions, univariate and multivariate."""

from __future__ import annotations

import math
from fractions import Fraction

import numpy as np

from .badic import as_expansion, roots_of_unity
from .piecewise import PiecewisePoly

# float digit peeling: snap x b^G to the nearest integer when it is this close
# (relative), so that floats like 1/3 land on the cell they denote
GUARD = 8 * 2.0**-52


def _cell_index(b: int, x, G: int) -> int:
    """Index ``m`` with ``x`` in ``[m b^-G, (m+1) b^-G)``."""
    n = b**G
    if isinstance(x, (Fraction, int)):
        x = Fraction(x)
        if not 0 <= x < 1:
            raise ValueError("x must lie in [0, 1)")
        return math.floor(x * n)
    x = float(x)
    if not 0.0 <= x < 1.0:
        raise ValueError("x must lie in [0, 1)")
    s = x * n
    r = round(s)
    if abs(s - r) <= GUARD * max(1.0, s) and r < n:
        return int(r)
    return int(math.floor(s))


def walsh_exponents(b: int, k, m, G: int):
    """Exponent ``sum_i kappa_i xi_{a_i} mod b`` of wal_k on cell ``m`` of resolution ``G``.

    ``G`` must be at least ``a_1(k)``.  ``m`` may be an integer array.
    """
    e = as_expansion(b, k)
    if G < e.a1:
        raise ValueError("resolution below a_1 cannot resolve wal_k")
    m = np.asarray(m, dtype=np.int64)
    out = np.zeros(m.shape, dtype=np.int64)
    for kappa, a in e.digits:
        # xi_a is the a-th digit after the radix point: (m // b^(G-a)) mod b
        out += kappa * ((m // b ** (G - a)) % b)
    return out % b


def wal_cell_values(b: int, k, G: int | None = None) -> np.ndarray:
    """Values of wal_k on all ``b**G`` cells (``G`` defaults to ``a_1``)."""
    e = as_expansion(b, k)
    G = e.a1 if G is None else G
    ex = walsh_exponents(b, e, np.arange(b**G), G)
    return np.asarray(roots_of_unity(b), dtype=complex)[ex]


def wal_eval(b: int, k, x) -> complex:
    """``wal_k(x)`` for ``x`` in [0, 1).

    Floats are digit-peeled with a small guard band; pass a
    :class:`fractions.Fraction` for exact cell classification.
    """
    e = as_expansion(b, k)
    if e.v == 0:
        _cell_index(b, x, 0)
        return 1 + 0j
    m = _cell_index(b, x, e.a1)
    return roots_of_unity(b)[int(walsh_exponents(b, e, m, e.a1))]


def wal_eval_array(b: int, k, x) -> np.ndarray:
    """Vectorized :func:`wal_eval` for float arrays (no guard band)."""
    e = as_expansion(b, k)
    x = np.asarray(x, dtype=float)
    if np.any((x < 0) | (x >= 1)):
        raise ValueError("x must lie in [0, 1)")
    m = np.floor(x * b**e.a1).astype(np.int64)
    return np.asarray(roots_of_unity(b), dtype=complex)[walsh_exponents(b, e, m, e.a1)]


def wal_eval_multi(b: int, ks, xs) -> complex:
    """Product of univariate Walsh functions."""
    ks, xs = list(ks), list(xs)
    if len(ks) != len(xs):
        raise ValueError(f"length mismatch: {len(ks)} indices, {len(xs)} points")
    if not ks:
        raise ValueError("need at least one coordinate")
    out = 1 + 0j
    for k, x in zip(ks, xs):
        out *= wal_eval(b, k, x)
    return out


def wal_conj_cells(b: int, k) -> PiecewisePoly:
    """``conj(wal_k)`` as a degree-0 piecewise polynomial at resolution ``a_1``."""
    e = as_expansion(b, k)
    return PiecewisePoly(b, e.a1, np.conj(wal_cell_values(b, e))[:, None])


def inner_product(b: int, k, l) -> complex:
    """``int_0^1 wal_k conj(wal_l)`` by an exact cell sum."""
    ek, el = as_expansion(b, k), as_expansion(b, l)
    G = max(ek.a1, el.a1)
    vals = wal_cell_values(b, ek, G) * np.conj(wal_cell_values(b, el, G))
    return complex(np.mean(vals))

