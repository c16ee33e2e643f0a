"""Walsh coefficients of smooth functions by several independent routes.

:func:`coeff_quadrature` integrates ``f conj(wal_k)`` directly and is the
oracle.  The other routes integrate a derivative of ``f`` against one of the
piecewise-polynomial weights from :mod:`walshdecay.wfunctions`; they must all
agree with the oracle.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction

import mpmath
import numpy as np

from .badic import as_expansion
from .bernoulli import b_tilde
from .functions import MultiSmoothFunction, SmoothFunction
from .piecewise import PiecewisePoly, gauss_legendre
from .walsh import wal_cell_values
from .wfunctions import build_W_extra, formula_weight, sobolev_weight

NODES = 16
G_MIN = 4
MAX_DIM = 3


@dataclass(frozen=True)
class CoefficientResult:
    k: object
    value: complex
    method: str
    nodes: int
    resolution: object
    params: dict = field(default_factory=dict)


@functools.lru_cache(maxsize=256)
def _cell_integrals(f: SmoothFunction, b: int, G: int, nodes: int) -> np.ndarray:
    return integrate_cells(lambda x: f.deriv(0, x), b, G, nodes, f.breakpoints)


def integrate_cells(g, b: int, G: int, nodes: int = NODES, breakpoints=(), weight=None):
    """Per-cell Gauss-Legendre integrals of ``g`` (times ``weight`` if given) on the grid ``b**-G``.

    ``weight`` is a :class:`PiecewisePoly` at resolution ``<= G``; cells
    containing a breakpoint of ``g`` are integrated piecewise.
    """
    n = b**G
    h = float(b) ** -G
    xg, wg = gauss_legendre(nodes)
    if weight is not None:
        weight = weight.refine(G)
    m = np.arange(n)
    x = (m[:, None] + xg[None, :]) * h
    vals = g(x)
    if weight is not None:
        vals = vals * weight.eval_local(m[:, None], np.broadcast_to(xg * h, x.shape))
    out = (vals @ wg) * h
    for bp in breakpoints:
        c = min(int(math.floor(bp * n)), n - 1)
        s = bp - c * h
        if s <= 0.0 or s >= h:
            continue
        total = 0j
        for lo, hi in ((0.0, s), (s, h)):
            t = lo + (hi - lo) * xg
            part = g(c * h + t)
            if weight is not None:
                part = part * weight.eval_local(np.full(t.shape, c), t)
            total += np.sum(part * wg) * (hi - lo)
        out = out.astype(complex)
        out[c] = total
    return out


def _integrate_against(g, weight: PiecewisePoly, nodes: int, g_min: int, breakpoints=()) -> complex:
    G = max(weight.resolution, g_min)
    return complex(np.sum(integrate_cells(g, weight.base, G, nodes, breakpoints, weight)))


def coeff_quadrature(f: SmoothFunction, b: int, k, nodes_per_cell: int = NODES, g_min: int = G_MIN):
    """Oracle: ``sum_m conj(wal_k)(cell m) * int_cell f`` at resolution ``max(a_1, g_min)``."""
    e = as_expansion(b, k)
    G = max(e.a1, g_min)
    ints = _cell_integrals(f, b, G, nodes_per_cell)
    value = complex(np.dot(np.conj(wal_cell_values(b, e, G)), ints))
    return CoefficientResult(e.k, value, "quadrature", nodes_per_cell, G)


def coeff_formula(f: SmoothFunction, b: int, k, n: int, nodes_per_cell: int = NODES, g_min: int = G_MIN):
    """``(-1)^n int f^(n) conj(wal_{k>n}) W_{k<=n}`` for ``0 <= n <= min(order, v)``."""
    e = as_expansion(b, k)
    if not 0 <= n <= min(f.order, e.v):
        raise ValueError(f"n must be in [0, min(order, v)] = [0, {min(f.order, e.v)}], got {n}")
    weight = formula_weight(b, e, n)
    value = (-1) ** n * _integrate_against(
        lambda x: f.deriv(n, x), weight, nodes_per_cell, g_min, f.breakpoints
    )
    return CoefficientResult(e.k, value, "formula", nodes_per_cell, max(weight.resolution, g_min), {"n": n})


def coeff_higher_order(f: SmoothFunction, b: int, k, r: int, nodes_per_cell: int = NODES, g_min: int = G_MIN):
    """Expansion through ``f^(v)``, ..., ``f^(v+r)`` using ``I^(i)(k)`` and the remainder ``W^(r) - I^(r)``."""
    e = as_expansion(b, k)
    v = e.v
    if r < 0:
        raise ValueError("r must be nonnegative")
    if f.order < v + r:
        raise ValueError(f"{f.name} has {f.order} derivatives, needs v + r = {v + r}")
    total = 0j
    for i in range(r + 1):
        total += (-1) ** (v + i) * build_W_extra(b, e, i).integral * f.integral(v + i)
    weight = build_W_extra(b, e, r).centered()
    total += (-1) ** (v + r) * _integrate_against(
        lambda x: f.deriv(v + r, x), weight, nodes_per_cell, g_min, f.breakpoints
    )
    return CoefficientResult(e.k, total, "higher_order", nodes_per_cell, max(weight.resolution, g_min), {"r": r})


def coeff_sobolev(f: SmoothFunction, b: int, k, alpha: int, nodes_per_cell: int = NODES, g_min: int = G_MIN):
    """Coefficient from the Sobolev-space representation of smoothness ``alpha``.

    Only ``f^(alpha)`` is integrated numerically; lower derivatives enter
    through ``int f^(i)``, taken as endpoint differences.  Absolute
    continuity of ``f, ..., f^(alpha-1)`` is the caller's responsibility.
    """
    e = as_expansion(b, k)
    v = e.v
    if alpha < 1 or f.order < alpha:
        raise ValueError(f"need 1 <= alpha <= order ({f.order}), got {alpha}")
    total = 0j
    if alpha >= v:
        for i in range(v, alpha + 1):
            total += (-1) ** i * build_W_extra(b, e, i - v).integral * f.integral(i)
    weight = sobolev_weight(b, e, alpha)
    total += (-1) ** alpha * _integrate_against(
        lambda x: f.deriv(alpha, x), weight, nodes_per_cell, g_min, f.breakpoints
    )
    branch = "alpha>=v" if alpha >= v else "alpha<v"
    return CoefficientResult(
        e.k, total, "sobolev", nodes_per_cell, max(weight.resolution, g_min), {"alpha": alpha, "branch": branch}
    )


def coeff_formula_multi(f: MultiSmoothFunction, b: int, ks, ns, nodes_per_cell: int = NODES, g_min: int = G_MIN):
    """Tensor Gauss-Legendre quadrature of the ``ns`` mixed partial against the product weight."""
    ks, ns = list(ks), list(ns)
    s = len(ks)
    if s != f.dim or len(ns) != s:
        raise ValueError("ks, ns and f must have the same dimension")
    if s > MAX_DIM:
        raise ValueError(f"dimension {s} exceeds the cap {MAX_DIM}")
    xg, wg = gauss_legendre(nodes_per_cell)
    pts, wts, res = [], [], []
    for k, n, order in zip(ks, ns, f.orders):
        e = as_expansion(b, k)
        if not 0 <= n <= min(order, e.v):
            raise ValueError(f"n={n} out of range for k={e.k}")
        weight = formula_weight(b, e, n)
        G = max(weight.resolution, g_min)
        weight = weight.refine(G)
        h = weight.h
        m = np.arange(weight.ncells)
        x = ((m[:, None] + xg[None, :]) * h).ravel()
        w = (weight.eval_local(m[:, None], np.broadcast_to(xg * h, (len(m), len(xg)))) * wg * h).ravel()
        pts.append(x)
        wts.append(w)
        res.append(G)
    if f.factors:
        # full integrand grid assembled from the factor values
        grid = np.asarray(f.factors[0].deriv(ns[0], pts[0]), dtype=complex)
        for fac, n, x in zip(f.factors[1:], ns[1:], pts[1:]):
            grid = np.multiply.outer(grid, fac.deriv(n, x))
    else:
        mesh = np.meshgrid(*pts, indexing="ij")
        grid = np.asarray(f.deriv(ns, mesh), dtype=complex)
    letters = "ijk"[:s]
    value = np.einsum(f"{letters}," + ",".join(letters) + "->", grid, *wts)
    value = (-1) ** sum(ns) * complex(value)
    return CoefficientResult(tuple(int(k) for k in ks), value, "formula_multi", nodes_per_cell, tuple(res), {"ns": tuple(ns)})


def h1_kernel_integral(b: int, k, alpha: int, x, nodes: int = NODES):
    """``-int_0^1 btilde_alpha(x - y) conj(wal_k(y)) dy``, split at the kink ``y = x``."""
    e = as_expansion(b, k)
    scalar = np.ndim(x) == 0
    xs = np.atleast_1d(np.asarray(x, dtype=float))
    G = e.a1
    n = b**G
    h = float(b) ** -G
    w = np.conj(wal_cell_values(b, e, G))
    xg, wg = gauss_legendre(nodes)
    m = np.arange(n)
    out = np.empty(len(xs), dtype=complex)
    for idx, xv in enumerate(xs):
        y = (m[:, None] + xg[None, :]) * h
        cell = (b_tilde(alpha, xv, y) @ wg) * h
        c = min(int(math.floor(xv * n)), n - 1)
        s = xv - c * h
        if 0.0 < s < h:
            total = 0.0
            for lo, hi in ((0.0, s), (s, h)):
                yy = c * h + lo + (hi - lo) * xg
                total += float(np.sum(b_tilde(alpha, xv, yy) * wg)) * (hi - lo)
            cell[c] = total
        out[idx] = -np.dot(w, cell)
    return complex(out[0]) if scalar else out


def walsh_partial_sum(f: SmoothFunction, b: int, G: int, x):
    """``sum_{k < b^G} fhat(k) wal_k(x)``."""
    x = np.atleast_1d(np.asarray(x, dtype=float))
    m = np.minimum(np.floor(x * b**G).astype(np.int64), b**G - 1)
    total = np.zeros(len(x), dtype=complex)
    for k in range(b**G):
        c = coeff_quadrature(f, b, k).value
        total += c * wal_cell_values(b, k, G)[m]
    return total



@functools.lru_cache(maxsize=None)
def _cyclotomic(n: int) -> tuple[int, ...]:
    """Integer coefficients of the n-th cyclotomic polynomial, ascending powers."""
    num = [-1] + [0] * (n - 1) + [1]
    for d in range(1, n):
        if n % d == 0:
            num = _divide(num, _cyclotomic(d))[0]
    return tuple(num)


def _divide(num, den):
    """Quotient and remainder of integer polynomials; ``den`` must be monic."""
    num = list(num)
    q = [0] * max(len(num) - len(den) + 1, 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        q[i] = c
        for j, d in enumerate(den):
            num[i + j] -= c * d
    return q, num[: len(den) - 1]


def polynomial_coefficients_exact(poly, b: int, G: int, digits: int = 50) -> np.ndarray:
    """All coefficients ``k < b^G`` of a polynomial with rational ascending coefficients.

    Cell integrals are exact rationals from the antiderivative.  The Walsh
    transform runs digit by digit in integer arithmetic with values kept as
    coordinate vectors over the powers of ``conj(omega)``, so no cancellation
    happens before the final evaluation at ``digits`` significant digits.
    """
    poly = [Fraction(c) for c in poly]
    F = [Fraction(0)] + [c / (j + 1) for j, c in enumerate(poly)]
    deg = len(F) - 1
    N = b**G
    L = math.lcm(*(c.denominator for c in F))
    ints = [int(c * L) for c in F]
    # N^deg * L * F(m / N) as an integer
    scaled = [sum(c * m**j * N ** (deg - j) for j, c in enumerate(ints)) for m in range(N + 1)]
    X = np.zeros((N, b), dtype=object)
    X[:, 0] = [scaled[m + 1] - scaled[m] for m in range(N)]
    # axis a-1 of the tensor is the digit xi_a of the cell (xi_1 most significant)
    X = X.reshape((b,) * G + (b,))
    for ax in range(G):
        parts = np.moveaxis(X, ax, 0)
        out = np.zeros_like(parts)
        for kd in range(b):
            for xi in range(b):
                out[kd] += np.roll(parts[xi], kd * xi % b, axis=-1)
        X = np.moveaxis(out, 0, ax)
    # digit k_a sits on axis a-1, so the flat index of k needs the axes reversed
    S = np.transpose(X, tuple(range(G - 1, -1, -1)) + (G,)).reshape(N, b)
    # reduce modulo the cyclotomic polynomial: the coordinates become unique,
    # so a vanishing coefficient comes out as exact zeros
    phi = _cyclotomic(b)
    coords = [_divide([int(t) for t in S[k]], phi)[1] for k in range(N)]
    denom = L * N**deg
    with mpmath.workdps(digits):
        w = [mpmath.expjpi(mpmath.mpf(-2 * j) / b) for j in range(len(phi) - 1)]
        vals = [mpmath.fsum(c * wj for c, wj in zip(row, w)) / denom for row in coords]
        return np.array([complex(v) for v in vals])
