"""Complex piecewise polynomials on a uniform b-adic grid.

Cell ``m`` is ``[m h, (m + 1) h)`` with ``h = b**-G``.  Each cell stores its
polynomial in the local coordinate ``t = x - m h`` (ascending powers), which
keeps the coefficients well conditioned at fine resolutions.  Walsh
functions are the degree-0 case; W_k and its relatives are continuous
members of higher degree.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np
from scipy import optimize
from scipy.special import comb

MAX_DEGREE = 40
SUP_SAMPLES = 65


@functools.lru_cache(maxsize=None)
def gauss_legendre(n: int):
    """Nodes and weights on [0, 1]."""
    x, w = np.polynomial.legendre.leggauss(n)
    return (x + 1.0) / 2.0, w / 2.0


@functools.lru_cache(maxsize=None)
def _lobatto_unit(n: int):
    # Chebyshev extreme points on [0, 1], endpoints included
    return np.sort((1.0 - np.cos(np.pi * np.arange(n) / (n - 1))) / 2.0)


@functools.lru_cache(maxsize=None)
def _shift_matrix(deg: int, d: float):
    """Matrix S with ``(c @ S)[m] = sum_i c[i] C(i, m) d^(i-m)`` (Taylor shift by d)."""
    i = np.arange(deg + 1)[:, None]
    m = np.arange(deg + 1)[None, :]
    with np.errstate(invalid="ignore"):
        S = comb(i, m) * np.where(i >= m, float(d) ** np.maximum(i - m, 0), 0.0)
    return S


def _horner(coeffs: np.ndarray, t: np.ndarray) -> np.ndarray:
    out = np.zeros(t.shape, dtype=complex) + coeffs[..., -1]
    for i in range(coeffs.shape[-1] - 2, -1, -1):
        out = out * t + coeffs[..., i]
    return out


@dataclass(frozen=True, eq=False)
class PiecewisePoly:
    base: int
    resolution: int
    coeffs: np.ndarray  # shape (b**resolution, degree + 1), complex

    def __post_init__(self):
        c = np.asarray(self.coeffs, dtype=complex)
        if c.ndim == 1:
            c = c[:, None]
        if c.shape[0] != self.base**self.resolution:
            raise ValueError(
                f"expected {self.base**self.resolution} cells, got {c.shape[0]}"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    # construction -------------------------------------------------------

    @classmethod
    def constant(cls, b: int, value: complex = 1.0, resolution: int = 0) -> "PiecewisePoly":
        return cls(b, resolution, np.full((b**resolution, 1), value, dtype=complex))

    @classmethod
    def from_cell_values(cls, b: int, values) -> "PiecewisePoly":
        values = np.asarray(values, dtype=complex)
        G = round(math.log(len(values), b)) if len(values) > 1 else 0
        return cls(b, G, values[:, None])

    # basic properties ---------------------------------------------------

    @property
    def ncells(self) -> int:
        return self.coeffs.shape[0]

    @property
    def degree(self) -> int:
        return self.coeffs.shape[1] - 1

    @property
    def h(self) -> float:
        return float(self.base) ** -self.resolution

    def breakpoints(self) -> np.ndarray:
        return np.arange(self.ncells + 1) * self.h

    # evaluation ---------------------------------------------------------

    def locate(self, x):
        """Cell index and local coordinate of each ``x`` in [0, 1]."""
        x = np.asarray(x, dtype=float)
        if np.any((x < 0) | (x > 1)):
            raise ValueError("x must lie in [0, 1]")
        n = self.ncells
        m = np.minimum(np.floor(x * n).astype(np.int64), n - 1)
        t = np.clip(x - m * self.h, 0.0, self.h)
        return m, t

    def eval_local(self, m, t):
        m = np.asarray(m)
        t = np.asarray(t, dtype=float)
        return _horner(self.coeffs[m], t)

    def eval(self, x):
        m, t = self.locate(x)
        out = self.eval_local(m, t)
        return out if out.ndim else complex(out)

    __call__ = eval

    def left_values(self) -> np.ndarray:
        return self.coeffs[:, 0].copy()

    def right_values(self) -> np.ndarray:
        return self.eval_local(np.arange(self.ncells), np.full(self.ncells, self.h))

    def max_jump(self) -> float:
        """Largest mismatch between adjacent cells at shared breakpoints."""
        if self.ncells == 1:
            return 0.0
        return float(np.max(np.abs(self.right_values()[:-1] - self.left_values()[1:])))

    # calculus -----------------------------------------------------------

    def cell_integrals(self) -> np.ndarray:
        deg = self.degree
        powers = self.h ** np.arange(1, deg + 2) / np.arange(1, deg + 2)
        return self.coeffs @ powers

    def definite_integral(self) -> complex:
        return complex(np.sum(self.cell_integrals()))

    def antiderivative(self) -> "PiecewisePoly":
        """Continuous antiderivative vanishing at 0, on the same grid."""
        deg = self.degree
        if deg + 1 > MAX_DEGREE:
            raise ValueError(f"degree would exceed MAX_DEGREE={MAX_DEGREE}")
        new = np.zeros((self.ncells, deg + 2), dtype=complex)
        new[:, 1:] = self.coeffs / np.arange(1, deg + 2)
        ints = self.cell_integrals()
        new[1:, 0] = np.cumsum(ints)[:-1]
        return PiecewisePoly(self.base, self.resolution, new)

    def derivative(self) -> "PiecewisePoly":
        if self.degree == 0:
            return PiecewisePoly(self.base, self.resolution, np.zeros((self.ncells, 1)))
        new = self.coeffs[:, 1:] * np.arange(1, self.degree + 1)
        return PiecewisePoly(self.base, self.resolution, new)

    # algebra ------------------------------------------------------------

    def refine(self, resolution: int) -> "PiecewisePoly":
        """Same function on a finer grid."""
        if resolution < self.resolution:
            raise ValueError("cannot coarsen a piecewise polynomial")
        if resolution == self.resolution:
            return self
        r = self.base ** (resolution - self.resolution)
        hn = float(self.base) ** -resolution
        deg = self.degree
        out = np.empty((self.ncells, r, deg + 1), dtype=complex)
        for j in range(r):
            out[:, j, :] = self.coeffs @ _shift_matrix(deg, j * hn)
        return PiecewisePoly(self.base, resolution, out.reshape(self.ncells * r, deg + 1))

    def with_degree(self, degree: int) -> "PiecewisePoly":
        if degree <= self.degree:
            return self
        pad = np.zeros((self.ncells, degree - self.degree), dtype=complex)
        return PiecewisePoly(self.base, self.resolution, np.hstack([self.coeffs, pad]))

    def _unify(self, other: "PiecewisePoly"):
        if other.base != self.base:
            raise ValueError(f"base mismatch: {self.base} vs {other.base}")
        G = max(self.resolution, other.resolution)
        return self.refine(G), other.refine(G)

    def __add__(self, other):
        if isinstance(other, PiecewisePoly):
            p, q = self._unify(other)
            deg = max(p.degree, q.degree)
            p, q = p.with_degree(deg), q.with_degree(deg)
            return PiecewisePoly(p.base, p.resolution, p.coeffs + q.coeffs)
        c = self.coeffs.copy()
        c[:, 0] += other
        return PiecewisePoly(self.base, self.resolution, c)

    __radd__ = __add__

    def __neg__(self):
        return PiecewisePoly(self.base, self.resolution, -self.coeffs)

    def __sub__(self, other):
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, PiecewisePoly):
            p, q = self._unify(other)
            if q.degree == 0:
                return PiecewisePoly(p.base, p.resolution, p.coeffs * q.coeffs)
            if p.degree == 0:
                return PiecewisePoly(p.base, p.resolution, q.coeffs * p.coeffs)
            out = np.zeros((p.ncells, p.degree + q.degree + 1), dtype=complex)
            for i in range(p.degree + 1):
                out[:, i : i + q.degree + 1] += p.coeffs[:, i : i + 1] * q.coeffs
            return PiecewisePoly(p.base, p.resolution, out)
        return PiecewisePoly(self.base, self.resolution, self.coeffs * other)

    __rmul__ = __mul__

    def conj(self) -> "PiecewisePoly":
        return PiecewisePoly(self.base, self.resolution, np.conj(self.coeffs))

    def cells(self, start: int, stop: int) -> np.ndarray:
        return self.coeffs[start:stop]

    # norms --------------------------------------------------------------

    def sup_norm(self, refine: int = 8, stop: int | None = None) -> float:
        """Estimate of ``max |p|`` on [0, 1], or on the first ``stop`` cells.

        Dense Chebyshev sampling per cell, then a bounded scalar search
        around the best few sample points.
        """
        coeffs = self.coeffs if stop is None else self.coeffs[:stop]
        if self.degree == 0:
            return float(np.max(np.abs(coeffs[:, 0])))
        u = _lobatto_unit(SUP_SAMPLES)
        vals = np.abs(_horner(coeffs[:, None, :], (u * self.h)[None, :]))
        best = float(vals.max())
        if best == 0.0:
            return 0.0
        flat = np.argsort(vals, axis=None)[::-1][:refine]
        for idx in flat:
            m, i = divmod(int(idx), SUP_SAMPLES)
            lo = u[max(i - 1, 0)] * self.h
            hi = u[min(i + 1, SUP_SAMPLES - 1)] * self.h
            c = coeffs[m]
            res = optimize.minimize_scalar(
                lambda t: -abs(_horner(c, np.asarray(t))),
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-14 * max(self.h, 1e-300)},
            )
            best = max(best, -float(res.fun))
        return best

    def norm(self, q: float = math.inf, nodes: int = 32) -> float:
        """``L^q`` norm of ``|p|`` on [0, 1]; ``q = inf`` gives :meth:`sup_norm`."""
        if q == math.inf:
            return self.sup_norm()
        if q < 1:
            raise ValueError("q must be >= 1")
        u = _lobatto_unit(SUP_SAMPLES)
        samples = np.abs(_horner(self.coeffs[:, None, :], (u * self.h)[None, :]))
        scale = float(samples.max()) if samples.size else 0.0
        if scale == 0.0:
            return 0.0
        xg, wg = gauss_legendre(nodes)
        # split cells where |p| (nearly) vanishes in the interior: |p|^q is not smooth there
        inner = samples[:, 1:-1]
        split = inner.min(axis=1) <= 1e-8 * scale
        split_at = np.where(split, u[1 + inner.argmin(axis=1)], 1.0) * self.h
        total = 0.0
        plain = ~split
        if plain.any():
            v = np.abs(_horner(self.coeffs[plain][:, None, :], (xg * self.h)[None, :]))
            total += float(np.sum((v**q) @ wg) * self.h)
        for m in np.flatnonzero(split):
            c = self.coeffs[m]
            s = split_at[m]
            for lo, hi in ((0.0, s), (s, self.h)):
                t = lo + (hi - lo) * xg
                total += float(np.sum(np.abs(_horner(c, t)) ** q * wg) * (hi - lo))
        return total ** (1.0 / q)
