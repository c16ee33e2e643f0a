"""Integrands with explicitly supplied derivatives.

Derivatives are given in closed form, never by automatic differentiation;
:meth:`SmoothFunction.check_derivatives` guards against a mistyped one.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np
from scipy import optimize

from . import bernoulli as _bern
from .piecewise import gauss_legendre

UNBOUNDED_ORDER = 64


@dataclass(frozen=True, eq=False)
class SmoothFunction:
    """``f`` on [0, 1] with derivatives ``f^(i)`` for ``0 <= i <= order``.

    ``breakpoints`` lists interior points where some available derivative
    is not smooth; quadrature splits there.
    """

    name: str
    order: int
    deriv_fn: Callable[[int, np.ndarray], np.ndarray]
    breakpoints: tuple[float, ...] = ()

    def deriv(self, i: int, x):
        if not 0 <= i <= self.order:
            raise ValueError(f"{self.name}: derivative {i} not available (order {self.order})")
        return self.deriv_fn(i, np.asarray(x, dtype=float))

    def __call__(self, x):
        return self.deriv(0, x)

    @functools.lru_cache(maxsize=None)
    def integral(self, i: int) -> complex:
        """``int_0^1 f^(i)``; endpoint difference of ``f^(i-1)`` for ``i >= 1``."""
        if i >= 1:
            return complex(self.deriv(i - 1, 1.0) - self.deriv(i - 1, 0.0))
        return complex(np.sum(self._composite(lambda x: self.deriv(0, x))))

    @functools.lru_cache(maxsize=None)
    def lp_norm(self, i: int, p: float) -> float:
        """``||f^(i)||_{L^p}`` on [0, 1]."""
        if p == math.inf:
            return self._sup(i)
        if p < 1:
            raise ValueError("p must be >= 1")
        ints = self._composite(lambda x: np.abs(self.deriv(i, x)) ** p)
        return float(np.sum(ints).real) ** (1.0 / p)

    def _intervals(self, n: int = 64) -> np.ndarray:
        pts = np.union1d(np.linspace(0.0, 1.0, n + 1), np.asarray(self.breakpoints, dtype=float))
        return pts

    def _composite(self, g, nodes: int = 24) -> np.ndarray:
        pts = self._intervals()
        lo, hi = pts[:-1], pts[1:]
        xg, wg = gauss_legendre(nodes)
        x = lo[:, None] + (hi - lo)[:, None] * xg[None, :]
        return (g(x) @ wg) * (hi - lo)

    def _sup(self, i: int) -> float:
        x = np.union1d(np.linspace(0.0, 1.0, 4097), np.asarray(self.breakpoints, dtype=float))
        vals = np.abs(self.deriv(i, x))
        best = float(vals.max())
        for idx in np.argsort(vals)[::-1][:4]:
            lo, hi = x[max(idx - 1, 0)], x[min(idx + 1, len(x) - 1)]
            if hi <= lo:
                continue
            res = optimize.minimize_scalar(
                lambda t: -abs(complex(self.deriv(i, t))),
                bounds=(lo, hi),
                method="bounded",
                options={"xatol": 1e-13},
            )
            best = max(best, -float(res.fun))
        return best

    def check_derivatives(self, points: int = 20, step: float = 1e-5) -> float:
        """Largest relative error between ``f^(i)`` and a central difference of ``f^(i-1)``.

        Checks ``1 <= i <= min(order, 8)`` at interior points kept away from breakpoints.
        """
        x = np.linspace(0.05, 0.95, points)
        for bp in self.breakpoints:
            x = x[np.abs(x - bp) > 10 * step]
        worst = 0.0
        for i in range(1, min(self.order, 8) + 1):
            fd = (self.deriv(i - 1, x + step) - self.deriv(i - 1, x - step)) / (2 * step)
            exact = self.deriv(i, x)
            scale = max(1.0, float(np.max(np.abs(exact))))
            worst = max(worst, float(np.max(np.abs(fd - exact))) / scale)
        return worst


def bernoulli_function(r: int) -> SmoothFunction:
    """``b_r = B_r / r!``; derivatives past degree ``r`` vanish."""
    _bern.bernoulli(r)

    def d(i, x):
        return _bern.b(r - i, x) * np.ones_like(x)

    return SmoothFunction(f"bernoulli:{r}", UNBOUNDED_ORDER, d)


def exp_function(lam: float) -> SmoothFunction:
    def d(i, x):
        return lam**i * np.exp(lam * x)

    return SmoothFunction(f"exp:{lam:g}", UNBOUNDED_ORDER, d)


def sin_function(freq: float, phase: float) -> SmoothFunction:
    """``sin(2 pi freq x + phase)``."""
    w = 2 * math.pi * freq

    def d(i, x):
        return w**i * np.sin(w * x + phase + i * math.pi / 2)

    return SmoothFunction(f"sin:{freq:g},{phase:g}", UNBOUNDED_ORDER, d)


def poly_function(coeffs: Sequence[float]) -> SmoothFunction:
    """Polynomial with ascending coefficients ``c0, c1, ...``."""
    P = np.polynomial.Polynomial(list(coeffs))

    def d(i, x):
        return P.deriv(i)(x) * np.ones_like(x) if i else P(x) * np.ones_like(x)

    name = "poly:" + ",".join(f"{c:g}" for c in coeffs)
    return SmoothFunction(name, UNBOUNDED_ORDER, d)


def truncated_power(n: int, knot: float) -> SmoothFunction:
    """``(x - knot)_+^n``: ``n``-th derivative is a step, so it is Sobolev but not ``C^n``."""
    if n < 1 or not 0 < knot < 1:
        raise ValueError("need n >= 1 and 0 < knot < 1")

    def d(i, x):
        c = math.factorial(n) / math.factorial(n - i)
        return np.where(x > knot, c * np.maximum(x - knot, 0.0) ** (n - i), 0.0)

    return SmoothFunction(f"tpow:{n},{knot:g}", n, d, breakpoints=(knot,))


_FAMILIES = {
    "bernoulli": (lambda r: bernoulli_function(int(r)), 1),
    "exp": (lambda lam: exp_function(float(lam)), 1),
    "sin": (lambda freq, phase: sin_function(float(freq), float(phase)), 2),
    "tpow": (lambda n, knot: truncated_power(int(n), float(knot)), 2),
}


def parse_function(spec: str) -> SmoothFunction:
    """Build a function from ``name:params``.

    Supported: ``bernoulli:r``, ``exp:lambda``, ``sin:freq,phase``,
    ``poly:c0,c1,...`` and ``tpow:n,knot``.
    """
    name, _, rest = spec.partition(":")
    params = [p for p in rest.split(",") if p.strip()] if rest else []
    if name == "poly":
        if not params:
            raise ValueError("poly needs at least one coefficient")
        return poly_function([float(p) for p in params])
    if name not in _FAMILIES:
        raise ValueError(f"unknown function family {name!r}")
    make, nargs = _FAMILIES[name]
    if len(params) != nargs:
        raise ValueError(f"{name} takes {nargs} parameter(s), got {len(params)}")
    return make(*params)


@dataclass(frozen=True, eq=False)
class MultiSmoothFunction:
    """s-variate integrand with mixed partial derivatives up to ``orders[j]`` in ``x_j``.

    ``deriv_fn(ns, xs)`` evaluates the ``ns`` mixed partial on broadcastable
    coordinate arrays.  Product integrands also keep their ``factors``.
    """

    orders: tuple[int, ...]
    deriv_fn: Callable[[tuple[int, ...], list], np.ndarray]
    factors: tuple[SmoothFunction, ...] = field(default=())

    @property
    def dim(self) -> int:
        return len(self.orders)

    def deriv(self, ns, xs):
        ns = tuple(ns)
        if len(ns) != self.dim or any(not 0 <= n <= o for n, o in zip(ns, self.orders)):
            raise ValueError(f"derivative {ns} not available (orders {self.orders})")
        return self.deriv_fn(ns, [np.asarray(x, dtype=float) for x in xs])

    def lp_norm(self, ns, p: float) -> float:
        """Mixed-partial norm; exact product of factor norms for product integrands."""
        if not self.factors:
            raise NotImplementedError("norms are only available for product integrands")
        return math.prod(f.lp_norm(n, p) for f, n in zip(self.factors, ns))


def product_function(*factors: SmoothFunction) -> MultiSmoothFunction:
    """``f(x) = prod_j f_j(x_j)``."""
    if not factors:
        raise ValueError("need at least one factor")

    def d(ns, xs):
        out = 1.0
        for f, n, x in zip(factors, ns, xs):
            out = out * f.deriv(n, x)
        return out

    return MultiSmoothFunction(tuple(f.order for f in factors), d, tuple(factors))
