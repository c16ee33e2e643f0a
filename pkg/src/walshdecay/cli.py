"""Command-line interface.

Every subcommand produces a table of rows.  CSV output has a header row and
17 significant digits; JSON output carries the same fields.  Exit status is
2 for bad flags, 1 when a verified bound fails and 0 otherwise.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from dataclasses import asdict, dataclass, field, fields

import numpy as np

from . import __version__
from .badic import as_expansion, expand, mu, mu_alpha, mu_per
from .bernoulli import bernoulli, walsh_coeff_bernoulli
from .bounds import THEOREMS, SweepConfig, summarize, verify_sweep
from .coefficients import (
    coeff_formula,
    coeff_higher_order,
    coeff_quadrature,
    coeff_sobolev,
    polynomial_coefficients_exact,
)
from .functions import parse_function
from .walsh import wal_eval_array
from .wfunctions import build_W_extra


class UsageError(ValueError):
    """Bad combination of flags; reported with exit status 2."""


def fmt(x) -> str:
    if isinstance(x, bool):
        return "true" if x else "false"
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    if isinstance(x, (float, np.floating)):
        return format(float(x), ".17g")
    if isinstance(x, tuple):
        return ";".join(fmt(t) for t in x)
    if x is None:
        return ""
    return str(x)


def _json_value(x):
    if isinstance(x, bool) or x is None or isinstance(x, str):
        return x
    if isinstance(x, (int, np.integer)):
        return int(x)
    if isinstance(x, (float, np.floating)):
        x = float(x)
        return x if math.isfinite(x) else fmt(x)
    if isinstance(x, tuple):
        return fmt(x)
    return str(x)


def render(rows: list[dict], columns: list[str], form: str, extra: dict | None = None) -> str:
    if form == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([fmt(row.get(c)) for c in columns])
        return buf.getvalue()
    doc = {"columns": columns, "rows": [{c: _json_value(row.get(c)) for c in columns} for row in rows]}
    if extra:
        doc.update(extra)
    return json.dumps(doc, indent=2) + "\n"


def emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", newline="") as fh:
            fh.write(text)


# run configuration -------------------------------------------------------


@dataclass
class RunConfig:
    """Serializable description of a verify or decay-table run."""

    theorem: str
    b: int = 2
    kmin: int = 0
    kmax: int = 16
    ks: list[int] | None = None
    alphas: list[int] = field(default_factory=lambda: [1, 2, 3])
    family: list[str] = field(default_factory=lambda: ["exp:1"])
    p: float = 1.0
    q: float = 1.0
    rmax: int = 8
    jmax: int = 4
    dim: int | None = None
    c_arg: str = "min"
    nodes: int = 16
    workers: int = 1
    out: str | None = None
    format: str = "csv"

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> "RunConfig":
        data = json.loads(text)
        known = {f.name for f in fields(cls)}
        unknown = set(data) - known
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
        return cls(**data)

    def sweep(self) -> SweepConfig:
        return SweepConfig(
            theorem=self.theorem,
            b=self.b,
            kmax=self.kmax,
            kmin=self.kmin,
            ks=tuple(self.ks) if self.ks is not None else None,
            alphas=tuple(self.alphas),
            family=tuple(self.family),
            p=self.p,
            q=self.q,
            rmax=self.rmax,
            jmax=self.jmax,
            dim=self.dim,
            c_arg=self.c_arg,
            nodes=self.nodes,
            workers=self.workers,
        )


# subcommands -------------------------------------------------------------


def _grid(args) -> np.ndarray:
    if args.x:
        return np.asarray(args.x, dtype=float)
    return np.arange(args.grid) / args.grid


def cmd_expand(args) -> int:
    rows = []
    for k in args.k:
        e = expand(args.b, k)
        for i, (kappa, a) in enumerate(e.digits, start=1):
            rows.append({"b": args.b, "k": k, "v": e.v, "mu": mu(e), "i": i, "kappa": kappa, "a": a})
    emit(render(rows, ["b", "k", "v", "mu", "i", "kappa", "a"], args.format), args.out)
    return 0


def cmd_wal(args) -> int:
    x = _grid(args)
    rows = []
    for k in args.k:
        vals = wal_eval_array(args.b, k, x)
        rows += [{"b": args.b, "k": k, "x": float(xi), "re": v.real, "im": v.imag} for xi, v in zip(x, vals)]
    emit(render(rows, ["b", "k", "x", "re", "im"], args.format), args.out)
    return 0


def cmd_wfun(args) -> int:
    x = _grid(args)
    rows = []
    for k in args.k:
        if k < 1:
            raise UsageError("wfun needs k >= 1")
        w = build_W_extra(args.b, k, args.j)
        vals = np.atleast_1d(w(x))
        I = w.integral
        for xi, v in zip(x, vals):
            rows.append({"b": args.b, "k": k, "j": args.j, "x": float(xi), "re": v.real, "im": v.imag,
                         "integral_re": I.real, "integral_im": I.imag})
    cols = ["b", "k", "j", "x", "re", "im", "integral_re", "integral_im"]
    emit(render(rows, cols, args.format), args.out)
    return 0


def _coefficient(args, f, k):
    m = args.method
    if m == "quadrature":
        return coeff_quadrature(f, args.b, k, args.nodes).value
    if m == "formula":
        return coeff_formula(f, args.b, k, args.n, args.nodes).value
    if m == "higher-order":
        return coeff_higher_order(f, args.b, k, args.r, args.nodes).value
    if m == "sobolev":
        return coeff_sobolev(f, args.b, k, args.alpha, args.nodes).value
    raise UsageError(f"unknown method {m!r}")


def cmd_coeff(args) -> int:
    f = parse_function(args.f)
    rows = []
    for k in args.k:
        c = _coefficient(args, f, k)
        rows.append({"b": args.b, "k": k, "function": f.name, "method": args.method,
                     "re": c.real, "im": c.imag, "abs": abs(c)})
    emit(render(rows, ["b", "k", "function", "method", "re", "im", "abs"], args.format), args.out)
    return 0


def cmd_bernoulli(args) -> int:
    ks = args.k if args.k else list(range(1, args.kmax))
    rows = []
    G = max(max(as_expansion(args.b, k).a1 for k in ks), 1)
    exact = polynomial_coefficients_exact(bernoulli(args.r).b, args.b, G) if args.check else None
    for k in ks:
        c = walsh_coeff_bernoulli(args.b, k, args.r)
        row = {"b": args.b, "k": k, "r": args.r, "v": as_expansion(args.b, k).v, "re": c.real, "im": c.imag, "abs": abs(c)}
        if exact is not None:
            row["oracle_error"] = abs(c - exact[k])
        rows.append(row)
    cols = ["b", "k", "r", "v", "re", "im", "abs"] + (["oracle_error"] if args.check else [])
    emit(render(rows, cols, args.format), args.out)
    return 0


def _config_from_args(args) -> RunConfig:
    if args.config:
        with open(args.config) as fh:
            cfg = RunConfig.from_json(fh.read())
        if args.out is not None:
            cfg.out = args.out
        return cfg
    if args.theorem is None:
        raise UsageError("--theorem is required (or pass --config)")
    return RunConfig(
        theorem=args.theorem,
        b=args.b,
        kmin=args.kmin,
        kmax=args.kmax,
        ks=args.k,
        alphas=args.alpha,
        family=args.f,
        p=args.p,
        q=args.q,
        rmax=args.rmax,
        jmax=args.jmax,
        dim=args.dim,
        c_arg=args.c_arg,
        nodes=args.nodes,
        workers=args.workers,
        out=args.out,
        format=args.format,
    )


VERIFY_COLUMNS = ["b", "k", "alpha", "theorem", "function", "quantity", "coeff_re", "coeff_im", "abs",
                  "bound", "ratio", "exact_zero", "passed"]


def _report_row(r) -> dict:
    return {
        "b": r.b,
        "k": r.k,
        "alpha": r.alpha,
        "theorem": r.theorem,
        "function": r.meta.get("function"),
        "quantity": r.meta.get("quantity"),
        "coeff_re": r.coeff.real,
        "coeff_im": r.coeff.imag,
        "abs": r.coeff_abs,
        "bound": r.bound,
        "ratio": r.ratio,
        "exact_zero": r.exact_zero,
        "passed": r.passed,
    }


def cmd_verify(args) -> int:
    cfg = _config_from_args(args)
    reports = verify_sweep(cfg.sweep())
    summary = summarize(reports)
    doc = {
        "theorem": cfg.theorem,
        "b": cfg.b,
        "count": summary["count"],
        "failed": summary["failed"],
        "pass": summary["passed"],
        "max_ratio": _json_value(summary["max_ratio"]),
        "max_zero_residual": summary["max_zero_residual"],
    }
    if cfg.out:
        emit(render([_report_row(r) for r in reports], VERIFY_COLUMNS, cfg.format), cfg.out)
    print(json.dumps(doc, indent=2))
    return 0 if summary["passed"] else 1


DECAY_THEOREMS = ("smooth", "c-infinity", "bernoulli", "sobolev", "sobolev-norm", "periodic")
DECAY_COLUMNS = ["b", "k", "v", "mu", "mu_alpha", "mu_per", "coeff_re", "coeff_im", "abs", "bound", "ratio",
                 "theorem"]


def cmd_decay_table(args) -> int:
    cfg = _config_from_args(args)
    if cfg.theorem not in DECAY_THEOREMS:
        raise UsageError(f"decay-table supports {', '.join(DECAY_THEOREMS)}")
    if len(cfg.alphas) != 1 or len(cfg.family) != 1:
        raise UsageError("decay-table takes exactly one --alpha and one --f")
    if cfg.theorem == "bernoulli":
        cfg.rmax = cfg.alphas[0]
    reports = verify_sweep(cfg.sweep())
    if cfg.theorem == "bernoulli":
        reports = [r for r in reports if r.alpha == cfg.alphas[0]]
    alpha = cfg.alphas[0]
    rows = []
    for r in reports:
        e = as_expansion(cfg.b, r.k)
        row = _report_row(r)
        row.update({"v": e.v, "mu": mu(e), "mu_alpha": mu_alpha(e, alpha), "mu_per": mu_per(e, alpha)})
        rows.append(row)
    emit(render(rows, DECAY_COLUMNS, cfg.format), cfg.out)
    return 0 if all(r.passed for r in reports) else 1


# parser ------------------------------------------------------------------


def _base(text: str) -> int:
    b = int(text)
    if b < 2:
        raise argparse.ArgumentTypeError("base must be >= 2")
    return b


def _nonneg(text: str) -> int:
    k = int(text)
    if k < 0:
        raise argparse.ArgumentTypeError("must be nonnegative")
    return k


def _exponent(text: str) -> float:
    p = float(text)
    if not p >= 1:
        raise argparse.ArgumentTypeError("exponent must be >= 1 (use inf for the sup norm)")
    return p


def _output_flags(p: argparse.ArgumentParser) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default: stdout)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="walshdecay", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("expand", help="b-adic digits of k")
    p.add_argument("--b", type=_base, required=True)
    p.add_argument("--k", type=_nonneg, nargs="+", required=True)
    _output_flags(p)
    p.set_defaults(func=cmd_expand)

    for name, func, help_ in (("wal", cmd_wal, "Walsh function values"), ("wfun", cmd_wfun, "W-function values")):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--b", type=_base, required=True)
        p.add_argument("--k", type=_nonneg, nargs="+", required=True)
        p.add_argument("--x", type=float, nargs="+", help="evaluation points in [0, 1]")
        p.add_argument("--grid", type=int, default=16, help="use x = m/grid, m < grid, when --x is absent")
        if name == "wfun":
            p.add_argument("--j", type=_nonneg, default=0, help="order of the repeated integral W^(j)")
        _output_flags(p)
        p.set_defaults(func=func)

    p = sub.add_parser("coeff", help="Walsh coefficients of an integrand")
    p.add_argument("--b", type=_base, required=True)
    p.add_argument("--k", type=_nonneg, nargs="+", required=True)
    p.add_argument("--f", required=True, help="bernoulli:r | exp:lambda | sin:freq,phase | poly:c0,... | tpow:n,knot")
    p.add_argument("--method", choices=("quadrature", "formula", "higher-order", "sobolev"), default="quadrature")
    p.add_argument("--n", type=_nonneg, default=0, help="derivative order for --method formula")
    p.add_argument("--r", type=_nonneg, default=0, help="expansion depth for --method higher-order")
    p.add_argument("--alpha", type=int, default=1, help="smoothness for --method sobolev")
    p.add_argument("--nodes", type=int, default=16)
    _output_flags(p)
    p.set_defaults(func=cmd_coeff)

    p = sub.add_parser("bernoulli", help="closed-form Walsh coefficients of b_r")
    p.add_argument("--b", type=_base, required=True)
    p.add_argument("--r", type=int, required=True)
    p.add_argument("--k", type=_nonneg, nargs="+")
    p.add_argument("--kmax", type=_nonneg, default=16)
    p.add_argument("--check", action="store_true", help="add the error against the exact rational oracle")
    _output_flags(p)
    p.set_defaults(func=cmd_bernoulli)

    for name, func, help_ in (
        ("verify", cmd_verify, "sweep a decay bound and report pass/fail"),
        ("decay-table", cmd_decay_table, "coefficient, bound and ratio per k"),
    ):
        p = sub.add_parser(name, help=help_)
        p.add_argument("--config", help="RunConfig JSON file; replaces the sweep flags")
        p.add_argument("--theorem", choices=THEOREMS)
        p.add_argument("--b", type=_base, default=2)
        p.add_argument("--kmin", type=_nonneg, default=0)
        p.add_argument("--kmax", type=_nonneg, default=16)
        p.add_argument("--k", type=_nonneg, nargs="+", help="explicit k list (overrides the range)")
        p.add_argument("--alpha", type=int, nargs="+", default=[1, 2, 3])
        p.add_argument("--f", nargs="+", default=["exp:1"], help="integrands; '&' joins factors of a product")
        p.add_argument("--p", type=_exponent, default=1.0)
        p.add_argument("--q", type=_exponent, default=1.0)
        p.add_argument("--rmax", type=int, default=8)
        p.add_argument("--jmax", type=int, default=4)
        p.add_argument("--dim", type=int, default=None)
        p.add_argument("--c-arg", choices=("min", "v"), default="min")
        p.add_argument("--nodes", type=int, default=16)
        p.add_argument("--workers", type=int, default=1)
        p.add_argument("--save-config", help="write the RunConfig as JSON and continue")
        _output_flags(p)
        p.set_defaults(func=func)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if getattr(args, "save_config", None):
            with open(args.save_config, "w") as fh:
                fh.write(_config_from_args(args).to_json() + "\n")
        return args.func(args)
    except ValueError as exc:
        # bad parameter combinations surface from the library as ValueError
        print(f"walshdecay {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
