"""Command-line front end.

Every output starts with ``#`` header lines that record the configuration, so
a file is reproducible from its own first line.  Numbers are written with 17
significant digits; JSON output carries the same values.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import sys
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from . import well
from .approximant import (
    CONSTANT,
    _family,
    _mode,
    build_approximant,
    error_report,
    eval_approximant,
    probe_grid,
    residual_report,
)
from .expression import ExpressionError, parse_expression
from .grid import ConstructionError, Interval
from .kernel import QuadratureSpec
from .ordering import gap_report

log = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_NUMERIC = 2

BUILTINS = ("projectile", "identity", "const")


class UsageError(Exception):
    pass


@dataclass(frozen=True)
class FunctionSpec:
    kind: str  # builtin | polynomial | expression
    name: str = ""
    coefficients: tuple[float, ...] = ()
    source: str = ""
    params: tuple[tuple[str, float | None], ...] = ()

    def describe(self) -> str:
        if self.kind == "polynomial":
            return "poly(" + ",".join(_num(c) for c in self.coefficients) + ")"
        if self.kind == "expression":
            return f"expr({self.source})"
        if self.params:
            shown = [f"{k}={_short(v)}" for k, v in self.params if v is not None]
            return self.name + "(" + ",".join(shown) + ")"
        return self.name

    def build(self) -> Callable[[float], float]:
        if self.kind == "expression":
            return parse_expression(self.source)
        if self.kind == "polynomial":
            coeffs = self.coefficients
            if not all(math.isfinite(c) for c in coeffs):
                raise ConstructionError("polynomial coefficients must be finite")
            return lambda x: _horner(coeffs, x)
        p = dict(self.params)
        if self.name == "identity":
            return lambda x: x
        if self.name == "const":
            beta = p["value"]
            return lambda x: beta
        return projectile(p["alpha"], p["v0"], p["g"])


def _horner(coeffs, x):
    acc = 0.0
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def projectile(alpha: float | None = None, v0: float | None = None,
               g: float = 9.81) -> Callable[[float], float]:
    """Trajectory height ``x tan(alpha) - g x^2 / (2 v0^2 cos^2 alpha)``.

    Omitted ``alpha`` means 45 degrees and omitted ``v0`` means ``sqrt(g)``;
    both are then used through their exact values (``tan = 1``,
    ``cos^2 = 1/2``, ``v0^2 = g``) so the defaults give exactly ``x - x^2``
    rather than a copy perturbed by rounding in ``tan(pi/4)``.
    """
    if alpha is None:
        tan_a, cos2 = 1.0, 0.5
    else:
        tan_a, cos2 = math.tan(alpha), math.cos(alpha) ** 2
    v0sq = g if v0 is None else v0 * v0
    if not (v0sq > 0 and g > 0 and cos2 > 0):
        raise ConstructionError("projectile needs v0 > 0, g > 0 and cos(alpha) != 0")
    b = g / (2.0 * v0sq * cos2)
    return lambda x: tan_a * x - b * x * x


@dataclass(frozen=True)
class RunConfig:
    function: FunctionSpec
    interval: Interval
    n: int | None = None
    ns: tuple[int, ...] = ()
    family: str = "triangular"
    mode: str | None = None
    probes: int = 1001
    panels_per_cell: int = 64
    resolution: tuple[int, int] = (64, 64)
    output: str | None = None
    fmt: str = "csv"
    seed: int = 0

    @property
    def quadrature(self) -> QuadratureSpec:
        return QuadratureSpec(self.panels_per_cell)

    def header(self, command: str, **more) -> str:
        items = [
            ("command", command),
            ("function", self.function.describe()),
            ("interval", f"[{_num(self.interval.lo)},{_num(self.interval.hi)}]"),
        ]
        if self.ns:
            items.append(("ns", ",".join(str(n) for n in self.ns)))
        else:
            items.append(("n", str(self.n)))
        items += [
            ("family", self.family),
            ("mode", _mode(self.mode, _family(self.family))),
            ("panels", str(self.panels_per_cell)),
            ("probes", str(self.probes)),
        ]
        items += [(k, str(v)) for k, v in more.items()]
        return " ".join(f"{k}={v}" for k, v in items)


# -- formatting ---------------------------------------------------------------


def _num(v) -> str:
    """17 significant digits; integers print without exponent noise."""
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v)).lower()
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    return "%.17g" % float(v)


def _short(v: float) -> str:
    s = repr(float(v))
    return s[:-2] if s.endswith(".0") else s


def _emit(text: str, output: str | None):
    if output is None:
        sys.stdout.write(text)
    else:
        with open(output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)


def _render(cfg: RunConfig, header: str, meta: dict, columns: Sequence[str], rows) -> str:
    rows = [list(r) for r in rows]
    if cfg.fmt == "json":
        doc = {
            "header": header,
            "meta": {k: _jsonable(v) for k, v in meta.items()},
            "columns": list(columns),
            "rows": [[_jsonable(v) for v in r] for r in rows],
        }
        return json.dumps(doc, indent=1) + "\n"
    lines = ["# " + header]
    if meta:
        lines.append("# " + " ".join(f"{k}={_num(v)}" for k, v in meta.items()))
    lines.append(",".join(columns))
    lines += [",".join(_num(v) for v in r) for r in rows]
    return "\n".join(lines) + "\n"


def _jsonable(v):
    if isinstance(v, (bool, np.bool_)):
        return bool(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    # round-trip through the 17-digit text so JSON mirrors the CSV numbers
    return float("%.17g" % float(v))


# -- commands -----------------------------------------------------------------


def cmd_approx(cfg: RunConfig) -> int:
    f = cfg.function.build()
    appx = build_approximant(f, cfg.interval, cfg.n, cfg.family, cfg.mode, cfg.quadrature)
    rep = error_report(appx, f, cfg.probes)
    xs = probe_grid(cfg.interval, cfg.probes)
    fx = np.array([float(f(float(x))) for x in xs])
    fn = np.asarray(eval_approximant(appx, xs))
    meta = {
        "sup_error": rep.sup_error,
        "bound_3dy": rep.bound_3dy,
        "max_node_residual": rep.max_node_residual,
        "within_bound": rep.within_bound,
    }
    rows = zip(xs, fx, fn, np.abs(fn - fx))
    text = _render(cfg, cfg.header("approx"), meta,
                   ("x", "f", "f_n", "abs_diff"), rows)
    _emit(text, cfg.output)
    return EXIT_OK


def study_rows(cfg: RunConfig):
    f = cfg.function.build()
    rows = []
    for n in cfg.ns:
        appx = build_approximant(f, cfg.interval, n, cfg.family, cfg.mode, cfg.quadrature)
        rep = error_report(appx, f, cfg.probes)
        res = residual_report(appx, f, cfg.probes)
        rows.append((n, rep.sup_error, rep.bound_3dy, res.residual_sup))
    return rows


def cmd_study(cfg: RunConfig) -> int:
    if not cfg.ns:
        raise UsageError("study needs --ns")
    rows = study_rows(cfg)
    text = _render(cfg, cfg.header("study"), {}, ("n", "sup_error", "bound_3dy", "residual_sup"),
                   rows)
    _emit(text, cfg.output)
    return EXIT_OK


def cmd_density(cfg: RunConfig) -> int:
    f = cfg.function.build()
    appx = build_approximant(f, cfg.interval, cfg.n, cfg.family, "quad", cfg.quadrature)
    nx, ny = cfg.resolution
    if appx.mode == CONSTANT:
        raise ConstructionError("a constant function has no two-dimensional density")
    dens = appx.density
    xs, ys, p = dens.grid(nx, ny)
    meta = {"H": dens.H, "nx": nx, "ny": ny}
    rows = ((xs[i], ys[j], p[i, j]) for i in range(nx) for j in range(ny))
    text = _render(cfg, cfg.header("density", res=f"{nx}x{ny}"), meta, ("x", "y", "p"), rows)
    _emit(text, cfg.output)
    return EXIT_OK


def cmd_well(cfg: RunConfig) -> int:
    n = cfg.n
    points = cfg.probes
    xs = probe_grid(Interval(0.0, 1.0), points)
    psi = np.asarray(well.adam_wave(n, xs))
    phi = np.asarray(well.eve_wave(n, xs))
    nu, lam, prod = well.duality_numbers(n)
    header = f"command=well n={n} points={points} energy={_num(well.energy(n))}"
    duality = f"nu={_short(nu)} lambda={_short(lam)} product={_short(prod)}"
    if cfg.fmt == "json":
        doc = {
            "header": header,
            "duality": {"nu": nu, "lambda": lam, "product": prod, "line": duality},
            "columns": ["x", "psi", "phi", "psi_sq", "phi_sq"],
            "rows": [[_jsonable(v) for v in r] for r in zip(xs, psi, phi, psi * psi, phi * phi)],
        }
        text = json.dumps(doc, indent=1) + "\n"
    else:
        lines = ["# " + header, "# " + duality, "x,psi,phi,psi_sq,phi_sq"]
        lines += [",".join(_num(v) for v in r) for r in zip(xs, psi, phi, psi * psi, phi * phi)]
        text = "\n".join(lines) + "\n"
    _emit(text, cfg.output)
    return EXIT_OK


def lemma_check(count: int, seed: int, sequence: Sequence[float] | None = None):
    """Run ``d <= e`` over seeded random sequences; returns (passed, worst_margin, last report)."""
    if sequence is not None:
        rep = gap_report(sequence)
        return rep.d <= rep.e, rep.margin, rep
    if count < 1:
        raise ConstructionError("lemma check needs count >= 1")
    rng = np.random.default_rng(seed)
    worst = math.inf
    ok = True
    rep = None
    for _ in range(count):
        length = int(rng.integers(2, 101))
        rep = gap_report(rng.uniform(-100.0, 100.0, length))
        worst = min(worst, rep.margin)
        ok &= rep.d <= rep.e
    return ok, worst, rep


def cmd_lemma(count: int, seed: int, sequence=None, output: str | None = None) -> int:
    ok, worst, rep = lemma_check(count, seed, sequence)
    status = "pass" if ok else "fail"
    if sequence is not None:
        line = f"lemma {status} sequence={','.join(_short(v) for v in sequence)} d={_short(rep.d)} e={_short(rep.e)} margin={_short(worst)}"
    else:
        line = f"lemma {status} count={count} seed={seed} worst_margin={_num(worst)}"
    _emit(line + "\n", output)
    return EXIT_OK if ok else EXIT_NUMERIC


# -- argument parsing ---------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _int_list(text: str) -> tuple[int, ...]:
    try:
        vals = tuple(int(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _float_list(text: str) -> tuple[float, ...]:
    try:
        vals = tuple(float(t) for t in text.replace(" ", "").split(",") if t)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}")
    if not vals:
        raise argparse.ArgumentTypeError("empty list")
    return vals


def _resolution(text: str) -> tuple[int, int]:
    parts = text.lower().replace("×", "x").split("x")
    try:
        vals = [int(p) for p in parts]
    except ValueError:
        raise argparse.ArgumentTypeError(f"resolution must look like 64 or 64x32, got {text!r}")
    if len(vals) == 1:
        vals *= 2
    if len(vals) != 2 or min(vals) < 2:
        raise argparse.ArgumentTypeError("resolution needs two sizes >= 2")
    return vals[0], vals[1]


def _add_function_args(p):
    g = p.add_argument_group("function")
    src = g.add_mutually_exclusive_group()
    src.add_argument("--fn", choices=BUILTINS, help="built-in function (default projectile)")
    src.add_argument("--expr", help="expression in x, e.g. 'sin(pi*x)'")
    src.add_argument("--poly", type=_float_list, help="coefficients c0,c1,... of c0 + c1 x + ...")
    g.add_argument("--value", type=float, default=0.0, help="constant for --fn const")
    g.add_argument("--alpha", type=float, default=None, help="launch angle in radians (default pi/4)")
    g.add_argument("--g", type=float, default=9.81)
    g.add_argument("--v0", type=float, default=None, help="launch speed (default sqrt(g))")
    p.add_argument("--a", type=float, default=0.0, help="left end of X")
    p.add_argument("--b", type=float, default=1.0, help="right end of X")


def _add_common(p, *, ns=False, n_default=None):
    _add_function_args(p)
    if ns:
        p.add_argument("--ns", type=_int_list, required=True, help="comma-separated orders")
    else:
        p.add_argument("--n", type=int, default=n_default, required=n_default is None)
    p.add_argument("--family", choices=("tri", "trig"), default="tri")
    p.add_argument("--mode", choices=("quad", "closed"), default=None)
    p.add_argument("--probes", type=int, default=1001)
    p.add_argument("--panels", type=int, default=64, help="Simpson panels per cell (even)")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.add_argument("--out", default=None, help="output file (default stdout)")
    p.add_argument("--seed", type=int, default=0)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="randvec", description="Random-vector approximation of functions.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    _add_common(sub.add_parser("approx", help="approximate f at order n"))
    _add_common(sub.add_parser("study", help="convergence study over several n"), ns=True)
    d = sub.add_parser("density", help="export the normalised density on a grid")
    _add_common(d)
    d.add_argument("--res", type=_resolution, default=(64, 64), help="NX or NXxNY")

    w = sub.add_parser("well", help="square-well wave table")
    w.add_argument("--n", type=int, required=True)
    w.add_argument("--probes", type=int, default=101, help="table points on [0, 1]")
    w.add_argument("--format", choices=("csv", "json"), default="csv")
    w.add_argument("--out", default=None)

    lm = sub.add_parser("lemma", help="check the sorted-gap bound on random sequences")
    lm.add_argument("--count", type=int, default=1000)
    lm.add_argument("--seed", type=int, default=0)
    lm.add_argument("--sequence", type=_float_list, default=None,
                    help="check one fixed sequence instead, e.g. 3,1,2")
    lm.add_argument("--out", default=None)
    return parser


def function_spec(args) -> FunctionSpec:
    if args.expr is not None:
        parse_expression(args.expr)  # surface syntax errors as usage errors
        return FunctionSpec("expression", source=args.expr)
    if args.poly is not None:
        return FunctionSpec("polynomial", coefficients=args.poly)
    name = args.fn or "projectile"
    if name == "const":
        return FunctionSpec("builtin", name, params=(("value", args.value),))
    if name == "projectile":
        params = (("alpha", args.alpha), ("v0", args.v0), ("g", args.g))
        return FunctionSpec("builtin", name, params=params)
    return FunctionSpec("builtin", name)


def config_from_args(args) -> RunConfig:
    family = {"tri": "triangular", "trig": "trig"}[args.family]
    for flag in ("probes", "panels"):
        if getattr(args, flag) < 1:
            raise UsageError(f"--{flag} must be positive")
    return RunConfig(
        function=function_spec(args),
        interval=Interval(args.a, args.b),
        n=getattr(args, "n", None),
        ns=tuple(getattr(args, "ns", ()) or ()),
        family=family,
        mode=args.mode,
        probes=args.probes,
        panels_per_cell=args.panels,
        resolution=getattr(args, "res", (64, 64)),
        output=args.out,
        fmt=args.format,
        seed=args.seed,
    )


COMMANDS = {"approx": cmd_approx, "study": cmd_study, "density": cmd_density}


def main(argv: Sequence[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except UsageError as exc:
        print(f"randvec: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        if args.command == "well":
            cfg = RunConfig(FunctionSpec("builtin", "identity"), Interval(0.0, 1.0), n=args.n,
                            probes=args.probes, output=args.out, fmt=args.format)
            if args.probes < 2:
                raise UsageError("--probes must be at least 2")
            return cmd_well(cfg)
        if args.command == "lemma":
            return cmd_lemma(args.count, args.seed, args.sequence, args.out)
        return COMMANDS[args.command](config_from_args(args))
    except (UsageError, ExpressionError) as exc:
        print(f"randvec: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ConstructionError, FloatingPointError, OSError) as exc:
        print(f"randvec: error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
