"""Command line interface.

Series arguments are either a path to a file in the canonical text form or
an expression (see :mod:`polysym.parser`).  Exit codes: 0 success, 1 usage or
parse error, 2 precondition violation, 3 numerical breakdown.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import corona, elementary, matrix, series, symmetry, witnesses
from .elementary import ElementarySeries
from .errors import NumericalBreakdown, ParseError, PolysymError, PreconditionError
from .numbers import ComplexRational
from .parser import parse, render
from .series import TruncatedSeries

EXIT_OK, EXIT_USAGE, EXIT_PRECONDITION, EXIT_NUMERICAL = 0, 1, 2, 3
DEFAULT_CAP = 8


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(f"{self.prog}: {message}")


# -- input helpers -----------------------------------------------------------

def _read_source(arg: str) -> tuple[str, bool]:
    if os.path.isfile(arg):
        with open(arg, encoding="utf-8") as fh:
            return fh.read(), True
    return arg, False


def _is_series_text(text: str) -> bool:
    return "\t" in text or text.lstrip().startswith("#")


def load_series(arg: str, opts) -> TruncatedSeries:
    text, _ = _read_source(arg)
    if _is_series_text(text):
        return series.from_text(text, dim=opts.dim, cap=opts.cap)
    return parse(text, opts.dim or 2, _cap(opts), truncate=opts.truncate, basis="z")


def load_elementary(arg: str, opts) -> ElementarySeries:
    text, _ = _read_source(arg)
    if _is_series_text(text):
        return elementary.elementary_from_text(text, dim=opts.dim, cap=opts.cap)
    return parse(text, opts.dim or 2, _cap(opts), truncate=opts.truncate, basis="e")


def parse_point(text: str) -> tuple:
    """Comma-separated ``re+imi`` values, e.g. ``0.5+0i,-0.25+0.1i``."""
    out = []
    for part in text.split(","):
        part = part.strip().replace(" ", "")
        if not part:
            raise ParseError(f"empty coordinate in point {text!r}")
        try:
            out.append(complex(part[:-1] + "j" if part.endswith("i") else part))
        except ValueError:
            raise ParseError(f"malformed coordinate {part!r}") from None
    return tuple(out)


def format_point(z) -> str:
    return ",".join(f"{complex(x).real!r}{'-' if complex(x).imag < 0 else '+'}{abs(complex(x).imag)!r}i" for x in z)


# -- output helpers ----------------------------------------------------------

def _jsonable(value):
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, ComplexRational):
        return {"re": str(value.re), "im": str(value.im)}
    if isinstance(value, complex):
        return {"re": value.real, "im": value.imag}
    if isinstance(value, series.NormEnclosure):
        return {"lower": str(value.lower), "upper": str(value.upper), "exact": value.exact}
    if isinstance(value, TruncatedSeries):
        return {"text": series.to_text(value), "expr": render(value)}
    if isinstance(value, ElementarySeries):
        return {"text": elementary.elementary_to_text(value), "expr": render(value)}
    if isinstance(value, (np.floating, np.integer, np.bool_)):
        return value.item()
    if isinstance(value, dict):
        return {str(k): _jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [_jsonable(v) for v in value]
    return value


def _text(value) -> str:
    if isinstance(value, TruncatedSeries):
        return series.to_text(value).rstrip("\n")
    if isinstance(value, ElementarySeries):
        return elementary.elementary_to_text(value).rstrip("\n")
    if isinstance(value, (list, tuple)) and value and isinstance(value[0], complex):
        return format_point(value)
    return str(value)


def emit(opts, payload, out):
    if opts.format == "json":
        json.dump(_jsonable(payload), out, indent=2, sort_keys=True)
        out.write("\n")
        return
    if isinstance(payload, dict):
        for key, value in payload.items():
            text = _text(value)
            if "\n" in text:
                out.write(f"{key}:\n{text}\n")
            else:
                out.write(f"{key}: {text}\n")
    else:
        out.write(_text(payload) + "\n")


def _cap(opts) -> int:
    return DEFAULT_CAP if opts.cap is None else opts.cap


def _rng(opts):
    return np.random.default_rng(opts.seed)


def _random_points(rng, count, dim, radius):
    r = radius * np.sqrt(rng.random((count, dim)))
    theta = 2 * np.pi * rng.random((count, dim))
    return (r * np.exp(1j * theta)).tolist()


# -- commands ----------------------------------------------------------------

def cmd_parse(opts):
    return parse(opts.expr, opts.dim or 2, _cap(opts), truncate=opts.truncate)


def cmd_symmetrize(opts):
    return symmetry.symmetrize(load_series(opts.series, opts))


def cmd_sym_check(opts):
    return {"symmetric": symmetry.is_symmetric(load_series(opts.series, opts))}


def cmd_wiener_norm(opts):
    f = load_series(opts.series, opts)
    enc = series.wiener_norm(f)
    return {"lower": enc.lower, "upper": enc.upper, "exact": enc.exact}


def cmd_sup_norm(opts):
    f = load_series(opts.series, opts)
    return {"sup_norm_lower": series.sup_norm_lower(f, opts.resolution), "resolution": opts.resolution}


def cmd_to_elementary(opts):
    return elementary.to_elementary(load_series(opts.series, opts), require_exact=not opts.truncate)


def cmd_from_elementary(opts):
    q = load_elementary(opts.series, opts)
    return elementary.from_elementary(q, opts.cap if opts.cap is not None else q.cap)


def cmd_series_to_elementary(opts):
    return elementary.series_to_elementary(load_series(opts.series, opts))


def cmd_compare_composition(opts):
    f = load_series(opts.series, opts)
    g = load_elementary(opts.elementary, opts)
    pts = _random_points(_rng(opts), opts.points, f.dim, opts.radius)
    return {
        "max_deviation": elementary.compare_composition(f, g, pts),
        "points": opts.points,
        "radius": opts.radius,
        "seed": opts.seed,
    }


def cmd_corona_check(opts):
    fs = [load_series(a, opts) for a in opts.data]
    report = {"delta_estimate": corona.corona_delta(fs, opts.resolution, opts.layers)}
    if opts.solution:
        gs = [load_series(a, opts) for a in opts.solution]
        residual = corona.verify_bezout(fs, gs)
        report["residual_lower"] = residual.lower
        report["residual_upper"] = residual.upper
        report["residual_exact_zero"] = residual.upper == 0
        if residual.upper == 0:
            report["delta_from_solution"] = corona.delta_from_solution(gs)
        if opts.symmetrize:
            sym = corona.symmetrize_solution(fs, gs)
            for k, g in enumerate(sym, 1):
                report[f"g{k}_symmetrized"] = g
                if opts.write_prefix:
                    path = f"{opts.write_prefix}{k}.series"
                    with open(path, "w", encoding="utf-8") as fh:
                        fh.write(series.to_text(g))
    return report


def cmd_quotient_dist(opts):
    return {"distance": symmetry.quotient_dist(parse_point(opts.z), parse_point(opts.w))}


def cmd_canonical(opts):
    return symmetry.OrbitPoint.of(parse_point(opts.z)).canonical


def cmd_homotopy(opts):
    return symmetry.contraction_homotopy(opts.t, parse_point(opts.z)).canonical


def _load_matrix(opts) -> matrix.SeriesMatrix:
    text, _ = _read_source(opts.matrix)
    try:
        rows = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"matrix file is not valid JSON: {exc}") from None
    if not isinstance(rows, list) or not all(isinstance(r, list) for r in rows):
        raise ParseError("matrix file must hold a JSON array of rows")
    entries = []
    for row in rows:
        out = []
        for entry in row:
            if not isinstance(entry, str):
                raise ParseError("matrix entries must be strings")
            if _is_series_text(entry):
                f = series.from_text(entry, dim=opts.dim, cap=opts.cap)
            else:
                f = parse(entry, opts.dim or 2, _cap(opts), truncate=opts.truncate, basis="z")
            out.append(f)
        entries.append(out)
    cap = max(e.cap for row in entries for e in row)
    return matrix.SeriesMatrix([[e.with_cap(cap) for e in row] for row in entries])


def cmd_sl_homotopy(opts):
    M = _load_matrix(opts)
    samples = matrix.full_homotopy_sample(M, opts.steps, opts.tol)
    steps = []
    for k, S in enumerate(samples):
        residual = series.wiener_norm(matrix.det(S) - 1)
        steps.append({
            "t": str(Fraction(k, opts.steps - 1)),
            "det_residual_upper": float(residual.upper),
            "op_norm_bound": matrix.op_norm_bound(S),
        })
    if opts.format == "json":
        return {"samples": steps}
    return "\n".join(
        f"t={s['t']}\tdet_residual={s['det_residual_upper']:.3e}\top_norm_bound={s['op_norm_bound']:.6g}"
        for s in steps
    )


def cmd_blaschke(opts):
    spec = witnesses.BlaschkeSpec(opts.n, opts.rule)
    if opts.z is not None:
        (z,) = parse_point(opts.z)
        return {"value": witnesses.blaschke_eval(spec, z), "alpha_rule": spec.alpha_rule.value}
    return witnesses.blaschke_chain_witness(opts.n, opts.dim or 2, opts.resolution, opts.rule)


def cmd_paper_example(opts):
    report = witnesses.paper_example(opts.N, opts.cap, points=opts.points, seed=opts.seed)
    report.pop("series")
    return report


# -- parser ------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    def global_flags(parser, suppress):
        kw = {"default": argparse.SUPPRESS} if suppress else {}
        parser.add_argument("--dim", type=int, help="number of variables d (default 2 for expressions)",
                            **(kw or {"default": None}))
        parser.add_argument("--cap", type=int, help="total-degree truncation cap (default 8 for expressions)",
                            **(kw or {"default": None}))
        parser.add_argument("--seed", type=int, help="seed for randomised checks", **(kw or {"default": 0}))
        parser.add_argument("--format", choices=("text", "json"), **(kw or {"default": "text"}))
        parser.add_argument("--truncate", action="store_true", help="allow silent truncation at the cap",
                            **kw)

    p = _Parser(prog="polysym", description=__doc__.splitlines()[0])
    global_flags(p, suppress=False)
    # the same flags are accepted after the subcommand
    common = _Parser(add_help=False)
    global_flags(common, suppress=True)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def add(name, fn, help_text):
        sp = sub.add_parser(name, help=help_text, parents=[common])
        sp.set_defaults(func=fn)
        return sp

    add("parse", cmd_parse, "parse an expression and print its canonical form").add_argument("expr")
    for name, fn, text in (
        ("symmetrize", cmd_symmetrize, "average a series over S_d"),
        ("sym-check", cmd_sym_check, "test whether a series is symmetric"),
        ("wiener-norm", cmd_wiener_norm, "enclosure of the l1 norm"),
        ("to-elementary", cmd_to_elementary, "rewrite a symmetric polynomial in e_1..e_d"),
        ("from-elementary", cmd_from_elementary, "expand an e-polynomial in z-variables"),
        ("series-to-elementary", cmd_series_to_elementary, "degree-by-degree e-basis rewrite"),
    ):
        add(name, fn, text).add_argument("series")
    sp = add("sup-norm", cmd_sup_norm, "torus-grid lower bound for the sup norm")
    sp.add_argument("series")
    sp.add_argument("--resolution", type=int, default=32)
    sp = add("compare-composition", cmd_compare_composition, "probe f(z) = g(e(z)) at random points")
    sp.add_argument("series")
    sp.add_argument("elementary")
    sp.add_argument("--points", type=int, default=100)
    sp.add_argument("--radius", type=float, default=0.7)
    sp = add("corona-check", cmd_corona_check, "corona estimate and Bezout verification")
    sp.add_argument("--data", nargs="+", required=True)
    sp.add_argument("--solution", nargs="+")
    sp.add_argument("--resolution", type=int, default=32)
    sp.add_argument("--layers", type=int, default=4)
    sp.add_argument("--symmetrize", action="store_true", help="also print the symmetrised solution")
    sp.add_argument("--write-prefix", help="write symmetrised solutions to PREFIX<k>.series")
    sp = add("quotient-dist", cmd_quotient_dist, "distance between two orbits")
    sp.add_argument("z")
    sp.add_argument("w")
    add("canonical", cmd_canonical, "canonical orbit representative").add_argument("z")
    sp = add("homotopy", cmd_homotopy, "contraction H(t, [z]) = [(1 - t) z]")
    sp.add_argument("z")
    sp.add_argument("--t", type=float, required=True)
    sp = add("sl-homotopy", cmd_sl_homotopy, "sampled homotopy from M in SL_n to I")
    sp.add_argument("--matrix", required=True, help="JSON array of rows of series text blocks or expressions")
    sp.add_argument("--steps", type=int, default=16)
    sp.add_argument("--tol", type=float, default=1e-10)
    sp = add("blaschke", cmd_blaschke, "Blaschke product value or ideal-chain witness")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--z", help="evaluate B_n at this point instead of running the chain witness")
    sp.add_argument("--rule", choices=[r.value for r in witnesses.AlphaRule], default="varying_alpha_k")
    sp.add_argument("--resolution", type=int, default=16)
    sp = add("paper-example", cmd_paper_example, "worked example sum (z^2+w^2)^n/(n^2 2^n)")
    sp.add_argument("--N", type=int, default=3)
    sp.add_argument("--points", type=int, default=100)
    return p


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    try:
        opts = build_parser().parse_args(argv)
        if opts.dim is not None and opts.dim < 1:
            raise UsageError("--dim must be positive")
        payload = opts.func(opts)
        emit(opts, payload, out)
        return EXIT_OK
    except (UsageError, ParseError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except NumericalBreakdown as exc:
        print(f"numerical breakdown: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    except (PreconditionError, PolysymError) as exc:
        print(f"precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


def main_entry():
    sys.exit(main())


if __name__ == "__main__":
    main_entry()
