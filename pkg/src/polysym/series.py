"""Truncated multivariate power series with a certified l1 tail.

A :class:`TruncatedSeries` stores the coefficients of all monomials of total
degree at most ``cap`` exactly, together with an optional ``tail_bound``: an
upper bound on the l1 (Wiener) norm of everything that was discarded.  All
arithmetic keeps that bound valid, so ``wiener_norm`` returns a certified
enclosure and ``evaluate`` a certified error on the closed polydisc.
"""
from __future__ import annotations

import itertools
import math
import sys
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import DimensionError, ParseError, PreconditionError
from .numbers import ONE, ZERO, ComplexRational, as_coeff, as_fraction, format_fraction

__all__ = [
    "Monomial",
    "NormEnclosure",
    "TruncatedSeries",
    "make_series",
    "add",
    "multiply",
    "wiener_norm",
    "evaluate",
    "evaluate_many",
    "sup_norm_lower",
    "dilate",
    "diagonal",
    "lift",
    "graded_lex_key",
    "compositions",
    "to_text",
    "from_text",
]

Monomial = tuple  # tuple[int, ...] of length dim

_EPS = sys.float_info.epsilon


def graded_lex_key(mono: Sequence[int]):
    """Sort key: total degree first, then lexicographic on the exponents."""
    return (sum(mono), tuple(mono))


def output_order(terms: Iterable[Monomial]) -> list:
    """Canonical output order: ascending degree, lex-descending inside a degree.

    For ``d = 2`` this prints ``z^2, z*w, w^2``.
    """
    return sorted(terms, key=lambda m: (sum(m), tuple(-e for e in m)))


@lru_cache(maxsize=None)
def compositions(k: int, d: int) -> tuple:
    """All exponent vectors of length ``d`` with total degree ``k``."""
    if d == 1:
        return ((k,),)
    out = []
    for first in range(k, -1, -1):
        for rest in compositions(k - first, d - 1):
            out.append((first,) + rest)
    return tuple(out)


@dataclass(frozen=True)
class NormEnclosure:
    """Certified interval ``[lower, upper]`` for an l1 norm."""

    lower: Fraction
    upper: Fraction
    exact: bool

    @property
    def value(self) -> Fraction:
        if not self.exact:
            raise PreconditionError("norm is only enclosed, not known exactly")
        return self.lower

    def __str__(self):
        if self.exact:
            return str(self.lower)
        return f"[{self.lower}, {self.upper}]"


class TruncatedSeries:
    """Sparse truncated power series in ``dim`` variables.

    Instances are treated as immutable.  Two series compare equal when they
    have the same dimension, the same stored terms and the same tail bound;
    the truncation cap is deliberately not part of equality, so a polynomial
    built at two different caps is still the same polynomial.
    """

    __slots__ = ("dim", "cap", "terms", "tail_bound")

    def __init__(self, dim: int, cap: int, terms: Mapping | None = None, tail_bound=None):
        if dim < 1:
            raise PreconditionError("dimension must be positive")
        if cap < 0:
            raise PreconditionError("cap must be non-negative")
        clean: dict = {}
        tail = Fraction(0) if tail_bound is None else as_fraction(tail_bound)
        if tail < 0:
            raise PreconditionError("tail bound must be non-negative")
        for mono, c in (terms or {}).items():
            mono = tuple(int(e) for e in mono)
            if len(mono) != dim:
                raise DimensionError(f"monomial {mono} does not have length {dim}")
            if any(e < 0 for e in mono):
                raise PreconditionError(f"negative exponent in {mono}")
            c = as_coeff(c)
            if sum(mono) > cap:
                tail += c.abs_upper()
                continue
            if c:
                clean[mono] = c
        self._init(dim, cap, clean, tail)

    def _init(self, dim, cap, terms, tail):
        self.dim = dim
        self.cap = cap
        self.terms = terms
        self.tail_bound = tail if tail else None

    @classmethod
    def _raw(cls, dim: int, cap: int, terms: dict, tail=None) -> "TruncatedSeries":
        # Internal fast path: caller guarantees canonical terms.
        obj = object.__new__(cls)
        obj._init(dim, cap, terms, tail if tail else Fraction(0))
        return obj

    # -- constructors -----------------------------------------------------
    @classmethod
    def zero(cls, dim: int, cap: int) -> "TruncatedSeries":
        return cls._raw(dim, cap, {})

    @classmethod
    def constant(cls, value, dim: int, cap: int) -> "TruncatedSeries":
        c = as_coeff(value)
        return cls._raw(dim, cap, {(0,) * dim: c} if c else {})

    @classmethod
    def variable(cls, k: int, dim: int, cap: int) -> "TruncatedSeries":
        """The coordinate function ``z_k`` (1-based)."""
        if not 1 <= k <= dim:
            raise PreconditionError(f"variable index {k} outside 1..{dim}")
        mono = tuple(1 if j == k - 1 else 0 for j in range(dim))
        if cap < 1:
            return cls._raw(dim, cap, {}, Fraction(1))
        return cls._raw(dim, cap, {mono: ONE})

    @classmethod
    def monomial(cls, exponents: Sequence[int], coeff=1, cap: int | None = None):
        exponents = tuple(exponents)
        return cls(len(exponents), sum(exponents) if cap is None else cap, {exponents: coeff})

    # -- basic queries ----------------------------------------------------
    @property
    def is_polynomial(self) -> bool:
        return self.tail_bound is None

    @property
    def is_zero(self) -> bool:
        return not self.terms and self.tail_bound is None

    @property
    def degree(self) -> int:
        """Largest stored total degree (-1 for the zero series)."""
        return max((sum(m) for m in self.terms), default=-1)

    def coefficient(self, mono: Sequence[int]) -> ComplexRational:
        return self.terms.get(tuple(mono), ZERO)

    def constant_term(self) -> ComplexRational:
        return self.terms.get((0,) * self.dim, ZERO)

    def sorted_terms(self) -> list:
        return [(m, self.terms[m]) for m in output_order(self.terms)]

    def truncate(self, cap: int) -> "TruncatedSeries":
        """Lower the cap, moving the mass of dropped terms into the tail."""
        if cap >= self.cap:
            return self
        kept = {}
        tail = self.tail_bound or Fraction(0)
        for m, c in self.terms.items():
            if sum(m) > cap:
                tail += c.abs_upper()
            else:
                kept[m] = c
        return TruncatedSeries._raw(self.dim, cap, kept, tail)

    def with_cap(self, cap: int) -> "TruncatedSeries":
        """Same stored data at a different cap (raising a cap adds no information)."""
        if cap < self.cap:
            return self.truncate(cap)
        return TruncatedSeries._raw(self.dim, cap, self.terms, self.tail_bound)

    # -- operators --------------------------------------------------------
    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            return other
        return TruncatedSeries.constant(other, self.dim, self.cap)

    def __add__(self, other):
        return add(self, self._coerce(other))

    def __radd__(self, other):
        return add(self._coerce(other), self)

    def __neg__(self):
        return TruncatedSeries._raw(
            self.dim, self.cap, {m: -c for m, c in self.terms.items()}, self.tail_bound
        )

    def __sub__(self, other):
        return add(self, -self._coerce(other))

    def __rsub__(self, other):
        return add(self._coerce(other), -self)

    def __mul__(self, other):
        if isinstance(other, TruncatedSeries):
            return multiply(self, other)
        return self.scale(other)

    def __rmul__(self, other):
        return self.scale(other)

    def __truediv__(self, other):
        c = as_coeff(other)
        return self.scale(ONE / c)

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PreconditionError("series powers must be non-negative integers")
        result = TruncatedSeries.constant(1, self.dim, self.cap)
        base = self
        while k:
            if k & 1:
                result = multiply(result, base)
            k >>= 1
            if k:
                base = multiply(base, base)
        return result

    def scale(self, value) -> "TruncatedSeries":
        c = as_coeff(value)
        if not c:
            return TruncatedSeries.zero(self.dim, self.cap)
        tail = None
        if self.tail_bound is not None:
            tail = self.tail_bound * c.abs_upper()
        return TruncatedSeries._raw(
            self.dim, self.cap, {m: a * c for m, a in self.terms.items()}, tail
        )

    def __eq__(self, other):
        if not isinstance(other, TruncatedSeries):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return (
            self.dim == other.dim
            and self.terms == other.terms
            and self.tail_bound == other.tail_bound
        )

    __hash__ = None

    def __repr__(self):
        from .parser import render

        tail = f", tail<={self.tail_bound}" if self.tail_bound is not None else ""
        return f"TruncatedSeries(dim={self.dim}, cap={self.cap}: {render(self)}{tail})"


def _check_same_dim(f: TruncatedSeries, g: TruncatedSeries):
    if f.dim != g.dim:
        raise DimensionError(f"dimension mismatch: {f.dim} vs {g.dim}")


def make_series(dim: int, cap: int, terms: Iterable) -> TruncatedSeries:
    """Build a series from ``(monomial, coefficient)`` pairs.

    Duplicate monomials are summed, zeros dropped, and terms above ``cap``
    are folded into the tail bound by their rectangular modulus.
    """
    acc: dict = {}
    for mono, c in terms:
        mono = tuple(mono)
        if len(mono) != dim:
            raise DimensionError(f"monomial {mono} does not have length {dim}")
        acc[mono] = acc.get(mono, ZERO) + as_coeff(c)
    return TruncatedSeries(dim, cap, acc)


def add(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    _check_same_dim(f, g)
    cap = min(f.cap, g.cap)
    tail = (f.tail_bound or Fraction(0)) + (g.tail_bound or Fraction(0))
    acc = dict(f.terms)
    for m, c in g.terms.items():
        s = acc.get(m)
        if s is None:
            acc[m] = c
        else:
            s = s + c
            if s:
                acc[m] = s
            else:
                del acc[m]
    if cap < max(f.cap, g.cap):
        for m in [m for m in acc if sum(m) > cap]:
            tail += acc.pop(m).abs_upper()
    return TruncatedSeries._raw(f.dim, cap, acc, tail)


def multiply(f: TruncatedSeries, g: TruncatedSeries) -> TruncatedSeries:
    """Truncated product with a submultiplicative tail estimate.

    The discarded part of the true product is bounded by the l1 mass of the
    stored products above the cap plus
    ``tail_f*upper(g) + tail_g*upper(f) + tail_f*tail_g``.
    """
    _check_same_dim(f, g)
    cap = min(f.cap, g.cap)
    kept: dict = {}
    dropped: dict = {}
    g_items = [(m, sum(m), c) for m, c in g.terms.items()]
    for m1, c1 in f.terms.items():
        d1 = sum(m1)
        for m2, d2, c2 in g_items:
            m = tuple(a + b for a, b in zip(m1, m2))
            target = kept if d1 + d2 <= cap else dropped
            prev = target.get(m)
            target[m] = c1 * c2 if prev is None else prev + c1 * c2
    terms = {m: c for m, c in kept.items() if c}
    tail = sum((c.abs_upper() for c in dropped.values()), Fraction(0))
    tf, tg = f.tail_bound, g.tail_bound
    if tf is not None or tg is not None:
        tf = tf or Fraction(0)
        tg = tg or Fraction(0)
        tail += tf * wiener_norm(g).upper + tg * wiener_norm(f).upper + tf * tg
    return TruncatedSeries._raw(f.dim, cap, terms, tail)


def wiener_norm(f: TruncatedSeries) -> NormEnclosure:
    """Enclosure of the l1 norm: sum of coefficient moduli plus the tail."""
    lower = Fraction(0)
    upper = Fraction(0)
    real = True
    for c in f.terms.values():
        if c.im == 0:
            a = abs(c.re)
            lower += a
            upper += a
        else:
            real = False
            lower += c.abs_lower()
            upper += c.abs_upper()
    if f.tail_bound is not None:
        upper += f.tail_bound
    return NormEnclosure(lower, upper, real and f.tail_bound is None)


def _check_point(f: TruncatedSeries, z) -> tuple:
    z = tuple(complex(x) for x in z)
    if len(z) != f.dim:
        raise DimensionError(f"point has length {len(z)}, series has dimension {f.dim}")
    return z


def evaluate(f: TruncatedSeries, z: Sequence[complex]) -> tuple[complex, float]:
    """Value of the stored polynomial at ``z`` and an error bound.

    The bound is the tail bound (valid when every ``|z_k| <= 1``) plus a
    running-error estimate for the double precision summation.
    """
    z = _check_point(f, z)
    total = 0j
    magnitude = 0.0
    depth = 1
    for mono, c in f.terms.items():
        term = complex(c)
        for zk, e in zip(z, mono):
            if e:
                term *= zk**e
        total += term
        magnitude += abs(term)
        depth = max(depth, sum(mono) + 2)
    rounding = (depth + len(f.terms) + 2) * _EPS * magnitude
    tail = float(f.tail_bound) if f.tail_bound is not None else 0.0
    return total, tail + rounding


def _coefficient_arrays(f: TruncatedSeries):
    if not f.terms:
        return np.zeros((0, f.dim), dtype=np.int64), np.zeros(0, dtype=complex)
    monos = list(f.terms)
    exps = np.array(monos, dtype=np.int64).reshape(len(monos), f.dim)
    coeffs = np.array([complex(f.terms[m]) for m in monos], dtype=complex)
    return exps, coeffs


def evaluate_many(f: TruncatedSeries, points, chunk: int = 4096) -> np.ndarray:
    """Vectorised evaluation of the stored polynomial at an ``(m, dim)`` array."""
    pts = np.asarray(points, dtype=complex)
    if pts.ndim == 1:
        pts = pts.reshape(1, -1)
    if pts.shape[1] != f.dim:
        raise DimensionError(f"points have length {pts.shape[1]}, series has dimension {f.dim}")
    exps, coeffs = _coefficient_arrays(f)
    out = np.zeros(pts.shape[0], dtype=complex)
    if coeffs.size == 0:
        return out
    maxdeg = int(exps.max()) if exps.size else 0
    for start in range(0, pts.shape[0], chunk):
        block = pts[start:start + chunk]
        # powers[k][:, e] = z_k ** e
        powers = [np.power.outer(block[:, k], np.arange(maxdeg + 1)) for k in range(f.dim)]
        monos = np.ones((block.shape[0], exps.shape[0]), dtype=complex)
        for k in range(f.dim):
            monos *= powers[k][:, exps[:, k]]
        out[start:start + chunk] = monos @ coeffs
    return out


def torus_grid(dim: int, resolution: int, radius: float = 1.0) -> np.ndarray:
    """All points ``radius * (w^{k_1}, ..., w^{k_d})`` with ``w = exp(2 pi i / resolution)``."""
    roots = radius * np.exp(2j * np.pi * np.arange(resolution) / resolution)
    # exact 1 at k = 0 keeps grid maxima like |z + w| = 2 free of rounding
    roots[0] = radius
    grid = np.array(list(itertools.product(roots, repeat=dim)), dtype=complex)
    return grid.reshape(-1, dim)


def sup_norm_lower(f: TruncatedSeries, resolution: int) -> float:
    """Max of ``|f|`` over a grid on the distinguished torus.

    A lower bound for the sup norm over the polydisc (up to floating point).
    """
    if resolution < 1:
        raise PreconditionError("resolution must be at least 1")
    if not f.terms:
        return 0.0
    values = evaluate_many(f, torus_grid(f.dim, resolution))
    return float(np.max(np.abs(values)))


def dilate(f: TruncatedSeries, r) -> TruncatedSeries:
    """``z -> f(r z)``: coefficient of degree ``k`` scaled by ``r**k``."""
    r = as_fraction(r)
    if not 0 <= r <= 1:
        raise PreconditionError(f"dilation factor {r} outside [0, 1]")
    powers: dict = {}
    terms = {}
    for m, c in f.terms.items():
        k = sum(m)
        p = powers.get(k)
        if p is None:
            p = powers[k] = r**k
        if p:
            terms[m] = c * p
    return TruncatedSeries._raw(f.dim, f.cap, terms, f.tail_bound)


def diagonal(f: TruncatedSeries) -> TruncatedSeries:
    """Restriction to the diagonal, ``(Df)(z) = f(z, ..., z)``."""
    acc: dict = {}
    for m, c in f.terms.items():
        k = (sum(m),)
        acc[k] = acc.get(k, ZERO) + c
    return TruncatedSeries._raw(1, f.cap, {m: c for m, c in acc.items() if c}, f.tail_bound)


@lru_cache(maxsize=None)
def _average_power(k: int, d: int) -> tuple:
    # ((z_1 + ... + z_d) / d) ** k as (monomial, Fraction) pairs
    scale = Fraction(1, d**k)
    fk = math.factorial(k)
    out = []
    for n in compositions(k, d):
        mult = fk
        for e in n:
            mult //= math.factorial(e)
        out.append((n, mult * scale))
    return tuple(out)


def lift(g: TruncatedSeries, d: int) -> TruncatedSeries:
    """``(Ug)(z_1, ..., z_d) = g((z_1 + ... + z_d) / d)`` for univariate ``g``.

    The substituted mean has l1 norm 1, so the tail bound carries over.
    """
    if g.dim != 1:
        raise DimensionError("lift expects a univariate series")
    if d < 1:
        raise PreconditionError("target dimension must be positive")
    acc: dict = {}
    for (k,), c in g.terms.items():
        for n, w in _average_power(k, d):
            term = c * w
            prev = acc.get(n)
            acc[n] = term if prev is None else prev + term
    return TruncatedSeries._raw(d, g.cap, {m: c for m, c in acc.items() if c}, g.tail_bound)


# -- canonical text form -----------------------------------------------------

def to_text(f: TruncatedSeries, header: bool = True) -> str:
    """Canonical interchange text.

    One ``e1,...,ed<TAB>re<TAB>im`` line per term in output order and an
    optional ``tail<TAB>bound`` line.  The leading ``#`` header carries the
    dimension and cap so the zero series round-trips.
    """
    lines = []
    if header:
        lines.append(f"# z dim={f.dim} cap={f.cap}")
    for m, c in f.sorted_terms():
        lines.append(
            ",".join(str(e) for e in m) + f"\t{format_fraction(c.re)}\t{format_fraction(c.im)}"
        )
    if f.tail_bound is not None:
        lines.append(f"tail\t{format_fraction(f.tail_bound)}")
    return "\n".join(lines) + "\n"


def parse_header(line: str) -> tuple[str, dict]:
    parts = line.lstrip("#").split()
    basis = "z"
    opts = {}
    for p in parts:
        if "=" in p:
            key, _, val = p.partition("=")
            try:
                opts[key] = int(val)
            except ValueError:
                raise ParseError(f"bad header field {p!r}") from None
        elif p in ("z", "e"):
            basis = p
    return basis, opts


def read_term_lines(text: str):
    """Shared reader for the series and elementary-series text forms.

    Returns ``(basis, header_options, terms, tail)``.
    """
    basis, opts = "z", {}
    terms = []
    tail = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            if lineno == 1 or not terms:
                basis, opts = parse_header(line)
            continue
        fields = line.split("\t") if "\t" in line else line.split()
        try:
            if fields[0] == "tail":
                if len(fields) != 2:
                    raise ValueError
                tail = Fraction(fields[1])
                continue
            if len(fields) not in (2, 3):
                raise ValueError
            mono = tuple(int(e) for e in fields[0].split(","))
            re = Fraction(fields[1])
            im = Fraction(fields[2]) if len(fields) == 3 else Fraction(0)
        except (ValueError, ZeroDivisionError):
            raise ParseError(f"malformed series line {lineno}: {raw!r}") from None
        terms.append((mono, ComplexRational(re, im)))
    return basis, opts, terms, tail


def from_text(text: str, dim: int | None = None, cap: int | None = None) -> TruncatedSeries:
    """Inverse of :func:`to_text`; explicit ``dim``/``cap`` override the header."""
    basis, opts, terms, tail = read_term_lines(text)
    if basis != "z":
        raise ParseError("expected a z-basis series, found an e-basis header")
    if dim is None:
        dim = opts.get("dim")
    if dim is None:
        if not terms:
            raise ParseError("cannot infer dimension of an empty series without a header")
        dim = len(terms[0][0])
    if cap is None:
        cap = opts.get("cap")
    if cap is None:
        cap = max((sum(m) for m, _ in terms), default=0)
    f = make_series(dim, cap, terms)
    if tail:
        f = TruncatedSeries._raw(dim, f.cap, f.terms, (f.tail_bound or 0) + tail)
    return f

