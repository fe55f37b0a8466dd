"""Elementary symmetric polynomials and rewriting symmetric series in that basis."""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache
from math import comb
from typing import Iterable, Mapping, Sequence

from .errors import DimensionError, ParseError, PreconditionError
from .numbers import ONE, ZERO, ComplexRational, as_coeff, format_fraction
from .series import TruncatedSeries, evaluate, graded_lex_key, read_term_lines
from .symmetry import elementary_values, is_symmetric

__all__ = [
    "ElementarySeries",
    "elementary_poly",
    "homogeneous_parts",
    "to_elementary",
    "from_elementary",
    "series_to_elementary",
    "evaluate_elementary",
    "compare_composition",
    "elementary_to_text",
    "elementary_from_text",
]


def weight(m: Sequence[int]) -> int:
    """Weighted degree of ``e_1^{m_1} ... e_d^{m_d}`` (``e_j`` has weight ``j``)."""
    return sum((j + 1) * e for j, e in enumerate(m))


class ElementarySeries:
    """Sparse series in the elementary symmetric polynomials ``e_1..e_d``.

    Truncated by weighted degree ``cap`` so that rewriting a cap-``N`` series
    loses nothing through degree ``N``.  Like :class:`TruncatedSeries`,
    equality ignores the cap.
    """

    __slots__ = ("dim", "cap", "terms")

    def __init__(self, dim: int, cap: int, terms: Mapping | None = None):
        if dim < 1:
            raise PreconditionError("dimension must be positive")
        if cap < 0:
            raise PreconditionError("cap must be non-negative")
        self.dim = dim
        self.cap = cap
        clean = {}
        for m, c in (terms or {}).items():
            m = tuple(int(e) for e in m)
            if len(m) != dim:
                raise DimensionError(f"exponent vector {m} does not have length {dim}")
            if any(e < 0 for e in m):
                raise PreconditionError(f"negative exponent in {m}")
            c = as_coeff(c)
            if c and weight(m) <= cap:
                clean[m] = c
        self.terms = clean

    @classmethod
    def _raw(cls, dim, cap, terms):
        obj = object.__new__(cls)
        obj.dim, obj.cap, obj.terms = dim, cap, terms
        return obj

    @classmethod
    def constant(cls, value, dim: int, cap: int) -> "ElementarySeries":
        c = as_coeff(value)
        return cls._raw(dim, cap, {(0,) * dim: c} if c else {})

    @classmethod
    def generator(cls, j: int, dim: int, cap: int) -> "ElementarySeries":
        """The series consisting of the single variable ``e_j``."""
        if not 1 <= j <= dim:
            raise PreconditionError(f"elementary index {j} outside 1..{dim}")
        m = tuple(1 if k == j - 1 else 0 for k in range(dim))
        return cls._raw(dim, cap, {m: ONE} if j <= cap else {})

    def coefficient(self, m: Sequence[int]) -> ComplexRational:
        return self.terms.get(tuple(m), ZERO)

    def sorted_terms(self) -> list:
        return [(m, self.terms[m]) for m in sorted(self.terms, key=lambda m: (weight(m), tuple(-e for e in m)))]

    def _coerce(self, other) -> "ElementarySeries":
        if isinstance(other, ElementarySeries):
            if other.dim != self.dim:
                raise DimensionError(f"dimension mismatch: {self.dim} vs {other.dim}")
            return other
        return ElementarySeries.constant(other, self.dim, self.cap)

    def __add__(self, other):
        other = self._coerce(other)
        cap = min(self.cap, other.cap)
        acc = dict(self.terms)
        for m, c in other.terms.items():
            acc[m] = acc.get(m, ZERO) + c
        return ElementarySeries._raw(
            self.dim, cap, {m: c for m, c in acc.items() if c and weight(m) <= cap}
        )

    __radd__ = __add__

    def __neg__(self):
        return ElementarySeries._raw(self.dim, self.cap, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if not isinstance(other, ElementarySeries):
            c = as_coeff(other)
            return ElementarySeries._raw(
                self.dim, self.cap, {m: a * c for m, a in self.terms.items()} if c else {}
            )
        other = self._coerce(other)
        cap = min(self.cap, other.cap)
        acc: dict = {}
        for m1, c1 in self.terms.items():
            w1 = weight(m1)
            for m2, c2 in other.terms.items():
                if w1 + weight(m2) > cap:
                    continue
                m = tuple(a + b for a, b in zip(m1, m2))
                acc[m] = acc.get(m, ZERO) + c1 * c2
        return ElementarySeries._raw(self.dim, cap, {m: c for m, c in acc.items() if c})

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (ONE / as_coeff(other))

    def __pow__(self, k: int):
        if not isinstance(k, int) or k < 0:
            raise PreconditionError("powers must be non-negative integers")
        result = ElementarySeries.constant(1, self.dim, self.cap)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other):
        if not isinstance(other, ElementarySeries):
            try:
                other = self._coerce(other)
            except TypeError:
                return NotImplemented
        return self.dim == other.dim and self.terms == other.terms

    __hash__ = None

    def __repr__(self):
        from .parser import render

        return f"ElementarySeries(dim={self.dim}, cap={self.cap}: {render(self)})"


def elementary_poly(k: int, d: int, cap: int | None = None) -> TruncatedSeries:
    """``e_k`` in ``d`` variables: the sum of all products of ``k`` distinct coordinates."""
    if d < 1:
        raise PreconditionError("dimension must be positive")
    if not 1 <= k <= d:
        raise PreconditionError(f"elementary index {k} outside 1..{d}")
    cap = k if cap is None else cap
    terms = {}
    for subset in itertools.combinations(range(d), k):
        terms[tuple(1 if j in subset else 0 for j in range(d))] = ONE
    return TruncatedSeries(d, cap, terms)


@lru_cache(maxsize=4096)
def _expand_elementary_monomial(m: tuple) -> TruncatedSeries:
    # e^m expanded exactly; homogeneous of degree weight(m)
    d = len(m)
    w = weight(m)
    result = TruncatedSeries.constant(1, d, w)
    for j, e in enumerate(m, 1):
        if e:
            result = result * (elementary_poly(j, d, w) ** e)
    return result


def homogeneous_parts(f: TruncatedSeries) -> list:
    """``[p_0, ..., p_cap]`` with ``p_k`` the degree-``k`` part of ``f``.

    Parts are exact polynomials; the tail bound of ``f`` is not distributed
    among them.
    """
    buckets: list = [dict() for _ in range(f.cap + 1)]
    for m, c in f.terms.items():
        buckets[sum(m)][m] = c
    return [TruncatedSeries._raw(f.dim, f.cap, b) for b in buckets]


def _leading(terms: Mapping):
    return max(terms, key=graded_lex_key)


def to_elementary(p: TruncatedSeries, require_exact: bool = True) -> ElementarySeries:
    """Rewrite a symmetric polynomial in the elementary basis.

    Leading-term elimination: the graded-lex leading monomial ``z^a`` of a
    symmetric polynomial has ``a_1 >= ... >= a_d``, and
    ``e_1^{a_1-a_2} ... e_d^{a_d}`` has exactly that leading monomial with
    coefficient 1.  Subtracting and repeating strictly lowers the leader.

    With ``require_exact=False`` a nonzero tail bound is tolerated and only
    the stored polynomial part is rewritten.
    """
    if require_exact and not p.is_polynomial:
        raise PreconditionError("input is a truncated series, not a polynomial")
    if not is_symmetric(p):
        raise PreconditionError("input is not symmetric")
    d = p.dim
    remaining = dict(p.terms)
    out: dict = {}
    previous = None
    while remaining:
        lead = _leading(remaining)
        assert previous is None or graded_lex_key(lead) < graded_lex_key(previous), (
            "leading monomial failed to decrease"
        )
        previous = lead
        c = remaining[lead]
        m = tuple(lead[j] - lead[j + 1] for j in range(d - 1)) + (lead[d - 1],)
        out[m] = c
        for mono, a in _expand_elementary_monomial(m).terms.items():
            v = remaining.get(mono, ZERO) - c * a
            if v:
                remaining[mono] = v
            else:
                remaining.pop(mono, None)
    return ElementarySeries._raw(d, p.cap, out)


def from_elementary(q: ElementarySeries, cap: int | None = None) -> TruncatedSeries:
    """Substitute ``e_j(z)`` for each ``e_j`` and expand, truncating at ``cap``.

    Every coefficient of ``e^m`` is positive, so its l1 norm is
    ``prod_j C(d, j)^{m_j}``; dropped terms feed the tail bound with that.
    """
    cap = q.cap if cap is None else cap
    d = q.dim
    acc: dict = {}
    tail = Fraction(0)
    for m, c in q.terms.items():
        if weight(m) > cap:
            mass = Fraction(1)
            for j, e in enumerate(m, 1):
                mass *= Fraction(comb(d, j)) ** e
            tail += c.abs_upper() * mass
            continue
        for mono, a in _expand_elementary_monomial(m).terms.items():
            acc[mono] = acc.get(mono, ZERO) + c * a
    return TruncatedSeries._raw(d, cap, {k: v for k, v in acc.items() if v}, tail)


def series_to_elementary(f: TruncatedSeries, cap: int | None = None) -> ElementarySeries:
    """Degree-by-degree rewrite of a symmetric series into a formal e-series.

    Each homogeneous part is an exact symmetric polynomial of degree ``k``
    and rewrites to e-monomials of weight exactly ``k``; the results are
    summed with no resummation or convergence claim.
    """
    cap = f.cap if cap is None else cap
    if cap > f.cap:
        raise PreconditionError(f"cap {cap} exceeds the series cap {f.cap}")
    if not is_symmetric(f):
        raise PreconditionError("input is not symmetric")
    out: dict = {}
    for k, part in enumerate(homogeneous_parts(f)):
        if k > cap or not part.terms:
            continue
        out.update(to_elementary(part).terms)
    return ElementarySeries._raw(f.dim, cap, out)


def evaluate_elementary(g: ElementarySeries, values: Sequence[complex]) -> complex:
    """``g(s_1, ..., s_d)`` in double precision."""
    values = [complex(v) for v in values]
    if len(values) != g.dim:
        raise DimensionError(f"expected {g.dim} values, got {len(values)}")
    total = 0j
    for m, c in g.terms.items():
        term = complex(c)
        for v, e in zip(values, m):
            if e:
                term *= v**e
        total += term
    return total


def compare_composition(f: TruncatedSeries, g: ElementarySeries, points: Iterable) -> float:
    """Largest ``|f(z) - g(e_1(z), ..., e_d(z))|`` over ``points``.

    A numerical probe only: agreement at sample points proves nothing about
    convergence of ``g`` on the image of the polydisc.
    """
    if f.dim != g.dim:
        raise DimensionError(f"dimension mismatch: {f.dim} vs {g.dim}")
    worst = 0.0
    for z in points:
        fz, _ = evaluate(f, z)
        gz = evaluate_elementary(g, elementary_values(z))
        worst = max(worst, abs(fz - gz))
    return worst


def elementary_to_text(g: ElementarySeries, header: bool = True) -> str:
    lines = [f"# e dim={g.dim} cap={g.cap}"] if header else []
    for m, c in g.sorted_terms():
        lines.append(",".join(map(str, m)) + f"\t{format_fraction(c.re)}\t{format_fraction(c.im)}")
    return "\n".join(lines) + "\n"


def elementary_from_text(text: str, dim: int | None = None, cap: int | None = None) -> ElementarySeries:
    basis, opts, terms, tail = read_term_lines(text)
    if basis != "e":
        raise ParseError("expected an e-basis header ('# e ...')")
    if tail:
        raise ParseError("elementary series carry no tail line")
    dim = dim or opts.get("dim") or (len(terms[0][0]) if terms else None)
    if dim is None:
        raise ParseError("cannot infer dimension of an empty series without a header")
    if cap is None:
        cap = opts.get("cap", max((weight(m) for m, _ in terms), default=0))
    acc: dict = {}
    for m, c in terms:
        if len(m) != dim:
            raise DimensionError(f"exponent vector {m} does not have length {dim}")
        acc[m] = acc.get(m, ZERO) + c
    return ElementarySeries(dim, cap, acc)
