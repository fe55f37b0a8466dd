"""Expression language for series in z-variables or in elementary e-variables.

Grammar (no implicit multiplication)::

    expr   := term (("+" | "-") term)*
    term   := unary ("*" unary)*
    unary  := ("+" | "-") unary | power
    power  := atom ("^" INTEGER)?
    atom   := NUMBER | "i" | VARIABLE | "(" expr ")"

``NUMBER`` is an integer, a decimal (read exactly) or a rational ``a/b``.
Variables are ``z1..zd`` (``z, w`` when ``d = 2``, ``z`` when ``d = 1``) or
``e1..ed`` (alias ``s1..sd``); the two bases may not be mixed.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from typing import Union

from .elementary import ElementarySeries
from .errors import ParseError
from .numbers import ComplexRational, format_fraction
from .series import TruncatedSeries

__all__ = ["Node", "tokenize", "parse_ast", "parse", "render"]

MAX_EXPONENT = 4096
MAX_DEPTH = 100
MAX_COEFF_BITS = 1 << 16

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>\d+(?:\.\d+)?(?:/\d+)?|\.\d+)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*^()])
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str  # "number" | "name" | "op" | "end"
    text: str
    pos: int  # 1-based


@dataclass(frozen=True)
class Node:
    """Expression tree node.

    ``kind`` is one of ``number, imag, var, add, sub, mul, pow, neg, group``.
    ``value`` holds the Fraction of a number, ``(basis, index)`` of a
    variable, or the integer exponent of a power.
    """

    kind: str
    pos: int
    value: object = None
    children: tuple = ()


def tokenize(text: str) -> list:
    tokens = []
    i = 0
    while i < len(text):
        m = _TOKEN.match(text, i)
        if m is None:
            raise ParseError(f"unexpected character {text[i]!r}", i + 1)
        if m.lastgroup != "ws":
            tokens.append(Token(m.lastgroup, m.group(), i + 1))
        i = m.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0
        self.depth = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def at_op(self, *ops) -> bool:
        return self.tok.kind == "op" and self.tok.text in ops

    def parse(self) -> Node:
        node = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r} (implicit multiplication is not allowed)", self.tok.pos)
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.at_op("+", "-"):
            op = self.take()
            kind = "add" if op.text == "+" else "sub"
            node = Node(kind, op.pos, children=(node, self.term()))
        return node

    def term(self) -> Node:
        node = self.unary()
        while self.at_op("*"):
            op = self.take()
            node = Node("mul", op.pos, children=(node, self.unary()))
        return node

    def unary(self) -> Node:
        if self.at_op("+", "-"):
            op = self.take()
            self._enter(op.pos)
            inner = self.unary()
            self.depth -= 1
            return inner if op.text == "+" else Node("neg", op.pos, children=(inner,))
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.at_op("^"):
            op = self.take()
            exp = self.take()
            if exp.kind != "number" or not exp.text.isdigit():
                raise ParseError("exponent must be a non-negative integer literal", exp.pos)
            k = int(exp.text)
            if k > MAX_EXPONENT:
                raise ParseError(f"exponent {k} exceeds the limit {MAX_EXPONENT}", exp.pos)
            if self.at_op("^"):
                raise ParseError("chained exponents need parentheses", self.tok.pos)
            return Node("pow", op.pos, k, (base,))
        return base

    def atom(self) -> Node:
        t = self.take()
        if t.kind == "number":
            num, _, den = t.text.partition("/")
            if den and int(den) == 0:
                raise ParseError("zero denominator", t.pos)
            value = Fraction(num) / (Fraction(den) if den else 1)
            return Node("number", t.pos, value)
        if t.kind == "name":
            if t.text == "i":
                return Node("imag", t.pos)
            return Node("var", t.pos, _variable(t))
        if t.kind == "op" and t.text == "(":
            self._enter(t.pos)
            inner = self.expr()
            self.depth -= 1
            if not self.at_op(")"):
                raise ParseError("expected ')'", self.tok.pos)
            self.take()
            return Node("group", t.pos, children=(inner,))
        if t.kind == "end":
            raise ParseError("unexpected end of input", t.pos)
        raise ParseError(f"unexpected {t.text!r}", t.pos)

    def _enter(self, pos):
        self.depth += 1
        if self.depth > MAX_DEPTH:
            raise ParseError("expression nested too deeply", pos)


_VAR = re.compile(r"([zes])(\d+)$")


def _variable(t: Token):
    # resolved against the dimension later; here only the shape is checked
    if t.text in ("z", "w"):
        return ("z", t.text)
    m = _VAR.match(t.text)
    if m is None:
        raise ParseError(f"unknown identifier {t.text!r}", t.pos)
    basis = "e" if m.group(1) in "es" else "z"
    return (basis, int(m.group(2)))


def parse_ast(text: str) -> Node:
    return _Parser(text).parse()


def _walk(node: Node):
    stack = [node]
    while stack:
        n = stack.pop()
        yield n
        stack.extend(n.children)


def _resolve_index(node: Node, dim: int) -> int:
    basis, idx = node.value
    if idx == "z":
        if dim > 2:
            raise ParseError("'z' alias is only defined for d <= 2; use z1..zd", node.pos)
        return 1
    if idx == "w":
        if dim != 2:
            raise ParseError("'w' alias is only defined for d = 2", node.pos)
        return 2
    if not 1 <= idx <= dim:
        raise ParseError(f"variable index {idx} outside 1..{dim}", node.pos)
    return idx


class _Builder:
    def __init__(self, basis: str, dim: int, cap: int, truncate: bool):
        self.basis = basis
        self.dim = dim
        self.cap = cap
        self.truncate = truncate

    def const(self, value):
        if self.basis == "z":
            return TruncatedSeries.constant(value, self.dim, self.cap)
        return ElementarySeries.constant(value, self.dim, self.cap)

    def degree(self, s) -> int:
        # total degree in z, weighted degree in e; -1 for zero
        if not s.terms:
            return -1
        if self.basis == "z":
            return s.degree
        return max(sum((j + 1) * e for j, e in enumerate(m)) for m in s.terms)

    def check_cap(self, deg: int, pos: int):
        if not self.truncate and deg > self.cap:
            raise ParseError(
                f"result reaches degree {deg} > cap {self.cap}; raise the cap or allow truncation", pos
            )

    def build(self, node: Node):
        kind = node.kind
        if kind == "number":
            return self.const(node.value)
        if kind == "imag":
            return self.const(ComplexRational(0, 1))
        if kind == "var":
            k = _resolve_index(node, self.dim)
            if self.basis == "z":
                self.check_cap(1, node.pos)
                return TruncatedSeries.variable(k, self.dim, self.cap)
            self.check_cap(k, node.pos)
            return ElementarySeries.generator(k, self.dim, self.cap)
        if kind == "group":
            return self.build(node.children[0])
        if kind == "neg":
            return -self.build(node.children[0])
        if kind == "pow":
            left = self.build(node.children[0])
            k = node.value
            if k and self.degree(left) > 0:
                self.check_cap(k * self.degree(left), node.pos)
            if k * _coeff_bits(left) > MAX_COEFF_BITS:
                raise ParseError("power would produce impractically large coefficients", node.pos)
            return left**k
        if kind in _BINARY:
            # left-deep chains like a+b+...+z are walked iteratively
            spine = []
            while node.kind in _BINARY:
                spine.append(node)
                node = node.children[0]
            acc = self.build(node)
            for op in reversed(spine):
                acc = self.combine(op, acc, self.build(op.children[1]))
            return acc
        raise AssertionError(f"unknown node kind {kind}")

    def combine(self, op: Node, left, right):
        if op.kind == "add":
            return left + right
        if op.kind == "sub":
            return left - right
        dl, dr = self.degree(left), self.degree(right)
        if dl >= 0 and dr >= 0:
            self.check_cap(dl + dr, op.pos)
        return left * right


_BINARY = ("add", "sub", "mul")


def _coeff_bits(s) -> int:
    # rough size of the largest coefficient, enough to refuse runaway powers
    bits = 0
    for c in s.terms.values():
        for x in (c.re, c.im):
            bits = max(bits, x.numerator.bit_length(), x.denominator.bit_length())
    return bits


def parse(text: str, dim: int, cap: int, truncate: bool = False, basis: str | None = None) -> Union[TruncatedSeries, ElementarySeries]:
    """Parse ``text`` into an exact series.

    Returns a :class:`TruncatedSeries` for z-expressions and an
    :class:`ElementarySeries` (weighted cap ``cap``) for e-expressions.
    Constants default to the z-basis unless ``basis`` says otherwise.
    Unless ``truncate`` is set, any product or power reaching beyond ``cap``
    is an error rather than a silent truncation.
    """
    if dim < 1:
        raise ParseError("dimension must be positive")
    if cap < 0:
        raise ParseError("cap must be non-negative")
    try:
        ast = parse_ast(text)
    except RecursionError:
        raise ParseError("expression nested too deeply") from None
    seen = {}
    for node in _walk(ast):
        if node.kind == "var":
            seen.setdefault(node.value[0], node)
    if len(seen) > 1:
        raise ParseError("z-variables and e-variables cannot be mixed", max(n.pos for n in seen.values()))
    found = next(iter(seen), None)
    if basis is not None and found is not None and basis != found:
        raise ParseError(f"expected a {basis}-basis expression", seen[found].pos)
    try:
        return _Builder(found or basis or "z", dim, cap, truncate).build(ast)
    except RecursionError:
        raise ParseError("expression nested too deeply") from None


# -- rendering ---------------------------------------------------------------

def _fraction_text(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else format_fraction(x)


def _coeff_text(c: ComplexRational) -> str:
    if c.im == 0:
        return _fraction_text(c.re)
    im = f"{_fraction_text(abs(c.im))}*i"
    if c.re == 0:
        return f"({'-' if c.im < 0 else ''}{im})"
    return f"({_fraction_text(c.re)}{'-' if c.im < 0 else '+'}{im})"


def _names(basis: str, dim: int) -> list:
    if basis == "e":
        return [f"e{k}" for k in range(1, dim + 1)]
    if dim == 1:
        return ["z"]
    if dim == 2:
        return ["z", "w"]
    return [f"z{k}" for k in range(1, dim + 1)]


def render(s: Union[TruncatedSeries, ElementarySeries]) -> str:
    """Expression text that :func:`parse` maps back to the same stored terms."""
    basis = "e" if isinstance(s, ElementarySeries) else "z"
    names = _names(basis, s.dim)
    if not s.terms:
        return "0"
    order = s.sorted_terms()
    pieces = []
    for mono, c in order:
        factors = []
        for name, e in zip(names, mono):
            if e == 1:
                factors.append(name)
            elif e > 1:
                factors.append(f"{name}^{e}")
        coeff = _coeff_text(c)
        if not factors:
            pieces.append(coeff)
        elif c == 1:
            pieces.append("*".join(factors))
        elif c == -1:
            pieces.append("-" + "*".join(factors))
        else:
            pieces.append(coeff + "*" + "*".join(factors))
    return " + ".join(pieces).replace("+ -", "- ")
