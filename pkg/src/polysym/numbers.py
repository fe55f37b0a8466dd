"""Exact complex rationals.

Real and imaginary parts are :class:`fractions.Fraction`, so every
coefficient operation is exact.  Floating point only enters through
``complex(c)``.
"""
from __future__ import annotations

from fractions import Fraction
from numbers import Rational as _RationalABC

__all__ = ["ComplexRational", "as_coeff", "as_fraction", "format_fraction"]


def as_fraction(x) -> Fraction:
    """Exact conversion of ints, Fractions, floats and decimal strings."""
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (int, _RationalABC)):
        return Fraction(x)
    if isinstance(x, float):
        return Fraction.from_float(x)
    if isinstance(x, str):
        return Fraction(x)
    raise TypeError(f"cannot convert {type(x).__name__} to an exact rational")


def format_fraction(x: Fraction) -> str:
    return f"{x.numerator}/{x.denominator}"


def _binary(method):
    # unknown operand types defer to the other side's reflected operator
    def wrapper(self, other):
        try:
            other = as_coeff(other)
        except TypeError:
            return NotImplemented
        return method(self, other)

    wrapper.__name__ = method.__name__
    return wrapper


class ComplexRational:
    __slots__ = ("re", "im")

    def __init__(self, re=0, im=0):
        self.re = as_fraction(re)
        self.im = as_fraction(im)

    @classmethod
    def _make(cls, re: Fraction, im: Fraction) -> "ComplexRational":
        obj = object.__new__(cls)
        obj.re = re
        obj.im = im
        return obj

    # -- predicates -------------------------------------------------------
    def __bool__(self):
        return bool(self.re) or bool(self.im)

    @property
    def is_real(self) -> bool:
        return self.im == 0

    # -- moduli -----------------------------------------------------------
    def abs_lower(self) -> Fraction:
        """max(|re|, |im|), a lower bound for the modulus (exact when real)."""
        if self.im == 0:
            return abs(self.re)
        return max(abs(self.re), abs(self.im))

    def abs_upper(self) -> Fraction:
        """|re| + |im|, the rectangular majorant of the modulus."""
        return abs(self.re) + abs(self.im)

    # -- arithmetic -------------------------------------------------------
    @_binary
    def __add__(self, other):
        return ComplexRational._make(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    @_binary
    def __sub__(self, other):
        return ComplexRational._make(self.re - other.re, self.im - other.im)

    @_binary
    def __rsub__(self, other):
        return other - self

    def __neg__(self):
        return ComplexRational._make(-self.re, -self.im)

    @_binary
    def __mul__(self, other):
        a, b, c, d = self.re, self.im, other.re, other.im
        if b == 0 and d == 0:
            return ComplexRational._make(a * c, b)
        return ComplexRational._make(a * c - b * d, a * d + b * c)

    __rmul__ = __mul__

    @_binary
    def __truediv__(self, other):
        c, d = other.re, other.im
        if d == 0:
            if c == 0:
                raise ZeroDivisionError("division by exact zero")
            return ComplexRational._make(self.re / c, self.im / c)
        den = c * c + d * d
        return self * ComplexRational._make(c / den, -d / den)

    def __pow__(self, k: int):
        if k < 0:
            return ComplexRational._make(Fraction(1), Fraction(0)) / self**(-k)
        result = ComplexRational._make(Fraction(1), Fraction(0))
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def conjugate(self):
        return ComplexRational._make(self.re, -self.im)

    # -- comparison / conversion ------------------------------------------
    def __eq__(self, other):
        try:
            other = as_coeff(other)
        except TypeError:
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __hash__(self):
        return hash((self.re, self.im))

    def __complex__(self):
        return complex(float(self.re), float(self.im))

    def __repr__(self):
        if self.im == 0:
            return f"ComplexRational({self.re})"
        return f"ComplexRational({self.re}, {self.im})"

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        if self.re == 0:
            return f"{self.im}*i"
        sign = "+" if self.im > 0 else "-"
        return f"({self.re}{sign}{abs(self.im)}*i)"


ZERO = ComplexRational._make(Fraction(0), Fraction(0))
ONE = ComplexRational._make(Fraction(1), Fraction(0))


def as_coeff(x) -> ComplexRational:
    if isinstance(x, ComplexRational):
        return x
    if isinstance(x, complex):
        return ComplexRational._make(Fraction.from_float(x.real), Fraction.from_float(x.imag))
    return ComplexRational._make(as_fraction(x), Fraction(0))
