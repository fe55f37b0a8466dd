"""The coordinate-permutation action of S_d and the orbit space of the polydisc."""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .errors import DimensionError, PreconditionError
from .series import TruncatedSeries

__all__ = [
    "Permutation",
    "OrbitPoint",
    "apply_perm_point",
    "apply_perm_series",
    "symmetrize",
    "is_symmetric",
    "orbit",
    "canonical",
    "quotient_dist",
    "elementary_values",
    "separating_elementary",
    "contraction_homotopy",
    "distinct_permutations",
]

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{1, ..., d}`` given by its list of images.

    Acts on points by ``(sigma z)_k = z_{sigma(k)}`` and on functions by
    ``(sigma f)(z) = f(sigma z)``.
    """

    images: tuple

    def __post_init__(self):
        images = tuple(int(i) for i in self.images)
        if sorted(images) != list(range(1, len(images) + 1)):
            raise PreconditionError(f"{images} is not a permutation of 1..{len(images)}")
        object.__setattr__(self, "images", images)

    @classmethod
    def identity(cls, d: int) -> "Permutation":
        return cls(tuple(range(1, d + 1)))

    @classmethod
    def transposition(cls, d: int, a: int, b: int) -> "Permutation":
        images = list(range(1, d + 1))
        images[a - 1], images[b - 1] = images[b - 1], images[a - 1]
        return cls(tuple(images))

    @classmethod
    def all(cls, d: int) -> Iterator["Permutation"]:
        for p in itertools.permutations(range(1, d + 1)):
            yield cls(p)

    @classmethod
    def adjacent_transpositions(cls, d: int) -> list:
        return [cls.transposition(d, k, k + 1) for k in range(1, d)]

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, k: int) -> int:
        return self.images[k - 1]

    def compose(self, other: "Permutation") -> "Permutation":
        """``(self o other)(k) = self(other(k))``."""
        if other.degree != self.degree:
            raise DimensionError("cannot compose permutations of different degree")
        return Permutation(tuple(self.images[other.images[k] - 1] for k in range(self.degree)))

    __matmul__ = compose

    def inverse(self) -> "Permutation":
        inv = [0] * self.degree
        for k, img in enumerate(self.images, 1):
            inv[img - 1] = k
        return Permutation(tuple(inv))


def apply_perm_point(sigma: Permutation, z: Sequence) -> tuple:
    if len(z) != sigma.degree:
        raise DimensionError(f"point of length {len(z)} vs permutation of degree {sigma.degree}")
    return tuple(z[i - 1] for i in sigma.images)


def apply_perm_series(sigma: Permutation, f: TruncatedSeries) -> TruncatedSeries:
    """The series ``sigma f`` with ``(sigma f)(z) = f(sigma z)``.

    ``f(sigma z)`` replaces ``z_j`` by ``z_{sigma(j)}``, so the exponent
    ``n_j`` moves to slot ``sigma(j)``.
    """
    if f.dim != sigma.degree:
        raise DimensionError(f"series of dimension {f.dim} vs permutation of degree {sigma.degree}")
    images = sigma.images
    terms = {}
    for mono, c in f.terms.items():
        moved = [0] * f.dim
        for j, e in enumerate(mono):
            moved[images[j] - 1] = e
        terms[tuple(moved)] = c
    return TruncatedSeries._raw(f.dim, f.cap, terms, f.tail_bound)


def distinct_permutations(seq: Sequence) -> Iterator[tuple]:
    """Distinct rearrangements of ``seq`` in lexicographic order."""
    items = sorted(seq)
    n = len(items)
    while True:
        yield tuple(items)
        i = n - 2
        while i >= 0 and items[i] >= items[i + 1]:
            i -= 1
        if i < 0:
            return
        j = n - 1
        while items[j] <= items[i]:
            j -= 1
        items[i], items[j] = items[j], items[i]
        items[i + 1:] = reversed(items[i + 1:])


def symmetrize(f: TruncatedSeries) -> TruncatedSeries:
    """The averaging projector ``(1/d!) sum_sigma sigma f``.

    Summing ``sigma(z^n)`` over S_d hits each distinct rearrangement of ``n``
    equally often, so each term spreads evenly over the orbit of its exponent.
    """
    acc: dict = {}
    for mono, c in f.terms.items():
        images = list(distinct_permutations(mono))
        share = c * Fraction(1, len(images))
        for m in images:
            prev = acc.get(m)
            acc[m] = share if prev is None else prev + share
    return TruncatedSeries._raw(f.dim, f.cap, {m: c for m, c in acc.items() if c}, f.tail_bound)


def is_symmetric(f: TruncatedSeries) -> bool:
    # adjacent transpositions generate S_d
    return all(apply_perm_series(s, f) == f for s in Permutation.adjacent_transpositions(f.dim))


# -- orbit space -------------------------------------------------------------

def _order_key(x: complex):
    x = complex(x)
    return (x.real, x.imag)


def canonical(z: Sequence) -> tuple:
    """Section of the quotient map: coordinates sorted by (Re, Im)."""
    return tuple(sorted((complex(x) for x in z), key=_order_key))


@dataclass(frozen=True)
class OrbitPoint:
    """A point of the closed polydisc together with its orbit representative."""

    rep: tuple
    canonical: tuple

    @classmethod
    def of(cls, z: Sequence) -> "OrbitPoint":
        z = tuple(complex(x) for x in z)
        slack = 1 + 4 * 2.220446049250313e-16
        if any(abs(x) > slack for x in z):
            raise PreconditionError("point lies outside the closed polydisc")
        return cls(z, canonical(z))

    def same_orbit(self, other: "OrbitPoint", tol: float = DEFAULT_TOL) -> bool:
        return quotient_dist(self.rep, other.rep) <= tol


def orbit(z: Sequence) -> set:
    """``{sigma z : sigma in S_d}`` with exact duplicates removed."""
    z = tuple(z)
    return {tuple(z[i] for i in p) for p in itertools.permutations(range(len(z)))}


def _has_perfect_matching(allowed: list) -> bool:
    n = len(allowed)
    match_right = [-1] * n

    def augment(i, seen):
        for j in allowed[i]:
            if not seen[j]:
                seen[j] = True
                if match_right[j] < 0 or augment(match_right[j], seen):
                    match_right[j] = i
                    return True
        return False

    return all(augment(i, [False] * n) for i in range(n))


def quotient_dist(z: Sequence, w: Sequence) -> float:
    """``min_sigma max_k |z_{sigma(k)} - w_k|``, a metric on the orbit space.

    Computed as a bottleneck assignment: the smallest pairwise distance
    threshold that still admits a perfect matching.
    """
    if len(z) != len(w):
        raise DimensionError(f"points of length {len(z)} and {len(w)}")
    n = len(z)
    if n == 0:
        return 0.0
    z = [complex(x) for x in z]
    w = [complex(x) for x in w]
    dist = [[abs(zi - wj) for wj in w] for zi in z]
    candidates = sorted({x for row in dist for x in row})
    lo, hi = 0, len(candidates) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        thr = candidates[mid]
        allowed = [[j for j in range(n) if dist[i][j] <= thr] for i in range(n)]
        if _has_perfect_matching(allowed):
            hi = mid
        else:
            lo = mid + 1
    return float(candidates[lo])


def elementary_values(z: Sequence) -> list:
    """``[e_1(z), ..., e_d(z)]`` via the product ``prod_k (1 + z_k t)``."""
    coeffs = [1 + 0j]
    for x in z:
        x = complex(x)
        padded = coeffs + [0j]
        coeffs = [padded[0]] + [padded[k] + x * padded[k - 1] for k in range(1, len(padded))]
    return coeffs[1:]


def separating_elementary(z: Sequence, w: Sequence, tol: float = DEFAULT_TOL):
    """Smallest ``k`` with ``|e_k(z) - e_k(w)| > tol``, or ``None``.

    ``e_1..e_d`` are the coefficients of ``prod (t - z_k)`` up to sign, so
    they agree exactly when ``z`` and ``w`` lie on the same orbit.
    """
    if len(z) != len(w):
        raise DimensionError(f"points of length {len(z)} and {len(w)}")
    for k, (a, b) in enumerate(zip(elementary_values(z), elementary_values(w)), 1):
        if abs(a - b) > tol:
            return k
    return None


def contraction_homotopy(t: float, z: Sequence) -> OrbitPoint:
    """``H(t, [z]) = [(1 - t) z]``: contracts the orbit space onto ``[0]``."""
    if not 0 <= t <= 1:
        raise PreconditionError(f"homotopy parameter {t} outside [0, 1]")
    s = 1 - t
    return OrbitPoint.of(tuple(s * complex(x) for x in z))

