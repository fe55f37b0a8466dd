"""Square matrices over truncated series: determinants, norm bounds and SL_n homotopies."""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .errors import DimensionError, NumericalBreakdown, PreconditionError
from .numbers import as_coeff, as_fraction
from .series import TruncatedSeries, dilate, wiener_norm

__all__ = [
    "SeriesMatrix",
    "Transvection",
    "det",
    "op_norm_bound",
    "dilation_path",
    "factor_constant_sl",
    "transvection_product",
    "full_homotopy_sample",
]

MAX_DET_SIZE = 6


class SeriesMatrix:
    """An ``n x n`` matrix of series sharing one dimension and one cap."""

    __slots__ = ("n", "entries")

    def __init__(self, entries: Sequence[Sequence[TruncatedSeries]]):
        rows = tuple(tuple(r) for r in entries)
        n = len(rows)
        if n == 0 or any(len(r) != n for r in rows):
            raise DimensionError("matrix must be square and non-empty")
        flat = [e for r in rows for e in r]
        if len({e.dim for e in flat}) != 1:
            raise DimensionError("matrix entries have different dimensions")
        if len({e.cap for e in flat}) != 1:
            raise PreconditionError("matrix entries have different caps")
        self.n = n
        self.entries = rows

    @property
    def dim(self) -> int:
        return self.entries[0][0].dim

    @property
    def cap(self) -> int:
        return self.entries[0][0].cap

    def __getitem__(self, ij):
        i, j = ij
        return self.entries[i][j]

    @classmethod
    def identity(cls, n: int, dim: int, cap: int) -> "SeriesMatrix":
        one = TruncatedSeries.constant(1, dim, cap)
        zero = TruncatedSeries.zero(dim, cap)
        return cls([[one if i == j else zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_constants(cls, values, dim: int, cap: int) -> "SeriesMatrix":
        return cls([[TruncatedSeries.constant(as_coeff(x), dim, cap) for x in row] for row in values])

    @classmethod
    def elementary(cls, n: int, i: int, j: int, f: TruncatedSeries) -> "SeriesMatrix":
        """``E_ij(f) = I + f e_ij`` (1-based indices, ``i != j``)."""
        if i == j or not (1 <= i <= n and 1 <= j <= n):
            raise PreconditionError(f"invalid transvection position ({i}, {j})")
        ident = cls.identity(n, f.dim, f.cap)
        rows = [list(r) for r in ident.entries]
        rows[i - 1][j - 1] = f
        return cls(rows)

    def __matmul__(self, other: "SeriesMatrix") -> "SeriesMatrix":
        if other.n != self.n:
            raise DimensionError("matrix sizes differ")
        n = self.n
        out = []
        for i in range(n):
            row = []
            for j in range(n):
                acc = self.entries[i][0] * other.entries[0][j]
                for k in range(1, n):
                    acc = acc + self.entries[i][k] * other.entries[k][j]
                row.append(acc)
            out.append(row)
        return SeriesMatrix(out)

    def apply(self, v: Sequence[TruncatedSeries]) -> list:
        """Matrix-vector product ``M v``."""
        if len(v) != self.n:
            raise DimensionError("vector length differs from matrix size")
        out = []
        for row in self.entries:
            acc = row[0] * v[0]
            for m, x in zip(row[1:], v[1:]):
                acc = acc + m * x
            out.append(acc)
        return out

    def map(self, fn) -> "SeriesMatrix":
        return SeriesMatrix([[fn(e) for e in row] for row in self.entries])

    def constant_terms(self) -> np.ndarray:
        return np.array([[complex(e.constant_term()) for e in row] for row in self.entries])

    def __eq__(self, other):
        if not isinstance(other, SeriesMatrix):
            return NotImplemented
        return self.n == other.n and all(
            a == b for ra, rb in zip(self.entries, other.entries) for a, b in zip(ra, rb)
        )

    __hash__ = None

    def __repr__(self):
        return f"SeriesMatrix({[list(r) for r in self.entries]!r})"


@dataclass(frozen=True)
class Transvection:
    """``E_ij(alpha) = I + alpha e_ij`` over the constants, 1-based, ``i != j``."""

    i: int
    j: int
    alpha: complex

    def __post_init__(self):
        if self.i == self.j:
            raise PreconditionError("a transvection needs i != j")

    def matrix(self, n: int) -> np.ndarray:
        m = np.eye(n, dtype=complex)
        m[self.i - 1, self.j - 1] += self.alpha
        return m


def det(M: SeriesMatrix) -> TruncatedSeries:
    """Exact truncated determinant by cofactor expansion (``n <= 6``)."""
    n = M.n
    if n > MAX_DET_SIZE:
        raise PreconditionError(f"determinant limited to n <= {MAX_DET_SIZE}, got {n}")
    entries = M.entries

    @lru_cache(maxsize=None)
    def minor(row: int, cols: tuple) -> TruncatedSeries:
        # determinant of rows row..n-1 restricted to the given columns
        if row == n - 1:
            return entries[row][cols[0]]
        total = None
        for k, c in enumerate(cols):
            a = entries[row][c]
            if not a.terms and a.tail_bound is None:
                continue
            term = a * minor(row + 1, cols[:k] + cols[k + 1:])
            if k % 2:
                term = -term
            total = term if total is None else total + term
        return total if total is not None else TruncatedSeries.zero(M.dim, M.cap)

    return minor(0, tuple(range(n)))


def is_special_linear(M: SeriesMatrix) -> bool:
    return det(M) == TruncatedSeries.constant(1, M.dim, M.cap)


def op_norm_bound(M: SeriesMatrix) -> float:
    """``sqrt(sum_ij ||m_ij||_1^2)``, which dominates the induced operator norm."""
    total = sum(
        (wiener_norm(e).upper ** 2 for row in M.entries for e in row), Fraction(0)
    )
    return math.sqrt(total)


def dilation_path(M: SeriesMatrix, t) -> SeriesMatrix:
    """``M_t``: every entry ``f_ij`` replaced by ``f_ij((1 - t) z)``.

    Dilation is a ring homomorphism, so ``det M_t = 1`` whenever ``det M = 1``;
    ``M_1`` is the constant matrix of values at the origin.
    """
    t = as_fraction(t)
    if not 0 <= t <= 1:
        raise PreconditionError(f"path parameter {t} outside [0, 1]")
    if not is_special_linear(M):
        raise PreconditionError("matrix determinant is not exactly 1")
    r = 1 - t
    return M.map(lambda f: dilate(f, r))


def transvection_product(factors: Sequence[Transvection], n: int) -> np.ndarray:
    out = np.eye(n, dtype=complex)
    for e in factors:
        out = out @ e.matrix(n)
    return out


def factor_constant_sl(C, tol: float = 1e-10) -> list:
    """Write a constant ``C`` with ``det C = 1`` as a product of transvections.

    Row reduction by ``row_i += alpha row_j`` only: clear below each pivot
    (adding a lower row first when the pivot is small), clear above, then
    turn each diagonal pair ``diag(a, b)`` into ``diag(1, ab)`` with four
    operations.  The factors are the inverses of the operations in order,
    so their left-to-right product is ``C``.
    """
    A = np.array(C, dtype=complex)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError("expected a square matrix")
    n = A.shape[0]
    d = np.linalg.det(A)
    if not abs(d - 1) < tol:
        raise PreconditionError(f"determinant {d} is not within {tol} of 1")
    original = A.copy()
    scale = max(1.0, float(np.abs(A).max()))
    ops: list = []

    def row_op(i, j, alpha):
        if alpha == 0:
            return
        A[i] += alpha * A[j]
        ops.append((i, j, alpha))

    for c in range(n):
        col = np.abs(A[c:, c])
        r = c + int(np.argmax(col))
        if col[r - c] <= 1e3 * np.finfo(float).eps * scale:
            raise NumericalBreakdown(f"no usable pivot in column {c + 1} (largest entry {col.max():.3e})")
        if abs(A[c, c]) < 0.5 * abs(A[r, c]):
            s = 1.0 if (np.conj(A[c, c]) * A[r, c]).real >= 0 else -1.0
            row_op(c, r, s)
        for r in range(c + 1, n):
            if A[r, c] != 0:
                row_op(r, c, -A[r, c] / A[c, c])
                A[r, c] = 0
    for c in range(n - 1, 0, -1):
        for r in range(c):
            if A[r, c] != 0:
                row_op(r, c, -A[r, c] / A[c, c])
                A[r, c] = 0
    for k in range(n - 1):
        a, b = A[k, k], A[k + 1, k + 1]
        if a == 1:
            continue
        row_op(k + 1, k, 1 / a)
        row_op(k, k + 1, 1 - a)
        row_op(k + 1, k, -1.0)
        row_op(k, k + 1, -A[k, k + 1] / A[k + 1, k + 1])
        A[k, k], A[k + 1, k], A[k, k + 1] = 1, 0, 0
        A[k + 1, k + 1] = a * b
    factors = [Transvection(i + 1, j + 1, complex(-alpha)) for i, j, alpha in ops]
    err = float(np.abs(transvection_product(factors, n) - original).max())
    if err >= tol:
        raise NumericalBreakdown(f"factorisation reconstructs C only to {err:.3e} (tol {tol})")
    return factors


def full_homotopy_sample(M: SeriesMatrix, num_steps: int, tol: float = 1e-10) -> list:
    """Samples of a path in SL_n from ``M`` to ``I``.

    For ``t <= 1/2`` the sample is the dilation ``M_{2t}``; for ``t > 1/2``
    it is the constant matrix ``prod_k E_k((2 - 2t) alpha_k)`` built from
    the transvection factors of ``C = M_1``, which runs from ``C`` to ``I``.
    Samples sit at ``t = k / (num_steps - 1)``.
    """
    if num_steps < 2:
        raise PreconditionError("need at least two samples")
    if not is_special_linear(M):
        raise PreconditionError("matrix determinant is not exactly 1")
    n, dim, cap = M.n, M.dim, M.cap
    factors = factor_constant_sl(M.constant_terms(), tol)
    samples = []
    for k in range(num_steps):
        t = Fraction(k, num_steps - 1)
        if t <= Fraction(1, 2):
            samples.append(M.map(lambda f, r=1 - 2 * t: dilate(f, r)))
            continue
        shrink = float(2 - 2 * t)
        scaled = [Transvection(e.i, e.j, e.alpha * shrink) for e in factors]
        C_s = transvection_product(scaled, n)
        residual = abs(np.linalg.det(C_s) - 1)
        if residual >= tol:
            raise NumericalBreakdown(f"constant path left SL_n at t={t} (|det - 1| = {residual:.3e})")
        samples.append(SeriesMatrix.from_constants(C_s.tolist(), dim, cap))
    return samples
