"""Corona data: the lower bound on sum |f_i|, Bezout identities and their symmetrisation.

No corona solver lives here.  Solutions are supplied by the caller and this
module checks and transforms them.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DimensionError, PreconditionError
from .series import NormEnclosure, TruncatedSeries, evaluate_many, torus_grid, wiener_norm
from .symmetry import is_symmetric, symmetrize

__all__ = [
    "CoronaData",
    "corona_delta",
    "bezout_residual",
    "verify_bezout",
    "symmetrize_solution",
    "delta_from_solution",
]


@dataclass(frozen=True)
class CoronaData:
    fs: tuple
    gs: tuple | None = None

    def __post_init__(self):
        fs = tuple(self.fs)
        if not fs:
            raise PreconditionError("corona data needs at least one function")
        _check_family(fs)
        object.__setattr__(self, "fs", fs)
        if self.gs is not None:
            gs = tuple(self.gs)
            if len(gs) != len(fs):
                raise DimensionError(f"{len(fs)} data functions but {len(gs)} solution functions")
            _check_family(fs + gs)
            object.__setattr__(self, "gs", gs)


def _check_family(series: Sequence[TruncatedSeries]):
    dims = {f.dim for f in series}
    if len(dims) > 1:
        raise DimensionError(f"series of mixed dimensions {sorted(dims)}")


def corona_delta(fs: Sequence[TruncatedSeries], resolution: int = 32, radial_layers: int = 4) -> float:
    """Minimum of ``|f_1| + ... + |f_n|`` over the scaled tori ``r T^d``.

    Radii are ``1/L, 2/L, ..., 1``.  Sampling yields an upper estimate of the
    infimum over the polydisc, never a certified lower bound.  Refining by
    integer multiples of ``resolution`` and ``radial_layers`` only adds
    points, so the estimate is non-increasing under such refinement.
    """
    fs = list(fs)
    if not fs:
        raise PreconditionError("corona data needs at least one function")
    if resolution < 1 or radial_layers < 1:
        raise PreconditionError("resolution and radial_layers must be positive")
    _check_family(fs)
    dim = fs[0].dim
    best = np.inf
    for layer in range(1, radial_layers + 1):
        pts = torus_grid(dim, resolution, layer / radial_layers)
        total = np.zeros(pts.shape[0])
        for f in fs:
            total += np.abs(evaluate_many(f, pts))
        best = min(best, float(total.min()))
    return best


def bezout_residual(fs: Sequence[TruncatedSeries], gs: Sequence[TruncatedSeries]) -> TruncatedSeries:
    """``f_1 g_1 + ... + f_n g_n - 1``."""
    fs, gs = list(fs), list(gs)
    if len(fs) != len(gs) or not fs:
        raise DimensionError(f"{len(fs)} data functions but {len(gs)} solution functions")
    _check_family(fs + gs)
    total = fs[0] * gs[0]
    for f, g in zip(fs[1:], gs[1:]):
        total = total + f * g
    return total - 1


def verify_bezout(fs: Sequence[TruncatedSeries], gs: Sequence[TruncatedSeries]) -> NormEnclosure:
    """Enclosure of the l1 norm of the Bezout residual; exactly 0 iff the identity holds."""
    return wiener_norm(bezout_residual(fs, gs))


def symmetrize_solution(fs: Sequence[TruncatedSeries], gs: Sequence[TruncatedSeries]) -> list:
    """Average each ``g_i`` over S_d.

    With symmetric data, ``sum f_i Sym(g_i) = Sym(sum f_i g_i) = Sym(1) = 1``,
    so an exact solution stays exact.
    """
    if not all(is_symmetric(f) for f in fs):
        raise PreconditionError("data functions must be symmetric")
    residual = verify_bezout(fs, gs)
    if residual.upper != 0:
        raise PreconditionError(f"input is not an exact Bezout solution (residual {residual})")
    out = [symmetrize(g) for g in gs]
    assert verify_bezout(fs, out).upper == 0
    return out


def delta_from_solution(gs: Sequence[TruncatedSeries]) -> Fraction:
    """``(max_i ||g_i||_1)^{-1}``, a valid corona constant for the matching data.

    The l1 norm dominates the sup norm, so this is at most the constant
    built from sup norms and still satisfies ``sum |f_i| >= delta``.
    """
    gs = list(gs)
    if not gs:
        raise PreconditionError("empty solution")
    worst = max(wiener_norm(g).upper for g in gs)
    if worst == 0:
        raise PreconditionError("every solution function is zero")
    return 1 / worst
