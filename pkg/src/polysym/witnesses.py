"""Concrete objects used as evidence: a Blaschke ideal chain and a Wiener-algebra example."""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .elementary import ElementarySeries, compare_composition, series_to_elementary
from .errors import PreconditionError
from .series import TruncatedSeries, torus_grid, wiener_norm

__all__ = [
    "AlphaRule",
    "BlaschkeSpec",
    "alpha",
    "blaschke_zeros",
    "blaschke_eval",
    "blaschke_chain_witness",
    "example_series",
    "paper_example",
]


class AlphaRule(str, enum.Enum):
    #: factor k uses alpha_k = 1 - 1/k^2
    VARYING = "varying_alpha_k"
    #: every factor of B_n uses the same alpha_n
    FIXED = "fixed_alpha_n"


def alpha(k: int) -> Fraction:
    return 1 - Fraction(1, k * k)


@dataclass(frozen=True)
class BlaschkeSpec:
    n: int
    alpha_rule: AlphaRule = AlphaRule.VARYING

    def __post_init__(self):
        if self.n < 1:
            raise PreconditionError("Blaschke product needs n >= 1")
        object.__setattr__(self, "alpha_rule", AlphaRule(self.alpha_rule))

    def alphas(self) -> list:
        if self.alpha_rule is AlphaRule.FIXED:
            return [alpha(self.n)] * self.n
        return [alpha(k) for k in range(1, self.n + 1)]


def blaschke_zeros(spec: BlaschkeSpec) -> list:
    """Distinct zeros of ``B_n`` as exact rationals."""
    return sorted(set(spec.alphas()))


def _blaschke_many(spec: BlaschkeSpec, z: np.ndarray) -> np.ndarray:
    out = np.ones_like(z, dtype=complex)
    for a in spec.alphas():
        a = float(a)
        out *= (a - z) / (1 - a * z)
    return out


def blaschke_eval(spec: BlaschkeSpec, z: complex) -> complex:
    """``B_n(z) = prod_k (a_k - z) / (1 - a_k z)`` on the closed disc."""
    z = complex(z)
    if abs(z) > 1 + 1e-12:
        raise PreconditionError(f"|z| = {abs(z)} exceeds 1")
    out = 1 + 0j
    for a in spec.alphas():
        a = float(a)
        out *= (a - z) / (1 - a * z)
    return out


def _product_on_grid(spec: BlaschkeSpec, pts: np.ndarray) -> np.ndarray:
    vals = np.ones(pts.shape[0], dtype=complex)
    for k in range(pts.shape[1]):
        vals *= _blaschke_many(spec, pts[:, k])
    return vals


def _tuple_value(spec: BlaschkeSpec, a, d: int) -> complex:
    return complex(np.prod([blaschke_eval(spec, float(a)) for _ in range(d)]))


def blaschke_chain_witness(n: int, d: int, resolution: int = 16, alpha_rule=AlphaRule.VARYING) -> dict:
    """Numerical evidence about ``F_n(z) = B_n(z_1) ... B_n(z_d)`` versus ``F_{n+1}``.

    Reports the maximum modulus of ``F_n`` on a torus grid, the values of
    ``F_n`` at its diagonal zero tuples ``(a, ..., a)``, and which zeros of
    ``F_{n+1}`` are not zeros of ``F_n``.  If ``F_n`` were a multiple of
    ``F_{n+1}`` it would vanish at every zero of ``F_{n+1}``, so each extra
    zero is evidence that the two principal ideals differ.
    """
    if n < 1 or d < 1 or resolution < 1:
        raise PreconditionError("n, d and resolution must be positive")
    rule = AlphaRule(alpha_rule)
    cur, nxt = BlaschkeSpec(n, rule), BlaschkeSpec(n + 1, rule)
    pts = torus_grid(d, resolution)
    max_modulus = float(np.abs(_product_on_grid(cur, pts)).max())
    zeros_cur = blaschke_zeros(cur)
    zeros_nxt = blaschke_zeros(nxt)
    at_own_zeros = {str(a): abs(_tuple_value(cur, a, d)) for a in zeros_cur}
    extra = [a for a in zeros_nxt if a not in zeros_cur]
    cur_at_next_zeros = {str(a): abs(_tuple_value(cur, a, d)) for a in zeros_nxt}
    next_at_cur_zeros = {str(a): abs(_tuple_value(nxt, a, d)) for a in zeros_cur}
    return {
        "n": n,
        "d": d,
        "alpha_rule": rule.value,
        "resolution": resolution,
        "max_modulus": max_modulus,
        "modulus_ok": max_modulus <= 1 + 1e-9,
        "zeros_n": [str(a) for a in zeros_cur],
        "zeros_n_plus_1": [str(a) for a in zeros_nxt],
        "F_n_at_own_zeros": at_own_zeros,
        "vanishes_at_own_zeros": all(v <= 1e-12 for v in at_own_zeros.values()),
        "F_n_at_zeros_of_F_n_plus_1": cur_at_next_zeros,
        "F_n_plus_1_at_zeros_of_F_n": next_at_cur_zeros,
        "extra_zeros_of_F_n_plus_1": [str(a) for a in extra],
        "strict": bool(extra) and all(cur_at_next_zeros[str(a)] > 1e-12 for a in extra),
        "indexing_note": (
            "alpha_rule selects per-factor alpha_k or a shared alpha_n. Under either "
            "rule F_{n+1} has zeros that F_n lacks, so F_n is not a multiple of F_{n+1}. "
            "Zero sets alone cannot show which way the ideal inclusion runs."
        ),
    }


def example_series(N: int, cap: int | None = None) -> TruncatedSeries:
    """Partial sum ``sum_{n=1}^N (z^2 + w^2)^n / (n^2 2^n)`` in two variables."""
    if N < 1:
        raise PreconditionError("N must be positive")
    cap = 2 * N if cap is None else cap
    if cap < 2 * N:
        raise PreconditionError(f"cap {cap} is below 2N = {2 * N}; the partial sum would truncate")
    base = TruncatedSeries(2, cap, {(2, 0): 1, (0, 2): 1})
    total = TruncatedSeries.zero(2, cap)
    power = TruncatedSeries.constant(1, 2, cap)
    for n in range(1, N + 1):
        power = power * base
        total = total + power * Fraction(1, n * n * 2**n)
    return total


def paper_example(N: int, cap: int | None = None, points: int = 100, radius: float = 0.7, seed: int = 0) -> dict:
    """Exact norm, elementary rewrite and a composition probe for the partial sum."""
    f = example_series(N, cap)
    norm = wiener_norm(f)
    expected = sum((Fraction(1, n * n) for n in range(1, N + 1)), Fraction(0))
    g: ElementarySeries = series_to_elementary(f)
    rng = np.random.default_rng(seed)
    # uniform in the disc of the given radius, per coordinate
    r = radius * np.sqrt(rng.random((points, 2)))
    theta = 2 * np.pi * rng.random((points, 2))
    pts = r * np.exp(1j * theta)
    deviation = compare_composition(f, g, pts.tolist())
    return {
        "N": N,
        "cap": f.cap,
        "series": f,
        "norm": norm,
        "expected_norm": expected,
        "norm_matches": norm.exact and norm.value == expected,
        "elementary": g,
        "composition_deviation": deviation,
        "sample_points": points,
        "radius": radius,
    }
