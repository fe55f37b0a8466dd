import math
from fractions import Fraction

import numpy as np
import pytest

from polysym import (
    DimensionError,
    NumericalBreakdown,
    PreconditionError,
    SeriesMatrix,
    TruncatedSeries,
    Transvection,
    det,
    dilate,
    dilation_path,
    factor_constant_sl,
    full_homotopy_sample,
    op_norm_bound,
    wiener_norm,
)
from polysym.matrix import is_special_linear, transvection_product

from conftest import random_poly

CAP = 12
Z = TruncatedSeries(2, CAP, {(1, 0): 1})
W = TruncatedSeries(2, CAP, {(0, 1): 1})
ONE = TruncatedSeries.constant(1, 2, CAP)
ZERO = TruncatedSeries.zero(2, CAP)


def random_sl(rng, n, factors=3):
    M = SeriesMatrix.identity(n, 2, CAP)
    for _ in range(factors):
        i, j = rng.sample(range(1, n + 1), 2)
        M = M @ SeriesMatrix.elementary(n, i, j, random_poly(rng, 2, 1, cap=CAP, density=0.7))
    return M


def random_constant_sl(nrng, n, factors=6):
    C = np.eye(n, dtype=complex)
    for _ in range(factors):
        i, j = nrng.choice(n, 2, replace=False)
        E = np.eye(n, dtype=complex)
        E[i, j] = complex(*nrng.normal(size=2))
        C = C @ E
    return C


def l2_norm(vec, upper=True):
    return math.sqrt(sum(float(wiener_norm(v).upper if upper else wiener_norm(v).lower) ** 2 for v in vec))


class TestConstruction:
    def test_square_required(self):
        with pytest.raises(DimensionError):
            SeriesMatrix([[ONE, ZERO]])

    def test_mixed_caps(self):
        with pytest.raises(PreconditionError):
            SeriesMatrix([[ONE, ZERO], [ZERO, TruncatedSeries.constant(1, 2, 3)]])

    def test_elementary_bad_position(self):
        with pytest.raises(PreconditionError):
            SeriesMatrix.elementary(2, 1, 1, Z)

    def test_transvection_needs_distinct(self):
        with pytest.raises(PreconditionError):
            Transvection(1, 1, 2.0)


class TestDet:
    def test_identity(self):
        assert det(SeriesMatrix.identity(4, 2, CAP)) == ONE

    def test_unipotent(self, rng):
        f = random_poly(rng, 2, 4, cap=CAP, complex_coeffs=True)
        assert det(SeriesMatrix([[ONE, f], [ZERO, ONE]])) == ONE

    def test_example(self):
        assert det(SeriesMatrix([[1 + Z * W, Z], [W, ONE]])) == ONE

    def test_matches_numeric_det_at_points(self, rng):
        M = SeriesMatrix([[random_poly(rng, 2, 2, cap=CAP, complex_coeffs=True) for _ in range(3)] for _ in range(3)])
        from polysym import evaluate

        d = det(M)
        for _ in range(5):
            z = (complex(rng.random(), rng.random()) / 2, complex(rng.random(), -rng.random()) / 2)
            vals = np.array([[evaluate(e, z)[0] for e in row] for row in M.entries])
            assert abs(evaluate(d, z)[0] - np.linalg.det(vals)) < 1e-9

    def test_size_limit(self):
        with pytest.raises(PreconditionError):
            det(SeriesMatrix.identity(7, 1, 0))

    def test_commutes_with_dilation(self, rng):
        for _ in range(10):
            M = SeriesMatrix([[random_poly(rng, 2, 2, cap=CAP) for _ in range(2)] for _ in range(2)])
            r = Fraction(rng.randint(0, 10), 10)
            assert det(M.map(lambda f: dilate(f, r))) == dilate(det(M), r)

    def test_products_of_transvections_are_sl(self, rng):
        for n in (2, 3):
            assert is_special_linear(random_sl(rng, n))


class TestOpNormBound:
    def test_identity(self):
        assert op_norm_bound(SeriesMatrix.identity(2, 2, CAP)) == pytest.approx(math.sqrt(2))

    def test_single_entry(self):
        assert op_norm_bound(SeriesMatrix([[Z + W, ZERO], [ZERO, ZERO]])) == pytest.approx(2.0)

    def test_dominates_sampled_ratios(self, rng):
        for _ in range(4):
            M = random_sl(rng, 2)
            bound = op_norm_bound(M)
            for _ in range(10):
                v = [random_poly(rng, 2, 2, cap=CAP, complex_coeffs=True) for _ in range(2)]
                if not any(x.terms for x in v):
                    continue
                # each rectangular enclosure is within a factor sqrt(2) of the true norm
                assert l2_norm(M.apply(v)) <= bound * l2_norm(v, upper=False) * 2 + 1e-9
                assert l2_norm(M.apply(v), upper=False) <= bound * l2_norm(v) + 1e-9

    def test_dominates_exact_ratios_for_real_vectors(self, rng):
        M = random_sl(rng, 3)
        bound = op_norm_bound(M)
        for _ in range(20):
            v = [random_poly(rng, 2, 2, cap=CAP) for _ in range(3)]
            if any(x.terms for x in v):
                assert l2_norm(M.apply(v)) <= bound * l2_norm(v) + 1e-9


class TestDilationPath:
    def test_endpoints(self, rng):
        M = random_sl(rng, 2)
        assert dilation_path(M, 0) == M
        C = dilation_path(M, 1)
        assert all(not e.terms or set(e.terms) == {(0, 0)} for row in C.entries for e in row)
        assert np.allclose(C.constant_terms(), M.constant_terms())

    def test_det_one_along_path(self, rng):
        M = random_sl(rng, 3)
        for t in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
            assert det(dilation_path(M, t)) == ONE

    def test_requires_sl(self):
        with pytest.raises(PreconditionError):
            dilation_path(SeriesMatrix([[Z, ZERO], [ZERO, ONE]]), Fraction(1, 2))

    def test_parameter_range(self):
        with pytest.raises(PreconditionError):
            dilation_path(SeriesMatrix.identity(2, 2, CAP), 2)


class TestFactorConstantSL:
    def test_identity(self):
        assert factor_constant_sl(np.eye(3)) == []

    def test_single_transvection(self):
        assert factor_constant_sl([[1, 3], [0, 1]]) == [Transvection(1, 2, 3 + 0j)]

    def test_diagonal(self):
        C = np.diag([2.0, 0.5])
        factors = factor_constant_sl(C)
        assert len(factors) == 4
        assert np.abs(transvection_product(factors, 2) - C).max() < 1e-12

    def test_needs_pivot_fix(self):
        C = np.array([[0, -1], [1, 0]])
        assert np.abs(transvection_product(factor_constant_sl(C), 2) - C).max() < 1e-12

    def test_random_round_trip(self):
        nrng = np.random.default_rng(7)
        for n in (2, 3, 4):
            for _ in range(30):
                C = random_constant_sl(nrng, n)
                factors = factor_constant_sl(C)
                assert np.abs(transvection_product(factors, n) - C).max() < 1e-10

    def test_rejects_non_sl(self):
        with pytest.raises(PreconditionError):
            factor_constant_sl(np.diag([2.0, 1.0]))

    def test_rejects_non_square(self):
        with pytest.raises(DimensionError):
            factor_constant_sl(np.ones((2, 3)))

    def test_ill_conditioned_breaks_down(self):
        with pytest.raises(NumericalBreakdown):
            factor_constant_sl(np.diag([1e17, 1e-17]), tol=1e-10)


class TestFullHomotopy:
    def test_identity(self):
        I = SeriesMatrix.identity(2, 2, CAP)
        assert all(S == I for S in full_homotopy_sample(I, 5))

    def test_unipotent_example(self):
        M = SeriesMatrix([[ONE, Z + W], [ZERO, ONE]])
        samples = full_homotopy_sample(M, 5)
        assert samples[0] == M
        assert samples[1][0, 1] == (Z + W) / 2
        for S in samples[2:]:
            assert S == SeriesMatrix.identity(2, 2, CAP)

    def test_endpoints_and_det(self, rng):
        for n in (2, 3):
            M = random_sl(rng, n)
            samples = full_homotopy_sample(M, 16)
            assert len(samples) == 16
            assert samples[0] == M
            assert np.abs(samples[-1].constant_terms() - np.eye(n)).max() < 1e-10
            for S in samples:
                residual = wiener_norm(det(S) - 1).upper
                assert float(residual) < 1e-10

    def test_needs_two_steps(self):
        with pytest.raises(PreconditionError):
            full_homotopy_sample(SeriesMatrix.identity(2, 2, CAP), 1)
