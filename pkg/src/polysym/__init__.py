"""Exact computations with symmetric functions on the polydisc.

Truncated Wiener-algebra series, the S_d symmetrisation, rewriting in
elementary symmetric polynomials, Bezout/corona checks, orbit-space geometry
and SL_n dilation homotopies.
"""
from .corona import (
    CoronaData,
    corona_delta,
    delta_from_solution,
    symmetrize_solution,
    verify_bezout,
)
from .elementary import (
    ElementarySeries,
    compare_composition,
    elementary_poly,
    evaluate_elementary,
    from_elementary,
    homogeneous_parts,
    series_to_elementary,
    to_elementary,
)
from .errors import (
    DimensionError,
    NumericalBreakdown,
    ParseError,
    PolysymError,
    PreconditionError,
)
from .matrix import (
    SeriesMatrix,
    Transvection,
    det,
    dilation_path,
    factor_constant_sl,
    full_homotopy_sample,
    op_norm_bound,
)
from .numbers import ComplexRational
from .parser import parse, render
from .series import (
    NormEnclosure,
    TruncatedSeries,
    add,
    diagonal,
    dilate,
    evaluate,
    from_text,
    lift,
    make_series,
    multiply,
    sup_norm_lower,
    to_text,
    wiener_norm,
)
from .symmetry import (
    OrbitPoint,
    Permutation,
    apply_perm_point,
    apply_perm_series,
    canonical,
    contraction_homotopy,
    is_symmetric,
    orbit,
    quotient_dist,
    separating_elementary,
    symmetrize,
)
from .witnesses import AlphaRule, BlaschkeSpec, blaschke_chain_witness, blaschke_eval, paper_example

__version__ = "0.1.0"
