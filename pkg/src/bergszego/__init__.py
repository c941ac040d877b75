"""Numerical and exact verification of Bergman/Szegő kernel identities on the disc and the ball in C^2."""

from .core import (
    EvalPoint,
    ExactValue,
    MonomialTerm,
    MultiIndex,
    PolyObservable,
    RationalComplex,
    differentiate,
    eval_poly,
)
from .grammar import PolyParseError, format_poly, parse_poly
from .kernels import KernelId, kernel_diag_ratio, kernel_eval, neumann_partial_sum
from .projections import bergman_apply, bergman_oracle, szego_apply, szego_oracle
from .quadrature import (
    QuadratureRule,
    Resolution,
    ball4_rule,
    circle_rule,
    disc_rule,
    exact_moment,
    integrate,
    sphere3_rule,
)
from .stokes import (
    DecompositionReport,
    ball_terms,
    ball_terms_exact,
    disc_terms,
    disc_terms_exact,
    residual_table,
)

__version__ = "0.1.0"

__all__ = [
    "EvalPoint",
    "ExactValue",
    "MonomialTerm",
    "MultiIndex",
    "PolyObservable",
    "RationalComplex",
    "differentiate",
    "eval_poly",
    "PolyParseError",
    "format_poly",
    "parse_poly",
    "KernelId",
    "kernel_diag_ratio",
    "kernel_eval",
    "neumann_partial_sum",
    "bergman_apply",
    "bergman_oracle",
    "szego_apply",
    "szego_oracle",
    "QuadratureRule",
    "Resolution",
    "ball4_rule",
    "circle_rule",
    "disc_rule",
    "exact_moment",
    "integrate",
    "sphere3_rule",
    "DecompositionReport",
    "ball_terms",
    "ball_terms_exact",
    "disc_terms",
    "disc_terms_exact",
    "residual_table",
]
