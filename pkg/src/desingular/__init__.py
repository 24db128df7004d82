"""Exact desingularization of first-order linear difference systems ``Y(z+1) = A(z) Y(z)``.

Everything is computed over Q with exact arithmetic: polynomials and
rational functions (:mod:`desingular.poly`), residue fields Q[z]/<q>
(:mod:`desingular.residue`), matrices (:mod:`desingular.matrix`), systems and
gauge transformations (:mod:`desingular.system`) and the desingularization
algorithms with certificate checking (:mod:`desingular.desing`).
"""

from .desing import (
    Achievement,
    Classification,
    DesingOutcome,
    Status,
    VerificationResult,
    classify,
    desingularize_A,
    desingularize_all,
    desingularize_at,
    desingularize_B,
    factorial_check,
    rank_reduce,
    to_simple_pole,
    verify_certificate,
)
from .errors import (
    DegenerateInputError,
    DesingError,
    ModulusError,
    ModulusSplit,
    NotAPoleError,
    NotInLocalRingError,
    ParseError,
    PreconditionError,
    SingularMatrixError,
)
from .matrix import (
    PolynomialMatrix,
    RationalMatrix,
    ResidueMatrix,
    column_reduce,
    det,
    inverse,
    leading_matrix,
    mat_den,
    mat_num,
    ord_q,
    residue_rank,
)
from .parsing import parse_expression
from .poly import Polynomial, RationalFunction, poly_gcd, poly_shift, shift_offset, squarefree_factorization
from .residue import ResidueElement, ResidueField, residue_inverse, residue_project
from .system import (
    DifferenceSystem,
    Direction,
    GaugeCertificate,
    SingularityReport,
    TrailFactor,
    adjoint,
    gauge,
    is_phi_minimal,
    phi_dispersion,
    singularities,
)

__version__ = "0.1.0"

__all__ = [name for name in dir() if not name.startswith("_")]
