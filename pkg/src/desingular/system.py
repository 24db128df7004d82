"""First-order difference systems, gauge action and singularity inventory."""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import cached_property

from .errors import NotAPoleError, SingularMatrixError
from .matrix import PolynomialMatrix, RationalMatrix, det, inverse, mat_den
from .poly import Polynomial, rational_roots, shift_factor_base, shift_offset, shift_set, _multiplicity
from .residue import check_modulus

__all__ = [
    "Direction",
    "DifferenceSystem",
    "gauge",
    "adjoint",
    "reflect",
    "is_phi_minimal",
    "phi_dispersion",
    "singularities",
    "pole_classes",
    "pole_factors",
    "PoleInfo",
    "PoleClass",
    "SingularityReport",
    "TrailFactor",
    "GaugeCertificate",
]


class Direction(str, enum.Enum):
    FORWARD = "forward"
    BACKWARD = "backward"

    @property
    def step(self):
        """+1 for ``Y(z+1) = A Y``, -1 for ``Y(z-1) = A Y``."""
        return 1 if self is Direction.FORWARD else -1

    def flipped(self):
        return Direction.BACKWARD if self is Direction.FORWARD else Direction.FORWARD


@dataclass(frozen=True)
class DifferenceSystem:
    """``Y(z + s) = A(z) Y(z)`` with ``s = +1`` (forward) or ``s = -1`` (backward)."""

    A: RationalMatrix
    direction: Direction = Direction.FORWARD

    def __post_init__(self):
        if not isinstance(self.A, RationalMatrix):
            object.__setattr__(self, "A", RationalMatrix(self.A))
        object.__setattr__(self, "direction", Direction(self.direction))
        if self.det.is_zero():
            raise SingularMatrixError("the system matrix must be invertible")

    @property
    def d(self):
        return self.A.d

    @property
    def step(self):
        return self.direction.step

    @cached_property
    def den(self):
        """Monic common denominator of the entries of ``A``."""
        return mat_den(self.A)

    @cached_property
    def det(self):
        return det(self.A)

    @cached_property
    def numdet(self):
        """Monic numerator of ``det(A)``."""
        return self.det.numerator.monic()

    def scaled(self, h):
        return DifferenceSystem(self.A * h, self.direction)

    def __repr__(self):
        return f"DifferenceSystem({self.A.to_strings()!r}, {self.direction.value!r})"


def gauge(sys, T):
    """Transform by ``Y = T X``: returns ``T^-1(z + s) A T``."""
    T = T if isinstance(T, RationalMatrix) else RationalMatrix(T)
    try:
        Tinv = inverse(T)
    except SingularMatrixError:
        raise SingularMatrixError("gauge transformation is singular") from None
    return DifferenceSystem(Tinv.shift(sys.step) @ sys.A @ T, sys.direction)


def adjoint(sys):
    """The adjoint system ``A* = A^-1(z - s)``, running in the opposite direction."""
    return DifferenceSystem(inverse(sys.A).shift(-sys.step), sys.direction.flipped())


def reflect(sys):
    """Substitute ``z -> -z``; this swaps the direction of the system."""
    return DifferenceSystem(sys.A.reflect(), sys.direction.flipped())


def _require_pole(sys, q):
    q = check_modulus(q)
    if not q.divides(sys.den):
        raise NotAPoleError(f"{q} does not divide the denominator {sys.den}")
    return q


def is_phi_minimal(sys, q):
    """True iff no shift of ``q`` in the system's direction divides ``den(A)``."""
    q = _require_pole(sys, q)
    den = sys.den
    s = sys.step
    return not any(s * k >= 1 and q.shift(k).divides(den) for k in shift_set(q, den))


def phi_dispersion(sys, q):
    """Largest ``l >= 1`` with ``q(z + s*l)`` dividing ``num(det A)``, else 0."""
    q = check_modulus(q)
    num = sys.numdet
    if num.is_constant():
        return 0
    s = sys.step
    best = 0
    for k in shift_set(q, num):
        if s * k >= 1 and s * k > best and q.shift(k).divides(num):
            best = s * k
    return best


# -- singularity inventory ---------------------------------------------------


@dataclass(frozen=True)
class PoleInfo:
    factor: Polynomial
    multiplicity: int
    roots: tuple
    phi_minimal: bool
    dispersion: int
    class_index: int
    offset: int

    def to_dict(self, var="z"):
        return {
            "factor": self.factor.format(var),
            "multiplicity": self.multiplicity,
            "roots": [str(r) for r in self.roots],
            "phi_minimal": self.phi_minimal,
            "dispersion": self.dispersion,
            "class": self.class_index,
            "offset": self.offset,
        }


@dataclass(frozen=True)
class PoleClass:
    """Factors ``base(z + k)`` sharing one base; ``members`` holds ``(factor, k)``, k >= 0."""

    base: Polynomial
    members: tuple

    def to_dict(self, var="z"):
        return {"base": self.base.format(var), "members": [[f.format(var), k] for f, k in self.members]}


@dataclass(frozen=True)
class SingularityReport:
    r_poles: tuple
    l_poles: tuple
    r_classes: tuple
    l_classes: tuple

    def to_dict(self, var="z"):
        return {
            "r_poles": [p.to_dict(var) for p in self.r_poles],
            "l_poles": [p.to_dict(var) for p in self.l_poles],
            "r_classes": [c.to_dict(var) for c in self.r_classes],
            "l_classes": [c.to_dict(var) for c in self.l_classes],
        }


def pole_classes(factors):
    """Group shift-equivalent factors; the base of a class is its member with the largest root.

    Returns a list of :class:`PoleClass` in canonical order of their bases.
    """
    groups = []
    for f in factors:
        for g in groups:
            if shift_offset(g[0], f) is not None:
                g.append(f)
                break
        else:
            groups.append([f])
    classes = []
    for g in groups:
        # base(z + k) has roots shifted left by k; the base has k = 0 minimal
        offs = [(shift_offset(g[0], f), f) for f in g]
        k0 = min(k for k, _ in offs)
        base = g[0].shift(k0)
        members = tuple(sorted(((f, k - k0) for k, f in offs), key=lambda t: t[1]))
        classes.append(PoleClass(base, members))
    classes.sort(key=lambda c: c.base.sort_key())
    return classes


def pole_factors(sys, *extra):
    """Pairwise coprime monic factors of ``den(A)``, split against ``num(det A)`` and ``extra``.

    A denominator factor gets broken up whenever part of it is shift-related
    to a zero of the determinant; otherwise a reducible factor could hide a
    removable piece behind one that is not.
    """
    if sys.den.is_one():
        return []
    base = shift_factor_base([sys.den, sys.numdet, *extra])
    return [f for f in base if f.divides(sys.den)]


def _inventory(sys):
    den = sys.den
    factors = pole_factors(sys)
    classes = pole_classes(factors)
    where = {}
    for ci, c in enumerate(classes):
        for f, k in c.members:
            where[f] = (ci, k)
    poles = []
    for f in factors:
        roots = tuple(rational_roots(f)) if f.degree == 1 else ()
        ci, k = where[f]
        poles.append(
            PoleInfo(
                factor=f,
                multiplicity=_multiplicity(den._p, f._p),
                roots=roots,
                phi_minimal=is_phi_minimal(sys, f),
                dispersion=phi_dispersion(sys, f),
                class_index=ci,
                offset=k,
            )
        )
    return tuple(poles), tuple(classes)


def singularities(sys):
    """Poles of the forward matrix (r-side) and of the backward one (l-side).

    Of ``sys`` and ``adjoint(sys)`` exactly one runs forward; its poles are
    the r-poles, the other's are the l-poles.
    """
    other = adjoint(sys)
    fwd, bwd = (sys, other) if sys.direction is Direction.FORWARD else (other, sys)
    r_poles, r_classes = _inventory(fwd)
    l_poles, l_classes = _inventory(bwd)
    return SingularityReport(r_poles, l_poles, r_classes, l_classes)


# -- certificates --------------------------------------------------------------


@dataclass(frozen=True)
class TrailFactor:
    """One factor of a transformation: a unimodular ``S``/``U`` step or a shear ``D``."""

    kind: str
    matrix: PolynomialMatrix
    modulus: Polynomial

    def reflect(self):
        return TrailFactor(self.kind, self.matrix.reflect(), self.modulus.reflect().monic())


@dataclass(frozen=True)
class GaugeCertificate:
    """``T`` with its factor trail and the systems it connects: ``gauge(source, T) == target``."""

    T: RationalMatrix
    trail: tuple
    source: DifferenceSystem
    target: DifferenceSystem

    @classmethod
    def identity(cls, sys):
        return cls(RationalMatrix.identity(sys.d), (), sys, sys)

    def then(self, other):
        """Compose with a certificate whose source is this one's target."""
        return GaugeCertificate(self.T @ other.T, self.trail + other.trail, self.source, other.target)

    def trail_product(self):
        out = RationalMatrix.identity(self.source.d)
        for f in self.trail:
            out = out @ f.matrix
        return out

    def reflect(self):
        return GaugeCertificate(
            self.T.reflect(),
            tuple(f.reflect() for f in self.trail),
            reflect(self.source),
            reflect(self.target),
        )

