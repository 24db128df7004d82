"""Arithmetic in Q[z]/<q> for a squarefree modulus q.

Irreducibility of ``q`` is presumed, not checked. Any inversion that meets a
zero divisor raises :class:`~desingular.errors.ModulusSplit` carrying the
factor it found, and callers re-dispatch on the pieces.
"""

from __future__ import annotations

from flint import fmpq_poly

from .errors import ModulusError, ModulusSplit, NotInLocalRingError
from .poly import Polynomial, RationalFunction

__all__ = ["ResidueField", "ResidueElement", "residue_project", "residue_inverse", "check_modulus"]


def check_modulus(q):
    """Return ``q`` as a polynomial after checking it is monic, squarefree, degree >= 1."""
    q = Polynomial.coerce(q)
    if q.degree < 1:
        raise ModulusError(f"modulus {q} must have degree at least 1")
    if not q.is_monic():
        raise ModulusError(f"modulus {q} must be monic")
    if not q._p.gcd(q._p.derivative()).is_one():
        raise ModulusError(f"modulus {q} must be squarefree")
    return q


class ResidueField:
    """The residue ring Q[z]/<modulus>, treated as a field."""

    __slots__ = ("modulus",)

    def __init__(self, modulus):
        self.modulus = check_modulus(modulus)

    @property
    def degree(self):
        return self.modulus.degree

    def __call__(self, value):
        """Reduce a polynomial or rational number into the field."""
        if isinstance(value, ResidueElement):
            if value.field != self:
                raise ValueError("element belongs to a different residue field")
            return value
        if isinstance(value, RationalFunction):
            return residue_project(value, self)
        p = Polynomial.coerce(value)._p
        return ResidueElement._raw(p % self.modulus._p, self)

    def zero(self):
        return ResidueElement._raw(fmpq_poly(), self)

    def one(self):
        return ResidueElement._raw(fmpq_poly([1]), self)

    def __eq__(self, other):
        return isinstance(other, ResidueField) and self.modulus == other.modulus

    def __hash__(self):
        return hash(("ResidueField", self.modulus))

    def __repr__(self):
        return f"ResidueField({self.modulus.format()!r})"


class ResidueElement:
    """Canonical remainder of degree < deg(modulus), tagged with its field."""

    __slots__ = ("_r", "field")

    def __init__(self, representative, field):
        self.field = field
        self._r = Polynomial.coerce(representative)._p % field.modulus._p

    @classmethod
    def _raw(cls, r, field):
        obj = cls.__new__(cls)
        obj._r = r
        obj.field = field
        return obj

    @property
    def representative(self):
        return Polynomial._wrap(self._r)

    def lift(self):
        """The canonical polynomial representative."""
        return Polynomial._wrap(self._r)

    def is_zero(self):
        return self._r.is_zero()

    def is_constant(self):
        return self._r.degree() <= 0

    def _peer(self, other):
        if isinstance(other, ResidueElement):
            if other.field is not self.field and other.field != self.field:
                raise ValueError("mixing elements of different residue fields")
            return other._r
        return self.field(other)._r

    def __add__(self, other):
        return ResidueElement._raw(self._r + self._peer(other), self.field)

    __radd__ = __add__

    def __sub__(self, other):
        return ResidueElement._raw(self._r - self._peer(other), self.field)

    def __rsub__(self, other):
        return ResidueElement._raw(self._peer(other) - self._r, self.field)

    def __neg__(self):
        return ResidueElement._raw(-self._r, self.field)

    def __mul__(self, other):
        o = self._peer(other)
        if self.field.modulus._p.degree() == 1:
            return ResidueElement._raw(self._r * o, self.field)
        return ResidueElement._raw((self._r * o) % self.field.modulus._p, self.field)

    __rmul__ = __mul__

    def inverse(self):
        return residue_inverse(self)

    def __truediv__(self, other):
        if not isinstance(other, ResidueElement):
            other = self.field(other)
        return self * residue_inverse(other)

    def __eq__(self, other):
        if isinstance(other, ResidueElement):
            return self.field == other.field and self._r == other._r
        try:
            return self._r == self.field(other)._r
        except TypeError:
            return NotImplemented

    def __hash__(self):
        return hash((self.field, self.representative))

    def __bool__(self):
        return not self._r.is_zero()

    def __str__(self):
        return self.representative.format()

    def __repr__(self):
        return f"ResidueElement({self.representative.format()!r} mod {self.field.modulus.format()!r})"


def _invert_mod(b, field):
    q = field.modulus._p
    g, s, _ = b.xgcd(q)
    if g.degree() > 0:
        raise ModulusSplit(field.modulus, Polynomial._wrap(g))
    return (s / g) % q


def residue_inverse(x):
    """Multiplicative inverse in the residue field via extended Euclid."""
    if x.is_zero():
        raise ZeroDivisionError("zero has no inverse in a residue field")
    return ResidueElement._raw(_invert_mod(x._r, x.field), x.field)


def residue_project(f, field):
    """Image of ``f`` under the projection O_q -> Q[z]/<q>.

    Raises :class:`NotInLocalRingError` if ``f`` has a pole at the modulus.
    """
    f = RationalFunction.coerce(f)
    q = field.modulus._p
    den = f.denominator._p
    num = f.numerator._p % q
    if den.is_one():
        return ResidueElement._raw(num, field)
    if (den % q).is_zero():
        raise NotInLocalRingError(f"{f} has a pole at {field.modulus}")
    if num.is_zero():
        return field.zero()
    inv = _invert_mod(den % q, field)
    return ResidueElement._raw((num * inv) % q, field)
