"""Exact univariate polynomials and rational functions over Q.

Coefficient arithmetic is delegated to FLINT (``fmpq_poly``); the classes
here add canonical forms, immutability, the shift automorphism
``z -> z + k`` and the factor bookkeeping the difference-system code needs
(squarefree parts, rational roots, shift-equivalence of factors).
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

from flint import fmpq, fmpq_poly

from .errors import DegenerateInputError

__all__ = [
    "Polynomial",
    "RationalFunction",
    "poly_shift",
    "poly_gcd",
    "squarefree_factorization",
    "shift_offset",
    "rational_roots",
    "integer_roots",
    "shift_resultant",
    "shift_set",
    "shift_factor_base",
]


def _to_fmpq(c):
    if isinstance(c, fmpq):
        return c
    if isinstance(c, int):
        return fmpq(c)
    if isinstance(c, Rational):
        return fmpq(int(c.numerator), int(c.denominator))
    raise TypeError(f"cannot use {c!r} as an exact rational coefficient")


def _to_fraction(c):
    return Fraction(int(c.p), int(c.q))


def _format_rational(c):
    if c.denominator == 1:
        return str(c.numerator)
    return f"{c.numerator}/{c.denominator}"


class Polynomial:
    """Immutable dense polynomial in one variable with rational coefficients.

    ``coefficients[i]`` is the coefficient of ``z**i``; the zero polynomial has
    no coefficients and degree ``-inf``.

    >>> p = Polynomial([-2, 1])
    >>> p.shift(3)
    Polynomial('z + 1')
    """

    __slots__ = ("_p", "_hash")

    def __init__(self, coefficients=()):
        if isinstance(coefficients, fmpq_poly):
            self._p = coefficients
        else:
            self._p = fmpq_poly([_to_fmpq(c) for c in coefficients])
        self._hash = None

    @classmethod
    def _wrap(cls, p):
        obj = cls.__new__(cls)
        obj._p = p
        obj._hash = None
        return obj

    @classmethod
    def coerce(cls, value):
        """Return ``value`` as a polynomial (accepts ints and rationals)."""
        if isinstance(value, Polynomial):
            return value
        if isinstance(value, fmpq_poly):
            return cls._wrap(value)
        return cls._wrap(fmpq_poly([_to_fmpq(value)]))

    @classmethod
    def gen(cls):
        return cls._wrap(fmpq_poly([0, 1]))

    @classmethod
    def linear(cls, root):
        """The monic linear polynomial ``z - root``."""
        return cls._wrap(fmpq_poly([-_to_fmpq(root), 1]))

    # -- inspection -------------------------------------------------------

    @property
    def coefficients(self):
        return tuple(_to_fraction(c) for c in self._p.coeffs())

    @property
    def degree(self):
        d = self._p.degree()
        return -math.inf if d < 0 else d

    @property
    def leading_coefficient(self):
        if self._p.is_zero():
            return Fraction(0)
        return _to_fraction(self._p[self._p.degree()])

    def coefficient(self, i):
        return _to_fraction(self._p[i])

    def is_zero(self):
        return self._p.is_zero()

    def is_one(self):
        return self._p.is_one()

    def is_constant(self):
        return self._p.degree() <= 0

    def is_monic(self):
        return not self._p.is_zero() and self._p[self._p.degree()] == 1

    def monic(self):
        if self._p.is_zero():
            return self
        lc = self._p[self._p.degree()]
        if lc == 1:
            return self
        return Polynomial._wrap(self._p / lc)

    def sort_key(self):
        """Canonical ordering: degree first, then the coefficient sequence."""
        return (self._p.degree(), self.coefficients)

    # -- arithmetic -------------------------------------------------------

    def _other(self, other):
        if isinstance(other, Polynomial):
            return other._p
        if isinstance(other, (int, Rational, fmpq)):
            return fmpq_poly([_to_fmpq(other)])
        return None

    def __add__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Polynomial._wrap(self._p + o)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Polynomial._wrap(self._p - o)

    def __rsub__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Polynomial._wrap(o - self._p)

    def __mul__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return Polynomial._wrap(self._p * o)

    __rmul__ = __mul__

    def __neg__(self):
        return Polynomial._wrap(-self._p)

    def __pow__(self, n):
        if not isinstance(n, int) or n < 0:
            raise ValueError("polynomial powers need a non-negative integer exponent")
        return Polynomial._wrap(self._p**n)

    def __divmod__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        q, r = divmod(self._p, o)
        return Polynomial._wrap(q), Polynomial._wrap(r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def exquo(self, other):
        """Exact quotient; raises ``ValueError`` when ``other`` does not divide."""
        q, r = divmod(self, other)
        if not r.is_zero():
            raise ValueError(f"{other} does not divide {self}")
        return q

    def divides(self, other):
        """True iff ``self`` divides ``other``."""
        if self._p.is_zero():
            return Polynomial.coerce(other).is_zero()
        return (Polynomial.coerce(other)._p % self._p).is_zero()

    def gcd(self, other):
        return poly_gcd(self, other)

    def derivative(self):
        return Polynomial._wrap(self._p.derivative())

    def shift(self, k):
        """``p(z + k)``."""
        if k == 0:
            return self
        return Polynomial._wrap(self._p(fmpq_poly([_to_fmpq(k), 1])))

    def reflect(self):
        """``p(-z)``."""
        return Polynomial._wrap(self._p(fmpq_poly([0, -1])))

    def __call__(self, x):
        if isinstance(x, Polynomial):
            return Polynomial._wrap(self._p(x._p))
        return _to_fraction(self._p(_to_fmpq(x)))

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        o = self._other(other)
        if o is None:
            return NotImplemented
        return self._p == o

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple((int(c.p), int(c.q)) for c in self._p.coeffs()))
        return self._hash

    def __bool__(self):
        return not self._p.is_zero()

    # -- printing ---------------------------------------------------------

    def format(self, var="z"):
        """Canonical text: descending powers, explicit ``*``, rationals as ``a/b``."""
        coeffs = self.coefficients
        if not coeffs:
            return "0"
        parts = []
        for i in range(len(coeffs) - 1, -1, -1):
            c = coeffs[i]
            if c == 0:
                continue
            mag = abs(c)
            if i == 0:
                body = _format_rational(mag)
            else:
                power = var if i == 1 else f"{var}^{i}"
                body = power if mag == 1 else f"{_format_rational(mag)}*{power}"
            if not parts:
                parts.append(("-" if c < 0 else "") + body)
            else:
                parts.append((" - " if c < 0 else " + ") + body)
        return "".join(parts)

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"Polynomial({self.format()!r})"


class RationalFunction:
    """Element of Q(z) kept in canonical form.

    The numerator and denominator are coprime and the denominator is monic,
    so two rational functions are equal iff their parts are equal.
    """

    __slots__ = ("numerator", "denominator", "_hash")

    def __init__(self, numerator=0, denominator=1):
        num = Polynomial.coerce(numerator)._p
        den = Polynomial.coerce(denominator)._p
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        self._set(*_normalize(num, den))

    def _set(self, num, den):
        self.numerator = Polynomial._wrap(num)
        self.denominator = Polynomial._wrap(den)
        self._hash = None

    @classmethod
    def _from_raw(cls, num, den):
        obj = cls.__new__(cls)
        obj._set(*_normalize(num, den))
        return obj

    @classmethod
    def _trusted(cls, num, den):
        obj = cls.__new__(cls)
        obj._set(num, den)
        return obj

    @classmethod
    def coerce(cls, value):
        if isinstance(value, RationalFunction):
            return value
        if isinstance(value, Polynomial):
            return cls._trusted(value._p, fmpq_poly([1]))
        if isinstance(value, fmpq_poly):
            return cls._trusted(value, fmpq_poly([1]))
        if isinstance(value, (int, Rational, fmpq)):
            return cls._trusted(fmpq_poly([_to_fmpq(value)]), fmpq_poly([1]))
        raise TypeError(f"cannot interpret {value!r} as a rational function")

    # -- inspection -------------------------------------------------------

    def is_zero(self):
        return self.numerator._p.is_zero()

    def is_polynomial(self):
        return self.denominator._p.is_one()

    def is_constant(self):
        return self.is_polynomial() and self.numerator.is_constant()

    def monic_numerator(self):
        """``num(f)`` in the monic convention: the numerator made monic."""
        return self.numerator.monic()

    def ord(self, q):
        """Order of ``self`` at the polynomial ``q``; ``inf`` for zero."""
        if self.is_zero():
            return math.inf
        q = Polynomial.coerce(q)._p
        return _multiplicity(self.numerator._p, q) - _multiplicity(self.denominator._p, q)

    # -- arithmetic -------------------------------------------------------

    @staticmethod
    def _parts(other):
        if isinstance(other, RationalFunction):
            return other.numerator._p, other.denominator._p
        if isinstance(other, Polynomial):
            return other._p, fmpq_poly([1])
        if isinstance(other, (int, Rational, fmpq)):
            return fmpq_poly([_to_fmpq(other)]), fmpq_poly([1])
        return None

    def __add__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        a, b = self.numerator._p, self.denominator._p
        c, d = o
        if b == d:
            return RationalFunction._from_raw(a + c, b)
        g = b.gcd(d)
        if g.is_one():
            # coprime denominators: the sum is already reduced
            return RationalFunction._trusted_monic(a * d + c * b, b * d)
        bg = b / g
        return RationalFunction._from_raw(a * (d / g) + c * bg, bg * d)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction._trusted(-self.numerator._p, self.denominator._p)

    def __sub__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return self + RationalFunction._trusted(-o[0], o[1])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        a, b = self.numerator._p, self.denominator._p
        c, d = o
        if a.is_zero() or c.is_zero():
            return RationalFunction._trusted(fmpq_poly(), fmpq_poly([1]))
        g1 = a.gcd(d)
        g2 = c.gcd(b)
        num = (a / g1) * (c / g2)
        den = (b / g2) * (d / g1)
        return RationalFunction._trusted_monic(num, den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        if o[0].is_zero():
            raise ZeroDivisionError("division by the zero rational function")
        return self * RationalFunction._trusted(o[1], o[0])

    def __rtruediv__(self, other):
        return RationalFunction.coerce(other) / self

    def __pow__(self, n):
        if not isinstance(n, int):
            raise TypeError("rational function powers need an integer exponent")
        if n < 0:
            if self.is_zero():
                raise ZeroDivisionError("zero to a negative power")
            return RationalFunction._trusted_monic(self.denominator._p ** (-n), self.numerator._p ** (-n))
        return RationalFunction._trusted(self.numerator._p**n, self.denominator._p**n)

    @classmethod
    def _trusted_monic(cls, num, den):
        # coprime parts, denominator possibly non-monic
        lc = den[den.degree()]
        if lc != 1:
            num = num / lc
            den = den / lc
        return cls._trusted(num, den)

    def shift(self, k):
        """``f(z + k)``; the denominator stays monic."""
        if k == 0:
            return self
        s = fmpq_poly([_to_fmpq(k), 1])
        return RationalFunction._trusted(self.numerator._p(s), self.denominator._p(s))

    def reflect(self):
        """``f(-z)``."""
        s = fmpq_poly([0, -1])
        return RationalFunction._trusted_monic(self.numerator._p(s), self.denominator._p(s))

    def __call__(self, x):
        den = self.denominator(x)
        if den == 0:
            raise ZeroDivisionError(f"pole at {x}")
        return self.numerator(x) / den

    # -- comparison -------------------------------------------------------

    def __eq__(self, other):
        o = self._parts(other)
        if o is None:
            return NotImplemented
        return self.numerator._p == o[0] and self.denominator._p == o[1]

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.numerator, self.denominator))
        return self._hash

    def __bool__(self):
        return not self.is_zero()

    # -- printing ---------------------------------------------------------

    def format(self, var="z"):
        num = self.numerator.format(var)
        if self.is_polynomial():
            return num
        den = self.denominator.format(var)
        # single terms need no brackets: the denominator is monic and / is left-associative
        if _terms(self.numerator) > 1 or "/" in num:
            num = f"({num})"
        if _terms(self.denominator) > 1:
            den = f"({den})"
        return f"{num}/{den}"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"RationalFunction({self.format()!r})"


def _terms(p):
    return sum(1 for c in p.coefficients if c != 0)


def _normalize(num, den):
    if num.is_zero():
        return fmpq_poly(), fmpq_poly([1])
    g = num.gcd(den)
    if not g.is_one():
        num = num / g
        den = den / g
    lc = den[den.degree()]
    if lc != 1:
        num = num / lc
        den = den / lc
    return num, den


def _multiplicity(p, q):
    if q.degree() < 1:
        raise ValueError("order is only defined for non-constant moduli")
    m = 0
    while True:
        quo, rem = divmod(p, q)
        if not rem.is_zero():
            return m
        p = quo
        m += 1


# -- module-level operations -----------------------------------------------


def poly_shift(p, k):
    """Return ``p(z + k)`` for an integer (or rational) ``k``."""
    return Polynomial.coerce(p).shift(k)


def poly_gcd(a, b):
    """Monic greatest common divisor of two polynomials, not both zero."""
    a = Polynomial.coerce(a)
    b = Polynomial.coerce(b)
    if a.is_zero() and b.is_zero():
        raise DegenerateInputError("gcd(0, 0) is undefined")
    return Polynomial._wrap(a._p.gcd(b._p)).monic()


def squarefree_factorization(p):
    """Yun's squarefree decomposition.

    Returns ``[(factor, multiplicity), ...]`` with monic, squarefree, pairwise
    coprime factors in increasing order of multiplicity, so that
    ``lc(p) * prod(f**m) == p``. Constants give an empty list.
    """
    p = Polynomial.coerce(p)
    if p.is_zero():
        raise DegenerateInputError("the zero polynomial has no squarefree factorization")
    if p.is_constant():
        return []
    f = p.monic()._p
    df = f.derivative()
    a = f.gcd(df)
    b = f / a
    c = df / a
    d = c - b.derivative()
    out = []
    i = 1
    while b.degree() > 0:
        g = b.gcd(d)
        if g.degree() > 0:
            out.append((Polynomial._wrap(g).monic(), i))
        b = b / g
        c = d / g
        d = c - b.derivative()
        i += 1
    return out


def shift_offset(p, r):
    """Integer ``k`` with ``r == p(z + k)``, or ``None``.

    The candidate is forced by the sub-leading coefficients, then confirmed by a
    full comparison. Polynomials of different degree never match.
    """
    p = Polynomial.coerce(p)
    r = Polynomial.coerce(r)
    n = p._p.degree()
    if n < 1 or r._p.degree() != n:
        return None
    lc = p._p[n]
    if r._p[n] != lc:
        return None
    k = (r._p[n - 1] - p._p[n - 1]) / (n * lc)
    if k.q != 1:
        return None
    k = int(k.p)
    return k if p.shift(k) == r else None


def rational_roots(p):
    """Sorted distinct rational roots of a non-zero polynomial."""
    p = Polynomial.coerce(p)
    if p.is_zero():
        raise DegenerateInputError("the zero polynomial has every root")
    if p.is_constant():
        return []
    return sorted(_to_fraction(r) for r, _ in p._p.roots())


def integer_roots(p):
    """Sorted distinct integer roots of a non-zero polynomial."""
    return [int(r) for r in rational_roots(p) if r.denominator == 1]


def _interpolate(points):
    # Newton divided differences over Q
    xs = [fmpq(x) for x, _ in points]
    coef = [fmpq(y) if not isinstance(y, fmpq) else y for _, y in points]
    n = len(xs)
    for j in range(1, n):
        for i in range(n - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])
    result = fmpq_poly([coef[-1]])
    for i in range(n - 2, -1, -1):
        result = result * fmpq_poly([-xs[i], 1]) + coef[i]
    return result


def shift_resultant(a, b):
    """``Res_z(a(z + k), b(z))`` as a polynomial in ``k``.

    Its integer roots are exactly the ``k`` for which ``a(z + k)`` and ``b``
    share a factor. Computed by evaluation at ``deg a * deg b + 1`` points and
    interpolation.
    """
    a = Polynomial.coerce(a)
    b = Polynomial.coerce(b)
    if a.is_constant() or b.is_constant():
        raise DegenerateInputError("shift resultant needs non-constant polynomials")
    bound = a._p.degree() * b._p.degree()
    points = [(k, a.shift(k)._p.resultant(b._p)) for k in range(bound + 1)]
    return Polynomial._wrap(_interpolate(points))


def shift_set(a, b):
    """Sorted integers ``k`` with ``gcd(a(z + k), b)`` non-trivial."""
    a = Polynomial.coerce(a)
    b = Polynomial.coerce(b)
    if a.is_constant() or b.is_constant():
        return []
    if a._p.degree() == 1:
        # a(z + k) vanishes at alpha - k
        alpha = rational_roots(a)[0]
        return sorted({int(alpha - r) for r in rational_roots(b) if (alpha - r).denominator == 1})
    if b._p.degree() == 1:
        beta = rational_roots(b)[0]
        return sorted({int(r - beta) for r in rational_roots(a) if (r - beta).denominator == 1})
    return integer_roots(shift_resultant(a, b))


def _coprime_base(pieces):
    pieces = list(dict.fromkeys(pieces))
    changed = True
    while changed:
        changed = False
        for i in range(len(pieces)):
            for j in range(i + 1, len(pieces)):
                a, b = pieces[i], pieces[j]
                g = poly_gcd(a, b)
                if g.is_constant():
                    continue
                new = [g, a.exquo(g).monic(), b.exquo(g).monic()]
                rest = [x for k, x in enumerate(pieces) if k not in (i, j)]
                pieces = list(dict.fromkeys(rest + [x for x in new if not x.is_constant()]))
                changed = True
                break
            if changed:
                break
    return pieces


def shift_factor_base(polys):
    """Split polynomials into pairwise coprime, shift-compatible monic pieces.

    Every input is (up to a constant and multiplicities) a product of returned
    pieces. Linear factors are split off through rational roots; the remaining
    pieces are refined until any two of them are either related by an exact
    integer shift (``b == a(z + k)``) or share no root up to integer shifts.
    Pieces come back in canonical order.
    """
    pieces = []
    for p in polys:
        p = Polynomial.coerce(p)
        if p.is_zero():
            raise DegenerateInputError("cannot factor the zero polynomial")
        if p.is_constant():
            continue
        for f, _ in squarefree_factorization(p):
            rest = f
            for r in rational_roots(f):
                lin = Polynomial.linear(r)
                pieces.append(lin)
                rest = rest.exquo(lin)
            if not rest.is_constant():
                pieces.append(rest.monic())
    pieces = _coprime_base(pieces)
    while True:
        split = _find_shift_split(pieces)
        if split is None:
            break
        pieces = _coprime_base(pieces + split)
    return sorted(pieces, key=Polynomial.sort_key)


def _find_shift_split(pieces):
    nonlinear = [p for p in pieces if p._p.degree() > 1]
    for a in nonlinear:
        for b in nonlinear:
            for k in shift_set(a, b):
                if a is b and k == 0:
                    continue
                ak = a.shift(k)
                if ak == b:
                    continue
                g = poly_gcd(ak, b)
                # g is a proper factor of ak or of b (or both)
                return [g, g.shift(-k).monic()]
    return None
