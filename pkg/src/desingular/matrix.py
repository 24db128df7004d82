"""Square matrices over Q(z), Q[z] and residue fields Q[z]/<q>."""

from __future__ import annotations

import math
from functools import reduce

from flint import fmpq_poly

from .errors import SingularMatrixError
from .poly import Polynomial, RationalFunction
from .residue import ResidueField, check_modulus

__all__ = [
    "RationalMatrix",
    "PolynomialMatrix",
    "ResidueMatrix",
    "mat_den",
    "mat_num",
    "det",
    "inverse",
    "ord_q",
    "leading_matrix",
    "residue_rank",
    "column_reduce",
    "row_reduce",
    "residue_kernel",
]

_ONE = fmpq_poly([1])


def _lcm(a, b):
    return (a * b) / a.gcd(b)


class RationalMatrix:
    """Immutable ``d x d`` matrix with entries in Q(z).

    Entries may be given as anything :meth:`RationalFunction.coerce` accepts.
    """

    __slots__ = ("rows", "_hash", "_den")

    def __init__(self, rows):
        rows = tuple(tuple(RationalFunction.coerce(e) for e in row) for row in rows)
        d = len(rows)
        if d == 0 or any(len(r) != d for r in rows):
            raise ValueError("matrices must be square with dimension at least 1")
        self.rows = rows
        self._hash = None
        self._den = None

    @classmethod
    def _from_rows(cls, rows):
        obj = cls.__new__(cls)
        obj.rows = rows
        obj._hash = None
        obj._den = None
        return obj

    @classmethod
    def identity(cls, d):
        one = RationalFunction.coerce(1)
        zero = RationalFunction.coerce(0)
        return cls._from_rows(tuple(tuple(one if i == j else zero for j in range(d)) for i in range(d)))

    @classmethod
    def diag(cls, entries):
        entries = [RationalFunction.coerce(e) for e in entries]
        zero = RationalFunction.coerce(0)
        d = len(entries)
        return cls._from_rows(tuple(tuple(entries[i] if i == j else zero for j in range(d)) for i in range(d)))

    @property
    def d(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def entries(self):
        for row in self.rows:
            yield from row

    def map(self, fn):
        return RationalMatrix._from_rows(tuple(tuple(fn(e) for e in row) for row in self.rows))

    def transpose(self):
        return RationalMatrix._from_rows(tuple(zip(*self.rows)))

    def column(self, j):
        return tuple(row[j] for row in self.rows)

    def is_zero(self):
        return all(e.is_zero() for e in self.entries())

    def is_polynomial(self):
        return all(e.is_polynomial() for e in self.entries())

    def is_identity(self):
        return self == RationalMatrix.identity(self.d)

    # -- arithmetic -------------------------------------------------------

    def __matmul__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        if other.d != self.d:
            raise ValueError("dimension mismatch")
        cols = list(zip(*other.rows))
        out = []
        for row in self.rows:
            out.append(tuple(_dot(row, col) for col in cols))
        return RationalMatrix._from_rows(tuple(out))

    def __mul__(self, scalar):
        s = RationalFunction.coerce(scalar)
        return self.map(lambda e: e * s)

    __rmul__ = __mul__

    def __add__(self, other):
        return RationalMatrix._from_rows(
            tuple(tuple(a + b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __sub__(self, other):
        return RationalMatrix._from_rows(
            tuple(tuple(a - b for a, b in zip(r, s)) for r, s in zip(self.rows, other.rows))
        )

    def __neg__(self):
        return self.map(lambda e: -e)

    def shift(self, k):
        """Entry-wise ``M(z + k)``."""
        if k == 0:
            return self
        return self.map(lambda e: e.shift(k))

    def reflect(self):
        """Entry-wise ``M(-z)``."""
        return self.map(RationalFunction.reflect)

    def den(self):
        return mat_den(self)

    def num(self):
        return mat_num(self)

    def det(self):
        return det(self)

    def inverse(self):
        return inverse(self)

    def ord(self, q):
        return ord_q(self, q)

    def leading_matrix(self, q):
        return leading_matrix(self, q)

    # -- comparison / printing -------------------------------------------

    def __eq__(self, other):
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.rows == other.rows

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.rows)
        return self._hash

    def to_strings(self, var="z"):
        return [[e.format(var) for e in row] for row in self.rows]

    def __str__(self):
        return "[" + ",\n ".join("[" + ", ".join(e.format() for e in row) + "]" for row in self.rows) + "]"

    def __repr__(self):
        return f"{type(self).__name__}({self.to_strings()!r})"


def _dot(row, col):
    # sum of products over a common denominator, reduced once
    num = fmpq_poly()
    den = _ONE
    for a, b in zip(row, col):
        if a.numerator._p.is_zero() or b.numerator._p.is_zero():
            continue
        pn = a.numerator._p * b.numerator._p
        pd = a.denominator._p * b.denominator._p
        if pd == den:
            num = num + pn
        elif pd.is_one():
            num = num + pn * den
        else:
            g = den.gcd(pd)
            num = num * (pd / g) + pn * (den / g)
            den = den * (pd / g)
    return RationalFunction._from_raw(num, den)


class PolynomialMatrix(RationalMatrix):
    """A :class:`RationalMatrix` whose entries are all polynomials."""

    __slots__ = ()

    def __init__(self, rows):
        super().__init__(rows)
        if not self.is_polynomial():
            raise ValueError("polynomial matrix entries must be polynomials")

    @classmethod
    def of(cls, m):
        """View a polynomial :class:`RationalMatrix` as a :class:`PolynomialMatrix`."""
        if isinstance(m, PolynomialMatrix):
            return m
        if not m.is_polynomial():
            raise ValueError("matrix has non-polynomial entries")
        return cls._from_rows(m.rows)

    @classmethod
    def identity(cls, d):
        return cls._from_rows(RationalMatrix.identity(d).rows)

    @classmethod
    def diag(cls, entries):
        return cls._from_rows(RationalMatrix.diag(entries).rows)

    def __matmul__(self, other):
        out = super().__matmul__(other)
        if isinstance(other, PolynomialMatrix) and out is not NotImplemented:
            return PolynomialMatrix._from_rows(out.rows)
        return out

    def shift(self, k):
        return PolynomialMatrix._from_rows(super().shift(k).rows)

    def reflect(self):
        return PolynomialMatrix._from_rows(super().reflect().rows)

    def is_unimodular(self):
        d = det(self)
        return d.is_constant() and not d.is_zero()


# -- denominators, determinant, inverse --------------------------------------


def mat_den(m):
    """Monic lcm of the entry denominators."""
    if m._den is None:
        m._den = Polynomial._wrap(reduce(_lcm, (e.denominator._p for e in m.entries()), _ONE))
    return m._den


def mat_num(m):
    """``mat_den(m) * m`` as a :class:`PolynomialMatrix`."""
    den = mat_den(m)._p
    rows = tuple(
        tuple(RationalFunction._trusted(e.numerator._p * (den / e.denominator._p), _ONE) for e in row)
        for row in m.rows
    )
    return PolynomialMatrix._from_rows(rows)


def _bareiss(grid):
    """Determinant of a square grid of ``fmpq_poly`` by fraction-free elimination."""
    a = [list(r) for r in grid]
    d = len(a)
    sign = 1
    prev = _ONE
    for k in range(d - 1):
        if a[k][k].is_zero():
            for i in range(k + 1, d):
                if not a[i][k].is_zero():
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return fmpq_poly()
        pivot = a[k][k]
        for i in range(k + 1, d):
            for j in range(k + 1, d):
                a[i][j] = (a[i][j] * pivot - a[i][k] * a[k][j]) / prev
        prev = pivot
    return a[d - 1][d - 1] * sign


def det(m):
    """Exact determinant; Bareiss elimination on ``num(m)`` divided by ``den(m)**d``."""
    n = mat_num(m)
    grid = [[e.numerator._p for e in row] for row in n.rows]
    dt = _bareiss(grid)
    return RationalFunction._from_raw(dt, mat_den(m)._p ** m.d)


def inverse(m):
    """Exact inverse by Gauss-Jordan elimination over Q(z)."""
    d = m.d
    den = mat_den(m)
    n = mat_num(m)
    one = RationalFunction.coerce(1)
    zero = RationalFunction.coerce(0)
    a = [list(row) + [one if i == j else zero for j in range(d)] for i, row in enumerate(n.rows)]
    for col in range(d):
        piv = None
        best = None
        for i in range(col, d):
            e = a[i][col]
            if not e.is_zero():
                size = e.numerator.degree + e.denominator.degree
                if best is None or size < best:
                    piv, best = i, size
        if piv is None:
            raise SingularMatrixError("matrix is singular")
        a[col], a[piv] = a[piv], a[col]
        inv = one / a[col][col]
        a[col] = [e * inv for e in a[col]]
        for i in range(d):
            if i == col or a[i][col].is_zero():
                continue
            f = a[i][col]
            a[i] = [x - f * y for x, y in zip(a[i], a[col])]
    scale = RationalFunction.coerce(den)
    rows = tuple(tuple(e * scale for e in row[d:]) for row in a)
    return RationalMatrix._from_rows(rows)


# -- q-adic data ------------------------------------------------------------


def ord_q(m, q):
    """``min`` of the entry orders at ``q``; ``inf`` for the zero matrix."""
    q = check_modulus(q)
    return min((e.ord(q) for e in m.entries()), default=math.inf)


def leading_matrix(m, q):
    """``lc_q(m)``: the value at ``q`` of ``q**(-ord_q(m)) * m``."""
    q = check_modulus(q)
    n = ord_q(m, q)
    if n == math.inf:
        raise ValueError("the zero matrix has no leading matrix")
    field = ResidueField(q)
    scale = RationalFunction.coerce(q) ** (-n)
    return ResidueMatrix(field, [[field(e * scale) for e in row] for row in m.rows])


class ResidueMatrix:
    """Square matrix over a single residue field."""

    __slots__ = ("field", "rows")

    def __init__(self, field, rows):
        self.field = field
        self.rows = tuple(tuple(field(e) for e in row) for row in rows)
        d = len(self.rows)
        if d == 0 or any(len(r) != d for r in self.rows):
            raise ValueError("residue matrices must be square")

    @classmethod
    def identity(cls, field, d):
        return cls(field, [[1 if i == j else 0 for j in range(d)] for i in range(d)])

    @property
    def d(self):
        return len(self.rows)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __matmul__(self, other):
        if not isinstance(other, ResidueMatrix):
            return NotImplemented
        if other.field != self.field:
            raise ValueError("matrices live over different residue fields")
        cols = list(zip(*other.rows))
        zero = self.field.zero()
        out = [[sum((a * b for a, b in zip(row, col)), zero) for col in cols] for row in self.rows]
        return ResidueMatrix(self.field, out)

    def is_zero(self):
        return all(e.is_zero() for row in self.rows for e in row)

    def rank(self):
        return residue_rank(self)

    def lift(self):
        """Entry-wise canonical representatives as a :class:`PolynomialMatrix`."""
        return PolynomialMatrix._from_rows(
            tuple(tuple(RationalFunction._trusted(e._r, _ONE) for e in row) for row in self.rows)
        )

    def __eq__(self, other):
        if isinstance(other, ResidueMatrix):
            return self.field == other.field and self.rows == other.rows
        if isinstance(other, (list, tuple)):
            try:
                return self == ResidueMatrix(self.field, other)
            except (TypeError, ValueError):
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.rows))

    def to_strings(self, var="z"):
        return [[e.representative.format(var) for e in row] for row in self.rows]

    def __repr__(self):
        return f"ResidueMatrix({self.to_strings()!r} mod {self.field.modulus.format()!r})"


def residue_rank(m):
    """Rank over the residue field by Gaussian elimination."""
    a = [list(row) for row in m.rows]
    d = m.d
    rank = 0
    for col in range(d):
        piv = next((i for i in range(rank, d) if not a[i][col].is_zero()), None)
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = a[rank][col].inverse()
        for i in range(rank + 1, d):
            if a[i][col].is_zero():
                continue
            f = a[i][col] * inv
            a[i] = [x - f * y for x, y in zip(a[i], a[rank])]
        rank += 1
    return rank


def residue_kernel(m):
    """Basis of the right kernel of a residue matrix, from its reduced row echelon form."""
    field = m.field
    d = m.d
    a = [list(row) for row in m.rows]
    pivots = []
    r = 0
    for col in range(d):
        piv = next((i for i in range(r, d) if not a[i][col].is_zero()), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(d):
            if i != r and not a[i][col].is_zero():
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
    basis = []
    for free in (c for c in range(d) if c not in pivots):
        v = [field.zero() for _ in range(d)]
        v[free] = field.one()
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][free]
        basis.append(tuple(v))
    return basis


def column_reduce(m):
    """Unimodular ``S`` such that ``m * S`` (mod q) has its zero columns last.

    Columns are processed left to right. The pivot of a column is the topmost
    row not used yet with a non-zero entry there; that row's entries in every
    later column are then eliminated. Zero columns are finally moved to the
    back in their original order. The eliminations form a unit upper
    triangular matrix, so its entry-wise lift times the permutation stays
    unimodular.

    Returns ``(S, reduced)`` with ``S`` a :class:`PolynomialMatrix` and
    ``reduced`` the column-reduced residue matrix.
    """
    field = m.field
    d = m.d
    work = [list(row) for row in m.rows]
    q = [[field.one() if i == j else field.zero() for j in range(d)] for i in range(d)]
    used = set()
    pivots = []
    for j in range(d):
        p = next((i for i in range(d) if i not in used and not work[i][j].is_zero()), None)
        if p is None:
            continue
        used.add(p)
        pivots.append(j)
        inv = work[p][j].inverse()
        for col in range(j + 1, d):
            if work[p][col].is_zero():
                continue
            c = work[p][col] * inv
            for i in range(d):
                work[i][col] = work[i][col] - c * work[i][j]
                q[i][col] = q[i][col] - c * q[i][j]
    order = pivots + [j for j in range(d) if j not in pivots]
    reduced = ResidueMatrix(field, [[row[j] for j in order] for row in work])
    lifted = ResidueMatrix(field, q).lift()
    s = PolynomialMatrix._from_rows(tuple(tuple(row[j] for j in order) for row in lifted.rows))
    return s, reduced


def row_reduce(m, extra=()):
    """Invertible ``P`` with ``P * m`` having zero rows first, independent rows last.

    Columns are scanned left to right; the pivot of a column is the bottommost
    unused row with a non-zero entry. Every other unused row ``i`` with a
    non-zero entry ``a`` in that column is replaced by ``(p/a) * row_i - row_p``
    when ``p/a`` is a constant (always the case for linear moduli), and by
    ``row_i - (a/p) * row_p`` otherwise. Both keep the lifted transformation
    unimodular. Zero rows are then moved to the top in their original order.

    ``extra`` columns (residue vectors of length d) are appended to ``m``
    before reducing, which enlarges the span the zero rows have to respect.

    Returns ``(P_inverse_lift, s)``: a unimodular polynomial matrix reducing to
    ``P**-1`` modulo q, and the number ``s`` of zero rows of ``P * m``.
    """
    d = m.d
    rows = [list(r) + [v[i] for v in extra] for i, r in enumerate(m.rows)]
    # inverse of the accumulated row operations
    inv_poly = PolynomialMatrix.identity(d)
    used = set()
    for j in range(len(rows[0])):
        cands = [i for i in range(d) if i not in used and not rows[i][j].is_zero()]
        if not cands:
            continue
        p = cands[-1]
        used.add(p)
        pinv = rows[p][j].inverse()
        for i in cands[:-1]:
            a = rows[i][j]
            lam = rows[p][j] * a.inverse()
            if lam.is_constant():
                # row_i <- lam*row_i - row_p ; inverse: row_i <- (row_i + row_p)/lam
                rows[i] = [lam * x - y for x, y in zip(rows[i], rows[p])]
                e_inv = _elementary_inverse_scaled(d, i, p, lam.lift())
            else:
                c = a * pinv
                rows[i] = [x - c * y for x, y in zip(rows[i], rows[p])]
                e_inv = _elementary_inverse_add(d, i, p, c.lift())
            inv_poly = inv_poly @ e_inv
    zero_rows = [i for i in range(d) if i not in used]
    order = zero_rows + sorted(used)
    # P = Perm * E, so P^-1 = E^-1 * Perm^-1 : permute the columns of E^-1
    rows_out = tuple(tuple(row[i] for i in order) for row in inv_poly.rows)
    return PolynomialMatrix._from_rows(rows_out), len(zero_rows)


def _elementary_inverse_scaled(d, i, p, lam):
    # inverse of E: row_i <- lam*row_i - row_p  ==  I + (1/lam - 1) e_i e_i^T + (1/lam) e_i e_p^T
    lam = RationalFunction.coerce(lam)
    rows = [[RationalFunction.coerce(1 if a == b else 0) for b in range(d)] for a in range(d)]
    rows[i][i] = 1 / lam
    rows[i][p] = 1 / lam
    return PolynomialMatrix._from_rows(tuple(tuple(r) for r in rows))


def _elementary_inverse_add(d, i, p, c):
    # inverse of E: row_i <- row_i - c*row_p  ==  I + c e_i e_p^T
    rows = [[RationalFunction.coerce(1 if a == b else 0) for b in range(d)] for a in range(d)]
    rows[i][p] = RationalFunction.coerce(c)
    return PolynomialMatrix._from_rows(tuple(tuple(r) for r in rows))

