import random

import pytest
import sympy

from desingular.errors import ModulusError, ModulusSplit, SingularMatrixError
from desingular.matrix import (
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
    residue_kernel,
    residue_rank,
    row_reduce,
)
from desingular.parsing import parse_matrix
from desingular.poly import Polynomial, RationalFunction
from desingular.residue import ResidueField

z = Polynomial.gen()
X = sympy.Symbol("z")

EXAMPLE = parse_matrix([["0", "1"], ["-2*(z+1)/(z-2)", "3*(z-1)/(z-2)"]])
RANK = parse_matrix([["z*(z+1)", "0", "0"], ["0", "(z+1)/z", "0"], ["0", "0", "1/z"]])
BLOCKED = parse_matrix([["(z+1)^2/z", "0"], ["0", "1/(z+1)"]])


def M(*rows):
    return parse_matrix([list(r) for r in rows])


def residue(q, *rows):
    F = ResidueField(q)
    return ResidueMatrix(F, [[F(e) for e in row] for row in rows])


def _expr(p):
    return sum(sympy.Rational(c.numerator, c.denominator) * X**i for i, c in enumerate(p.coefficients))


def to_sympy(f):
    if isinstance(f, RationalMatrix):
        return sympy.Matrix([[to_sympy(e) for e in row] for row in f.rows])
    return _expr(f.numerator) / _expr(f.denominator)


def random_matrix(rng, d, degree=3):
    def poly():
        return Polynomial([rng.randint(-4, 4) for _ in range(rng.randint(1, degree + 1))])

    while True:
        rows = []
        for _ in range(d):
            row = []
            for _ in range(d):
                den = Polynomial([rng.randint(-2, 2), 1]) if rng.random() < 0.3 else Polynomial([1])
                row.append(RationalFunction(poly(), den))
            rows.append(row)
        m = RationalMatrix(rows)
        if not m.det().is_zero():
            return m


def test_construction_requires_square():
    with pytest.raises(ValueError):
        RationalMatrix([[1, 2]])
    with pytest.raises(ValueError):
        RationalMatrix([])


def test_polynomial_matrix_rejects_fractions():
    with pytest.raises(ValueError):
        PolynomialMatrix([[RationalFunction(1, z)]])


@pytest.mark.parametrize("m, expected", [(EXAMPLE, z - 2), (RationalMatrix.identity(3), Polynomial([1])), (RANK, z)])
def test_mat_den(m, expected):
    assert mat_den(m) == expected


def test_mat_num_clears_denominators():
    for m in (EXAMPLE, RANK, BLOCKED):
        num = mat_num(m)
        assert num.is_polynomial()
        assert num == m * RationalFunction(mat_den(m))


def test_det_examples():
    assert det(EXAMPLE) == RationalFunction(2 * z + 2, z - 2)
    assert det(RationalMatrix.identity(4)) == RationalFunction(1)
    assert det(BLOCKED) == RationalFunction(z + 1, z)


def test_inverse_examples():
    assert inverse(RationalMatrix.identity(2)) == RationalMatrix.identity(2)
    assert inverse(M(("z", "0"), ("0", "1"))) == M(("1/z", "0"), ("0", "1"))
    adjoint = inverse(EXAMPLE).shift(-1)
    assert adjoint == M(("3*(z-2)/(2*z)", "(3-z)/(2*z)"), ("1", "0"))


def test_inverse_of_singular_matrix():
    with pytest.raises(SingularMatrixError):
        inverse(M(("z", "1"), ("z^2", "z")))


@pytest.mark.parametrize("seed", range(12))
def test_det_and_inverse_match_sympy(seed):
    rng = random.Random(seed)
    m = random_matrix(rng, 1 + seed % 4)
    sm = to_sympy(m)
    assert sympy.simplify(to_sympy(det(m)) - sm.det()) == 0
    assert sympy.simplify(to_sympy(inverse(m)) - sm.inv()) == sympy.zeros(m.d, m.d)


@pytest.mark.parametrize("seed", range(30))
def test_det_of_inverse(seed):
    m = random_matrix(random.Random(seed), 1 + seed % 4)
    assert det(inverse(m)) * det(m) == RationalFunction(1)
    assert m @ inverse(m) == RationalMatrix.identity(m.d)


def test_order_examples():
    assert ord_q(EXAMPLE, z - 2) == -1
    assert ord_q(RationalMatrix.identity(2), z - 2) == 0
    assert ord_q(BLOCKED, z + 1) == -1
    assert ord_q(RationalMatrix([[0, 0], [0, 0]]), z) == float("inf")


def test_order_rejects_bad_modulus():
    with pytest.raises(ModulusError):
        ord_q(EXAMPLE, (z - 2) ** 2)


@pytest.mark.parametrize("seed", range(30))
def test_order_is_superadditive(seed):
    rng = random.Random(seed)
    a, b = random_matrix(rng, 2), random_matrix(rng, 2)
    for q in (z, z - 1, z + 1, z - 2):
        lhs = ord_q(a @ b, q)
        assert lhs >= ord_q(a, q) + ord_q(b, q)
        prod = leading_matrix(a, q) @ leading_matrix(b, q)
        if residue_rank(prod) == 2:
            assert lhs == ord_q(a, q) + ord_q(b, q)


def test_leading_matrix_examples():
    assert leading_matrix(EXAMPLE, z - 2) == residue(z - 2, (0, 0), (-6, 3))
    assert leading_matrix(RationalMatrix.identity(2), z) == residue(z, (1, 0), (0, 1))
    assert leading_matrix(RANK, z) == residue(z, (0, 0, 0), (0, 1, 0), (0, 0, 1))


@pytest.mark.parametrize("seed", range(20))
def test_leading_matrix_is_never_zero(seed):
    m = random_matrix(random.Random(seed), 3)
    for q in (z, z - 1, z**2 + 1):
        assert not leading_matrix(m, q).is_zero()


def test_leading_matrix_propagates_split():
    with pytest.raises(ModulusSplit):
        leading_matrix(M(("1/(z-1)", "0"), ("0", "1")), (z - 1) * (z - 3))


def test_residue_rank_examples():
    assert residue_rank(residue(z - 2, (0, 0), (-6, 3))) == 1
    assert residue_rank(residue(z, (0, 0), (0, 0))) == 0
    assert residue_rank(leading_matrix(RANK, z)) == 2


def test_residue_rank_over_an_extension():
    # rows are proportional over Q[z]/<z^2 + 1> since i * (1, i) = (i, -1)
    assert residue_rank(residue(z**2 + 1, (1, z), (z, -1))) == 1


def test_column_reduce_examples():
    L = residue(z - 2, (0, 0), (-6, 3))
    S, reduced = column_reduce(L)
    assert S == M(("1", "1/2"), ("0", "1"))
    assert reduced == residue(z - 2, (0, 0), (-6, 0))

    S, reduced = column_reduce(residue(z, (1, 0), (0, 1)))
    assert S.is_identity()

    S, reduced = column_reduce(residue(z, (0, 1), (0, 2)))
    assert S == M(("0", "1"), ("1", "0"))
    assert reduced == residue(z, (1, 0), (2, 0))


@pytest.mark.parametrize("seed", range(30))
def test_column_reduce_properties(seed):
    rng = random.Random(seed)
    d = 1 + seed % 4
    q = [z, z - 1, z**2 + 1][seed % 3]
    F = ResidueField(q)
    # low rank on purpose: product of a d x r and an r x d matrix
    r = rng.randint(0, d)
    a = [[F(Polynomial([rng.randint(-3, 3), rng.randint(-3, 3)])) for _ in range(r)] for _ in range(d)]
    b = [[F(Polynomial([rng.randint(-3, 3)])) for _ in range(d)] for _ in range(r)]
    L = ResidueMatrix(F, [[sum((a[i][t] * b[t][j] for t in range(r)), F.zero()) for j in range(d)] for i in range(d)])
    S, reduced = column_reduce(L)
    assert S.det().is_constant() and not S.det().is_zero()
    rank = residue_rank(L)
    assert residue_rank(reduced) == rank
    zero_cols = [j for j in range(d) if all(reduced[i, j].is_zero() for i in range(d))]
    assert zero_cols == list(range(rank, d))
    SF = ResidueMatrix(F, [[F(e) for e in row] for row in S.rows])
    assert L @ SF == reduced


def test_row_reduce_reproduces_factorial_example():
    N = residue(z - 2, (0, -3), (0, -6))
    Pinv, s = row_reduce(N)
    assert s == 1
    assert Pinv == M(("1/2", "1/2"), ("0", "1"))


def test_row_reduce_with_kernel_span():
    Mres = residue(z - 2, (0, 0), (-12, 6))
    N = residue(z - 2, (0, -3), (0, -6))
    Pinv, s = row_reduce(N, residue_kernel(Mres))
    assert s == 1
    F = ResidueField(z - 2)
    P = ResidueMatrix(F, [[F(e) for e in row] for row in inverse(Pinv).rows])
    assert (P @ N).rows[0] == (F.zero(), F.zero())


def test_residue_kernel():
    m = residue(z, (1, 2), (2, 4))
    K = residue_kernel(m)
    assert len(K) == 1
    assert all((m[i, 0] * K[0][0] + m[i, 1] * K[0][1]).is_zero() for i in range(2))
    assert len(residue_kernel(residue(z, (1, 0), (0, 1)))) == 0


def test_unimodular():
    U = PolynomialMatrix.of(M(("1", "z"), ("0", "1")))
    assert U.is_unimodular()
    assert not PolynomialMatrix.diag([z, 1]).is_unimodular()


def test_shift_and_reflect():
    assert EXAMPLE.shift(1).shift(-1) == EXAMPLE
    assert EXAMPLE.reflect().reflect() == EXAMPLE
    assert M(("z", "0"), ("0", "1")).reflect() == M(("-z", "0"), ("0", "1"))
