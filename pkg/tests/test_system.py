import random
from fractions import Fraction

import pytest

from desingular.errors import NotAPoleError, SingularMatrixError
from desingular.matrix import RationalMatrix, det
from desingular.parsing import parse_matrix
from desingular.poly import Polynomial, RationalFunction
from desingular.system import (
    DifferenceSystem,
    Direction,
    GaugeCertificate,
    TrailFactor,
    adjoint,
    gauge,
    is_phi_minimal,
    phi_dispersion,
    reflect,
    singularities,
)
from desingular.testkit import brute_dispersion, make_random_system, random_unimodular

z = Polynomial.gen()


def M(*rows):
    return parse_matrix([list(r) for r in rows])


def test_singular_matrix_is_rejected():
    with pytest.raises(SingularMatrixError):
        DifferenceSystem(M(("1", "z"), ("1", "z")))


def test_system_caches(example1):
    assert example1.den == z - 2
    assert example1.det == RationalFunction(2 * z + 2, z - 2)
    assert example1.numdet == z + 1


def test_gauge_examples(example1, blocked):
    S = M(("1", "1/2"), ("0", "1"))
    assert gauge(example1, S).A == M(("(z+1)/(z-2)", "0"), ("(-2*z-2)/(z-2)", "2"))
    assert gauge(example1, RationalMatrix.identity(2)) == example1
    assert gauge(blocked, M(("z", "0"), ("0", "1"))).A == M(("z+1", "0"), ("0", "1/(z+1)"))


def test_gauge_by_singular_transformation(example1):
    with pytest.raises(SingularMatrixError):
        gauge(example1, M(("1", "1"), ("1", "1")))


def test_adjoint_examples(example1, rank_example):
    assert adjoint(example1).A == M(("3*(z-2)/(2*z)", "(3-z)/(2*z)"), ("1", "0"))
    identity = DifferenceSystem(RationalMatrix.identity(3))
    assert adjoint(identity).A == identity.A
    assert adjoint(rank_example).A == M(("1/(z*(z-1))", "0", "0"), ("0", "(z-1)/z", "0"), ("0", "0", "z-1"))


def test_backward_gauge_uses_inverse_shift(example1):
    star = adjoint(example1)
    T = M(("z", "1"), ("0", "1"))
    assert gauge(star, T).A == T.shift(-1).inverse() @ star.A @ T
    # gauge commutes with taking adjoints
    assert adjoint(gauge(example1, T)) == gauge(star, T)


def test_reflect_swaps_direction(example1):
    r = reflect(example1)
    assert r.direction is Direction.BACKWARD
    assert reflect(r) == example1


def test_singularities_example(example1):
    report = singularities(example1)
    assert [p.factor for p in report.r_poles] == [z - 2]
    assert report.r_poles[0].roots == (Fraction(2),)
    assert [p.factor for p in report.l_poles] == [z]
    assert report.l_poles[0].roots == (Fraction(0),)


def test_singularities_of_polynomial_unimodular_system():
    sys = DifferenceSystem(M(("1", "z"), ("0", "1")))
    report = singularities(sys)
    assert not report.r_poles


def test_singularities_congruence_class(blocked):
    report = singularities(blocked)
    assert {p.factor: p.multiplicity for p in report.r_poles} == {z: 1, z + 1: 1}
    assert len(report.r_classes) == 1
    offsets = {p.factor: p.offset for p in report.r_poles}
    assert abs(offsets[z] - offsets[z + 1]) == 1


def test_singularity_report_serializes(example1):
    doc = singularities(example1).to_dict()
    assert doc["r_poles"][0]["factor"] == "z - 2"
    assert doc["r_poles"][0]["dispersion"] == 3


def test_phi_minimality(example1, blocked):
    assert is_phi_minimal(example1, z - 2)
    assert not is_phi_minimal(blocked, z)
    assert is_phi_minimal(blocked, z + 1)
    with pytest.raises(NotAPoleError):
        is_phi_minimal(example1, z - 3)


def test_dispersion_examples(example1, blocked):
    assert phi_dispersion(example1, z - 2) == 3
    assert phi_dispersion(DifferenceSystem(RationalMatrix.identity(2)), z - 5) == 0
    assert phi_dispersion(blocked, z + 1) == 0
    assert phi_dispersion(blocked, z) == 1


@pytest.mark.parametrize("seed", range(40))
def test_dispersion_matches_brute_force(seed):
    sys = make_random_system(seed, d=1 + seed % 3, max_degree=4)
    for q in (z, z - 1, z + 2, z**2 + 1):
        assert phi_dispersion(sys, q) == brute_dispersion(sys, q, bound=60)


def _random_invertible(rng, d):
    return random_unimodular(rng, d) @ RationalMatrix.diag([z - rng.randint(-3, 3) for _ in range(d)])


@pytest.mark.parametrize("seed", range(20))
def test_gauge_composition(seed):
    rng = random.Random(seed)
    sys = make_random_system(seed, d=2)
    T, W = _random_invertible(rng, 2), _random_invertible(rng, 2)
    assert gauge(gauge(sys, T), W) == gauge(sys, T @ W)


@pytest.mark.parametrize("seed", range(20))
def test_gauge_commutes_with_scalars(seed):
    rng = random.Random(seed)
    sys = make_random_system(seed, d=2)
    T = _random_invertible(rng, 2)
    h = Polynomial([rng.randint(1, 4), rng.randint(-3, 3), 1])
    assert gauge(sys.scaled(h), T).A == gauge(sys, T).A * RationalFunction(h)


@pytest.mark.parametrize("seed", range(20))
def test_adjoint_identity(seed):
    sys = make_random_system(seed, d=1 + seed % 3)
    assert adjoint(sys).A @ sys.A.shift(-1) == RationalMatrix.identity(sys.d)


@pytest.mark.parametrize("seed", range(20))
def test_gauge_determinant(seed):
    rng = random.Random(seed)
    sys = make_random_system(seed, d=2)
    T = _random_invertible(rng, 2)
    dT = det(T)
    assert gauge(sys, T).det == sys.det * dT / dT.shift(1)
    U = random_unimodular(rng, 2)
    assert gauge(sys, U).det == sys.det


def test_certificate_composition(example1):
    S = M(("1", "1/2"), ("0", "1"))
    D = M(("z-2", "0"), ("0", "1"))
    mid = gauge(example1, S)
    first = GaugeCertificate(S, (TrailFactor("S", S, z - 2),), example1, mid)
    second = GaugeCertificate(D, (TrailFactor("D", D, z - 2),), mid, gauge(mid, D))
    both = first.then(second)
    assert both.T == S @ D
    assert both.trail_product() == both.T
    assert both.target == gauge(example1, S @ D)
    assert GaugeCertificate.identity(example1).T.is_identity()
