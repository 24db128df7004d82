import pytest

from desingular.desing import desingularize_A
from desingular.matrix import RationalMatrix, inverse
from desingular.poly import Polynomial, RationalFunction
from desingular.system import DifferenceSystem, gauge, phi_dispersion, pole_factors, singularities
from desingular.testkit import (
    brute_dispersion,
    check_solution,
    corpus_parameters,
    load_manifest,
    make_planted,
    make_random_system,
    write_manifest,
)

z = Polynomial.gen()
Y = [z**3 + 5 * z + 6, z**3 + 3 * z**2 + 8 * z + 12]


def test_brute_dispersion_examples(example1):
    assert brute_dispersion(example1, z - 2, bound=10) == 3
    assert brute_dispersion(example1, z - 2, bound=2) == 0
    assert brute_dispersion(DifferenceSystem(RationalMatrix.identity(2)), z) == 0


def test_brute_dispersion_needs_positive_bound(example1):
    with pytest.raises(ValueError):
        brute_dispersion(example1, z - 2, bound=0)


def test_dual_route_dispersion_on_random_pairs():
    pairs = 0
    seed = 0
    while pairs < 200:
        sys = make_random_system(seed, d=1 + seed % 3, max_degree=2)
        for q in pole_factors(sys):
            assert brute_dispersion(sys, q) == phi_dispersion(sys, q)
            pairs += 1
        seed += 1


def test_planted_seed_zero_has_one_class():
    inst = make_planted(0, d=2, steps=1)
    assert len(singularities(inst.singular).r_classes) == 1


def test_planted_without_steps():
    inst = make_planted(5, d=3, steps=0)
    assert inst.singular == inst.clean
    assert inst.planted_T.is_identity()


@pytest.mark.parametrize("seed", range(25))
def test_planted_defining_identity(seed):
    p = corpus_parameters(seed)
    inst = make_planted(p["seed"], p["d"], p["max_degree"], p["steps"])
    assert gauge(inst.singular, inst.planted_T) == inst.clean
    assert inst.clean.A.is_polynomial()
    assert inst.planted_T.is_polynomial()


def test_planted_is_deterministic():
    assert make_planted(17, 3, 3, 2) == make_planted(17, 3, 3, 2)


def test_planted_rejects_empty_dimension():
    with pytest.raises(ValueError):
        make_planted(0, d=0)


def test_check_solution_examples(example1):
    assert check_solution(example1, Y)
    assert check_solution(DifferenceSystem(RationalMatrix.identity(2)), [3, -1])
    assert not check_solution(example1, [Y[0] + z, Y[1]])


def test_check_solution_rejects_wrong_length(example1):
    with pytest.raises(ValueError):
        check_solution(example1, [1])


def test_check_solution_is_gauge_covariant(example1):
    T = desingularize_A(example1, z - 2).T
    Tinv = inverse(T)
    x = [sum((Tinv[i, j] * Y[j] for j in range(2)), RationalFunction(0)) for i in range(2)]
    assert all(e.is_polynomial() for e in x)
    assert check_solution(gauge(example1, T), x)


def test_corpus_parameters_cover_the_shape_range():
    shapes = [corpus_parameters(s) for s in range(200)]
    assert {p["d"] for p in shapes} == {1, 2, 3, 4}
    assert max(p["max_degree"] for p in shapes) == 3
    assert {p["steps"] for p in shapes} == {1, 2, 3}


def test_manifest_round_trip(tmp_path):
    path = tmp_path / "manifest.json"
    write_manifest(path, range(5))
    entries = load_manifest(path)
    assert [e["seed"] for e in entries] == list(range(5))
    assert all(e["expected_status"] == "fully-desingularized" for e in entries)
    assert entries[3] == dict(corpus_parameters(3), expected_status="fully-desingularized")


def test_checked_in_manifest_matches_generator(data_dir):
    entries = load_manifest(data_dir / "corpus.json")
    assert len(entries) == 200
    for e in entries:
        assert {k: e[k] for k in ("seed", "d", "max_degree", "steps")} == corpus_parameters(e["seed"])
