"""Independent oracles and random instances for testing the desingularization code.

The dispersion oracle deliberately goes through SymPy rather than the
FLINT-backed arithmetic used everywhere else, so the two routes share no code.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from pathlib import Path

import sympy

from .matrix import PolynomialMatrix, RationalMatrix, inverse
from .poly import Polynomial, RationalFunction
from .system import DifferenceSystem, gauge

__all__ = [
    "PlantedInstance",
    "brute_dispersion",
    "make_planted",
    "make_random_system",
    "random_unimodular",
    "check_solution",
    "load_manifest",
    "write_manifest",
    "corpus_parameters",
]


@dataclass(frozen=True)
class PlantedInstance:
    """``singular = gauge(clean, planted_T^-1)``, so ``planted_T`` desingularizes ``singular``."""

    clean: DifferenceSystem
    planted_T: RationalMatrix
    singular: DifferenceSystem
    seed: int


# -- dispersion oracle -----------------------------------------------------------

_z, _k = sympy.symbols("z k")


def _to_sympy(p):
    return sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(p.coefficients)] or [0], _z)


def _scan_dispersion(q, num, step, bound):
    best = 0
    for ell in range(1, bound + 1):
        shifted = _to_sympy(q).compose(sympy.Poly(_z + step * ell, _z))
        if _to_sympy(num).rem(shifted).is_zero:
            best = ell
    return best


def _resultant_dispersion(q, num, step, bound):
    qs = _to_sympy(q).as_expr().subs(_z, _z + _k)
    res = sympy.Poly(sympy.resultant(qs, _to_sympy(num).as_expr(), _z), _k)
    if res.is_zero:
        raise AssertionError("shift resultant vanishes identically")
    best = 0
    for root in res.ground_roots():
        if not root.is_integer:
            continue
        ell = int(root) * step
        if 1 <= ell <= bound:
            shifted = _to_sympy(q).compose(sympy.Poly(_z + step * ell, _z))
            if _to_sympy(num).rem(shifted).is_zero:
                best = max(best, ell)
    return best


def brute_dispersion(sys, q, bound=60):
    """Largest ``l <= bound`` with ``q(z + s*l) | num(det A)`` by two independent routes.

    One route scans ``l = 1..bound``; the other takes integer roots of
    ``Res_z(q(z + k), num(det A))``. Raises ``AssertionError`` if they differ.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    q = Polynomial.coerce(q)
    num = sys.numdet
    if num.is_constant():
        return 0
    scan = _scan_dispersion(q, num, sys.step, bound)
    res = _resultant_dispersion(q, num, sys.step, bound)
    if scan != res:
        raise AssertionError(f"dispersion routes disagree: scan {scan}, resultant {res}")
    return scan


# -- random instances ------------------------------------------------------------


def _small(rng, lo=-3, hi=3, nonzero=False):
    while True:
        c = rng.randint(lo, hi)
        if c or not nonzero:
            return c


def _unit_triangular(rng, d, degree, lower):
    z = Polynomial.gen()
    one, zero = Polynomial.coerce(1), Polynomial.coerce(0)

    def entry():
        return sum((_small(rng, -2, 2) * z**e for e in range(degree + 1)), zero)

    def pick(i, j):
        if i == j:
            return one
        return entry() if (j < i if lower else j > i) else zero

    return PolynomialMatrix([[pick(i, j) for j in range(d)] for i in range(d)])


def random_unimodular(rng, d, degree=1):
    """``L U`` with unit triangular ``L``, ``U`` and small entries of degree ``<= degree``."""
    return _unit_triangular(rng, d, degree, True) @ _unit_triangular(rng, d, degree, False)


def make_planted(seed, d=2, max_degree=3, steps=1):
    """Random polynomial system ``clean`` made singular by a planted ``S D`` product.

    ``clean = V(z+1)^-1 Delta V`` with ``V`` elementary and ``Delta``
    diagonal whose determinant is a product of distinct linear factors; the
    entries of ``clean`` have degree at most ``max_degree``. ``planted_T`` is a
    product of ``steps`` pairs ``S D``: ``S`` unimodular with entries of degree
    <= 1 and ``D`` a diagonal shear by ``z - a`` on a non-empty subset of the
    coordinates.
    """
    if d < 1:
        raise ValueError("dimension must be at least 1")
    rng = random.Random(seed)
    z = Polynomial.gen()
    vdeg = 1 if max_degree >= 2 else 0
    ddeg = max_degree - 2 * vdeg
    roots = rng.sample(range(-12, 13), d * ddeg)
    diag = []
    for i in range(d):
        deg = rng.randint(0, ddeg)
        entry = Polynomial.coerce(_small(rng, -3, 3, nonzero=True))
        for a in roots[i * ddeg : i * ddeg + deg]:
            entry = entry * (z - a)
        diag.append(entry)
    V = PolynomialMatrix.identity(d)
    if d > 1:
        i, j = rng.sample(range(d), 2)
        rows = [list(r) for r in V.rows]
        rows[i][j] = sum((_small(rng, -2, 2) * z**e for e in range(vdeg + 1)), Polynomial.coerce(0))
        V = PolynomialMatrix(rows)
    clean = gauge(DifferenceSystem(RationalMatrix.diag(diag)), V)
    T = RationalMatrix.identity(d)
    for _ in range(steps):
        S = random_unimodular(rng, d)
        a = rng.randint(-3, 3)
        chosen = rng.sample(range(d), rng.randint(1, d))
        D = PolynomialMatrix.diag([z - a if i in chosen else 1 for i in range(d)])
        T = T @ S @ D
    singular = gauge(clean, inverse(T))
    return PlantedInstance(clean, T, singular, seed)


def make_random_system(seed, d=2, max_degree=2):
    """Unstructured system: polynomial numerators over products of small linear factors."""
    rng = random.Random(seed)
    z = Polynomial.gen()
    while True:
        rows = []
        for _ in range(d):
            row = []
            for _ in range(d):
                num = sum((_small(rng) * z**e for e in range(rng.randint(0, max_degree) + 1)), Polynomial.coerce(0))
                den = Polynomial.coerce(1)
                if rng.random() < 0.5:
                    den = z - rng.randint(-3, 3)
                row.append(RationalFunction(num, den))
            rows.append(row)
        M = RationalMatrix(rows)
        if not M.det().is_zero():
            return DifferenceSystem(M)


def check_solution(sys, y):
    """True iff the column ``y`` satisfies ``y(z + s) == A y`` exactly."""
    y = [RationalFunction.coerce(e) for e in y]
    if len(y) != sys.d:
        raise ValueError("solution column has the wrong length")
    for i in range(sys.d):
        rhs = sum((sys.A[i, j] * y[j] for j in range(sys.d)), RationalFunction.coerce(0))
        if y[i].shift(sys.step) != rhs:
            return False
    return True


# -- corpus manifest ----------------------------------------------------------------


def corpus_parameters(seed):
    """Deterministic instance shape for a corpus seed: ``d`` in 1..4, entry degree <= 3."""
    d = 1 + seed % 4
    max_degree = 2 + (seed // 4) % 2
    steps = 1 + (seed // 8) % 3
    return {"seed": seed, "d": d, "max_degree": max_degree, "steps": steps}


def write_manifest(path, seeds, expected="fully-desingularized"):
    entries = [dict(corpus_parameters(s), expected_status=expected) for s in seeds]
    Path(path).write_text(json.dumps({"instances": entries}, indent=1, sort_keys=True) + "\n")


def load_manifest(path):
    return json.loads(Path(path).read_text())["instances"]
