"""Desingularization of difference systems at a pole and over a whole system.

Two constructions remove a simple, single pole ``q``:

* the shearing algorithm (:func:`desingularize_A`) column-reduces the
  leading matrix and shears with ``diag(q I_r, I)``, pushing the pole from
  ``q`` to ``q(z+1)`` until it disappears or gets stuck;
* the factorial algorithm (:func:`desingularize_B`) looks for the first
  vanishing product ``pi_q(A~(z) A~(z-1) ... A~(z-k))`` and removes a slice of
  the pole in one gauge step built from that product.

:func:`rank_reduce` reuses the second construction to lower the rank of the
leading matrix when the pole cannot be removed. :func:`desingularize_at`
and :func:`desingularize_all` handle multiplicities, non-minimal poles,
whole classes and the left side; :func:`verify_certificate` re-checks any
result independently.
"""

from __future__ import annotations

import enum
import math
import os
from dataclasses import dataclass, field

from .errors import ModulusSplit, NotAPoleError, PreconditionError, SingularMatrixError
from .matrix import (
    PolynomialMatrix,
    RationalMatrix,
    ResidueMatrix,
    column_reduce,
    det,
    leading_matrix,
    ord_q,
    residue_kernel,
    residue_rank,
    row_reduce,
)
from .poly import Polynomial, RationalFunction, shift_factor_base, shift_offset, _multiplicity
from .residue import ResidueField, check_modulus
from .system import (
    Direction,
    DifferenceSystem,
    GaugeCertificate,
    TrailFactor,
    adjoint,
    gauge,
    is_phi_minimal,
    phi_dispersion,
    pole_classes,
    pole_factors,
    reflect,
)

__all__ = [
    "Status",
    "Classification",
    "Achievement",
    "StepRecord",
    "PassRecord",
    "DesingOutcome",
    "VerificationResult",
    "to_simple_pole",
    "desingularize_A",
    "desingularize_B",
    "factorial_check",
    "rank_reduce",
    "rank_search_bound",
    "desingularize_at",
    "desingularize_all",
    "classify",
    "verify_certificate",
    "DEFAULT_MAX_K",
]

DEFAULT_MAX_K = 64


class Status(str, enum.Enum):
    FULL = "fully-desingularized"
    PARTIAL = "partially-desingularized"
    NONE = "not-desingularizable"
    RANK_REDUCED = "rank-reduced"


class Classification(str, enum.Enum):
    REMOVABLE = "removable"
    APPARENT_CLASS = "apparent-class"
    NOT_REMOVABLE = "not-removable"


@dataclass(frozen=True)
class Achievement:
    """Order and leading-matrix rank at one modulus, before and after."""

    modulus: Polynomial
    old_order: int | float
    new_order: int | float
    old_rank: int
    new_rank: int

    def to_dict(self, var="z"):
        return {
            "modulus": self.modulus.format(var),
            "old_order": _order_json(self.old_order),
            "new_order": _order_json(self.new_order),
            "old_rank": self.old_rank,
            "new_rank": self.new_rank,
        }


@dataclass(frozen=True)
class StepRecord:
    """One shear of the shearing algorithm at ``modulus`` with ``rank`` sheared rows."""

    modulus: Polynomial
    rank: int
    dispersion_before: int
    dispersion_after: int


@dataclass(frozen=True)
class PassRecord:
    """One simple-pole pass of a driver: the scaled system handed to an algorithm."""

    modulus: Polynomial
    system: DifferenceSystem
    success: bool


@dataclass(frozen=True)
class DesingOutcome:
    certificate: GaugeCertificate
    status: Status
    achieved: tuple = ()
    steps: tuple = ()
    passes: tuple = ()
    blocking: Polynomial | None = None
    factorial: tuple | None = None

    @property
    def T(self):
        return self.certificate.T

    @property
    def target(self):
        return self.certificate.target

    @property
    def success(self):
        return self.status is Status.FULL


@dataclass(frozen=True)
class VerificationResult:
    ok: bool
    violation: str | None = None
    message: str = ""
    checks: tuple = field(default_factory=tuple)

    def __bool__(self):
        return self.ok


def _order_json(n):
    return "inf" if n == math.inf else n


def _rank_at(sys, q):
    if sys.A.is_zero():
        return 0
    return residue_rank(leading_matrix(sys.A, q))


def _achievement(source, target, q):
    """Achievement records at ``q``, one per piece if ``q`` turns out to be reducible."""
    try:
        a = Achievement(q, ord_q(source.A, q), ord_q(target.A, q), _rank_at(source, q), _rank_at(target, q))
    except ModulusSplit as e:
        return _achievement(source, target, e.factor) + _achievement(source, target, e.cofactor)
    return (a,)


def _require_forward(sys):
    if sys.direction is not Direction.FORWARD:
        raise PreconditionError("this algorithm runs on forward systems; reflect backward ones first")


def _require_simple_single(sys, q):
    _require_forward(sys)
    q = check_modulus(q)
    if not q.divides(sys.den):
        raise NotAPoleError(f"{q} is not a pole of the system")
    if sys.den != q:
        raise PreconditionError(f"expected a single simple pole at {q}, denominator is {sys.den}")
    return q


def _shear(d, q, r):
    return PolynomialMatrix.diag([q] * r + [1] * (d - r))


# -- single simple pole ------------------------------------------------------


def to_simple_pole(sys, q):
    """Return ``(h, h*A)`` with ``h = den(A)/q``, so that ``h*A`` has ``q`` as its only, simple pole."""
    q = check_modulus(q)
    if not q.divides(sys.den):
        raise NotAPoleError(f"{q} does not divide the denominator {sys.den}")
    h = sys.den.exquo(q)
    return h, sys.scaled(h)


def desingularize_A(sys, q):
    """Shearing algorithm at the single simple pole ``q`` of ``sys``.

    Each round column-reduces ``lc_q(A)`` by a unimodular ``S``, shears with
    ``D = diag(q I_r, I)`` where ``r`` is the rank of ``lc_q(A)``, and moves on
    to ``q(z+1)``. Succeeds iff no modulus of the processed segment divides the
    final denominator; otherwise the identity certificate is returned.
    """
    q = _require_simple_single(sys, q)
    d = sys.d
    cur_sys = sys
    cur = q
    cert = GaugeCertificate.identity(sys)
    segment = [q]
    steps = []
    disp = phi_dispersion(cur_sys, cur)
    while cur.divides(cur_sys.den) and disp > 0:
        lc = leading_matrix(cur_sys.A, cur)
        r = residue_rank(lc)
        S, _ = column_reduce(lc)
        D = _shear(d, cur, r)
        trail = () if S.is_identity() else (TrailFactor("S", S, cur),)
        trail += (TrailFactor("D", D, cur),)
        T = S @ D
        nxt = gauge(cur_sys, T)
        cert = cert.then(GaugeCertificate(T, trail, cur_sys, nxt))
        cur_sys = nxt
        new = cur.shift(1)
        new_disp = phi_dispersion(cur_sys, new)
        steps.append(StepRecord(cur, r, disp, new_disp))
        cur, disp = new, new_disp
        segment.append(cur)
    ok = not any(m.divides(cur_sys.den) for m in segment)
    if not ok:
        cert = GaugeCertificate.identity(sys)
    status = Status.FULL if ok else Status.NONE
    return DesingOutcome(cert, status, _achievement(sys, cert.target, q), steps=tuple(steps))


def _residue_factors(sys, q):
    """Yield ``pi_q(A~(z - j))`` for ``j = 0, 1, ...`` where ``A~ = q^n A`` has order 0 at ``q``."""
    n = -ord_q(sys.A, q)
    At = sys.A * (RationalFunction.coerce(q) ** n)
    F = ResidueField(q)
    j = 0
    while True:
        Aj = At.shift(-j)
        yield ResidueMatrix(F, [[F(e) for e in row] for row in Aj.rows])
        j += 1


def _factorial_search(sys, q, k_max, accept):
    # minimal k in 1..k_max with accept(M, M @ N); M = P_0 ... P_{k-1}, N = P_k
    if k_max < 1:
        return None
    factors = _residue_factors(sys, q)
    M = next(factors)
    for k in range(1, k_max + 1):
        N = next(factors)
        MN = M @ N
        if accept(M, MN):
            return k, M, N
        M = MN
    return None


def factorial_check(sys, q, k_max):
    """Minimal ``k <= k_max`` with ``pi_q(A~(z) A~(z-1) ... A~(z-k)) = 0``.

    Returns ``(k, M, N)`` with ``M`` the residue of the first ``k`` factors and
    ``N = pi_q(A~(z-k))``, or ``None``. A backward system is first reflected
    through ``z -> -z``, so ``M`` and ``N`` then live modulo the reflected ``q``.
    """
    q = check_modulus(q)
    if sys.direction is Direction.BACKWARD:
        return factorial_check(reflect(sys), q.reflect().monic(), k_max)
    return _factorial_search(sys, q, k_max, lambda M, MN: MN.is_zero())


def _factorial_step(cur_sys, q, k, N, M=None):
    # gauge step built from N: U lifts phi^{k-1}(P^-1), D shears the s rows P kills.
    # With M given, P kills the whole of ker M (which contains im N), so only
    # rank(M) rows get sheared.
    d = cur_sys.d
    extra = residue_kernel(M) if M is not None else ()
    Pinv, s = row_reduce(N, extra)
    U = Pinv.shift(k - 1)
    m = q.shift(k - 1)
    D = _shear(d, m, s)
    trail = () if U.is_identity() else (TrailFactor("U", U, m),)
    trail += (TrailFactor("D", D, m),)
    T = U @ D
    nxt = gauge(cur_sys, T)
    return GaugeCertificate(T, trail, cur_sys, nxt)


def desingularize_B(sys, q):
    """Factorial algorithm at the single simple pole ``q`` of ``sys``.

    Repeats while ``q`` divides the denominator: find the minimal ``k`` with a
    vanishing residue product, row-reduce ``N`` and gauge by ``U D``. The
    first successful search is kept in ``outcome.factorial``.
    """
    q = _require_simple_single(sys, q)
    cur_sys = sys
    cert = GaugeCertificate.identity(sys)
    first = None
    while q.divides(cur_sys.den):
        ell = phi_dispersion(cur_sys, q)
        if ell <= 0:
            break
        found = factorial_check(cur_sys, q, ell)
        if found is None:
            break
        if first is None:
            first = found
        k, M, N = found
        step = _factorial_step(cur_sys, q, k, N, M)
        cert = cert.then(step)
        cur_sys = step.target
    ok = not q.divides(cur_sys.den)
    if not ok:
        cert = GaugeCertificate.identity(sys)
    status = Status.FULL if ok else Status.NONE
    return DesingOutcome(cert, status, _achievement(sys, cert.target, q), factorial=first)


def rank_search_bound(sys, q, cap=None):
    """Search bound for the rank criterion: ``max(dispersion, d * sum of den multiplicities)``, capped."""
    if cap is None:
        cap = int(os.environ.get("DESING_MAX_K", DEFAULT_MAX_K))
    mults = sum(_multiplicity(sys.den._p, f._p) for f in pole_factors(sys))
    return min(cap, max(phi_dispersion(sys, q), sys.d * mults))


def rank_reduce(sys, q, max_k=None):
    """Lower the rank of ``lc_q(A)`` at a minimal pole ``q`` without changing ``ord_q``.

    Looks for the first ``k`` (up to :func:`rank_search_bound`) with
    ``rank(pi_q(A~(z) ... A~(z-k))) < rank(lc_q(A))`` and applies the factorial
    gauge step, repeating until the rank actually drops. Status is
    ``rank-reduced`` on success, ``not-desingularizable`` when the criterion
    never fires (the rank is minimal within the bound). Should the steps raise
    the order at ``q`` instead, the result is reported as a (partial)
    desingularization. Backward systems are handled through ``z -> -z``.
    """
    q = check_modulus(q)
    if not q.divides(sys.den):
        raise NotAPoleError(f"{q} is not a pole of the system")
    if sys.direction is Direction.BACKWARD:
        return _reflect_outcome(rank_reduce(reflect(sys), q.reflect().monic(), max_k), sys)
    if not is_phi_minimal(sys, q):
        raise PreconditionError(f"{q} is not a minimal pole")
    bound = rank_search_bound(sys, q, max_k)
    n0 = ord_q(sys.A, q)
    r0 = _rank_at(sys, q)
    cur_sys = sys
    cert = GaugeCertificate.identity(sys)
    first = None
    status = Status.NONE
    for _ in range(max(bound, 1)):
        r_cur = _rank_at(cur_sys, q)
        found = _factorial_search(cur_sys, q, bound, lambda M, MN, r=r_cur: residue_rank(MN) < r)
        if found is None:
            break
        if first is None:
            first = found
        k, _, N = found
        step = _factorial_step(cur_sys, q, k, N)
        cert = cert.then(step)
        cur_sys = step.target
        n1 = ord_q(cur_sys.A, q)
        if n1 > n0:
            status = Status.FULL if n1 >= 0 else Status.PARTIAL
            break
        if _rank_at(cur_sys, q) < r0:
            status = Status.RANK_REDUCED
            break
    if status is Status.NONE:
        cert = GaugeCertificate.identity(sys)
    return DesingOutcome(cert, status, _achievement(sys, cert.target, q), factorial=first)


# -- drivers -------------------------------------------------------------------

_ALGORITHMS = {"A": desingularize_A, "B": desingularize_B}


def _algorithm(name):
    try:
        return _ALGORITHMS[str(name).upper()]
    except KeyError:
        raise ValueError(f"unknown algorithm {name!r}; expected 'A' or 'B'") from None


def _reflect_outcome(out, source):
    cert = out.certificate.reflect()
    cert = GaugeCertificate(cert.T, cert.trail, source, cert.target)

    def flip(p):
        return p.reflect().monic()

    achieved = tuple(
        Achievement(flip(a.modulus), a.old_order, a.new_order, a.old_rank, a.new_rank) for a in out.achieved
    )
    steps = tuple(
        StepRecord(flip(s.modulus), s.rank, s.dispersion_before, s.dispersion_after) for s in out.steps
    )
    passes = tuple(PassRecord(flip(p.modulus), reflect(p.system), p.success) for p in out.passes)
    blocking = flip(out.blocking) if out.blocking is not None else None
    return DesingOutcome(cert, out.status, achieved, steps, passes, blocking, out.factorial)


def _class_members(sys, q):
    """Factors ``q(z+k)``, ``k >= 0``, of ``den`` as ``[(k, f)]``; raise ModulusSplit if ``q`` splits."""
    base = pole_factors(sys, q)
    pieces = [p for p in base if p.divides(q)]
    if len(pieces) > 1 or (pieces and pieces[0] != q):
        raise ModulusSplit(q, pieces[0])
    members = []
    for f in base:
        k = shift_offset(q, f)
        if k is not None and k >= 0 and f.divides(sys.den):
            members.append((k, f))
    return sorted(members, key=lambda t: t[0])


def desingularize_at(sys, q, algorithm="A"):
    """Desingularize ``sys`` at the pole ``q`` and at every ``q(z+k)``, ``k >= 1``, that blocks it.

    Members of the class are removed starting from the minimal one (largest
    ``k``); each pass scales to a single simple pole and runs the chosen
    algorithm, so a member of multiplicity ``m`` takes ``m`` passes. The run
    stops at the first member that cannot be removed, which is reported as
    ``blocking``. Backward systems are handled through ``z -> -z``.
    """
    run = _algorithm(algorithm)
    q = check_modulus(q)
    if not q.divides(sys.den):
        raise NotAPoleError(f"{q} does not divide the denominator {sys.den}")
    if sys.direction is Direction.BACKWARD:
        out = desingularize_at(reflect(sys), q.reflect().monic(), algorithm)
        return _reflect_outcome(out, sys)
    try:
        return _desingularize_at(sys, q, run)
    except ModulusSplit as e:
        k = shift_offset(q, e.modulus)
        if k is None:
            raise
        g = e.factor.shift(-k).monic()
        h = q.exquo(g).monic()
        parts = []
        cur = sys
        for piece in (g, h):
            if not piece.divides(cur.den):
                continue
            out = desingularize_at(cur, piece, algorithm)
            parts.append(out)
            cur = out.target
        return _merge(sys, q, parts)


def _merge(sys, q, parts):
    cert = GaugeCertificate.identity(sys)
    steps, passes = (), ()
    blocking = None
    for out in parts:
        cert = cert.then(out.certificate)
        steps += out.steps
        passes += out.passes
        blocking = blocking or out.blocking
    achieved = _achievement(sys, cert.target, q)
    return DesingOutcome(cert, _status_of(achieved), achieved, steps, passes, blocking)


def _status_of(achieved):
    if all(a.new_order >= 0 for a in achieved):
        return Status.FULL
    if any(a.new_order > a.old_order for a in achieved):
        return Status.PARTIAL
    return Status.NONE


def _desingularize_at(sys, q, run):
    cur = sys
    cert = GaugeCertificate.identity(sys)
    steps, passes = [], []
    blocking = None
    while True:
        members = _class_members(cur, q)
        if not members:
            break
        _, f = members[-1]
        _, scaled = to_simple_pole(cur, f)
        out = run(scaled, f)
        passes.append(PassRecord(f, scaled, out.success))
        if not out.success:
            blocking = f
            break
        steps.extend(out.steps)
        T = out.T
        trail = out.certificate.trail
        nxt = gauge(cur, T)
        cert = cert.then(GaugeCertificate(T, trail, cur, nxt))
        cur = nxt
    achieved = _achievement(sys, cur, q)
    return DesingOutcome(cert, _status_of(achieved), achieved, tuple(steps), tuple(passes), blocking)


def desingularize_all(sys, side="r", algorithm="A"):
    """Desingularize every pole class on one side.

    ``side='r'`` treats the poles of the forward matrix, ``side='l'`` those of
    the backward (adjoint) one; the certificate then transforms that
    backward system. Each class is driven from its rightmost member so that
    all members get processed.
    """
    run = _algorithm(algorithm)
    side = str(side).lower()
    if side not in ("r", "l"):
        raise ValueError(f"side must be 'r' or 'l', not {side!r}")
    want = Direction.FORWARD if side == "r" else Direction.BACKWARD
    source = sys if sys.direction is want else adjoint(sys)
    if want is Direction.BACKWARD:
        out = _desingularize_all_forward(reflect(source), run, algorithm)
        return _reflect_outcome(out, source)
    return _desingularize_all_forward(source, run, algorithm)


def _desingularize_all_forward(sys, run, algorithm):
    factors = pole_factors(sys)
    classes = pole_classes(factors)
    cur = sys
    cert = GaugeCertificate.identity(sys)
    steps, passes = (), ()
    blocking = None
    for c in classes:
        for f, _ in c.members:
            # rightmost member still present
            if f.divides(cur.den):
                out = desingularize_at(cur, f, algorithm)
                cert = cert.then(out.certificate)
                cur = out.target
                steps += out.steps
                passes += out.passes
                blocking = blocking or out.blocking
                break
    achieved = tuple(a for f in factors for a in _achievement(sys, cur, f))
    if cur.den.is_one():
        status = Status.FULL
    elif any(a.new_order > a.old_order for a in achieved):
        status = Status.PARTIAL
    else:
        status = Status.NONE
    return DesingOutcome(cert, status, achieved, steps, passes, blocking)


def classify(sys, q, algorithm="A"):
    """``removable`` if the pole ``q`` can be removed; ``apparent-class`` if moreover every
    pole ``q(z-k)``, ``k >= 1``, congruent to it can; ``not-removable`` otherwise."""
    q = check_modulus(q)
    if not q.divides(sys.den):
        raise NotAPoleError(f"{q} does not divide the denominator {sys.den}")
    if not desingularize_at(sys, q, algorithm).success:
        return Classification.NOT_REMOVABLE
    s = sys.step
    right = q
    for f in pole_factors(sys):
        k = shift_offset(q, f)
        if k is not None and s * k < 0 and s * k < s * shift_offset(q, right):
            right = f
    if right != q and not desingularize_at(sys, right, algorithm).success:
        return Classification.REMOVABLE
    return Classification.APPARENT_CLASS


# -- verification --------------------------------------------------------------


def verify_certificate(cert, claims=None):
    """Re-check a certificate from scratch.

    Checks, in order: ``gauge(source, T) == target`` (``gauge-mismatch``), the
    trail multiplies out to ``T`` (``trail-mismatch``), ``T`` is a polynomial
    matrix with non-zero determinant (``not-polynomial``, ``singular``), the
    claimed orders and ranks hold (``order-claim``), no factor of either
    denominator got a worse order (``order-worsened``) and each shear's
    modulus power divides ``det(T)`` (``shear-divisibility``).
    """
    done = []

    def fail(name, msg):
        return VerificationResult(False, name, msg, tuple(done))

    src, tgt, T = cert.source, cert.target, cert.T
    try:
        if gauge(src, T) != tgt or src.direction is not tgt.direction:
            return fail("gauge-mismatch", "gauge(source, T) differs from the claimed target")
    except SingularMatrixError:
        return fail("singular", "T is singular")
    done.append("gauge")
    if cert.trail_product() != T:
        return fail("trail-mismatch", "the trail factors do not multiply to T")
    done.append("trail")
    if not T.is_polynomial():
        return fail("not-polynomial", "T has non-polynomial entries")
    dT = det(T)
    if dT.is_zero():
        return fail("singular", "T is singular")
    done.append("polynomial")
    if claims is not None:
        msg = _check_claims(src, tgt, claims)
        if msg:
            return fail("order-claim", msg)
        done.append("claims")
    for p in shift_factor_base([src.den, tgt.den]):
        a, b = ord_q(src.A, p), ord_q(tgt.A, p)
        if b < a:
            return fail("order-worsened", f"order at {p} went from {a} to {b}")
    done.append("orders")
    need = Polynomial.coerce(1)
    for f in cert.trail:
        if f.kind == "D":
            r = sum(1 for i in range(f.matrix.d) if _is_modulus_entry(f.matrix[i, i], f.modulus))
            need = need * f.modulus ** r
    if not need.divides(dT.numerator):
        return fail("shear-divisibility", f"det(T) = {dT} is not divisible by {need}")
    done.append("shears")
    return VerificationResult(True, None, "ok", tuple(done))


def _check_claims(src, tgt, claims):
    status = Status(claims.status)
    for a in claims.achieved:
        old, new = ord_q(src.A, a.modulus), ord_q(tgt.A, a.modulus)
        if (old, new) != (a.old_order, a.new_order):
            return f"orders at {a.modulus} are {old} -> {new}, claimed {a.old_order} -> {a.new_order}"
        ranks = (_rank_at(src, a.modulus), _rank_at(tgt, a.modulus))
        if ranks != (a.old_rank, a.new_rank):
            return f"ranks at {a.modulus} are {ranks}, claimed {(a.old_rank, a.new_rank)}"
    if status is Status.FULL:
        if not all(a.new_order >= 0 for a in claims.achieved):
            return "claimed full desingularization but a pole remains"
    elif status is Status.PARTIAL:
        if not any(a.new_order > a.old_order for a in claims.achieved):
            return "claimed partial desingularization but no order improved"
    elif status is Status.RANK_REDUCED:
        for a in claims.achieved:
            if a.new_order != a.old_order or a.new_rank >= a.old_rank:
                return f"claimed rank reduction at {a.modulus} does not hold"
    return None


def _is_modulus_entry(e, m):
    # a shear entry equals its modulus up to sign (reflection turns q(z) into +-q(-z))
    return e.is_polynomial() and not e.is_zero() and e.numerator.monic() == m
