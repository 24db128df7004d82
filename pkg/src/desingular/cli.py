"""Command-line interface: ``desing <command> ...``.

Exit status is 0 on success, 1 when a verification fails or nothing could be
desingularized (the report is still printed), and 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from pathlib import Path

from .desing import (
    DEFAULT_MAX_K,
    Achievement,
    Status,
    classify,
    desingularize_all,
    desingularize_at,
    rank_reduce,
    verify_certificate,
)
from .errors import DesingError
from .parsing import (
    certificate_from_document,
    certificate_to_document,
    dumps,
    load_document,
    load_system,
    parse_polynomial,
    system_to_document,
)
from .system import Direction, adjoint, phi_dispersion, singularities

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Usage(Exception):
    pass


def _pole(text, var):
    p = parse_polynomial(text, var)
    if p.is_constant():
        raise _Usage(f"pole {text!r} must be a non-constant polynomial")
    return p.monic()


def _side_system(sys_, side):
    want = Direction.FORWARD if side == "r" else Direction.BACKWARD
    return sys_ if sys_.direction is want else adjoint(sys_)


def _emit_certificate(args, outcome, var, side):
    doc = certificate_to_document(outcome, var, side)
    if args.out:
        Path(args.out).write_text(dumps(doc))
        if getattr(args, "json", False):
            sys.stdout.write(dumps(doc["report"]))
        else:
            _print_summary(outcome, var)
    else:
        sys.stdout.write(dumps(doc))
    if outcome.status is Status.NONE:
        msg = "not desingularizable"
        if outcome.blocking is not None:
            msg += f" (blocked at {outcome.blocking.format(var)})"
        print(msg, file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def _print_summary(outcome, var):
    print(f"status: {outcome.status.value}")
    for a in outcome.achieved:
        print(
            f"  {a.modulus.format(var)}: order {a.old_order} -> {a.new_order}, "
            f"leading rank {a.old_rank} -> {a.new_rank}"
        )
    if outcome.blocking is not None:
        print(f"  blocked at {outcome.blocking.format(var)}")


# -- commands ---------------------------------------------------------------------


def cmd_analyze(args):
    sys_, var = load_system(args.system)
    report = singularities(sys_)
    fwd = _side_system(sys_, "r")
    bwd = _side_system(sys_, "l")
    r_cls = [classify(fwd, p.factor).value for p in report.r_poles]
    l_cls = [classify(bwd, p.factor).value for p in report.l_poles]
    if args.json:
        doc = report.to_dict(var)
        for p, c in zip(doc["r_poles"], r_cls):
            p["classification"] = c
        for p, c in zip(doc["l_poles"], l_cls):
            p["classification"] = c
        sys.stdout.write(dumps(doc))
        return EXIT_OK
    for label, poles, classes, cls in (
        ("r", report.r_poles, report.r_classes, r_cls),
        ("l", report.l_poles, report.l_classes, l_cls),
    ):
        print(f"{label}-poles: {len(poles)}")
        for p, c in zip(poles, cls):
            roots = ", ".join(str(r) for r in p.roots)
            print(
                f"  {p.factor.format(var)}"
                + (f" (root {roots})" if roots else "")
                + f": multiplicity {p.multiplicity}, minimal {'yes' if p.phi_minimal else 'no'}, "
                f"dispersion {p.dispersion}, class {p.class_index} offset {p.offset}, {c}"
            )
        for i, c in enumerate(classes):
            members = ", ".join(f"{f.format(var)} [+{k}]" for f, k in c.members)
            print(f"  class {i}: {members}")
    return EXIT_OK


def cmd_dispersion(args):
    sys_, var = load_system(args.system)
    print(phi_dispersion(sys_, _pole(args.pole, var)))
    return EXIT_OK


def cmd_desingularize(args):
    sys_, var = load_system(args.system)
    source = _side_system(sys_, args.side)
    if args.pole is None:
        outcome = desingularize_all(sys_, args.side, args.algorithm)
    else:
        outcome = desingularize_at(source, _pole(args.pole, var), args.algorithm)
    return _emit_certificate(args, outcome, var, args.side)


def cmd_rank_reduce(args):
    sys_, var = load_system(args.system)
    max_k = args.max_k
    if max_k is None:
        max_k = int(os.environ.get("DESING_MAX_K", DEFAULT_MAX_K))
    if max_k < 1:
        raise _Usage("--max-k must be positive")
    source = _side_system(sys_, args.side)
    q = _pole(args.pole, var)
    outcome = rank_reduce(source, q, max_k)
    return _emit_certificate(args, outcome, var, args.side)


def cmd_adjoint(args):
    sys_, var = load_system(args.system)
    sys.stdout.write(dumps(system_to_document(adjoint(sys_), var)))
    return EXIT_OK


def _claims(report, var):
    if not report or "status" not in report:
        return None
    try:
        status = Status(report["status"])
    except ValueError:
        raise _Usage(f"unknown status {report['status']!r} in certificate") from None
    achieved = []
    for a in report.get("achieved", []):
        achieved.append(
            Achievement(
                parse_polynomial(a["modulus"], var),
                math.inf if a["old_order"] == "inf" else a["old_order"],
                math.inf if a["new_order"] == "inf" else a["new_order"],
                a["old_rank"],
                a["new_rank"],
            )
        )
    return _Claims(status, tuple(achieved))


class _Claims:
    def __init__(self, status, achieved):
        self.status = status
        self.achieved = achieved


def cmd_verify(args):
    sys_, _ = load_system(args.system)
    doc = load_document(args.certificate)
    if not isinstance(doc, dict):
        raise _Usage("certificate must be a JSON object")
    side = doc.get("side", "r")
    if side not in ("r", "l"):
        raise _Usage(f"unknown side {side!r} in certificate")
    var = doc.get("variable", "z")
    cert, report = certificate_from_document(doc, _side_system(sys_, side))
    try:
        claims = _claims(report, var)
    except (KeyError, TypeError):
        raise _Usage("malformed report in certificate") from None
    result = verify_certificate(cert, claims)
    if result.ok:
        print("ok")
        return EXIT_OK
    print(f"fail: {result.violation}")
    print(f"{result.violation}: {result.message}", file=sys.stderr)
    return EXIT_FAIL


# -- argument parsing --------------------------------------------------------------


def build_parser():
    parser = argparse.ArgumentParser(prog="desing", description="Analyze and desingularize difference systems.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="report poles, classes, dispersion and removability")
    p.add_argument("system")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_analyze)

    p = sub.add_parser("dispersion", help="dispersion of the system at a pole")
    p.add_argument("system")
    p.add_argument("--pole", required=True)
    p.set_defaults(func=cmd_dispersion)

    p = sub.add_parser("desingularize", help="remove poles and write a certificate")
    p.add_argument("system")
    p.add_argument("--pole")
    p.add_argument("--algorithm", choices=["A", "B"], default="A")
    p.add_argument("--side", choices=["r", "l"], default="r")
    p.add_argument("--out")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=cmd_desingularize)

    p = sub.add_parser("rank-reduce", help="lower the leading-matrix rank at a pole")
    p.add_argument("system")
    p.add_argument("--pole", required=True)
    p.add_argument("--max-k", type=int, dest="max_k")
    p.add_argument("--side", choices=["r", "l"], default="r")
    p.add_argument("--out")
    p.set_defaults(func=cmd_rank_reduce)

    p = sub.add_parser("adjoint", help="print the adjoint system")
    p.add_argument("system")
    p.set_defaults(func=cmd_adjoint)

    p = sub.add_parser("verify", help="re-check a certificate against a system")
    p.add_argument("system")
    p.add_argument("certificate")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code else EXIT_OK
    try:
        return args.func(args)
    except (_Usage, DesingError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE


def run(argv=None):
    """Entry point for the console script."""
    sys.exit(main(argv))

