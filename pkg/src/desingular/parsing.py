"""Expression parser and the JSON documents read and written by the CLI.

Grammar (whitespace is ignored)::

    expr    := term (('+' | '-') term)*
    term    := factor (('*' | '/') factor)*
    factor  := '-' factor | power
    power   := primary ('^' uint)?
    primary := uint | var | '(' expr ')'

so ``^`` binds tighter than unary minus (``-z^2`` is ``-(z^2)``), which binds
tighter than ``*`` and ``/``; ``/`` is left-associative.
"""

from __future__ import annotations

import json
import re
from pathlib import Path

from .errors import ParseError, SingularMatrixError
from .matrix import PolynomialMatrix, RationalMatrix
from .poly import Polynomial, RationalFunction
from .system import Direction, DifferenceSystem, GaugeCertificate, TrailFactor

__all__ = [
    "parse_expression",
    "parse_polynomial",
    "format_expression",
    "matrix_to_strings",
    "parse_matrix",
    "system_to_document",
    "system_from_document",
    "load_system",
    "certificate_to_document",
    "certificate_from_document",
    "dumps",
    "load_document",
]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z_0-9]*)|(.))")


def _tokenize(text):
    tokens = []
    pos = 0
    while text[pos:].strip():
        m = _TOKEN.match(text, pos)
        start = m.start(m.lastindex) + 1
        if m.group(1) is not None:
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2) is not None:
            tokens.append(("name", m.group(2), start))
        else:
            ch = m.group(3)
            if ch not in "+-*/^()":
                raise ParseError(f"unexpected character {ch!r}", start)
            tokens.append((ch, ch, start))
        pos = m.end()
    tokens.append(("end", None, len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, text, var):
        self.text = text
        self.var = var
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind):
        tok = self.take()
        if tok[0] != kind:
            raise ParseError(f"expected {kind!r}, found {_describe(tok)}", tok[2])
        return tok

    def parse(self):
        if self.peek()[0] == "end":
            raise ParseError("empty expression", 1)
        value = self.expr()
        tok = self.peek()
        if tok[0] != "end":
            raise ParseError(f"unexpected {_describe(tok)}", tok[2])
        return value

    def expr(self):
        value = self.term()
        while self.peek()[0] in ("+", "-"):
            op = self.take()[0]
            rhs = self.term()
            value = value + rhs if op == "+" else value - rhs
        return value

    def term(self):
        value = self.factor()
        while self.peek()[0] in ("*", "/"):
            op, _, pos = self.take()
            rhs = self.factor()
            if op == "*":
                value = value * rhs
            else:
                if rhs.is_zero():
                    raise ParseError("division by zero (zero denominator)", pos)
                value = value / rhs
        return value

    def factor(self):
        if self.peek()[0] == "-":
            self.take()
            return -self.factor()
        return self.power()

    def power(self):
        base = self.primary()
        if self.peek()[0] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "int":
                raise ParseError(f"exponent must be a non-negative integer, found {_describe(tok)}", tok[2])
            return base ** tok[1]
        return base

    def primary(self):
        tok = self.take()
        kind, value, pos = tok
        if kind == "int":
            return RationalFunction.coerce(value)
        if kind == "name":
            if value != self.var:
                raise ParseError(f"unknown identifier {value!r}", pos)
            return RationalFunction.coerce(Polynomial.gen())
        if kind == "(":
            inner = self.expr()
            self.expect(")")
            return inner
        raise ParseError(f"unexpected {_describe(tok)}", pos)


def _describe(tok):
    if tok[0] == "end":
        return "end of input"
    return repr(str(tok[1]))


def parse_expression(text, var="z"):
    """Parse ``text`` into an exact :class:`RationalFunction` in the variable ``var``."""
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}")
    return _Parser(text, var).parse()


def parse_polynomial(text, var="z"):
    f = parse_expression(text, var)
    if not f.is_polynomial():
        raise ParseError(f"{text!r} is not a polynomial")
    return f.numerator


def format_expression(f, var="z"):
    return RationalFunction.coerce(f).format(var)


def matrix_to_strings(m, var="z"):
    return [[format_expression(e, var) for e in row] for row in m.rows]


def parse_matrix(grid, var="z"):
    if not isinstance(grid, list) or not grid or not all(isinstance(r, list) for r in grid):
        raise ParseError("a matrix must be a non-empty list of rows")
    d = len(grid)
    if any(len(r) != d for r in grid):
        raise ParseError("matrix must be square")
    return RationalMatrix([[parse_expression(e, var) for e in row] for row in grid])


# -- documents -------------------------------------------------------------------


def dumps(obj):
    """Canonical JSON: sorted keys, two-space indent, trailing newline."""
    return json.dumps(obj, indent=2, sort_keys=True) + "\n"


def system_to_document(sys, var="z"):
    return {"variable": var, "matrix": matrix_to_strings(sys.A, var), "direction": sys.direction.value}


def system_from_document(doc):
    """Return ``(system, variable)`` from a SystemDocument dictionary."""
    if not isinstance(doc, dict):
        raise ParseError("system document must be a JSON object")
    var = doc.get("variable", "z")
    if not isinstance(var, str) or not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", var):
        raise ParseError(f"invalid variable name {var!r}")
    if "matrix" not in doc:
        raise ParseError("system document has no 'matrix'")
    direction = doc.get("direction", "forward")
    if direction not in ("forward", "backward"):
        raise ParseError(f"direction must be 'forward' or 'backward', not {direction!r}")
    A = parse_matrix(doc["matrix"], var)
    try:
        return DifferenceSystem(A, Direction(direction)), var
    except SingularMatrixError:
        raise ParseError("system matrix is singular (zero determinant)") from None


def load_system(path):
    return system_from_document(load_document(path))


def load_document(path):
    try:
        return json.loads(Path(path).read_text())
    except OSError as e:
        raise ParseError(f"cannot read {path}: {e.strerror}") from None
    except json.JSONDecodeError as e:
        raise ParseError(f"{path} is not valid JSON: {e.msg}", e.pos + 1) from None


def certificate_to_document(outcome, var="z", side="r"):
    cert = outcome.certificate
    report = {
        "status": outcome.status.value,
        "achieved": [a.to_dict(var) for a in outcome.achieved],
    }
    if outcome.blocking is not None:
        report["blocking"] = outcome.blocking.format(var)
    return {
        "variable": var,
        "side": side,
        "transformation": matrix_to_strings(cert.T, var),
        "trail": [
            {"kind": f.kind, "matrix": matrix_to_strings(f.matrix, var), "modulus": f.modulus.format(var)}
            for f in cert.trail
        ],
        "transformed": matrix_to_strings(cert.target.A, var),
        "report": report,
    }


def certificate_from_document(doc, source):
    """Rebuild ``(GaugeCertificate, report)`` against the given source system."""
    if not isinstance(doc, dict):
        raise ParseError("certificate document must be a JSON object")
    var = doc.get("variable", "z")
    for key in ("transformation", "transformed"):
        if key not in doc:
            raise ParseError(f"certificate document has no {key!r}")
    T = parse_matrix(doc["transformation"], var)
    target_matrix = parse_matrix(doc["transformed"], var)
    trail = []
    for item in doc.get("trail", []):
        kind = item.get("kind")
        if kind not in ("S", "D", "U"):
            raise ParseError(f"unknown trail factor kind {kind!r}")
        m = parse_matrix(item["matrix"], var)
        if not m.is_polynomial():
            raise ParseError("trail factors must be polynomial matrices")
        trail.append(TrailFactor(kind, PolynomialMatrix.of(m), parse_polynomial(item["modulus"], var)))
    try:
        target = DifferenceSystem(target_matrix, source.direction)
    except SingularMatrixError:
        raise ParseError("transformed matrix is singular") from None
    return GaugeCertificate(T, tuple(trail), source, target), doc.get("report", {})
