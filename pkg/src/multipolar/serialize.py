"""Line-oriented text format for maps and multipolynomials.

A document looks like::

    kind: multipolynomial
    m: 2
    degrees: 2 2
    dim: 2
    codim: 1
    terms:
      1 1 | 1 1 = 1

For ``kind: multilinear`` a term key is the 1-based index tuple
``j_1 ... j_m`` and ``degrees`` is all ones. For multipolynomials the key is
the exponent matrix with rows separated by ``|``. A value is ``codim``
scalars written as ``p`` or ``p/q`` in lowest terms. Terms are listed in
canonical order and the document ends with a newline, so
``dumps(loads(text)) == text`` for every canonical document.
"""
from __future__ import annotations

import re
from fractions import Fraction

from .core import MultipolarError, format_scalar
from .multilinear import HomogeneousPolynomial, MultilinearMap
from .multipoly import Multipolynomial

_HEADER = ("kind", "m", "degrees", "dim", "codim")
_SCALAR = re.compile(r"^-?\d+(/\d+)?$")


class ParseError(MultipolarError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _value(value) -> str:
    return " ".join(format_scalar(a) for a in value)


def dumps(obj) -> str:
    if isinstance(obj, HomogeneousPolynomial):
        obj = as_multipolynomial(obj)
    if isinstance(obj, MultilinearMap):
        head = ["multilinear", obj.arity, " ".join(["1"] * obj.arity), obj.dim, obj.codim]
        body = [" ".join(str(j + 1) for j in key) + " = " + _value(v) for key, v in obj.coeffs.items()]
    elif isinstance(obj, Multipolynomial):
        head = ["multipolynomial", obj.m, " ".join(map(str, obj.degrees)), obj.dim, obj.codim]
        body = [
            " | ".join(" ".join(map(str, row)) for row in key) + " = " + _value(v)
            for key, v in obj.terms.items()
        ]
    else:
        raise TypeError(f"cannot serialize {type(obj).__name__}")
    lines = [f"{name}: {value}" for name, value in zip(_HEADER, head)]
    lines.append("terms:")
    lines.extend("  " + line for line in body)
    return "\n".join(lines) + "\n"


def as_multipolynomial(P: HomogeneousPolynomial) -> Multipolynomial:
    return Multipolynomial((P.degree,), P.dim, P.codim, {(alpha,): v for alpha, v in P.coeffs.items()})


def _parse_scalar(token: str, line: int, column: int) -> Fraction:
    if not _SCALAR.match(token):
        raise ParseError(f"bad scalar {token!r}", line, column)
    value = Fraction(token)
    if format_scalar(value) != token:
        raise ParseError(f"scalar {token!r} is not in lowest terms", line, column)
    return value


def _parse_ints(text: str, line: int, column: int) -> tuple:
    out = []
    for match in re.finditer(r"\S+", text):
        tok = match.group()
        if not tok.isdigit():
            raise ParseError(f"expected a nonnegative integer, got {tok!r}", line, column + match.start())
        out.append(int(tok))
    return tuple(out)


def loads(text: str):
    """Parse a document into a MultilinearMap or a Multipolynomial."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    header = {}
    for k, name in enumerate(_HEADER):
        if k >= len(lines):
            raise ParseError(f"missing header field {name!r}", k + 1)
        line = lines[k]
        prefix = f"{name}: "
        if not line.startswith(prefix):
            raise ParseError(f"expected {prefix.strip()!r}", k + 1)
        header[name] = (line[len(prefix):], len(prefix) + 1)
    if len(lines) <= len(_HEADER) or lines[len(_HEADER)] != "terms:":
        raise ParseError("expected 'terms:'", len(_HEADER) + 1)

    kind, _ = header["kind"]
    if kind not in ("multilinear", "multipolynomial"):
        raise ParseError(f"unknown kind {kind!r}", 1, header["kind"][1])
    fields = {}
    for k, name in enumerate(_HEADER[1:], start=2):
        raw, col = header[name]
        ints = _parse_ints(raw, k, col)
        if name == "degrees":
            fields[name] = ints
        elif len(ints) != 1:
            raise ParseError(f"{name} takes one integer", k, col)
        else:
            fields[name] = ints[0]
    m, degrees, dim, codim = fields["m"], fields["degrees"], fields["dim"], fields["codim"]
    if len(degrees) != m:
        raise ParseError(f"{len(degrees)} degrees for m = {m}", 3, header["degrees"][1])
    if kind == "multilinear" and set(degrees) != {1}:
        raise ParseError("a multilinear map has all degrees 1", 3, header["degrees"][1])

    terms = {}
    for k, line in enumerate(lines[len(_HEADER) + 1:], start=len(_HEADER) + 2):
        if not line.startswith("  "):
            raise ParseError("term lines are indented by two spaces", k)
        if " = " not in line:
            raise ParseError("expected 'key = value'", k)
        key_text, value_text = line[2:].split(" = ", 1)
        value_col = 2 + len(key_text) + 4
        tokens = value_text.split(" ")
        if len(tokens) != codim:
            raise ParseError(f"expected {codim} scalars", k, value_col)
        value, col = [], value_col
        for tok in tokens:
            value.append(_parse_scalar(tok, k, col))
            col += len(tok) + 1
        if kind == "multilinear":
            idx = _parse_ints(key_text, k, 3)
            if len(idx) != m or not all(1 <= j <= dim for j in idx):
                raise ParseError(f"index key must be {m} integers in 1..{dim}", k, 3)
            key = tuple(j - 1 for j in idx)
        else:
            rows = key_text.split(" | ")
            if len(rows) != m:
                raise ParseError(f"exponent matrix needs {m} rows", k, 3)
            key, col = [], 3
            for row_text, n in zip(rows, degrees):
                row = _parse_ints(row_text, k, col)
                if len(row) != dim or sum(row) != n:
                    raise ParseError(f"row {row_text!r} must be {dim} exponents summing to {n}", k, col)
                key.append(row)
                col += len(row_text) + 3
            key = tuple(key)
        if key in terms:
            raise ParseError("duplicate key", k, 3)
        terms[key] = tuple(value)
    try:
        if kind == "multilinear":
            return MultilinearMap(m, dim, codim, terms)
        return Multipolynomial(degrees, dim, codim, terms)
    except MultipolarError as exc:
        raise ParseError(str(exc), 1) from exc


def loads_points(text: str, dim: int | None = None) -> list:
    """One vector per line, scalars separated by spaces; ``#`` starts a comment."""
    points = []
    for k, raw in enumerate(text.split("\n"), start=1):
        line = raw.split("#", 1)[0]
        if not line.strip():
            continue
        vec = []
        for match in re.finditer(r"\S+", line):
            tok = match.group()
            if not re.match(r"^-?\d+(/\d+)?$", tok):
                raise ParseError(f"bad scalar {tok!r}", k, match.start() + 1)
            try:
                vec.append(Fraction(tok))
            except ZeroDivisionError:
                raise ParseError(f"zero denominator in {tok!r}", k, match.start() + 1) from None
        if dim is not None and len(vec) != dim:
            raise ParseError(f"expected {dim} coordinates, got {len(vec)}", k)
        points.append(tuple(vec))
    return points


def format_value(value) -> str:
    return _value(value)
