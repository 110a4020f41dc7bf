"""Quadratic forms <-> symmetric matrices.

A form q(x) = x^T A x is read from text such as ``x1^2 + 4*x1*x2 - x3*x1``
with a small recursive-descent parser. Coefficients are kept exact as
fractions until the matrix is built; A[j][k] = A[k][j] = c_jk / 2 for
the cross term c_jk x_j x_k, and A[j][j] is the coefficient of x_j^2.

Grammar::

    expr   := term (('+' | '-') term)*
    term   := unary ('*' unary)*
    unary  := ('+' | '-') unary | power
    power  := atom ('^' INT)?
    atom   := NUMBER | NAME | '(' expr ')'
"""
from __future__ import annotations

import re
from fractions import Fraction

import numpy as np

from .core import InputError, MatrixSet, SolverConfig, make_matrix_set


class ParseError(InputError):
    def __init__(self, message, line=None, column=None):
        self.line, self.column = line, column
        where = f" at line {line}, column {column}" if line is not None else ""
        super().__init__(f"{message}{where}")


class NonQuadraticTerm(InputError):
    pass


class UnknownVariable(InputError):
    pass


_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<number>\d+\.\d*(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?|\d+(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>\*\*|[-+*^()−])
""", re.VERBOSE)

# polynomial: {sorted tuple of variable names: Fraction}
Poly = dict


def tokenize(text: str, line: int = 1):
    pos, out = 0, []
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, pos + 1)
        kind = m.lastgroup
        if kind != "ws":
            value = m.group()
            if value == "−":
                value = "-"
            elif value == "**":
                value = "^"
            out.append((kind, value, pos + 1))
        pos = m.end()
    out.append(("end", "", len(text) + 1))
    return out


def _mul(p: Poly, q: Poly) -> Poly:
    out: Poly = {}
    for a, ca in p.items():
        for b, cb in q.items():
            key = tuple(sorted(a + b))
            out[key] = out.get(key, 0) + ca * cb
    return {k: v for k, v in out.items() if v != 0}


def _add(p: Poly, q: Poly, sign=1) -> Poly:
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, 0) + sign * v
    return {k: v for k, v in out.items() if v != 0}


class _Parser:
    def __init__(self, text, line):
        self.tokens = tokenize(text, line)
        self.i = 0
        self.line = line

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def error(self, msg, tok=None):
        tok = tok or self.peek()
        return ParseError(msg, self.line, tok[2])

    def parse(self) -> Poly:
        if self.peek()[0] == "end":
            raise self.error("empty expression")
        p = self.expr()
        if self.peek()[0] != "end":
            raise self.error(f"unexpected token {self.peek()[1]!r}")
        return p

    def expr(self):
        p = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            sign = 1 if self.take()[1] == "+" else -1
            p = _add(p, self.term(), sign)
        return p

    def term(self):
        p = self.unary()
        while self.peek()[1] == "*" and self.peek()[0] == "op":
            self.take()
            p = _mul(p, self.unary())
        return p

    def unary(self):
        tok = self.peek()
        if tok[0] == "op" and tok[1] in ("+", "-"):
            self.take()
            p = self.unary()
            return p if tok[1] == "+" else {k: -v for k, v in p.items()}
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^":
            self.take()
            tok = self.take()
            if tok[0] != "number" or not tok[1].isdigit():
                raise self.error("exponent must be a non-negative integer", tok)
            result: Poly = {(): Fraction(1)}
            for _ in range(int(tok[1])):
                result = _mul(result, base)
            return result
        return base

    def atom(self):
        tok = self.take()
        if tok[0] == "number":
            return {(): Fraction(tok[1])}
        if tok[0] == "name":
            return {(tok[1],): Fraction(1)}
        if tok[1] == "(":
            p = self.expr()
            if self.take()[1] != ")":
                raise self.error("expected ')'", self.tokens[self.i - 1])
            return p
        raise self.error(f"unexpected token {tok[1]!r}" if tok[1] else "unexpected end of input", tok)


def parse_polynomial(text: str, line: int = 1) -> Poly:
    """Parse one expression into ``{monomial: Fraction}``."""
    return _Parser(text, line).parse()


def _natural_key(name):
    m = re.fullmatch(r"([A-Za-z_]+)(\d+)", name)
    return (m.group(1), int(m.group(2))) if m else (name, -1)


def _default_variables(names):
    """x1..xn where n is the largest index used; other names are unknown."""
    idx = []
    for name in names:
        m = re.fullmatch(r"x(\d+)", name)
        if m is None or int(m.group(1)) < 1:
            raise UnknownVariable(f"unknown variable {name!r}; pass variables= to use other names")
        idx.append(int(m.group(1)))
    n = max(idx, default=0)
    return [f"x{k}" for k in range(1, n + 1)]


def form_to_matrix(poly: Poly, variables) -> np.ndarray:
    """Exact symmetric matrix (of Fractions, as object array) of a quadratic form."""
    pos = {v: k for k, v in enumerate(variables)}
    n = len(variables)
    A = np.full((n, n), Fraction(0), dtype=object)
    for mono, c in poly.items():
        if len(mono) != 2:
            raise NonQuadraticTerm(f"monomial {'*'.join(mono) or '1'} has degree {len(mono)}, expected 2")
        for v in mono:
            if v not in pos:
                raise UnknownVariable(f"unknown variable {v!r}")
        a, b = pos[mono[0]], pos[mono[1]]
        if a == b:
            A[a, a] += c
        else:
            A[a, b] += c / 2
            A[b, a] += c / 2
    return A


def parse_quadratic_forms(text: str, variables=None, cfg: SolverConfig | None = None) -> MatrixSet:
    """One quadratic form per non-blank line (``#`` starts a comment)."""
    polys = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0]
        if line.strip():
            polys.append(parse_polynomial(line, lineno))
    if not polys:
        raise ParseError("no quadratic forms found")
    names = sorted({v for p in polys for mono in p for v in mono}, key=_natural_key)
    if variables is None:
        variables = _default_variables(names)
    else:
        variables = list(variables)
        unknown = [v for v in names if v not in variables]
        if unknown:
            raise UnknownVariable(f"unknown variable {unknown[0]!r}")
    if not variables:
        raise NonQuadraticTerm("forms contain no variables")
    mats = [form_to_matrix(p, variables).astype(float) for p in polys]
    return make_matrix_set(mats, "symmetric", "real", cfg)


def _fmt_coef(c: float) -> str:
    return repr(float(c)) if c != int(c) else str(int(c))


def format_quadratic_form(A, variables=None) -> str:
    """Inverse of parsing: the polynomial x^T A x as text."""
    A = np.asarray(A, dtype=float)
    n = A.shape[0]
    variables = variables or [f"x{k}" for k in range(1, n + 1)]
    terms = []
    for a in range(n):
        for b in range(a, n):
            c = A[a, a] if a == b else 2 * A[a, b]
            if c == 0:
                continue
            mono = f"{variables[a]}^2" if a == b else f"{variables[a]}*{variables[b]}"
            sign = "-" if c < 0 else "+"
            coef = "" if abs(c) == 1 else f"{_fmt_coef(abs(c))}*"
            terms.append((sign, coef + mono))
    if not terms:
        return f"0*{variables[0]}^2"
    first_sign, first = terms[0]
    text = ("-" if first_sign == "-" else "") + first
    for sign, body in terms[1:]:
        text += f" {sign} {body}"
    return text
