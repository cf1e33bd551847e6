"""Text grammar for functions and operators.

Functions:  sums and products of rationals, xi1..xin, q, cos(k*xj), sin(k*xj)
with integer exponents written ``^``; negative exponents and division are
allowed only for invertible factors (constants and powers of q).  Example::

    2*sin(x1)*xi1*q^-2 - 1/3*cos(2*x2)

Operators additionally accept dx1..dxn (d/dx), dxi1..dxin (d/dxi), psi1..psin
and psibar1..psibarn; products are operator compositions.

Errors carry the offending position, e.g.::

    ParseError: x1 may only appear inside sin() or cos() at position 4
"""
from __future__ import annotations

import re

from .endo import EndS
from .errors import ParseError
from .exactnum import Q
from .opalg import PDOp, op_compose
from .phfun import PhFun

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z]+\d*)|(\S))")


def _tokenize(text: str) -> list:
    toks = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:  # trailing whitespace
            break
        start = m.start(m.lastindex)
        if m.group(1):
            toks.append(("num", int(m.group(1)), start))
        elif m.group(2):
            toks.append(("name", m.group(2), start))
        else:
            toks.append(("op", m.group(3), start))
        pos = m.end()
    toks.append(("end", None, len(text)))
    return toks


class _Parser:
    def __init__(self, text: str, n: int, operators: bool):
        self.text = text
        self.n = n
        self.operators = operators
        self.toks = _tokenize(text)
        self.i = 0

    # token helpers
    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, pos=None):
        if pos is None:
            pos = self.peek()[2]
        raise ParseError(msg, self.text, pos)

    def expect(self, op):
        t = self.take()
        if t[0] != "op" or t[1] != op:
            self.error(f"expected '{op}'", t[2])
        return t

    # value helpers
    def lift(self, v):
        if self.operators and isinstance(v, PhFun):
            return PDOp.function(v)
        return v

    def const(self, c):
        return self.lift(PhFun.const(self.n, c))

    def mul(self, a, b):
        if self.operators:
            return op_compose(self.lift(a), self.lift(b))
        return a * b

    def inverse(self, v, pos):
        """Inverse of a constant times a power of q."""
        f = v.function_part() if isinstance(v, PDOp) else v
        if isinstance(v, PDOp) and PDOp.function(f) != v:
            self.error("only functions can be inverted", pos)
        if len(f.terms) != 1:
            self.error("only constants and powers of q can be inverted", pos)
        (mono, c), = f.terms.items()
        trig, beta, m = mono
        if any(trig) or any(beta):
            self.error("only constants and powers of q can be inverted", pos)
        return self.lift(PhFun.monomial(self.n, trig, beta, -m, 1 / c))

    # grammar
    def parse(self):
        v = self.expr()
        t = self.peek()
        if t[0] != "end":
            self.error("unexpected input", t[2])
        return v

    def expr(self):
        v = self.term()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] in "+-":
                self.take()
                w = self.term()
                v = v + w if t[1] == "+" else v - w
            else:
                return v

    def term(self):
        v = self.unary()
        while True:
            t = self.peek()
            if t[0] == "op" and t[1] == "*":
                self.take()
                v = self.mul(v, self.unary())
            elif t[0] == "op" and t[1] == "/":
                self.take()
                pos = self.peek()[2]
                v = self.mul(v, self.inverse(self.unary(), pos))
            else:
                return v

    def unary(self):
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            v = self.unary()
            return -v if t[1] == "-" else v
        return self.power()

    def signed_int(self):
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        t = self.take()
        if t[0] != "num":
            self.error("exponent must be an integer", t[2])
        return sign * t[1]

    def power(self):
        pos = self.peek()[2]
        v = self.atom()
        t = self.peek()
        if t[0] == "op" and t[1] == "^":
            self.take()
            k = self.signed_int()
            if k < 0:
                v = self.inverse(v, pos)
                k = -k
            out = self.const(1)
            for _ in range(k):
                out = self.mul(out, v)
            return out
        return v

    def index(self, name, prefix, pos):
        try:
            i = int(name[len(prefix):])
        except ValueError:
            self.error(f"'{prefix}' needs an index", pos)
        if not 1 <= i <= self.n:
            self.error(f"index {i} out of range 1..{self.n}", pos)
        return i - 1

    def trig(self, kind, pos):
        self.expect("(")
        sign = 1
        t = self.peek()
        if t[0] == "op" and t[1] in "+-":
            self.take()
            sign = -1 if t[1] == "-" else 1
        k = 1
        t = self.peek()
        if t[0] == "num":
            self.take()
            k = t[1]
            self.expect("*")
        t = self.take()
        if t[0] != "name" or not re.fullmatch(r"x\d+", t[1]):
            self.error(f"{kind}() takes an argument of the form k*xj with integer k", t[2])
        i = self.index(t[1], "x", t[2])
        self.expect(")")
        k *= sign
        f = PhFun.cos(self.n, i, k) if kind == "cos" else PhFun.sin(self.n, i, k)
        return self.lift(f)

    def atom(self):
        t = self.take()
        kind, val, pos = t
        if kind == "num":
            return self.const(Q(val))
        if kind == "op" and val == "(":
            v = self.expr()
            self.expect(")")
            return v
        if kind != "name":
            self.error(f"unexpected '{val}'" if val else "unexpected end of input", pos)
        n = self.n
        if val in ("sin", "cos"):
            return self.trig(val, pos)
        if val == "q":
            return self.lift(PhFun.q(n))
        if re.fullmatch(r"xi\d+", val):
            return self.lift(PhFun.xi(n, self.index(val, "xi", pos)))
        if re.fullmatch(r"x\d+", val):
            self.error(f"{val} may only appear inside sin() or cos()", pos)
        if self.operators:
            if re.fullmatch(r"dxi\d+", val):
                return PDOp.dxi(n, self.index(val, "dxi", pos))
            if re.fullmatch(r"dx\d+", val):
                return PDOp.dx(n, self.index(val, "dx", pos))
            if re.fullmatch(r"psibar\d+", val):
                return PDOp.endo(EndS.psibar(n, self.index(val, "psibar", pos)))
            if re.fullmatch(r"psi\d+", val):
                return PDOp.endo(EndS.psi(n, self.index(val, "psi", pos)))
        self.error(f"unknown name '{val}'", pos)


def parse_function(text: str, n: int) -> PhFun:
    """Parse a polyhomogeneous function in n variables."""
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}")
    return _Parser(text, n, operators=False).parse()


def parse_operator(text: str, n: int) -> PDOp:
    """Parse a differential operator; juxtaposed factors must be joined with '*'."""
    if not isinstance(text, str):
        raise ParseError(f"expected an expression string, got {type(text).__name__}")
    return _Parser(text, n, operators=True).parse()
