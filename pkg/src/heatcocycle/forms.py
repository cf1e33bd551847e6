"""Differential forms on the punctured cotangent bundle and the Todd form.

Generators are dx^1..dx^n (indices 0..n-1) followed by dxi_1..dxi_n
(indices n..2n-1).  A form is a dict {increasing generator tuple: PhFun}.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import permutations
from math import comb, factorial

from .endo import merge_sign
from .exactnum import ONE, Q, rational
from .phfun import PhFun


class Form:
    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {k: v for k, v in (terms or {}).items() if v}

    @classmethod
    def function(cls, f: PhFun) -> "Form":
        return cls(f.n, {(): f})

    @classmethod
    def const(cls, n: int, c=1) -> "Form":
        return cls(n, {(): PhFun.const(n, c)})

    @classmethod
    def dx(cls, n: int, i: int) -> "Form":
        return cls(n, {(i,): PhFun.const(n)})

    @classmethod
    def dxi(cls, n: int, j: int) -> "Form":
        return cls(n, {(n + j,): PhFun.const(n)})

    def __add__(self, other: "Form") -> "Form":
        out = dict(self.terms)
        for k, v in other.terms.items():
            out[k] = out[k] + v if k in out else v
        return Form(self.n, out)

    def __neg__(self):
        return Form(self.n, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        """Wedge product (or scaling by a function or number)."""
        if isinstance(other, Form):
            return wedge(self, other)
        if isinstance(other, PhFun):
            return Form(self.n, {k: v * other for k, v in self.terms.items()})
        return Form(self.n, {k: v * other for k, v in self.terms.items()})

    __rmul__ = __mul__

    def __eq__(self, other):
        return isinstance(other, Form) and self.n == other.n and self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def degree_part(self, d: int) -> "Form":
        return Form(self.n, {k: v for k, v in self.terms.items() if len(k) == d})

    def degrees(self) -> set:
        return {len(k) for k in self.terms}

    def coefficient(self, gens: tuple) -> PhFun:
        return self.terms.get(tuple(gens), PhFun.zero(self.n))

    def top_coefficient(self) -> PhFun:
        """Coefficient of dx^1..dx^n dxi_1..dxi_n."""
        return self.coefficient(tuple(range(2 * self.n)))

    def d(self) -> "Form":
        return exterior_derivative(self)

    def __repr__(self):
        from .phfun import to_text

        names = [f"dx{i + 1}" for i in range(self.n)] + [f"dxi{j + 1}" for j in range(self.n)]
        parts = [f"({to_text(v)})" + "".join("*" + names[g] for g in k) for k, v in sorted(self.terms.items())]
        return "Form(" + (" + ".join(parts) or "0") + ")"


def wedge(a: Form, b: Form) -> Form:
    out: dict = {}
    for k1, f1 in a.terms.items():
        for k2, f2 in b.terms.items():
            s, k = merge_sign(k1, k2)
            if not s:
                continue
            v = f1 * f2
            if s < 0:
                v = -v
            out[k] = out[k] + v if k in out else v
    return Form(a.n, out)


def exterior_derivative(a: Form) -> Form:
    n = a.n
    out = Form(n)
    for k, f in a.terms.items():
        for g in range(2 * n):
            df = f.dx(g) if g < n else f.dxi(g - n)
            if df:
                out = out + wedge(Form(n, {(g,): df}), Form(n, {k: PhFun.const(n)}))
    return out


def d_function(f: PhFun) -> Form:
    return exterior_derivative(Form.function(f))


# --------------------------------------------------------- Bernoulli series

@lru_cache(maxsize=None)
def bernoulli(m: int):
    """Bernoulli numbers with B_1 = -1/2, the coefficients of x/(e^x - 1) = sum B_k x^k/k!."""
    if m == 0:
        return ONE
    return -sum(comb(m + 1, k) * bernoulli(k) for k in range(m)) / Q(m + 1)


def todd_series(kmax: int) -> list:
    """Taylor coefficients of x/(e^x - 1) up to x^kmax."""
    return [bernoulli(k) / factorial(k) for k in range(kmax + 1)]


def scaled_todd_series(kmax: int, scale=1) -> list:
    """Coefficients of (scale*x)/(e^(scale*x) - 1) in powers of x."""
    s = rational(scale)
    return [c * s ** k for k, c in enumerate(todd_series(kmax))]


# ------------------------------------------------------- matrices of forms

def mat_mul(A, B, mul=wedge):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc = None
            for k in range(n):
                t = mul(A[i][k], B[k][j])
                acc = t if acc is None else acc + t
            row.append(acc)
        out.append(row)
    return out


def matrix_function(Rm, coeffs, one, mul=wedge):
    """sum_k coeffs[k] R^k for a nilpotent matrix R with commuting (even) entries."""
    n = len(Rm)
    ident = [[one if i == j else one * 0 for j in range(n)] for i in range(n)]
    out = [[ident[i][j] * coeffs[0] for j in range(n)] for i in range(n)]
    power = ident
    for k in range(1, len(coeffs)):
        power = mat_mul(power, Rm, mul)
        for i in range(n):
            for j in range(n):
                out[i][j] = out[i][j] + power[i][j] * coeffs[k]
    return out


def determinant(M, mul=wedge):
    """Leibniz expansion; entries must commute (even forms)."""
    n = len(M)
    total = None
    for perm in permutations(range(n)):
        sign = 1
        for i in range(n):
            for j in range(i + 1, n):
                if perm[i] > perm[j]:
                    sign = -sign
        term = M[0][perm[0]]
        for i in range(1, n):
            term = mul(term, M[i][perm[i]])
        term = term * sign
        total = term if total is None else total + term
    return total


def curvature_matrix(R) -> list:
    """R^k_l = 1/2 R^k_ijl dx^i dx^j as an n x n matrix of 2-forms."""
    n = R.n
    half = Q(1, 2)
    out = []
    for k in range(n):
        row = []
        for l in range(n):
            f = Form(n)
            for i in range(n):
                for j in range(n):
                    if i != j:
                        r = R.R[k][i][j][l]
                        if r:
                            f = f + Form.dx(n, i) * Form.dx(n, j) * (r * half)
            row.append(f)
        out.append(row)
    return out


def todd_form(R, n: int | None = None) -> Form:
    """det(R/(exp(R) - 1)) for the curvature 2-form matrix, computed exactly.

    The series is truncated at R^n since 2-forms on the n-dimensional base
    vanish beyond form degree n.
    """
    n = R.n if n is None else n
    Rm = curvature_matrix(R)
    M = matrix_function(Rm, todd_series(n), Form.const(n))
    return determinant(M)


def trace_form(Rm) -> Form:
    out = Rm[0][0]
    for i in range(1, len(Rm)):
        out = out + Rm[i][i]
    return out
