"""Polyhomogeneous functions on the punctured cotangent bundle of the flat torus.

A function is a finite sum of monomials

    c * T(x) * xi^beta * q^(-m),     q = (xi_1^2 + ... + xi_n^2)^(1/2),

where T is a product over coordinates of cos(k x^i) or sin(k x^i).  A
monomial key is the triple ``(trig, beta, m)``:

* ``trig[i] = k >= 0`` encodes cos(k x^i) (so 0 is the constant 1) and
  ``trig[i] = -k < 0`` encodes sin(k x^i);
* ``beta`` is the exponent tuple of xi;
* ``m`` is the (possibly negative) power of 1/q.

Canonical form.  Using q^2 = xi_1^2 + ... + xi_n^2 every monomial is rewritten
so that beta[0] <= 1.  The monomials with beta[0] <= 1 restricted to the unit
sphere are a basis of the polynomial functions there (xi_1^2 is the leading
term of the sphere equation), and a homogeneous function is determined by its
restriction, so this form is unique.
"""
from __future__ import annotations

import math
import random
from functools import lru_cache
from typing import Dict, Iterable, Tuple

from .exactnum import ONE, ZERO, ExactScalar, Q, rational

Mono = Tuple[Tuple[int, ...], Tuple[int, ...], int]

HALF = Q(1, 2)


# ---------------------------------------------------------------- trig part

def _norm1(code_kind: str, k: int):
    """Normalize cos/sin of a signed frequency into (sign, code)."""
    if code_kind == "c":
        return 1, abs(k)
    if k == 0:
        return 0, 0
    return (1, -k) if k > 0 else (-1, k)


@lru_cache(maxsize=None)
def _trig1_mul(a: int, b: int):
    """Product of two one-variable trig codes, as a tuple of (code, coeff)."""
    if a == 0:
        return ((b, ONE),)
    if b == 0:
        return ((a, ONE),)
    ka, kb = abs(a), abs(b)
    out: Dict[int, object] = {}

    def put(kind, k, c):
        s, code = _norm1(kind, k)
        if s:
            out[code] = out.get(code, ZERO) + s * c

    if a > 0 and b > 0:
        put("c", ka - kb, HALF)
        put("c", ka + kb, HALF)
    elif a < 0 and b < 0:
        put("c", ka - kb, HALF)
        put("c", ka + kb, -HALF)
    elif a < 0 < b:
        put("s", ka + kb, HALF)
        put("s", ka - kb, HALF)
    else:
        put("s", ka + kb, HALF)
        put("s", kb - ka, HALF)
    return tuple((code, c) for code, c in sorted(out.items()) if c != 0)


@lru_cache(maxsize=None)
def trig_mul(t1: tuple, t2: tuple):
    """Product of two trig monomials as a tuple of (trig, coeff)."""
    acc = {(): ONE}
    for a, b in zip(t1, t2):
        nxt: dict = {}
        for prefix, c in acc.items():
            for code, c1 in _trig1_mul(a, b):
                key = prefix + (code,)
                nxt[key] = nxt.get(key, ZERO) + c * c1
        acc = {k: v for k, v in nxt.items() if v != 0}
    return tuple(acc.items())


def trig_deriv(t: tuple, i: int):
    """d/dx^i of a trig monomial as (coeff, trig) or None when it vanishes."""
    k = t[i]
    if k == 0:
        return None
    new = list(t)
    if k > 0:
        new[i] = -k
        return (Q(-k), tuple(new))
    new[i] = -k
    return (Q(-k), tuple(new))


def trig_value(t: tuple, x) -> float:
    v = 1.0
    for code, xi in zip(t, x):
        v *= math.cos(code * xi) if code >= 0 else math.sin(-code * xi)
    return v


# ------------------------------------------------------------------ xi part

@lru_cache(maxsize=None)
def xi_reduce(beta: tuple, m: int):
    """Canonical form of xi^beta q^(-m) as a tuple of ((beta, m), coeff)."""
    if beta[0] <= 1:
        return (((beta, m), ONE),)
    n = len(beta)
    if n == 1:
        b = beta[0]
        return ((((b % 2,), m - 2 * (b // 2)), ONE),)
    out: dict = {}
    lowered = (beta[0] - 2,) + beta[1:]
    for key, c in xi_reduce(lowered, m - 2):
        out[key] = out.get(key, ZERO) + c
    for i in range(1, n):
        b2 = list(lowered)
        b2[i] += 2
        for key, c in xi_reduce(tuple(b2), m):
            out[key] = out.get(key, ZERO) - c
    return tuple((k, v) for k, v in out.items() if v != 0)


@lru_cache(maxsize=None)
def mono_mul(a: Mono, b: Mono):
    beta = tuple(x + y for x, y in zip(a[1], b[1]))
    red = xi_reduce(beta, a[2] + b[2])
    out = []
    for trig, ct in trig_mul(a[0], b[0]):
        for (bb, mm), cx in red:
            out.append(((trig, bb, mm), ct * cx))
    return tuple(out)


@lru_cache(maxsize=None)
def mono_dxi(mono: Mono, j: int):
    """d/dxi_j of a monomial, using dq/dxi_j = xi_j / q."""
    trig, beta, m = mono
    out: dict = {}
    if beta[j]:
        b = list(beta)
        b[j] -= 1
        for (bb, mm), c in xi_reduce(tuple(b), m):
            key = (trig, bb, mm)
            out[key] = out.get(key, ZERO) + beta[j] * c
    if m:
        b = list(beta)
        b[j] += 1
        for (bb, mm), c in xi_reduce(tuple(b), m + 2):
            key = (trig, bb, mm)
            out[key] = out.get(key, ZERO) - m * c
    return tuple((k, v) for k, v in out.items() if v != 0)


@lru_cache(maxsize=None)
def mono_dx(mono: Mono, i: int):
    d = trig_deriv(mono[0], i)
    if d is None:
        return ()
    c, t = d
    return (((t, mono[1], mono[2]), c),)


@lru_cache(maxsize=None)
def mono_partial(mono: Mono, alpha: tuple, beta: tuple):
    """d^alpha/dx^alpha d^beta/dxi^beta of a monomial, as a tuple of (mono, coeff)."""
    if not any(alpha) and not any(beta):
        return ((mono, ONE),)
    for i, a in enumerate(alpha):
        if a:
            rest = alpha[:i] + (a - 1,) + alpha[i + 1:]
            inner = mono_partial(mono, rest, beta)
            op = mono_dx
            idx = i
            break
    else:
        for j, b in enumerate(beta):
            if b:
                rest = beta[:j] + (b - 1,) + beta[j + 1:]
                inner = mono_partial(mono, alpha, rest)
                op = mono_dxi
                idx = j
                break
    out: dict = {}
    for mo, c in inner:
        for mo2, c2 in op(mo, idx):
            out[mo2] = out.get(mo2, ZERO) + c * c2
    return tuple((k, v) for k, v in out.items() if v != 0)


def mono_degree(mono: Mono) -> int:
    return sum(mono[1]) - mono[2]


def mono_value(mono: Mono, x, xi) -> float:
    q = math.sqrt(sum(v * v for v in xi))
    v = trig_value(mono[0], x)
    for b, s in zip(mono[1], xi):
        v *= s ** b
    return v * q ** (-mono[2])


# ------------------------------------------------------------ integration

def gamma_half(h: int) -> ExactScalar:
    """Gamma(h/2) for a positive integer h, exactly."""
    if h <= 0:
        raise ValueError("gamma_half needs a positive argument")
    if h % 2 == 0:
        return ExactScalar({0: math.factorial(h // 2 - 1)})
    k = (h - 1) // 2
    return ExactScalar({1: Q(math.factorial(2 * k), 4 ** k * math.factorial(k))})


@lru_cache(maxsize=None)
def sphere_monomial(beta: tuple) -> ExactScalar:
    """Integral of xi^beta over the unit sphere S^{n-1} (for n = 1, the sum over xi = +-1)."""
    if any(b % 2 for b in beta):
        return ExactScalar()
    n = len(beta)
    num = ExactScalar({0: 2})
    for b in beta:
        num = num * gamma_half(b + 1)
    den = gamma_half(sum(beta) + n)
    # den is a single power of pi^(1/2) times a rational
    (j, c), = den.coeffs.items()
    return ExactScalar({k - j: v / c for k, v in num.coeffs.items()})


def torus_volume(n: int) -> ExactScalar:
    return ExactScalar({2 * n: Q(2) ** n})


# ------------------------------------------------------------------ PhFun

class PhFun:
    """A polyhomogeneous function in canonical form."""

    __slots__ = ("n", "terms", "_hash")

    def __init__(self, n: int, terms: dict | None = None, _canonical: bool = False):
        self.n = n
        if _canonical:
            self.terms = {k: v for k, v in (terms or {}).items() if v != 0}
        else:
            out: dict = {}
            for (trig, beta, m), c in (terms or {}).items():
                c = rational(c)
                if c == 0:
                    continue
                for (bb, mm), cx in xi_reduce(tuple(beta), m):
                    key = (tuple(trig), bb, mm)
                    out[key] = out.get(key, ZERO) + c * cx
            self.terms = {k: v for k, v in out.items() if v != 0}
        self._hash = None

    # constructors
    @classmethod
    def const(cls, n: int, c=1) -> "PhFun":
        return cls(n, {((0,) * n, (0,) * n, 0): c})

    @classmethod
    def zero(cls, n: int) -> "PhFun":
        return cls(n, {}, _canonical=True)

    @classmethod
    def xi(cls, n: int, j: int, power: int = 1) -> "PhFun":
        beta = [0] * n
        beta[j] = power
        return cls(n, {((0,) * n, tuple(beta), 0): 1})

    @classmethod
    def q(cls, n: int, power: int = 1) -> "PhFun":
        return cls(n, {((0,) * n, (0,) * n, -power): 1})

    @classmethod
    def cos(cls, n: int, i: int, k: int = 1) -> "PhFun":
        t = [0] * n
        t[i] = abs(k)
        return cls(n, {(tuple(t), (0,) * n, 0): 1})

    @classmethod
    def sin(cls, n: int, i: int, k: int = 1) -> "PhFun":
        if k == 0:
            return cls.zero(n)
        t = [0] * n
        t[i] = -abs(k)
        return cls(n, {(tuple(t), (0,) * n, 0): 1 if k > 0 else -1})

    @classmethod
    def monomial(cls, n: int, trig, beta, m: int, c=1) -> "PhFun":
        return cls(n, {(tuple(trig), tuple(beta), m): c})

    # arithmetic
    def _lift(self, other) -> "PhFun":
        if isinstance(other, PhFun):
            if other.n != self.n:
                raise ValueError("dimension mismatch")
            return other
        return PhFun.const(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return PhFun(self.n, out, _canonical=True)

    __radd__ = __add__

    def __neg__(self):
        return PhFun(self.n, {k: -c for k, c in self.terms.items()}, _canonical=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, PhFun):
            c0 = rational(other)
            return PhFun(self.n, {k: c * c0 for k, c in self.terms.items()}, _canonical=True)
        out: dict = {}
        for k1, c1 in self.terms.items():
            for k2, c2 in other.terms.items():
                c12 = c1 * c2
                for k, c in mono_mul(k1, k2):
                    out[k] = out.get(k, ZERO) + c12 * c
        return PhFun(self.n, out, _canonical=True)

    __rmul__ = __mul__

    def __truediv__(self, other):
        return self * (ONE / rational(other))

    def __pow__(self, k: int):
        out = PhFun.const(self.n)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, PhFun):
            return self.n == other.n and self.terms == other.terms
        try:
            return self == self._lift(other)
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # calculus
    def dx(self, i: int) -> "PhFun":
        out: dict = {}
        for k, c in self.terms.items():
            for k2, c2 in mono_dx(k, i):
                out[k2] = out.get(k2, ZERO) + c * c2
        return PhFun(self.n, out, _canonical=True)

    def dxi(self, j: int) -> "PhFun":
        out: dict = {}
        for k, c in self.terms.items():
            for k2, c2 in mono_dxi(k, j):
                out[k2] = out.get(k2, ZERO) + c * c2
        return PhFun(self.n, out, _canonical=True)

    def partial(self, alpha: tuple, beta: tuple) -> "PhFun":
        out: dict = {}
        for k, c in self.terms.items():
            for k2, c2 in mono_partial(k, tuple(alpha), tuple(beta)):
                out[k2] = out.get(k2, ZERO) + c * c2
        return PhFun(self.n, out, _canonical=True)

    def euler(self) -> "PhFun":
        """Apply the Euler field sum_j xi_j d/dxi_j."""
        out = PhFun.zero(self.n)
        for j in range(self.n):
            out = out + PhFun.xi(self.n, j) * self.dxi(j)
        return out

    # grading
    def degrees(self) -> set:
        return {mono_degree(k) for k in self.terms}

    def homog_component(self, k: int) -> "PhFun":
        return PhFun(self.n, {m: c for m, c in self.terms.items() if mono_degree(m) == k}, _canonical=True)

    def components(self) -> dict:
        out: dict = {}
        for m, c in self.terms.items():
            out.setdefault(mono_degree(m), {})[m] = c
        return {d: PhFun(self.n, t, _canonical=True) for d, t in sorted(out.items())}

    def max_degree(self) -> int:
        return max(mono_degree(m) for m in self.terms)

    def is_x_only(self) -> bool:
        return all(not any(b) and m == 0 for (_, b, m) in self.terms)

    def is_xi_only(self) -> bool:
        return all(not any(t) for (t, _, _) in self.terms)

    # evaluation
    def __call__(self, x, xi) -> float:
        return sum(float(c) * mono_value(k, x, xi) for k, c in self.terms.items())

    def fiber_integral(self) -> Dict[tuple, ExactScalar]:
        """Integral over the unit cosphere of the degree -n part, as a trig polynomial in x.

        Returns a dict trig -> ExactScalar.
        """
        out: dict = {}
        for (t, b, m), c in self.terms.items():
            if sum(b) - m != -self.n:
                continue
            v = sphere_monomial(b)
            if v:
                out[t] = out.get(t, ExactScalar()) + v * c
        return {t: v for t, v in out.items() if v}

    def sphere_integral(self) -> ExactScalar:
        return sphere_integral(self)

    def __repr__(self):
        return f"PhFun({to_text(self)})"


def sphere_integral(f: PhFun) -> ExactScalar:
    """Integral over the cosphere bundle of the degree -n component of f.

    The torus has side 2*pi in every coordinate; the fiber integral uses the
    unit sphere with the orientation making non-negative integrands integrate
    to non-negative values.
    """
    n = f.n
    zero_trig = (0,) * n
    total = ExactScalar()
    for (t, b, m), c in f.terms.items():
        if t != zero_trig or sum(b) - m != -n:
            continue
        total = total + sphere_monomial(b) * c
    return total * torus_volume(n)


def ph_derivative(f: PhFun, var: str, index: int) -> PhFun:
    """Partial derivative by ``x`` or ``xi`` with 0-based coordinate index."""
    if not 0 <= index < f.n:
        raise ValueError(f"coordinate index {index} out of range for n={f.n}")
    if var == "x":
        return f.dx(index)
    if var == "xi":
        return f.dxi(index)
    raise ValueError(f"unknown variable kind {var!r}")


def ph_homog_component(f: PhFun, k: int) -> PhFun:
    return f.homog_component(k)


# ------------------------------------------------------------------ text

def _mono_text(mono: Mono) -> str:
    trig, beta, m = mono
    parts = []
    for i, code in enumerate(trig):
        if code > 0:
            parts.append(f"cos({code}*x{i + 1})" if code != 1 else f"cos(x{i + 1})")
        elif code < 0:
            parts.append(f"sin({-code}*x{i + 1})" if code != -1 else f"sin(x{i + 1})")
    for j, b in enumerate(beta):
        if b:
            parts.append(f"xi{j + 1}" + (f"^{b}" if b != 1 else ""))
    if m:
        parts.append("q" + (f"^{-m}" if m != -1 else ""))
    return "*".join(parts)


def to_text(f: PhFun) -> str:
    """Deterministic text in the expression grammar accepted by the parser."""
    if not f.terms:
        return "0"
    out = []
    for mono in sorted(f.terms, key=lambda k: (mono_degree(k), k)):
        c = f.terms[mono]
        body = _mono_text(mono)
        num, den = int(c.numerator), int(c.denominator)
        coeff = str(abs(num)) + (f"/{den}" if den != 1 else "")
        if body:
            piece = body if coeff == "1" else f"{coeff}*{body}"
        else:
            piece = coeff
        out.append(("- " if num < 0 else "+ ") + piece)
    text = " ".join(out)
    return text[2:] if text.startswith("+ ") else "-" + text[2:]


# ---------------------------------------------------------- random inputs

def random_trig(rng: random.Random, n: int, max_freq: int = 2, terms: int = 2) -> PhFun:
    """Random trig polynomial in x with small integer frequencies."""
    out = PhFun.zero(n)
    for _ in range(terms):
        t = tuple(rng.randint(-max_freq, max_freq) for _ in range(n))
        out = out + PhFun.monomial(n, t, (0,) * n, 0, Q(rng.randint(-3, 3), rng.randint(1, 3)))
    return out


def random_phfun(rng: random.Random, n: int, degrees: Iterable[int] = (-2, -1, 0, 1),
                 terms: int = 3, max_freq: int = 2) -> PhFun:
    """Random polyhomogeneous function with terms of the given degrees."""
    degrees = list(degrees)
    out = PhFun.zero(n)
    for _ in range(terms):
        d = rng.choice(degrees)
        beta = tuple(rng.randint(0, 2) for _ in range(n))
        m = sum(beta) - d
        t = tuple(rng.randint(-max_freq, max_freq) for _ in range(n))
        out = out + PhFun.monomial(n, t, beta, m, Q(rng.randint(-4, 4), rng.randint(1, 3)))
    return out
