"""Normal-ordered polyhomogeneous differential operators with form-valued coefficients.

A term is ``c * f(x, xi) * psi^mu psibar_nu * d_x^alpha d_xi^beta`` with the
function and the exterior word to the left of all derivatives.  Terms are
stored in a flat dict keyed by ``(mono, word, alpha, beta)`` where ``mono`` is a
canonical phfun monomial.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from math import comb

from .endo import EMPTY, EndS, word_mul
from .errors import OrderError
from .exactnum import ONE, ZERO, rational
from .phfun import PhFun, mono_degree, mono_mul, mono_partial, mono_dx, mono_dxi, to_text


@lru_cache(maxsize=None)
def _leibniz_split(alpha: tuple):
    """All rho <= alpha with multinomial weight prod C(alpha_i, rho_i) and the rest alpha - rho."""
    out = []
    for rho in product(*(range(a + 1) for a in alpha)):
        w = 1
        for a, r in zip(alpha, rho):
            w *= comb(a, r)
        out.append((rho, tuple(a - r for a, r in zip(alpha, rho)), w))
    return tuple(out)


def _addt(a: tuple, b: tuple) -> tuple:
    return tuple(x + y for x, y in zip(a, b))


def _unit(n: int, i: int) -> tuple:
    return tuple(1 if k == i else 0 for k in range(n))


class PDOp:
    """A polyhomogeneous differential operator in normal order."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None, _clean: bool = False):
        self.n = n
        if _clean:
            self.terms = terms
        else:
            self.terms = {k: c for k, c in (terms or {}).items() if c != 0}

    # constructors
    @classmethod
    def zero(cls, n: int) -> "PDOp":
        return cls(n, {}, _clean=True)

    @classmethod
    def identity(cls, n: int) -> "PDOp":
        return cls.scalar(n, 1)

    @classmethod
    def scalar(cls, n: int, c) -> "PDOp":
        z = (0,) * n
        return cls(n, {((z, z, 0), EMPTY, z, z): rational(c)})

    @classmethod
    def function(cls, f: PhFun) -> "PDOp":
        z = (0,) * f.n
        return cls(f.n, {(m, EMPTY, z, z): c for m, c in f.terms.items()})

    @classmethod
    def endo(cls, a: EndS) -> "PDOp":
        z = (0,) * a.n
        return cls(a.n, {((z, z, 0), w, z, z): c for w, c in a.terms.items()})

    @classmethod
    def dx(cls, n: int, i: int, power: int = 1) -> "PDOp":
        z = (0,) * n
        a = tuple(power if k == i else 0 for k in range(n))
        return cls(n, {((z, z, 0), EMPTY, a, z): ONE})

    @classmethod
    def dxi(cls, n: int, j: int, power: int = 1) -> "PDOp":
        z = (0,) * n
        b = tuple(power if k == j else 0 for k in range(n))
        return cls(n, {((z, z, 0), EMPTY, z, b): ONE})

    @classmethod
    def derivative(cls, n: int, alpha, beta, c=1) -> "PDOp":
        z = (0,) * n
        return cls(n, {((z, z, 0), EMPTY, tuple(alpha), tuple(beta)): rational(c)})

    @classmethod
    def psi(cls, n: int, i: int) -> "PDOp":
        return cls.endo(EndS.psi(n, i))

    @classmethod
    def psibar(cls, n: int, j: int) -> "PDOp":
        return cls.endo(EndS.psibar(n, j))

    @classmethod
    def laplacian(cls, n: int) -> "PDOp":
        """Delta = sum_i d/dx^i d/dxi_i."""
        out = cls.zero(n)
        for i in range(n):
            out = out + cls.derivative(n, _unit(n, i), _unit(n, i))
        return out

    # arithmetic
    def _lift(self, other) -> "PDOp":
        if isinstance(other, PDOp):
            if other.n != self.n:
                raise ValueError("dimension mismatch")
            return other
        if isinstance(other, PhFun):
            return PDOp.function(other)
        if isinstance(other, EndS):
            return PDOp.endo(other)
        return PDOp.scalar(self.n, other)

    def __add__(self, other):
        other = self._lift(other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            v = out.get(k, ZERO) + c
            if v:
                out[k] = v
            else:
                out.pop(k, None)
        return PDOp(self.n, out, _clean=True)

    __radd__ = __add__

    def __neg__(self):
        return PDOp(self.n, {k: -c for k, c in self.terms.items()}, _clean=True)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return self._lift(other) - self

    def scale(self, c) -> "PDOp":
        c = rational(c)
        if not c:
            return PDOp.zero(self.n)
        return PDOp(self.n, {k: v * c for k, v in self.terms.items()}, _clean=True)

    def __mul__(self, other):
        if isinstance(other, (PDOp, PhFun, EndS)):
            return op_compose(self, self._lift(other))
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, (PhFun, EndS)):
            return op_compose(self._lift(other), self)
        return self.scale(other)

    def __eq__(self, other):
        if isinstance(other, PDOp):
            return self.n == other.n and self.terms == other.terms
        return NotImplemented

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def __len__(self):
        return len(self.terms)

    def __repr__(self):
        return f"PDOp({op_text(self)})"

    # structure
    def max_deriv(self) -> int:
        return max((sum(a) + sum(b) for (_, _, a, b) in self.terms), default=0)

    def function_part(self) -> PhFun:
        """Coefficient of the identity word with no derivatives."""
        z = (0,) * self.n
        return PhFun(self.n, {m: c for (m, w, a, b), c in self.terms.items()
                              if w == EMPTY and a == z and b == z}, _canonical=True)

    def group_by_derivative(self) -> dict:
        """(word, alpha, beta) -> PhFun coefficient."""
        out: dict = {}
        for (m, w, a, b), c in self.terms.items():
            out.setdefault((w, a, b), {})[m] = c
        return {k: PhFun(self.n, v, _canonical=True) for k, v in out.items()}

    def map_coefficients(self, fn) -> "PDOp":
        """Apply a linear map PhFun -> PhFun to every coefficient."""
        out: dict = {}
        for (w, a, b), f in self.group_by_derivative().items():
            for m, c in fn(f).terms.items():
                key = (m, w, a, b)
                out[key] = out.get(key, ZERO) + c
        return PDOp(self.n, out)

    def select(self, pred) -> "PDOp":
        return PDOp(self.n, {k: c for k, c in self.terms.items() if pred(k)}, _clean=True)


# ------------------------------------------------------------- composition

def op_compose(A: PDOp, B: PDOp, min_order: int | None = None) -> PDOp:
    """Normal-ordered product A*B via the Leibniz rule.

    With ``min_order`` only product terms of bimodule order >= min_order are
    kept.  The bimodule order of a Leibniz term is exactly
    order(a) + order(b) - |sigma| - 3|rho| when rho x-derivatives and sigma
    xi-derivatives of b are taken, so discarded terms are never generated.
    """
    if A.n != B.n:
        raise ValueError("dimension mismatch")
    out: dict = {}
    get = out.get
    if min_order is None:
        b_terms = [(k, c, 0) for k, c in B.terms.items()]
        a_terms = [(k, c, 0) for k, c in A.terms.items()]
        floor = None
    else:
        b_terms = sorted(((k, c, term_bimodule_order(k)) for k, c in B.terms.items()), key=lambda t: -t[2])
        a_terms = [(k, c, term_bimodule_order(k)) for k, c in A.terms.items()]
        floor = min_order
    for (f, w1, a1, b1), c1, o1 in a_terms:
        splits_a = _leibniz_split(a1)
        splits_b = _leibniz_split(b1)
        for (g, w2, a2, b2), c2, o2 in b_terms:
            if floor is not None:
                room = o1 + o2 - floor
                if room < 0:
                    break
            words = word_mul(w1, w2)
            if not words:
                continue
            c12 = c1 * c2
            for rho, ra, wa in splits_a:
                if floor is not None and 3 * sum(rho) > room:
                    continue
                na = _addt(ra, a2)
                for sig, rb, wb in splits_b:
                    if floor is not None and 3 * sum(rho) + sum(sig) > room:
                        continue
                    dg = mono_partial(g, rho, sig)
                    if not dg:
                        continue
                    nb = _addt(rb, b2)
                    w = c12 * (wa * wb)
                    for g2, cg in dg:
                        for fg, cf in mono_mul(f, g2):
                            cc = w * cg * cf
                            for word, cw in words:
                                key = (fg, word, na, nb)
                                out[key] = get(key, ZERO) + cc * cw
    return PDOp(A.n, {k: v for k, v in out.items() if v}, _clean=True)


def op_commutator(A: PDOp, B: PDOp) -> PDOp:
    return op_compose(A, B) - op_compose(B, A)


def op_supercommutator(A: PDOp, B: PDOp) -> PDOp:
    """[A, B} using the psi-word parity (both operands must have definite parity)."""
    pa, pb = op_parity(A), op_parity(B)
    if pa is None or pb is None:
        raise ValueError("supercommutator needs operators of definite parity")
    sign = -1 if pa * pb % 2 == 0 else 1
    return op_compose(A, B) + op_compose(B, A).scale(sign)


def op_anticommutator(A: PDOp, B: PDOp) -> PDOp:
    return op_compose(A, B) + op_compose(B, A)


def op_parity(A: PDOp) -> int | None:
    ps = {(len(w[0]) + len(w[1])) % 2 for (_, w, _, _) in A.terms}
    if not ps:
        return 0
    return ps.pop() if len(ps) == 1 else None


def op_power(A: PDOp, k: int) -> PDOp:
    out = PDOp.identity(A.n)
    for _ in range(k):
        out = op_compose(out, A)
    return out


# ------------------------------------------------------------------ orders

def _require_nonzero(A: PDOp):
    if not A.terms:
        raise OrderError("the zero operator has no order")


def term_bimodule_order(key) -> int:
    m, w, a, b = key
    return 2 * mono_degree(m) + 3 * sum(a) - sum(b)


def term_symbol_order(key) -> int:
    m, w, a, b = key
    return mono_degree(m) + sum(a) - sum(b) + len(w[1])


def term_euler_degree(key) -> int:
    m, w, a, b = key
    return mono_degree(m) - sum(b)


def bimodule_order(A: PDOp) -> int:
    """max over terms of 2*deg(f) + 3|alpha| - |beta|; psi words contribute 0."""
    _require_nonzero(A)
    return max(term_bimodule_order(k) for k in A.terms)


def symbol_order(A: PDOp) -> int:
    """The filtration order deg(f) + |alpha| - |beta| + |nu| (psibar count), maximized over terms."""
    _require_nonzero(A)
    return max(term_symbol_order(k) for k in A.terms)


def euler_degree_decompose(A: PDOp) -> dict:
    """Split into ad_E eigencomponents; degree of a term is deg(f) - |beta|."""
    out: dict = {}
    for k, c in A.terms.items():
        out.setdefault(term_euler_degree(k), {})[k] = c
    return {d: PDOp(A.n, t, _clean=True) for d, t in sorted(out.items())}


def symbol_order_decompose(A: PDOp) -> dict:
    out: dict = {}
    for k, c in A.terms.items():
        out.setdefault(term_symbol_order(k), {})[k] = c
    return {d: PDOp(A.n, t, _clean=True) for d, t in sorted(out.items())}


# ----------------------------------------------------------- ad Delta, delta

@lru_cache(maxsize=None)
def _ad_laplacian_term(key):
    """[Delta, f A d^alpha d^beta] as a tuple of (key, coeff)."""
    m, w, a, b = key
    n = len(a)
    out: dict = {}
    for i in range(n):
        e = _unit(n, i)
        for m1, c1 in mono_dx(m, i):
            for m2, c2 in mono_dxi(m1, i):
                k2 = (m2, w, a, b)
                out[k2] = out.get(k2, ZERO) + c1 * c2
            k2 = (m1, w, a, _addt(b, e))
            out[k2] = out.get(k2, ZERO) + c1
        for m1, c1 in mono_dxi(m, i):
            k2 = (m1, w, _addt(a, e), b)
            out[k2] = out.get(k2, ZERO) + c1
    return tuple((k, v) for k, v in out.items() if v)


def ad_laplacian(T: PDOp) -> PDOp:
    """[Delta, T] with Delta = sum_i d_x^i d_xi_i."""
    out: dict = {}
    for key, c in T.terms.items():
        for k2, c2 in _ad_laplacian_term(key):
            out[k2] = out.get(k2, ZERO) + c * c2
    return PDOp(T.n, {k: v for k, v in out.items() if v}, _clean=True)


@lru_cache(maxsize=None)
def _delta_of_dxi_power(beta: tuple) -> PDOp:
    """delta(d_xi^beta) where delta(d_xi_j) = -xi_j q^-2 and delta kills functions, words and d_x."""
    n = len(beta)
    z = (0,) * n
    if not any(beta):
        return PDOp.zero(n)
    j = next(i for i, b in enumerate(beta) if b)
    e = _unit(n, j)
    rest = tuple(b - x for b, x in zip(beta, e))
    dj = PDOp.derivative(n, z, e)
    coeff = PDOp.function(PhFun.monomial(n, z, e, 2, -1))
    # d^beta = d_j d^rest, so delta(d^beta) = delta(d_j) d^rest + d_j delta(d^rest)
    return op_compose(coeff, PDOp.derivative(n, z, rest)) + op_compose(dj, _delta_of_dxi_power(rest))


def delta_derivation(A: PDOp) -> PDOp:
    """The derivation ad(log q) for the Euclidean fiber norm q."""
    out: dict = {}
    for (m, w, a, b), c in A.terms.items():
        if not any(b):
            continue
        for (m2, w2, a2, b2), c2 in _delta_of_dxi_power(b).terms.items():
            # delta(d^beta) has xi-only coefficients, which commute with d_x^alpha
            for fm, cf in mono_mul(m, m2):
                key = (fm, w, _addt(a, a2), b2)
                out[key] = out.get(key, ZERO) + c * c2 * cf
    return PDOp(A.n, {k: v for k, v in out.items() if v}, _clean=True)


# -------------------------------------------------------- action on sections

def apply_to_section(A: PDOp, section: dict) -> dict:
    """Apply A to a form-valued section {form index tuple: PhFun}."""
    from .endo import word_on_form

    out: dict = {}
    for (m, w, a, b), c in A.terms.items():
        for form, f in section.items():
            s, g = word_on_form(w, form)
            if not s:
                continue
            val = f.partial(a, b) * PhFun(A.n, {m: c * s}, _canonical=True)
            out[g] = out.get(g, PhFun.zero(A.n)) + val
    return {k: v for k, v in out.items() if v}


# ------------------------------------------------------------------- text

def op_text(A: PDOp) -> str:
    if not A.terms:
        return "0"
    from .endo import word_text

    groups = A.group_by_derivative()
    parts = []
    for (w, a, b) in sorted(groups, key=lambda k: (sum(k[1]) + sum(k[2]), k)):
        f = groups[(w, a, b)]
        pieces = []
        wt = word_text(w)
        if wt:
            pieces.append(wt)
        for i, e in enumerate(a):
            if e:
                pieces.append(f"dx{i + 1}" + (f"^{e}" if e > 1 else ""))
        for j, e in enumerate(b):
            if e:
                pieces.append(f"dxi{j + 1}" + (f"^{e}" if e > 1 else ""))
        ftext = to_text(f)
        if pieces:
            parts.append(f"({ftext})*" + "*".join(pieces))
        else:
            parts.append(f"({ftext})")
    return " + ".join(parts)
