"""Endomorphisms of the exterior algebra generated by psi^i and psibar_j.

``psi^i`` is exterior multiplication by dx^i and ``psibar_j`` is contraction
with d/dx^j, so that

    psi^i psi^j = -psi^j psi^i,  psibar_i psibar_j = -psibar_j psibar_i,
    psibar_j psi^i + psi^i psibar_j = delta^i_j.

A word is stored as ``(mu, nu)`` meaning psi^mu psibar_nu with both index
tuples strictly increasing and 0-based.  Every product is rewritten into this
normal order.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

import numpy as np

from .exactnum import ZERO, rational

Word = tuple  # (mu, nu)
EMPTY = ((), ())


def merge_sign(a: tuple, b: tuple):
    """Sign and sorted union for the product of two increasing anticommuting words.

    Returns (0, None) when the words share an index.
    """
    if set(a) & set(b):
        return 0, None
    inversions = sum(1 for x in a for y in b if x > y)
    return (-1) ** inversions, tuple(sorted(a + b))


@lru_cache(maxsize=None)
def _bar_past_psi(nu: tuple, mu: tuple):
    """Normal order psibar_nu psi^mu, as a tuple of ((mu', nu'), coeff)."""
    if not nu:
        return (((mu, ()), 1),)
    j = nu[-1]
    # psibar_j psi^mu = sum_r (-1)^r [mu_r == j] psi^{mu minus mu_r} + (-1)^k psi^mu psibar_j
    step = []
    for r, i in enumerate(mu):
        if i == j:
            step.append((mu[:r] + mu[r + 1:], (), (-1) ** r))
    step.append((mu, (j,), (-1) ** len(mu)))
    out: dict = {}
    for m2, tail, c in step:
        for (m3, n3), c2 in _bar_past_psi(nu[:-1], m2):
            key = (m3, n3 + tail)
            out[key] = out.get(key, 0) + c * c2
    return tuple((k, v) for k, v in out.items() if v)


@lru_cache(maxsize=None)
def word_mul(w1: Word, w2: Word):
    """Normal-ordered product of two words as a tuple of (word, int coeff)."""
    mu1, nu1 = w1
    mu2, nu2 = w2
    out: dict = {}
    for (mu, nu), c in _bar_past_psi(nu1, mu2):
        s1, left = merge_sign(mu1, mu)
        if not s1:
            continue
        s2, right = merge_sign(nu, nu2)
        if not s2:
            continue
        key = (left, right)
        out[key] = out.get(key, 0) + c * s1 * s2
    return tuple((k, v) for k, v in out.items() if v)


def word_parity(w: Word) -> int:
    return (len(w[0]) + len(w[1])) % 2


def all_words(n: int):
    subsets = [c for r in range(n + 1) for c in combinations(range(n), r)]
    return [(m, v) for m in subsets for v in subsets]


class EndS:
    """Finite linear combination of normal-ordered words with rational coefficients."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {w: rational(c) for w, c in (terms or {}).items() if c != 0}

    @classmethod
    def identity(cls, n: int) -> "EndS":
        return cls(n, {EMPTY: 1})

    @classmethod
    def psi(cls, n: int, i: int) -> "EndS":
        return cls(n, {((i,), ()): 1})

    @classmethod
    def psibar(cls, n: int, j: int) -> "EndS":
        return cls(n, {((), (j,)): 1})

    @classmethod
    def word(cls, n: int, mu, nu, c=1) -> "EndS":
        return cls(n, {(tuple(mu), tuple(nu)): c})

    def __add__(self, other: "EndS") -> "EndS":
        out = dict(self.terms)
        for w, c in other.terms.items():
            out[w] = out.get(w, ZERO) + c
        return EndS(self.n, out)

    def __neg__(self):
        return EndS(self.n, {w: -c for w, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, EndS):
            return endo_compose(self, other)
        c0 = rational(other)
        return EndS(self.n, {w: c * c0 for w, c in self.terms.items()})

    def __rmul__(self, other):
        return self * other

    def __eq__(self, other):
        return isinstance(other, EndS) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash((self.n, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def parity(self) -> int | None:
        """Common parity of all words, or None for a mixed element."""
        ps = {word_parity(w) for w in self.terms}
        return ps.pop() if len(ps) == 1 else (0 if not ps else None)

    def supertrace(self):
        return endo_supertrace(self)

    def matrix(self) -> np.ndarray:
        return endo_matrix(self)

    def __repr__(self):
        return f"EndS({word_text_sum(self)})"


def endo_compose(a: EndS, b: EndS) -> EndS:
    if a.n != b.n:
        raise ValueError("dimension mismatch")
    out: dict = {}
    for w1, c1 in a.terms.items():
        for w2, c2 in b.terms.items():
            for w, c in word_mul(w1, w2):
                out[w] = out.get(w, ZERO) + c1 * c2 * c
    return EndS(a.n, out)


def full_word(n: int) -> Word:
    full = tuple(range(n))
    return (full, full)


def endo_supertrace(a: EndS):
    """Normalized supertrace: 1 on psi^1..psi^n psibar_1..psibar_n, 0 on other normal words.

    Relation to the signed matrix supertrace on forms:
    str_matrix = (-1)^(n(n+1)/2) * endo_supertrace.
    """
    return a.terms.get(full_word(a.n), ZERO)


def matrix_sign(n: int) -> int:
    """The factor relating the matrix supertrace to ``endo_supertrace``."""
    return (-1) ** (n * (n + 1) // 2)


# ------------------------------------------------------ matrix realization

def basis(n: int):
    """Basis dx^I of forms, ordered by degree then lexicographically."""
    return [c for r in range(n + 1) for c in combinations(range(n), r)]


def word_on_form(w: Word, form: tuple):
    """Apply a word to a basis form dx^I; returns (sign, J) or (0, None)."""
    mu, nu = w
    cur = form
    sign = 1
    for j in reversed(nu):
        if j not in cur:
            return 0, None
        pos = cur.index(j)
        sign *= (-1) ** pos
        cur = cur[:pos] + cur[pos + 1:]
    for i in reversed(mu):
        if i in cur:
            return 0, None
        sign *= (-1) ** sum(1 for l in cur if l < i)
        cur = tuple(sorted(cur + (i,)))
    return sign, cur


def endo_matrix(a: EndS) -> np.ndarray:
    """Matrix of ``a`` on the basis ``basis(n)`` (object dtype, exact rationals)."""
    b = basis(a.n)
    index = {f: k for k, f in enumerate(b)}
    m = np.full((len(b), len(b)), ZERO, dtype=object)
    for w, c in a.terms.items():
        for col, f in enumerate(b):
            s, g = word_on_form(w, f)
            if s:
                m[index[g], col] += c * s
    return m


def matrix_supertrace(m: np.ndarray, n: int):
    b = basis(n)
    return sum(((-1) ** len(f)) * m[k, k] for k, f in enumerate(b))


# ------------------------------------------------------------------- text

def word_text(w: Word) -> str:
    mu, nu = w
    parts = [f"psi{i + 1}" for i in mu] + [f"psibar{j + 1}" for j in nu]
    return "*".join(parts)


def word_text_sum(a: EndS) -> str:
    if not a.terms:
        return "0"
    out = []
    for w in sorted(a.terms, key=lambda w: (len(w[0]) + len(w[1]), w)):
        c = a.terms[w]
        body = word_text(w) or "1"
        out.append(f"({c})*{body}")
    return " + ".join(out)
