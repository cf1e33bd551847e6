"""Random and fixed inputs shared by the verification suites and the tests."""
from __future__ import annotations

import random

from .endo import EndS
from .exactnum import Q
from .formal import FBElem
from .geometry import ConnectionData
from .jlo import sminus, splus
from .opalg import PDOp
from .phfun import PhFun, random_trig


def subsets(n: int) -> list:
    out = [()]
    for i in range(n):
        out += [s + (i,) for s in out]
    return sorted(out, key=lambda s: (len(s), s))


def averaged_function(rng: random.Random, n: int, degree: int) -> PhFun:
    """A degree-d function whose fiber average is usually nonzero: xi^(even) q^m (c + trig)."""
    evens = [b for b in _small_betas(n) if all(x % 2 == 0 for x in b)]
    mixed = _small_betas(n)
    beta = rng.choice(evens) if rng.random() < 0.7 else rng.choice(mixed)
    m = sum(beta) - degree
    base = PhFun.monomial(n, (0,) * n, beta, m, Q(rng.choice([1, 2, 3, -1, -2]), rng.choice([1, 2])))
    while True:
        f = base * (PhFun.const(n, rng.randint(1, 2)) + random_trig(rng, n, max_freq=1, terms=1))
        if f:
            return f


def _small_betas(n: int) -> list:
    if n == 1:
        return [(0,), (1,), (2,)]
    if n == 2:
        return [(0, 0), (1, 0), (0, 1), (2, 0), (0, 2), (1, 1), (2, 2)]
    return [(0, 0, 0), (2, 0, 0), (0, 2, 0), (0, 0, 2), (1, 1, 0), (1, 0, 1)]


def ordered_term(rng: random.Random, n: int, order: int, words: bool = True,
                 max_dx: int = 1, max_dxi: int = 2) -> PDOp:
    """A single term f * word * d_x^alpha d_xi^beta of exactly the given symbol order."""
    subs = subsets(n)
    if words:
        full = tuple(range(n))
        mu = full if rng.random() < 0.5 else rng.choice(subs)
        nu = full if rng.random() < 0.5 else rng.choice(subs)
    else:
        mu = nu = ()
    alpha = tuple(rng.randint(0, max_dx) for _ in range(n))
    beta = list(alpha)
    r = rng.random()
    if r < 0.3:
        beta[rng.randrange(n)] += 1
    elif r < 0.5 and any(beta):
        beta[beta.index(max(beta))] -= 1
    beta = tuple(min(b, max_dxi) for b in beta)
    d = order - (sum(alpha) - sum(beta) + len(nu))
    f = averaged_function(rng, n, d)
    return PDOp.function(f) * PDOp.endo(EndS.word(n, mu, nu)) * PDOp.derivative(n, alpha, beta)


def ordered_element(rng: random.Random, n: int, order: int, powers=range(0, 5), terms: int = 2,
                    n_trunc: int | None = None, exact_order: bool = False) -> FBElem:
    """Random sum_k eps^k D_k exp(eps Delta) with every term of symbol order <= order."""
    pay = {}
    for k in powers:
        D = PDOp.zero(n)
        for _ in range(terms):
            o = order if exact_order or rng.random() < 0.7 else order - 1
            D = D + ordered_term(rng, n, o)
        if D:
            pay[k] = D
    probe = FBElem(n, pay, 1, 10 ** 6)
    if n_trunc is None:
        n_trunc = 4 * n + (probe.cert or 0) + 2
    return FBElem(n, pay, 1, max(n_trunc, max(pay, default=0)))


def scalar_operator(rng: random.Random, n: int, terms: int = 3, degrees=(-1, 0, 1), max_dx: int = 1,
                    max_dxi: int = 1) -> PDOp:
    """A word-free operator with small derivative orders."""
    out = PDOp.zero(n)
    for _ in range(terms):
        d = rng.choice(degrees)
        alpha = tuple(rng.randint(0, max_dx) for _ in range(n))
        beta = tuple(rng.randint(0, max_dxi) for _ in range(n))
        out = out + PDOp.function(averaged_function(rng, n, d)) * PDOp.derivative(n, alpha, beta)
    return out


def word_operator(rng: random.Random, n: int, terms: int = 3, degrees=(-2, -1, 0)) -> PDOp:
    out = PDOp.zero(n)
    subs = subsets(n)
    for _ in range(terms):
        d = rng.choice(degrees)
        alpha = tuple(rng.randint(0, 1) for _ in range(n))
        beta = tuple(rng.randint(0, 1) for _ in range(n))
        w = EndS.word(n, rng.choice(subs), rng.choice(subs))
        out = out + PDOp.function(averaged_function(rng, n, d)) * PDOp.endo(w) * PDOp.derivative(n, alpha, beta)
    return out


def degree_zero_function(rng: random.Random, n: int, terms: int = 2) -> PhFun:
    """A random function on the cosphere bundle (homogeneous of degree 0).

    At n = 1 every such function is s_+ f_+(x) + s_- f_-(x), and that is what is drawn.
    """
    if n == 1:
        return (splus(1) * random_trig(rng, 1, max_freq=2, terms=terms)
                + sminus(1) * random_trig(rng, 1, max_freq=2, terms=terms))
    out = PhFun.zero(n)
    q = PhFun.q(n, -1)
    for _ in range(terms):
        t = random_trig(rng, n, max_freq=1, terms=1)
        j = rng.randrange(n)
        k = rng.randrange(n)
        shape = rng.choice(["const", "lin", "quad"])
        if shape == "const":
            g = PhFun.const(n)
        elif shape == "lin":
            g = PhFun.xi(n, j) * q
        else:
            g = PhFun.xi(n, j) * PhFun.xi(n, k) * q * q
        out = out + t * g
    return out


# ----------------------------------------------------------- fixed data

def connection_n1() -> ConnectionData:
    return ConnectionData.from_entries(1, [(0, 0, 0, PhFun.cos(1, 0) + PhFun.sin(1, 0, 2) * Q(1, 2))])


def connection_c1() -> ConnectionData:
    """n = 2, Gamma^1_21 = Gamma^1_12 = cos(x1)."""
    return ConnectionData.from_entries(2, [(0, 1, 0, PhFun.cos(2, 0))])


def connection_c2() -> ConnectionData:
    n = 2
    return ConnectionData.from_entries(n, [
        (0, 1, 0, PhFun.cos(n, 0)),
        (1, 0, 0, PhFun.sin(n, 1)),
        (1, 1, 1, PhFun.cos(n, 0) * PhFun.cos(n, 1)),
    ])


def n1_tuples() -> list:
    """Degree-0 function pairs on the cosphere bundle of the circle, several sign dependent."""
    n = 1
    s, c = PhFun.sin(n, 0), PhFun.cos(n, 0)
    sp, sm = splus(n), sminus(n)
    sgn = PhFun.xi(n, 0) * PhFun.q(n, -1)
    return [
        [sp * s, sp * c],
        [sm * s, sp * c + sm * PhFun.cos(n, 0, 2)],
        [s, c],
        [sgn * c, s + sp * PhFun.sin(n, 0, 2)],
        [sp * (PhFun.const(n) + c), sm * s + sp * c],
        [sm * PhFun.cos(n, 0, 2), sgn * PhFun.sin(n, 0, 2)],
    ]


def n2_p1_tuples() -> list:
    n = 2
    q = PhFun.q(n, -1)
    x1, x2 = PhFun.xi(n, 0) * q, PhFun.xi(n, 1) * q
    s1, c2 = PhFun.sin(n, 0), PhFun.cos(n, 1)
    return [
        [s1 * x1, x2],
        [s1 * x1 * x2, x1 * x1],
        [s1 * x1 + x2, x2 * c2 + x1 * x2],
    ]


def n2_p3_tuples() -> list:
    n = 2
    q = PhFun.q(n, -1)
    x1, x2 = PhFun.xi(n, 0) * q, PhFun.xi(n, 1) * q
    return [
        [PhFun.sin(n, 0), PhFun.cos(n, 0) * x1, x2 * PhFun.sin(n, 1), PhFun.cos(n, 1)],
    ]
