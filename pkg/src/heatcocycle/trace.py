"""Contraction against the formal heat element and the traces built on it.

For a monomial derivative block the contraction is

    <d_x^alpha d_xi^beta exp(eps Delta)> = eps^-n [d_x^alpha d_xi^beta exp(-x.xi/eps)]_{x = xi = 0}
                                          = [alpha == beta] prod_i (-1)^alpha_i alpha_i! eps^(-|alpha| - n).

No (2 pi i)^n normalization is applied.
"""
from __future__ import annotations

from functools import lru_cache
from math import factorial

from .endo import EMPTY, full_word
from .errors import DomainError, TruncationError
from .exactnum import ONE, ZERO, EpsSeries, ExactScalar, Q
from .formal import FBElem
from .opalg import PDOp
from .phfun import sphere_monomial, torus_volume


@lru_cache(maxsize=None)
def block_contraction(alpha: tuple, beta: tuple):
    """(coefficient, eps exponent) of <d^alpha d^beta exp(eps Delta)>, or None when it vanishes."""
    if alpha != beta:
        return None
    c = 1
    for a in alpha:
        c *= (-1) ** a * factorial(a)
    return Q(c), -sum(alpha) - len(alpha)


def kernel_contraction(alpha: tuple, beta: tuple):
    """Independent evaluation of eps^-n d^alpha_x d^beta_xi exp(-x.xi/eps) at the origin.

    Expands the exponential as a polynomial in (x, xi) with coefficients in
    eps^-1, keeping only the total degree that can survive differentiation.
    Returns {eps exponent: rational}.
    """
    n = len(alpha)
    # exp(-x.xi/eps) = prod_i sum_k (-x_i xi_i / eps)^k / k!
    # the monomial x^alpha xi^beta appears only if alpha == beta, with k_i = alpha_i
    poly = {((0,) * n, (0,) * n, 0): ONE}
    for i in range(n):
        nxt: dict = {}
        for (xa, xb, e), c in poly.items():
            for k in range(0, max(alpha[i], beta[i]) + 1):
                na = list(xa)
                nb = list(xb)
                na[i] += k
                nb[i] += k
                key = (tuple(na), tuple(nb), e - k)
                nxt[key] = nxt.get(key, ZERO) + c * Q((-1) ** k, factorial(k))
        poly = nxt
    out: dict = {}
    for (xa, xb, e), c in poly.items():
        if xa == alpha and xb == beta:
            w = c
            for a, b in zip(alpha, beta):
                w *= factorial(a) * factorial(b)
            out[e - n] = out.get(e - n, ZERO) + w
    return {k: v for k, v in out.items() if v}


def contract(D: PDOp) -> EpsSeries:
    """<D exp(eps Delta)> as an eps-series of derivative-free operators (function times word)."""
    n = D.n
    z = (0,) * n
    out: dict = {}
    for (m, w, a, b), c in D.terms.items():
        r = block_contraction(a, b)
        if r is None:
            continue
        cc, e = r
        key = (m, w, z, z)
        bucket = out.setdefault(e, {})
        bucket[key] = bucket.get(key, ZERO) + c * cc
    terms = {e: PDOp(n, t) for e, t in out.items()}
    return EpsSeries(terms, -n, zero=PDOp.zero(n))


def contract_series(payload: dict, n: int) -> dict:
    """Contract every coefficient of {eps power: PDOp}; returns {eps power: PDOp}."""
    out: dict = {}
    for k, D in payload.items():
        for e, v in contract(D).terms.items():
            key = k + e
            out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if v}


# ----------------------------------------------------------- audit

def certified_order(n: int, cert: int, n_trunc: int) -> int:
    """Highest eps power of the trace that a payload truncated at n_trunc determines exactly.

    A payload term eps^k D_k with bimodule_order(D_k) <= k + N contributes to
    eps^j only if k <= 4n + N + 2j.
    """
    return (n_trunc - 4 * n - cert) // 2


def truncation_audit(n: int, cert: int | None, n_trunc: int, want: int = 0) -> dict:
    if cert is None:
        return {"certificate": None, "n_trunc": n_trunc, "certified_up_to": None, "ok": True}
    top = certified_order(n, cert, n_trunc)
    return {"certificate": cert, "n_trunc": n_trunc, "needed": 4 * n + cert + 2 * want,
            "certified_up_to": top, "ok": top >= want}


def require_audit(n: int, cert: int | None, n_trunc: int, want: int = 0) -> int:
    audit = truncation_audit(n, cert, n_trunc, want)
    if not audit["ok"]:
        raise TruncationError(
            f"payload truncated at eps^{n_trunc} with certificate N={cert} only certifies the trace up to "
            f"eps^{audit['certified_up_to']}; need n_trunc >= {audit['needed']}")
    return audit["certified_up_to"] if audit["certified_up_to"] is not None else n_trunc


# ----------------------------------------------------------- traces

def _scalar_trace(payload: dict, n: int, word) -> dict:
    """sum_k eps^k (integral of the degree -n part of the chosen word coefficient of <D_k exp(eps Delta)>)."""
    zero_trig = (0,) * n
    out: dict = {}
    for k, D in payload.items():
        for (m, w, a, b), c in D.terms.items():
            if w != word or a != b:
                continue
            t, beta, mm = m
            if t != zero_trig or sum(beta) - mm != -n:
                continue
            v = sphere_monomial(beta)
            if not v:
                continue
            cc, e = block_contraction(a, b)
            key = k + e
            out[key] = out.get(key, ExactScalar()) + v * (c * cc)
    vol = torus_volume(n)
    return {k: v * vol for k, v in out.items() if v}


def _check_marker(X: FBElem):
    if X.marker != 1:
        raise DomainError(f"trace needs the heat marker exp(eps*Delta), got exp({X.marker}*eps*Delta)")


def trace_F(X: FBElem) -> EpsSeries:
    """The F-valued trace sum_k eps^k (integral of <D_k exp(eps Delta)>) for scalar (word-free) payloads."""
    _check_marker(X)
    for D in X.payload.values():
        if any(w != EMPTY for (_, w, _, _) in D.terms):
            raise DomainError("payload has exterior-algebra content; use supertrace")
    top = (X.n_trunc - 4 * X.n - X.cert) // 2 if X.cert is not None else X.n_trunc
    return EpsSeries(_scalar_trace(X.payload, X.n, EMPTY), top, zero=ExactScalar())


def supertrace_series(X: FBElem) -> EpsSeries:
    """STr_F: apply str_Lambda to each word, then the F-valued trace."""
    _check_marker(X)
    top = (X.n_trunc - 4 * X.n - X.cert) // 2 if X.cert is not None else X.n_trunc
    return EpsSeries(_scalar_trace(X.payload, X.n, full_word(X.n)), top, zero=ExactScalar())


def supertrace(X: FBElem) -> ExactScalar:
    """Coefficient of eps^0 in STr_F(X); raises TruncationError if eps^0 is not certified."""
    _check_marker(X)
    require_audit(X.n, X.cert, X.n_trunc, want=0)
    return supertrace_series(X).coefficient(0)


def trace(X: FBElem) -> ExactScalar:
    """Coefficient of eps^0 in Tr_F(X)."""
    _check_marker(X)
    require_audit(X.n, X.cert, X.n_trunc, want=0)
    return trace_F(X).coefficient(0)
