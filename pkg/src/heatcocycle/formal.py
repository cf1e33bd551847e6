"""Formal eps-series of operators times heat markers exp(c*eps*Delta).

An element of the trace bimodule is kept in right-marker normal form

    X = (sum_k eps^k D_k) * exp(c*eps*Delta)

together with an integer certificate N such that bimodule_order(D_k) <= k + N.
Moving a marker to the right past an operator uses

    exp(c*eps*Delta) T = (sum_k (c*eps)^k ad_Delta^k(T) / k!) exp(c*eps*Delta).
"""
from __future__ import annotations

from math import factorial

from .errors import ConfigError, DomainError, MembershipError, OrderError
from .exactnum import ONE, EpsSeries, Q, rational
from .opalg import PDOp, ad_laplacian, bimodule_order, op_compose


# ------------------------------------------------------- simplex integrals

def dirichlet(exponents) -> object:
    """Integral over the standard simplex {s_i >= 0, sum s_i = 1} of prod s_i^a_i.

    With p + 1 variables the value is prod a_i! / (sum a_i + p)!.
    """
    exponents = list(exponents)
    p = len(exponents) - 1
    num = 1
    for a in exponents:
        num *= factorial(a)
    return Q(num, factorial(sum(exponents) + p))


def ordered_weight(ks) -> object:
    """Integral of prod t_i^k_i over 0 <= t_1 <= ... <= t_p <= 1, equal to prod 1/(K_i + i)."""
    w = ONE
    K = 0
    for i, k in enumerate(ks, start=1):
        K += k
        w /= (K + i)
    return w


# --------------------------------------------------------- series helpers

def series_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if v}


def series_mul(a: dict, b: dict, n_trunc: int, composer=op_compose) -> dict:
    """Product of {eps power: PDOp} series truncated above n_trunc."""
    out: dict = {}
    for k1, x in a.items():
        for k2, y in b.items():
            k = k1 + k2
            if k > n_trunc:
                continue
            v = composer(x, y)
            out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if v}


def ad_powers(T: PDOp, kmax: int) -> list:
    """[T, ad T, ad^2 T / 2!, ...] up to kmax, i.e. ad_Delta^k(T)/k!."""
    out = [T]
    cur = T
    for k in range(1, kmax + 1):
        if not cur:
            out.append(cur)
            continue
        cur = ad_laplacian(cur).scale(Q(1, k))
        out.append(cur)
    return out


def conjugate_series(Y: dict, c, n_trunc: int) -> dict:
    """Ad_{exp(c eps Delta)} applied coefficientwise to a series {eps power: PDOp}."""
    c = rational(c)
    if c == 0:
        return dict(Y)
    out: dict = {}
    for e, T in Y.items():
        for k, A in enumerate(ad_powers(T, n_trunc - e)):
            if A:
                v = A.scale(c ** k) if k else A
                key = e + k
                out[key] = out[key] + v if key in out else v
    return {k: v for k, v in out.items() if v}


def ad_exp_conjugate(T: PDOp, s, c=1, n_trunc: int = 4) -> EpsSeries:
    """Ad_{exp(s c eps Delta)}(T) = sum_k (s c)^k eps^k ad_Delta^k(T)/k!, truncated at n_trunc.

    Each coefficient is checked against bimodule_order <= k + bimodule_order(T).
    """
    sc = rational(s) * rational(c)
    base = bimodule_order(T) if T else None
    terms = {}
    dropped = []
    for k, A in enumerate(ad_powers(T, n_trunc + 1)):
        if not A:
            continue
        if k > n_trunc:
            dropped.append((k, "conjugation term above truncation order"))
            continue
        if bimodule_order(A) > k + base:
            raise OrderError(f"ad_Delta^{k} raised the bimodule order beyond {k + base}")
        terms[k] = A.scale(sc ** k) if k else A
    return EpsSeries(terms, n_trunc, dropped, zero=PDOp.zero(T.n))


# ------------------------------------------------------------------- FB

class FBElem:
    """(sum_k eps^k D_k) * exp(c*eps*Delta) with certificate N."""

    __slots__ = ("n", "payload", "marker", "cert", "n_trunc")

    def __init__(self, n: int, payload: dict, marker=0, n_trunc: int = 4, cert: int | None = None):
        self.n = n
        self.n_trunc = n_trunc
        self.marker = rational(marker)
        self.payload = {k: v for k, v in payload.items() if v and k <= n_trunc}
        if any(k < -64 for k in self.payload):
            raise DomainError("singular part too large")
        actual = self.measured_cert()
        if cert is None:
            cert = actual
        elif actual is not None and actual > cert:
            raise MembershipError(f"payload violates the certificate: needs N >= {actual}, got {cert}")
        self.cert = cert

    def measured_cert(self) -> int | None:
        vals = [bimodule_order(D) - k for k, D in self.payload.items()]
        return max(vals) if vals else None

    @classmethod
    def from_op(cls, A: PDOp, n_trunc: int, eps_power: int = 0, marker=0) -> "FBElem":
        return cls(A.n, {eps_power: A} if A else {}, marker, n_trunc)

    @classmethod
    def from_series(cls, n: int, series: dict, n_trunc: int, marker=0) -> "FBElem":
        return cls(n, dict(series), marker, n_trunc)

    @classmethod
    def heat(cls, n: int, c=1, n_trunc: int = 4) -> "FBElem":
        return cls(n, {0: PDOp.identity(n)}, c, n_trunc)

    def as_series(self) -> EpsSeries:
        return EpsSeries(self.payload, self.n_trunc, zero=PDOp.zero(self.n))

    def __mul__(self, other):
        return fb_mul(self, other)

    def __rmul__(self, other):
        if isinstance(other, PDOp):
            return fb_mul(FBElem.from_op(other, self.n_trunc), self)
        return self.scale(other)

    def __add__(self, other: "FBElem") -> "FBElem":
        _check(self, other)
        if self.marker != other.marker:
            raise DomainError("cannot add bimodule elements with different heat markers")
        N = None if self.cert is None else (self.cert if other.cert is None else max(self.cert, other.cert))
        return FBElem(self.n, series_add(self.payload, other.payload), self.marker, self.n_trunc, N)

    def __neg__(self):
        return self.scale(-1)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "FBElem":
        return FBElem(self.n, {k: v.scale(c) for k, v in self.payload.items()}, self.marker, self.n_trunc, self.cert)

    def map_payload(self, fn) -> "FBElem":
        return FBElem(self.n, {k: fn(v) for k, v in self.payload.items()}, self.marker, self.n_trunc)

    def __eq__(self, other):
        return (isinstance(other, FBElem) and self.marker == other.marker
                and self.payload == other.payload and self.n_trunc == other.n_trunc)

    def __repr__(self):
        body = " + ".join(f"eps^{k}*[{v}]" for k, v in sorted(self.payload.items())) or "0"
        return f"FBElem(({body}) * exp({self.marker}*eps*Delta); N={self.cert}, trunc={self.n_trunc})"


def _check(a: FBElem, b: FBElem):
    if a.n != b.n:
        raise ConfigError("dimension mismatch")
    if a.n_trunc != b.n_trunc:
        raise ConfigError(f"mismatched truncation orders {a.n_trunc} and {b.n_trunc}")


def fb_mul(X, Y) -> FBElem:
    """X * Y in right-marker normal form: P_X * Ad_{c_X}(P_Y) * exp((c_X + c_Y) eps Delta)."""
    if isinstance(X, PDOp):
        X = FBElem.from_op(X, Y.n_trunc)
    if isinstance(Y, PDOp):
        Y = FBElem.from_op(Y, X.n_trunc)
    _check(X, Y)
    moved = conjugate_series(Y.payload, X.marker, X.n_trunc)
    payload = series_mul(X.payload, moved, X.n_trunc)
    cert = None
    if X.cert is not None and Y.cert is not None:
        cert = X.cert + Y.cert
    return FBElem(X.n, payload, X.marker + Y.marker, X.n_trunc, cert)


def fb_delta(X: FBElem) -> FBElem:
    """Apply delta = ad(log q) to a bimodule element, including its heat marker.

    delta(exp(c eps Delta)) = int_0^1 Ad_{exp(t c eps Delta)}(c eps delta(Delta)) dt * exp(c eps Delta).
    """
    from .opalg import delta_derivation

    out = {k: delta_derivation(v) for k, v in X.payload.items()}
    out = {k: v for k, v in out.items() if v}
    c = X.marker
    if c:
        dD = delta_derivation(PDOp.laplacian(X.n)).scale(c)
        # int_0^1 Ad_{t c}(dD) dt = sum_k c^k ad^k(dD)/(k+1)!
        inner: dict = {}
        for k, A in enumerate(ad_powers(dD, X.n_trunc - 1)):
            if A:
                inner[k + 1] = A.scale(c ** k * Q(1, k + 1))
        out = series_add(out, series_mul(X.payload, inner, X.n_trunc))
    return FBElem(X.n, out, c, X.n_trunc)


# ------------------------------------------------------------ perturbation

def duhamel_terms(B: dict, n: int, n_trunc: int) -> dict:
    """Expansion of exp(A + B) exp(-A) for A = c*eps*Delta with c kept symbolic.

    ``B`` is {eps power >= 1: PDOp}.  Returns {(eps power, K, p): PDOp} where
    p counts B-factors and K the total number of ad_Delta applications; the
    coefficient of c^K in the expansion is the stored operator.
    """
    if not B:
        return {(0, 0, 0): PDOp.identity(n)}
    if min(B) < 1:
        raise DomainError("perturbation must have positive eps-valuation for the series to converge")
    # ad powers of each B_j: table[j][k] = ad^k(B_j)/k!
    table = {j: ad_powers(Bj, n_trunc - j) for j, Bj in B.items() if j <= n_trunc}
    out = {(0, 0, 0): PDOp.identity(n)}
    level = {(0, 0): PDOp.identity(n)}
    p = 0
    while level:
        p += 1
        nxt: dict = {}
        for (e, K), P in level.items():
            for j, pows in table.items():
                for k, A in enumerate(pows):
                    e2 = e + j + k
                    if e2 > n_trunc:
                        break
                    if not A:
                        continue
                    K2 = K + k
                    term = op_compose(P, A).scale(Q(1, K2 + p))
                    if term:
                        key = (e2, K2)
                        nxt[key] = nxt[key] + term if key in nxt else term
        level = {k: v for k, v in nxt.items() if v}
        for (e, K), P in level.items():
            out[(e, K, p)] = P
    return out


def exp_perturbed(c, P: dict, n: int, n_trunc: int) -> FBElem:
    """exp(c eps Delta + P) as an FB element, P = {eps power >= 1: PDOp}."""
    c = rational(c)
    terms = duhamel_terms(P, n, n_trunc)
    payload: dict = {}
    for (e, K, p), A in terms.items():
        v = A.scale(c ** K) if K else A
        if v:
            payload[e] = payload[e] + v if e in payload else v
    return FBElem(n, payload, c, n_trunc)


def heat_payload(B: dict, n: int, n_trunc: int) -> dict:
    """Payload of exp(s(eps Delta + B)) as a polynomial in s: {(eps power, s degree): PDOp}."""
    out: dict = {}
    for (e, K, p), A in duhamel_terms(B, n, n_trunc).items():
        key = (e, K + p)
        out[key] = out[key] + A if key in out else A
    return {k: v for k, v in out.items() if v}


def evaluate_heat_payload(pay: dict, s) -> dict:
    s = rational(s)
    out: dict = {}
    for (e, d), A in pay.items():
        v = A.scale(s ** d) if d else A
        if v:
            out[e] = out[e] + v if e in out else v
    return {k: v for k, v in out.items() if v}


def exp_dirac_squared(s, conn, n_trunc: int) -> FBElem:
    """exp(s D^2) = payload(s) * exp(s eps Delta), with D^2 = eps Delta + (eps R_1 + eps^2 R_2)."""
    from .geometry import Dirac

    s = rational(s)
    d = Dirac(conn)
    if s == 0:
        return FBElem(conn.n, {0: PDOp.identity(conn.n)}, 0, n_trunc)
    pay = heat_payload(d.perturbation(), conn.n, n_trunc)
    return FBElem(conn.n, evaluate_heat_payload(pay, s), s, n_trunc, cert=0)


def fb_certificate(X: FBElem) -> int | None:
    return X.cert
