"""Symbols at a point: the algebra A_m, the density str_m, and the Schur/Todd identities.

An element of A_m is stored like a PDOp, as ``{(mono, gens, alpha, beta): c}``
meaning ``c * f(xi) * omega_gens * d_x^alpha d_xi^beta``:

* ``mono`` is a phfun monomial.  Its trig part is the dependence on the base
  point m, kept symbolic so that densities come out as trig polynomials in m;
* ``gens`` is an increasing tuple of exterior generators: dx^i is i, dxi_j is
  n + j.  Indices >= 2n are free even-degree test generators;
* d_x is central (constant coefficient on T_m M) and d_xi acts on the xi
  dependence of coefficients by the Leibniz rule.

The symbol map is realized in the global periodic chart.  Coordinate
derivatives are rewritten through horizontal lifts, which gives

    Sym(d_i) = d_x^i + Theta_i,   Theta_i = Gamma^k_il dx^l dxi_k,

and psi^i -> dx^i, psibar_j -> dxi_j, functions restrict to the fiber.
"""
from __future__ import annotations

from math import factorial

from .endo import merge_sign
from .errors import DomainError
from .exactnum import ONE, ZERO, ExactScalar, Q, rational
from .forms import determinant, scaled_todd_series
from .formal import FBElem, ordered_weight
from .geometry import ConnectionData, curvature
from .opalg import PDOp, _leibniz_split, symbol_order, term_symbol_order
from .phfun import PhFun, mono_degree, mono_mul, mono_partial, torus_volume
from .trace import block_contraction, require_audit


def _addt(a, b):
    return tuple(x + y for x, y in zip(a, b))


def _unit(n, i):
    return tuple(1 if k == i else 0 for k in range(n))


class SymbolElem:
    """An element of A_m with coefficients depending on the (symbolic) base point."""

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {k: rational(c) for k, c in (terms or {}).items() if c != 0}

    # constructors
    @classmethod
    def zero(cls, n: int) -> "SymbolElem":
        return cls(n)

    @classmethod
    def scalar(cls, n: int, c=1) -> "SymbolElem":
        z = (0,) * n
        return cls(n, {((z, z, 0), (), z, z): c})

    @classmethod
    def function(cls, f: PhFun) -> "SymbolElem":
        z = (0,) * f.n
        return cls(f.n, {(m, (), z, z): c for m, c in f.terms.items()})

    @classmethod
    def form(cls, n: int, gens: tuple, c=1) -> "SymbolElem":
        out = cls.scalar(n, c)
        for x in gens:
            out = out * cls.generator(n, x)
        return out

    @classmethod
    def generator(cls, n: int, g: int) -> "SymbolElem":
        z = (0,) * n
        return cls(n, {((z, z, 0), (g,), z, z): 1})

    @classmethod
    def dx_form(cls, n: int, i: int) -> "SymbolElem":
        return cls.generator(n, i)

    @classmethod
    def dxi_form(cls, n: int, j: int) -> "SymbolElem":
        return cls.generator(n, n + j)

    @classmethod
    def derivative(cls, n: int, alpha, beta, c=1) -> "SymbolElem":
        z = (0,) * n
        return cls(n, {((z, z, 0), (), tuple(alpha), tuple(beta)): c})

    @classmethod
    def ddx(cls, n: int, i: int) -> "SymbolElem":
        return cls.derivative(n, _unit(n, i), (0,) * n)

    @classmethod
    def ddxi(cls, n: int, j: int) -> "SymbolElem":
        return cls.derivative(n, (0,) * n, _unit(n, j))

    @classmethod
    def laplacian(cls, n: int) -> "SymbolElem":
        out = cls(n)
        for i in range(n):
            out = out + cls.derivative(n, _unit(n, i), _unit(n, i))
        return out

    # arithmetic
    def __add__(self, other):
        if not isinstance(other, SymbolElem):
            other = SymbolElem.scalar(self.n, other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return SymbolElem(self.n, out)

    __radd__ = __add__

    def __neg__(self):
        return SymbolElem(self.n, {k: -c for k, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "SymbolElem":
        c = rational(c)
        return SymbolElem(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, SymbolElem):
            return sym_mul(self, other)
        if isinstance(other, PhFun):
            return sym_mul(self, SymbolElem.function(other))
        return self.scale(other)

    def __rmul__(self, other):
        if isinstance(other, PhFun):
            return sym_mul(SymbolElem.function(other), self)
        return self.scale(other)

    def __eq__(self, other):
        return isinstance(other, SymbolElem) and self.n == other.n and self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def __repr__(self):
        return f"SymbolElem({symbol_text(self)})"

    # structure
    def has_derivatives(self) -> bool:
        return any(any(a) or any(b) for (_, _, a, b) in self.terms)

    def has_xi_derivatives(self) -> bool:
        return any(any(b) for (_, _, _, b) in self.terms)

    def degrees(self) -> set:
        return {term_grading(k) for k in self.terms}

    def homogeneous_part(self, d: int) -> "SymbolElem":
        return SymbolElem(self.n, {k: c for k, c in self.terms.items() if term_grading(k) == d})

    def coefficient(self, gens: tuple) -> PhFun:
        """The function multiplying the derivative-free form omega_gens."""
        z = (0,) * self.n
        out = {}
        for (m, g, a, b), c in self.terms.items():
            if g == tuple(gens) and a == z and b == z:
                out[m] = out.get(m, ZERO) + c
        return PhFun(self.n, out, _canonical=True)

    def top_coefficient(self) -> PhFun:
        """Coefficient of dx^1..dx^n dxi_1..dxi_n."""
        return self.coefficient(tuple(range(2 * self.n)))

    def at_point(self, m) -> "SymbolElem":
        """Evaluate the base-point dependence at m (coordinates given in units of pi)."""
        out: dict = {}
        z = (0,) * self.n
        for (mono, g, a, b), c in self.terms.items():
            v = trig_at(mono[0], m)
            if v:
                key = ((z, mono[1], mono[2]), g, a, b)
                out[key] = out.get(key, ZERO) + c * v
        return SymbolElem(self.n, out)


def term_grading(key) -> int:
    """Degree in A_m: |alpha| + deg f - |beta| + (number of dxi generators)."""
    m, g, a, b = key
    n = len(a)
    return sum(a) + mono_degree(m) - sum(b) + sum(1 for x in g if n <= x < 2 * n)


def sym_mul(A: SymbolElem, B: SymbolElem) -> SymbolElem:
    """Product in A_m: xi-derivatives of A act on the coefficients of B, d_x is central."""
    if A.n != B.n:
        raise ValueError("dimension mismatch")
    n = A.n
    z = (0,) * n
    out: dict = {}
    for (f, g1, a1, b1), c1 in A.terms.items():
        splits = _leibniz_split(b1)
        for (h, g2, a2, b2), c2 in B.terms.items():
            s, g = merge_sign(g1, g2)
            if not s:
                continue
            na = _addt(a1, a2)
            for sig, rest, w in splits:
                dh = mono_partial(h, z, sig)
                if not dh:
                    continue
                nb = _addt(rest, b2)
                for h2, ch in dh:
                    for fh, cf in mono_mul(f, h2):
                        key = (fh, g, na, nb)
                        out[key] = out.get(key, ZERO) + c1 * c2 * (s * w) * ch * cf
    return SymbolElem(n, {k: v for k, v in out.items() if v})


def sym_commutator(A: SymbolElem, B: SymbolElem) -> SymbolElem:
    return A * B - B * A


def trig_at(t: tuple, m) -> object:
    """Exact value of a trig monomial at x = pi * m; each k * m_i must be a multiple of 1/2."""
    v = ONE
    for code, mi in zip(t, m):
        if code == 0:
            continue
        k = abs(code)
        r = rational(mi) * k * 2  # angle in units of pi/2
        if r.denominator != 1:
            raise DomainError(f"trig value at {mi}*pi is not rational; use half-integer multiples")
        quarter = int(r) % 4
        if code > 0:
            v *= (ONE, ZERO, -ONE, ZERO)[quarter]
        else:
            v *= (ZERO, ONE, ZERO, -ONE)[quarter]
        if v == 0:
            return ZERO
    return v


# ------------------------------------------------------------- eps-series

def ser_add(a: dict, b: dict) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if v}


def ser_mul(a: dict, b: dict, top: int | None = None) -> dict:
    out: dict = {}
    for k1, x in a.items():
        for k2, y in b.items():
            k = k1 + k2
            if top is not None and k > top:
                continue
            v = x * y
            if v:
                out[k] = out[k] + v if k in out else v
    return {k: v for k, v in out.items() if v}


def ser_scale(a: dict, c) -> dict:
    return {k: v.scale(c) for k, v in a.items() if v}


# ---------------------------------------------------------- the symbol map

class SymbolMap:
    """Sym^nabla at a symbolic base point, for one torsion-free connection."""

    def __init__(self, conn: ConnectionData):
        self.conn = conn
        self.n = n = conn.n
        self.theta = []
        for i in range(n):
            t = SymbolElem(n)
            for k in range(n):
                for l in range(n):
                    g = conn.gamma[k][i][l]
                    if g:
                        t = t + SymbolElem.function(g) * SymbolElem.form(n, (l, n + k))
            self.theta.append(t)
        self._powers: dict = {}

    def lifted_dx(self, i: int) -> SymbolElem:
        return SymbolElem.ddx(self.n, i) + self.theta[i]

    def dx_power(self, alpha: tuple) -> SymbolElem:
        """prod_i (d_x^i + Theta_i)^alpha_i; the factors commute."""
        if alpha not in self._powers:
            out = SymbolElem.scalar(self.n)
            for i, a in enumerate(alpha):
                for _ in range(a):
                    out = out * self.lifted_dx(i)
            self._powers[alpha] = out
        return self._powers[alpha]

    def of_term(self, key, c) -> SymbolElem:
        m, (mu, nu), a, b = key
        n = self.n
        z = (0,) * n
        gens = tuple(mu) + tuple(n + j for j in nu)
        head = SymbolElem(n, {(m, gens, z, z): c})
        return head * self.dx_power(a) * SymbolElem.derivative(n, z, b)

    def __call__(self, A: PDOp, order: int | None = None) -> SymbolElem:
        """Image of the class of A in the associated graded piece of the given order."""
        if not A:
            return SymbolElem(self.n)
        if order is None:
            order = symbol_order(A)
        out = SymbolElem(self.n)
        for key, c in A.terms.items():
            o = term_symbol_order(key)
            if o > order:
                raise DomainError(f"operator has a term of order {o} above the requested order {order}")
            if o == order:
                out = out + self.of_term(key, c)
        return out

    def heat_correction(self) -> SymbolElem:
        """B = sum_i Theta_i d_xi_i, so that Sym(Delta) = Delta + B."""
        out = SymbolElem(self.n)
        for i in range(self.n):
            out = out + self.theta[i] * SymbolElem.ddxi(self.n, i)
        return out

    def heat_factor(self) -> dict:
        """exp(eps B) as {eps power: SymbolElem}; B is nilpotent since it carries a dx."""
        B = self.heat_correction()
        out = {0: SymbolElem.scalar(self.n)}
        cur = SymbolElem.scalar(self.n)
        k = 0
        while True:
            k += 1
            cur = (cur * B).scale(Q(1, k))
            if not cur:
                break
            out[k] = cur
        return out


_MAPS: dict = {}


def symbol_map(conn: ConnectionData) -> SymbolMap:
    sm = _MAPS.get(id(conn))
    if sm is None or sm.conn is not conn:
        sm = SymbolMap(conn)
        _MAPS[id(conn)] = sm
    return sm


def symbol_at_point(A: PDOp, conn: ConnectionData, m=None, order: int | None = None) -> SymbolElem:
    """Sym^nabla_m of the top-order class of A; m=None keeps the base point symbolic."""
    s = symbol_map(conn)(A, order)
    return s if m is None else s.at_point(m)


# --------------------------------------------------------- str_m and <.>

def contract_symbol(S: SymbolElem) -> dict:
    """<S exp(eps Delta)> in A_m as {eps power: derivative-free SymbolElem}."""
    n = S.n
    z = (0,) * n
    out: dict = {}
    for (m, g, a, b), c in S.terms.items():
        r = block_contraction(a, b)
        if r is None:
            continue
        cc, e = r
        bucket = out.setdefault(e, {})
        key = (m, g, z, z)
        bucket[key] = bucket.get(key, ZERO) + c * cc
    return {e: SymbolElem(n, t) for e, t in out.items() if t}


def contract_series(series: dict) -> dict:
    out: dict = {}
    for k, S in series.items():
        for e, v in contract_symbol(S).items():
            out[k + e] = out[k + e] + v if k + e in out else v
    return {k: v for k, v in out.items() if v}


def fiber_density(f: PhFun) -> dict:
    """Integral over the unit cosphere at m of the degree -n part: {trig: ExactScalar}."""
    return f.fiber_integral()


def density_series(contracted: dict) -> dict:
    """{eps power: {trig: ExactScalar}} from top coefficients of contracted symbols."""
    out = {}
    for e, S in contracted.items():
        d = fiber_density(S.top_coefficient())
        if d:
            out[e] = d
    return out


def str_m(series: dict) -> dict:
    """str_m of sum_k eps^k S_k exp(eps Delta): eps^0 coefficient as a trig polynomial in m."""
    return density_series(contract_series(series)).get(0, {})


def integrate_density(d: dict, n: int) -> ExactScalar:
    """Integral over the torus of a trig-polynomial density."""
    return d.get((0,) * n, ExactScalar()) * torus_volume(n)


def density_at(d: dict, m) -> ExactScalar:
    total = ExactScalar()
    for t, v in d.items():
        w = trig_at(t, m)
        if w:
            total = total + v * w
    return total


def symbol_of_fb(X: FBElem, conn: ConnectionData, heat_correction: bool = True) -> dict:
    """Sym of a symbol-order-0 bimodule element, as {eps power: S} with S exp(eps Delta) implied.

    The heat marker maps to exp(eps (Delta + B)) = exp(eps B) exp(eps Delta);
    ``heat_correction=False`` drops exp(eps B) (only useful as a negative control).
    """
    if X.marker != 1:
        raise DomainError("the symbol of a bimodule element needs the heat marker exp(eps*Delta)")
    sm = symbol_map(conn)
    body: dict = {}
    for k, D in X.payload.items():
        o = symbol_order(D)
        if o > 0:
            raise DomainError(f"payload coefficient at eps^{k} has positive order {o}")
        S = sm(D, 0)
        if S:
            body[k] = S
    return ser_mul(body, sm.heat_factor()) if heat_correction else body


def pointwise_trace_density(X: FBElem, conn: ConnectionData, m=None):
    """str(X)|_m = str_m(Sym_m(X)); a trig polynomial in m, or its value at m."""
    require_audit(X.n, X.cert, X.n_trunc, want=0)
    d = str_m(symbol_of_fb(X, conn))
    return d if m is None else density_at(d, m)


# ------------------------------------------------------- curvature at m

def curvature_forms(conn: ConnectionData) -> list:
    """R^k_l = 1/2 R^k_ijl dx^i dx^j as SymbolElems (k row, l column)."""
    n = conn.n
    R = curvature(conn).R
    half = Q(1, 2)
    out = []
    for k in range(n):
        row = []
        for l in range(n):
            e = SymbolElem(n)
            for i in range(n):
                for j in range(n):
                    if i != j and R[k][i][j][l]:
                        e = e + SymbolElem.function(R[k][i][j][l] * half) * SymbolElem.form(n, (i, j))
            row.append(e)
        out.append(row)
    return out


def xi_R_dxi(Rm: list) -> SymbolElem:
    """C = xi_k R^k_l d_xi_l."""
    n = len(Rm)
    out = SymbolElem(n)
    for k in range(n):
        for l in range(n):
            if Rm[k][l]:
                out = out + SymbolElem.function(PhFun.xi(n, k)) * Rm[k][l] * SymbolElem.ddxi(n, l)
    return out


class JLOSymbols:
    """The symbols of the factors in the JLO integrand, at a symbolic base point."""

    def __init__(self, conn: ConnectionData):
        self.conn = conn
        self.n = conn.n
        self.R = curvature_forms(conn)
        self.C = xi_R_dxi(self.R)

    def delta_R(self) -> dict:
        """Delta_R = Delta + eps xi.R.d_xi as {eps power: SymbolElem}."""
        out = {0: SymbolElem.laplacian(self.n)}
        if self.C:
            out[1] = self.C
        return out

    def d_horiz(self, a: PhFun) -> SymbolElem:
        """dx^i (d_i a + Gamma^k_ij xi_k d a/d xi_j), the horizontal differential in the chart."""
        n = self.n
        out = SymbolElem(n)
        for i in range(n):
            f = a.dx(i)
            for k in range(n):
                for j in range(n):
                    g = self.conn.gamma[k][i][j]
                    if g:
                        f = f + g * PhFun.xi(n, k) * a.dxi(j)
            if f:
                out = out + SymbolElem.function(f) * SymbolElem.dx_form(n, i)
        return out

    def d_vert(self, a: PhFun) -> SymbolElem:
        n = self.n
        out = SymbolElem(n)
        for j in range(n):
            f = a.dxi(j)
            if f:
                out = out + SymbolElem.function(f) * SymbolElem.dxi_form(n, j)
        return out

    def d_eps(self, a: PhFun) -> dict:
        """d_eps a = eps d_horiz a + d_vert a."""
        return {k: v for k, v in {0: self.d_vert(a), 1: self.d_horiz(a)}.items() if v}

    def delta_D(self) -> dict:
        """-q^-1 d_eps q."""
        qi = PhFun.q(self.n, -1)
        return {k: (SymbolElem.function(qi) * v).scale(-1) for k, v in self.d_eps(PhFun.q(self.n)).items()}


def symbol_of_jlo_factors(conn: ConnectionData) -> JLOSymbols:
    return JLOSymbols(conn)


# ---------------------------------------------------- Schur / Todd

def bernoulli_matrix_series(Rm: list, scale, kmax: int, eps_step: int = 2) -> list:
    """sum_k c_k (scale x)^k / with x = eps^eps_step R, coefficients of x/(e^x - 1).

    Returns an n x n matrix of eps-series {power: SymbolElem}.  scale = -1
    gives x/(1 - e^-x), the variant in the Schur solution.
    """
    n = len(Rm)
    N = Rm[0][0].n if n else 0
    coeffs = scaled_todd_series(kmax, scale)
    ident = [[{0: SymbolElem.scalar(N)} if i == j else {} for j in range(n)] for i in range(n)]
    out = [[ser_scale(ident[i][j], coeffs[0]) for j in range(n)] for i in range(n)]
    power = ident
    Rser = [[{eps_step: Rm[i][j]} if Rm[i][j] else {} for j in range(n)] for i in range(n)]
    for k in range(1, kmax + 1):
        power = _mat_mul(power, Rser)
        if all(not power[i][j] for i in range(n) for j in range(n)):
            break
        for i in range(n):
            for j in range(n):
                out[i][j] = ser_add(out[i][j], ser_scale(power[i][j], coeffs[k]))
    return out


def _mat_mul(A, B):
    n = len(A)
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            acc: dict = {}
            for k in range(n):
                if A[i][k] and B[k][j]:
                    acc = ser_add(acc, ser_mul(A[i][k], B[k][j]))
            row.append(acc)
        out.append(row)
    return out


class _Ser:
    """Thin wrapper so an eps-series can be fed to forms.determinant."""

    __slots__ = ("s",)

    def __init__(self, s):
        self.s = s

    def __add__(self, other):
        return _Ser(ser_add(self.s, other.s))

    def __mul__(self, c):
        return _Ser(ser_scale(self.s, c))


def todd_series_of(Rm: list, kmax: int | None = None) -> dict:
    """Todd(eps^2 R) = det(eps^2 R / (exp(eps^2 R) - 1)) as {eps power: SymbolElem}."""
    if kmax is None:
        kmax = _nilpotency_bound(Rm)
    M = bernoulli_matrix_series(Rm, 1, kmax)
    det = determinant([[_Ser(e) for e in row] for row in M], mul=lambda a, b: _Ser(ser_mul(a.s, b.s)))
    return det.s


def _nilpotency_bound(Rm: list) -> int:
    gens = set()
    for row in Rm:
        for e in row:
            for (_, g, _, _) in e.terms:
                gens.update(g)
    return max(1, len(gens) // 2 + 1)


def _ad_delta_powers(C: SymbolElem) -> list:
    """[C, ad_Delta C, ad_Delta^2 C / 2!, ...] until zero."""
    L = SymbolElem.laplacian(C.n)
    out = []
    cur = C
    k = 0
    while cur:
        out.append(cur)
        k += 1
        cur = sym_commutator(L, cur).scale(Q(1, k))
    return out


def heat_dyson(C: SymbolElem, n_trunc: int) -> dict:
    """V with exp(eps Delta + eps^2 C) = V exp(eps Delta), as {eps power: SymbolElem}.

    V = sum over ordered products P(t_1)..P(t_k), t_1 <= .. <= t_k, where
    P(t) = sum_m t^m eps^(m+2) ad_Delta^m(C)/m!; the t-integrals are the
    ordered simplex weights.  Terms above eps^n_trunc are dropped.
    """
    n = C.n
    pows = _ad_delta_powers(C) if C else []
    out = {0: SymbolElem.scalar(n)}
    level = {((), 0): SymbolElem.scalar(n)}  # (m sequence, eps power) -> product
    while level:
        nxt: dict = {}
        for (ms, e), P in level.items():
            for m, A in enumerate(pows):
                e2 = e + m + 2
                if e2 > n_trunc:
                    break
                prod = P * A
                if prod:
                    nxt[(ms + (m,), e2)] = prod
        level = nxt
        for (ms, e), P in level.items():
            v = P.scale(ordered_weight(ms))
            out[e] = out[e] + v if e in out else v
    return {k: v for k, v in out.items() if v}


def contract_with_R(X: SymbolElem, Rm: list, n_trunc: int | None = None) -> dict:
    """<X exp(eps Delta_R)> two ways: brute-force expansion and eps^-n X Todd(eps^2 R).

    X must be free of xi-derivatives.  Returns {"brute", "closed", "certified_up_to"}
    with both series as {eps power: SymbolElem}.
    """
    if X.has_xi_derivatives():
        raise DomainError("contract_with_R needs an element without xi-derivatives")
    n = X.n
    if n_trunc is None:
        n_trunc = 3 * (2 * _nilpotency_bound(Rm) + n + 2)
    C = xi_R_dxi(Rm)
    V = heat_dyson(C, n_trunc)
    brute = contract_series(ser_mul({0: X}, V))
    closed = ser_mul({-n: X}, todd_series_of(Rm))
    # a missing term eps^E with E > n_trunc carries at most E/3 x-derivatives
    cert = 2 * ((n_trunc + 3) // 3) - n - 1
    brute = {k: v for k, v in brute.items() if k <= cert}
    closed = {k: v for k, v in closed.items() if k <= cert}
    return {"brute": brute, "closed": closed, "certified_up_to": cert}


def schur_vanishing(X: SymbolElem, Rm: list, j: int, r: int = 0, n_trunc: int | None = None) -> dict:
    """<eps^r (d_x^j + eps xi_i R^i_j) X exp(eps Delta_R)>, which should vanish identically."""
    if X.has_xi_derivatives():
        raise DomainError("schur_vanishing needs an element without xi-derivatives")
    n = X.n
    if n_trunc is None:
        n_trunc = 3 * (2 * _nilpotency_bound(Rm) + n + 2)
    lead = {r: SymbolElem.ddx(n, j)}
    corr = SymbolElem(n)
    for i in range(n):
        if Rm[i][j]:
            corr = corr + SymbolElem.function(PhFun.xi(n, i)) * Rm[i][j]
    if corr:
        lead[r + 1] = corr
    V = heat_dyson(xi_R_dxi(Rm), n_trunc)
    out = contract_series(ser_mul(ser_mul(lead, {0: X}), V))
    cert = 2 * ((n_trunc + 3) // 3) - n - 1 + r
    return {k: v for k, v in out.items() if k <= cert}


# -------------------------------------------------- the Schur ODE check

class KernelPoly:
    """Polynomials in u = x - y, v = xi - eta, eta, t and eps^(+-1) with even-form coefficients.

    Keys are (gens, exps, e, tp) with exps = (u_1..u_n, v_1..v_n, eta_1..eta_n).
    The represented function is P * exp(-u.v/eps).
    """

    __slots__ = ("n", "terms")

    def __init__(self, n: int, terms: dict | None = None):
        self.n = n
        self.terms = {k: c for k, c in (terms or {}).items() if c != 0}

    @classmethod
    def one(cls, n):
        return cls(n, {((), (0,) * (3 * n), 0, 0): ONE})

    @classmethod
    def var(cls, n, kind: str, i: int, c=1, e: int = 0, tp: int = 0):
        ex = [0] * (3 * n)
        ex["uve".index(kind) * n + i] = 1
        return cls(n, {((), tuple(ex), e, tp): rational(c)})

    @classmethod
    def from_form(cls, n, S: SymbolElem, e: int = 0, tp: int = 0):
        """A derivative-free, x- and xi-constant SymbolElem as a coefficient."""
        out = {}
        for (m, g, a, b), c in S.terms.items():
            if any(a) or any(b) or any(m[0]) or any(m[1]) or m[2]:
                raise DomainError("kernel coefficients must be constant forms")
            key = (g, (0,) * (3 * n), e, tp)
            out[key] = out.get(key, ZERO) + c
        return cls(n, out)

    def __add__(self, other):
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out.get(k, ZERO) + c
        return KernelPoly(self.n, out)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c):
        c = rational(c)
        return KernelPoly(self.n, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if not isinstance(other, KernelPoly):
            return self.scale(other)
        out: dict = {}
        for (g1, x1, e1, t1), c1 in self.terms.items():
            for (g2, x2, e2, t2), c2 in other.terms.items():
                s, g = merge_sign(g1, g2)
                if not s:
                    continue
                key = (g, _addt(x1, x2), e1 + e2, t1 + t2)
                out[key] = out.get(key, ZERO) + c1 * c2 * s
        return KernelPoly(self.n, out)

    def __bool__(self):
        return bool(self.terms)

    def truncate(self, top: int) -> "KernelPoly":
        return KernelPoly(self.n, {k: c for k, c in self.terms.items() if k[2] <= top})

    def d_var(self, idx: int) -> "KernelPoly":
        out: dict = {}
        for (g, x, e, tp), c in self.terms.items():
            if x[idx]:
                y = list(x)
                y[idx] -= 1
                key = (g, tuple(y), e, tp)
                out[key] = out.get(key, ZERO) + c * x[idx]
        return KernelPoly(self.n, out)

    def d_t(self) -> "KernelPoly":
        out: dict = {}
        for (g, x, e, tp), c in self.terms.items():
            if tp:
                key = (g, x, e, tp - 1)
                out[key] = out.get(key, ZERO) + c * tp
        return KernelPoly(self.n, out)

    def at_t(self, t) -> "KernelPoly":
        t = rational(t)
        out: dict = {}
        for (g, x, e, tp), c in self.terms.items():
            key = (g, x, e, 0)
            out[key] = out.get(key, ZERO) + c * t ** tp
        return KernelPoly(self.n, out)

    def kernel_dx(self, i: int) -> "KernelPoly":
        """d/dx^i of P exp(-u.v/eps), divided by the exponential."""
        n = self.n
        return self.d_var(i) - self * KernelPoly.var(n, "v", i, 1, -1)

    def kernel_dxi(self, i: int) -> "KernelPoly":
        n = self.n
        return self.d_var(n + i) - self * KernelPoly.var(n, "u", i, 1, -1)


def _kexp(P: KernelPoly, top: int) -> KernelPoly:
    """exp(P) for P nilpotent modulo eps-truncation (every term carries a form or positive eps)."""
    out = KernelPoly.one(P.n)
    cur = KernelPoly.one(P.n)
    k = 0
    while True:
        k += 1
        cur = (cur * P).truncate(top).scale(Q(1, k))
        if not cur:
            return out
        out = out + cur


def _xi_poly(n: int, beta: tuple) -> KernelPoly:
    """xi^beta = (v + eta)^beta."""
    out = KernelPoly.one(n)
    for j, b in enumerate(beta):
        for _ in range(b):
            out = out * (KernelPoly.var(n, "v", j) + KernelPoly.var(n, "e", j))
    return out


def apply_symbol(L: dict, P: KernelPoly, top: int) -> KernelPoly:
    """Apply sum_k eps^k L_k (elements of A_m) to P exp(-u.v/eps); returns the new P."""
    n = P.n
    out = KernelPoly(n)
    for k, S in L.items():
        for (m, g, a, b), c in S.terms.items():
            if any(m[0]) or m[2]:
                raise DomainError("operator coefficients must be xi-polynomials at a fixed point")
            Q_ = P
            for i, ai in enumerate(a):
                for _ in range(ai):
                    Q_ = Q_.kernel_dx(i)
            for j, bj in enumerate(b):
                for _ in range(bj):
                    Q_ = Q_.kernel_dxi(j)
            coef = _xi_poly(n, m[1]) * KernelPoly(n, {(g, (0,) * (3 * n), k, 0): c})
            out = out + (coef * Q_).truncate(top)
    return out


def _bilinear(n: int, left: str, M: list, right: str, e: int = 0, tp: int = 0) -> KernelPoly:
    """sum_{k,l} left_k M^k_l right_l for an n x n matrix of eps-series."""
    out = KernelPoly(n)
    for k in range(n):
        for l in range(n):
            for pw, S in M[k][l].items():
                coef = KernelPoly.from_form(n, S, pw + e, tp)
                out = out + KernelPoly.var(n, left, k) * coef * KernelPoly.var(n, right, l)
    return out


def schur_solution(Rm: list, top: int) -> KernelPoly:
    """P(t) with H(t) = eps^-n P(t) exp(-u.v/eps) the explicit Schur solution.

    P(t) = Todd(eps^2 t R) exp(-t eta.eps R.u - v.(F(t) - 1/eps).u),
    F(t) = t eps R / (1 - exp(-t eps^2 R)).
    """
    n = len(Rm)
    kmax = _nilpotency_bound(Rm)
    # Todd(eps^2 t R): eps^(2k) carries t^k
    todd = KernelPoly(n)
    for pw, S in todd_series_of(Rm, kmax).items():
        todd = todd + KernelPoly.from_form(n, S, pw, pw // 2)
    # F - 1/eps = sum_{k>=1} c_k t^k eps^(2k-1) R^k
    G = bernoulli_matrix_series(Rm, -1, kmax)
    Fm = []
    for i in range(n):
        row = []
        for j in range(n):
            row.append({pw: S for pw, S in G[i][j].items() if pw > 0})
        Fm.append(row)
    expo = KernelPoly(n)
    for k in range(n):
        for l in range(n):
            for pw, S in Fm[k][l].items():
                coef = KernelPoly.from_form(n, S, pw - 1, pw // 2)
                expo = expo - KernelPoly.var(n, "v", k) * coef * KernelPoly.var(n, "u", l)
    Rser = [[{1: Rm[i][j]} if Rm[i][j] else {} for j in range(n)] for i in range(n)]
    expo = expo - _bilinear(n, "e", Rser, "u", 0, 1)
    return (todd * _kexp(expo, top)).truncate(top)


def schur_generator(Rm: list, t, top: int) -> dict:
    """L(t) = sum_k ad_Z^k(eps^2 C)/(k+1)!, Z = eps Delta + t eps^2 C, as {eps power: SymbolElem}."""
    n = len(Rm)
    t = rational(t)
    C = xi_R_dxi(Rm)
    Z = {1: SymbolElem.laplacian(n)}
    if C:
        Z[2] = C.scale(t)
    cur = {2: C} if C else {}
    out: dict = {}
    k = 0
    while cur:
        out = ser_add(out, ser_scale(cur, Q(1, factorial(k + 1))))
        k += 1
        nxt = ser_add(ser_mul(Z, cur, top), ser_scale(ser_mul(cur, Z, top), -1))
        cur = nxt
    return out


def schur_ode_check(Rm: list, t_samples=(0, Q(1, 2), 1), top: int | None = None) -> dict:
    """Residuals of dH/dt = L(t) H for the explicit solution, plus the initial condition.

    Returns {"initial": KernelPoly, "residuals": {t: KernelPoly}}; all should be zero.
    """
    n = len(Rm)
    if top is None:
        top = 2 * n + 2
    P = schur_solution(Rm, top + 2)
    dP = P.d_t()
    res = {}
    for t in t_samples:
        Pt = P.at_t(t)
        L = schur_generator(Rm, t, top + 2)
        r = (dP.at_t(t) - apply_symbol(L, Pt, top + 2)).truncate(top)
        res[rational(t)] = r
    return {"initial": P.at_t(0) - KernelPoly.one(n), "residuals": res, "certified_up_to": top}


def evaluate_forms_at(Rm: list, m) -> list:
    return [[e.at_point(m) for e in row] for row in Rm]


def random_curvature(n: int, extra: int = 0, seed: int = 0) -> list:
    """A constant n x n matrix of even forms.

    With extra = 0 the entries are 2-forms in dx^1..dx^n; with extra > 0 they
    are drawn from 2-forms in free test generators 2n..2n+extra-1, so that
    powers of R survive beyond the form degree of the base.
    """
    import random

    rng = random.Random(seed)
    if extra:
        pool = [(a, b) for a in range(2 * n, 2 * n + extra) for b in range(a + 1, 2 * n + extra)]
    else:
        pool = [(a, b) for a in range(n) for b in range(a + 1, n)]
    out = []
    for _ in range(n):
        row = []
        for _ in range(n):
            e = SymbolElem(n)
            for g in pool:
                c = rng.randint(-2, 2)
                if c:
                    e = e + SymbolElem.form(n, g, c)
            row.append(e)
        out.append(row)
    return out


# ---------------------------------------------- pointwise JLO integrand

def pointwise_jlo_density(p: int, a: list, conn: ConnectionData, n_trunc: int | None = None) -> dict:
    """(1/p!) str_m(q^-1 d_eps q a^0 d_eps a^1 .. d_eps a^p exp(eps Delta_R)) as a trig polynomial in m."""
    if len(a) != p + 1:
        raise DomainError(f"need {p + 1} functions for p={p}, got {len(a)}")
    js = JLOSymbols(conn)
    n = conn.n
    X = ser_scale(js.delta_D(), -1)
    X = ser_mul(X, {0: SymbolElem.function(a[0])})
    for f in a[1:]:
        X = ser_mul(X, js.d_eps(f))
    if n_trunc is None:
        n_trunc = 3 * (2 * _nilpotency_bound(js.R) + n + 2)
    V = heat_dyson(js.C, n_trunc)
    dens = density_series(contract_series(ser_mul(X, V)))
    d = dens.get(0, {})
    return {t: v / factorial(p) for t, v in d.items()}


def symbol_text(S: SymbolElem) -> str:
    from .phfun import to_text

    if not S.terms:
        return "0"
    n = S.n
    groups: dict = {}
    for (m, g, a, b), c in S.terms.items():
        groups.setdefault((g, a, b), {})[m] = c
    parts = []
    for (g, a, b) in sorted(groups):
        f = PhFun(n, groups[(g, a, b)], _canonical=True)
        pieces = []
        for x in g:
            pieces.append(f"dx{x + 1}" if x < n else (f"dxi{x - n + 1}" if x < 2 * n else f"w{x - 2 * n + 1}"))
        pieces += [f"Dx{i + 1}" + (f"^{e}" if e > 1 else "") for i, e in enumerate(a) if e]
        pieces += [f"Dxi{j + 1}" + (f"^{e}" if e > 1 else "") for j, e in enumerate(b) if e]
        parts.append(f"({to_text(f)})" + "".join("*" + p for p in pieces))
    return " + ".join(parts)
