"""Torsion-free connections on the flat torus and the operators they induce.

Christoffel symbols are stored as ``gamma[k][i][j]`` (0-based) and encode
nabla_{d/dx^i} d/dx^j = Gamma^k_ij d/dx^k.  All coefficients are trig
polynomials in x, so every induced operator stays in the phfun grammar.
"""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field

from .endo import EndS
from .errors import ConfigError, InvalidConnection
from .exactnum import Q
from .opalg import PDOp, op_anticommutator, op_commutator, op_compose
from .phfun import PhFun, random_trig


def _unit(n, i):
    return tuple(1 if k == i else 0 for k in range(n))


class ConnectionData:
    """Christoffel symbols Gamma^k_ij, symmetric in (i, j)."""

    def __init__(self, n: int, gamma=None):
        if n not in (1, 2, 3):
            raise ConfigError(f"dimension must be 1, 2 or 3, got {n}")
        self.n = n
        if gamma is None:
            gamma = [[[PhFun.zero(n) for _ in range(n)] for _ in range(n)] for _ in range(n)]
        self.gamma = gamma
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    g = gamma[k][i][j]
                    if not g.is_x_only():
                        raise InvalidConnection(f"Gamma^{k + 1}_{i + 1}{j + 1} depends on xi")
                    if g != gamma[k][j][i]:
                        raise InvalidConnection(
                            f"Gamma^{k + 1}_{i + 1}{j + 1} != Gamma^{k + 1}_{j + 1}{i + 1}: connection has torsion")

    @classmethod
    def flat(cls, n: int) -> "ConnectionData":
        return cls(n)

    @classmethod
    def from_entries(cls, n: int, entries) -> "ConnectionData":
        """Build from (k, i, j, PhFun) with 0-based indices, completing the symmetry in (i, j)."""
        gamma = [[[None for _ in range(n)] for _ in range(n)] for _ in range(n)]
        for k, i, j, f in entries:
            for a, b in ((i, j), (j, i)):
                cur = gamma[k][a][b]
                if cur is not None and cur != f:
                    raise InvalidConnection(f"conflicting values for Gamma^{k + 1}_{a + 1}{b + 1}")
                gamma[k][a][b] = f
        for k in range(n):
            for i in range(n):
                for j in range(n):
                    if gamma[k][i][j] is None:
                        gamma[k][i][j] = PhFun.zero(n)
        return cls(n, gamma)

    @classmethod
    def from_json(cls, doc) -> "ConnectionData":
        """Config shape {"n": n, "Gamma": [{"k": k, "i": i, "j": j, "expr": "..."}]} with 1-based indices."""
        from .parse import parse_function

        if isinstance(doc, str):
            doc = json.loads(doc)
        try:
            n = int(doc["n"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("connection config needs an integer field 'n'") from exc
        entries = []
        for ent in doc.get("Gamma", []):
            try:
                k, i, j = (int(ent[c]) - 1 for c in ("k", "i", "j"))
                expr = ent["expr"]
            except (KeyError, TypeError, ValueError) as exc:
                raise ConfigError(f"bad Gamma entry {ent!r}") from exc
            if not all(0 <= v < n for v in (k, i, j)):
                raise ConfigError(f"Gamma index out of range in {ent!r}")
            f = parse_function(expr, n)
            if not f.is_x_only():
                raise InvalidConnection(f"Gamma entry {expr!r} must depend on x only")
            entries.append((k, i, j, f))
        return cls.from_entries(n, entries)

    def to_json(self) -> dict:
        from .phfun import to_text

        ents = []
        for k in range(self.n):
            for i in range(self.n):
                for j in range(i, self.n):
                    g = self.gamma[k][i][j]
                    if g:
                        ents.append({"k": k + 1, "i": i + 1, "j": j + 1, "expr": to_text(g)})
        return {"n": self.n, "Gamma": ents}

    def is_flat_chart(self) -> bool:
        return all(not self.gamma[k][i][j] for k in range(self.n) for i in range(self.n) for j in range(self.n))

    def __repr__(self):
        return f"ConnectionData({self.to_json()})"


def random_connection(rng: random.Random, n: int, density: float = 0.5, max_freq: int = 1) -> ConnectionData:
    """Random symmetric trig-polynomial Christoffel data."""
    entries = []
    for k in range(n):
        for i in range(n):
            for j in range(i, n):
                if rng.random() < density:
                    entries.append((k, i, j, random_trig(rng, n, max_freq=max_freq, terms=2)))
    return ConnectionData.from_entries(n, entries)


# --------------------------------------------------------------- curvature

@dataclass
class CurvatureData:
    """R^k_ijl stored as ``R[k][i][j][l]``, antisymmetric in (i, j)."""

    n: int
    R: list = field(repr=False)

    def component(self, k, i, j, l) -> PhFun:
        return self.R[k][i][j][l]

    def is_zero(self) -> bool:
        n = self.n
        return all(not self.R[k][i][j][l] for k in range(n) for i in range(n) for j in range(n) for l in range(n))


def curvature(conn: ConnectionData) -> CurvatureData:
    """R^k_ijl = d_i G^k_jl - d_j G^k_il + G^k_im G^m_jl - G^k_jm G^m_il."""
    n, G = conn.n, conn.gamma
    R = [[[[None] * n for _ in range(n)] for _ in range(n)] for _ in range(n)]
    for k in range(n):
        for i in range(n):
            for j in range(n):
                for l in range(n):
                    v = G[k][j][l].dx(i) - G[k][i][l].dx(j)
                    for m in range(n):
                        v = v + G[k][i][m] * G[m][j][l] - G[k][j][m] * G[m][i][l]
                    R[k][i][j][l] = v
    return CurvatureData(n, R)


# ---------------------------------------------------------------- operators

def horizontal_lift(conn: ConnectionData, i: int, spinor: bool = True) -> PDOp:
    """nabla along the horizontal lift of d/dx^i, acting on form-valued functions on T*M.

    On functions this is d_i + Gamma^k_il xi_k d/dxi_l; with ``spinor`` the
    induced connection term -Gamma^k_il psi^l psibar_k is added.
    """
    n = conn.n
    out = PDOp.dx(n, i)
    for k in range(n):
        for l in range(n):
            g = conn.gamma[k][i][l]
            if not g:
                continue
            out = out + PDOp.function(g * PhFun.xi(n, k)) * PDOp.dxi(n, l)
            if spinor:
                out = out - PDOp.function(g) * PDOp.endo(EndS.psi(n, l) * EndS.psibar(n, k))
    return out


def d_horiz(conn: ConnectionData) -> PDOp:
    """psi^i d_i + Gamma^k_ij psi^i xi_k d/dxi_j."""
    n = conn.n
    out = PDOp.zero(n)
    for i in range(n):
        out = out + PDOp.psi(n, i) * PDOp.dx(n, i)
        for k in range(n):
            for j in range(n):
                g = conn.gamma[k][i][j]
                if g:
                    out = out + PDOp.psi(n, i) * PDOp.function(g * PhFun.xi(n, k)) * PDOp.dxi(n, j)
    return out


def d_vert(n: int) -> PDOp:
    """psibar_j d/dxi_j."""
    out = PDOp.zero(n)
    for j in range(n):
        out = out + PDOp.psibar(n, j) * PDOp.dxi(n, j)
    return out


def connection_laplacian(conn: ConnectionData) -> PDOp:
    """nabla^2 = d/dxi_i (d_i + Gamma^k_il xi_k d/dxi_l - Gamma^k_il psi^l psibar_k)."""
    n = conn.n
    out = PDOp.zero(n)
    for i in range(n):
        out = out + op_compose(PDOp.dxi(n, i), horizontal_lift(conn, i, spinor=True))
    return out


def gamma_R(R: CurvatureData) -> PDOp:
    """1/2 psi^i psi^j R^k_ijl xi_k d/dxi_l."""
    n = R.n
    out = PDOp.zero(n)
    half = Q(1, 2)
    for i in range(n):
        for j in range(n):
            if i == j:
                continue
            pp = PDOp.psi(n, i) * PDOp.psi(n, j)
            for k in range(n):
                for l in range(n):
                    r = R.R[k][i][j][l]
                    if r:
                        out = out + pp * PDOp.function(r * PhFun.xi(n, k)) * PDOp.dxi(n, l).scale(half)
    return out


def gamma_vector(R: CurvatureData, i: int, j: int) -> PDOp:
    """The vertical field R^k_ijl xi_k d/dxi_l attached to the coordinate pair (i, j)."""
    n = R.n
    out = PDOp.zero(n)
    for k in range(n):
        for l in range(n):
            r = R.R[k][i][j][l]
            if r:
                out = out + PDOp.function(r * PhFun.xi(n, k)) * PDOp.dxi(n, l)
    return out


class Dirac:
    """D = eps*D_horiz + D_vert together with the split D^2 = eps*nabla^2 + eps^2*gamma(R)."""

    def __init__(self, conn: ConnectionData):
        self.conn = conn
        self.n = conn.n
        self.R = curvature(conn)
        self.D_h = d_horiz(conn)
        self.D_v = d_vert(conn.n)
        self.nabla2 = connection_laplacian(conn)
        self.gammaR = gamma_R(self.R)

    @property
    def D(self) -> dict:
        """D as {eps power: PDOp}."""
        return {0: self.D_v, 1: self.D_h}

    @property
    def D_squared(self) -> dict:
        return {1: self.nabla2, 2: self.gammaR}

    def perturbation(self) -> dict:
        """D^2 - eps*Delta as {eps power: PDOp}."""
        out = {}
        r1 = self.nabla2 - PDOp.laplacian(self.n)
        if r1:
            out[1] = r1
        if self.gammaR:
            out[2] = self.gammaR
        return out


def build_dirac(conn: ConnectionData) -> Dirac:
    return Dirac(conn)


def dirac_identities(conn: ConnectionData) -> dict:
    """Residuals of D_vert^2 = 0, D_horiz^2 = gamma(R) and {D_horiz, D_vert} = nabla^2."""
    d = Dirac(conn)
    return {
        "D_vert^2": op_compose(d.D_v, d.D_v),
        "D_horiz^2 - gamma(R)": op_compose(d.D_h, d.D_h) - d.gammaR,
        "{D_horiz, D_vert} - nabla^2": op_anticommutator(d.D_h, d.D_v) - d.nabla2,
    }


def lift_bracket_defect(conn: ConnectionData, i: int, j: int) -> PDOp:
    """[X^H, Y^H] - [X, Y]^H for coordinate fields, acting on functions ([X, Y] = 0)."""
    return op_commutator(horizontal_lift(conn, i, spinor=False), horizontal_lift(conn, j, spinor=False))
