import pytest
from hypothesis import given, settings, strategies as st

from heatcocycle.errors import DomainError
from heatcocycle.exactnum import ONE, ZERO, Q
from heatcocycle.geometry import ConnectionData
from heatcocycle.opalg import PDOp
from heatcocycle.phfun import PhFun
from heatcocycle.samples import connection_c1
from heatcocycle.symbols import (JLOSymbols, KernelPoly, SymbolElem, contract_symbol, contract_with_R,
                                 random_curvature, schur_ode_check, schur_solution, schur_vanishing,
                                 symbol_at_point, todd_series_of, trig_at)

FLAT2 = ConnectionData.flat(2)


def test_generator_symbols():
    n = 2
    assert symbol_at_point(PDOp.psi(n, 0), FLAT2) == SymbolElem.dx_form(n, 0)
    assert symbol_at_point(PDOp.psibar(n, 1), FLAT2) == SymbolElem.dxi_form(n, 1)
    assert symbol_at_point(PDOp.dx(n, 1), FLAT2) == SymbolElem.ddx(n, 1)
    assert symbol_at_point(PDOp.dxi(n, 0), FLAT2) == SymbolElem.ddxi(n, 0)
    f = PhFun.sin(n, 0) * PhFun.xi(n, 1)
    assert symbol_at_point(PDOp.function(f), FLAT2) == SymbolElem.function(f)


def test_lifted_coordinate_derivative():
    # Gamma^1_12 = cos(x1) contributes cos(x1) dx^2 dxi_1 to the symbol of d_1
    n = 2
    want = SymbolElem.ddx(n, 0) + SymbolElem.function(PhFun.cos(n, 0)) * SymbolElem.form(n, (1, n))
    assert symbol_at_point(PDOp.dx(n, 0), connection_c1()) == want


def test_lower_order_classes_vanish():
    n = 2
    assert not symbol_at_point(PDOp.psi(n, 0), FLAT2, order=1)
    assert not symbol_at_point(PDOp.function(PhFun.q(n, -1)), FLAT2, order=0)
    with pytest.raises(DomainError):
        symbol_at_point(PDOp.dx(n, 0), FLAT2, order=0)


def test_trig_values():
    assert trig_at((1,), (Q(1, 2),)) == ZERO
    assert trig_at((-1,), (Q(1, 2),)) == ONE
    assert trig_at((2,), (Q(1, 2),)) == -ONE
    assert trig_at((1, -1), (1, Q(3, 2))) == ONE
    with pytest.raises(DomainError):
        trig_at((1,), (Q(1, 3),))


def test_symbol_differential_on_the_circle():
    js = JLOSymbols(ConnectionData.flat(1))
    d = js.d_eps(PhFun.sin(1, 0))
    assert d == {1: SymbolElem.function(PhFun.cos(1, 0)) * SymbolElem.dx_form(1, 0)}
    dq = js.d_eps(PhFun.xi(1, 0) * PhFun.q(1, -1))
    assert not dq  # the sign of xi is locally constant


def test_heat_contraction_examples():
    n = 1
    assert contract_symbol(SymbolElem.scalar(n)) == {-1: SymbolElem.scalar(n)}
    assert contract_symbol(SymbolElem.ddx(n, 0) * SymbolElem.ddxi(n, 0)) == {-2: SymbolElem.scalar(n, -1)}


def test_contraction_with_zero_curvature():
    n = 2
    Rm = [[SymbolElem(n)] * n for _ in range(n)]
    X = SymbolElem.form(n, (0, 1))
    res = contract_with_R(X, Rm)
    assert res["brute"] == res["closed"] == {-n: X}


@pytest.mark.parametrize("seed", range(4))
def test_contraction_in_two_dimensions(seed):
    # R^2 = 0 when R is a matrix of multiples of dx^1 dx^2, so Todd(eps^2 R) = 1 - eps^2 tr(R)/2
    n = 2
    Rm = random_curvature(n, seed=seed)
    X = SymbolElem.scalar(n)
    res = contract_with_R(X, Rm)
    tr = Rm[0][0] + Rm[1][1]
    want = {-2: X}
    if tr:
        want[0] = tr.scale(Q(-1, 2))
    assert res["closed"] == want
    assert res["brute"] == want


@settings(max_examples=6)
@given(st.integers(1, 2), st.integers(0, 2), st.integers(0, 10 ** 6))
def test_brute_and_closed_contractions_agree(n, extra, seed):
    Rm = random_curvature(n, extra=extra, seed=seed)
    X = SymbolElem.form(n, (0,)) if n == 2 else SymbolElem.scalar(n)
    res = contract_with_R(X, Rm)
    assert res["brute"] == res["closed"]


@settings(max_examples=6)
@given(st.integers(1, 2), st.integers(0, 3), st.integers(0, 10 ** 6))
def test_schur_vanishing(n, extra, seed):
    Rm = random_curvature(n, extra=extra, seed=seed)
    for j in range(n):
        assert not schur_vanishing(SymbolElem.scalar(n), Rm, j)


@pytest.mark.parametrize("n,extra", [(1, 2), (2, 0), (2, 2)])
def test_schur_ode(n, extra):
    res = schur_ode_check(random_curvature(n, extra=extra, seed=5))
    assert not res["initial"]
    assert all(not r for r in res["residuals"].values())


def test_schur_solution_at_time_one_is_todd():
    n = 2
    Rm = random_curvature(n, extra=4, seed=1)
    top = 6
    assert 4 in todd_series_of(Rm)
    P = schur_solution(Rm, top).at_t(1)
    z = (0,) * (3 * n)
    constant = KernelPoly(n, {k: c for k, c in P.terms.items() if k[1] == z})
    todd = KernelPoly(n)
    for pw, S in todd_series_of(Rm).items():
        if pw <= top:
            todd = todd + KernelPoly.from_form(n, S, pw)
    assert constant.terms == todd.terms
