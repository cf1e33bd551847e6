import pytest
import sympy as sp
from hypothesis import given, strategies as st

from heatcocycle.exactnum import Q
from heatcocycle.errors import ConfigError, MembershipError
from heatcocycle.formal import (FBElem, ad_exp_conjugate, dirichlet, exp_dirac_squared, exp_perturbed,
                                fb_mul, ordered_weight)
from heatcocycle.geometry import ConnectionData
from heatcocycle.opalg import PDOp, op_compose
from heatcocycle.phfun import PhFun


def F(f):
    return PDOp.function(f)


def test_conjugating_xi():
    s = ad_exp_conjugate(F(PhFun.xi(1, 0)), 1, 1, n_trunc=4)
    assert s.terms == {0: F(PhFun.xi(1, 0)), 1: PDOp.dx(1, 0)}


def test_conjugating_sin():
    s = ad_exp_conjugate(F(PhFun.sin(1, 0)), 1, 1, n_trunc=3)
    sin, cos = F(PhFun.sin(1, 0)), F(PhFun.cos(1, 0))
    assert s.terms[0] == sin
    assert s.terms[1] == cos * PDOp.dxi(1, 0)
    assert s.terms[2] == (sin * PDOp.dxi(1, 0, 2)).scale(Q(-1, 2))
    assert s.terms[3] == (cos * PDOp.dxi(1, 0, 3)).scale(Q(-1, 6))


def test_conjugating_the_identity():
    assert ad_exp_conjugate(PDOp.identity(2), 1, 1, 4).terms == {0: PDOp.identity(2)}


def test_heat_times_xi():
    X = fb_mul(FBElem.heat(1, 1, 4), F(PhFun.xi(1, 0)))
    assert X.payload == {0: F(PhFun.xi(1, 0)), 1: PDOp.dx(1, 0)}
    assert X.marker == 1


def test_unit():
    X = FBElem(2, {0: F(PhFun.sin(2, 0)) * PDOp.dxi(2, 1), 2: PDOp.dx(2, 0)}, 1, 6)
    assert fb_mul(X, PDOp.identity(2)) == X
    assert fb_mul(PDOp.identity(2), X) == X


def test_certificate_is_enforced():
    with pytest.raises(MembershipError):
        FBElem(1, {0: PDOp.dx(1, 0)}, 1, 4, cert=0)


def test_mismatched_truncation():
    with pytest.raises(ConfigError):
        fb_mul(FBElem.heat(1, 1, 4), FBElem.heat(1, 1, 5))


def test_empty_perturbation():
    assert exp_perturbed(1, {}, 2, 4) == FBElem.heat(2, 1, 4)


def _simplex_integral(exps):
    """Independent oracle by iterated integration over the simplex."""
    s = sp.symbols(f"s0:{len(exps)}", nonnegative=True)
    last = 1 - sum(s[:-1])
    expr = sp.Mul(*[v ** a for v, a in zip(s[:-1], exps[:-1])]) * last ** exps[-1]
    for k in reversed(range(len(exps) - 1)):
        expr = sp.integrate(expr, (s[k], 0, 1 - sum(s[:k])))
    return sp.Rational(expr)


@pytest.mark.parametrize("exps", [(1, 0), (0, 0), (2, 1), (1, 1, 1), (0, 2, 0, 1)])
def test_dirichlet_formula(exps):
    want = _simplex_integral(exps)
    assert dirichlet(exps) == Q(want.p, want.q)
    assert dirichlet((1, 0)) == Q(1, 2)


@pytest.mark.parametrize("ks", [(0,), (1,), (2, 0), (1, 3), (0, 1, 2)])
def test_ordered_weight(ks):
    t = sp.symbols(f"t0:{len(ks)}")
    expr = sp.Mul(*[v ** k for v, k in zip(t, ks)])
    for i in range(len(ks)):
        upper = t[i + 1] if i + 1 < len(ks) else 1
        expr = sp.integrate(expr, (t[i], 0, upper))
    want = sp.Rational(expr)
    assert ordered_weight(ks) == Q(want.p, want.q)


def test_dirac_heat_at_zero_and_flat():
    conn = ConnectionData.flat(1)
    X = exp_dirac_squared(0, conn, 4)
    assert X.marker == 0 and X.payload == {0: PDOp.identity(1)}
    Y = exp_dirac_squared(Q(1, 2), conn, 4)
    assert Y.marker == Q(1, 2) and Y.payload == {0: PDOp.identity(1)}


def test_dirac_heat_leading_coefficient():
    conn = ConnectionData.from_entries(2, [(0, 1, 0, PhFun.cos(2, 0))])
    X = exp_dirac_squared(1, conn, 4)
    assert X.payload[0] == PDOp.identity(2)


def test_commuting_perturbation_is_a_heat_factor():
    # exp(eps Delta + eps c Delta) = exp(c eps Delta) exp(eps Delta) as a payload series
    c = Q(2, 3)
    nt = 4
    X = exp_perturbed(1, {1: PDOp.laplacian(1).scale(c)}, 1, nt)
    power = PDOp.identity(1)
    fact = 1
    for k in range(nt + 1):
        assert X.payload.get(k, PDOp.zero(1)) == power.scale(c ** k / fact)
        power = op_compose(power, PDOp.laplacian(1))
        fact *= k + 1


perturbations = st.sampled_from([
    F(PhFun.xi(1, 0)) * PDOp.dxi(1, 0, 2),
    F(PhFun.cos(1, 0)) * PDOp.dxi(1, 0),
    F(PhFun.sin(1, 0) * PhFun.xi(1, 0)) * PDOp.dxi(1, 0, 2) + PDOp.dxi(1, 0),
    PDOp.psi(1, 0) * PDOp.dx(1, 0),
])


@given(perturbations, st.sampled_from([1, 2]))
def test_semigroup_property(T, e):
    # exp(1/2 (eps Delta + P))^2 = exp(eps Delta + P)
    nt = 5
    full = exp_perturbed(1, {e: T}, 1, nt)
    half = exp_perturbed(Q(1, 2), {e: T.scale(Q(1, 2))}, 1, nt)
    assert fb_mul(half, half) == full


@given(perturbations, perturbations, perturbations)
def test_bimodule_product_associative(a, b, c):
    nt = 4
    X = FBElem(1, {0: a}, Q(1, 2), nt)
    Y = FBElem(1, {1: b}, Q(1, 3), nt)
    Z = FBElem(1, {0: c}, 1, nt)
    assert fb_mul(fb_mul(X, Y), Z) == fb_mul(X, fb_mul(Y, Z))


def test_constants_are_central():
    half = Q(1, 2)
    X = FBElem(1, {0: PDOp.identity(1).scale(2)}, half, 4)
    Y = FBElem(1, {0: PDOp.identity(1).scale(3)}, half, 4)
    assert fb_mul(X, Y) == FBElem(1, {0: PDOp.identity(1).scale(6)}, 1, 4)
