import math
import random

import pytest
import sympy as sp
from hypothesis import given, strategies as st

from heatcocycle.exactnum import ExactScalar, Q
from heatcocycle.phfun import (PhFun, ph_derivative, ph_homog_component, sphere_integral,
                               sphere_monomial, to_text)
from strategies import phfuns

PI = ExactScalar.pi_power(2)


def point(rng, n):
    x = [rng.uniform(0, 6.3) for _ in range(n)]
    xi = [rng.choice([-1, 1]) * rng.uniform(0.5, 3) for _ in range(n)]
    return x, xi


def test_dxi_of_q():
    for n in (1, 2, 3):
        assert ph_derivative(PhFun.q(n), "xi", 0) == PhFun.xi(n, 0) * PhFun.q(n, -1)


def test_dx_of_sin():
    assert ph_derivative(PhFun.sin(1, 0), "x", 0) == PhFun.cos(1, 0)


def test_quotient_rule_with_circle_reduction():
    f = PhFun.xi(1, 0) * PhFun.q(1, -2)
    d = ph_derivative(f, "xi", 0)
    assert d == -PhFun.q(1, -2)
    for xi in (2.0, -2.0, 3.0, -3.0):
        assert math.isclose(d([0.0], [xi]), -1 / xi ** 2)


def test_circle_reduction_xi_squared_is_q_squared():
    assert PhFun.xi(1, 0) * PhFun.xi(1, 0) == PhFun.q(1, 2)


def test_homogeneous_components():
    f = PhFun.q(2, -1) + PhFun.xi(2, 0)
    assert ph_homog_component(f, -1) == PhFun.q(2, -1)
    assert ph_homog_component(f, 0) == PhFun.zero(2)


@given(phfuns(2), st.integers(-3, 2))
def test_euler_operator_on_components(f, k):
    g = ph_homog_component(f, k)
    assert g.euler() == g * k


def test_sphere_integral_examples():
    assert sphere_integral(PhFun.q(1, -1)) == PI * 4
    assert sphere_integral(PhFun.q(2, -2)) == ExactScalar.pi_power(6, 8)
    assert sphere_integral(PhFun.q(2, -1) + PhFun.xi(2, 1)) == ExactScalar()


def test_trig_part_integrates_to_zero():
    assert sphere_integral(PhFun.cos(2, 0) * PhFun.q(2, -2)) == ExactScalar()


def _sympy_sphere(beta):
    """Independent oracle: integrate the monomial over the unit sphere in spherical coordinates."""
    n = len(beta)
    th, ph = sp.symbols("theta phi", real=True)
    if n == 1:
        return sum(s ** beta[0] for s in (1, -1))
    if n == 2:
        return sp.integrate(sp.cos(th) ** beta[0] * sp.sin(th) ** beta[1], (th, 0, 2 * sp.pi))
    xs = (sp.sin(th) * sp.cos(ph), sp.sin(th) * sp.sin(ph), sp.cos(th))
    integrand = sp.Mul(*[x ** b for x, b in zip(xs, beta)]) * sp.sin(th)
    return sp.integrate(sp.integrate(integrand, (ph, 0, 2 * sp.pi)), (th, 0, sp.pi))


# frozen from the oracle above
SPHERE_TABLE = {
    (0,): "2", (2,): "2",
    (0, 0): "2*pi^(2/2)", (2, 0): "1*pi^(2/2)", (2, 2): "1/4*pi^(2/2)", (4, 0): "3/4*pi^(2/2)",
    (0, 0, 0): "4*pi^(2/2)", (2, 0, 0): "4/3*pi^(2/2)", (2, 2, 0): "4/15*pi^(2/2)",
    (2, 2, 2): "4/105*pi^(2/2)",
}


@pytest.mark.parametrize("beta", [(0,), (1,), (2,), (0, 0), (1, 0), (2, 0), (2, 2), (4, 0), (3, 1),
                                  (0, 0, 0), (2, 0, 0), (2, 2, 0), (1, 1, 0), (2, 2, 2)])
def test_sphere_monomial_against_sympy(beta):
    got = float(sphere_monomial(beta))
    want = float(_sympy_sphere(beta))
    assert math.isclose(got, want, abs_tol=1e-12)
    if beta in SPHERE_TABLE:
        assert sphere_monomial(beta).to_string() == SPHERE_TABLE[beta]


@given(phfuns(2), phfuns(2), st.integers(0, 10 ** 6))
def test_multiplication_matches_pointwise(f, g, seed):
    x, xi = point(random.Random(seed), 2)
    assert math.isclose((f * g)(x, xi), f(x, xi) * g(x, xi), rel_tol=1e-9, abs_tol=1e-9)


@given(phfuns(2), phfuns(2))
def test_leibniz(f, g):
    for i in range(2):
        assert (f * g).dx(i) == f.dx(i) * g + f * g.dx(i)
        assert (f * g).dxi(i) == f.dxi(i) * g + f * g.dxi(i)


@given(phfuns(2), st.integers(0, 10 ** 6))
def test_xi_derivative_matches_finite_difference(f, seed):
    x, xi = point(random.Random(seed), 2)
    h = 1e-6
    for j in range(2):
        up = list(xi)
        dn = list(xi)
        up[j] += h
        dn[j] -= h
        fd = (f(x, up) - f(x, dn)) / (2 * h)
        assert math.isclose(f.dxi(j)(x, xi), fd, rel_tol=1e-4, abs_tol=1e-4)


@given(phfuns(3, max_beta=1))
def test_three_variables_associative(f):
    g = PhFun.xi(3, 2) * PhFun.q(3, -1) + PhFun.cos(3, 1)
    h = PhFun.sin(3, 0, 2) * PhFun.xi(3, 0)
    assert (f * g) * h == f * (g * h)


def test_text_form():
    f = PhFun.sin(2, 0) * PhFun.xi(2, 0) * PhFun.q(2, -2) * 2 - PhFun.cos(2, 1, 2) * Q(1, 3)
    assert to_text(f) == "2*sin(x1)*xi1*q^-2 - 1/3*cos(2*x2)"
