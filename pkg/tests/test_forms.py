import random

import pytest
import sympy as sp
from hypothesis import given, settings, strategies as st

from heatcocycle.exactnum import Q
from heatcocycle.forms import (Form, bernoulli, curvature_matrix, exterior_derivative, scaled_todd_series,
                               todd_form, todd_series, trace_form, wedge)
from heatcocycle.geometry import ConnectionData, curvature, random_connection
from heatcocycle.phfun import PhFun
from heatcocycle.samples import connection_c1, connection_c2
from strategies import phfuns


def test_bernoulli_numbers():
    for m in range(12):
        b = sp.bernoulli(m)
        if m == 1:
            b = sp.Rational(-1, 2)  # sympy >= 1.12 uses B_1 = +1/2
        assert bernoulli(m) == Q(b.p, b.q)


def test_todd_series_against_sympy():
    x = sp.symbols("x")
    ser = sp.series(x / (sp.exp(x) - 1), x, 0, 9).removeO()
    for k, c in enumerate(todd_series(8)):
        want = ser.coeff(x, k)
        assert c == Q(want.p, want.q)
    assert scaled_todd_series(3, 2) == [Q(1), Q(-1), Q(1, 3), Q(0)]


def test_flat_todd_form_is_one():
    assert todd_form(curvature(ConnectionData.flat(2))) == Form.const(2)


@pytest.mark.parametrize("make", [connection_c1, connection_c2])
def test_todd_form_in_two_dimensions(make):
    # det(1 - R/2 + ...) in two dimensions is 1 - tr(R)/2
    R = curvature(make())
    T = todd_form(R)
    assert T.degrees() <= {0, 2}
    assert T.degree_part(0) == Form.const(2)
    assert T.degree_part(2) == trace_form(curvature_matrix(R)) * Q(-1, 2)
    assert not exterior_derivative(T)


def test_todd_form_example():
    T = todd_form(curvature(connection_c2()))
    half = Q(1, 2)
    want = (PhFun.sin(2, 0) + PhFun.sin(2, 0) * PhFun.cos(2, 1)) * half
    assert T.coefficient((0, 1)) == want


@settings(max_examples=6)
@given(st.integers(0, 10 ** 6))
def test_todd_form_closed_in_three_dimensions(seed):
    T = todd_form(curvature(random_connection(random.Random(seed), 3, density=0.3)))
    assert not exterior_derivative(T)


def forms(n):
    gens = st.lists(st.integers(0, 2 * n - 1), max_size=3, unique=True).map(lambda g: tuple(sorted(g)))
    return st.lists(st.tuples(gens, phfuns(n, max_terms=2)), max_size=2).map(
        lambda ts: sum((Form(n, {g: f}) for g, f in ts), Form(n)))


@given(forms(2))
def test_d_squared_vanishes(a):
    assert not exterior_derivative(exterior_derivative(a))


@given(forms(2), forms(2))
def test_d_is_a_graded_derivation(a, b):
    for part in a.degrees():
        ap = a.degree_part(part)
        lhs = exterior_derivative(wedge(ap, b))
        rhs = wedge(exterior_derivative(ap), b) + wedge(ap, exterior_derivative(b)) * (-1) ** part
        assert lhs == rhs


@given(forms(1), forms(1), forms(1))
def test_wedge_associative(a, b, c):
    assert wedge(wedge(a, b), c) == wedge(a, wedge(b, c))
