import random

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from heatcocycle.errors import DomainError
from heatcocycle.exactnum import ExactScalar, Q
from heatcocycle.geometry import ConnectionData
from heatcocycle.jlo import (cyclic_residual, dR_cocycle, dR_family, jlo_component, naive_jlo_component,
                             splus, sminus)
from heatcocycle.phfun import PhFun
from heatcocycle.samples import (connection_c1, connection_c2, connection_n1, degree_zero_function,
                                 n1_tuples, n2_p1_tuples, n2_p3_tuples)

ZERO = ExactScalar()


def pi_power(c, k):
    return ExactScalar({2 * k: Q(c)})


def _circle_oracle(a0, a1):
    """Quadrature of a0 da1 over the two components of the cosphere bundle of the circle.

    The periodic trapezoid rule is exact for the trig polynomials used here.
    """
    xs = np.linspace(0, 2 * np.pi, 64, endpoint=False)
    g = a0 * a1.dx(0)
    plus = sum(g((x,), (1.0,)) for x in xs) * 2 * np.pi / len(xs)
    minus = sum(g((x,), (-1.0,)) for x in xs) * 2 * np.pi / len(xs)
    return minus - plus


@pytest.mark.parametrize("k", range(6))
def test_circle_de_rham_against_quadrature(k):
    a0, a1 = n1_tuples()[k]
    assert float(dR_cocycle(1, [a0, a1], ConnectionData.flat(1))) == pytest.approx(_circle_oracle(a0, a1), abs=1e-9)


def test_winding_example():
    n = 1
    a = [splus(n) * PhFun.sin(n, 0), splus(n) * PhFun.cos(n, 0)]
    for conn in (ConnectionData.flat(1), connection_n1()):
        assert jlo_component(1, a, conn) == pi_power(1, 1)
        assert dR_cocycle(1, a, conn) == pi_power(1, 1)
    assert naive_jlo_component(1, a, connection_n1()) == ZERO


@pytest.mark.parametrize("k", range(6))
def test_circle_jlo_matches_de_rham(k):
    a = n1_tuples()[k]
    assert jlo_component(1, a, connection_n1()) == dR_cocycle(1, a, connection_n1())


def test_constants_give_zero():
    one = PhFun.const(1)
    assert jlo_component(1, [one, one], ConnectionData.flat(1)) == ZERO
    a0 = splus(1) * PhFun.sin(1, 0)
    assert jlo_component(1, [a0, PhFun.const(1, 3)], connection_n1()) == ZERO
    assert naive_jlo_component(1, [a0, PhFun.const(1, 3)], connection_n1()) == ZERO


def test_components_above_the_dimension_vanish():
    rng = random.Random(3)
    a = [degree_zero_function(rng, 1) for _ in range(4)]
    assert jlo_component(3, a, connection_n1()) == ZERO
    assert dR_cocycle(3, a, connection_n1()) == ZERO


def test_naive_degree_zero_component():
    a0 = sminus(1) * PhFun.cos(1, 0, 2) + splus(1)
    # on the circle the Todd form has no 1-form part to pair with a0
    assert naive_jlo_component(0, [a0], connection_n1()) == ZERO


def test_surface_examples():
    want = {
        "flat": [ZERO, ZERO, ZERO],
        "c1": [pi_power(1, 3), pi_power(Q(-1, 2), 3), ZERO],
        "c2": [pi_power(1, 3), pi_power(Q(-1, 2), 3), pi_power(Q(1, 2), 3)],
    }
    conns = {"flat": ConnectionData.flat(2), "c1": connection_c1(), "c2": connection_c2()}
    for name, conn in conns.items():
        for a, w in zip(n2_p1_tuples(), want[name]):
            assert dR_cocycle(1, a, conn) == w
            assert jlo_component(1, a, conn) == w
        assert dR_cocycle(3, n2_p3_tuples()[0], conn) == pi_power(Q(-1, 6), 3)


def test_surface_p3_jlo():
    assert jlo_component(3, n2_p3_tuples()[0], connection_c1()) == pi_power(Q(-1, 6), 3)


def test_argument_validation():
    conn = ConnectionData.flat(1)
    with pytest.raises(DomainError):
        jlo_component(2, [PhFun.const(1)] * 3, conn)
    with pytest.raises(DomainError):
        jlo_component(1, [PhFun.const(1)] * 3, conn)
    with pytest.raises(DomainError):
        jlo_component(1, [PhFun.const(1), PhFun.xi(1, 0)], conn)
    with pytest.raises(DomainError):
        dR_cocycle(1, [PhFun.const(1), PhFun.sin(1, 0) * PhFun.q(1, -1)], conn)


@settings(max_examples=15)
@given(st.integers(0, 10 ** 6), st.integers(1, 2))
def test_de_rham_cocycle_identity(seed, p):
    rng = random.Random(seed)
    conn = connection_n1() if p == 1 else connection_c1()
    n = conn.n
    args = [degree_zero_function(rng, n) for _ in range(p + 1)]
    assert cyclic_residual(dR_family(conn), args, PhFun.const(n)) == ZERO
