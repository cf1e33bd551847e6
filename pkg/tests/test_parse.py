import pytest
from hypothesis import given, strategies as st

from heatcocycle.errors import ParseError
from heatcocycle.exactnum import Q
from heatcocycle.opalg import PDOp, op_text
from heatcocycle.parse import parse_function, parse_operator
from heatcocycle.phfun import PhFun, to_text
from strategies import operators, phfuns


def test_function_examples():
    n = 2
    f = parse_function("2*sin(x1)*xi1*q^-2 - 1/3*cos(2*x2)", n)
    want = PhFun.sin(n, 0) * PhFun.xi(n, 0) * PhFun.q(n, -2) * 2 - PhFun.cos(n, 1, 2) * Q(1, 3)
    assert f == want
    # q = |xi|, so xi1^2 = q^2 - xi2^2 in canonical form
    assert parse_function("xi1^2", n) == PhFun.q(n, 2) - PhFun.xi(n, 1, 2)


def test_operator_examples():
    n = 1
    D = parse_operator("sin(x1)*dxi1^2 + psi1*psibar1 - dx1*xi1", n)
    want = (PDOp.function(PhFun.sin(n, 0)) * PDOp.dxi(n, 0, 2) + PDOp.psi(n, 0) * PDOp.psibar(n, 0)
            - PDOp.dx(n, 0) * PDOp.function(PhFun.xi(n, 0)))
    assert D == want
    # operator products are compositions: dx1*sin(x1) = sin(x1)*dx1 + cos(x1)
    assert parse_operator("dx1*sin(x1)", n) == parse_operator("sin(x1)*dx1 + cos(x1)", n)


@pytest.mark.parametrize("text,pos,msg", [
    ("x1", 0, "x1 may only appear inside sin() or cos()"),
    ("sin(x1", 6, "expected ')'"),
    ("xi3", 0, "index 3 out of range 1..2"),
    ("1/xi1", 2, "only constants and powers of q can be inverted"),
    ("dxi1", 0, "unknown name 'dxi1'"),
])
def test_function_errors(text, pos, msg):
    with pytest.raises(ParseError) as info:
        parse_function(text, 2)
    assert info.value.pos == pos
    assert str(info.value).startswith(msg)


def test_non_string_input():
    with pytest.raises(ParseError):
        parse_function(3, 1)
    with pytest.raises(ParseError):
        parse_operator(None, 1)


@given(st.integers(1, 3).flatmap(lambda n: phfuns(n, max_terms=3)))
def test_function_text_round_trip(f):
    assert parse_function(to_text(f), f.n) == f


@given(st.integers(1, 2).flatmap(lambda n: operators(n, max_terms=3)))
def test_operator_text_round_trip(D):
    assert parse_operator(op_text(D), D.n) == D
