import itertools

import pytest
from hypothesis import given, strategies as st

from heatcocycle.errors import DomainError, TruncationError
from heatcocycle.exactnum import ExactScalar, Q
from heatcocycle.formal import FBElem
from heatcocycle.opalg import PDOp
from heatcocycle.parse import parse_operator
from heatcocycle.trace import (block_contraction, certified_order, contract, kernel_contraction,
                               supertrace, supertrace_series, trace, trace_F, truncation_audit)


def _pi(c, j):
    return ExactScalar({j: Q(c)})


@pytest.mark.parametrize("n", [1, 2])
def test_block_and_kernel_contractions_agree(n):
    idx = list(itertools.product(range(4), repeat=n))
    for a in idx:
        for b in idx:
            block = block_contraction(a, b)
            kernel = kernel_contraction(a, b)
            assert kernel == ({} if block is None else {block[1]: block[0]})


def test_contraction_examples():
    assert contract(PDOp.identity(1)).terms == {-1: PDOp.identity(1)}
    assert contract(PDOp.identity(2)).terms == {-2: PDOp.identity(2)}
    assert contract(PDOp.dx(1, 0) * PDOp.dxi(1, 0)).terms == {-2: PDOp.identity(1).scale(-1)}
    assert not contract(PDOp.dxi(1, 0)).terms


@given(st.tuples(st.integers(0, 3), st.integers(0, 3)))
def test_second_derivative_contraction(ab):
    a, b = ab
    r = block_contraction((a,), (b,))
    if a != b:
        assert r is None
    else:
        sign = (-1) ** a
        fact = 1
        for k in range(1, a + 1):
            fact *= k
        assert r == (Q(sign * fact), -a - 1)


def _element(n, k, text):
    D = parse_operator(text, n)
    cert = FBElem(n, {k: D}, 1, 10 ** 6).cert
    return FBElem(n, {k: D}, 1, 4 * n + cert)


def test_trace_of_inverse_norm():
    # two points of S^0 times a circle of length 2 pi
    assert trace_F(_element(1, 0, "q^-1")).terms == {-1: _pi(4, 2)}
    assert trace(_element(1, 1, "q^-1")) == _pi(4, 2)


def test_trace_ignores_the_wrong_degree():
    assert not trace_F(_element(2, 0, "q^-1")).terms
    assert not trace_F(_element(1, 0, "1")).terms
    assert not trace_F(_element(1, 0, "sin(x1)*q^-1")).terms


def test_supertrace_examples():
    assert supertrace(_element(1, 1, "q^-1*psi1*psibar1")) == _pi(4, 2)
    assert supertrace(_element(1, 1, "q^-1")) == ExactScalar()
    # circle of length 2 pi on S^1, torus volume 4 pi^2
    assert supertrace(_element(2, 2, "q^-2*psi1*psi2*psibar1*psibar2")) == _pi(8, 6)


def test_trace_rejects_words_and_markers():
    with pytest.raises(DomainError):
        trace_F(_element(1, 1, "q^-1*psi1*psibar1"))
    X = FBElem(1, {1: parse_operator("q^-1", 1)}, Q(1, 2), 10)
    with pytest.raises(DomainError):
        supertrace_series(X)


def test_truncation_audit():
    D = parse_operator("q^-1*psi1*psibar1", 1)
    cert = FBElem(1, {1: D}, 1, 10 ** 6).cert
    assert certified_order(1, cert, 4 + cert) == 0
    low = FBElem(1, {1: D}, 1, 1, cert=0)
    assert not truncation_audit(1, 0, 1)["ok"]
    with pytest.raises(TruncationError):
        supertrace(low)
    # the series itself is still available, with an honest top order
    assert supertrace_series(low).n_trunc == certified_order(1, 0, 1) < 0
