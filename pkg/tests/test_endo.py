import numpy as np
from hypothesis import given, strategies as st

from heatcocycle.endo import (EndS, endo_compose, endo_matrix, endo_supertrace, matrix_sign,
                              matrix_supertrace)
from heatcocycle.exactnum import Q
from strategies import endos


def test_exterior_square():
    assert endo_compose(EndS.psi(2, 0), EndS.psi(2, 0)) == EndS(2)


def test_anticommutator_relation():
    one = EndS.identity(1)
    lhs = endo_compose(EndS.psibar(1, 0), EndS.psi(1, 0))
    assert lhs == one - EndS.word(1, (0,), (0,))
    # the same through the 2 x 2 matrix representation
    m = endo_matrix(EndS.psibar(1, 0)).dot(endo_matrix(EndS.psi(1, 0)))
    assert (m == endo_matrix(lhs)).all()


def test_number_operator_matrix():
    m = endo_matrix(EndS.word(1, (0,), (0,)))
    assert (m == np.array([[0, 0], [0, 1]], dtype=object)).all()


def test_supertrace_examples():
    assert endo_supertrace(EndS.word(1, (0,), (0,))) == 1
    assert endo_supertrace(EndS.identity(1)) == 0
    assert endo_supertrace(EndS.psi(1, 0)) == 0
    assert endo_supertrace(EndS.word(2, (0, 1), (0, 1), Q(3))) == 3


def test_canonical_anticommutators():
    n = 3
    for i in range(n):
        for j in range(n):
            a = endo_compose(EndS.psi(n, i), EndS.psibar(n, j)) + endo_compose(EndS.psibar(n, j), EndS.psi(n, i))
            assert a == (EndS.identity(n) if i == j else EndS(n))
            b = endo_compose(EndS.psi(n, i), EndS.psi(n, j)) + endo_compose(EndS.psi(n, j), EndS.psi(n, i))
            assert b == EndS(n)


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(endos(n), endos(n), endos(n))))
def test_composition_associative(abc):
    a, b, c = abc
    assert endo_compose(endo_compose(a, b), c) == endo_compose(a, endo_compose(b, c))


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(endos(n), endos(n))))
def test_matrix_representation_is_multiplicative(ab):
    a, b = ab
    assert (endo_matrix(endo_compose(a, b)) == endo_matrix(a).dot(endo_matrix(b))).all()


@given(st.integers(1, 3).flatmap(lambda n: st.tuples(endos(n), endos(n))))
def test_supertrace_vanishes_on_supercommutators(ab):
    a, b = ab
    if a.parity() is None or b.parity() is None:
        return
    sign = (-1) ** (a.parity() * b.parity())
    comm = endo_compose(a, b) - endo_compose(b, a) * sign
    assert endo_supertrace(comm) == 0


@given(st.integers(1, 3).flatmap(endos))
def test_normalized_and_matrix_supertraces_agree_up_to_sign(a):
    n = a.n
    assert matrix_supertrace(endo_matrix(a), n) == matrix_sign(n) * endo_supertrace(a)
