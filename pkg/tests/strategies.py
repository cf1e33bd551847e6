"""Hypothesis strategies for the engine's value types."""
from hypothesis import strategies as st

from heatcocycle.endo import EndS
from heatcocycle.exactnum import ExactScalar, Q
from heatcocycle.opalg import PDOp
from heatcocycle.phfun import PhFun

small_int = st.integers(-3, 3)
rationals = st.builds(lambda a, b: Q(a, b), st.integers(-5, 5), st.integers(1, 4))


def exact_scalars():
    return st.dictionaries(st.integers(-2, 6), rationals, max_size=3).map(ExactScalar)


def monomials(n, max_beta=2, degrees=(-3, 2)):
    trig = st.tuples(*[st.integers(-2, 2)] * n)
    beta = st.tuples(*[st.integers(0, max_beta)] * n)
    deg = st.integers(*degrees)
    return st.tuples(trig, beta, deg).map(lambda t: (t[0], t[1], sum(t[1]) - t[2]))


def phfuns(n, max_terms=3, **kw):
    return st.lists(st.tuples(monomials(n, **kw), rationals), max_size=max_terms).map(
        lambda items: sum((PhFun.monomial(n, t, b, m, c) for (t, b, m), c in items), PhFun.zero(n)))


def words(n):
    sub = st.lists(st.integers(0, n - 1), unique=True, max_size=n).map(lambda l: tuple(sorted(l)))
    return st.tuples(sub, sub)


def endos(n, max_terms=3):
    return st.lists(st.tuples(words(n), rationals), max_size=max_terms).map(
        lambda items: sum((EndS.word(n, mu, nu, c) for (mu, nu), c in items), EndS(n)))


def operators(n, max_terms=2, max_deriv=1, with_words=True, **kw):
    deriv = st.tuples(*[st.integers(0, max_deriv)] * n)
    w = words(n) if with_words else st.just(((), ()))
    term = st.tuples(phfuns(n, max_terms=2, **kw), w, deriv, deriv)
    return st.lists(term, max_size=max_terms).map(
        lambda items: sum((PDOp.function(f) * PDOp.endo(EndS.word(n, mu, nu)) * PDOp.derivative(n, a, b)
                           for f, (mu, nu), a, b in items), PDOp.zero(n)))
