import math

import pytest
from hypothesis import given

from heatcocycle.errors import ConfigError, OutOfRangeError
from heatcocycle.exactnum import EpsSeries, ExactScalar, Q, eps_coefficient, eps_mul, rational
from strategies import exact_scalars

PI = ExactScalar.pi_power(2)


def series(terms, top):
    return EpsSeries({k: Q(v) for k, v in terms.items()}, top)


def test_exponent_cancellation():
    assert eps_mul(series({-1: 1}, 2), series({1: 1}, 2)).terms == {0: 1}


def test_polynomial_square():
    out = eps_mul(series({0: 1, 1: 1}, 3), series({0: 1, 1: 1}, 3))
    assert out.terms == {0: 1, 1: 2, 2: 1}


def test_truncated_product_is_logged():
    out = eps_mul(series({-1: 1, 0: 1}, 1), series({1: 1}, 1), n_trunc=0)
    assert out.terms == {0: 1}
    assert out.n_trunc == 0
    assert any(k == 1 for k, _ in out.log)


def test_coefficient_reads():
    s = EpsSeries({-1: PI * 4, 0: ExactScalar.lift(7)}, 1, zero=ExactScalar())
    assert eps_coefficient(s, 0) == 7
    assert eps_coefficient(s, -1) == PI * 4
    assert eps_coefficient(s, 1) == 0
    with pytest.raises(OutOfRangeError):
        eps_coefficient(s, 2)


def test_mismatched_truncation():
    with pytest.raises(ConfigError):
        series({0: 1}, 1) + series({0: 1}, 2)
    with pytest.raises(ConfigError):
        eps_mul(series({0: 1}, 1), series({0: 1}, 1), n_trunc=2)


def test_canonical_text():
    v = ExactScalar({0: Q(1, 2), 6: Q(-3), 2: Q(4)})
    assert v.to_string() == "1/2 + 4*pi^(2/2) + -3*pi^(6/2)"
    assert ExactScalar().to_string() == "0"


def test_half_powers_multiply():
    root_pi = ExactScalar.pi_power(1)
    assert root_pi * root_pi == PI


def test_rational_coercion():
    assert rational("3/4") == Q(3, 4)
    assert rational(5) == Q(5)


@given(exact_scalars(), exact_scalars(), exact_scalars())
def test_ring_axioms(a, b, c):
    assert (a + b) + c == a + (b + c)
    assert a * (b + c) == a * b + a * c
    assert a * b == b * a
    assert a - a == ExactScalar()


@given(exact_scalars(), exact_scalars())
def test_float_is_a_homomorphism(a, b):
    assert math.isclose(float(a * b), float(a) * float(b), rel_tol=1e-9, abs_tol=1e-9)
    assert math.isclose(float(a + b), float(a) + float(b), rel_tol=1e-9, abs_tol=1e-9)


@given(exact_scalars())
def test_string_round_trip(a):
    assert ExactScalar.from_string(a.to_string()) == a


@given(exact_scalars(), exact_scalars())
def test_equal_values_hash_equal(a, b):
    if a == b:
        assert hash(a) == hash(b)
