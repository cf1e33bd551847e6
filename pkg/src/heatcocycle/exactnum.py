"""Exact scalars in Q[pi^(1/2)] and truncated Laurent series in eps."""
from __future__ import annotations

import math
from typing import Any, Callable, Iterable

from .errors import ConfigError, OutOfRangeError

try:
    from gmpy2 import mpq as Q
except ImportError:  # pragma: no cover
    from fractions import Fraction as Q

ZERO = Q(0)
ONE = Q(1)


def rational(value) -> Any:
    """Coerce an int, Fraction, string "a/b" or mpq into the rational type."""
    if isinstance(value, str):
        num, _, den = value.partition("/")
        return Q(int(num), int(den or 1))
    if hasattr(value, "numerator") and hasattr(value, "denominator"):
        return Q(int(value.numerator), int(value.denominator))
    return Q(value)


def format_rational(c) -> str:
    c = rational(c)
    if c.denominator == 1:
        return str(int(c.numerator))
    return f"{int(c.numerator)}/{int(c.denominator)}"


class ExactScalar:
    """Finite sum of c_j * pi^(j/2) with rational c_j.

    ``coeffs`` maps the integer j (exponent of pi^(1/2)) to a nonzero rational.
    """

    __slots__ = ("coeffs", "_hash")

    def __init__(self, coeffs: dict | None = None):
        self.coeffs = {j: rational(c) for j, c in (coeffs or {}).items() if c != 0}
        self._hash = None

    @classmethod
    def lift(cls, value) -> "ExactScalar":
        if isinstance(value, ExactScalar):
            return value
        return cls({0: value})

    @classmethod
    def pi_power(cls, j: int, coeff=1) -> "ExactScalar":
        """coeff * pi^(j/2)."""
        return cls({j: coeff})

    def __add__(self, other):
        other = ExactScalar.lift(other)
        out = dict(self.coeffs)
        for j, c in other.coeffs.items():
            out[j] = out.get(j, ZERO) + c
        return ExactScalar(out)

    __radd__ = __add__

    def __neg__(self):
        return ExactScalar({j: -c for j, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-ExactScalar.lift(other))

    def __rsub__(self, other):
        return ExactScalar.lift(other) - self

    def __mul__(self, other):
        if not isinstance(other, ExactScalar):
            c0 = rational(other)
            return ExactScalar({j: c * c0 for j, c in self.coeffs.items()})
        out: dict = {}
        for j1, c1 in self.coeffs.items():
            for j2, c2 in other.coeffs.items():
                out[j1 + j2] = out.get(j1 + j2, ZERO) + c1 * c2
        return ExactScalar(out)

    __rmul__ = __mul__

    def __truediv__(self, other):
        c0 = rational(other)
        return ExactScalar({j: c / c0 for j, c in self.coeffs.items()})

    def __eq__(self, other):
        if isinstance(other, ExactScalar):
            return self.coeffs == other.coeffs
        try:
            return self.coeffs == ExactScalar.lift(other).coeffs
        except (TypeError, ValueError):
            return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(sorted(self.coeffs.items())))
        return self._hash

    def __bool__(self):
        return bool(self.coeffs)

    def is_rational(self) -> bool:
        return set(self.coeffs) <= {0}

    def rational_part(self):
        return self.coeffs.get(0, ZERO)

    def __float__(self):
        return float(sum(float(c) * math.pi ** (j / 2) for j, c in self.coeffs.items()))

    def to_string(self) -> str:
        """Canonical text: summands sorted by exponent, "c*pi^(j/2)" for j != 0."""
        if not self.coeffs:
            return "0"
        parts = []
        for j in sorted(self.coeffs):
            c = format_rational(self.coeffs[j])
            parts.append(c if j == 0 else f"{c}*pi^({j}/2)")
        return " + ".join(parts)

    def __repr__(self):
        return f"ExactScalar({self.to_string()})"

    __str__ = to_string

    @classmethod
    def from_string(cls, text: str) -> "ExactScalar":
        out: dict = {}
        for part in text.split(" + "):
            part = part.strip()
            if part == "0":
                continue
            if "*pi^(" in part:
                c, _, rest = part.partition("*pi^(")
                j = int(rest.split("/")[0])
            else:
                c, j = part, 0
            out[j] = out.get(j, ZERO) + rational(c)
        return cls(out)


def _is_zero(c) -> bool:
    try:
        return not c
    except TypeError:  # pragma: no cover
        return c == 0


class EpsSeries:
    """Truncated Laurent series sum_k c_k eps^k with k <= n_trunc.

    Coefficients may be any ring elements supporting +, * and truthiness
    (ExactScalar, rationals, operators).  Terms above ``n_trunc`` are dropped
    on construction and recorded in ``log`` as (exponent, note) pairs.
    """

    __slots__ = ("terms", "n_trunc", "log", "zero")

    def __init__(self, terms: dict, n_trunc: int, log: Iterable = (), zero=ZERO):
        kept = {}
        dropped = []
        for k, c in terms.items():
            if _is_zero(c):
                continue
            if k > n_trunc:
                dropped.append((k, "discarded above truncation order"))
            else:
                kept[k] = c
        self.terms = dict(sorted(kept.items()))
        self.n_trunc = n_trunc
        self.log = tuple(log) + tuple(sorted(dropped))
        self.zero = zero

    @property
    def lowest(self) -> int | None:
        return min(self.terms) if self.terms else None

    @property
    def coefficients(self) -> list:
        """Dense coefficient list from the lowest exponent up to n_trunc."""
        if not self.terms:
            return []
        return [self.terms.get(k, self.zero) for k in range(self.lowest, self.n_trunc + 1)]

    def coefficient(self, k: int):
        return eps_coefficient(self, k)

    def __add__(self, other: "EpsSeries") -> "EpsSeries":
        _check_trunc(self, other)
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return EpsSeries(out, self.n_trunc, self.log + other.log, self.zero)

    def __neg__(self):
        return EpsSeries({k: -c for k, c in self.terms.items()}, self.n_trunc, self.log, self.zero)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, EpsSeries):
            return eps_mul(self, other)
        return EpsSeries({k: c * other for k, c in self.terms.items()}, self.n_trunc, self.log, self.zero)

    def scale(self, c):
        return EpsSeries({k: v * c for k, v in self.terms.items()}, self.n_trunc, self.log, self.zero)

    def shift(self, j: int) -> "EpsSeries":
        """Multiply by eps^j."""
        return EpsSeries({k + j: c for k, c in self.terms.items()}, self.n_trunc, self.log, self.zero)

    def map(self, fn: Callable, zero=None) -> "EpsSeries":
        return EpsSeries({k: fn(c) for k, c in self.terms.items()}, self.n_trunc, self.log,
                         self.zero if zero is None else zero)

    def __eq__(self, other):
        if not isinstance(other, EpsSeries):
            return NotImplemented
        return self.terms == other.terms and self.n_trunc == other.n_trunc

    def __repr__(self):
        body = " + ".join(f"({c})*eps^{k}" for k, c in self.terms.items()) or "0"
        return f"EpsSeries({body}; N={self.n_trunc})"


def _check_trunc(a: EpsSeries, b: EpsSeries):
    if a.n_trunc != b.n_trunc:
        raise ConfigError(f"mismatched truncation orders {a.n_trunc} and {b.n_trunc}")


def eps_mul(a: EpsSeries, b: EpsSeries, n_trunc: int | None = None) -> EpsSeries:
    """Cauchy product, truncated at the shared truncation order or at an explicit lower one."""
    if n_trunc is None:
        _check_trunc(a, b)
        n_trunc = a.n_trunc
    elif n_trunc > min(a.n_trunc, b.n_trunc):
        raise ConfigError(f"cannot truncate a product at eps^{n_trunc} above its factors' orders")
    out: dict = {}
    dropped = []
    for k1, c1 in a.terms.items():
        for k2, c2 in b.terms.items():
            k = k1 + k2
            if k > n_trunc:
                dropped.append((k, "product term above truncation order"))
                continue
            p = c1 * c2
            out[k] = out[k] + p if k in out else p
    return EpsSeries(out, n_trunc, a.log + b.log + tuple(sorted(set(dropped))), a.zero)


def eps_coefficient(a: EpsSeries, k: int):
    """Exact coefficient of eps^k; asking beyond n_trunc is an error."""
    if k > a.n_trunc:
        raise OutOfRangeError(f"coefficient of eps^{k} requested but series is certified only up to eps^{a.n_trunc}")
    return a.terms.get(k, a.zero)
