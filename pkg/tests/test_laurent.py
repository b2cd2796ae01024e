import pytest
import sympy
from hypothesis import given, strategies as st

from platjones.laurent import LaurentPolynomial as LP

A = sympy.Symbol("A")
polys = st.dictionaries(st.integers(-12, 12), st.integers(-9, 9), max_size=6).map(LP)


def to_sympy(p):
    return sum((c * A**e for e, c in p), sympy.Integer(0))


@given(polys, polys)
def test_ring_operations_match_sympy(p, q):
    assert sympy.expand(to_sympy(p * q) - to_sympy(p) * to_sympy(q)) == 0
    assert sympy.expand(to_sympy(p + q) - to_sympy(p) - to_sympy(q)) == 0
    assert sympy.expand(to_sympy(p - q) - to_sympy(p) + to_sympy(q)) == 0


@given(polys)
def test_no_zero_coefficients_stored(p):
    assert all(c != 0 for _, c in p)
    assert (p - p).is_zero()
    assert p - p == 0


@given(polys)
def test_json_round_trip(p):
    assert LP.from_json(p.to_json()) == p


@given(polys, st.integers(-5, 5))
def test_shift_and_substitution(p, k):
    assert p.shift(k) == p * LP.monomial(k)
    x = 0.7 + 0.2j
    assert abs(p.substitute_power(-1)(x) - p(1 / x)) <= 1e-9 * (1 + abs(p(1 / x)))


def test_powers():
    d = LP({2: -1, -2: -1})
    assert d**0 == 1
    assert d**2 == LP({4: 1, 0: 2, -4: 1})
    assert LP.monomial(3, -1) ** -2 == LP.monomial(-6)
    with pytest.raises(ValueError):
        d**-1


def test_format():
    p = LP({-4: 1, -12: 1, -16: -1})
    assert p.format("t", -4) == "t + t^3 - t^4"
    assert LP().format() == "0"
    assert LP({0: 1}).format("t", -4) == "1"
