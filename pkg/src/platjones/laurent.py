"""Exact Laurent polynomials in one variable with integer coefficients."""

from __future__ import annotations

import json
from fractions import Fraction
from typing import Iterable, Mapping

__all__ = ["LaurentPolynomial"]


class LaurentPolynomial:
    """Integer Laurent polynomial ``sum c_e x**e`` stored as ``{e: c}``.

    Zero coefficients are never stored; instances are immutable and hashable.
    Python ints keep all arithmetic exact.
    """

    __slots__ = ("_terms", "_hash")

    def __init__(self, terms: Mapping[int, int] | Iterable[tuple[int, int]] = ()):
        items = terms.items() if isinstance(terms, Mapping) else terms
        acc: dict[int, int] = {}
        for e, c in items:
            if int(c) != c:
                raise TypeError(f"coefficient {c!r} is not an integer")
            e = int(e)
            acc[e] = acc.get(e, 0) + int(c)
        self._terms = {e: c for e, c in sorted(acc.items()) if c}
        self._hash = None

    @classmethod
    def monomial(cls, exponent: int, coeff: int = 1) -> LaurentPolynomial:
        return cls({exponent: coeff})

    @classmethod
    def constant(cls, c: int) -> LaurentPolynomial:
        return cls({0: c})

    @property
    def terms(self) -> dict[int, int]:
        return dict(self._terms)

    def exponents(self) -> list[int]:
        return list(self._terms)

    def is_zero(self) -> bool:
        return not self._terms

    def min_degree(self) -> int:
        return min(self._terms) if self._terms else 0

    def max_degree(self) -> int:
        return max(self._terms) if self._terms else 0

    def __getitem__(self, e: int) -> int:
        return self._terms.get(e, 0)

    def __iter__(self):
        return iter(self._terms.items())

    def __len__(self):
        return len(self._terms)

    def __eq__(self, other):
        if isinstance(other, int):
            other = LaurentPolynomial.constant(other)
        if not isinstance(other, LaurentPolynomial):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(tuple(self._terms.items()))
        return self._hash

    @staticmethod
    def _coerce(x) -> LaurentPolynomial:
        if isinstance(x, LaurentPolynomial):
            return x
        if isinstance(x, int):
            return LaurentPolynomial.constant(x)
        raise TypeError(f"cannot combine LaurentPolynomial with {type(x).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        acc = dict(self._terms)
        for e, c in other._terms.items():
            acc[e] = acc.get(e, 0) + c
        return LaurentPolynomial(acc)

    __radd__ = __add__

    def __neg__(self):
        return LaurentPolynomial({e: -c for e, c in self._terms.items()})

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        acc: dict[int, int] = {}
        for e1, c1 in self._terms.items():
            for e2, c2 in other._terms.items():
                acc[e1 + e2] = acc.get(e1 + e2, 0) + c1 * c2
        return LaurentPolynomial(acc)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            if len(self._terms) != 1:
                raise ValueError("only monomials have Laurent inverses")
            (e, c), = self._terms.items()
            if c not in (1, -1):
                raise ValueError("inverse needs a unit coefficient")
            return LaurentPolynomial({-e * (-k): c ** (-k)})
        result = LaurentPolynomial.constant(1)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def shift(self, k: int) -> LaurentPolynomial:
        """Multiply by ``x**k``."""
        return LaurentPolynomial({e + k: c for e, c in self._terms.items()})

    def substitute_power(self, m: int) -> LaurentPolynomial:
        """Replace ``x`` by ``x**m``."""
        return LaurentPolynomial({e * m: c for e, c in self._terms.items()})

    def __call__(self, x: complex) -> complex:
        return sum(c * x**e for e, c in self._terms.items()) if self._terms else 0

    def to_json(self) -> str:
        return json.dumps({str(e): c for e, c in self._terms.items()})

    @classmethod
    def from_json(cls, text: str) -> LaurentPolynomial:
        return cls({int(e): int(c) for e, c in json.loads(text).items()})

    def format(self, var: str = "A", denom: int = 1) -> str:
        """Human-readable form; exponents are divided by ``denom``
        (use ``var="t", denom=-4`` to print a bracket-variable polynomial in t)."""
        if not self._terms:
            return "0"
        items = sorted(self._terms.items(), key=lambda ec: Fraction(ec[0], denom))
        parts = []
        for e, c in items:
            exp = Fraction(e, denom)
            if exp == 0:
                mono = ""
            elif exp == 1:
                mono = var
            else:
                mono = f"{var}^{exp}" if exp.denominator == 1 else f"{var}^({exp})"
            mag = abs(c)
            body = f"{mag}" if not mono else (mono if mag == 1 else f"{mag}*{mono}")
            sign = "-" if c < 0 else "+"
            parts.append((sign, body))
        first_sign, first = parts[0]
        out = ("-" if first_sign == "-" else "") + first
        for sign, body in parts[1:]:
            out += f" {sign} {body}"
        return out

    def __repr__(self):
        return f"LaurentPolynomial({self._terms!r})"

    def __str__(self):
        return self.format("A")
