"""Exact Kauffman bracket and Jones polynomial of plat-closed braids.

The bracket is a plain state sum: every crossing is resolved both ways and
loops of each resolved diagram are counted with a union-find, so a word
with c crossings costs 2**c leaves. This is the slow, trusted route that
the path model is checked against.

Conventions (shared with :mod:`platjones.pathmodel`):

* ``A = i exp(-i pi / 2k)``, so ``A**-4 = omega = exp(2 pi i / k)`` and the
  loop value ``d = -A**2 - A**-2 = 2 cos(pi / k)``.
* A positive letter sigma_i contributes ``A`` for its vertical (identity)
  smoothing and ``A**-1`` for its cap-cup smoothing.
* ``V = (-A)**(-3w) <L>`` with ``<unknot> = 1``, read in ``t = A**-4``.
"""

from __future__ import annotations

import cmath
import math
import os
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .braid import BraidWord, Token, _tokens, crossing_signs, plat_components, trace_loops
from .laurent import LaurentPolynomial

__all__ = [
    "OracleBudgetError",
    "RootOfUnity",
    "DEFAULT_ORACLE_BUDGET",
    "oracle_budget",
    "loop_value",
    "kauffman_bracket",
    "bracket_state_count",
    "jones_oracle",
    "writhe_factor",
    "evaluate_at",
    "evaluate_at_A",
    "skein_polynomials",
    "skein_residual",
    "skein_residual_polynomial",
    "to_t_exponents",
]

DEFAULT_ORACLE_BUDGET = 24
BUDGET_ENV = "PLATJONES_ORACLE_BUDGET"


class OracleBudgetError(RuntimeError):
    """The state sum would exceed the crossing budget."""


def oracle_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None:
        return DEFAULT_ORACLE_BUDGET
    try:
        return int(raw)
    except ValueError:
        raise OracleBudgetError(f"{BUDGET_ENV}={raw!r} is not an integer") from None


@dataclass(frozen=True)
class RootOfUnity:
    k: int

    def __post_init__(self):
        if self.k < 3:
            raise ValueError(f"root order k must be >= 3, got {self.k}")

    @property
    def omega(self) -> complex:
        return cmath.exp(2j * math.pi / self.k)

    @property
    def A(self) -> complex:
        return self.A_power(1)

    @property
    def d(self) -> float:
        return 2 * math.cos(math.pi / self.k)

    def A_power(self, e: int) -> complex:
        # A = exp(i pi (k-1) / 2k); reduce the angle exactly before exponentiating
        r = (e * (self.k - 1)) % (4 * self.k)
        return cmath.exp(1j * math.pi * r / (2 * self.k))


def loop_value() -> LaurentPolynomial:
    """``d = -A**2 - A**-2`` as a Laurent polynomial in A."""
    return LaurentPolynomial({2: -1, -2: -1})


# ---------------------------------------------------------------------------
# state sum


class _RollbackUnionFind:
    __slots__ = ("parent", "size", "history")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n
        self.history: list[tuple[int, int]] = []

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]
        self.history.append((ra, rb))
        return True

    def rollback(self, mark: int):
        while len(self.history) > mark:
            ra, rb = self.history.pop()
            self.parent[rb] = rb
            self.size[ra] -= self.size[rb]


def _state_counts(strands: int, tokens: Sequence[Token]) -> tuple[dict[tuple[int, int], int], int]:
    """Histogram ``{(A-exponent, loops): multiplicity}`` over all resolutions.

    Returns the histogram and the number of leaves visited.
    """
    m = strands
    L = len(tokens)

    def seg(c, p):
        return c * m + p

    base = _RollbackUnionFind(m * (L + 1))
    for p in range(0, m, 2):
        base.union(seg(0, p), seg(0, p + 1))
        base.union(seg(L, p), seg(L, p + 1))
    choices = []
    for c, (q, kind) in enumerate(tokens):
        for p in range(m):
            if p != q and p != q + 1:
                base.union(seg(c, p), seg(c + 1, p))
        vertical = ((seg(c, q), seg(c + 1, q)), (seg(c, q + 1), seg(c + 1, q + 1)))
        horizontal = ((seg(c, q), seg(c, q + 1)), (seg(c + 1, q), seg(c + 1, q + 1)))
        if kind == 0:
            for a, b in horizontal:
                base.union(a, b)
        else:
            choices.append((kind, vertical, horizontal))

    # contract the fixed part of the diagram
    roots = {}
    for x in range(m * (L + 1)):
        roots.setdefault(base.find(x), len(roots))
    n_nodes = len(roots)
    reduced = [
        (kind, tuple((roots[base.find(a)], roots[base.find(b)]) for a, b in vert),
         tuple((roots[base.find(a)], roots[base.find(b)]) for a, b in hor))
        for kind, vert, hor in choices
    ]

    uf = _RollbackUnionFind(n_nodes)
    counts: dict[tuple[int, int], int] = {}
    leaves = 0

    def walk(i: int, exponent: int, merged: int):
        nonlocal leaves
        if i == len(reduced):
            key = (exponent, n_nodes - merged)
            counts[key] = counts.get(key, 0) + 1
            leaves += 1
            return
        kind, vert, hor = reduced[i]
        for pairs, w in ((vert, kind), (hor, -kind)):
            mark = len(uf.history)
            extra = 0
            for a, b in pairs:
                extra += uf.union(a, b)
            walk(i + 1, exponent + w, merged + extra)
            uf.rollback(mark)

    walk(0, 0, 0)
    return counts, leaves


def _check_budget(n_crossings: int, budget: int | None):
    budget = oracle_budget() if budget is None else budget
    if n_crossings > budget:
        raise OracleBudgetError(
            f"oracle budget exceeded: {n_crossings} crossings > budget {budget} "
            f"(2^{n_crossings} states); raise it with {BUDGET_ENV} or --budget"
        )


def _bracket_from_counts(counts) -> LaurentPolynomial:
    d = loop_value()
    powers: dict[int, LaurentPolynomial] = {}
    total = LaurentPolynomial()
    by_loops: dict[int, dict[int, int]] = {}
    for (e, loops), mult in counts.items():
        acc = by_loops.setdefault(loops, {})
        acc[e] = acc.get(e, 0) + mult
    for loops, terms in by_loops.items():
        if loops - 1 not in powers:
            powers[loops - 1] = d ** (loops - 1)
        total = total + LaurentPolynomial(terms) * powers[loops - 1]
    return total


def _bracket_tokens(strands: int, tokens: Sequence[Token], budget: int | None = None) -> LaurentPolynomial:
    _check_budget(sum(1 for _, kind in tokens if kind), budget)
    counts, _ = _state_counts(strands, tokens)
    return _bracket_from_counts(counts)


def kauffman_bracket(b: BraidWord, budget: int | None = None) -> LaurentPolynomial:
    """Normalized Kauffman bracket of the plat closure, ``<unknot> = 1``."""
    return _bracket_tokens(b.strands, _tokens(b), budget)


def bracket_state_count(b: BraidWord, budget: int | None = None) -> int:
    """Number of resolutions the state sum visits (always ``2**length``)."""
    _check_budget(b.length, budget)
    return _state_counts(b.strands, _tokens(b))[1]


def writhe_factor(w: int) -> LaurentPolynomial:
    """``(-A)**(-3w)``."""
    return LaurentPolynomial.monomial(-3 * w, -1 if w % 2 else 1)


def jones_oracle(b: BraidWord, budget: int | None = None) -> LaurentPolynomial:
    """Jones polynomial of the plat closure as a Laurent polynomial in A."""
    w = plat_components(b).writhe
    return writhe_factor(w) * kauffman_bracket(b, budget)


def _jones_tokens(strands, tokens, dirs, budget=None) -> LaurentPolynomial:
    w = sum(crossing_signs(tokens, dirs))
    return writhe_factor(w) * _bracket_tokens(strands, tokens, budget)


def to_t_exponents(poly: LaurentPolynomial) -> dict[float, int]:
    """Re-express a polynomial in A as ``{power of t: coeff}`` using ``t = A**-4``."""
    return {-e / 4: c for e, c in poly}


def evaluate_at(poly: LaurentPolynomial, k: int) -> complex:
    """Substitute ``A = i exp(-i pi / 2k)``."""
    root = RootOfUnity(k)
    return complex(sum(c * root.A_power(e) for e, c in poly)) if len(poly) else 0j


def evaluate_at_A(poly: LaurentPolynomial, A: complex) -> complex:
    return complex(poly(A))


# ---------------------------------------------------------------------------
# skein relation


@dataclass(frozen=True)
class SkeinTriple:
    """Jones polynomials of L+, L- and the oriented smoothing L0 at one site."""

    site: int
    smoothing: str  # "delete" (strands parallel) or "cap-cup" (antiparallel)
    positive_letter: int  # the letter at the site that realizes L+
    v_plus: LaurentPolynomial
    v_minus: LaurentPolynomial
    v_zero: LaurentPolynomial


def skein_polynomials(b: BraidWord, site: int, budget: int | None = None) -> SkeinTriple:
    """Build L+, L- and L0 at ``site`` with one shared orientation.

    The orientation comes from the positive-letter diagram; L- has the same
    loops. L0 is the orientation-respecting smoothing: deleting the letter
    when the two strands run the same way, the cap-cup tangle otherwise.
    """
    if not 0 <= site < b.length:
        raise IndexError(f"site {site} out of range for a word of length {b.length}")
    tokens = list(_tokens(b))
    q, _ = tokens[site]
    t_pos = tokens.copy()
    t_pos[site] = (q, 1)
    t_neg = tokens.copy()
    t_neg[site] = (q, -1)
    _, dirs = trace_loops(b.strands, t_pos)
    da, db = int(dirs[site, q]), int(dirs[site, q + 1])
    v_pos = _jones_tokens(b.strands, t_pos, dirs, budget)
    v_neg = _jones_tokens(b.strands, t_neg, dirs, budget)
    if da == db:
        t_zero = t_pos[:site] + t_pos[site + 1:]
        dirs_zero = np.delete(dirs, site + 1, axis=0)
        smoothing = "delete"
    else:
        t_zero = t_pos.copy()
        t_zero[site] = (q, 0)
        dirs_zero = dirs
        smoothing = "cap-cup"
    v_zero = _jones_tokens(b.strands, t_zero, dirs_zero, budget)
    # the positive letter is an oriented-positive crossing only for parallel strands
    if da * db == 1:
        return SkeinTriple(site, smoothing, q + 1, v_pos, v_neg, v_zero)
    return SkeinTriple(site, smoothing, -(q + 1), v_neg, v_pos, v_zero)


def skein_residual_polynomial(b: BraidWord, site: int, budget: int | None = None) -> LaurentPolynomial:
    """``(w^1/2 - w^-1/2) V0 - (w^-1 V+ - w V-)`` with ``w^1/2 = A**-2``.

    Identically zero for a correct oracle.
    """
    tri = skein_polynomials(b, site, budget)
    half = LaurentPolynomial({-2: 1, 2: -1})
    return half * tri.v_zero - (tri.v_plus.shift(4) - tri.v_minus.shift(-4))


def skein_residual(b: BraidWord, site: int, k: int, budget: int | None = None) -> complex:
    """Skein relation residual evaluated numerically at ``omega = exp(2 pi i/k)``."""
    tri = skein_polynomials(b, site, budget)
    root = RootOfUnity(k)
    omega = root.A_power(-4)
    half = root.A_power(-2)
    vp, vm, v0 = (evaluate_at(v, k) for v in (tri.v_plus, tri.v_minus, tri.v_zero))
    return (half - 1 / half) * v0 - (vp / omega - omega * vm)
