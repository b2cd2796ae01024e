"""Braid words on an even number of strands and their plat closures.

A braid word is a tuple of signed generator indices: ``g > 0`` is the
crossing sigma_g between positions g and g+1, ``g < 0`` its inverse.

The plat closure caps positions (1,2), (3,4), ... on both ends. Diagrams
are described in terms of strand *segments*: segment ``(c, p)`` is the
piece of the strand sitting at 0-based position ``p`` between letter
``c-1`` and letter ``c``, so a word of length L has ``strands * (L + 1)``
segments in columns ``0..L``.

Internally a diagram may also carry Temperley-Lieb tokens (kind 0): a
cap-cup pair at a site, i.e. the horizontal smoothing of a crossing.
These only appear in skein computations and are never part of a
:class:`BraidWord`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

__all__ = [
    "BraidError",
    "BraidWord",
    "PlatDiagram",
    "parse_braid_word",
    "format_braid_word",
    "inverse_word",
    "permutation",
    "plat_components",
    "writhe",
    "random_braid",
    "signed_generators",
    "design_length",
]


class BraidError(ValueError):
    """Invalid braid word or strand count."""


@dataclass(frozen=True)
class BraidWord:
    strands: int
    letters: tuple[int, ...] = ()

    def __post_init__(self):
        strands = self.strands
        if isinstance(strands, bool) or not isinstance(strands, (int, np.integer)):
            raise BraidError(f"strand count must be an integer, got {strands!r}")
        if strands < 2 or strands % 2:
            raise BraidError(f"plat closure needs an even strand count >= 2, got {strands}")
        letters = tuple(int(g) for g in self.letters)
        for g in letters:
            if g == 0:
                raise BraidError("generator index 0 is not allowed")
            if abs(g) > strands - 1:
                raise BraidError(
                    f"generator index out of range: |{g}| > {strands - 1} for {strands} strands"
                )
        object.__setattr__(self, "strands", int(strands))
        object.__setattr__(self, "letters", letters)

    @property
    def n(self) -> int:
        return self.strands // 2

    @property
    def length(self) -> int:
        return len(self.letters)

    def __len__(self) -> int:
        return len(self.letters)

    def __str__(self) -> str:
        return format_braid_word(self)

    def __add__(self, other: BraidWord) -> BraidWord:
        if not isinstance(other, BraidWord):
            return NotImplemented
        if other.strands != self.strands:
            raise BraidError("cannot concatenate braids on different strand counts")
        return BraidWord(self.strands, self.letters + other.letters)

    def inverse(self) -> BraidWord:
        return inverse_word(self)


def parse_braid_word(text: str, strands: int) -> BraidWord:
    """Parse whitespace-separated signed integers, e.g. ``"1 -2 1"``."""
    letters = []
    for tok in text.split():
        try:
            letters.append(int(tok))
        except ValueError:
            raise BraidError(f"not an integer generator: {tok!r}") from None
    return BraidWord(strands, tuple(letters))


def format_braid_word(b: BraidWord) -> str:
    return " ".join(str(g) for g in b.letters)


def inverse_word(b: BraidWord) -> BraidWord:
    return BraidWord(b.strands, tuple(-g for g in reversed(b.letters)))


def permutation(b: BraidWord) -> tuple[int, ...]:
    """Underlying permutation of the braid, sign ignored.

    Returns ``perm`` with ``perm[p]`` the right-end position (0-based) of the
    strand that starts at left position ``p``.
    """
    pos_to_strand = list(range(b.strands))
    for g in b.letters:
        i = abs(g) - 1
        pos_to_strand[i], pos_to_strand[i + 1] = pos_to_strand[i + 1], pos_to_strand[i]
    perm = [0] * b.strands
    for pos, strand in enumerate(pos_to_strand):
        perm[strand] = pos
    return tuple(perm)


# ---------------------------------------------------------------------------
# Diagram tracing

Token = tuple[int, int]  # (0-based left position q of the pair, kind in {+1, -1, 0})


def _tokens(b: BraidWord) -> tuple[Token, ...]:
    return tuple((abs(g) - 1, 1 if g > 0 else -1) for g in b.letters)


def _right_neighbor(tokens, strands, c, p):
    """Segment reached from the right end of (c, p), and the end we arrive at."""
    L = len(tokens)
    if c == L:
        return (c, p ^ 1), "R"
    q, kind = tokens[c]
    if p != q and p != q + 1:
        return (c + 1, p), "L"
    if kind:
        return (c + 1, 2 * q + 1 - p), "L"
    return (c, 2 * q + 1 - p), "R"


def _left_neighbor(tokens, strands, c, p):
    if c == 0:
        return (0, p ^ 1), "L"
    q, kind = tokens[c - 1]
    if p != q and p != q + 1:
        return (c - 1, p), "R"
    if kind:
        return (c - 1, 2 * q + 1 - p), "R"
    return (c, 2 * q + 1 - p), "L"


def trace_loops(strands: int, tokens: Sequence[Token]):
    """Trace the closed loops of a plat-closed token diagram.

    Returns ``(loops, dirs)``: each loop is a list of segments in traversal
    order, and ``dirs[c, p]`` is +1 when segment ``(c, p)`` is traversed
    left-to-right. Each loop starts at its smallest unvisited segment in
    (column, position) order, traversed left-to-right.
    """
    L = len(tokens)
    dirs = np.zeros((L + 1, strands), dtype=np.int8)
    loops = []
    for c in range(L + 1):
        for p in range(strands):
            if dirs[c, p]:
                continue
            loop = []
            seg, entered = (c, p), "L"
            while True:
                sc, sp = seg
                if dirs[sc, sp]:
                    break
                dirs[sc, sp] = 1 if entered == "L" else -1
                loop.append(seg)
                if entered == "L":
                    seg, entered = _right_neighbor(tokens, strands, sc, sp)
                else:
                    seg, entered = _left_neighbor(tokens, strands, sc, sp)
            loops.append(loop)
    return loops, dirs


def crossing_signs(tokens: Sequence[Token], dirs: np.ndarray) -> list[int]:
    """Oriented sign of every crossing token (TL tokens are skipped).

    A positive letter is a positive crossing when both strands run
    left-to-right; each reversed strand flips the sign once.
    """
    signs = []
    for c, (q, kind) in enumerate(tokens):
        if kind:
            signs.append(int(kind * dirs[c, q] * dirs[c, q + 1]))
    return signs


def orientation_is_consistent(strands: int, tokens: Sequence[Token], dirs: np.ndarray) -> bool:
    """True when ``dirs`` orients every loop coherently."""
    L = len(tokens)
    for c in range(L + 1):
        for p in range(strands):
            d = dirs[c, p]
            if d not in (1, -1):
                return False
            # leaving through the right end when d = +1, else the left end
            if d == 1:
                (nc, np_), end = _right_neighbor(tokens, strands, c, p)
            else:
                (nc, np_), end = _left_neighbor(tokens, strands, c, p)
            if dirs[nc, np_] != (1 if end == "L" else -1):
                return False
    return True


@dataclass(frozen=True)
class PlatDiagram:
    braid: BraidWord
    components: tuple[tuple[tuple[int, int], ...], ...]
    directions: np.ndarray = field(repr=False, compare=False)
    crossing_signs: tuple[int, ...]

    @property
    def writhe(self) -> int:
        return sum(self.crossing_signs)

    @property
    def n_components(self) -> int:
        return len(self.components)

    def component_of(self) -> dict[tuple[int, int], int]:
        return {seg: i for i, loop in enumerate(self.components) for seg in loop}


def plat_components(b: BraidWord) -> PlatDiagram:
    tokens = _tokens(b)
    loops, dirs = trace_loops(b.strands, tokens)
    dirs.setflags(write=False)
    return PlatDiagram(
        braid=b,
        components=tuple(tuple(loop) for loop in loops),
        directions=dirs,
        crossing_signs=tuple(crossing_signs(tokens, dirs)),
    )


def writhe(b: BraidWord) -> int:
    return plat_components(b).writhe


# ---------------------------------------------------------------------------
# Random braids and design lengths


def signed_generators(strands: int) -> tuple[int, ...]:
    """The 2(strands-1) signed generators, ordered 1, -1, 2, -2, ..."""
    return tuple(s * i for i in range(1, strands) for s in (1, -1))


def random_braid(strands: int, length: int, seed: int | np.random.SeedSequence) -> BraidWord:
    """Uniform random word of the given length.

    ``seed`` feeds a Philox counter-based generator, so the word depends only
    on ``(strands, length, seed)``.
    """
    if length < 0:
        raise BraidError("length must be non-negative")
    gens = np.array(signed_generators(strands))
    rng = np.random.Generator(np.random.Philox(seed))
    picks = rng.integers(0, len(gens), size=length)
    return BraidWord(strands, tuple(int(g) for g in gens[picks]))


def design_length(n: int, epsilon: float, t: int = 2, lam: float = 1.0, local_dim: int = 2) -> int:
    """Braid length after which random braids on 2n strands form an
    epsilon-approximate t-design, for length constant ``lam``.

    ``t == 2`` uses ``lam * n * (n + ln(1/epsilon))``. Larger ``t`` uses the
    general schedule with ``log C_n`` replaced by its upper bound ``n ln 4``.
    """
    if not 0 < epsilon < 1:
        raise ValueError(f"epsilon must lie in (0, 1), got {epsilon}")
    if n < 1 or t < 1 or lam <= 0:
        raise ValueError("need n >= 1, t >= 1, lambda > 0")
    log_inv_eps = -np.log(epsilon)
    if t == 2:
        value = lam * n * (n + log_inv_eps)
    else:
        q = local_dim
        rounds = np.ceil(np.log(4 * t) / np.log(q) - 1e-12)
        value = (
            lam * n * rounds**2 * t**5 * t ** (3.1 / np.log(q))
            * (t * n * np.log(4) + log_inv_eps)
        )
    # guards against 12.000000000000002 -> 13
    return int(np.ceil(round(float(value), 9)))
