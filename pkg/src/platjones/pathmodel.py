"""The k-th path model representation of the braid group B_2n.

Basis vectors are walks of length 2n on the path graph with k-1 vertices
that start and end on the first vertex, i.e. Dyck paths of height at most
k-2. A path is stored as its step sequence of +1/-1; heights are partial
sums and vertex labels are heights + 1.

Temperley-Lieb generators act locally on positions (i-1, i, i+1) of the
height profile; braid generators are ``rho(sigma_i) = A I + A**-1 E_i``
with the same ``A`` as the skein oracle.

Braid words are read as time: :func:`apply_braid` applies the first letter
first, and ``rep_matrix(b) = rho(g_L) ... rho(g_1)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
import scipy.sparse as sp

from .braid import BraidWord
from .skein import RootOfUnity

__all__ = [
    "DimensionError",
    "PathBasis",
    "RepOperator",
    "StateVector",
    "enumerate_paths",
    "catalan",
    "tl_generator",
    "braid_generator_rep",
    "cap_state",
    "apply_braid",
    "rep_matrix",
    "path_dimension",
]

MAX_DENSE_DIM = 200


class DimensionError(ValueError):
    """Representation too large for a dense computation."""


def catalan(n: int) -> int:
    if n < 0:
        raise ValueError("n must be non-negative")
    return math.comb(2 * n, n) // (n + 1)


@dataclass(frozen=True, eq=False)
class PathBasis:
    n: int
    k: int
    paths: tuple[tuple[int, ...], ...]
    index: dict = field(repr=False)

    @property
    def dim(self) -> int:
        return len(self.paths)

    @property
    def strands(self) -> int:
        return 2 * self.n

    @property
    def max_height(self) -> int:
        return self.k - 2

    def heights(self, j: int) -> tuple[int, ...]:
        h = [0]
        for s in self.paths[j]:
            h.append(h[-1] + s)
        return tuple(h)

    def __eq__(self, other):
        return isinstance(other, PathBasis) and (self.n, self.k) == (other.n, other.k)

    def __hash__(self):
        return hash((PathBasis, self.n, self.k))


@lru_cache(maxsize=None)
def enumerate_paths(n: int, k: int) -> PathBasis:
    """All capped Dyck paths of length 2n, lexicographic with +1 before -1."""
    if n < 1 or k < 3:
        raise ValueError(f"need n >= 1 and k >= 3, got n={n}, k={k}")
    cap = k - 2
    paths = []
    steps = []

    def extend(h):
        remaining = 2 * n - len(steps)
        if remaining == 0:
            paths.append(tuple(steps))
            return
        if h + 1 <= cap and h + 1 <= remaining - 1:
            steps.append(1)
            extend(h + 1)
            steps.pop()
        if h >= 1:
            steps.append(-1)
            extend(h - 1)
            steps.pop()

    extend(0)
    paths = tuple(paths)
    return PathBasis(n, k, paths, {p: j for j, p in enumerate(paths)})


def path_dimension(n: int, k: int) -> int:
    return enumerate_paths(n, k).dim


@dataclass(frozen=True, eq=False)
class RepOperator:
    basis: PathBasis
    matrix: sp.csr_matrix | np.ndarray

    def dense(self) -> np.ndarray:
        m = self.matrix
        return m.toarray() if sp.issparse(m) else np.asarray(m)

    def __matmul__(self, other):
        if isinstance(other, RepOperator):
            if other.basis != self.basis:
                raise ValueError("operators on different bases")
            return RepOperator(self.basis, self.matrix @ other.matrix)
        if isinstance(other, StateVector):
            return StateVector(self.basis, np.asarray(self.matrix @ other.amplitudes).ravel())
        return self.matrix @ other

    def adjoint(self) -> RepOperator:
        return RepOperator(self.basis, self.matrix.conj().T)

    def unitarity_error(self) -> float:
        m = self.dense()
        return float(np.max(np.abs(m.conj().T @ m - np.eye(m.shape[0]))))

    def hermiticity_error(self) -> float:
        m = self.dense()
        return float(np.max(np.abs(m - m.conj().T)))


@dataclass(frozen=True, eq=False)
class StateVector:
    basis: PathBasis
    amplitudes: np.ndarray

    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


def _lam(k: int, l: int) -> float:
    return math.sin(math.pi * l / k)


def _check_index(i: int, basis: PathBasis):
    if not 1 <= i <= 2 * basis.n - 1:
        raise IndexError(f"generator index {i} out of range 1..{2 * basis.n - 1}")


@lru_cache(maxsize=None)
def _tl_sparse(n: int, k: int, i: int) -> sp.csr_matrix:
    basis = enumerate_paths(n, k)
    rows, cols, vals = [], [], []
    for j, path in enumerate(basis.paths):
        h = basis.heights(j)
        if h[i - 1] != h[i + 1]:
            continue
        z = h[i - 1]
        l = z + 1
        lam_lo, lam_mid, lam_hi = _lam(k, l - 1), _lam(k, l), _lam(k, l + 1)
        # local 2x2 block on (valley, peak)
        block = np.array([
            [lam_lo, math.sqrt(lam_lo * lam_hi)],
            [math.sqrt(lam_lo * lam_hi), lam_hi],
        ]) / lam_mid
        here = 1 if path[i - 1] == 1 else 0
        for there, (a, b) in ((0, (-1, 1)), (1, (1, -1))):
            variant = path[: i - 1] + (a, b) + path[i + 1:]
            target = basis.index.get(variant)
            if target is None or block[there, here] == 0.0:
                continue
            rows.append(target)
            cols.append(j)
            vals.append(block[there, here])
    return sp.csr_matrix((vals, (rows, cols)), shape=(basis.dim, basis.dim), dtype=float)


def tl_generator(i: int, basis: PathBasis) -> RepOperator:
    """Temperley-Lieb generator E_i on the path space."""
    _check_index(i, basis)
    return RepOperator(basis, _tl_sparse(basis.n, basis.k, i))


@lru_cache(maxsize=None)
def _rho_sparse(n: int, k: int, letter: int) -> sp.csr_matrix:
    root = RootOfUnity(k)
    E = _tl_sparse(n, k, abs(letter))
    eye = sp.identity(E.shape[0], dtype=complex, format="csr")
    A, Ainv = root.A_power(1), root.A_power(-1)
    if letter > 0:
        return (A * eye + Ainv * E).tocsr()
    return (Ainv * eye + A * E).tocsr()


def braid_generator_rep(i: int, sign: int, basis: PathBasis) -> RepOperator:
    """rho_k(sigma_i) for ``sign=+1``, its inverse (= adjoint) for ``sign=-1``."""
    _check_index(i, basis)
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    return RepOperator(basis, _rho_sparse(basis.n, basis.k, sign * i))


@lru_cache(maxsize=None)
def _dense_generators(n: int, k: int) -> dict[int, np.ndarray]:
    return {
        s * i: _rho_sparse(n, k, s * i).toarray()
        for i in range(1, 2 * n)
        for s in (1, -1)
    }


def generator_matrices(basis: PathBasis) -> dict[int, np.ndarray | sp.csr_matrix]:
    """Letter -> matrix of rho(letter); dense for small bases."""
    if basis.dim <= 64:
        return _dense_generators(basis.n, basis.k)
    return {s * i: _rho_sparse(basis.n, basis.k, s * i) for i in range(1, 2 * basis.n) for s in (1, -1)}


def cap_state(basis: PathBasis) -> StateVector:
    """Unit vector on the alternating path (+1, -1, +1, -1, ...)."""
    alt = tuple(1 if j % 2 == 0 else -1 for j in range(2 * basis.n))
    amps = np.zeros(basis.dim, dtype=complex)
    amps[basis.index[alt]] = 1.0
    return StateVector(basis, amps)


def cap_index(basis: PathBasis) -> int:
    return basis.index[tuple(1 if j % 2 == 0 else -1 for j in range(2 * basis.n))]


def _check_strands(b: BraidWord, basis: PathBasis):
    if b.strands != basis.strands:
        raise ValueError(
            f"braid on {b.strands} strands does not act on the path basis for {basis.strands} strands"
        )


def apply_braid(b: BraidWord, state: StateVector) -> StateVector:
    _check_strands(b, state.basis)
    gens = generator_matrices(state.basis)
    v = np.asarray(state.amplitudes, dtype=complex)
    for g in b.letters:
        v = gens[g] @ v
    return StateVector(state.basis, v)


def rep_matrix(b: BraidWord, basis: PathBasis) -> RepOperator:
    """Dense ``rho(g_L) ... rho(g_1)``; concatenation gives ``rep(b1 b2) = rep(b2) rep(b1)``."""
    _check_strands(b, basis)
    if basis.dim > MAX_DENSE_DIM:
        raise DimensionError(f"dimension {basis.dim} exceeds dense limit {MAX_DENSE_DIM}")
    gens = _dense_generators(basis.n, basis.k)
    m = np.eye(basis.dim, dtype=complex)
    for g in b.letters:
        m = gens[g] @ m
    return RepOperator(basis, m)
