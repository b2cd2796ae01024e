"""Exact moment operators of the random-braid ensemble and their distance to Haar.

For a single uniformly random signed generator g, the t-th moment operator is
``M = mean_g rho(g)^{(x)t} (x) conj(rho(g))^{(x)t}`` acting on ``C^(d^2t)``.
A length-L random braid has moment operator ``M**L``. The Haar value is the
orthogonal projector onto the span of the permutation vectors (identity and
swap for t = 2).

Because the generator set is closed under inverses, M is Hermitian and
``M P = P M = P`` for the Haar projector P, so ``M**L - P = (M - P)**L`` and
the operator-norm gap is ``||M - P||**L`` for L >= 1.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .braid import design_length, signed_generators
from .pathmodel import DimensionError, _dense_generators, enumerate_paths

__all__ = [
    "MAX_MOMENT_DIM",
    "haar_moment",
    "permutation_vectors",
    "haar_projector",
    "weingarten_haar_operator",
    "moment_operator",
    "exact_moment_gap",
    "gap_by_power",
    "exact_moment",
    "Calibration",
    "calibrate_lambda",
]

MAX_MOMENT_DIM = 100_000


def haar_moment(k_moment: int, d: int) -> float:
    """``E |<a|U|b>|^(2k)`` over Haar U in dimension d, i.e. ``1 / C(k+d-1, d-1)``."""
    return 1.0 / math.comb(k_moment + d - 1, d - 1)


def _tensor_power(u: np.ndarray, t: int) -> np.ndarray:
    out = np.ones((1, 1), dtype=complex)
    for _ in range(t):
        out = np.kron(out, u)
    for _ in range(t):
        out = np.kron(out, u.conj())
    return out


def permutation_vectors(d: int, t: int) -> np.ndarray:
    """Columns are ``sum_x |x_1..x_t, x_pi(1)..x_pi(t)>`` for each permutation pi."""
    vecs = []
    for perm in itertools.permutations(range(t)):
        v = np.zeros((d,) * (2 * t))
        for xs in itertools.product(range(d), repeat=t):
            v[xs + tuple(xs[perm[j]] for j in range(t))] = 1.0
        vecs.append(v.ravel())
    return np.array(vecs).T


@lru_cache(maxsize=None)
def haar_projector(d: int, t: int = 2) -> np.ndarray:
    """Exact Haar t-th moment operator: projector onto the permutation span."""
    if d ** (2 * t) > MAX_MOMENT_DIM:
        raise DimensionError(f"d^{2 * t} = {d ** (2 * t)} exceeds {MAX_MOMENT_DIM}")
    q, r = np.linalg.qr(permutation_vectors(d, t))
    rank = int(np.sum(np.abs(np.diag(r)) > 1e-10))
    q = q[:, :rank]
    return q @ q.conj().T


def weingarten_haar_operator(d: int) -> np.ndarray:
    """Second-moment Haar operator from the Weingarten formula.

    ``E[U_ai U_bj conj(U_ck) conj(U_el)]`` summed over pairings with
    ``Wg(id) = 1/(d^2-1)`` and ``Wg(swap) = -1/(d(d^2-1))``. Valid for d >= 2.
    """
    if d < 2:
        return np.ones((1, 1))
    wg_id = 1.0 / (d * d - 1)
    wg_sw = -1.0 / (d * (d * d - 1))
    delta = np.eye(d)
    # rows (a,b,c,e), cols (i,j,k,l)
    out = np.zeros((d,) * 8)
    rows = [
        np.einsum("ac,be->abce", delta, delta),  # sigma = id: a=c, b=e
        np.einsum("ae,bc->abce", delta, delta),  # sigma = swap: a=e, b=c
    ]
    cols = [
        np.einsum("ik,jl->ijkl", delta, delta),
        np.einsum("il,jk->ijkl", delta, delta),
    ]
    wg = [[wg_id, wg_sw], [wg_sw, wg_id]]
    for s in range(2):
        for tau in range(2):
            out += wg[s][tau] * np.einsum("abce,ijkl->abceijkl", rows[s], cols[tau])
    return out.reshape(d**4, d**4)


@lru_cache(maxsize=None)
def moment_operator(n: int, k: int, t: int = 2) -> np.ndarray:
    basis = enumerate_paths(n, k)
    d = basis.dim
    if d ** (2 * t) > MAX_MOMENT_DIM:
        raise DimensionError(f"d^{2 * t} = {d ** (2 * t)} exceeds {MAX_MOMENT_DIM}")
    gens = _dense_generators(n, k)
    letters = signed_generators(2 * n)
    M = sum(_tensor_power(gens[g], t) for g in letters) / len(letters)
    M.setflags(write=False)
    return M


@lru_cache(maxsize=None)
def _contraction(n: int, k: int, t: int) -> float:
    d = enumerate_paths(n, k).dim
    return float(np.linalg.norm(moment_operator(n, k, t) - haar_projector(d, t), 2))


def exact_moment_gap(n: int, k: int, t: int = 2, L: int = 0) -> float:
    """Operator-norm distance ``||M**L - M_Haar||`` for length-L random braids."""
    if L < 0:
        raise ValueError("L must be non-negative")
    d = enumerate_paths(n, k).dim
    if L == 0:
        P = haar_projector(d, t)
        return float(np.linalg.norm(np.eye(P.shape[0]) - P, 2))
    return _contraction(n, k, t) ** L


def gap_by_power(n: int, k: int, t: int, L: int) -> float:
    """Same quantity by explicit matrix power; slow, for cross-checking."""
    d = enumerate_paths(n, k).dim
    M = moment_operator(n, k, t)
    return float(np.linalg.norm(np.linalg.matrix_power(M, L) - haar_projector(d, t), 2))


def exact_moment(n: int, k: int, k_moment: int, L: int, alpha: np.ndarray, beta: np.ndarray) -> float:
    """``E |<alpha| rho(b) |beta>|^(2 k_moment)`` over length-L random braids, exactly."""
    M = moment_operator(n, k, k_moment)
    va = _tensor_power(alpha.reshape(-1, 1), k_moment).ravel()
    vb = _tensor_power(beta.reshape(-1, 1), k_moment).ravel()
    w = vb.astype(complex)
    for _ in range(L):
        w = M @ w
    return float(np.real(np.vdot(va, w)))


@dataclass(frozen=True)
class Calibration:
    n: int
    k: int
    epsilon: float
    lam: float
    length: int
    gap: float
    contraction: float
    lam_step: float

    def to_dict(self) -> dict:
        return {
            "n": self.n, "k": self.k, "epsilon": self.epsilon, "lambda": self.lam,
            "length": self.length, "gap": self.gap, "contraction": self.contraction,
            "lambda_step": self.lam_step,
        }


def calibrate_lambda(n: int, k: int, epsilon: float = 0.1, lam_step: float = 0.01, max_steps: int = 100_000) -> Calibration:
    """Smallest ``lam`` on the grid ``lam_step * j`` with
    ``exact_moment_gap(n, k, 2, design_length(n, epsilon, 2, lam)) <= epsilon``."""
    s = _contraction(n, k, 2)
    if s >= 1.0 - 1e-12:
        raise RuntimeError(f"moment operator for n={n}, k={k} does not contract (norm {s})")
    for j in range(1, max_steps + 1):
        lam = round(j * lam_step, 12)
        L = design_length(n, epsilon, 2, lam)
        g = exact_moment_gap(n, k, 2, L)
        if g <= epsilon:
            return Calibration(n, k, epsilon, lam, L, g, s, lam_step)
    raise RuntimeError("calibration did not converge")
