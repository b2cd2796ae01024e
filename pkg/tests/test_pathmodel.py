import itertools
import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from platjones.braid import BraidWord, random_braid, signed_generators
from platjones.pathmodel import (
    DimensionError,
    apply_braid,
    braid_generator_rep,
    cap_index,
    cap_state,
    catalan,
    enumerate_paths,
    rep_matrix,
    tl_generator,
)
from platjones.skein import RootOfUnity


def brute_force_paths(n, k):
    out = []
    for steps in itertools.product((1, -1), repeat=2 * n):
        h = np.cumsum(steps)
        if h.min() >= 0 and h.max() <= k - 2 and h[-1] == 0:
            out.append(steps)
    return out


def transfer_count(n, k):
    # closed walks of length 2n from the end vertex of the path graph on k-1 vertices
    m = k - 1
    T = np.zeros((m, m), dtype=object)
    for v in range(m - 1):
        T[v, v + 1] = T[v + 1, v] = 1
    vec = np.zeros(m, dtype=object)
    vec[0] = 1
    for _ in range(2 * n):
        vec = T.dot(vec)
    return int(vec[0])


@pytest.mark.parametrize("n,k", [(n, k) for n in range(1, 7) for k in range(3, 10)])
def test_enumeration_matches_brute_force(n, k):
    basis = enumerate_paths(n, k)
    expected = sorted(brute_force_paths(n, k), reverse=True)
    assert list(basis.paths) == expected  # lexicographic with +1 first
    assert basis.dim == transfer_count(n, k)


def test_reference_dimensions():
    assert enumerate_paths(2, 5).dim == 2
    assert enumerate_paths(4, 5).dim == 13
    assert enumerate_paths(3, 5).dim == 5
    assert [catalan(n) for n in range(8)] == [1, 1, 2, 5, 14, 42, 132, 429]
    assert enumerate_paths(5, 20).dim == catalan(5)


def test_invalid_parameters():
    with pytest.raises(ValueError):
        enumerate_paths(0, 5)
    with pytest.raises(ValueError):
        enumerate_paths(2, 2)


def test_cap_state():
    basis = enumerate_paths(3, 5)
    v = cap_state(basis)
    assert v.norm() == 1.0
    assert basis.paths[cap_index(basis)] == (1, -1, 1, -1, 1, -1)


CASES = [(n, k) for n in (1, 2, 3, 4) for k in (5, 7, 8)]


@pytest.mark.parametrize("n,k", CASES)
def test_tl_relations(n, k):
    basis = enumerate_paths(n, k)
    d = RootOfUnity(k).d
    E = [None] + [tl_generator(i, basis).dense() for i in range(1, 2 * n)]
    for i in range(1, 2 * n):
        assert np.abs(E[i] - E[i].T).max() < 1e-12
        assert np.abs(E[i] @ E[i] - d * E[i]).max() < 1e-10
        if i + 1 < 2 * n:
            assert np.abs(E[i] @ E[i + 1] @ E[i] - E[i]).max() < 1e-10
            assert np.abs(E[i + 1] @ E[i] @ E[i + 1] - E[i + 1]).max() < 1e-10
        for j in range(i + 2, 2 * n):
            assert np.abs(E[i] @ E[j] - E[j] @ E[i]).max() < 1e-12


@pytest.mark.parametrize("n,k", CASES)
def test_braid_generators_unitary_and_inverse(n, k):
    basis = enumerate_paths(n, k)
    eye = np.eye(basis.dim)
    for i in range(1, 2 * n):
        g = braid_generator_rep(i, 1, basis)
        gi = braid_generator_rep(i, -1, basis)
        assert g.unitarity_error() < 1e-12
        assert np.abs(gi.dense() - g.adjoint().dense()).max() < 1e-12
        assert np.abs(g.dense() @ gi.dense() - eye).max() < 1e-12


def test_rep_matrix_composition_and_apply():
    basis = enumerate_paths(3, 7)
    a, b = random_braid(6, 9, 1), random_braid(6, 7, 2)
    Ra, Rb, Rab = (rep_matrix(x, basis).dense() for x in (a, b, a + b))
    assert np.abs(Rab - Rb @ Ra).max() < 1e-12
    v = apply_braid(a + b, cap_state(basis)).amplitudes
    assert np.abs(v - Rab @ cap_state(basis).amplitudes).max() < 1e-12
    assert rep_matrix(a, basis).unitarity_error() < 1e-12


@given(st.lists(st.sampled_from(signed_generators(6)), max_size=12))
def test_inverse_word_gives_identity(letters):
    basis = enumerate_paths(3, 5)
    b = BraidWord(6, tuple(letters))
    m = rep_matrix(b + b.inverse(), basis).dense()
    assert np.abs(m - np.eye(basis.dim)).max() < 1e-11


def test_guards():
    basis = enumerate_paths(2, 5)
    with pytest.raises(IndexError):
        tl_generator(4, basis)
    with pytest.raises(ValueError):
        braid_generator_rep(1, 2, basis)
    with pytest.raises(ValueError):
        apply_braid(BraidWord(6, ()), cap_state(basis))
    big = enumerate_paths(8, 12)
    assert big.dim > 200
    with pytest.raises(DimensionError):
        rep_matrix(BraidWord(16, (1,)), big)
    # sparse application still works beyond the dense limit
    out = apply_braid(random_braid(16, 20, 0), cap_state(big))
    assert abs(out.norm() - 1) < 1e-12


@pytest.mark.parametrize("n,k", CASES)
def test_generator_eigenvalues(n, k):
    # A on the kernel of E_i, A + d/A = -A^-3 on its image
    basis = enumerate_paths(n, k)
    root = RootOfUnity(k)
    allowed = np.array([root.A_power(1), -root.A_power(-3)])
    for i in range(1, 2 * n):
        ev = np.linalg.eigvals(braid_generator_rep(i, 1, basis).dense())
        assert np.abs(ev[:, None] - allowed[None, :]).min(axis=1).max() < 1e-10


def test_sparse_application_matches_dense():
    for n in (1, 2, 3):
        basis = enumerate_paths(n, 7)
        for seed in range(5):
            b = random_braid(2 * n, 20, seed)
            v = apply_braid(b, cap_state(basis)).amplitudes
            assert np.abs(v - rep_matrix(b, basis).dense() @ cap_state(basis).amplitudes).max() < 1e-10
