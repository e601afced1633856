"""Row reduction and solvers over F_p against a slow reference."""

import numpy as np
import pytest

from websterp import linalg_fp as lf


def ref_rref(A, p):
    R = np.array(A, dtype=np.int64) % p
    rows, cols = R.shape
    piv = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        nz = np.nonzero(R[r:, c])[0]
        if nz.size == 0:
            continue
        i = r + int(nz[0])
        if i != r:
            R[[r, i]] = R[[i, r]]
        inv = pow(int(R[r, c]), -1, p)
        R[r] = (R[r] * inv) % p
        mask = np.nonzero(R[:, c])[0]
        mask = mask[mask != r]
        if mask.size:
            R[mask] = (R[mask] - np.outer(R[mask, c], R[r])) % p
        piv.append(c)
        r += 1
    return R, piv


def random_matrix(rng, p, m, n):
    k = rng.integers(1, max(2, m // 2 + 1))
    A = (rng.integers(0, p, size=(m, k)) @ rng.integers(0, p, size=(k, n))) % p
    if rng.random() < 0.5:
        A = (A + rng.integers(0, p, size=(m, n))) % p
    return A


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_rref_matches_reference(p):
    rng = np.random.default_rng(p)
    for _ in range(150):
        m = int(rng.integers(1, 40))
        n = int(rng.integers(1, 30))
        A = random_matrix(rng, p, m, n)
        R1, piv1 = lf.rref(A, p)
        R2, piv2 = ref_rref(A, p)
        assert piv1 == piv2
        assert np.array_equal(R1, R2)


def test_rref_panel_boundaries(monkeypatch):
    rng = np.random.default_rng(0)
    for panel in (1, 2, 3, 7):
        monkeypatch.setattr(lf, "_RREF_PANEL", panel)
        for _ in range(60):
            A = random_matrix(rng, 5, int(rng.integers(1, 25)),
                              int(rng.integers(1, 20)))
            R1, piv1 = lf.rref(A, 5)
            R2, piv2 = ref_rref(A, 5)
            assert piv1 == piv2 and np.array_equal(R1, R2)


def test_rref_empty_and_zero():
    R, piv = lf.rref(np.zeros((0, 4), dtype=np.int64), 3)
    assert piv == [] and R.shape == (0, 4)
    R, piv = lf.rref(np.zeros((3, 0), dtype=np.int64), 3)
    assert piv == [] and R.shape == (3, 0)
    R, piv = lf.rref(np.zeros((3, 4), dtype=np.int64), 3)
    assert piv == [] and not R.any()


def test_nullspace_annihilates():
    rng = np.random.default_rng(1)
    for p in (3, 5):
        for _ in range(40):
            A = random_matrix(rng, p, int(rng.integers(1, 20)),
                              int(rng.integers(1, 15)))
            N = lf.nullspace(A, p)
            assert N.shape[0] == A.shape[1] - lf.rank(A, p)
            if N.size:
                assert not (A @ N.T % p).any()


def test_solve_matrix_roundtrip():
    rng = np.random.default_rng(2)
    p = 5
    for _ in range(40):
        n = int(rng.integers(1, 12))
        A = rng.integers(0, p, size=(n + 3, n))
        if lf.rank(A, p) < n:
            continue
        X0 = rng.integers(0, p, size=(n, 4))
        B = A @ X0 % p
        X = lf.solve_matrix(A, B, p)
        assert X is not None
        assert np.array_equal(A @ X % p, B)


def test_inverse():
    rng = np.random.default_rng(3)
    p = 7
    found = 0
    for _ in range(60):
        n = int(rng.integers(1, 10))
        A = rng.integers(0, p, size=(n, n))
        inv = lf.inverse(A, p)
        if inv is None:
            assert lf.rank(A, p) < n
            continue
        found += 1
        assert np.array_equal(A @ inv % p, np.eye(n, dtype=np.int64))
    assert found > 10
