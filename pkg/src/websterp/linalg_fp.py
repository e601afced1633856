"""Exact dense and sparse linear algebra over the prime field F_p (numpy int64)."""

from __future__ import annotations

import numpy as np


def zeros(rows: int, cols: int) -> np.ndarray:
    return np.zeros((rows, cols), dtype=np.int64)


def eye(k: int) -> np.ndarray:
    return np.eye(k, dtype=np.int64)


def mat_mul(A: np.ndarray, B: np.ndarray, p: int) -> np.ndarray:
    return (A.astype(np.int64) @ B.astype(np.int64)) % p


_RREF_PANEL = 128


def rref(A: np.ndarray, p: int) -> tuple:
    """Reduced row echelon form mod p; returns (R, pivot_columns).

    Gauss-Jordan with panel-deferred updates: eliminations against the last
    up-to-48 pivot rows are accumulated as multipliers and applied to the
    whole matrix in one float64 matmul per panel, which keeps the bulk of
    the work inside BLAS.  Entries stay well below 2**53 so float64
    arithmetic is exact.
    """
    M = (np.asarray(A, dtype=np.int64) % p).astype(np.float64)
    m, n = M.shape
    pivots = []
    if m == 0 or n == 0:
        return M.astype(np.int64), pivots
    r = 0
    c = 0
    buf = np.empty_like(M)
    while r < m and c < n:
        r0 = r
        # P holds the panel pivot rows (reduced mod p, zero at earlier panel
        # pivot columns); L holds the deferred elimination multipliers for
        # every row of M against them.  Rows of M accumulate unreduced
        # residues between panels; entries stay bounded by a few times
        # n * p**2, far below 2**53, and are reduced once at the end.
        P = np.zeros((_RREF_PANEL, n))
        L = np.zeros((m, _RREF_PANEL))
        while r < m and c < n and (r - r0) < _RREF_PANEL:
            k = r - r0
            col = M[:, c].copy()
            if k:
                col -= L[:, :k] @ P[:k, c]
            col %= p
            if k:
                col[r0:r] = 0.0
            nz = np.nonzero(col[r:])[0]
            if nz.size == 0:
                c += 1
                continue
            i = r + int(nz[0])
            if i != r:
                M[[r, i]] = M[[i, r]]
                L[[r, i]] = L[[i, r]]
                col[r], col[i] = col[i], col[r]
            row = M[r].copy()
            if k:
                row -= L[r, :k] @ P[:k]
            row %= p
            inv = float(pow(int(col[r]), -1, p))
            row = (row * inv) % p
            L[:, k] = col
            L[r0:r + 1, k] = 0.0
            L[r, :] = 0.0
            P[k] = row
            pivots.append(c)
            r += 1
            c += 1
        k = r - r0
        if k:
            np.matmul(L[:, :k], P[:k], out=buf)
            M -= buf
            # Panel rows are zero at earlier panel pivot columns but not at
            # later ones; back-substitute within the panel.
            for j in range(k - 1, 0, -1):
                cj = pivots[len(pivots) - k + j]
                pc = P[:j, cj].copy()
                live = np.nonzero(pc)[0]
                if live.size:
                    P[live, :] = (P[live, :] - pc[live, None] * P[j][None, :]) % p
            M[r0:r] = P[:k]
    M %= p
    return M.astype(np.int64), pivots


def rank(A: np.ndarray, p: int) -> int:
    if A.size == 0:
        return 0
    return len(rref(A, p)[1])


def nullspace(A: np.ndarray, p: int) -> np.ndarray:
    """Basis of the right null space as rows of the returned matrix."""
    rows, cols = A.shape
    if cols == 0:
        return zeros(0, 0)
    R, pivots = rref(A, p)
    free = [c for c in range(cols) if c not in set(pivots)]
    basis = zeros(len(free), cols)
    for k, fc in enumerate(free):
        basis[k, fc] = 1
        for r, pc in enumerate(pivots):
            basis[k, pc] = (-R[r, fc]) % p
    return basis


def solve(A: np.ndarray, b: np.ndarray, p: int):
    """One solution x of A x = b mod p, or None if inconsistent."""
    rows, cols = A.shape
    aug = np.concatenate([A % p, (b % p).reshape(rows, 1)], axis=1)
    R, pivots = rref(aug, p)
    if cols in pivots:
        return None
    x = np.zeros(cols, dtype=np.int64)
    for r, pc in enumerate(pivots):
        x[pc] = R[r, cols]
    return x


def solve_matrix(A: np.ndarray, B: np.ndarray, p: int):
    """One solution X of A X = B mod p (columnwise), or None if inconsistent."""
    rows, cols = A.shape
    k = B.shape[1]
    aug = np.concatenate([A % p, B % p], axis=1)
    R, pivots = rref(aug, p)
    if any(pc >= cols for pc in pivots):
        return None
    X = np.zeros((cols, k), dtype=np.int64)
    for r, pc in enumerate(pivots):
        X[pc] = R[r, cols:]
    return X


def inverse(A: np.ndarray, p: int):
    """Inverse of a square matrix mod p, or None if singular."""
    k = A.shape[0]
    if A.shape[1] != k:
        return None
    X = solve_matrix(A, eye(k), p)
    if X is None:
        return None
    if not np.array_equal(mat_mul(A, X, p), eye(k) % p):
        return None
    return X


class FpLinearSystem:
    """Sparse inhomogeneous linear system over F_p with named variables.

    Constraints are rows sum_v coeff * var_v = rhs.  Solving splits the
    system into connected components (shared variables) and runs a dense
    elimination per component, which keeps the blockwise structure of
    homotopy systems tractable.
    """

    def __init__(self, p: int):
        self.p = p
        self.var_index: dict = {}
        self.rows: list = []  # (dict var_idx -> coeff, rhs)

    def var(self, key) -> int:
        idx = self.var_index.get(key)
        if idx is None:
            idx = len(self.var_index)
            self.var_index[key] = idx
        return idx

    def num_vars(self) -> int:
        return len(self.var_index)

    def add_constraint(self, coeffs: dict, rhs: int = 0):
        """coeffs: map variable-key -> coefficient."""
        row = {}
        for key, c in coeffs.items():
            c %= self.p
            if c:
                row[self.var(key)] = c
        rhs %= self.p
        if not row:
            if rhs:
                self.rows.append(({}, rhs))  # recorded; detected as inconsistent
            return
        self.rows.append((row, rhs))

    def solve(self):
        """Return dict key -> value solving all constraints, or None."""
        p = self.p
        nvars = len(self.var_index)
        parent = list(range(nvars))

        def find(a):
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for row, _ in self.rows:
            if not row:
                return None
            it = iter(row)
            a = find(next(it))
            for v in it:
                b = find(v)
                parent[b] = a
        comp_vars: dict = {}
        for v in range(nvars):
            comp_vars.setdefault(find(v), []).append(v)
        comp_rows: dict = {}
        for row, rhs in self.rows:
            c = find(next(iter(row)))
            comp_rows.setdefault(c, []).append((row, rhs))
        values = np.zeros(nvars, dtype=np.int64)
        for c, vs in comp_vars.items():
            rows_c = comp_rows.get(c, [])
            if not rows_c:
                continue
            local = {v: k for k, v in enumerate(vs)}
            A = zeros(len(rows_c), len(vs))
            b = np.zeros(len(rows_c), dtype=np.int64)
            for r, (row, rhs) in enumerate(rows_c):
                for v, coeff in row.items():
                    A[r, local[v]] = coeff
                b[r] = rhs
            x = solve(A, b, p)
            if x is None:
                return None
            for v in vs:
                values[v] = x[local[v]]
        return {key: int(values[idx]) for key, idx in self.var_index.items()}
