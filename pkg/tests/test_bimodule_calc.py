"""Quotient bimodules: canonicalization, dimensions, actions, structure maps."""

import random

import numpy as np
import pytest

from websterp import linalg_fp as lf
from websterp.webster_core import WebsterAlgebra
from websterp.bimodule_calc import (
    _sparse_canon, alpha_ii1, alpha_i1i, bimod_differential, bimod_mul,
    double_merge_bimodule, enumerate_bimodule_basis, epsilon, family_dimension,
    iota, merge_bimodule, mirror_triple_bimodule, plain_algebra_bimodule,
    straighten, tensor_bimodule, triple_bimodule,
)


def random_rows(rng, p, ncols, nrows):
    rows = []
    for _ in range(nrows):
        width = rng.choice([1, 1, 2, 2, 2, 3, 4])
        cols = rng.sample(range(ncols), min(width, ncols))
        rows.append({c: rng.randrange(1, p) for c in cols})
    return rows


@pytest.mark.parametrize("p", [3, 5])
def test_sparse_canon_matches_rowspace(p):
    rng = random.Random(p)
    for _ in range(40):
        ncols = rng.randrange(2, 14)
        rows = random_rows(rng, p, ncols, rng.randrange(1, 16))
        canon = _sparse_canon(rows, p)
        A = np.zeros((len(rows), ncols), dtype=np.int64)
        for r, row in enumerate(rows):
            for c, coeff in row.items():
                A[r, c] = coeff
        # soundness: each substitution col = sum(form) lies in the row space
        subs = []
        for col, form in canon.items():
            v = np.zeros(ncols, dtype=np.int64)
            v[col] = 1
            for c2, coeff in form.items():
                v[c2] = (v[c2] - coeff) % p
            subs.append(v)
            stacked = np.vstack([A, v])
            assert lf.rank(stacked, p) == lf.rank(A, p)
        # completeness: the substitutions span the whole row space
        if subs:
            assert lf.rank(np.vstack(subs), p) == lf.rank(A, p)
        else:
            assert lf.rank(A, p) == 0
        # forms only involve free (non-replaced) columns
        for form in canon.values():
            assert not set(form) & set(canon)


def test_sparse_canon_zero_and_chains():
    p = 5
    # c0 = 0 and c1 = 2*c0 force both to zero; c2 = 3*c3 chains through c3 = c4
    rows = [{0: 1}, {1: 1, 0: -2 % p}, {2: 1, 3: -3 % p}, {3: 1, 4: -1 % p}]
    canon = _sparse_canon(rows, p)
    assert canon[0] == {} and canon[1] == {}
    assert canon[2] == {4: 3} and canon[3] == {4: 1}


KNOWN_DIMS = {
    ("single", 2): [2, 4, 12, 16, 32, 36, 62, 64],
    ("single", 3): [3, 6, 21, 32, 70, 94, 166, 208],
    ("double", 3): [2, 4, 18, 30, 78, 114, 226, 302],
    ("triple", 3): [2, 4, 21, 36, 99, 146, 296, 396],
}


@pytest.mark.parametrize("kind,n", sorted(KNOWN_DIMS))
def test_bimodule_dimensions(kind, n):
    alg = WebsterAlgebra(n, 3)
    bm = {"single": lambda: merge_bimodule(alg, 1),
          "double": lambda: double_merge_bimodule(alg, 1),
          "triple": lambda: triple_bimodule(alg, 1)}[kind]()
    dims = [bm.dim(d) for d in range(8)]
    assert dims == KNOWN_DIMS[(kind, n)]


@pytest.mark.parametrize("n", [2, 3])
def test_family_enumeration_matches_quotient(n):
    alg = WebsterAlgebra(n, 3)
    mods = [merge_bimodule(alg, 1)]
    if n >= 3:
        mods.append(double_merge_bimodule(alg, 1))
        mods.append(triple_bimodule(alg, 1))
    for bm in mods:
        for d in range(7):
            fam = enumerate_bimodule_basis(bm, d)
            assert len(fam) == len(set(fam)) == family_dimension(bm, d)
            assert family_dimension(bm, d) == bm.dim(d)


def test_mirror_triple_matches_triple_dims():
    alg = WebsterAlgebra(3, 3)
    left = triple_bimodule(alg, 1)
    right = mirror_triple_bimodule(alg, 1)
    for d in range(8):
        assert left.dim(d) == right.dim(d)


def test_plain_algebra_bimodule_matches_algebra():
    alg = WebsterAlgebra(2, 3)
    bm = plain_algebra_bimodule(alg)
    for d in range(8):
        assert bm.dim(d) == len(alg.enumerate_basis(d))


def test_bimodule_action_axioms():
    alg = WebsterAlgebra(2, 5)
    bm = merge_bimodule(alg, 1)
    rng = random.Random(1)
    for _ in range(25):
        m = bm.from_coords(
            np.array([rng.randrange(5) for _ in range(bm.dim(3))]), 3)
        a = alg.random_element(rng.randrange(3), rng)
        b = alg.random_element(rng.randrange(3), rng)
        c = alg.random_element(rng.randrange(3), rng)
        assert bimod_mul(a * b, m, alg.one()) == \
            bimod_mul(a, bimod_mul(b, m, alg.one()), alg.one())
        assert bimod_mul(alg.one(), m, b * c) == \
            bimod_mul(alg.one(), bimod_mul(alg.one(), m, b), c)
        assert bimod_mul(a, bimod_mul(alg.one(), m, b), alg.one()) == \
            bimod_mul(a, m, b)


def test_bimodule_differential_leibniz():
    alg = WebsterAlgebra(2, 3)
    bm = merge_bimodule(alg, 1)
    rng = random.Random(2)
    for _ in range(25):
        d = rng.randrange(4)
        dim = bm.dim(d)
        m = bm.from_coords(np.array([rng.randrange(3) for _ in range(dim)]), d)
        a = alg.random_element(rng.randrange(3), rng)
        b = alg.random_element(rng.randrange(3), rng)
        lhs = bimod_differential(bimod_mul(a, m, b))
        rhs = bimod_mul(alg.differential(a), m, b) + \
            bimod_mul(a, bimod_differential(m), b) + \
            bimod_mul(a, m, alg.differential(b))
        assert lhs == rhs


@pytest.mark.parametrize("n", [2, 3])
def test_differential_p_fold_nilpotent_on_components(n):
    alg = WebsterAlgebra(n, 3)
    bm = merge_bimodule(alg, 1)
    for d in range(3):
        M = np.eye(bm.dim(d), dtype=np.int64)
        for k in range(alg.p):
            M = lf.mat_mul(bm.differential_matrix(d + 2 * k), M, alg.p)
        assert not M.any()


def test_tensor_dimension_consistency():
    alg = WebsterAlgebra(3, 3)
    w1 = merge_bimodule(alg, 1)
    w2 = merge_bimodule(alg, 2)
    t = tensor_bimodule(w1, w2, w1)
    direct = triple_bimodule(alg, 1)
    for d in range(6):
        assert t.dim(d) == direct.dim(d)


def test_straighten_is_balanced():
    alg = WebsterAlgebra(2, 3)
    bm = merge_bimodule(alg, 1)
    # elements symmetric in x_1, x_2 slide across the merge junction
    e0 = alg.e(0)
    for mid in (alg.y() * e0, (alg.x(1) + alg.x(2)) * e0,
                (alg.x(1) * alg.x(2)) * e0):
        left = straighten(bm, [mid, e0])
        right = straighten(bm, [e0, mid])
        assert not left.is_zero()
        assert left == right
    # x_1 alone does not slide
    assert straighten(bm, [alg.x(1) * e0, e0]) != \
        straighten(bm, [e0, alg.x(1) * e0])


@pytest.mark.parametrize("n", [2, 3])
def test_structure_maps_are_maps(n):
    alg = WebsterAlgebra(n, 3)
    maps = [epsilon(alg, 1), iota(alg, 1)]
    if n >= 3:
        maps.append(alpha_ii1(alg, 1))
        maps.append(alpha_i1i(alg, 1))
    for fm in maps:
        assert fm.is_bimodule_map(5)
        assert fm.is_d_equivariant(5)
