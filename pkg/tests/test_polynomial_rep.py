"""Polynomial representation: module axioms, fingerprints, separation."""

import random

import pytest

from websterp.webster_core import WebsterAlgebra
from websterp.polynomial_rep import (
    VnElement, act, dd_operator, fingerprint, fingerprint_operator, rho,
    separation_check, vn_monomials,
)


@pytest.fixture(params=[(2, 3), (3, 3), (2, 5)], ids=lambda t: f"n{t[0]}p{t[1]}")
def alg(request):
    return WebsterAlgebra(*request.param)


def test_action_is_multiplicative(alg):
    rng = random.Random(17)
    D = 6
    for _ in range(30):
        a = alg.random_element(rng.randrange(3), rng)
        b = alg.random_element(rng.randrange(3), rng)
        lhs = fingerprint(a * b, D)
        rhs = fingerprint_operator(rho(a) @ rho(b), D)
        assert lhs == rhs


def test_action_respects_linearity(alg):
    rng = random.Random(5)
    for _ in range(20):
        a = alg.random_element(2, rng)
        k, m = rng.randrange(alg.n + 1), (0,) * (alg.n + 1)
        v = VnElement.monomial(alg.n, alg.p, k, m)
        w = VnElement.monomial(alg.n, alg.p, k, (1,) + (0,) * alg.n)
        assert act(a, v + w) == act(a, v) + act(a, w)
        assert act(a, v.scale(3)) == act(a, v).scale(3)


def test_identity_acts_as_identity(alg):
    one = rho(alg.one())
    for k in range(alg.n + 1):
        v = VnElement.monomial(alg.n, alg.p, k, tuple(range(alg.n + 1)))
        assert one(v) == v


def test_psi_relations_as_operators(alg):
    D = 6
    for j in range(1, alg.n + 1):
        sq = fingerprint(alg.psi(j) * alg.psi(j), D)
        cen = alg.zero()
        for k in (j - 1, j):
            cen = cen + (alg.y() - alg.x(j)) * alg.e(k)
        assert sq == fingerprint(cen, D)


def test_fingerprint_separates_basis(alg):
    for d in range(7):
        assert separation_check(alg, d)


def test_fingerprint_nonzero_on_basis(alg):
    for d in range(6):
        for t in alg.enumerate_basis(d):
            fp = fingerprint(alg.basis(*t[:3], a=t.a, b=t.b), d + 4)
            assert not fp.is_zero()


def test_divided_difference_operators_braid():
    n, p, D = 3, 5, 6
    dd = [None] + [dd_operator(n, p, i) for i in range(1, n)]
    lhs = fingerprint_operator(dd[1] @ dd[2] @ dd[1], D)
    rhs = fingerprint_operator(dd[2] @ dd[1] @ dd[2], D)
    assert lhs == rhs
    sq = fingerprint_operator(dd[1] @ dd[1], D)
    assert sq.is_zero()


def test_vn_monomials_graded_count():
    n = 2
    mons = vn_monomials(n, 4)
    assert len(mons) == len(set(mons))
    for k, m in mons:
        assert 0 <= k <= n
        assert 2 * sum(m) <= 4
