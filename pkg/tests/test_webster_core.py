"""Algebra structure: defining relations, associativity, differential, parsing."""

import random

import pytest

from websterp.webster_core import WebsterAlgebra, parse_element, parse_word


def algebras():
    return [WebsterAlgebra(2, 3), WebsterAlgebra(2, 5), WebsterAlgebra(3, 3)]


@pytest.mark.parametrize("alg", algebras(), ids=repr)
def test_idempotent_relations(alg):
    es = [alg.e(k) for k in range(alg.n + 1)]
    total = alg.zero()
    for k, ek in enumerate(es):
        total = total + ek
        for l, el in enumerate(es):
            prod = ek * el
            assert prod == (ek if k == l else alg.zero())
    assert total == alg.one()


@pytest.mark.parametrize("alg", algebras(), ids=repr)
def test_psi_idempotent_exchange(alg):
    for j in range(1, alg.n + 1):
        psi = alg.psi(j)
        for k in range(alg.n + 1):
            lhs = psi * alg.e(k)
            if k in (j - 1, j):
                swapped = j - 1 if k == j else j
                assert lhs == alg.e(swapped) * psi
            else:
                assert lhs.is_zero()
                assert (alg.e(k) * psi).is_zero()


@pytest.mark.parametrize("alg", algebras(), ids=repr)
def test_psi_square(alg):
    for j in range(1, alg.n + 1):
        sq = alg.psi(j) * alg.psi(j)
        for k in range(alg.n + 1):
            got = sq * alg.e(k)
            if k in (j - 1, j):
                assert got == (alg.y() - alg.x(j)) * alg.e(k)
            else:
                assert got.is_zero()


@pytest.mark.parametrize("alg", algebras(), ids=repr)
def test_centrality_and_far_commutation(alg):
    gens = [alg.psi(j) for j in range(1, alg.n + 1)] + \
        [alg.e(k) for k in range(alg.n + 1)]
    for c in [alg.x(j) for j in range(1, alg.n + 1)] + [alg.y()]:
        for g in gens:
            assert c * g == g * c
    for j in range(1, alg.n + 1):
        for l in range(1, alg.n + 1):
            if abs(j - l) > 1:
                assert alg.psi(j) * alg.psi(l) == alg.psi(l) * alg.psi(j)


@pytest.mark.parametrize("alg", algebras(), ids=repr)
def test_associativity_fuzz(alg):
    rng = random.Random(alg.n * 100 + alg.p)
    for _ in range(60):
        a = alg.random_element(rng.randrange(4), rng)
        b = alg.random_element(rng.randrange(4), rng)
        c = alg.random_element(rng.randrange(4), rng)
        assert (a * b) * c == a * (b * c)


@pytest.mark.parametrize("alg", algebras(), ids=repr)
def test_differential_leibniz_fuzz(alg):
    rng = random.Random(alg.n * 10 + alg.p)
    for _ in range(80):
        a = alg.random_element(rng.randrange(4), rng)
        b = alg.random_element(rng.randrange(4), rng)
        assert alg.differential(a * b) == \
            alg.differential(a) * b + a * alg.differential(b)


@pytest.mark.parametrize("alg", algebras(), ids=repr)
def test_differential_on_generators(alg):
    assert alg.differential(alg.y()) == alg.y() * alg.y()
    for j in range(1, alg.n + 1):
        assert alg.differential(alg.x(j)) == alg.x(j) * alg.x(j)
        expect = alg.x(j) * alg.psi(j) * alg.e(j - 1) + \
            alg.y() * alg.psi(j) * alg.e(j)
        assert alg.differential(alg.psi(j)) == expect
    for k in range(alg.n + 1):
        assert alg.differential(alg.e(k)).is_zero()


@pytest.mark.parametrize("alg", algebras(), ids=repr)
def test_differential_p_fold_nilpotent_on_basis(alg):
    for d in range(6):
        for t in alg.enumerate_basis(d):
            a = alg.basis(*t[:3], a=t.a, b=t.b)
            for _ in range(alg.p):
                a = alg.differential(a)
            assert a.is_zero()


def test_basis_elements_are_homogeneous_and_graded():
    alg = WebsterAlgebra(3, 3)
    for d in range(7):
        for t in alg.enumerate_basis(d):
            assert t.degree == d
            elt = alg.basis(*t[:3], a=t.a, b=t.b)
            assert elt.degree() == d
            db = alg.differential(elt)
            assert db.is_zero() or db.degree() == d + 2


def test_reduce_strategies_agree():
    alg = WebsterAlgebra(3, 5)
    rng = random.Random(0)
    gens = [("psi", 1), ("psi", 2), ("psi", 3), ("x", 1), ("x", 2), ("y",),
            ("e", 0), ("e", 1), ("e", 2), ("e", 3)]
    for _ in range(60):
        word = tuple(gens[rng.randrange(len(gens))]
                     for _ in range(rng.randrange(1, 7)))
        assert alg.reduce(word, "left") == alg.reduce(word, "right")


def test_parse_element_grammar():
    alg = WebsterAlgebra(3, 5)
    assert parse_element("e1", alg) == alg.e(1)
    got = parse_element("psi2*psi2*e1", alg)
    assert got == (alg.y() - alg.x(2)) * alg.e(1)
    assert len(got.terms) == 2
    roundtrip = parse_element("e2 * psi1 * x1^3 * y^2 * e1", alg)
    expect = alg.e(2) * alg.psi(1) * alg.x(1) * alg.x(1) * alg.x(1) * \
        alg.y() * alg.y() * alg.e(1)
    assert roundtrip == expect
    with pytest.raises(ValueError):
        parse_element("x1^(-1)", alg)
    with pytest.raises(ValueError):
        parse_word("e7", 3)
    with pytest.raises(ValueError):
        parse_word("psi0", 3)


def test_parse_element_signs_and_coefficients():
    alg = WebsterAlgebra(2, 5)
    got = parse_element("2*e1*x1 - y*e1 + 3*e0", alg)
    expect = alg.e(1).scale(2) * alg.x(1) - alg.y() * alg.e(1) + alg.e(0).scale(3)
    assert got == expect
