"""Polynomial ring F_p[x_1..x_n, y]: arithmetic, derivation, divided differences."""

import random

import pytest
from hypothesis import given, settings, strategies as st

from websterp.scalar_poly import (
    Polynomial, divided_difference, is_prime, parse_polynomial, poly_derivation,
)

N, P = 3, 5


def rand_poly(rng, n=N, p=P, deg=4, terms=4):
    out = Polynomial.zero(n, p)
    for _ in range(terms):
        m = tuple(rng.randrange(deg) for _ in range(n + 1))
        out = out + Polynomial.monomial(n, p, m, rng.randrange(1, p))
    return out


def test_is_prime():
    assert [m for m in range(2, 30) if is_prime(m)] == \
        [2, 3, 5, 7, 11, 13, 17, 19, 23, 29]
    assert not is_prime(1) and not is_prime(0) and not is_prime(-3)


polys = st.integers(0, 10 ** 6).map(lambda s: rand_poly(random.Random(s)))


@settings(max_examples=60, deadline=None)
@given(polys, polys, polys)
def test_ring_axioms(f, g, h):
    assert f + g == g + f
    assert f * g == g * f
    assert (f + g) * h == f * h + g * h
    assert (f * g) * h == f * (g * h)
    assert f - f == Polynomial.zero(N, P)
    assert f * Polynomial.one(N, P) == f


@settings(max_examples=60, deadline=None)
@given(polys, polys)
def test_derivation_is_leibniz(f, g):
    assert poly_derivation(f * g) == poly_derivation(f) * g + f * poly_derivation(g)


def test_derivation_on_generators():
    x1 = Polynomial.x(N, P, 1)
    y = Polynomial.y(N, P)
    assert poly_derivation(x1) == x1 * x1
    assert poly_derivation(y) == y * y


def test_derivation_p_fold_nilpotent():
    rng = random.Random(7)
    for _ in range(20):
        f = rand_poly(rng, deg=3)
        g = f
        for _ in range(P):
            g = poly_derivation(g)
        assert g.is_zero()


@settings(max_examples=40, deadline=None)
@given(polys, st.integers(1, N - 1))
def test_divided_difference_twisted_leibniz(f, i):
    g = rand_poly(random.Random(99))
    lhs = divided_difference(i, f * g)
    rhs = divided_difference(i, f) * g + f.swap(i) * divided_difference(i, g)
    assert lhs == rhs


def test_divided_difference_basics():
    x1, x2 = Polynomial.x(N, P, 1), Polynomial.x(N, P, 2)
    assert divided_difference(1, x1) == Polynomial.one(N, P)
    assert divided_difference(1, x2) == -Polynomial.one(N, P)
    sym = x1 * x2
    assert divided_difference(1, sym).is_zero()
    assert divided_difference(1, divided_difference(1, x1 * x1)).is_zero()


def test_swap_is_involution():
    rng = random.Random(3)
    for i in range(1, N):
        f = rand_poly(rng)
        assert f.swap(i).swap(i) == f


def test_substitute_y():
    f = Polynomial.y(N, P) * Polynomial.y(N, P) + Polynomial.x(N, P, 1)
    val = Polynomial.x(N, P, 2)
    assert f.substitute_y(val) == val * val + Polynomial.x(N, P, 1)


def test_degree_and_homogeneous_parts():
    f = rand_poly(random.Random(11))
    total = Polynomial.zero(N, P)
    for d in range(f.degree() + 1):
        part = f.homogeneous_part(d)
        assert part.is_zero() or part.is_homogeneous()
        total = total + part
    assert total == f


def test_parse_polynomial():
    f = parse_polynomial("x1^2*y + 3*x2 - 1", N, P)
    x1, x2, y = Polynomial.x(N, P, 1), Polynomial.x(N, P, 2), Polynomial.y(N, P)
    expect = x1 * x1 * y + x2.scale(3) - Polynomial.one(N, P)
    assert f == expect
