"""Complexes of bimodules, chain maps, homotopies, certificates (small sizes)."""

import numpy as np
import pytest

from websterp.webster_core import WebsterAlgebra
from websterp.homological import (
    NotFound, build_sigma, build_sigma_prime, build_t, build_t_prime,
    compose_components, contraction_certificate, equivalence_certificate,
    identity_complex, identity_components, p_extend, p_extend_chain_map,
    p_functor_report, solve_null_homotopy, square_decomposition_certificate,
    stretched_contraction_certificate, structurally_equal, tensor_complexes,
    verify_chain_map, verify_homotopy_identity, _dpow,
)


@pytest.fixture(scope="module")
def alg2():
    return WebsterAlgebra(2, 3)


def test_sigma_complex_shape(alg2):
    c = build_sigma(alg2, 1)
    assert c.positions() == [-1, 0]
    cp = build_sigma_prime(alg2, 1)
    assert cp.positions() == [0, 1]
    assert c.check(6)
    assert cp.check(6)


def test_tensor_complex_d_squared(alg2):
    c = tensor_complexes(build_sigma(alg2, 1), build_sigma_prime(alg2, 1))
    assert c.positions() == [-1, 0, 1]
    assert c.check(5)
    for q in c.positions():
        for d in range(5):
            assert not _dpow(c, q, 2, d).any()


def test_identity_complex_roundtrip(alg2):
    c = identity_complex(alg2)
    ident = identity_components(c, 6)
    assert verify_chain_map(ident, c, c, 6)
    sq = compose_components(ident, ident, alg2.p)
    assert verify_chain_map(sq, c, c, 6)


def test_contraction_both_orders(alg2):
    for forward in (True, False):
        pair = (build_sigma(alg2, 1), build_sigma_prime(alg2, 1))
        if not forward:
            pair = pair[::-1]
        cert = contraction_certificate(tensor_complexes(*pair), 6)
        assert cert["ok"], cert


def test_self_equivalence(alg2):
    c = build_sigma(alg2, 1)
    cert = equivalence_certificate(c, c, 6)
    assert cert["ok"], cert
    assert cert["equivariant"]


def test_square_decomposition_small(alg2):
    cert = square_decomposition_certificate(alg2, 1, 6)
    assert cert["ok"], cert


def test_p_extend_structure(alg2):
    c = p_extend(build_sigma(alg2, 1))
    assert structurally_equal(c, build_t(alg2, 1), 6)
    cp = p_extend(build_sigma_prime(alg2, 1))
    assert structurally_equal(cp, build_t_prime(alg2, 1), 6)
    assert c.regime == "dp"
    assert c.check(6)
    for q in c.positions():
        for d in range(5):
            assert not _dpow(c, q, alg2.p, d).any()


def test_p_extend_preserves_chain_maps(alg2):
    c = build_sigma(alg2, 1)
    ident = identity_components(c, 6)
    ext = p_extend_chain_map(ident, c, c)
    ce = p_extend(c)
    assert verify_chain_map(ext, ce, ce, 6)


def test_null_homotopy_of_zero_map(alg2):
    c = build_sigma(alg2, 1)
    h = solve_null_homotopy({}, c, 6)
    assert not isinstance(h, NotFound)
    assert verify_homotopy_identity(
        {q: {} for q in c.positions()}, h, c, c, 6)


def test_p_functor_report_small(alg2):
    rep = p_functor_report(alg2, 1, 6, count=5)
    assert rep["ok"], rep
    assert rep["null_homotopic_preserved"] == rep["count"] == 5


def test_stretched_contraction_small(alg2):
    cert = stretched_contraction_certificate(alg2, 1, 6)
    assert cert["ok"], cert
