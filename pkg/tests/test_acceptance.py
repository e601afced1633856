"""End-to-end verification suites at full size, each with a wall-clock budget.

These run the same suites the CLI exposes at the documented parameters:
relation identities, differential laws, basis/dimension agreement, structure
map equivariance, the direct sum decomposition of the doubled bimodule, the
short exact sequence, homotopy equivalence certificates for the elementary
complexes, and their stretched p-regime counterparts.
"""

import time

import pytest

from websterp.webster_core import WebsterAlgebra
from websterp.cli_report import (
    check_basis, check_differential, check_homs, check_relations,
)
from websterp.homological import (
    braid_certificate, build_sigma, build_sigma_prime, contraction_certificate,
    exact_sequence_certificate, far_commutation_certificate, p_functor_report,
    square_decomposition_certificate, stretched_contraction_certificate,
    tensor_complexes,
)

SEED = 20260826
_ALGS = {}


def algebra(n, p):
    key = (n, p)
    if key not in _ALGS:
        _ALGS[key] = WebsterAlgebra(n, p)
    return _ALGS[key]


class Budget:
    """Context manager asserting a wall-clock budget in seconds."""

    def __init__(self, seconds):
        self.seconds = seconds

    def __enter__(self):
        self.t0 = time.monotonic()
        return self

    def __exit__(self, *exc):
        if exc[0] is None:
            elapsed = time.monotonic() - self.t0
            assert elapsed < self.seconds, \
                f"took {elapsed:.1f}s, budget {self.seconds}s"
        return False


def test_relation_identities_all_small_ranks():
    with Budget(60):
        for n in (2, 3):
            for p in (3, 5):
                res = check_relations(algebra(n, p), 8, SEED, 1000)
                assert res["ok"], (n, p, res)


def test_differential_leibniz_and_nilpotence():
    with Budget(120):
        for n, p in ((2, 3), (2, 5), (3, 3)):
            res = check_differential(algebra(n, p), 8, SEED, 1000)
            assert res["ok"], (n, p, res)
            assert res["leibniz_pairs"] >= 1000


def test_basis_enumeration_closure_and_dimensions():
    with Budget(300):
        for n in (2, 3):
            res = check_basis(algebra(n, 3), 8, SEED, 1000)
            assert res["ok"], (n, res)
            assert res["closure"]["ok"]
            assert [d for d, _ in res["algebra_dims"]] == list(range(11))
            assert all(s for _, s in res["separation"])
            expected_tables = {"W_1"} if n == 2 else \
                {"W_1", "W_12", "W_1 W_2 W_1"}
            assert set(res["bimodule_dims"]) == expected_tables
            for rows in res["bimodule_dims"].values():
                assert [d for d, _, _ in rows] == list(range(9))
                assert all(quo == fam for _, quo, fam in rows)


def test_structure_maps_equivariance_and_splittings():
    with Budget(120):
        for n in (2, 3):
            res = check_homs(algebra(n, 3), 8, SEED, 1000)
            assert res["ok"], (n, res)
            if n >= 3:
                assert res["sigma_bimodule_map"] and res["tau_bimodule_map"]
                assert not res["sigma_equivariant"]
                assert not res["tau_equivariant"]


def test_doubled_bimodule_decomposition():
    with Budget(180):
        for n in (2, 3):
            cert = square_decomposition_certificate(algebra(n, 3), 1, 8)
            assert cert["ok"], (n, cert)


def test_short_exact_sequence():
    with Budget(180):
        cert = exact_sequence_certificate(algebra(3, 3), 1, 8)
        assert cert["ok"], cert


def test_homotopy_equivalences():
    with Budget(600):
        for n in (2, 3):
            alg = algebra(n, 3)
            fwd = contraction_certificate(
                tensor_complexes(build_sigma(alg, 1),
                                 build_sigma_prime(alg, 1)), 8, seed=SEED)
            assert fwd["ok"], (n, "fwd", fwd)
            bwd = contraction_certificate(
                tensor_complexes(build_sigma_prime(alg, 1),
                                 build_sigma(alg, 1)), 8, seed=SEED)
            assert bwd["ok"], (n, "bwd", bwd)
        far = far_commutation_certificate(algebra(4, 3), 1, 3, 8, seed=SEED)
        assert far["ok"], far
        assert far["strict"]
        braid = braid_certificate(algebra(3, 3), 6, seed=SEED)
        assert braid["ok"], braid


def test_stretched_contraction_p_regime():
    with Budget(600):
        cert = stretched_contraction_certificate(algebra(2, 3), 1, 6,
                                                 seed=SEED)
        assert cert["ok"], cert
        assert cert["d_power_zero"]
        assert cert["p_homotopy_found"]
        assert cert["t_tensor_contractible"]


def test_stretching_functor_preserves_null_homotopies():
    with Budget(120):
        rep = p_functor_report(algebra(2, 3), 1, 6, count=20, seed=SEED)
        assert rep["ok"], rep
        assert rep["structural_t"] and rep["structural_t_prime"]
        assert rep["null_homotopic_preserved"] == rep["count"] == 20
