"""Command line front end: verification suites and machine-diffable reports.

Each suite returns a JSON-serializable dict with an "ok" flag.  Reports are
deterministic for a fixed (config, seed); wall-clock timings live in a
separate "timings" section so the rest of the report is byte-stable.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time

import numpy as np

from .scalar_poly import is_prime
from .webster_core import WebsterAlgebra
from .polynomial_rep import (
    dd_operator,
    fingerprint,
    fingerprint_operator,
    rho,
    separation_check,
)
from .bimodule_calc import (
    alpha_i1i,
    alpha_ii1,
    double_merge_bimodule,
    enumerate_bimodule_basis,
    epsilon,
    iota,
    merge_bimodule,
    pi,
    split_sigma,
    split_tau,
    triple_bimodule,
)
from .homological import (
    braid_certificate,
    build_sigma,
    build_sigma_prime,
    contraction_certificate,
    far_commutation_certificate,
    p_functor_report,
    square_decomposition_certificate,
    exact_sequence_certificate,
    stretched_contraction_certificate,
    tensor_complexes,
)

SCHEMA_VERSION = 1

CHECK_NAMES = ("relations", "differential", "basis", "rep-oracle",
               "bimodules", "homs", "ses", "bb", "braid", "p-extend")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()
                if not str(k).startswith("_")}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, (np.bool_,)):
        return bool(obj)
    if isinstance(obj, np.ndarray):
        return obj.tolist()
    return obj


def _relation_pairs(alg: WebsterAlgebra) -> list:
    """(label, lhs, rhs) for every defining relation instance."""
    n = alg.n
    pairs = []
    total = alg.zero()
    for k in range(n + 1):
        total = total + alg.e(k)
    pairs.append(("idempotent sum", total, alg.one()))
    for k in range(n + 1):
        for l in range(n + 1):
            rhs = alg.e(k) if k == l else alg.zero()
            pairs.append((f"e{k}*e{l}", alg.mul(alg.e(k), alg.e(l)), rhs))
    for j in range(1, n + 1):
        for k in range(n + 1):
            lhs = alg.mul(alg.psi(j), alg.e(k))
            if k == j:
                rhs = alg.mul(alg.e(j - 1), alg.psi(j))
            elif k == j - 1:
                rhs = alg.mul(alg.e(j), alg.psi(j))
            else:
                rhs = alg.zero()
            pairs.append((f"psi{j}*e{k} slide", lhs, rhs))
    for j in range(1, n + 1):
        for l in range(1, n + 1):
            if abs(j - l) > 1:
                pairs.append((f"psi{j}psi{l} far commute",
                              alg.mul(alg.psi(j), alg.psi(l)),
                              alg.mul(alg.psi(l), alg.psi(j))))
    central = [(f"x{j}", alg.x(j)) for j in range(1, n + 1)]
    central.append(("y", alg.y()))
    gens = [(f"e{k}", alg.e(k)) for k in range(n + 1)]
    gens += [(f"psi{j}", alg.psi(j)) for j in range(1, n + 1)]
    gens += central
    for cname, c in central:
        for gname, g in gens:
            pairs.append((f"{cname} central vs {gname}",
                          alg.mul(c, g), alg.mul(g, c)))
    for j in range(1, n + 1):
        for k in (j - 1, j):
            ek = alg.e(k)
            lhs = alg.mul(alg.mul(alg.psi(j), alg.psi(j)), ek)
            rhs = alg.mul(alg.y() - alg.x(j), ek)
            pairs.append((f"psi{j}^2*e{k}", lhs, rhs))
    return pairs


def check_relations(alg: WebsterAlgebra, D: int, seed: int,
                    corpus: int) -> dict:
    failures = []
    for label, lhs, rhs in _relation_pairs(alg):
        if lhs != rhs:
            failures.append({"relation": label, "kind": "element"})
        elif not fingerprint(lhs, D) == fingerprint(rhs, D):
            failures.append({"relation": label, "kind": "operator"})
    return {"ok": not failures, "checked": len(_relation_pairs(alg)),
            "window": D, "failures": failures}


def check_differential(alg: WebsterAlgebra, D: int, seed: int,
                       corpus: int) -> dict:
    rng = random.Random(seed)
    pairs = max(corpus, 1000)
    leibniz_fail = 0
    for _ in range(pairs):
        a = alg.random_element(rng.randrange(5), rng)
        b = alg.random_element(rng.randrange(5), rng)
        lhs = alg.differential(alg.mul(a, b))
        rhs = alg.mul(alg.differential(a), b) + alg.mul(a, alg.differential(b))
        if lhs != rhs:
            leibniz_fail += 1
    power_fail = []
    for d in range(D + 1):
        for t in alg.enumerate_basis(d):
            v = alg.element({t: 1})
            for _ in range(alg.p):
                v = alg.differential(v)
            if not v.is_zero():
                power_fail.append(repr(t))
    return {"ok": leibniz_fail == 0 and not power_fail,
            "leibniz_pairs": pairs, "leibniz_failures": leibniz_fail,
            "power_window": D, "power_failures": power_fail}


def _closure_check(alg: WebsterAlgebra, max_d: int, seed: int,
                   corpus: int) -> dict:
    """The span of reduced words per degree is exactly the enumerated basis.

    Normal forms are idempotent (every enumerated element is the reduction
    of its own word), so the closure contains the basis; random degree-d
    words reduce to combinations supported on the enumerated degree-d
    basis, so the closure adds nothing.  Together the closure dimension in
    degree d equals the enumerated count.
    """
    rng = random.Random(seed)
    by_degree = {d: set(alg.enumerate_basis(d)) for d in range(max_d + 1)}
    for d, basis in by_degree.items():
        for t in basis:
            red = alg.reduce(alg.word_of(t))
            if dict(red.terms) != {t: 1}:
                return {"ok": False, "stage": "normal_form", "element": repr(t)}
    gens = [("psi", j) for j in range(1, alg.n + 1)] + \
        [("x", j) for j in range(1, alg.n + 1)] + [("y",)] + \
        [("e", k) for k in range(alg.n + 1)]
    deg = {"psi": 1, "x": 2, "y": 2, "e": 0}
    for _ in range(corpus):
        word, d = [], 0
        target = rng.randrange(max_d + 1)
        while True:
            cand = [g for g in gens if d + deg[g[0]] <= target]
            if not cand or (d == target and rng.random() < 0.4):
                break
            g = rng.choice(cand)
            word.append(g)
            d += deg[g[0]]
        red = alg.reduce(tuple(word))
        if any(t not in by_degree[d] for t in red.terms):
            return {"ok": False, "stage": "closure", "word": repr(word)}
    return {"ok": True, "samples": corpus}


def check_basis(alg: WebsterAlgebra, D: int, seed: int, corpus: int) -> dict:
    algebra_dims = []
    separation = []
    for d in range(max(D, 10) + 1):
        algebra_dims.append([d, len(alg.enumerate_basis(d))])
        separation.append([d, bool(separation_check(alg, d, margin=4))])
    closure = _closure_check(alg, max(D, 10), seed, max(corpus, 200))
    bims = [("W_1", merge_bimodule(alg, 1))]
    if alg.n >= 3:
        bims.append(("W_12", double_merge_bimodule(alg, 1)))
        bims.append(("W_1 W_2 W_1", triple_bimodule(alg, 1)))
    tables = {}
    mismatches = []
    for name, bm in bims:
        rows = []
        for d in range(D + 1):
            quo = bm.dim(d)
            fam = len(enumerate_bimodule_basis(bm, d))
            rows.append([d, quo, fam])
            if quo != fam:
                mismatches.append([name, d, quo, fam])
        tables[name] = rows
    ok = not mismatches and all(s for _, s in separation) and closure["ok"]
    return {"ok": ok, "algebra_dims": algebra_dims,
            "separation": separation, "closure": closure,
            "bimodule_dims": tables, "mismatches": mismatches}


def check_rep_oracle(alg: WebsterAlgebra, D: int, seed: int,
                     corpus: int) -> dict:
    rng = random.Random(seed)
    comp_fail = 0
    trials = max(corpus // 10, 50)
    for _ in range(trials):
        a = alg.random_element(rng.randrange(4), rng)
        b = alg.random_element(rng.randrange(4), rng)
        lhs = fingerprint(alg.mul(a, b), D)
        rhs = fingerprint_operator(rho(a) @ rho(b), D)
        if not lhs == rhs:
            comp_fail += 1
    braid_ok = True
    if alg.n >= 3:
        for i in range(1, alg.n - 1):
            lhs = dd_operator(alg.n, alg.p, i) \
                @ dd_operator(alg.n, alg.p, i + 1) \
                @ dd_operator(alg.n, alg.p, i)
            rhs = dd_operator(alg.n, alg.p, i + 1) \
                @ dd_operator(alg.n, alg.p, i) \
                @ dd_operator(alg.n, alg.p, i + 1)
            if not fingerprint_operator(lhs, D) == fingerprint_operator(rhs, D):
                braid_ok = False
    return {"ok": comp_fail == 0 and braid_ok, "pairs": trials,
            "composition_failures": comp_fail,
            "divided_difference_braid": braid_ok}


def check_bimodules(alg: WebsterAlgebra, D: int, seed: int,
                    corpus: int) -> dict:
    from .linalg_fp import mat_mul
    bims = [("W_1", merge_bimodule(alg, 1))]
    if alg.n >= 3:
        bims.append(("W_12", double_merge_bimodule(alg, 1)))
        bims.append(("W_1 W_2 W_1", triple_bimodule(alg, 1)))
    dims = {}
    mismatches = []
    power_fail = []
    for name, bm in bims:
        rows = []
        for d in range(D + 1):
            quo = bm.dim(d)
            fam = len(enumerate_bimodule_basis(bm, d))
            rows.append([d, quo, fam])
            if quo != fam:
                mismatches.append([name, d, quo, fam])
        dims[name] = rows
        for d in range(0, max(D - 2 * alg.p + 1, 0)):
            M = np.eye(bm.dim(d), dtype=np.int64)
            for s in range(alg.p):
                M = mat_mul(bm.differential_matrix(d + 2 * s), M, alg.p)
            if M.any():
                power_fail.append([name, d])
    return {"ok": not mismatches and not power_fail, "dims": dims,
            "mismatches": mismatches, "differential_power_failures":
            power_fail}


def check_homs(alg: WebsterAlgebra, D: int, seed: int, corpus: int) -> dict:
    from .linalg_fp import mat_mul
    out: dict = {}
    e = epsilon(alg, 1)
    out["epsilon_bimodule_map"] = e.is_bimodule_map(D)
    out["epsilon_equivariant"] = e.is_d_equivariant(D)
    i = iota(alg, 1)
    out["iota_bimodule_map"] = i.is_bimodule_map(D)
    out["iota_equivariant"] = i.is_d_equivariant(D)
    out["iota_target_twist"] = [i.dst.junctions[0].twist, i.dst.shift]
    if alg.n >= 3:
        a = alpha_ii1(alg, 1)
        out["alpha_bimodule_map"] = a.is_bimodule_map(D)
        out["alpha_equivariant"] = a.is_d_equivariant(D)
        am = alpha_i1i(alg, 1)
        out["alpha_mirror_bimodule_map"] = am.is_bimodule_map(D)
        out["alpha_mirror_equivariant"] = am.is_d_equivariant(D)
        fpi = pi(alg, 1, D)
        out["pi_bimodule_map"] = fpi.is_bimodule_map(D)
        out["pi_equivariant"] = all(np.array_equal(
            mat_mul(fpi.matrix(d + 2), fpi.src.differential_matrix(d),
                    alg.p),
            mat_mul(fpi.dst.differential_matrix(d), fpi.matrix(d), alg.p))
            for d in range(D - 1))
        ss = split_sigma(alg, 1, D)
        st = split_tau(alg, 1, D)
        out["sigma_bimodule_map"] = ss.is_bimodule_map(D)
        out["tau_bimodule_map"] = st.is_bimodule_map(D)
        out["sigma_splits_alpha"] = all(np.array_equal(
            mat_mul(ss.matrix(d), a.matrix(d), alg.p),
            np.eye(a.src.dim(d), dtype=np.int64)) for d in range(D + 1))
        out["pi_splits_tau"] = all(np.array_equal(
            mat_mul(fpi.matrix(d), st.matrix(d), alg.p),
            np.eye(st.src.dim(d), dtype=np.int64)) for d in range(D + 1))
        out["sigma_equivariant"] = ss.is_d_equivariant(D)
        out["tau_equivariant"] = st.is_d_equivariant(D)
        ok = all(out[k] for k in out if isinstance(out[k], bool)
                 and not k.endswith("_equivariant")) \
            and out["alpha_equivariant"] and out["pi_equivariant"] \
            and out["epsilon_equivariant"] and out["iota_equivariant"] \
            and out["alpha_mirror_equivariant"] \
            and not out["sigma_equivariant"] and not out["tau_equivariant"]
    else:
        ok = (out["epsilon_bimodule_map"] and out["epsilon_equivariant"]
              and out["iota_bimodule_map"] and out["iota_equivariant"])
    out["ok"] = bool(ok)
    return out


def check_ses(alg: WebsterAlgebra, D: int, seed: int, corpus: int) -> dict:
    if alg.n < 3:
        return {"ok": True, "skipped": "requires n >= 3"}
    return exact_sequence_certificate(alg, 1, D)


def check_bb(alg: WebsterAlgebra, D: int, seed: int, corpus: int) -> dict:
    return square_decomposition_certificate(alg, 1, D, seed=seed)


def check_braid(alg: WebsterAlgebra, D: int, seed: int,
                corpus: int) -> dict:
    out: dict = {}
    s = build_sigma(alg, 1)
    sp = build_sigma_prime(alg, 1)
    out["sigma_sigma_prime"] = contraction_certificate(
        tensor_complexes(s, sp), D, seed=seed)
    out["sigma_prime_sigma"] = contraction_certificate(
        tensor_complexes(sp, s), D, seed=seed)
    if alg.n >= 4:
        out["far_commutation"] = far_commutation_certificate(
            alg, 1, 3, D, seed)
    if alg.n >= 3:
        out["braid"] = braid_certificate(alg, min(D, 6), seed)
    out["ok"] = all(v.get("ok", False) for k, v in out.items()
                    if isinstance(v, dict))
    return out


def check_p_extend(alg: WebsterAlgebra, D: int, seed: int,
                   corpus: int) -> dict:
    out = {"stretched": stretched_contraction_certificate(alg, 1, D,
                                                          seed=seed),
           "functor": p_functor_report(alg, 1, D,
                                       count=max(20, corpus // 50),
                                       seed=seed)}
    out["ok"] = out["stretched"]["ok"] and out["functor"]["ok"]
    return out


_SUITES = {
    "relations": check_relations,
    "differential": check_differential,
    "basis": check_basis,
    "rep-oracle": check_rep_oracle,
    "bimodules": check_bimodules,
    "homs": check_homs,
    "ses": check_ses,
    "bb": check_bb,
    "braid": check_braid,
    "p-extend": check_p_extend,
}


def run_report(n: int, p: int, D: int, seed: int, checks: list,
               corpus: int) -> dict:
    alg = WebsterAlgebra(n=n, p=p)
    report = {
        "schema_version": SCHEMA_VERSION,
        "config": {"n": n, "p": p, "D": D, "seed": seed,
                   "corpus_size": corpus, "checks": list(checks)},
        "checks": {},
        "timings": {},
    }
    for name in checks:
        t0 = time.time()
        result = _SUITES[name](alg, D, seed, corpus)
        report["timings"][name] = round(time.time() - t0, 3)
        report["checks"][name] = _jsonable(result)
    report["ok"] = all(report["checks"][name].get("ok", False)
                       for name in checks)
    return report


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="websterp",
        description="Exact verification suites for the deformed Webster "
                    "algebra W(n,1) over F_p.")
    ap.add_argument("--n", type=int, default=2, help="strand count >= 2")
    ap.add_argument("--p", type=int, default=3, help="odd prime")
    ap.add_argument("--D", type=int, default=8, dest="D",
                    help="internal degree window >= 4")
    ap.add_argument("--seed", type=int, default=20260826)
    ap.add_argument("--check", type=str, default=",".join(CHECK_NAMES),
                    help="comma separated: " + " | ".join(CHECK_NAMES))
    ap.add_argument("--json", type=str, default=None,
                    help="write the JSON report to this path")
    ap.add_argument("--corpus-size", type=int, default=1000,
                    help="random corpus size for property suites")
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    args = ap.parse_args(argv)
    if args.n < 2:
        ap.error("--n must be >= 2")
    if args.p <= 2 or not is_prime(args.p):
        ap.error("--p must be an odd prime")
    if args.D < 4:
        ap.error("--D must be >= 4")
    checks = [c.strip() for c in args.check.split(",") if c.strip()]
    bad = [c for c in checks if c not in _SUITES]
    if bad:
        ap.error(f"unknown checks: {', '.join(bad)}")
    report = run_report(args.n, args.p, args.D, args.seed, checks,
                        args.corpus_size)
    text = json.dumps(report, indent=2)
    if args.json:
        with open(args.json, "w") as fh:
            fh.write(text + "\n")
    print(text)
    return 0 if report["ok"] else 1


if __name__ == "__main__":
    sys.exit(main())
