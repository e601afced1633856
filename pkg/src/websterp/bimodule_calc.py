"""Bimodules over W(n,1) induced by merging adjacent red strands.

A bimodule here is presented by tensor words: tuples (w_0, ..., w_m) of
canonical algebra basis elements separated by m "junctions".  Junction q
merges `arity` adjacent red strands starting at red index `pos`; the black
strand must sit in a slot outside the merged band at the interface, and
elements of the merged-strand subalgebra slide across the junction freely.
The bimodule is the span of valid tensor words modulo these sliding
relations, computed exactly in each internal degree by row reduction over
F_p.  The quotient is graded, each graded piece finite dimensional, so all
computations below are exact (no truncation error; the degree window only
bounds which degrees are inspected).

Twisted variants carry, per junction, an integer twist mu: the differential
picks up an extra term mu * (sum of merged red dots) inserted at the
junction.  A global internal-degree shift is recorded as well.

Closed-form basis enumerations (one family list per bimodule kind) provide
an independent dimension count used to cross-check the linear-algebra
quotient; see enumerate_bimodule_basis.
"""

from __future__ import annotations

from collections import namedtuple
from math import comb

import numpy as np

from .linalg_fp import rref
from .webster_core import (
    AlgebraElement,
    NormalBasisElement,
    WebsterAlgebra,
    compositions,
)

Junction = namedtuple("Junction", ["pos", "arity", "twist"])
Junction.__doc__ = """Merge of reds pos..pos+arity-1 with differential twist."""


def _sparse_canon(rows: list, p: int) -> dict:
    """Canonical forms for sparse relation rows (dicts: column -> coeff).

    Most relation rows have one or two nonzero entries, so they are absorbed
    by a union-find that tracks a multiplier per column (column = scalar *
    representative).  Only the residual rows with three or more surviving
    entries see dense row reduction.  Returns {column: form} where form is a
    dict over free columns with column = sum(form[k] * k) in the quotient
    (empty form means the column is zero); columns absent from the result
    are free.
    """
    parent: dict = {}
    mult: dict = {}
    zero: set = set()

    def find(i):
        if i not in parent:
            parent[i] = i
            mult[i] = 1
            return i, 1
        path = []
        j = i
        while parent[j] != j:
            path.append(j)
            j = parent[j]
        acc = 1
        for k in reversed(path):
            acc = (mult[k] * acc) % p
            parent[k] = j
            mult[k] = acc
        return j, (mult[i] if path else 1)

    pending = [dict(r) for r in rows]
    dense = pending
    changed = True
    while changed:
        changed = False
        pending, dense = dense, []
        for row in pending:
            acc: dict = {}
            for k, c in row.items():
                r, lam = find(k)
                if r in zero:
                    continue
                v = (acc.get(r, 0) + c * lam) % p
                if v:
                    acc[r] = v
                elif r in acc:
                    del acc[r]
            if not acc:
                continue
            if len(acc) == 1:
                zero.add(next(iter(acc)))
                changed = True
            elif len(acc) == 2:
                (a, ca), (b, cb) = acc.items()
                coeff = (-cb * pow(ca, -1, p)) % p
                parent[a] = b
                mult[a] = coeff
                if a in zero:
                    zero.discard(a)
                    zero.add(b)
                changed = True
            else:
                dense.append(acc)

    dense_form: dict = {}
    if dense:
        seen = set()
        uniq = []
        live_cols: set = set()
        for row in dense:
            inv = pow(next(iter(row.values())), -1, p)
            key = tuple(sorted((k, (c * inv) % p) for k, c in row.items()))
            if key not in seen:
                seen.add(key)
                uniq.append(row)
                live_cols.update(row)
        cols = sorted(live_cols)
        col_of = {k: c for c, k in enumerate(cols)}
        A = np.zeros((len(uniq), len(cols)), dtype=np.int64)
        for r, row in enumerate(uniq):
            for k, c in row.items():
                A[r, col_of[k]] = c
        R, pivots = rref(A, p)
        for r, c in enumerate(pivots):
            nzc = np.nonzero(R[r])[0]
            dense_form[cols[c]] = {
                cols[c2]: (-int(R[r, c2])) % p for c2 in nzc if c2 != c}

    result: dict = {}
    for i in list(parent):
        r, lam = find(i)
        if r in zero:
            result[i] = {}
        elif r in dense_form:
            form = dense_form[r]
            if i == r:
                result[i] = form
            else:
                result[i] = {k: (lam * c) % p for k, c in form.items()}
        elif i != r:
            result[i] = {r: lam}
    return result


def _junction_forbidden(j: Junction) -> frozenset:
    """Interface slots where the black strand cannot sit at the junction."""
    return frozenset(range(j.pos, j.pos + j.arity - 1))


_BIMODULE_CACHE: dict = {}


def get_bimodule(alg: WebsterAlgebra, junctions, shift: int = 0,
                 name: str = "") -> "Bimodule":
    """Shared-instance factory so component caches are reused."""
    junctions = tuple(Junction(*j) for j in junctions)
    key = (alg.n, alg.p, junctions, shift)
    hit = _BIMODULE_CACHE.get(key)
    if hit is None:
        hit = Bimodule(alg, junctions, shift, name)
        _BIMODULE_CACHE[key] = hit
    elif name and not hit.name:
        hit.name = name
    return hit


def plain_algebra_bimodule(alg: WebsterAlgebra) -> "Bimodule":
    """W as a bimodule over itself (no junctions)."""
    return get_bimodule(alg, (), 0, "W")


def merge_bimodule(alg: WebsterAlgebra, i: int, twist: int = 0,
                   shift: int = 0) -> "Bimodule":
    """W_i (reds i, i+1 merged), optionally twisted and degree-shifted."""
    if not 1 <= i <= alg.n - 1:
        raise ValueError(f"merge index {i} out of range for n={alg.n}")
    tag = {0: "", 1: "^+", -1: "^-"}[twist]
    nm = f"W_{i}{tag}" + (f"{{{shift}}}" if shift else "")
    return get_bimodule(alg, ((i, 2, twist),), shift, nm)


def double_merge_bimodule(alg: WebsterAlgebra, i: int) -> "Bimodule":
    """W_{i,i+1} (reds i, i+1, i+2 merged)."""
    if not 1 <= i <= alg.n - 2:
        raise ValueError(f"double merge index {i} out of range for n={alg.n}")
    return get_bimodule(alg, ((i, 3, 0),), 0, f"W_{{{i},{i + 1}}}")


def tensor_bimodule(*factors: "Bimodule") -> "Bimodule":
    """Tensor product over W: concatenate junction lists, add shifts."""
    alg = factors[0].alg
    junctions: tuple = ()
    shift = 0
    for f in factors:
        if (f.alg.n, f.alg.p) != (alg.n, alg.p):
            raise ValueError("mismatched algebras")
        junctions += f.junctions
        shift += f.shift
    name = "(" + " (x) ".join(f.name or "?" for f in factors) + ")"
    return get_bimodule(alg, junctions, shift, name)


class _Component:
    """One internal-degree piece of a bimodule: words, relations, basis."""

    __slots__ = ("words", "index", "canon", "basis", "basis_index")

    def __init__(self, words, index, canon, basis, basis_index):
        self.words = words
        self.index = index
        self.canon = canon          # word -> None (basis) or dict word->coeff
        self.basis = basis
        self.basis_index = basis_index


class Bimodule:
    """Span of valid tensor words modulo junction slides, graded by degree."""

    def __init__(self, alg: WebsterAlgebra, junctions, shift: int = 0,
                 name: str = ""):
        self.alg = alg
        self.junctions = tuple(Junction(*j) for j in junctions)
        self.shift = shift
        self.name = name
        self.num_factors = len(self.junctions) + 1
        self.ifaces = tuple(
            frozenset(range(alg.n + 1)) - _junction_forbidden(j)
            for j in self.junctions)
        self._components: dict = {}
        self._slot_groups: dict = {}
        self._gens: dict = {}
        self._diff_mats: dict = {}
        self._act_mats: dict = {}

    def __repr__(self):
        return f"Bimodule({self.name or self.junctions}, shift={self.shift})"

    # -- word enumeration ---------------------------------------------------

    def _grouped_basis(self, d: int) -> dict:
        """Algebra basis of degree d grouped by (top, bottom)."""
        hit = self._slot_groups.get(d)
        if hit is None:
            hit = {}
            for t in self.alg.enumerate_basis(d):
                hit.setdefault((t.top, t.bottom), []).append(t)
            self._slot_groups[d] = hit
        return hit

    def _chains(self, nfac: int, total: int, ifaces, first_top=None,
                last_bottom=None):
        """Tensor words of nfac factors, total raw degree, given interfaces.

        ifaces is a tuple of allowed-slot sets for the nfac-1 internal
        interfaces; first_top / last_bottom optionally constrain the outer
        boundary slots of the chain.
        """
        if total < 0:
            return
        if nfac == 1:
            for d in (total,):
                for (t, b), els in self._grouped_basis(d).items():
                    if first_top is not None and t not in first_top:
                        continue
                    if last_bottom is not None and b not in last_bottom:
                        continue
                    for el in els:
                        yield (el,)
            return
        for d0 in range(total + 1):
            for (t, b), els in self._grouped_basis(d0).items():
                if first_top is not None and t not in first_top:
                    continue
                if b not in ifaces[0]:
                    continue
                for rest in self._chains(nfac - 1, total - d0, ifaces[1:],
                                         first_top=(b,),
                                         last_bottom=last_bottom):
                    for el in els:
                        yield (el,) + rest

    def words(self, d: int) -> list:
        """All valid tensor words of (shifted) internal degree d."""
        raw = d - self.shift
        return sorted(self._chains(self.num_factors, raw, self.ifaces))

    def word_degree(self, word) -> int:
        return sum(t.degree for t in word) + self.shift

    # -- sliding relations and the quotient ----------------------------------

    def _sliding_generators(self, q: int) -> list:
        """Generators of the merged-strand subalgebra at junction q.

        Returns (element, top, bottom, degree) tuples; sliding each across
        the junction generates all relations (products telescope).
        """
        hit = self._gens.get(q)
        if hit is not None:
            return hit
        alg = self.alg
        n = alg.n
        jn = self.junctions[q]
        merged = list(range(jn.pos, jn.pos + jn.arity))
        allowed = sorted(self.ifaces[q])
        gens = []

        def dot_elems(s):
            """Degree-2 dotted idempotents at slot s: black dot, spare red
            dots, and elementary symmetric functions of the merged dots."""
            out = [alg.mul(alg.y(), alg.e(s))]
            for ell in range(1, n + 1):
                if ell not in merged:
                    out.append(alg.mul(alg.x(ell), alg.e(s)))
            esym = alg.zero()
            for ell in merged:
                esym = esym + alg.mul(alg.x(ell), alg.e(s))
            out.append(esym)
            prev = [esym]
            for k in range(2, jn.arity + 1):
                # e_k as sums of squarefree monomials in the merged dots
                terms = alg.zero()
                from itertools import combinations
                for combo in combinations(merged, k):
                    term = alg.e(s)
                    for ell in combo:
                        term = alg.mul(alg.x(ell), term)
                    terms = terms + term
                out.append(terms)
            return out

        for s in allowed:
            for el in dot_elems(s):
                gens.append((el, s, s, 2))
        for ell in range(1, n + 1):
            if ell in merged:
                continue
            for s in (ell - 1, ell):
                el = alg.mul(alg.psi(ell), alg.e(s))
                if not el.is_zero():
                    gens.append((el, el.top, el.bottom, 1))
        # black strand crossing the whole merged band, both directions
        lo, hi = jn.pos - 1, jn.pos + jn.arity - 1
        right = alg.e(lo)
        for ell in merged:
            right = alg.mul(alg.psi(ell), right)
        gens.append((right, hi, lo, jn.arity))
        left = alg.e(hi)
        for ell in reversed(merged):
            left = alg.mul(alg.psi(ell), left)
        gens.append((left, lo, hi, jn.arity))
        self._gens[q] = gens
        return gens

    def _migration_templates(self, q: int) -> list:
        """Dot-migration relations at junction q.

        Dots adjacent to the junction satisfy, over the symmetric functions
        of the merged dots (which slide across), the relations
        sum_k (-1)^k e_k(S) (x) h_{j-k}(T) = 0 for each dot subset T of the
        merged set S, with j = |S| - |T| + 1 (coefficient of t^j in the
        generating function of S minus T), and mirrored.  Returns
        (interface slot, extra degree, [(coeff, left_mult, right_mult)]).
        """
        alg = self.alg
        jn = self.junctions[q]
        merged = list(range(jn.pos, jn.pos + jn.arity))
        r = jn.arity
        from itertools import combinations, combinations_with_replacement
        out = []
        for s in sorted(self.ifaces[q]):
            es = alg.e(s)
            esym = [es]
            for k in range(1, r + 1):
                acc = alg.zero()
                for combo in combinations(merged, k):
                    term = es
                    for ell in combo:
                        term = alg.mul(alg.x(ell), term)
                    acc = acc + term
                esym.append(acc)
            for tsize in range(1, r):
                j = r - tsize + 1
                for tset in combinations(merged, tsize):
                    hfun = []
                    for k in range(j + 1):
                        acc = alg.zero()
                        for mono in combinations_with_replacement(tset, k):
                            term = es
                            for ell in mono:
                                term = alg.mul(alg.x(ell), term)
                            acc = acc + term
                        hfun.append(acc)
                    right_side = [((-1) ** k, esym[k], hfun[j - k])
                                  for k in range(j + 1)]
                    left_side = [((-1) ** k, hfun[j - k], esym[k])
                                 for k in range(j + 1)]
                    out.append((s, 2 * j, right_side))
                    out.append((s, 2 * j, left_side))
        return out

    def component(self, d: int) -> _Component:
        hit = self._components.get(d)
        if hit is not None:
            return hit
        alg = self.alg
        p = alg.p
        raw = d - self.shift
        words = self.words(d)
        index = {w: k for k, w in enumerate(words)}
        m = len(self.junctions)

        # group word indices by outer block (top of w0, bottom of w_last);
        # sliding relations never move a word out of its block
        blocks: dict = {}
        for w, k in index.items():
            blocks.setdefault((w[0].top, w[-1].bottom), []).append(k)

        rel_rows: dict = {blk: [] for blk in blocks}
        for q in range(m):
            pre_ifaces = self.ifaces[:q]
            suf_ifaces = self.ifaces[q + 1:]
            for gel, gtop, gbot, gdeg in self._sliding_generators(q):
                for dp in range(raw - gdeg + 1):
                    prefixes = list(self._chains(
                        q + 1, dp, pre_ifaces, last_bottom=(gtop,)))
                    if not prefixes:
                        continue
                    suffixes = list(self._chains(
                        m - q, raw - gdeg - dp, suf_ifaces,
                        first_top=(gbot,)))
                    if not suffixes:
                        continue
                    for pre in prefixes:
                        lhs = alg.mul(
                            AlgebraElement(alg, {pre[-1]: 1}), gel)
                        for suf in suffixes:
                            rhs = alg.mul(
                                gel, AlgebraElement(alg, {suf[0]: 1}))
                            row: dict = {}
                            for u, cu in lhs.terms.items():
                                k = index.get(pre[:-1] + (u,) + suf)
                                if k is not None:
                                    row[k] = (row.get(k, 0) + cu) % p
                            for v, cv in rhs.terms.items():
                                k = index.get(pre + (v,) + suf[1:])
                                if k is not None:
                                    row[k] = (row.get(k, 0) - cv) % p
                            row = {k: c for k, c in row.items() if c}
                            if row:
                                blk = (pre[0].top, suf[-1].bottom)
                                rel_rows[blk].append(row)
            for s, gdeg, terms in self._migration_templates(q):
                for dp in range(raw - gdeg + 1):
                    prefixes = list(self._chains(
                        q + 1, dp, pre_ifaces, last_bottom=(s,)))
                    if not prefixes:
                        continue
                    suffixes = list(self._chains(
                        m - q, raw - gdeg - dp, suf_ifaces,
                        first_top=(s,)))
                    if not suffixes:
                        continue
                    for pre in prefixes:
                        for suf in suffixes:
                            row = {}
                            for coeff, lel, rel in terms:
                                lhs = alg.mul(
                                    AlgebraElement(alg, {pre[-1]: 1}), lel)
                                rhs = alg.mul(
                                    rel, AlgebraElement(alg, {suf[0]: 1}))
                                for u, cu in lhs.terms.items():
                                    for v, cv in rhs.terms.items():
                                        w2 = pre[:-1] + (u, v) + suf[1:]
                                        k = index.get(w2)
                                        if k is not None:
                                            row[k] = (row.get(k, 0)
                                                      + coeff * cu * cv) % p
                            row = {k: c for k, c in row.items() if c}
                            if row:
                                blk = (pre[0].top, suf[-1].bottom)
                                rel_rows[blk].append(row)

        canon: dict = {w: None for w in words}
        for blk in blocks:
            rows = rel_rows[blk]
            if not rows:
                continue
            for k, form in _sparse_canon(rows, p).items():
                canon[words[k]] = {words[k2]: c for k2, c in form.items()}
        basis = [w for w in words if canon[w] is None]
        basis_index = {w: k for k, w in enumerate(basis)}
        comp = _Component(words, index, canon, basis, basis_index)
        self._components[d] = comp
        return comp

    def basis(self, d: int) -> list:
        return self.component(d).basis

    def dim(self, d: int) -> int:
        return len(self.component(d).basis)

    # -- elements -------------------------------------------------------------

    def element(self, terms: dict) -> "BimoduleElement":
        return BimoduleElement(self, terms)

    def zero(self) -> "BimoduleElement":
        return BimoduleElement(self, {})

    def reduce_terms(self, terms: dict) -> dict:
        """Reduce a raw word combination to canonical-basis coordinates."""
        p = self.alg.p
        out: dict = {}
        by_deg: dict = {}
        for w, c in terms.items():
            by_deg.setdefault(self.word_degree(w), {})[w] = c % p
        for d, tms in by_deg.items():
            comp = self.component(d)
            for w, c in tms.items():
                if c == 0:
                    continue
                if w not in comp.index:
                    continue  # invalid interface word is zero
                form = comp.canon[w]
                if form is None:
                    out[w] = (out.get(w, 0) + c) % p
                else:
                    for w2, c2 in form.items():
                        out[w2] = (out.get(w2, 0) + c * c2) % p
        return {w: c for w, c in out.items() if c}

    def to_coords(self, elem_or_terms, d: int) -> np.ndarray:
        terms = (elem_or_terms.terms
                 if isinstance(elem_or_terms, BimoduleElement)
                 else elem_or_terms)
        comp = self.component(d)
        v = np.zeros(len(comp.basis), dtype=np.int64)
        for w, c in terms.items():
            v[comp.basis_index[w]] = c
        return v

    def from_coords(self, v, d: int) -> "BimoduleElement":
        comp = self.component(d)
        return BimoduleElement(
            self, {w: int(c) for w, c in zip(comp.basis, v) if c},
            reduced=True)

    # -- bimodule structure -----------------------------------------------------

    def mul_word(self, a, word, b) -> dict:
        """Raw product a . word . b for algebra elements a, b (or None)."""
        alg = self.alg
        left = (AlgebraElement(alg, {word[0]: 1}) if a is None
                else alg.mul(a, AlgebraElement(alg, {word[0]: 1})))
        right = (AlgebraElement(alg, {word[-1]: 1}) if b is None
                 else alg.mul(AlgebraElement(alg, {word[-1]: 1}), b))
        mid = word[1:-1] if len(word) > 1 else ()
        out: dict = {}
        p = alg.p
        if len(word) == 1:
            prod = AlgebraElement(alg, {word[0]: 1})
            if a is not None:
                prod = alg.mul(a, prod)
            if b is not None:
                prod = alg.mul(prod, b)
            for u, cu in prod.terms.items():
                out[(u,)] = (out.get((u,), 0) + cu) % p
            return out
        for u, cu in left.terms.items():
            for v, cv in right.terms.items():
                w2 = (u,) + mid + (v,)
                out[w2] = (out.get(w2, 0) + cu * cv) % p
        return out

    def differential_word(self, word) -> dict:
        """Raw differential of a tensor word, including junction twists."""
        alg = self.alg
        p = alg.p
        out: dict = {}

        def acc(w2, c):
            if c % p:
                out[w2] = (out.get(w2, 0) + c) % p

        for k, wk in enumerate(word):
            for u, cu in alg.differential_basis(wk).terms.items():
                acc(word[:k] + (u,) + word[k + 1:], cu)
        for q, jn in enumerate(self.junctions):
            if jn.twist == 0:
                continue
            wq = word[q]
            for ell in range(jn.pos, jn.pos + jn.arity):
                a = list(wq.a)
                a[ell - 1] += 1
                acc(word[:q] + (wq.with_dots(a=tuple(a)),) + word[q + 1:],
                    jn.twist)
        return out

    def differential_matrix(self, d: int) -> np.ndarray:
        """Matrix of the differential (columns index the degree-d basis)."""
        hit = self._diff_mats.get(d)
        if hit is not None:
            return hit
        src = self.component(d).basis
        tgt = self.component(d + 2)
        M = np.zeros((len(tgt.basis), len(src)), dtype=np.int64)
        for col, w in enumerate(src):
            red = self.reduce_terms(self.differential_word(w))
            for w2, c in red.items():
                M[tgt.basis_index[w2], col] = c
        self._diff_mats[d] = M
        return M

    def action_matrix(self, gen: AlgebraElement, d: int,
                      side: str) -> np.ndarray:
        """Left or right multiplication by a homogeneous algebra element."""
        key = (gen, d, side)
        hit = self._act_mats.get(key)
        if hit is not None:
            return hit
        gdeg = gen.degree()
        src = self.component(d).basis
        tgt = self.component(d + gdeg)
        M = np.zeros((len(tgt.basis), len(src)), dtype=np.int64)
        for col, w in enumerate(src):
            raw = (self.mul_word(gen, w, None) if side == "left"
                   else self.mul_word(None, w, gen))
            for w2, c in self.reduce_terms(raw).items():
                M[tgt.basis_index[w2], col] = c
        self._act_mats[key] = M
        return M

    def generator_actions(self, d: int) -> list:
        """(gen, side, matrix) for x_j, y, psi_j on the degree-d piece."""
        alg = self.alg
        gens = [alg.y()] + [alg.x(j) for j in range(1, alg.n + 1)] \
            + [alg.psi(j) for j in range(1, alg.n + 1)]
        out = []
        for g in gens:
            for side in ("left", "right"):
                out.append((g, side, self.action_matrix(g, d, side)))
        return out


class BimoduleElement:
    """Combination of canonical tensor words of a fixed bimodule."""

    __slots__ = ("bimodule", "terms")

    def __init__(self, bimodule: Bimodule, terms: dict, reduced: bool = False):
        self.bimodule = bimodule
        if reduced:
            self.terms = {w: c for w, c in terms.items() if c % bimodule.alg.p}
        else:
            self.terms = bimodule.reduce_terms(terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degrees(self) -> set:
        return {self.bimodule.word_degree(w) for w in self.terms}

    def degree(self) -> int:
        degs = self.degrees()
        if not degs:
            return 0
        if len(degs) > 1:
            raise ValueError("inhomogeneous element")
        return degs.pop()

    def __add__(self, other):
        p = self.bimodule.alg.p
        out = dict(self.terms)
        for w, c in other.terms.items():
            v = (out.get(w, 0) + c) % p
            if v:
                out[w] = v
            else:
                out.pop(w, None)
        return BimoduleElement(self.bimodule, out, reduced=True)

    def __sub__(self, other):
        return self + other.scale(-1)

    def scale(self, c: int):
        p = self.bimodule.alg.p
        c %= p
        return BimoduleElement(
            self.bimodule, {w: (v * c) % p for w, v in self.terms.items()},
            reduced=True)

    def __eq__(self, other):
        return (isinstance(other, BimoduleElement)
                and self.bimodule is other.bimodule
                and self.terms == other.terms)

    def __repr__(self):
        if not self.terms:
            return "0"
        bits = []
        for w, c in sorted(self.terms.items()):
            word = " (x) ".join(repr(t) for t in w)
            bits.append(f"{c}*[{word}]")
        return " + ".join(bits)


# -- spec-level operations ------------------------------------------------------


def straighten(bimodule: Bimodule, factors) -> BimoduleElement:
    """Canonical form of a raw tensor of algebra elements (one per slot)."""
    alg = bimodule.alg
    if len(factors) != bimodule.num_factors:
        raise ValueError("wrong number of tensor factors")
    factors = [f if isinstance(f, AlgebraElement)
               else AlgebraElement(alg, {f: 1}) for f in factors]
    terms: dict = {(): 1}
    p = alg.p
    for f in factors:
        nxt: dict = {}
        for w, c in terms.items():
            for t, ct in f.terms.items():
                w2 = w + (t,)
                nxt[w2] = (nxt.get(w2, 0) + c * ct) % p
        terms = nxt
    return BimoduleElement(bimodule, terms)


def bimod_mul(a, m: BimoduleElement, b) -> BimoduleElement:
    """a . m . b for algebra elements a, b (None means identity)."""
    bm = m.bimodule
    p = bm.alg.p
    out: dict = {}
    for w, c in m.terms.items():
        for w2, c2 in bm.mul_word(a, w, b).items():
            out[w2] = (out.get(w2, 0) + c * c2) % p
    return BimoduleElement(bm, out)


def bimod_differential(m: BimoduleElement) -> BimoduleElement:
    bm = m.bimodule
    p = bm.alg.p
    out: dict = {}
    for w, c in m.terms.items():
        for w2, c2 in bm.differential_word(w).items():
            out[w2] = (out.get(w2, 0) + c * c2) % p
    return BimoduleElement(bm, out)


# -- structure maps as word rules ------------------------------------------------


def epsilon_rule(src: Bimodule, dst: Bimodule):
    """Multiply across the junction: W_i -> W."""
    alg = src.alg

    def rule(word):
        prod = alg.mul_basis(word[0], word[1])
        return {(u,): c for u, c in prod.terms.items()}

    return rule


def iota_rule(src: Bimodule, dst: Bimodule, i: int):
    """Dotted-difference unit W -> W_i^-{-2} determined on idempotents."""
    alg = src.alg
    images = {}
    for j in range(alg.n + 1):
        if j != i:
            xa_ej = next(iter(alg.mul(alg.x(i), alg.e(j)).terms))
            xb_ej = next(iter(alg.mul(alg.x(i + 1), alg.e(j)).terms))
            ej = next(iter(alg.e(j).terms))
            images[j] = {(xa_ej, ej): 1, (ej, xb_ej): -1}
        else:
            se_up = NormalBasisElement("SE", i, i + 1, (0,) * alg.n, 0)
            ne_up = NormalBasisElement("NE", i, i + 1, (0,) * alg.n, 0)
            ne_dn = NormalBasisElement("NE", i - 1, i, (0,) * alg.n, 0)
            se_dn = NormalBasisElement("SE", i - 1, i, (0,) * alg.n, 0)
            images[j] = {(se_up, ne_up): 1, (ne_dn, se_dn): -1}

    def rule(word):
        (w,) = word
        out: dict = {}
        for (u0, u1), c in images[w.bottom].items():
            prod = alg.mul_basis(w, u0)
            for v, cv in prod.terms.items():
                w2 = (v, u1)
                out[w2] = (out.get(w2, 0) + c * cv) % alg.p
        return out

    return rule


def alpha_rule(src: Bimodule, dst: Bimodule):
    """Insert identity factors: W_{i,i+1} -> W_i (x) W_{i+1} (x) W_i."""
    alg = src.alg

    def rule(word):
        w0, w1 = word
        s = w0.bottom
        ej = next(iter(alg.e(s).terms))
        return {(w0, ej, ej, w1): 1}

    return rule


def tau_rule(src: Bimodule, dst: Bimodule, i: int):
    """Dotted quasi-section W_i^+{2} -> W_i (x) W_{i+1} (x) W_i.

    On a generator with interface slot j != i+1 insert a dotted idempotent
    pair; the slot-(i+1) generator maps to the crossing sandwich.  This
    rule is linear but only a section up to the double-merge image; the
    honest bimodule section is solved for in split_tau.
    """
    alg = src.alg
    n = alg.n
    mids = {}
    for j in range(n + 1):
        if j == i:
            continue
        if j != i + 1:
            a = [0] * n
            a[i - 1] = 1
            xej = NormalBasisElement("NE", j, j, tuple(a), 0)
            ej = next(iter(alg.e(j).terms))
            mids[j] = (xej, ej)
        else:
            mids[j] = (NormalBasisElement("NE", i, i + 1, (0,) * n, 0),
                       NormalBasisElement("SE", i, i + 1, (0,) * n, 0))

    def rule(word):
        w0, w1 = word
        m0, m1 = mids[w0.bottom]
        return {(w0, m0, m1, w1): 1}

    return rule


def comult_rule(src: Bimodule, dst: Bimodule):
    """Insert one identity factor: W_i -> W_i (x) W_i."""
    alg = src.alg

    def rule(word):
        w0, w1 = word
        ej = next(iter(alg.e(w0.bottom).terms))
        return {(w0, ej, w1): 1}

    return rule


def tau2_rule(src: Bimodule, dst: Bimodule, i: int):
    """Dotted section W_i^+{2} -> W_i (x) W_i."""
    alg = src.alg
    n = alg.n

    def rule(word):
        w0, w1 = word
        j = w0.bottom
        a = [0] * n
        a[i - 1] = 1
        xej = NormalBasisElement("NE", j, j, tuple(a), 0)
        return {(w0, xej, w1): 1}

    return rule


class BimoduleMap:
    """Degree-0 bimodule map held as per-degree matrices over F_p.

    Built either from a word rule (applied to canonical basis words and
    straightened in the target) or from explicit matrices.
    """

    def __init__(self, src: Bimodule, dst: Bimodule, rule=None, name="",
                 matrices=None):
        self.src = src
        self.dst = dst
        self.rule = rule
        self.name = name
        self._mats = dict(matrices) if matrices else {}

    def matrix(self, d: int) -> np.ndarray:
        M = self._mats.get(d)
        if M is None:
            if self.rule is None:
                raise KeyError(f"no matrix at degree {d} for {self.name}")
            src_basis = self.src.component(d).basis
            tgt = self.dst.component(d)
            M = np.zeros((len(tgt.basis), len(src_basis)), dtype=np.int64)
            for col, w in enumerate(src_basis):
                red = self.dst.reduce_terms(self.rule(w))
                for w2, c in red.items():
                    M[tgt.basis_index[w2], col] = c
            self._mats[d] = M
        return M

    def apply(self, m: BimoduleElement) -> BimoduleElement:
        if m.is_zero():
            return self.dst.zero()
        d = m.degree()
        v = self.src.to_coords(m, d)
        return self.dst.from_coords(self.matrix(d) @ v % self.src.alg.p, d)

    def well_defined_on_words(self, d: int) -> bool:
        """Word-rule value on every raw word matches the matrix on its
        canonical form (hence the rule descends to the quotient)."""
        if self.rule is None:
            return True
        p = self.src.alg.p
        comp = self.src.component(d)
        M = self.matrix(d)
        for w in comp.words:
            direct = self.dst.reduce_terms(self.rule(w))
            va = self.dst.to_coords(direct, d)
            vb = M @ self.src.to_coords(self.src.reduce_terms({w: 1}), d) % p
            if not np.array_equal(va % p, vb):
                return False
        return True

    def is_bimodule_map(self, max_d: int) -> bool:
        p = self.src.alg.p
        alg = self.src.alg
        gens = [alg.y()] + [alg.x(j) for j in range(1, alg.n + 1)] \
            + [alg.psi(j) for j in range(1, alg.n + 1)]
        for d in range(min_degree(self.src), max_d + 1):
            for g in gens:
                gd = g.degree()
                if d + gd > max_d:
                    continue
                for side in ("left", "right"):
                    lhs = self.dst.action_matrix(g, d, side) @ self.matrix(d)
                    rhs = self.matrix(d + gd) @ self.src.action_matrix(
                        g, d, side)
                    if not np.array_equal(lhs % p, rhs % p):
                        return False
        return True

    def is_d_equivariant(self, max_d: int) -> bool:
        p = self.src.alg.p
        for d in range(min_degree(self.src), max_d - 1):
            lhs = self.dst.differential_matrix(d) @ self.matrix(d)
            rhs = self.matrix(d + 2) @ self.src.differential_matrix(d)
            if not np.array_equal(lhs % p, rhs % p):
                return False
        return True


def min_degree(bm: Bimodule) -> int:
    """Lowest internal degree that can support a word."""
    return bm.shift


# -- named maps -------------------------------------------------------------------


def epsilon(alg: WebsterAlgebra, i: int) -> BimoduleMap:
    src = merge_bimodule(alg, i)
    dst = plain_algebra_bimodule(alg)
    return BimoduleMap(src, dst, epsilon_rule(src, dst), name=f"epsilon_{i}")


def iota(alg: WebsterAlgebra, i: int) -> BimoduleMap:
    src = plain_algebra_bimodule(alg)
    dst = merge_bimodule(alg, i, twist=-1, shift=-2)
    return BimoduleMap(src, dst, iota_rule(src, dst, i), name=f"iota_{i}")


def triple_bimodule(alg: WebsterAlgebra, i: int) -> Bimodule:
    return tensor_bimodule(merge_bimodule(alg, i),
                           merge_bimodule(alg, i + 1),
                           merge_bimodule(alg, i))


def mirror_triple_bimodule(alg: WebsterAlgebra, i: int) -> Bimodule:
    return tensor_bimodule(merge_bimodule(alg, i + 1),
                           merge_bimodule(alg, i),
                           merge_bimodule(alg, i + 1))


def alpha_ii1(alg: WebsterAlgebra, i: int) -> BimoduleMap:
    src = double_merge_bimodule(alg, i)
    dst = triple_bimodule(alg, i)
    return BimoduleMap(src, dst, alpha_rule(src, dst), name=f"alpha_{i}")


def alpha_i1i(alg: WebsterAlgebra, i: int) -> BimoduleMap:
    """Inclusion of the double merge into the mirrored triple product."""
    src = double_merge_bimodule(alg, i)
    dst = mirror_triple_bimodule(alg, i)
    return BimoduleMap(src, dst, alpha_rule(src, dst),
                       name=f"alpha_{i + 1}{i}")


def _tau_raw(alg: WebsterAlgebra, i: int) -> BimoduleMap:
    src = merge_bimodule(alg, i, twist=1, shift=2)
    dst = triple_bimodule(alg, i)
    return BimoduleMap(src, dst, tau_rule(src, dst, i), name=f"tau_raw_{i}")


_TAU_CACHE: dict = {}


def split_tau(alg: WebsterAlgebra, i: int, max_d: int) -> BimoduleMap:
    """Bimodule-map section of pi, solved from generator images.

    The section is determined by the images t_j of the interface
    generators e_j (x) e_j (degree 2, block (j,j) of the triple tensor).
    Extending by w0 . t_j . w1 gives a bimodule map once the extension is
    well defined on raw words; that condition plus pi . tau = id is a
    small linear system over the t_j coordinates.
    """
    key = (alg.n, alg.p, i)
    cached = _TAU_CACHE.get(key)
    if cached is not None and cached[0] >= max_d:
        return cached[1]

    from .linalg_fp import nullspace, rank
    p = alg.p
    src = merge_bimodule(alg, i, twist=1, shift=2)
    tri = triple_bimodule(alg, i)
    alpha = alpha_ii1(alg, i)

    slots = [j for j in range(alg.n + 1) if j != i]
    tri2 = tri.component(2)
    ublocks = {}
    offset = 0
    for j in slots:
        vecs = [w for w in tri2.basis if w[0].top == j and w[-1].bottom == j]
        ublocks[j] = (offset, vecs)
        offset += len(vecs)
    nu = offset

    def value_tensor(word, d):
        """Image of a raw source word as a (dim T(d)) x nu matrix in u."""
        w0, w1 = word
        s = w0.bottom
        off, vecs = ublocks[s]
        comp = tri.component(d)
        A = np.zeros((len(comp.basis), nu), dtype=np.int64)
        for k, v in enumerate(vecs):
            lhs = alg.mul_basis(w0, v[0])
            rhs = alg.mul_basis(v[-1], w1)
            raw = {}
            for u0, c0 in lhs.terms.items():
                for u1, c1 in rhs.terms.items():
                    w2 = (u0,) + v[1:-1] + (u1,)
                    raw[w2] = (raw.get(w2, 0) + c0 * c1) % p
            for w2, c in tri.reduce_terms(raw).items():
                A[comp.basis_index[w2], off + k] = c
        return A

    rows = []
    cap = min(max_d, 5)
    for d in range(2, cap + 1):
        comp = src.component(d)
        vals = {b: value_tensor(b, d) for b in comp.basis}
        for w in comp.words:
            if comp.canon[w] is None:
                continue
            A = value_tensor(w, d).astype(np.int64)
            for b, c in comp.canon[w].items():
                A = A - c * vals[b]
            A %= p
            for r in A:
                if r.any():
                    rows.append(r)
    A = np.array(rows, dtype=np.int64) if rows else np.zeros(
        (0, nu), dtype=np.int64)
    space = list(nullspace(A, p))
    if not space:
        raise ValueError(f"no bimodule section of pi_{i} exists")

    def mats_for(u):
        mats = {}
        for d in range(min(src.shift, tri.shift, 0), max_d + 1):
            comp = src.component(d)
            M = np.zeros((tri.dim(d), len(comp.basis)), dtype=np.int64)
            for col, b in enumerate(comp.basis):
                M[:, col] = value_tensor(b, d) @ u % p
            mats[d] = M
        return mats

    def complementary(mats):
        for d in range(min(src.shift, tri.shift, 0), max_d + 1):
            AB = np.concatenate([alpha.matrix(d), mats[d]], axis=1)
            if AB.shape[0] != AB.shape[1] or rank(AB, p) != AB.shape[0]:
                return False
        return True

    rng = np.random.default_rng(20260826)
    sol = None
    for v in space:
        mats = mats_for(np.asarray(v, dtype=np.int64))
        if complementary(mats):
            sol = mats
            break
    if sol is None:
        for _ in range(200):
            coeffs = rng.integers(0, p, size=len(space))
            u = np.tensordot(coeffs, np.asarray(space, dtype=np.int64),
                             axes=1) % p
            if not u.any():
                continue
            mats = mats_for(u)
            if complementary(mats):
                sol = mats
                break
    if sol is None:
        raise ValueError(f"no bimodule section of pi_{i} exists")
    out = BimoduleMap(src, tri, matrices=sol, name=f"tau_{i}")
    _TAU_CACHE[key] = (max_d, out)
    return out


def _complement_projections(alg, big: Bimodule, fa: BimoduleMap,
                            fb: BimoduleMap, max_d: int):
    """Given injections fa, fb with big = im(fa) + im(fb) degreewise,
    return the projections (pa, pb) with pa.fa = id, pa.fb = 0 and
    symmetrically.  Raises if the images do not span or overlap."""
    from .linalg_fp import solve_matrix
    p = alg.p
    mats_a: dict = {}
    mats_b: dict = {}
    lo = min(min_degree(fa.src), min_degree(fb.src), min_degree(big))
    for d in range(lo, max_d + 1):
        A = fa.matrix(d)
        B = fb.matrix(d)
        na, nb = A.shape[1], B.shape[1]
        nbig = big.dim(d)
        if na + nb != nbig:
            raise ValueError(
                f"decomposition fails at degree {d}: {na}+{nb} != {nbig}")
        AB = np.concatenate([A, B], axis=1) if na + nb else np.zeros(
            (nbig, 0), dtype=np.int64)
        sol = solve_matrix(AB, np.eye(nbig, dtype=np.int64), p)
        if sol is None:
            raise ValueError(f"images overlap at degree {d}")
        mats_a[d] = sol[:na] % p
        mats_b[d] = sol[na:] % p
    return mats_a, mats_b


def pi(alg: WebsterAlgebra, i: int, max_d: int) -> BimoduleMap:
    """Quotient surjection of the triple tensor onto W_i^+{2}: the unique
    map killing the double-merge image with pi . tau = id."""
    tri = triple_bimodule(alg, i)
    fa = alpha_ii1(alg, i)
    fb = split_tau(alg, i, max_d)
    _, mats_b = _complement_projections(alg, tri, fa, fb, max_d)
    return BimoduleMap(tri, fb.src, matrices=mats_b, name=f"pi_{i}")


def split_sigma(alg: WebsterAlgebra, i: int, max_d: int) -> BimoduleMap:
    """Retraction of the triple tensor onto W_{i,i+1} along the section."""
    tri = triple_bimodule(alg, i)
    fa = alpha_ii1(alg, i)
    fb = split_tau(alg, i, max_d)
    mats_a, _ = _complement_projections(alg, tri, fa, fb, max_d)
    return BimoduleMap(tri, fa.src, matrices=mats_a, name=f"sigma_{i}")


# -- closed-form basis families -----------------------------------------------------

FamilyIndex = namedtuple("FamilyIndex", ["tag", "j", "l", "a", "b", "dots"])
FamilyIndex.__doc__ = """Closed-form basis index: family tag, black strand
bottom slot j and top slot l, free red dots a, free black dot b, and the
bounded extra dot exponents of the family."""


def _min_path(j, l, n, forbidden_list):
    """Minimal red crossings of a black strand from bottom slot j to top
    slot l traversing the junction interfaces in order."""
    best = {j: 0}
    for forb in forbidden_list:
        nxt: dict = {}
        for s, c in best.items():
            for s2 in range(n + 1):
                if s2 in forb:
                    continue
                c2 = c + abs(s - s2)
                if c2 < nxt.get(s2, 10 ** 9):
                    nxt[s2] = c2
        best = nxt
    return min(c + abs(s - l) for s, c in best.items())


def _family_table(bm: Bimodule):
    """(tag, j, l, crossings, has_b, bounded-dot choice list) per family."""
    juncs = tuple((j.pos, j.arity) for j in bm.junctions)
    n = bm.alg.n
    if len(juncs) == 1 and juncs[0][1] == 2:
        i = juncs[0][0]
        fams = [("M1", i, i, 2, True, [(0,), (1,)]),
                ("M2", i, i, 2, False, [()])]
        for j in range(n + 1):
            for l in range(n + 1):
                if j == l == i:
                    continue
                cr = _min_path(j, l, n, [{i}])
                fams.append(("M3", j, l, cr, True, [(0,), (1,)]))
        return fams
    if len(juncs) == 1 and juncs[0][1] == 3:
        i = juncs[0][0]
        full = [(ci, cj) for ci in range(3) for cj in range(2)]
        half = [(0, cj) for cj in range(2)]
        fams = [("D1", i, i, 2, True, full),
                ("D2", i, i, 4, False, half),
                ("D3", i + 1, i + 1, 2, True, full),
                ("D4", i + 1, i + 1, 4, False, half),
                ("D5", i, i + 1, 3, False, [(0, 0), (1, 0), (0, 1), (1, 1)]),
                ("D6", i, i + 1, 3, True, full),
                ("D7", i + 1, i, 3, True, full),
                ("D8", i + 1, i, 3, False, [(0, 0), (1, 0), (0, 1), (2, 0)])]
        excl = {(i, i), (i, i + 1), (i + 1, i), (i + 1, i + 1)}
        for j in range(n + 1):
            for l in range(n + 1):
                if (j, l) in excl:
                    continue
                cr = _min_path(j, l, n, [{i, i + 1}])
                fams.append(("D9", j, l, cr, True, full))
        return fams
    if len(juncs) == 3:
        i = juncs[0][0]
        if juncs != ((i, 2), (i + 1, 2), (i, 2)):
            raise ValueError("no closed-form family for this tensor shape")
        full = [(r, s, t) for r in range(2) for s in range(2)
                for t in range(2)]
        rt = [(r, t) for r in range(2) for t in range(2)]
        fams = [("T1", i, i, 2, True, full),
                ("T2", i, i, 4, False, [(0,), (1,)]),
                ("T3", i, i, 4, False, [()]),
                ("T4", i + 1, i + 1, 2, True, full),
                ("T5", i + 1, i + 1, 2, False, rt),
                ("T6", i + 1, i, 3, True, full),
                ("T7", i + 1, i, 3, False, rt),
                ("T8", i + 1, i, 3, False, [(0,), (1,)]),
                ("T9", i, i + 1, 3, True, full),
                ("T10", i, i + 1, 3, False, rt),
                ("T11", i, i + 1, 3, False, [(0,), (1,)])]
        excl = {(i, i), (i, i + 1), (i + 1, i), (i + 1, i + 1)}
        forb = [{i}, {i + 1}, {i}]
        for j in range(n + 1):
            for l in range(n + 1):
                if (j, l) in excl:
                    continue
                cr = _min_path(j, l, n, forb)
                fams.append(("T12", j, l, cr, True, full))
        return fams
    raise ValueError("no closed-form family for this junction shape")


def enumerate_bimodule_basis(bm: Bimodule, d: int) -> list:
    """Closed-form basis indices of (shifted) degree d, or the algebra
    basis for the junction-free bimodule."""
    n = bm.alg.n
    raw = d - bm.shift
    if raw < 0:
        return []
    if not bm.junctions:
        return [FamilyIndex("W", t.bottom, t.top, t.a, t.b, ())
                for t in bm.alg.enumerate_basis(raw)]
    out = []
    for tag, j, l, cr, has_b, dot_choices in _family_table(bm):
        rem = raw - cr
        if rem < 0 or rem % 2:
            continue
        m = rem // 2
        for dots in dot_choices:
            m2 = m - sum(dots)
            if m2 < 0:
                continue
            if has_b:
                for mono in compositions(m2, n + 1):
                    out.append(FamilyIndex(tag, j, l, mono[:-1], mono[-1],
                                           dots))
            else:
                for mono in compositions(m2, n):
                    out.append(FamilyIndex(tag, j, l, mono, 0, dots))
    return out


def family_dimension(bm: Bimodule, d: int) -> int:
    return len(enumerate_bimodule_basis(bm, d))
