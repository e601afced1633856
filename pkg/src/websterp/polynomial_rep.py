"""The faithful polynomial representation V_n = sum_k R_n[y_k] of W(n,1).

Serves as the independent correctness oracle: the algebra acts on V_n by
idempotent projection, dot multiplication, and crossing substitution rules;
bimodule elements act through divided-difference operators.  Operator
equality on a degree window is witnessed by fingerprints (matrices of the
action on all V_n monomials up to the window bound, in graded-lex order).
"""

from __future__ import annotations

from .scalar_poly import Polynomial, divided_difference, grlex_key, monomial_degree
from .webster_core import AlgebraElement, WebsterAlgebra


class VnElement:
    """Element of V_n: map sector k in 0..n to a polynomial in x_1..x_n, y_k.

    The polynomial's y variable is interpreted as y_k inside sector k.
    """

    __slots__ = ("n", "p", "sectors")

    def __init__(self, n: int, p: int, sectors: dict | None = None):
        self.n = n
        self.p = p
        clean = {}
        if sectors:
            for k, f in sectors.items():
                if not 0 <= k <= n:
                    raise ValueError(f"sector {k} out of range 0..{n}")
                if not f.is_zero():
                    clean[k] = f
        self.sectors = clean

    @classmethod
    def monomial(cls, n: int, p: int, k: int, m: tuple, c: int = 1) -> "VnElement":
        return cls(n, p, {k: Polynomial.monomial(n, p, m, c)})

    def is_zero(self) -> bool:
        return not self.sectors

    def __add__(self, other: "VnElement") -> "VnElement":
        out = dict(self.sectors)
        for k, f in other.sectors.items():
            g = out.get(k)
            out[k] = f if g is None else g + f
        return VnElement(self.n, self.p, out)

    def __sub__(self, other: "VnElement") -> "VnElement":
        return self + other.scale(-1)

    def scale(self, c: int) -> "VnElement":
        return VnElement(self.n, self.p,
                         {k: f.scale(c) for k, f in self.sectors.items()})

    def __eq__(self, other):
        return (isinstance(other, VnElement) and self.n == other.n
                and self.p == other.p and self.sectors == other.sectors)

    def __hash__(self):
        return hash((self.n, self.p,
                     tuple(sorted((k, tuple(sorted(f.terms.items())))
                                  for k, f in self.sectors.items()))))

    def __repr__(self):
        if not self.sectors:
            return "0"
        return " + ".join(f"[{k}]({self.sectors[k]!r})"
                          for k in sorted(self.sectors))


def act_token(token, v: VnElement) -> VnElement:
    """Left action of a single generator token on V_n."""
    n, p = v.n, v.p
    kind = token[0]
    if kind == "e":
        f = v.sectors.get(token[1])
        return VnElement(n, p, {token[1]: f} if f is not None else {})
    if kind == "x":
        xj = Polynomial.x(n, p, token[1])
        return VnElement(n, p, {k: f * xj for k, f in v.sectors.items()})
    if kind == "y":
        yy = Polynomial.y(n, p)
        return VnElement(n, p, {k: f * yy for k, f in v.sectors.items()})
    if kind == "psi":
        j = token[1]
        out: dict = {}

        def acc(k, f):
            g = out.get(k)
            out[k] = f if g is None else g + f

        for s, f in v.sectors.items():
            if j == s:
                # black slot s -> s-1: f(x, y_s) -> f(x, y_{s-1})
                acc(s - 1, f)
            elif j == s + 1:
                # black slot s -> s+1: f -> (y_{s+1} - x_{s+1}) f(x, y_{s+1})
                coeff = Polynomial.y(n, p) - Polynomial.x(n, p, s + 1)
                acc(s + 1, coeff * f)
        return VnElement(n, p, out)
    raise ValueError(f"bad token {token}")


def act(a: AlgebraElement, v: VnElement) -> VnElement:
    """Action of an algebra element on V_n (the representation rho)."""
    alg = a.alg
    if (alg.n, alg.p) != (v.n, v.p):
        raise ValueError("mismatched parameters")
    total = VnElement(v.n, v.p)
    for t, c in a.terms.items():
        w = v
        for token in reversed(alg.word_of(t)):
            w = act_token(token, w)
        total = total + w.scale(c)
    return total


def dd_act(i: int, v: VnElement) -> VnElement:
    """Sectorwise divided difference D_i acting on V_n (y treated as constant)."""
    return VnElement(v.n, v.p,
                     {k: divided_difference(i, f) for k, f in v.sectors.items()})


class LinearOperator:
    """Composable linear operator on V_n."""

    __slots__ = ("n", "p", "fn")

    def __init__(self, n: int, p: int, fn):
        self.n = n
        self.p = p
        self.fn = fn

    def __call__(self, v: VnElement) -> VnElement:
        return self.fn(v)

    def __matmul__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.n, self.p, lambda v: self.fn(other.fn(v)))

    def __add__(self, other: "LinearOperator") -> "LinearOperator":
        return LinearOperator(self.n, self.p, lambda v: self.fn(v) + other.fn(v))

    def scale(self, c: int) -> "LinearOperator":
        return LinearOperator(self.n, self.p, lambda v: self.fn(v).scale(c))


def rho(a: AlgebraElement) -> LinearOperator:
    return LinearOperator(a.alg.n, a.alg.p, lambda v: act(a, v))


def dd_operator(n: int, p: int, i: int) -> LinearOperator:
    return LinearOperator(n, p, lambda v: dd_act(i, v))


def vn_monomials(n: int, D: int) -> list:
    """All (sector, monomial) with internal degree <= D, deterministic order."""
    from .webster_core import compositions
    out = []
    for k in range(n + 1):
        for tot in range(D // 2 + 1):
            for m in compositions(tot, n + 1):
                out.append((k, m))
    out.sort(key=lambda km: (grlex_key(km[1]), km[0]))
    return out


class OperatorFingerprint:
    """Action of an operator on the degree-<=D monomial window of V_n.

    Columns are indexed by (sector, monomial); each column records the
    canonical sparse form of the image.  Structural equality of fingerprints
    is used to falsify (or confirm within the window) operator identities.
    """

    __slots__ = ("n", "p", "D", "columns")

    def __init__(self, n: int, p: int, D: int, columns: dict):
        self.n = n
        self.p = p
        self.D = D
        self.columns = columns

    def __eq__(self, other):
        return (isinstance(other, OperatorFingerprint)
                and (self.n, self.p, self.D) == (other.n, other.p, other.D)
                and self.columns == other.columns)

    def __hash__(self):
        return hash((self.n, self.p, self.D,
                     tuple(sorted(self.columns.items()))))

    def is_zero(self) -> bool:
        return not self.columns

    def triplets(self) -> list:
        """Sparse (column, row, value) triplets, deterministically ordered."""
        out = []
        for col in sorted(self.columns):
            for row, val in self.columns[col]:
                out.append((col, row, val))
        return out


def fingerprint_operator(op: LinearOperator, D: int) -> OperatorFingerprint:
    n, p = op.n, op.p
    columns = {}
    for k, m in vn_monomials(n, D):
        img = op(VnElement.monomial(n, p, k, m))
        entries = []
        for sec in sorted(img.sectors):
            for mono, c in sorted(img.sectors[sec].terms.items()):
                entries.append(((sec, mono), c))
        if entries:
            columns[(k, m)] = tuple(entries)
    return OperatorFingerprint(n, p, D, columns)


def fingerprint(a: AlgebraElement, D: int) -> OperatorFingerprint:
    return fingerprint_operator(rho(a), D)


def junction_operator(n: int, p: int, kind: str, i: int) -> LinearOperator:
    """Operator realizing a thick junction: D_i for a 2-merge at i,
    D_i D_{i+1} D_i for a 3-merge at i."""
    if kind == "w2":
        return dd_operator(n, p, i)
    if kind == "w3":
        return dd_operator(n, p, i) @ dd_operator(n, p, i + 1) @ dd_operator(n, p, i)
    raise ValueError(f"bad junction kind {kind}")


def tensor_word_operator(junctions, factors) -> LinearOperator:
    """Operator of a bimodule tensor word: rho(w_0) J_1 rho(w_1) ... J_m rho(w_m).

    junctions: list of (kind, i); factors: list of m+1 AlgebraElements.
    """
    if len(factors) != len(junctions) + 1:
        raise ValueError("factor/junction count mismatch")
    alg = factors[0].alg
    op = rho(factors[0])
    for (kind, i), w in zip(junctions, factors[1:]):
        op = op @ junction_operator(alg.n, alg.p, kind, i) @ rho(w)
    return op


def phi_apply(i: int, u: AlgebraElement, v: AlgebraElement, D: int) -> OperatorFingerprint:
    """Fingerprint of the divided-difference realization of u (x) v in the
    2-merge bimodule at position i."""
    return fingerprint_operator(tensor_word_operator([("w2", i)], [u, v]), D)


def gamma_apply(i: int, u: AlgebraElement, v: AlgebraElement, D: int) -> OperatorFingerprint:
    """Fingerprint of the realization of u (x) v in the 3-merge bimodule at i."""
    return fingerprint_operator(tensor_word_operator([("w3", i)], [u, v]), D)


def separation_check(alg: WebsterAlgebra, d: int, margin: int = 4) -> bool:
    """Faithfulness witness: all canonical basis elements of degree d have
    pairwise distinct fingerprints within window d + margin."""
    seen: dict = {}
    for t in alg.enumerate_basis(d):
        fp = fingerprint(alg.element({t: 1}), d + margin)
        if fp in seen:
            return False
        seen[fp] = t
    return True
