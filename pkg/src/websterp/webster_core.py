"""The deformed Webster algebra W(n,1) over F_p.

Basis elements are indexed by the path of the single black strand across the
n red strands plus dot exponents:

  NE(i, j, a, b) = x^a y^b psi_j psi_{j-1} ... psi_{i+1} e_i   (0 <= i <= j <= n)
      black strand enters at slot i (bottom) and leaves at slot j (top),
      traveling rightward ("northeast");
  SE(i, j, a, b) = x^a y^b psi_{i+1} psi_{i+2} ... psi_j e_j   (0 <= i < j <= n)
      black strand enters at slot j (bottom) and leaves at slot i (top),
      traveling leftward ("southeast" read top to bottom).

Here e_k is the idempotent with the black strand in slot k (after k red
strands), a is the vector of red-dot exponents, b the black-dot exponent.
Products are words of generators stacked top-to-bottom (leftmost factor on
top); rewriting to the basis is driven by single-generator multiplication
rules derived from the defining relations:

  psi_k e(i) = 0 when strands k, k+1 are both red under e(i),
  psi stacked over its own inverse crossing contracts to (y - x_k) next to
  the black strand (the double-crossing relation, oracle-validated sign),
  dots are central, far crossings commute.

Every one-generator product of a basis element is again a combination of at
most two basis elements, so multiplication is rewriting-free of search:
concatenate and fold.
"""

from __future__ import annotations

import re
from functools import lru_cache

from .scalar_poly import is_prime

# The double-crossing relation: stacking psi_k on its inverse contracts to
# sign * (y - x_k) where x_k is the red strand being crossed twice.  The two
# crossing orders (black moves right then left, or left then right) carry
# independent signs, both validated against the polynomial representation
# oracle (see polynomial_rep / tests).  +1 means the coefficient is (y - x_k).
PSI_SQUARE_SIGN_RIGHT_LEFT = 1  # black crosses red k rightward, then back
PSI_SQUARE_SIGN_LEFT_RIGHT = 1  # black crosses red k leftward, then back


class NormalBasisElement(tuple):
    """Canonical basis element of W(n,1): (kind, i, j, a, b)."""

    __slots__ = ()

    def __new__(cls, kind: str, i: int, j: int, a: tuple, b: int):
        if kind == "NE":
            if not 0 <= i <= j:
                raise ValueError(f"NE requires 0 <= i <= j, got ({i},{j})")
        elif kind == "SE":
            if not 0 <= i < j:
                raise ValueError(f"SE requires 0 <= i < j, got ({i},{j})")
        else:
            raise ValueError(f"bad kind {kind}")
        if b < 0 or any(e < 0 for e in a):
            raise ValueError("negative dot exponent")
        return tuple.__new__(cls, (kind, i, j, tuple(a), b))

    @property
    def kind(self):
        return self[0]

    @property
    def i(self):
        return self[1]

    @property
    def j(self):
        return self[2]

    @property
    def a(self):
        return self[3]

    @property
    def b(self):
        return self[4]

    @property
    def top(self) -> int:
        """Slot of the black strand at the top of the diagram."""
        return self[2] if self[0] == "NE" else self[1]

    @property
    def bottom(self) -> int:
        """Slot of the black strand at the bottom of the diagram."""
        return self[1] if self[0] == "NE" else self[2]

    @property
    def crossings(self) -> int:
        return self[2] - self[1]

    @property
    def degree(self) -> int:
        return 2 * (sum(self[3]) + self[4]) + (self[2] - self[1])

    def with_dots(self, a=None, b=None) -> "NormalBasisElement":
        return NormalBasisElement(self[0], self[1], self[2],
                                  self[3] if a is None else a,
                                  self[4] if b is None else b)

    def __repr__(self):
        return (f"{self[0]}[i={self[1]},j={self[2]}]"
                f"(a=[{','.join(map(str, self[3]))}],b={self[4]})")


def crossing_count(kind: str, i: int, j: int) -> int:
    """Number of black/red crossings: the black strand crosses reds i+1..j."""
    return j - i


# Generator tokens: ('e', k) | ('x', j) | ('y',) | ('psi', j)
Token = tuple
Word = tuple


class WebsterAlgebra:
    """The algebra W(n,1) over F_p: n red strands, one black strand."""

    def __init__(self, n: int, p: int):
        if n < 1:
            raise ValueError("n must be >= 1")
        if not is_prime(p) or p < 3:
            raise ValueError(f"p must be an odd prime, got {p}")
        self.n = n
        self.p = p
        self._mul_memo: dict = {}
        self._diff_memo: dict = {}

    def __repr__(self):
        return f"WebsterAlgebra(n={self.n}, p={self.p})"

    # -- element constructors ------------------------------------------------

    def element(self, terms: dict) -> "AlgebraElement":
        return AlgebraElement(self, terms)

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def basis(self, kind, i, j, a=None, b=0) -> "AlgebraElement":
        a = tuple(a) if a is not None else (0,) * self.n
        return AlgebraElement(self, {NormalBasisElement(kind, i, j, a, b): 1})

    def e(self, k: int) -> "AlgebraElement":
        if not 0 <= k <= self.n:
            raise ValueError(f"idempotent slot {k} out of range 0..{self.n}")
        return self.basis("NE", k, k)

    def one(self) -> "AlgebraElement":
        return AlgebraElement(self, {NormalBasisElement("NE", k, k, (0,) * self.n, 0): 1
                                     for k in range(self.n + 1)})

    def x(self, j: int) -> "AlgebraElement":
        if not 1 <= j <= self.n:
            raise ValueError(f"x index {j} out of range 1..{self.n}")
        return self.reduce((("x", j),))

    def y(self) -> "AlgebraElement":
        return self.reduce((("y",),))

    def psi(self, j: int) -> "AlgebraElement":
        if not 1 <= j <= self.n:
            raise ValueError(f"psi index {j} out of range 1..{self.n}")
        return self.reduce((("psi", j),))

    # -- canonical word of a basis element ------------------------------------

    def word_of(self, t: NormalBasisElement) -> Word:
        tokens = []
        for j in range(self.n):
            tokens.extend((("x", j + 1),) * t.a[j])
        tokens.extend((("y",),) * t.b)
        if t.kind == "NE":
            tokens.extend(("psi", k) for k in range(t.j, t.i, -1))
            tokens.append(("e", t.i))
        else:
            tokens.extend(("psi", k) for k in range(t.i + 1, t.j + 1))
            tokens.append(("e", t.j))
        return tuple(tokens)

    # -- single-generator multiplication rules ---------------------------------

    def _psi_left_terms(self, k: int, t: NormalBasisElement) -> list:
        """psi_k * t as [(basis, coeff)]; stacking a crossing on top."""
        kind, i, j, a, b = t
        out = []
        if kind == "NE":
            if k == j + 1:
                out.append((NormalBasisElement("NE", i, j + 1, a, b), 1))
            elif k == j:
                if j > i:
                    # contract the double crossing over red j (right then left)
                    s = PSI_SQUARE_SIGN_RIGHT_LEFT
                    out.append((NormalBasisElement("NE", i, j - 1, a, b + 1), s))
                    aa = list(a)
                    aa[j - 1] += 1
                    out.append((NormalBasisElement("NE", i, j - 1, tuple(aa), b), -s))
                else:
                    # psi_i on the idempotent e_i: black steps left
                    out.append((NormalBasisElement("SE", i - 1, i, a, b), 1))
        else:  # SE, top slot i
            if k == i:
                out.append((NormalBasisElement("SE", i - 1, j, a, b), 1))
            elif k == i + 1:
                # contract the double crossing over red i+1 (left then right)
                s = PSI_SQUARE_SIGN_LEFT_RIGHT
                tgt = (NormalBasisElement("SE", i + 1, j, a, b + 1) if i + 1 < j
                       else NormalBasisElement("NE", j, j, a, b + 1))
                out.append((tgt, s))
                aa = list(a)
                aa[i] += 1
                tgt2 = (NormalBasisElement("SE", i + 1, j, tuple(aa), b) if i + 1 < j
                        else NormalBasisElement("NE", j, j, tuple(aa), b))
                out.append((tgt2, -s))
        return out

    def _psi_right_terms(self, t: NormalBasisElement, k: int) -> list:
        """t * psi_k as [(basis, coeff)]; stacking a crossing at the bottom."""
        kind, i, j, a, b = t
        out = []
        if kind == "NE":
            if k == i:
                out.append((NormalBasisElement("NE", i - 1, j, a, b), 1))
            elif k == i + 1:
                if j > i:
                    # black below at slot i+1 crosses red i+1 leftward, then back
                    s = PSI_SQUARE_SIGN_LEFT_RIGHT
                    out.append((NormalBasisElement("NE", i + 1, j, a, b + 1), s))
                    aa = list(a)
                    aa[i] += 1
                    out.append((NormalBasisElement("NE", i + 1, j, tuple(aa), b), -s))
                else:
                    # e_i * psi_{i+1}: black enters from slot i+1 below
                    out.append((NormalBasisElement("SE", i, i + 1, a, b), 1))
        else:  # SE, bottom slot j
            if k == j + 1:
                out.append((NormalBasisElement("SE", i, j + 1, a, b), 1))
            elif k == j:
                # black below at slot j-1 crosses red j rightward, then back
                s = PSI_SQUARE_SIGN_RIGHT_LEFT
                tgt = (NormalBasisElement("SE", i, j - 1, a, b + 1) if j - 1 > i
                       else NormalBasisElement("NE", i, i, a, b + 1))
                out.append((tgt, s))
                aa = list(a)
                aa[j - 1] += 1
                tgt2 = (NormalBasisElement("SE", i, j - 1, tuple(aa), b) if j - 1 > i
                        else NormalBasisElement("NE", i, i, tuple(aa), b))
                out.append((tgt2, -s))
        return out

    def apply_token_left(self, token: Token, elt: "AlgebraElement") -> "AlgebraElement":
        p = self.p
        out: dict = {}

        def acc(basis, c):
            v = (out.get(basis, 0) + c) % p
            if v:
                out[basis] = v
            else:
                out.pop(basis, None)

        kind = token[0]
        for t, c in elt.terms.items():
            if kind == "e":
                if token[1] == t.top:
                    acc(t, c)
            elif kind == "x":
                aa = list(t.a)
                aa[token[1] - 1] += 1
                acc(t.with_dots(a=tuple(aa)), c)
            elif kind == "y":
                acc(t.with_dots(b=t.b + 1), c)
            elif kind == "psi":
                for t2, c2 in self._psi_left_terms(token[1], t):
                    acc(t2, c * c2)
            else:
                raise ValueError(f"bad token {token}")
        return AlgebraElement(self, out)

    def apply_token_right(self, elt: "AlgebraElement", token: Token) -> "AlgebraElement":
        p = self.p
        out: dict = {}

        def acc(basis, c):
            v = (out.get(basis, 0) + c) % p
            if v:
                out[basis] = v
            else:
                out.pop(basis, None)

        kind = token[0]
        for t, c in elt.terms.items():
            if kind == "e":
                if token[1] == t.bottom:
                    acc(t, c)
            elif kind == "x":
                aa = list(t.a)
                aa[token[1] - 1] += 1
                acc(t.with_dots(a=tuple(aa)), c)
            elif kind == "y":
                acc(t.with_dots(b=t.b + 1), c)
            elif kind == "psi":
                for t2, c2 in self._psi_right_terms(t, token[1]):
                    acc(t2, c * c2)
            else:
                raise ValueError(f"bad token {token}")
        return AlgebraElement(self, out)

    # -- rewriting and multiplication ------------------------------------------

    def reduce(self, word, strategy: str = "left") -> "AlgebraElement":
        """Rewrite a word of generator tokens to canonical form.

        strategy 'left': fold tokens right-to-left by left multiplication;
        'right': fold left-to-right by right multiplication; 'split': divide
        and conquer via mul.  All agree (confluence, tested).
        """
        word = tuple(word)
        if strategy == "left":
            elt = self.one()
            for token in reversed(word):
                elt = self.apply_token_left(token, elt)
            return elt
        if strategy == "right":
            elt = self.one()
            for token in word:
                elt = self.apply_token_right(elt, token)
            return elt
        if strategy == "split":
            if len(word) <= 1:
                return self.reduce(word, "left")
            mid = len(word) // 2
            return self.mul(self.reduce(word[:mid], "split"),
                            self.reduce(word[mid:], "split"))
        raise ValueError(f"unknown strategy {strategy}")

    def mul_basis(self, s: NormalBasisElement, t: NormalBasisElement) -> "AlgebraElement":
        key = (s, t)
        hit = self._mul_memo.get(key)
        if hit is not None:
            return hit
        if s.bottom != t.top:
            result = self.zero()
        else:
            elt = AlgebraElement(self, {t: 1})
            for token in reversed(self.word_of(s)):
                elt = self.apply_token_left(token, elt)
            result = elt
        self._mul_memo[key] = result
        return result

    def mul(self, a: "AlgebraElement", b: "AlgebraElement") -> "AlgebraElement":
        if a.alg is not b.alg and (a.alg.n, a.alg.p) != (b.alg.n, b.alg.p):
            raise ValueError("mismatched algebras")
        p = self.p
        out: dict = {}
        for s, cs in a.terms.items():
            for t, ct in b.terms.items():
                c = cs * ct % p
                for u, cu in self.mul_basis(s, t).terms.items():
                    v = (out.get(u, 0) + c * cu) % p
                    if v:
                        out[u] = v
                    else:
                        out.pop(u, None)
        return AlgebraElement(self, out)

    # -- differential -----------------------------------------------------------

    def _token_differential(self, token: Token) -> list:
        """d(token) as a list of replacement words (each with coefficient 1).

        d(e)=0, d(x_j)=x_j^2, d(y)=y^2,
        d(psi_j) = x_j psi_j e_{j-1} + y psi_j e_j.
        """
        kind = token[0]
        if kind == "e":
            return []
        if kind == "x":
            return [(token, token)]
        if kind == "y":
            return [(token, token)]
        if kind == "psi":
            jj = token[1]
            return [(("x", jj), ("psi", jj), ("e", jj - 1)),
                    (("y",), ("psi", jj), ("e", jj))]
        raise ValueError(f"bad token {token}")

    def differential_basis(self, t: NormalBasisElement) -> "AlgebraElement":
        hit = self._diff_memo.get(t)
        if hit is not None:
            return hit
        word = self.word_of(t)
        total = self.zero()
        for k, token in enumerate(word):
            for repl in self._token_differential(token):
                total = total + self.reduce(word[:k] + repl + word[k + 1:])
        self._diff_memo[t] = total
        return total

    def differential(self, a: "AlgebraElement") -> "AlgebraElement":
        out = self.zero()
        for t, c in a.terms.items():
            out = out + self.differential_basis(t).scale(c)
        return out

    # -- basis enumeration -------------------------------------------------------

    def enumerate_basis(self, d: int) -> list:
        """All canonical basis elements of internal degree exactly d, sorted."""
        if d < 0:
            return []
        out = []
        shapes = [("NE", i, j) for i in range(self.n + 1)
                  for j in range(i, self.n + 1)]
        shapes += [("SE", i, j) for i in range(self.n + 1)
                   for j in range(i + 1, self.n + 1)]
        for kind, i, j in shapes:
            c = crossing_count(kind, i, j)
            rem = d - c
            if rem < 0 or rem % 2:
                continue
            for mono in compositions(rem // 2, self.n + 1):
                out.append(NormalBasisElement(kind, i, j, mono[:-1], mono[-1]))
        out.sort()
        return out

    def random_element(self, degree: int, rng, num_terms: int = 3) -> "AlgebraElement":
        """Random homogeneous element of the given degree (test helper)."""
        basis = self.enumerate_basis(degree)
        if not basis:
            return self.zero()
        terms: dict = {}
        for _ in range(num_terms):
            t = basis[rng.randrange(len(basis))]
            c = rng.randrange(1, self.p)
            terms[t] = (terms.get(t, 0) + c) % self.p
        return AlgebraElement(self, {t: c for t, c in terms.items() if c})


@lru_cache(maxsize=None)
def compositions(total: int, parts: int) -> tuple:
    """All tuples of `parts` nonnegative integers summing to `total`."""
    if parts == 0:
        return ((),) if total == 0 else ()
    if parts == 1:
        return ((total,),)
    out = []
    for first in range(total + 1):
        for rest in compositions(total - first, parts - 1):
            out.append((first,) + rest)
    return tuple(out)


class AlgebraElement:
    """Sparse F_p-linear combination of canonical basis elements."""

    __slots__ = ("alg", "terms")

    def __init__(self, alg: WebsterAlgebra, terms: dict):
        self.alg = alg
        clean = {}
        for t, c in terms.items():
            c %= alg.p
            if c:
                clean[t] = c
        self.terms = clean

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Internal degree; -1 for zero, error if inhomogeneous."""
        degs = {t.degree for t in self.terms}
        if not degs:
            return -1
        if len(degs) > 1:
            raise ValueError(f"inhomogeneous element, degrees {sorted(degs)}")
        return degs.pop()

    def degrees(self) -> set:
        return {t.degree for t in self.terms}

    def homogeneous_part(self, d: int) -> "AlgebraElement":
        return AlgebraElement(self.alg, {t: c for t, c in self.terms.items()
                                         if t.degree == d})

    @property
    def top(self) -> int:
        """Common top slot of all terms; error if mixed."""
        tops = {t.top for t in self.terms}
        if len(tops) != 1:
            raise ValueError("element has no single top idempotent")
        return tops.pop()

    @property
    def bottom(self) -> int:
        bots = {t.bottom for t in self.terms}
        if len(bots) != 1:
            raise ValueError("element has no single bottom idempotent")
        return bots.pop()

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.terms)
        for t, c in other.terms.items():
            v = (out.get(t, 0) + c) % self.alg.p
            if v:
                out[t] = v
            else:
                out.pop(t, None)
        r = AlgebraElement(self.alg, {})
        r.terms = out
        return r

    def __sub__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self + other.scale(-1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, c: int) -> "AlgebraElement":
        c %= self.alg.p
        if not c:
            return AlgebraElement(self.alg, {})
        return AlgebraElement(self.alg, {t: v * c % self.alg.p
                                         for t, v in self.terms.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self.alg.mul(self, other)

    def __eq__(self, other):
        return (isinstance(other, AlgebraElement)
                and (self.alg.n, self.alg.p) == (other.alg.n, other.alg.p)
                and self.terms == other.terms)

    def __hash__(self):
        return hash(((self.alg.n, self.alg.p), tuple(sorted(self.terms.items()))))

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for t in sorted(self.terms):
            c = self.terms[t]
            parts.append(f"{c}*{t!r}" if c != 1 else repr(t))
        return " + ".join(parts)


# -- module-level operation aliases ------------------------------------------


def reduce_word(alg: WebsterAlgebra, word, strategy: str = "left") -> AlgebraElement:
    return alg.reduce(word, strategy)


def mul(a: AlgebraElement, b: AlgebraElement) -> AlgebraElement:
    return a.alg.mul(a, b)


def differential(a: AlgebraElement) -> AlgebraElement:
    return a.alg.differential(a)


def enumerate_basis(alg: WebsterAlgebra, d: int) -> list:
    return alg.enumerate_basis(d)


# -- word parsing ---------------------------------------------------------------

_WORD_TOKEN_RE = re.compile(r"^(?:e(\d+)|x(\d+)(?:\^(\d+))?|y(?:\^(\d+))?|psi(\d+))$")


def parse_word(text: str, n: int) -> Word:
    """Parse `e2 * psi1 * x1^3 * y^2 * e1` into a token word (left = top)."""
    tokens = []
    for piece in text.replace(" ", "").split("*"):
        if not piece:
            continue
        m = _WORD_TOKEN_RE.match(piece)
        if not m:
            raise ValueError(f"cannot parse generator {piece!r}")
        if m.group(1) is not None:
            k = int(m.group(1))
            if not 0 <= k <= n:
                raise ValueError(f"e{k} out of range for n={n}")
            tokens.append(("e", k))
        elif m.group(2) is not None:
            j = int(m.group(2))
            if not 1 <= j <= n:
                raise ValueError(f"x{j} out of range for n={n}")
            tokens.extend((("x", j),) * int(m.group(3) or 1))
        elif piece.startswith("y"):
            tokens.extend((("y",),) * int(m.group(4) or 1))
        else:
            j = int(m.group(5))
            if not 1 <= j <= n:
                raise ValueError(f"psi{j} out of range for n={n}")
            tokens.append(("psi", j))
    return tuple(tokens)


def parse_element(text: str, alg: WebsterAlgebra) -> AlgebraElement:
    """Parse a sum of scaled words, e.g. `2*e1*psi1 + x1*e0`."""
    text = text.replace("-", "+-")
    total = alg.zero()
    for chunk in text.split("+"):
        chunk = chunk.strip()
        if not chunk:
            continue
        sign = 1
        if chunk.startswith("-"):
            sign = -1
            chunk = chunk[1:]
        coeff = sign
        pieces = []
        for piece in chunk.replace(" ", "").split("*"):
            if piece.isdigit():
                coeff *= int(piece)
            else:
                pieces.append(piece)
        total = total + alg.reduce(parse_word("*".join(pieces), alg.n)).scale(coeff)
    return total
