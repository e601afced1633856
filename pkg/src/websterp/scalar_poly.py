"""Exact arithmetic in F_p[x_1..x_n, y] with the degree-2 derivation and divided differences.

Monomials are exponent tuples (a_1, ..., a_n, b) for x_1^{a_1} ... x_n^{a_n} y^b.
The internal degree of a monomial is 2*(sum of exponents); every generator x_j, y
has degree 2.  Polynomials are sparse maps from monomials to nonzero scalars mod p.
"""

from __future__ import annotations

import re


def is_prime(m: int) -> bool:
    if m < 2:
        return False
    d = 2
    while d * d <= m:
        if m % d == 0:
            return False
        d += 1
    return True


class FieldParams:
    """The prime field F_p, p an odd prime."""

    __slots__ = ("p",)

    def __init__(self, p: int):
        if not is_prime(p) or p < 3:
            raise ValueError(f"p must be an odd prime, got {p}")
        self.p = p

    def __repr__(self):
        return f"FieldParams(p={self.p})"


Monomial = tuple  # (a_1, ..., a_n, b)


def monomial_degree(m: Monomial) -> int:
    return 2 * sum(m)


def grlex_key(m: Monomial):
    """Graded lexicographic sort key (total exponent first, then lex)."""
    return (sum(m), m)


class Polynomial:
    """Sparse polynomial in x_1..x_n and y over F_p.

    Immutable by convention: never mutate .terms after construction.
    """

    __slots__ = ("n", "p", "terms")

    def __init__(self, n: int, p: int, terms: dict | None = None):
        self.n = n
        self.p = p
        clean = {}
        if terms:
            for m, c in terms.items():
                c %= p
                if c:
                    if len(m) != n + 1 or any(e < 0 for e in m):
                        raise ValueError(f"bad monomial {m} for n={n}")
                    clean[tuple(m)] = c
        self.terms = clean

    # -- constructors ------------------------------------------------------

    @classmethod
    def zero(cls, n: int, p: int) -> "Polynomial":
        return cls(n, p)

    @classmethod
    def one(cls, n: int, p: int) -> "Polynomial":
        return cls(n, p, {tuple([0] * (n + 1)): 1})

    @classmethod
    def constant(cls, n: int, p: int, c: int) -> "Polynomial":
        return cls(n, p, {tuple([0] * (n + 1)): c % p})

    @classmethod
    def x(cls, n: int, p: int, j: int) -> "Polynomial":
        if not 1 <= j <= n:
            raise ValueError(f"x index {j} out of range 1..{n}")
        e = [0] * (n + 1)
        e[j - 1] = 1
        return cls(n, p, {tuple(e): 1})

    @classmethod
    def y(cls, n: int, p: int) -> "Polynomial":
        e = [0] * (n + 1)
        e[n] = 1
        return cls(n, p, {tuple(e): 1})

    @classmethod
    def monomial(cls, n: int, p: int, m: Monomial, c: int = 1) -> "Polynomial":
        return cls(n, p, {tuple(m): c % p})

    # -- basic queries -----------------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        """Internal degree (2 * top total exponent); -1 for the zero polynomial."""
        if not self.terms:
            return -1
        return max(monomial_degree(m) for m in self.terms)

    def is_homogeneous(self) -> bool:
        degs = {monomial_degree(m) for m in self.terms}
        return len(degs) <= 1

    def homogeneous_part(self, d: int) -> "Polynomial":
        return Polynomial(self.n, self.p,
                          {m: c for m, c in self.terms.items() if monomial_degree(m) == d})

    def _check(self, other: "Polynomial"):
        if self.n != other.n or self.p != other.p:
            raise ValueError("mismatched polynomial rings")

    def __eq__(self, other):
        return (isinstance(other, Polynomial) and self.n == other.n
                and self.p == other.p and self.terms == other.terms)

    def __hash__(self):
        return hash((self.n, self.p, tuple(sorted(self.terms.items()))))

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            v = (out.get(m, 0) + c) % self.p
            if v:
                out[m] = v
            else:
                out.pop(m, None)
        r = Polynomial(self.n, self.p)
        r.terms = out
        return r

    def __neg__(self) -> "Polynomial":
        return self.scale(-1)

    def __sub__(self, other: "Polynomial") -> "Polynomial":
        return self + other.scale(-1)

    def scale(self, c: int) -> "Polynomial":
        c %= self.p
        if c == 0:
            return Polynomial.zero(self.n, self.p)
        return Polynomial(self.n, self.p, {m: (v * c) % self.p for m, v in self.terms.items()})

    def __mul__(self, other: "Polynomial") -> "Polynomial":
        self._check(other)
        out = {}
        p = self.p
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                m = tuple(a + b for a, b in zip(m1, m2))
                v = (out.get(m, 0) + c1 * c2) % p
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
        r = Polynomial(self.n, self.p)
        r.terms = out
        return r

    def mul_monomial(self, m: Monomial, c: int = 1) -> "Polynomial":
        p = self.p
        c %= p
        if c == 0:
            return Polynomial.zero(self.n, self.p)
        return Polynomial(self.n, self.p,
                          {tuple(a + b for a, b in zip(m1, m)): (v * c) % p
                           for m1, v in self.terms.items()})

    # -- structure maps ----------------------------------------------------

    def swap(self, i: int) -> "Polynomial":
        """Apply the transposition s_i exchanging x_i and x_{i+1}."""
        if not 1 <= i <= self.n - 1:
            raise ValueError(f"swap index {i} out of range 1..{self.n - 1}")
        out = {}
        for m, c in self.terms.items():
            mm = list(m)
            mm[i - 1], mm[i] = mm[i], mm[i - 1]
            out[tuple(mm)] = c
        r = Polynomial(self.n, self.p)
        r.terms = out
        return r

    def substitute_y(self, val: "Polynomial") -> "Polynomial":
        """Substitute the given polynomial for y."""
        self._check(val)
        n, p = self.n, self.p
        out = Polynomial.zero(n, p)
        powers = {0: Polynomial.one(n, p)}
        for m, c in self.terms.items():
            b = m[n]
            if b not in powers:
                q = powers[max(powers)]
                for k in range(max(powers) + 1, b + 1):
                    q = q * val
                    powers[k] = q
            base = tuple(list(m[:n]) + [0])
            out = out + powers[b].mul_monomial(base, c)
        return out

    # -- printing / parsing --------------------------------------------------

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for m in sorted(self.terms, key=grlex_key, reverse=True):
            c = self.terms[m]
            factors = []
            if c != 1 or not any(m):
                factors.append(str(c))
            for j in range(self.n):
                if m[j] == 1:
                    factors.append(f"x{j + 1}")
                elif m[j] > 1:
                    factors.append(f"x{j + 1}^{m[j]}")
            if m[self.n] == 1:
                factors.append("y")
            elif m[self.n] > 1:
                factors.append(f"y^{m[self.n]}")
            parts.append("*".join(factors))
        return " + ".join(parts)


# -- module-level operations -------------------------------------------------


def poly_add(f: Polynomial, g: Polynomial) -> Polynomial:
    return f + g


def poly_mul(f: Polynomial, g: Polynomial) -> Polynomial:
    return f * g


def poly_derivation(f: Polynomial) -> Polynomial:
    """The derivation with x_j -> x_j^2, y -> y^2, extended by the Leibniz rule.

    On a monomial x^a y^b it yields sum_j a_j x^{a+e_j} y^b + b x^a y^{b+1};
    homogeneous degree +2.
    """
    n, p = f.n, f.p
    out = {}
    for m, c in f.terms.items():
        for j in range(n + 1):
            if m[j] == 0:
                continue
            mm = list(m)
            mm[j] += 1
            key = tuple(mm)
            v = (out.get(key, 0) + c * m[j]) % p
            if v:
                out[key] = v
            else:
                out.pop(key, None)
    r = Polynomial(n, p)
    r.terms = out
    return r


def divided_difference(i: int, f: Polynomial) -> Polynomial:
    """D_i(f) = (f - f^{s_i}) / (x_i - x_{i+1}), an exact quotient.

    Computed by explicit long division of the antisymmetrized numerator by
    x_i - x_{i+1}; a nonzero remainder raises (it would indicate a bug).
    """
    if not 1 <= i <= f.n - 1:
        raise ValueError(f"divided difference index {i} out of range 1..{f.n - 1}")
    n, p = f.n, f.p
    num = f - f.swap(i)
    quot = {}

    def lead_key(m):
        return (m[i - 1], sum(m), m)

    while num.terms:
        lead = max(num.terms, key=lead_key)
        c = num.terms[lead]
        if lead[i - 1] == 0:
            raise ArithmeticError(
                f"nonzero remainder in divided difference: {num!r}")
        q = list(lead)
        q[i - 1] -= 1
        q = tuple(q)
        quot[q] = (quot.get(q, 0) + c) % p
        # subtract c * q * (x_i - x_{i+1})
        lower = list(q)
        lower[i] += 1
        delta = Polynomial(n, p, {lead: c, tuple(lower): -c})
        num = num - delta
    return Polynomial(n, p, quot)


# -- parsing -------------------------------------------------------------------

_FACTOR_RE = re.compile(r"^(?:(\d+)|x(\d+)(?:\^(\d+))?|y(?:\^(\d+))?)$")


def parse_polynomial(text: str, n: int, p: int) -> Polynomial:
    """Parse textual syntax like '3*x1^2*y + 2*x2' (coefficients reduced mod p)."""
    text = text.replace("-", "+-").replace(" ", "")
    if text.startswith("+"):
        text = text[1:]
    result = Polynomial.zero(n, p)
    for term in text.split("+"):
        if not term:
            continue
        sign = 1
        if term.startswith("-"):
            sign = -1
            term = term[1:]
        coeff = sign
        expo = [0] * (n + 1)
        for factor in term.split("*"):
            mm = _FACTOR_RE.match(factor)
            if not mm:
                raise ValueError(f"cannot parse polynomial factor {factor!r}")
            if mm.group(1) is not None:
                coeff *= int(mm.group(1))
            elif mm.group(2) is not None:
                j = int(mm.group(2))
                if not 1 <= j <= n:
                    raise ValueError(f"variable x{j} out of range for n={n}")
                expo[j - 1] += int(mm.group(3) or 1)
            else:
                expo[n] += int(mm.group(4) or 1)
        result = result + Polynomial.monomial(n, p, tuple(expo), coeff)
    return result
