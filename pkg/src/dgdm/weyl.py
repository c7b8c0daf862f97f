"""Exact arithmetic in the Weyl algebra.

D is the algebra of polynomial differential operators on affine n-space
over the rationals, generated by x_1..x_n and d_1..d_n subject to
d_i*x_i = x_i*d_i + 1 (all other pairs commute).  Every element has a
unique normal form as a finite sum  sum c_{a,b} x^a d^b  with exact
rational coefficients; that normal form is the stored representation.

  Monomial = (a, b)   a, b tuples of length nvars (x- and d-exponents)
  terms    = Dict[Monomial, Fraction], zero coefficients never stored

O = k[x_1..x_n] sits inside D as the elements with b = 0; `Polynomial`
is the standalone representation used where only O is meant.
"""

from __future__ import annotations

import math
from fractions import Fraction
from itertools import product
from typing import Dict, Iterable, Tuple

Exponent = Tuple[int, ...]
Monomial = Tuple[Exponent, Exponent]  # (x-exponents, d-exponents)


class NvarsMismatch(ValueError):
    """Operands live over Weyl algebras with different numbers of variables."""


def _check_same_nvars(p, q):
    if p.nvars != q.nvars:
        raise NvarsMismatch(f"nvars mismatch: {p.nvars} != {q.nvars}")


def mono_mul(m1: Monomial, m2: Monomial) -> Dict[Monomial, Fraction]:
    """Normal-ordered product of two monomials x^a d^b * x^c d^e.

    Rewriting d^b x^c by the commutation relation gives
        sum_k  binom(b,k) * c!/(c-k)! * x^{a+c-k} d^{b+e-k}
    with k running componentwise over 0 <= k <= min(b, c).
    """
    (a, b), (c, e) = m1, m2
    out: Dict[Monomial, Fraction] = {}
    ranges = [range(min(bi, ci) + 1) for bi, ci in zip(b, c)]
    for k in product(*ranges):
        coef = 1
        for bi, ci, ki in zip(b, c, k):
            coef *= math.comb(bi, ki) * math.perm(ci, ki)
        key = (
            tuple(ai + ci - ki for ai, ci, ki in zip(a, c, k)),
            tuple(bi + ei - ki for bi, ei, ki in zip(b, e, k)),
        )
        out[key] = out.get(key, Fraction(0)) + coef
    return out


class WeylElement:
    """An element of D in normal order with exact rational coefficients.

    Immutable by convention: no method mutates `terms` after construction.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Monomial, Fraction] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be a positive integer")
        self.nvars = nvars
        clean: Dict[Monomial, Fraction] = {}
        for mono, coef in (terms or {}).items():
            coef = Fraction(coef)
            if coef:
                clean[mono] = coef
        self.terms = clean

    # -- constructors ------------------------------------------------

    @classmethod
    def zero(cls, nvars: int) -> "WeylElement":
        return cls(nvars, {})

    @classmethod
    def one(cls, nvars: int) -> "WeylElement":
        z = (0,) * nvars
        return cls(nvars, {(z, z): Fraction(1)})

    @classmethod
    def scalar(cls, nvars: int, c) -> "WeylElement":
        z = (0,) * nvars
        return cls(nvars, {(z, z): Fraction(c)})

    @classmethod
    def x(cls, i: int, nvars: int) -> "WeylElement":
        """The coordinate function x_i (1-based index)."""
        if not 1 <= i <= nvars:
            raise ValueError(f"variable index {i} out of range 1..{nvars}")
        a = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls(nvars, {(a, (0,) * nvars): Fraction(1)})

    @classmethod
    def d(cls, i: int, nvars: int) -> "WeylElement":
        """The partial derivative d_i (1-based index)."""
        if not 1 <= i <= nvars:
            raise ValueError(f"variable index {i} out of range 1..{nvars}")
        b = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls(nvars, {((0,) * nvars, b): Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, a: Iterable[int], b: Iterable[int], coef=1) -> "WeylElement":
        return cls(nvars, {(tuple(a), tuple(b)): Fraction(coef)})

    # -- predicates / views -------------------------------------------

    def is_zero(self) -> bool:
        return not self.terms

    def is_polynomial(self) -> bool:
        """True iff the element lies in O (no d's)."""
        zero = (0,) * self.nvars
        return all(b == zero for (_, b) in self.terms)

    def is_scalar(self) -> bool:
        z = (0,) * self.nvars
        return not self.terms or set(self.terms) == {(z, z)}

    def scalar_value(self) -> Fraction:
        if not self.is_scalar():
            raise ValueError("not a scalar element")
        z = (0,) * self.nvars
        return self.terms.get((z, z), Fraction(0))

    def total_degree(self) -> int:
        """Max of |a| + |b| over the support; -1 for zero."""
        if not self.terms:
            return -1
        return max(sum(a) + sum(b) for (a, b) in self.terms)

    # -- ring operations ----------------------------------------------

    def __add__(self, other: "WeylElement") -> "WeylElement":
        _check_same_nvars(self, other)
        terms = dict(self.terms)
        for mono, coef in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coef
        return WeylElement(self.nvars, terms)

    def __neg__(self) -> "WeylElement":
        return WeylElement(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other: "WeylElement") -> "WeylElement":
        return self + (-other)

    def __mul__(self, other) -> "WeylElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        _check_same_nvars(self, other)
        terms: Dict[Monomial, Fraction] = {}
        for m1, c1 in self.terms.items():
            for m2, c2 in other.terms.items():
                c12 = c1 * c2
                for mono, coef in mono_mul(m1, m2).items():
                    terms[mono] = terms.get(mono, Fraction(0)) + c12 * coef
        return WeylElement(self.nvars, terms)

    def __rmul__(self, other) -> "WeylElement":
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def scale(self, c) -> "WeylElement":
        c = Fraction(c)
        return WeylElement(self.nvars, {m: c * v for m, v in self.terms.items()})

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, WeylElement)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    # -- filtration by operator order ----------------------------------

    def order(self) -> int:
        """Operator order: max |b| over the support.  Raises on zero."""
        if not self.terms:
            raise ValueError("the zero element has no order")
        return max(sum(b) for (_, b) in self.terms)

    def __repr__(self):
        return f"WeylElement({self.to_string()!r})"

    def to_string(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for (a, b) in sorted(self.terms, key=lambda m: (sum(m[0]) + sum(m[1]), m)):
            coef = self.terms[(a, b)]
            factors = []
            for i, e in enumerate(a):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            for i, e in enumerate(b):
                if e == 1:
                    factors.append(f"d{i + 1}")
                elif e > 1:
                    factors.append(f"d{i + 1}^{e}")
            if not factors:
                parts.append(str(coef))
            elif coef == 1:
                parts.append("*".join(factors))
            elif coef == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(str(coef) + "*" + "*".join(factors))
        s = " + ".join(parts)
        return s.replace("+ -", "- ")


class Polynomial:
    """An element of O = k[x_1..x_n]; the monoidal unit lives in degree 0."""

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Dict[Exponent, Fraction] | None = None):
        if nvars < 1:
            raise ValueError("nvars must be a positive integer")
        self.nvars = nvars
        clean: Dict[Exponent, Fraction] = {}
        for mono, coef in (terms or {}).items():
            coef = Fraction(coef)
            if coef:
                clean[tuple(mono)] = coef
        self.terms = clean

    @classmethod
    def zero(cls, nvars: int) -> "Polynomial":
        return cls(nvars, {})

    @classmethod
    def one(cls, nvars: int) -> "Polynomial":
        return cls(nvars, {(0,) * nvars: Fraction(1)})

    @classmethod
    def x(cls, i: int, nvars: int) -> "Polynomial":
        a = tuple(1 if j == i - 1 else 0 for j in range(nvars))
        return cls(nvars, {a: Fraction(1)})

    @classmethod
    def monomial(cls, nvars: int, a: Iterable[int], coef=1) -> "Polynomial":
        return cls(nvars, {tuple(a): Fraction(coef)})

    def is_zero(self) -> bool:
        return not self.terms

    def to_weyl(self) -> WeylElement:
        z = (0,) * self.nvars
        return WeylElement(self.nvars, {(a, z): c for a, c in self.terms.items()})

    @classmethod
    def from_weyl(cls, p: WeylElement) -> "Polynomial":
        if not p.is_polynomial():
            raise ValueError("element has differential part, not in O")
        return cls(p.nvars, {a: c for (a, _), c in p.terms.items()})

    def __add__(self, other: "Polynomial") -> "Polynomial":
        _check_same_nvars(self, other)
        terms = dict(self.terms)
        for mono, coef in other.terms.items():
            terms[mono] = terms.get(mono, Fraction(0)) + coef
        return Polynomial(self.nvars, terms)

    def __neg__(self):
        return Polynomial(self.nvars, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other) -> "Polynomial":
        if isinstance(other, (int, Fraction)):
            return Polynomial(self.nvars, {m: Fraction(other) * c for m, c in self.terms.items()})
        _check_same_nvars(self, other)
        terms: Dict[Exponent, Fraction] = {}
        for a, c1 in self.terms.items():
            for b, c2 in other.terms.items():
                key = tuple(ai + bi for ai, bi in zip(a, b))
                terms[key] = terms.get(key, Fraction(0)) + c1 * c2
        return Polynomial(self.nvars, terms)

    __rmul__ = __mul__

    def __eq__(self, other):
        return (
            isinstance(other, Polynomial)
            and self.nvars == other.nvars
            and self.terms == other.terms
        )

    def __hash__(self):
        return hash((self.nvars, frozenset(self.terms.items())))

    def __repr__(self):
        return f"Polynomial({self.to_weyl().to_string()!r})"


def multiply(p: WeylElement, q: WeylElement) -> WeylElement:
    """Normal-ordered product in D."""
    return p * q


def act_on_poly(p: WeylElement, f: Polynomial) -> Polynomial:
    """The tautological left action of D on O.

    x^a d^b acting on x^c gives  c!/(c-b)! x^{a+c-b}  when b <= c
    componentwise and 0 otherwise.
    """
    _check_same_nvars(p, f)
    terms: Dict[Exponent, Fraction] = {}
    for (a, b), coef in p.terms.items():
        for c, fc in f.terms.items():
            if any(bi > ci for bi, ci in zip(b, c)):
                continue
            scale = 1
            for bi, ci in zip(b, c):
                scale *= math.perm(ci, bi)
            key = tuple(ai + ci - bi for ai, ci, bi in zip(a, c, b))
            terms[key] = terms.get(key, Fraction(0)) + coef * fc * scale
    return Polynomial(p.nvars, terms)


def order_and_symbol(p: WeylElement) -> Tuple[int, Dict[Monomial, Fraction]]:
    """Operator order and principal symbol (the class in the top graded piece).

    The symbol is the sub-dictionary of terms whose d-order is maximal;
    in the associated graded ring these multiply commutatively.
    """
    k = p.order()  # raises on zero
    symbol = {(a, b): c for (a, b), c in p.terms.items() if sum(b) == k}
    return k, symbol


def filtration_decompose(p: WeylElement) -> list:
    """Split p into its homogeneous-order components.

    Returns [p_0, p_1, ..., p_k] with p_j collecting the terms of d-order
    exactly j and k the order of p; the empty list for p = 0.  Summing the
    components recovers p, witnessing the splitting of the order filtration
    into the direct sum of its graded pieces.
    """
    if p.is_zero():
        return []
    k = p.order()
    buckets = [dict() for _ in range(k + 1)]
    for (a, b), c in p.terms.items():
        buckets[sum(b)][(a, b)] = c
    return [WeylElement(p.nvars, bucket) for bucket in buckets]


def symbol_product(s1: Dict[Monomial, Fraction], s2: Dict[Monomial, Fraction]) -> Dict[Monomial, Fraction]:
    """Commutative product of symbols in the associated graded ring."""
    out: Dict[Monomial, Fraction] = {}
    for (a1, b1), c1 in s1.items():
        for (a2, b2), c2 in s2.items():
            key = (
                tuple(x + y for x, y in zip(a1, a2)),
                tuple(x + y for x, y in zip(b1, b2)),
            )
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v}
