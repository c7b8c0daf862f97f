"""Sullivan differential graded D-algebras.

A SullivanAlgebra is the free graded-commutative O-algebra on atoms
d^b g_j, where the g_j are finitely many graded generators, each
spanning a free D-module D.g_j.  A lowering differential assigns to
each generator a closed element of the subalgebra on strictly earlier
generators; it extends D-linearly to atoms and as an odd derivation to
everything.

Elements are stored canonically as

    { (alpha, atoms) : coefficient }

with alpha the x-exponent of the O-coefficient and atoms a sorted tuple
of (generator index, d-exponent).  Odd atoms appear at most once (the
square of an odd element vanishes); sorting costs Koszul signs.  The
x_i act on the coefficient, the d_i act as even derivations, and the
differential is an odd derivation, so checking identities on atoms and
generators checks them everywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, Iterable, Iterator, Optional, Sequence, Tuple

from .slices import TruncationResult, bounded_weq
from .weyl import Exponent, WeylElement

Atom = Tuple[int, Exponent]  # (generator index, d-exponent)
TermKey = Tuple[Exponent, Tuple[Atom, ...]]
Coeffs = Dict[TermKey, Fraction]

DEFAULT_DEGREE_WINDOW = 6


@dataclass(frozen=True)
class Generator:
    name: str
    degree: int

    def __post_init__(self):
        if self.degree < 0:
            raise ValueError("generator degrees must be non-negative")


def _normalize_atoms(atoms: Sequence[Atom], parities: Sequence[int]) -> Optional[Tuple[int, Tuple[Atom, ...]]]:
    """Sort atoms, tracking the Koszul sign; None when an odd atom repeats."""
    items = list(atoms)
    sign = 1
    # insertion sort; each swap of adjacent odd atoms flips the sign
    for i in range(1, len(items)):
        j = i
        while j > 0 and items[j] < items[j - 1]:
            if parities[items[j][0]] and parities[items[j - 1][0]]:
                sign = -sign
            items[j], items[j - 1] = items[j - 1], items[j]
            j -= 1
    for a, b in zip(items, items[1:]):
        if a == b and parities[a[0]]:
            return None
    return sign, tuple(items)


class SullivanAlgebra:
    """Free graded-commutative D-algebra on graded generators, with a
    lowering differential.  O itself is the algebra with no generators."""

    def __init__(
        self,
        nvars: int,
        generators: Sequence[Generator] = (),
        differential: Optional[Dict[int, Coeffs]] = None,
    ):
        self.nvars = nvars
        self.generators = tuple(generators)
        self.parities = tuple(g.degree % 2 for g in self.generators)
        diff = {j: dict(v) for j, v in (differential or {}).items() if v}
        self.diff_coeffs: Dict[int, Coeffs] = diff
        self._datom_cache: Dict[Atom, "AlgebraElement"] = {}
        for j, coeffs in diff.items():
            if not 0 <= j < len(self.generators):
                raise ValueError(f"differential assigned to unknown generator {j}")
            elt = AlgebraElement(self, coeffs)
            deg = elt.degree()
            if deg is not None and deg != self.generators[j].degree - 1:
                raise ValueError(
                    f"d({self.generators[j].name}) has degree {deg}, "
                    f"expected {self.generators[j].degree - 1}"
                )
            for (_, atoms) in coeffs:
                if any(a[0] >= j for a in atoms):
                    raise ValueError(
                        f"d({self.generators[j].name}) involves a non-earlier generator: "
                        "the differential must be lowering"
                    )
        for j in diff:
            dd = self.d(self.d_generator(j))
            if not dd.is_zero():
                raise ValueError(f"d*d != 0 on generator {self.generators[j].name}")

    # -- constructors ---------------------------------------------------

    @classmethod
    def oh(cls, nvars: int) -> "SullivanAlgebra":
        """The initial algebra O (no generators)."""
        return cls(nvars)

    def extended(self, gen: Generator, d_assignment: "AlgebraElement | None") -> "SullivanAlgebra":
        """A new algebra with one more (last) generator."""
        diff = {j: dict(v) for j, v in self.diff_coeffs.items()}
        if d_assignment is not None and not d_assignment.is_zero():
            diff[len(self.generators)] = dict(d_assignment.coeffs)
        return SullivanAlgebra(self.nvars, self.generators + (gen,), diff)

    # -- element constructors --------------------------------------------

    def zero(self) -> "AlgebraElement":
        return AlgebraElement(self, {})

    def one(self, coef=1) -> "AlgebraElement":
        return AlgebraElement(self, {((0,) * self.nvars, ()): Fraction(coef)})

    def x_poly(self, alpha: Iterable[int], coef=1) -> "AlgebraElement":
        return AlgebraElement(self, {(tuple(alpha), ()): Fraction(coef)})

    def generator(self, j: int) -> "AlgebraElement":
        return self.atom(j, (0,) * self.nvars)

    def atom(self, j: int, b: Iterable[int]) -> "AlgebraElement":
        if not 0 <= j < len(self.generators):
            raise ValueError(f"no generator with index {j}")
        key = ((0,) * self.nvars, ((j, tuple(b)),))
        return AlgebraElement(self, {key: Fraction(1)})

    def generator_index(self, name: str) -> int:
        for j, g in enumerate(self.generators):
            if g.name == name:
                return j
        raise KeyError(name)

    def d_generator(self, j: int) -> "AlgebraElement":
        return AlgebraElement(self, self.diff_coeffs.get(j, {}))

    # -- structure -------------------------------------------------------

    def term_degree(self, key: TermKey) -> int:
        return sum(self.generators[j].degree for (j, _) in key[1])

    def term_weight(self, key: TermKey) -> int:
        """|alpha| + sum over atoms of (|b| + 1); slices are finite."""
        alpha, atoms = key
        return sum(alpha) + sum(sum(b) + 1 for (_, b) in atoms)

    def multiply(self, u: "AlgebraElement", v: "AlgebraElement") -> "AlgebraElement":
        if u.algebra is not self and u.algebra != self:
            raise ValueError("element of a different algebra")
        out: Coeffs = {}
        for (a1, at1), c1 in u.coeffs.items():
            for (a2, at2), c2 in v.coeffs.items():
                norm = _normalize_atoms(at1 + at2, self.parities)
                if norm is None:
                    continue
                sign, atoms = norm
                key = (tuple(x + y for x, y in zip(a1, a2)), atoms)
                _acc(out, key, c1 * c2 * sign)
        return AlgebraElement(self, out)

    # -- D-action ----------------------------------------------------------

    def act_x(self, i: int, u: "AlgebraElement") -> "AlgebraElement":
        out: Coeffs = {}
        for (alpha, atoms), c in u.coeffs.items():
            na = tuple(e + 1 if k == i else e for k, e in enumerate(alpha))
            _acc(out, (na, atoms), c)
        return AlgebraElement(self, out)

    def act_d(self, i: int, u: "AlgebraElement") -> "AlgebraElement":
        """d_i as an even derivation: on the coefficient and on each atom."""
        out: Coeffs = {}
        for (alpha, atoms), c in u.coeffs.items():
            if alpha[i] > 0:
                na = tuple(e - 1 if k == i else e for k, e in enumerate(alpha))
                _acc(out, (na, atoms), c * alpha[i])
            for t, (j, b) in enumerate(atoms):
                nb = tuple(e + 1 if k == i else e for k, e in enumerate(b))
                cand = atoms[:t] + ((j, nb),) + atoms[t + 1:]
                norm = _normalize_atoms(cand, self.parities)
                if norm is None:
                    continue
                sign, sorted_atoms = norm
                _acc(out, (alpha, sorted_atoms), c * sign)
        return AlgebraElement(self, out)

    def act(self, op: WeylElement, u: "AlgebraElement") -> "AlgebraElement":
        """Action of a Weyl element: d's first, then x's (normal order)."""
        if op.nvars != self.nvars:
            raise ValueError("operator over the wrong Weyl algebra")
        total = self.zero()
        for (a, b), coef in op.terms.items():
            cur = u
            for i, e in enumerate(b):
                for _ in range(e):
                    cur = self.act_d(i, cur)
            for i, e in enumerate(a):
                for _ in range(e):
                    cur = self.act_x(i, cur)
            total = total + cur.scale(coef)
        return total

    # -- differential -------------------------------------------------------

    def _d_atom(self, atom: Atom) -> "AlgebraElement":
        cached = self._datom_cache.get(atom)
        if cached is None:
            j, b = atom
            base = self.d_generator(j)
            cached = self.act(WeylElement.monomial(self.nvars, (0,) * self.nvars, b), base)
            self._datom_cache[atom] = cached
        return cached

    def d(self, u: "AlgebraElement") -> "AlgebraElement":
        """The odd derivation extending the generator assignment D-linearly."""
        total = self.zero()
        for (alpha, atoms), c in u.coeffs.items():
            sign = 1
            for t, atom in enumerate(atoms):
                datom = self._d_atom(atom)
                if not datom.is_zero():
                    prefix = AlgebraElement(self, {(alpha, atoms[:t]): Fraction(c * sign)})
                    suffix = AlgebraElement(self, {((0,) * self.nvars, atoms[t + 1:]): Fraction(1)})
                    total = total + self.multiply(self.multiply(prefix, datom), suffix)
                if self.parities[atom[0]]:
                    sign = -sign
        return total

    # -- slice enumeration -----------------------------------------------

    def basis_keys(self, degree: int, max_weight: int) -> Iterator[TermKey]:
        """All canonical term keys of the given algebra degree and weight bound."""
        for atoms, cost in self._atom_multisets(0, degree, max_weight):
            budget = max_weight - cost
            for alpha in _exponents_bounded(self.nvars, budget):
                yield (alpha, atoms)

    def _atom_multisets(self, j: int, degree: int, budget: int):
        """Sorted atom tuples over generators j.. with given total degree."""
        if budget < 0 or degree < 0:
            return
        if j >= len(self.generators):
            if degree == 0:
                yield (), 0
            return
        # without generator j
        yield from self._atom_multisets(j + 1, degree, budget)
        if budget <= 0:
            return
        gdeg = self.generators[j].degree
        odd = self.parities[j]
        # choose a nonempty sorted tuple of d-exponents for generator j
        for bs in self._exponent_chains(budget, strictly=bool(odd)):
            used_deg = gdeg * len(bs)
            cost = sum(sum(b) + 1 for b in bs)
            if used_deg > degree or cost > budget:
                continue
            for rest, rcost in self._atom_multisets(j + 1, degree - used_deg, budget - cost):
                yield tuple((j, b) for b in bs) + rest, cost + rcost

    def _exponent_chains(self, budget: int, strictly: bool):
        """Nonempty sorted tuples of d-exponents with sum(|b|+1) <= budget."""
        singles = sorted(_exponents_bounded(self.nvars, budget - 1))

        def rec(start_idx, remaining):
            for idx in range(start_idx, len(singles)):
                b = singles[idx]
                cost = sum(b) + 1
                if cost > remaining:
                    continue
                yield (b,)
                nxt = idx + 1 if strictly else idx
                for rest in rec(nxt, remaining - cost):
                    yield (b,) + rest

        yield from rec(0, budget)

    def diff_on_key(self, key: TermKey) -> Coeffs:
        return self.d(AlgebraElement(self, {key: Fraction(1)})).coeffs

    # -- misc ---------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, SullivanAlgebra)
            and self.nvars == other.nvars
            and self.generators == other.generators
            and self.diff_coeffs == other.diff_coeffs
        )

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.generators)
        return f"SullivanAlgebra(nvars={self.nvars}, [{gens}])"


def _acc(store: Coeffs, key: TermKey, c: Fraction):
    s = store.get(key, Fraction(0)) + c
    if s:
        store[key] = s
    else:
        store.pop(key, None)


def _exponents_bounded(nvars: int, total: int):
    if total < 0:
        return
    for e in iproduct(*(range(total + 1) for _ in range(nvars))):
        if sum(e) <= total:
            yield e


class AlgebraElement:
    """A canonical-form element of a Sullivan algebra."""

    __slots__ = ("algebra", "coeffs")

    def __init__(self, algebra: SullivanAlgebra, coeffs: Coeffs):
        self.algebra = algebra
        self.coeffs = {k: Fraction(c) for k, c in coeffs.items() if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> Optional[int]:
        degs = {self.algebra.term_degree(k) for k in self.coeffs}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("inhomogeneous element has no degree")
        return degs.pop()

    def __add__(self, other: "AlgebraElement") -> "AlgebraElement":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            _acc(out, k, c)
        return AlgebraElement(self.algebra, out)

    def __neg__(self):
        return AlgebraElement(self.algebra, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AlgebraElement":
        c = Fraction(c)
        return AlgebraElement(self.algebra, {k: c * v for k, v in self.coeffs.items()})

    def __mul__(self, other: "AlgebraElement") -> "AlgebraElement":
        return self.algebra.multiply(self, other)

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraElement)
            and self.algebra == other.algebra
            and self.coeffs == other.coeffs
        )

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        return f"AlgebraElement({self.to_string()!r})"

    def to_string(self) -> str:
        if not self.coeffs:
            return "0"
        gens = self.algebra.generators
        parts = []
        for key in sorted(self.coeffs):
            alpha, atoms = key
            c = self.coeffs[key]
            factors = []
            for i, e in enumerate(alpha):
                if e == 1:
                    factors.append(f"x{i + 1}")
                elif e > 1:
                    factors.append(f"x{i + 1}^{e}")
            for (j, b) in atoms:
                if sum(b) == 0:
                    factors.append(gens[j].name)
                else:
                    factors.append(f"{gens[j].name}[{','.join(map(str, b))}]")
            if not factors:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(factors))
            elif c == -1:
                parts.append("-" + "*".join(factors))
            else:
                parts.append(f"{c}*" + "*".join(factors))
        return " + ".join(parts).replace("+ -", "- ")


def algebra_multiply(u: AlgebraElement, v: AlgebraElement) -> AlgebraElement:
    return u.algebra.multiply(u, v)


def apply_differential(u: AlgebraElement) -> AlgebraElement:
    return u.algebra.d(u)


# ---------------------------------------------------------------- morphisms

class AlgebraMorphism:
    """A DGDA morphism determined by generator assignments.

    Acts as the identity on O-coefficients, sends atom d^b g_j to
    d^b . phi(g_j), and extends multiplicatively; the chain-map law is
    checked on every generator at construction.
    """

    def __init__(self, source: SullivanAlgebra, target: SullivanAlgebra, assignments: Dict[int, AlgebraElement], check: bool = True):
        if source.nvars != target.nvars:
            raise ValueError("source and target over different Weyl algebras")
        self.source = source
        self.target = target
        self.assignments = dict(assignments)
        for j in range(len(source.generators)):
            if j not in self.assignments:
                raise ValueError(f"no assignment for generator {source.generators[j].name}")
            img = self.assignments[j]
            deg = img.degree()
            if deg is not None and deg != source.generators[j].degree:
                raise ValueError(f"assignment for {source.generators[j].name} has wrong degree")
        if check:
            for j in range(len(source.generators)):
                lhs = target.d(self.assignments[j])
                rhs = self.apply(source.d_generator(j))
                if lhs != rhs:
                    raise ValueError(
                        f"not a chain map on generator {source.generators[j].name}"
                    )

    def apply(self, u: AlgebraElement) -> AlgebraElement:
        out = self.target.zero()
        for (alpha, atoms), c in u.coeffs.items():
            term = AlgebraElement(self.target, {(alpha, ()): c})
            for (j, b) in atoms:
                img = self.target.act(
                    WeylElement.monomial(self.target.nvars, (0,) * self.target.nvars, b),
                    self.assignments[j],
                )
                term = term * img
            out = out + term
        return out

    def apply_key(self, key: TermKey) -> Coeffs:
        return self.apply(AlgebraElement(self.source, {key: Fraction(1)})).coeffs

    def __eq__(self, other):
        return (
            isinstance(other, AlgebraMorphism)
            and self.source == other.source
            and self.target == other.target
            and self.assignments == other.assignments
        )


def identity_morphism(a: SullivanAlgebra) -> AlgebraMorphism:
    return AlgebraMorphism(a, a, {j: a.generator(j) for j in range(len(a.generators))}, check=False)


def compose_morphisms(f: AlgebraMorphism, g: AlgebraMorphism) -> AlgebraMorphism:
    """g after f."""
    if f.target != g.source:
        raise ValueError("morphisms do not compose")
    return AlgebraMorphism(
        f.source, g.target, {j: g.apply(v) for j, v in f.assignments.items()}, check=False
    )


def initial_morphism(a: SullivanAlgebra) -> AlgebraMorphism:
    """The unique unital morphism O -> A, f |-> f.1_A; always injective
    because Sullivan algebras are free (hence nonzero)."""
    return AlgebraMorphism(SullivanAlgebra.oh(a.nvars), a, {}, check=False)


# ----------------------------------------------------- pushout by one sphere

@dataclass
class DgaPushout:
    """Pushout of f: X -> Y along X -> X (x) S(free rank-1 module in degree n).

    The right leg is f (x) Id; the new generator's differential in the
    extended Y is f applied to its differential in the extended X.
    """

    x_ext: SullivanAlgebra
    y_ext: SullivanAlgebra
    map: AlgebraMorphism  # f (x) Id : x_ext -> y_ext
    incl_x: AlgebraMorphism
    incl_y: AlgebraMorphism
    new_index: int      # index of the new generator in x_ext
    new_index_y: int    # index of the new generator in y_ext


def include_element(u: AlgebraElement, bigger: SullivanAlgebra) -> AlgebraElement:
    """Reinterpret an element in an algebra extending its own by new last
    generators (indices are preserved)."""
    return AlgebraElement(bigger, dict(u.coeffs))


def dga_pushout_gen(
    x: SullivanAlgebra,
    y: SullivanAlgebra,
    f: AlgebraMorphism,
    n: int,
    d_new: AlgebraElement,
    name: str = "s",
) -> DgaPushout:
    """Attach a degree-n sphere generator to X and push out along f.

    d_new is the differential assigned to the new generator inside X;
    it must be d-closed of degree n-1 (else the extension is rejected).
    """
    if f.source != x or f.target != y:
        raise ValueError("map does not go from X to Y")
    if not d_new.is_zero():
        deg = d_new.degree()
        if deg != n - 1:
            raise ValueError(f"assignment has degree {deg}, expected {n - 1}")
        if not x.d(d_new).is_zero():
            raise ValueError("assignment is not closed")
    x_ext = x.extended(Generator(name, n), d_new)
    fd = f.apply(d_new)
    y_ext = y.extended(Generator(name, n), include_element(fd, y) if fd.algebra == y else fd)
    new_idx = len(x.generators)
    assignments = {j: include_element(f.assignments[j], y_ext) for j in f.assignments}
    assignments[new_idx] = y_ext.generator(len(y.generators))
    f_ext = AlgebraMorphism(x_ext, y_ext, assignments)
    incl_x = AlgebraMorphism(x, x_ext, {j: x_ext.generator(j) for j in range(len(x.generators))}, check=False)
    incl_y = AlgebraMorphism(y, y_ext, {j: y_ext.generator(j) for j in range(len(y.generators))}, check=False)
    return DgaPushout(x_ext, y_ext, f_ext, incl_x, incl_y, new_idx, len(y.generators))


def dga_pushout_factor(po: DgaPushout, h: AlgebraMorphism, k: AlgebraMorphism) -> AlgebraMorphism:
    """The universal map out of the pushout corner.

    h: Y -> E and k: X_ext -> E with k o incl_x = h o f must be a cocone;
    the factoring morphism is h on Y-generators and sends the new
    generator to k(new generator).
    """
    e = h.target
    if k.target != e:
        raise ValueError("cocone legs land in different algebras")
    assignments = dict(h.assignments)
    assignments[po.new_index_y] = k.apply(po.x_ext.generator(po.new_index))
    return AlgebraMorphism(po.y_ext, e, assignments)


# ---------------------------------------------------------------- bounded weq

def algebra_bounded_weq(
    f: AlgebraMorphism,
    n: int = 6,
    degree_window: int = DEFAULT_DEGREE_WINDOW,
) -> TruncationResult:
    """Bounded weak-equivalence test on the underlying complexes.

    Checks cone acyclicity on the weight slice at levels n, n+1 over
    algebra degrees 0..degree_window; bounded-pass semantics only.
    """
    src, tgt = f.source, f.target
    return bounded_weq(
        src.basis_keys,
        src.diff_on_key,
        tgt.basis_keys,
        tgt.diff_on_key,
        f.apply_key,
        range(0, degree_window + 1),
        n,
    )
