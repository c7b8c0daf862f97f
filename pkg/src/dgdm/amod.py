"""Modules over a Sullivan differential graded D-algebra A.

An AModule has shape T (+) A (x) V: T a previously built AModule (or
zero), V a free graded D-module with ordered homogeneous basis, A acting
through its multiplication on the free part and through T's action on T.
The differential assigns to each V-generator an element of
T (+) A (x) V_{<j} (the classical extension lemma is the case where
every assignment lands in T) and extends by

    d(t + a (x) v) = d_T(t) + d_A(a) (x) v + (-1)^{|a|} a . d(v)

which squares to zero and commutes with the A-action; morphisms extend
assignments q(g_j) with d_B q(g_j) = q(d g_j) by

    q(t + a (x) v) = p(t) + a . q(v).

Element keys:

    ("t", k)                      a key k of T
    ("v", alpha, atoms, j, b)     x^alpha * (A-monomial atoms) (x) d^b g_j

Weights (x-degree + d-orders + atom counts) slice every degree finitely,
so bounded weak-equivalence checks run on the underlying complexes.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Dict, Iterator, List, Optional, Sequence, Tuple

from .complexes import FreeDComplex
from .dga import (
    AlgebraElement,
    AlgebraMorphism,
    Generator,
    SullivanAlgebra,
    TermKey,
    _exponents_bounded,
)
from .slices import TruncationResult, bounded_weq
from .weyl import Exponent, WeylElement

ModKey = Tuple  # ("t", key) | ("v", alpha, atoms, j, b)
ModCoeffs = Dict[ModKey, Fraction]


def _acc(store: Dict, key, c: Fraction):
    s = store.get(key, Fraction(0)) + c
    if s:
        store[key] = s
    else:
        store.pop(key, None)


class AModule:
    """T (+) A (x) V with a lowering differential (see module docstring)."""

    def __init__(
        self,
        algebra: SullivanAlgebra,
        t_part: Optional["AModule"],
        gens: Sequence[Generator] = (),
        diff: Optional[Dict[int, ModCoeffs]] = None,
    ):
        if t_part is not None and t_part.algebra != algebra:
            raise ValueError("graded piece T lives over a different algebra")
        self.algebra = algebra
        self.nvars = algebra.nvars
        self.t_part = t_part
        self.gens = tuple(gens)
        self.diff_coeffs: Dict[int, ModCoeffs] = {
            j: dict(v) for j, v in (diff or {}).items() if v
        }
        self._dv_cache: Dict[Tuple[int, Exponent], ModCoeffs] = {}
        for j, coeffs in self.diff_coeffs.items():
            if not 0 <= j < len(self.gens):
                raise ValueError(f"differential assigned to unknown generator {j}")
            want = self.gens[j].degree - 1
            for key in coeffs:
                if key[0] == "v" and key[3] >= j:
                    raise ValueError(
                        f"d({self.gens[j].name}) hits generator {key[3]}: not lowering"
                    )
                if self.key_degree(key) != want:
                    raise ValueError(
                        f"d({self.gens[j].name}) has a term of degree "
                        f"{self.key_degree(key)}, expected {want}"
                    )
        for j in self.diff_coeffs:
            dd = self.diff_element(self.diff_coeffs[j])
            if dd:
                raise ValueError(f"d*d != 0 on generator {self.gens[j].name}")

    # -- key structure ----------------------------------------------------

    def key_degree(self, key: ModKey) -> int:
        if key[0] == "t":
            return self.t_part.key_degree(key[1])
        _, alpha, atoms, j, b = key
        return self.algebra.term_degree((alpha, atoms)) + self.gens[j].degree

    def key_weight(self, key: ModKey) -> int:
        if key[0] == "t":
            return self.t_part.key_weight(key[1])
        _, alpha, atoms, j, b = key
        return self.algebra.term_weight((alpha, atoms)) + sum(b) + 1

    def basis_keys(self, degree: int, max_weight: int) -> Iterator[ModKey]:
        if self.t_part is not None:
            for k in self.t_part.basis_keys(degree, max_weight):
                yield ("t", k)
        for j, g in enumerate(self.gens):
            if g.degree > degree:
                continue
            for b in _exponents_bounded(self.nvars, max_weight - 1):
                cost = sum(b) + 1
                for akey in self.algebra.basis_keys(degree - g.degree, max_weight - cost):
                    yield ("v", akey[0], akey[1], j, b)

    def top_degree_hint(self, degree_window: int) -> int:
        """Degrees worth checking: own generators plus the algebra window."""
        own = max([g.degree for g in self.gens], default=0)
        t_top = self.t_part.top_degree_hint(degree_window) if self.t_part else 0
        return max(own + degree_window, t_top)

    # -- generators ---------------------------------------------------------

    def generator(self, j: int) -> "AModuleElement":
        zero_a = (0,) * self.nvars
        return AModuleElement(self, {("v", zero_a, (), j, zero_a): Fraction(1)})

    def include_t(self, elt: "AModuleElement") -> "AModuleElement":
        if elt.module != self.t_part:
            raise ValueError("element is not in the graded piece T")
        return AModuleElement(self, {("t", k): c for k, c in elt.coeffs.items()})

    def zero(self) -> "AModuleElement":
        return AModuleElement(self, {})

    def d_generator(self, j: int) -> "AModuleElement":
        return AModuleElement(self, self.diff_coeffs.get(j, {}))

    # -- A-action -----------------------------------------------------------

    def act_algebra_term_key(self, aterm: TermKey, key: ModKey) -> ModCoeffs:
        """The action of a single algebra monomial on a basis element."""
        if key[0] == "t":
            inner = self.t_part.act_algebra_term_key(aterm, key[1])
            return {("t", k): c for k, c in inner.items()}
        _, alpha, atoms, j, b = key
        prod = self.algebra.multiply(
            AlgebraElement(self.algebra, {aterm: Fraction(1)}),
            AlgebraElement(self.algebra, {(alpha, atoms): Fraction(1)}),
        )
        return {("v", a2, at2, j, b): c for (a2, at2), c in prod.coeffs.items()}

    def act_algebra(self, a: AlgebraElement, elt: "AModuleElement") -> "AModuleElement":
        out: ModCoeffs = {}
        for aterm, ca in a.coeffs.items():
            for key, cm in elt.coeffs.items():
                for k2, c2 in self.act_algebra_term_key(aterm, key).items():
                    _acc(out, k2, ca * cm * c2)
        return AModuleElement(self, out)

    # -- D-action -------------------------------------------------------------

    def act_x_key(self, i: int, key: ModKey) -> ModCoeffs:
        if key[0] == "t":
            return {("t", k): c for k, c in self.t_part.act_x_key(i, key[1]).items()}
        _, alpha, atoms, j, b = key
        na = tuple(e + 1 if k == i else e for k, e in enumerate(alpha))
        return {("v", na, atoms, j, b): Fraction(1)}

    def act_d_key(self, i: int, key: ModKey) -> ModCoeffs:
        if key[0] == "t":
            return {("t", k): c for k, c in self.t_part.act_d_key(i, key[1]).items()}
        _, alpha, atoms, j, b = key
        out: ModCoeffs = {}
        # Leibniz: derivative of the algebra part, then of the V-atom
        da = self.algebra.act_d(i, AlgebraElement(self.algebra, {(alpha, atoms): Fraction(1)}))
        for (a2, at2), c in da.coeffs.items():
            _acc(out, ("v", a2, at2, j, b), c)
        nb = tuple(e + 1 if k == i else e for k, e in enumerate(b))
        _acc(out, ("v", alpha, atoms, j, nb), Fraction(1))
        return out

    def act_weyl(self, op: WeylElement, elt: "AModuleElement") -> "AModuleElement":
        total: ModCoeffs = {}
        for (a, b), coef in op.terms.items():
            cur = dict(elt.coeffs)
            for i, e in enumerate(b):
                for _ in range(e):
                    nxt: ModCoeffs = {}
                    for key, c in cur.items():
                        for k2, c2 in self.act_d_key(i, key).items():
                            _acc(nxt, k2, c * c2)
                    cur = nxt
            for i, e in enumerate(a):
                for _ in range(e):
                    nxt = {}
                    for key, c in cur.items():
                        for k2, c2 in self.act_x_key(i, key).items():
                            _acc(nxt, k2, c * c2)
                    cur = nxt
            for key, c in cur.items():
                _acc(total, key, c * coef)
        return AModuleElement(self, total)

    # -- differential ------------------------------------------------------------

    def _d_of_atom(self, j: int, b: Exponent) -> ModCoeffs:
        """d(d^b g_j) = d^b . d(g_j), cached."""
        cached = self._dv_cache.get((j, b))
        if cached is None:
            base = AModuleElement(self, self.diff_coeffs.get(j, {}))
            cached = self.act_weyl(
                WeylElement.monomial(self.nvars, (0,) * self.nvars, b), base
            ).coeffs
            self._dv_cache[(j, b)] = cached
        return cached

    def diff_key(self, key: ModKey) -> ModCoeffs:
        if key[0] == "t":
            return {("t", k): c for k, c in self.t_part.diff_key(key[1]).items()}
        _, alpha, atoms, j, b = key
        out: ModCoeffs = {}
        # d_A of the coefficient monomial, same V-atom
        da = self.algebra.d(AlgebraElement(self.algebra, {(alpha, atoms): Fraction(1)}))
        for (a2, at2), c in da.coeffs.items():
            _acc(out, ("v", a2, at2, j, b), c)
        # (-1)^{|a|} a . d(v)
        k = self.algebra.term_degree((alpha, atoms))
        sign = Fraction(1) if k % 2 == 0 else Fraction(-1)
        dv = self._d_of_atom(j, b)
        for key2, c in dv.items():
            for k3, c3 in self.act_algebra_term_key((alpha, atoms), key2).items():
                _acc(out, k3, sign * c * c3)
        return out

    def diff_element(self, coeffs: ModCoeffs) -> ModCoeffs:
        out: ModCoeffs = {}
        for key, c in coeffs.items():
            for k2, c2 in self.diff_key(key).items():
                _acc(out, k2, c * c2)
        return out

    def d(self, elt: "AModuleElement") -> "AModuleElement":
        return AModuleElement(self, self.diff_element(elt.coeffs))

    # -- misc ------------------------------------------------------------------

    def __eq__(self, other):
        return (
            isinstance(other, AModule)
            and self.algebra == other.algebra
            and self.t_part == other.t_part
            and self.gens == other.gens
            and self.diff_coeffs == other.diff_coeffs
        )

    def __repr__(self):
        gens = ", ".join(f"{g.name}:{g.degree}" for g in self.gens)
        t = "0" if self.t_part is None else repr(self.t_part)
        return f"AModule(T={t}, V=[{gens}])"


class AModuleElement:
    __slots__ = ("module", "coeffs")

    def __init__(self, module: AModule, coeffs: ModCoeffs):
        self.module = module
        self.coeffs = {k: Fraction(c) for k, c in coeffs.items() if c}

    def is_zero(self) -> bool:
        return not self.coeffs

    def degree(self) -> Optional[int]:
        degs = {self.module.key_degree(k) for k in self.coeffs}
        if not degs:
            return None
        if len(degs) > 1:
            raise ValueError("inhomogeneous element has no degree")
        return degs.pop()

    def __add__(self, other: "AModuleElement") -> "AModuleElement":
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            _acc(out, k, c)
        return AModuleElement(self.module, out)

    def __neg__(self):
        return AModuleElement(self.module, {k: -c for k, c in self.coeffs.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, c) -> "AModuleElement":
        c = Fraction(c)
        return AModuleElement(self.module, {k: c * v for k, v in self.coeffs.items()})

    def __eq__(self, other):
        return (
            isinstance(other, AModuleElement)
            and self.module == other.module
            and self.coeffs == other.coeffs
        )

    def __repr__(self):
        return f"AModuleElement({dict(list(self.coeffs.items())[:4])!r}...)" if len(
            self.coeffs
        ) > 4 else f"AModuleElement({self.coeffs!r})"


# ------------------------------------------------------------- constructors

def extend_differential(
    algebra: SullivanAlgebra,
    t_part: Optional[AModule],
    gens: Sequence[Generator],
    assignments: Dict[int, AModuleElement],
) -> AModule:
    """Endow T (+) A (x) V with the unique differential extending d_T.

    Each assignment d(g_j) must be homogeneous of degree n_j - 1,
    supported on T (+) A (x) V_{<j}, and closed; the constructor enforces
    all of it and the resulting differential squares to zero.
    """
    diff: Dict[int, ModCoeffs] = {}
    for j, elt in assignments.items():
        if elt.is_zero():
            continue
        diff[j] = dict(elt.coeffs)
    return AModule(algebra, t_part, gens, diff)


def free_amodule(algebra: SullivanAlgebra, c: FreeDComplex, name: str = "m") -> AModule:
    """A (x) C for a free D-complex C, with the standard differential."""
    if c.nvars != algebra.nvars:
        raise ValueError("complex over the wrong Weyl algebra")
    gens: List[Generator] = []
    index: Dict[Tuple[int, int], int] = {}
    for n in sorted(c.ranks):
        for s in range(c.rank(n)):
            index[(n, s)] = len(gens)
            gens.append(Generator(f"{name}{n}_{s}", n))
    diff: Dict[int, ModCoeffs] = {}
    zero_a = (0,) * algebra.nvars
    for n in c.differentials:
        mat = c.diff(n)
        for s in range(c.rank(n)):
            coeffs: ModCoeffs = {}
            for v in range(c.rank(n - 1)):
                for (a, b), coef in mat[s][v].terms.items():
                    _acc(coeffs, ("v", a, (), index[(n - 1, v)], b), coef)
            if coeffs:
                diff[index[(n, s)]] = coeffs
    return AModule(algebra, None, gens, diff)


def free_sphere_module(algebra: SullivanAlgebra, n: int, name: str = "e") -> AModule:
    """A (x) S^n: one generator of degree n, zero differential."""
    return AModule(algebra, None, (Generator(name, n),), {})


def free_disk_module(algebra: SullivanAlgebra, n: int, name: str = "e") -> AModule:
    """A (x) D^n: generators in degrees n-1, n with d(top) = bottom."""
    zero_a = (0,) * algebra.nvars
    return AModule(
        algebra,
        None,
        (Generator(f"{name}{n - 1}", n - 1), Generator(f"{name}{n}", n)),
        {1: {("v", zero_a, (), 0, zero_a): Fraction(1)}},
    )


# ------------------------------------------------------------- morphisms

class AModuleMorphism:
    """An A-linear chain map determined by a morphism on T and generator
    assignments; evaluation follows q(t + a (x) v) = p(t) + a . q(v)."""

    def __init__(
        self,
        source: AModule,
        target: AModule,
        t_map: Optional["AModuleMorphism"],
        assignments: Dict[int, AModuleElement],
        check: bool = True,
    ):
        if source.algebra != target.algebra:
            raise ValueError("source and target over different algebras")
        if (source.t_part is None) != (t_map is None):
            raise ValueError("t_map must be given exactly when T is nonzero")
        if t_map is not None and (t_map.source != source.t_part or t_map.target != target):
            raise ValueError("t_map must go from T to the target module")
        self.source = source
        self.target = target
        self.t_map = t_map
        self.assignments = dict(assignments)
        self._qv_cache: Dict[Tuple[int, Exponent], ModCoeffs] = {}
        for j in range(len(source.gens)):
            if j not in self.assignments:
                raise ValueError(f"no assignment for generator {source.gens[j].name}")
            img = self.assignments[j]
            if img.module != target:
                raise ValueError("assignment lives in the wrong module")
            if not img.is_zero() and img.degree() != source.gens[j].degree:
                raise ValueError(
                    f"assignment for {source.gens[j].name} has degree {img.degree()}"
                )
        if check:
            for j in range(len(source.gens)):
                lhs = target.d(self.assignments[j])
                rhs = self.apply(source.d_generator(j))
                if lhs != rhs:
                    mismatch = lhs - rhs
                    raise ValueError(
                        f"condition d_B q = q d fails on generator "
                        f"{source.gens[j].name}; mismatch {mismatch!r}"
                    )

    @classmethod
    def t_inclusion(cls, big: AModule) -> "AModuleMorphism":
        """The inclusion of the graded piece T into T (+) A (x) V."""
        m = cls.__new__(cls)
        m.source = big.t_part
        m.target = big
        m.t_map = None
        m.assignments = {}
        m._qv_cache = {}
        m._relabel = True
        return m

    def apply_key(self, key: ModKey) -> ModCoeffs:
        if getattr(self, "_relabel", False):
            return {("t", key): Fraction(1)}
        if key[0] == "t":
            return self.t_map.apply_key(key[1])
        _, alpha, atoms, j, b = key
        qv = self._qv_cache.get((j, b))
        if qv is None:
            qv = self.target.act_weyl(
                WeylElement.monomial(self.source.nvars, (0,) * self.source.nvars, b),
                self.assignments[j],
            ).coeffs
            self._qv_cache[(j, b)] = qv
        out: ModCoeffs = {}
        for key2, c in qv.items():
            for k3, c3 in self.target.act_algebra_term_key((alpha, atoms), key2).items():
                _acc(out, k3, c * c3)
        return out

    def apply(self, elt: AModuleElement) -> AModuleElement:
        if elt.module != self.source:
            raise ValueError("element not in the source module")
        out: ModCoeffs = {}
        for key, c in elt.coeffs.items():
            for k2, c2 in self.apply_key(key).items():
                _acc(out, k2, c * c2)
        return AModuleElement(self.target, out)

    def is_identity_shaped(self) -> bool:
        return self.source == self.target and all(
            self.assignments[j] == self.source.generator(j) for j in self.assignments
        )


def identity_amodule_morphism(m: AModule) -> AModuleMorphism:
    t_map = None
    if m.t_part is not None:
        t_incl = AModuleMorphism.t_inclusion(m)
        t_map = t_incl
    return AModuleMorphism(
        m, m, t_map, {j: m.generator(j) for j in range(len(m.gens))}, check=False
    )


def compose_amodule_morphisms(f: AModuleMorphism, g: AModuleMorphism) -> AModuleMorphism:
    """g after f, as a generic key-level composite."""
    if f.target != g.source:
        raise ValueError("morphisms do not compose")
    m = AModuleMorphism.__new__(AModuleMorphism)
    m.source = f.source
    m.target = g.target
    m.t_map = None
    m.assignments = {}
    m._qv_cache = {}
    m._pair = (f, g)

    def apply_key(key):
        out: ModCoeffs = {}
        for k2, c2 in f.apply_key(key).items():
            for k3, c3 in g.apply_key(k2).items():
                _acc(out, k3, c2 * c3)
        return out

    m.apply_key = apply_key  # type: ignore[method-assign]
    return m


def extend_morphism(
    p: Optional[AModuleMorphism],
    source: AModule,
    target: AModule,
    assignments: Dict[int, AModuleElement],
) -> AModuleMorphism:
    """Lemma-style extension: the unique A-module morphism restricting to
    p on T with the given generator values (condition d_B q(g_j) = p d(g_j)
    checked; violations report the failing generator and mismatch)."""
    return AModuleMorphism(source, target, p, assignments, check=True)


# ------------------------------------------------------------- pushouts

@dataclass
class AmodPushout:
    module: AModule  # B (+) A (x) S^n
    from_target: AModuleMorphism  # h: B -> module
    from_disk: AModuleMorphism  # g: A (x) D^n -> module
    disk: AModule
    new_index: int = 0


def amod_pushout_gen(f: AModuleMorphism, name: str = "c") -> AmodPushout:
    """Pushout of Id_A (x) iota_n: A (x) S^{n-1} -> A (x) D^n along f.

    f must have source A (x) S^{n-1}; its single assignment z = f(1_{n-1})
    is closed of degree n-1, and the pushout is B (+) A (x) S^n with
    d(1_n) = z, h the inclusion of B, and g determined by g(1_n) = 1_n.
    """
    src = f.source
    if src.t_part is not None or len(src.gens) != 1 or src.diff_coeffs:
        raise ValueError("source of f must be a free sphere module A (x) S^{n-1}")
    n = src.gens[0].degree + 1
    b_mod = f.target
    z = f.assignments[0]
    if not b_mod.d(z).is_zero():
        raise ValueError("f(1_{n-1}) is not closed")
    pushed = AModule(
        b_mod.algebra,
        b_mod,
        (Generator(name, n),),
        {0: {("t", k): c for k, c in z.coeffs.items()}},
    )
    h = AModuleMorphism.t_inclusion(pushed)
    disk_mod = free_disk_module(b_mod.algebra, n, name=f"{name}d")
    g = AModuleMorphism(
        disk_mod,
        pushed,
        None,
        {0: h.apply(z), 1: pushed.generator(0)},
        check=True,
    )
    return AmodPushout(pushed, h, g, disk_mod)


def amod_pushout_factor(po: AmodPushout, q: AModuleMorphism, p: AModuleMorphism) -> AModuleMorphism:
    """The unique u with u h = q and u g = p: u|_B = q, u(1_n) = p(1_n)."""
    if q.source != po.from_target.source or p.source != po.disk:
        raise ValueError("cocone legs have wrong sources")
    if q.target != p.target:
        raise ValueError("cocone legs land in different modules")
    return AModuleMorphism(po.module, q.target, q, {0: p.apply(po.disk.generator(1))}, check=True)


@dataclass
class TransfiniteResult:
    module: AModule
    stages: List[AModule]


def transfinite_compose_finite(
    base: AModule,
    stages: Sequence[Tuple[int, Optional[AModuleElement]]],
) -> TransfiniteResult:
    """Iterated pushouts of generating cofibrations at finite stages.

    Each stage is (n, z) with z a closed degree-(n-1) element of the
    current module (None or zero for a split attachment); the colimit of
    the listed stages is the final module, with B included as a relative
    Sullivan A-module.
    """
    current = base
    built = [base]
    for idx, (n, z) in enumerate(stages):
        if z is None:
            z = current.zero()
        if z.coeffs and z.degree() != n - 1:
            raise ValueError(f"stage {idx}: attaching element has degree {z.degree()}, expected {n - 1}")
        if z.module != current:
            raise ValueError(f"stage {idx}: attaching element lives in the wrong module")
        src = free_sphere_module(current.algebra, n - 1, name=f"s{idx}")
        f = AModuleMorphism(src, current, None, {0: z}, check=True)
        po = amod_pushout_gen(f, name=f"c{idx}")
        current = po.module
        built.append(current)
    return TransfiniteResult(current, built)


def flatten_sullivan(m: AModule) -> Tuple[AModule, Callable]:
    """Rewrite a nested Sullivan module (every level built over a smaller
    one, bottoming out at zero) in the flat shape A (x) V.

    Returns the flat module and the key translation old -> new; inner
    generators come first, so the lowering property is preserved.
    """
    if m.t_part is None:
        return m, lambda k: k
    inner_flat, inner_map = flatten_sullivan(m.t_part)
    offset = len(inner_flat.gens)

    def key_map(k):
        if k[0] == "t":
            return inner_map(k[1])
        _, a, at, j, b = k
        return ("v", a, at, offset + j, b)

    gens = inner_flat.gens + m.gens
    diff = {j: dict(v) for j, v in inner_flat.diff_coeffs.items()}
    for j, coeffs in m.diff_coeffs.items():
        diff[offset + j] = {key_map(k): c for k, c in coeffs.items()}
    return AModule(m.algebra, None, gens, diff), key_map


# ------------------------------------------------------ tensor over A

class TensorOverA:
    """B (x)_A (A (x) V) identified with B (x) V via

        i: b (x) (a (x) m) |-> (-1)^{|a||b|} a . (b (x) m),

    carrying the transported differential i o (d_B (x) Id + Id (x) d) o i^{-1}.
    Keys are (b_key, j, b): a B-basis key against the V-atom d^b g_j.
    """

    def __init__(self, b: AModule, m: AModule):
        if m.t_part is not None:
            raise ValueError("second factor must have free shape A (x) V")
        if b.algebra != m.algebra:
            raise ValueError("factors over different algebras")
        self.b = b
        self.m = m
        self.nvars = b.nvars

    def key_degree(self, key) -> int:
        bk, j, bexp = key
        return self.b.key_degree(bk) + self.m.gens[j].degree

    def key_weight(self, key) -> int:
        bk, j, bexp = key
        return self.b.key_weight(bk) + sum(bexp) + 1

    def basis_keys(self, degree: int, max_weight: int):
        for j, g in enumerate(self.m.gens):
            if g.degree > degree:
                continue
            for bexp in _exponents_bounded(self.nvars, max_weight - 1):
                cost = sum(bexp) + 1
                for bk in self.b.basis_keys(degree - g.degree, max_weight - cost):
                    yield (bk, j, bexp)

    def diff_key(self, key) -> Dict:
        bk, j, bexp = key
        out: Dict = {}
        for k2, c in self.b.diff_key(bk).items():
            _acc(out, (k2, j, bexp), c)
        bdeg = self.b.key_degree(bk)
        sign = Fraction(1) if bdeg % 2 == 0 else Fraction(-1)
        dv = self.m._d_of_atom(j, bexp)  # element of A (x) V: keys ("v", a, at, j', b')
        for key2, c in dv.items():
            _, a2, at2, j2, b2 = key2
            adeg = self.m.algebra.term_degree((a2, at2))
            s2 = Fraction(1) if (adeg * bdeg) % 2 == 0 else Fraction(-1)
            acted = self.b.act_algebra_term_key((a2, at2), bk)
            for k3, c3 in acted.items():
                _acc(out, (k3, j2, b2), sign * s2 * c * c3)
        return out

    # the identification and its inverse on representatives
    def iso_from_tensor(self, b_elt: AModuleElement, a: AlgebraElement, m_key_j: int, m_b: Exponent) -> Dict:
        """i(b (x) (a (x) d^{m_b} g_j)) as an element {key: coef}."""
        out: Dict = {}
        for aterm, ca in a.coeffs.items():
            adeg = self.m.algebra.term_degree(aterm)
            for bk, cb in b_elt.coeffs.items():
                bdeg = self.b.key_degree(bk)
                sign = Fraction(1) if (adeg * bdeg) % 2 == 0 else Fraction(-1)
                for k2, c2 in self.b.act_algebra_term_key(aterm, bk).items():
                    _acc(out, (k2, m_key_j, m_b), sign * ca * cb * c2)
        return out

    def iso_inverse_key(self, key) -> Tuple[AModuleElement, AlgebraElement, int, Exponent]:
        """i^{-1}(b (x) m) = b (x) (1_A (x) m), on a basis key."""
        bk, j, bexp = key
        return (
            AModuleElement(self.b, {bk: Fraction(1)}),
            self.m.algebra.one(),
            j,
            bexp,
        )


def tensor_over_A(b: AModule, m: AModule) -> TensorOverA:
    return TensorOverA(b, m)


def tensor_unit_case(b: AModule) -> bool:
    """B (x)_A A = B: tensoring with the rank-one sphere at degree 0 with
    zero differential reproduces B's differential on keys."""
    m = free_sphere_module(b.algebra, 0, name="unit")
    t = TensorOverA(b, m)
    zero = (0,) * b.nvars
    for p in range(0, 4):
        for bk in b.basis_keys(p, 3):
            got = t.diff_key((bk, 0, zero))
            want = {(k, 0, zero): c for k, c in b.diff_key(bk).items()}
            if got != want:
                return False
    return True


def tensor_map(f: AModuleMorphism, m: AModule) -> Callable:
    """f (x)_A Id_{A (x) V} read through the identification: f (x) Id_V."""

    def apply_key(key):
        bk, j, bexp = key
        return {(k2, j, bexp): c for k2, c in f.apply_key(bk).items()}

    return apply_key


def tensor_bounded_weq(
    f: AModuleMorphism,
    m: AModule,
    n: int = 5,
    degree_window: int = 5,
) -> TruncationResult:
    """Bounded check that f (x)_A Id_M is a weak equivalence."""
    if m.t_part is not None:
        m, _ = flatten_sullivan(m)
    src = TensorOverA(f.source, m)
    tgt = TensorOverA(f.target, m)
    degrees = range(0, max(src_top_hint(src, degree_window), tgt_top_hint(tgt, degree_window)) + 1)
    return bounded_weq(
        src.basis_keys, src.diff_key, tgt.basis_keys, tgt.diff_key,
        tensor_map(f, m), degrees, n,
    )


def src_top_hint(t: TensorOverA, window: int) -> int:
    own = max([g.degree for g in t.m.gens], default=0)
    return t.b.top_degree_hint(window) + own


tgt_top_hint = src_top_hint


# ------------------------------------------------------ base change

class BaseChangeModule:
    """B (x)_A N for a Sullivan extension A -> B, identified with N (x) S(W)
    where W spans B's new generators; keys are (n_key, w_atoms)."""

    def __init__(self, b: SullivanAlgebra, n_mod: AModule):
        a = n_mod.algebra
        if b.nvars != a.nvars or b.generators[: len(a.generators)] != a.generators:
            raise ValueError("B is not a Sullivan extension of A")
        for j in a.diff_coeffs:
            if b.diff_coeffs.get(j, {}) != a.diff_coeffs[j]:
                raise ValueError("B's differential disagrees with A on A's generators")
        for j in b.diff_coeffs:
            if j < len(a.generators) and j not in a.diff_coeffs:
                raise ValueError("B's differential disagrees with A on A's generators")
        self.b = b
        self.a = a
        self.n_mod = n_mod
        self.w_start = len(a.generators)
        self.nvars = b.nvars

    def key_degree(self, key) -> int:
        nk, watoms = key
        return self.n_mod.key_degree(nk) + sum(self.b.generators[j].degree for j, _ in watoms)

    def basis_keys(self, degree: int, max_weight: int):
        for deg_w in range(0, degree + 1):
            for watoms, cost in self.b._atom_multisets(self.w_start, deg_w, max_weight):
                for nk in self.n_mod.basis_keys(degree - deg_w, max_weight - cost):
                    yield (nk, watoms)

    def diff_key(self, key) -> Dict:
        nk, watoms = key
        out: Dict = {}
        for k2, c in self.n_mod.diff_key(nk).items():
            _acc(out, (k2, watoms), c)
        ndeg = self.n_mod.key_degree(nk)
        sign = Fraction(1) if ndeg % 2 == 0 else Fraction(-1)
        dsigma = self.b.d(
            AlgebraElement(self.b, {((0,) * self.nvars, watoms): Fraction(1)})
        )
        for (alpha, atoms), c in dsigma.coeffs.items():
            a_atoms = tuple(at for at in atoms if at[0] < self.w_start)
            w_atoms = tuple(at for at in atoms if at[0] >= self.w_start)
            aterm = (alpha, a_atoms)
            adeg = self.a.term_degree(aterm)
            s2 = Fraction(1) if (adeg * ndeg) % 2 == 0 else Fraction(-1)
            for k3, c3 in self.n_mod.act_algebra_term_key(aterm, nk).items():
                _acc(out, (k3, w_atoms), sign * s2 * c * c3)
        return out


def base_change(b: SullivanAlgebra, n_mod: AModule) -> BaseChangeModule:
    return BaseChangeModule(b, n_mod)


def base_change_map(f: AModuleMorphism) -> Callable:
    def apply_key(key):
        nk, watoms = key
        return {(k2, watoms): c for k2, c in f.apply_key(nk).items()}

    return apply_key


def base_change_bounded_weq(
    b: SullivanAlgebra,
    f: AModuleMorphism,
    n: int = 5,
    degree_window: int = 5,
) -> TruncationResult:
    src = BaseChangeModule(b, f.source)
    tgt = BaseChangeModule(b, f.target)
    top = max(f.source.top_degree_hint(degree_window), f.target.top_degree_hint(degree_window))
    return bounded_weq(
        src.basis_keys, src.diff_key, tgt.basis_keys, tgt.diff_key,
        base_change_map(f), range(0, top + 1), n,
    )


# ------------------------------------------- modules <-> undercategory

@dataclass
class CMonInModA:
    """A commutative monoid in Mod(A): a Sullivan algebra M with the
    A-action a . m = phi(a) * m packaged through the structure morphism's
    generator values (a_j . 1_M)."""

    base: SullivanAlgebra
    monoid: SullivanAlgebra
    action_on_generators: Dict[int, AlgebraElement]

    def structure_morphism(self) -> AlgebraMorphism:
        return AlgebraMorphism(self.base, self.monoid, dict(self.action_on_generators))

    def act(self, a: AlgebraElement, m: AlgebraElement) -> AlgebraElement:
        return self.monoid.multiply(self.structure_morphism().apply(a), m)


def under_to_cmon(phi: AlgebraMorphism) -> CMonInModA:
    """F: (phi: A -> M) |-> M with a . m := phi(a) * m."""
    return CMonInModA(
        phi.source,
        phi.target,
        {j: phi.apply(phi.source.generator(j)) for j in range(len(phi.source.generators))},
    )


def cmon_to_under(n: CMonInModA) -> AlgebraMorphism:
    """G: recover the algebra morphism by phi(a) = a . 1_M."""
    one = n.monoid.one()
    return AlgebraMorphism(
        n.base,
        n.monoid,
        {j: n.act(n.base.generator(j), one) for j in range(len(n.base.generators))},
    )


# ------------------------------------------------------ the free-module monad

@dataclass
class FreeModuleMonad:
    """Sigma(M) = A (x) M with its unit and multiplication.

    Elements of M are given on the O-basis of the free complex as
    {(n, s, alpha, b): c}; U(M)-elements reuse the AModule keys of
    `sigma`, and U^2(M)-elements carry two A-monomial blocks:
    {(alpha, atoms1, atoms2, (n, s), b): c}.
    """

    algebra: SullivanAlgebra
    sigma: AModule
    index: Dict[Tuple[int, int], int]  # (degree, position) -> generator index

    def unit(self, m_elem: Dict) -> AModuleElement:
        """eta_M: M -> A (x) M, m |-> 1_A (x) m."""
        coeffs: ModCoeffs = {}
        for (n, s, alpha, b), c in m_elem.items():
            _acc(coeffs, ("v", alpha, (), self.index[(n, s)], b), c)
        return AModuleElement(self.sigma, coeffs)

    def mult(self, uum_elem: Dict) -> AModuleElement:
        """mu_M: A (x) (A (x) M) -> A (x) M, a (x) (a' (x) m) |-> (a a') (x) m."""
        from .dga import _normalize_atoms

        coeffs: ModCoeffs = {}
        for (alpha, at1, at2, (n, s), b), c in uum_elem.items():
            norm = _normalize_atoms(at1 + at2, self.algebra.parities)
            if norm is None:
                continue
            sign, merged = norm
            _acc(coeffs, ("v", alpha, merged, self.index[(n, s)], b), c * sign)
        return AModuleElement(self.sigma, coeffs)

    def sigma_iota(self, n: int) -> AModuleMorphism:
        """Sigma(iota_n): A (x) S^{n-1} -> A (x) D^n (n >= 1)."""
        src = free_sphere_module(self.algebra, n - 1, name="s")
        tgt = free_disk_module(self.algebra, n, name="e")
        return AModuleMorphism(src, tgt, None, {0: tgt.generator(0)})

    def sigma_zeta(self, n: int) -> AModuleMorphism:
        """Sigma(zeta_n): 0 -> A (x) D^n (n >= 1)."""
        src = AModule(self.algebra, None, (), {})
        tgt = free_disk_module(self.algebra, n, name="e")
        return AModuleMorphism(src, tgt, None, {})


def free_amodule_monad(algebra: SullivanAlgebra, c: FreeDComplex) -> FreeModuleMonad:
    """The free A-module monad value at a free complex, with unit and
    multiplication; the full law checks live in the monads module."""
    sigma = free_amodule(algebra, c)
    index: Dict[Tuple[int, int], int] = {}
    pos = 0
    for n in sorted(c.ranks):
        for s in range(c.rank(n)):
            index[(n, s)] = pos
            pos += 1
    return FreeModuleMonad(algebra, sigma, index)


# ------------------------------------------------------ bounded weq for Mod(A)

def amodule_bounded_weq(
    f: AModuleMorphism,
    n: int = 5,
    degree_window: int = 4,
) -> TruncationResult:
    """Weak equivalence of A-module maps, tested on the underlying complexes."""
    top = max(
        f.source.top_degree_hint(degree_window),
        f.target.top_degree_hint(degree_window),
    )
    return bounded_weq(
        f.source.basis_keys,
        f.source.diff_key,
        f.target.basis_keys,
        f.target.diff_key,
        f.apply_key,
        range(0, top + 1),
        n,
    )
