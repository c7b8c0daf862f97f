"""Non-negatively graded chain complexes of free left D-modules.

A degree-n differential is stored as a matrix over D with ranks[n] rows
and ranks[n-1] columns; a left-linear map D^r -> D^s is the matrix of
images of unit vectors, and elements (row vectors) multiply matrix
entries on the LEFT, so composition is plain matrix product in
application order.  d o d = 0 is enforced at construction time.

Homology is returned as a finite presentation: the kernel Groebner
generators in ambient D^{r_n}, together with rows expressing (a) the
image generators of the next differential and (b) the syzygies among
the kernel generators.  Weak equivalence of chain maps is decided
exactly through acyclicity of the mapping cone.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, List, Sequence, Tuple

from .groebner import (
    FreeModuleElement,
    buchberger,
    express_in_inputs,
    member,
    syzygies,
)
from .weyl import Polynomial, WeylElement

Matrix = Tuple[Tuple[WeylElement, ...], ...]


# ---------------------------------------------------------------- matrices

def zero_matrix(rows: int, cols: int, nvars: int) -> Matrix:
    z = WeylElement.zero(nvars)
    return tuple(tuple(z for _ in range(cols)) for _ in range(rows))


def identity_matrix(n: int, nvars: int) -> Matrix:
    one = WeylElement.one(nvars)
    z = WeylElement.zero(nvars)
    return tuple(tuple(one if i == j else z for j in range(n)) for i in range(n))


def mat_mul(a: Matrix, b: Matrix, nvars: int) -> Matrix:
    if not a or not b:
        rows = len(a)
        cols = len(b[0]) if b else 0
        return zero_matrix(rows, cols, nvars)
    assert len(a[0]) == len(b), "inner dimensions disagree"
    cols = len(b[0])
    out = []
    for row in a:
        new = [WeylElement.zero(nvars) for _ in range(cols)]
        for j, e in enumerate(row):
            if e.is_zero():
                continue
            for k in range(cols):
                if not b[j][k].is_zero():
                    new[k] = new[k] + e * b[j][k]
        out.append(tuple(new))
    return tuple(out)


def mat_add(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(x + y for x, y in zip(ra, rb)) for ra, rb in zip(a, b))


def mat_neg(a: Matrix) -> Matrix:
    return tuple(tuple(-x for x in row) for row in a)


def mat_is_zero(a: Matrix) -> bool:
    return all(e.is_zero() for row in a for e in row)


def mat_apply(v: FreeModuleElement, m: Matrix, nvars: int, cols: int) -> FreeModuleElement:
    """Row vector times matrix: the image of v under the left-linear map."""
    out = [WeylElement.zero(nvars) for _ in range(cols)]
    for i, c in enumerate(v.coords):
        if c.is_zero():
            continue
        for j in range(cols):
            if not m[i][j].is_zero():
                out[j] = out[j] + c * m[i][j]
    if cols == 0:
        raise ValueError("image lives in the zero module")
    return FreeModuleElement(out)


# ---------------------------------------------------------------- complexes

class ComplexError(ValueError):
    """Malformed complex data (shape mismatch or d*d != 0)."""


class FreeDComplex:
    """A bounded non-negatively graded complex of finite-rank free D-modules."""

    def __init__(self, nvars: int, ranks: Dict[int, int], differentials: Dict[int, Sequence[Sequence[WeylElement]]]):
        self.nvars = nvars
        self.ranks: Dict[int, int] = {}
        for n, r in ranks.items():
            if n < 0:
                raise ComplexError(f"degree {n} below 0: complexes are non-negatively graded")
            if r < 0:
                raise ComplexError(f"negative rank at degree {n}")
            if r > 0:
                self.ranks[n] = r
        diffs: Dict[int, Matrix] = {}
        for n, m in differentials.items():
            if n < 1:
                raise ComplexError(f"differential indexed by {n}; lowest allowed is 1")
            mat = tuple(tuple(row) for row in m)
            if len(mat) != self.rank(n):
                raise ComplexError(
                    f"differential at degree {n} has {len(mat)} rows, expected {self.rank(n)}"
                )
            for row in mat:
                if len(row) != self.rank(n - 1):
                    raise ComplexError(
                        f"differential at degree {n} has a row of length {len(row)}, "
                        f"expected {self.rank(n - 1)}"
                    )
                for e in row:
                    if e.nvars != nvars:
                        raise ComplexError("matrix entry over the wrong Weyl algebra")
            if mat and mat[0] and not mat_is_zero(mat):
                diffs[n] = mat
        self.differentials = diffs
        self.top = max(self.ranks, default=-1)
        for n in range(1, self.top + 1):
            a, b = self.diff(n + 1), self.diff(n)
            if self.rank(n + 1) and self.rank(n) and self.rank(n - 1):
                if not mat_is_zero(mat_mul(a, b, nvars)):
                    raise ComplexError(f"d*d != 0 between degrees {n + 1} and {n - 1}")

    def rank(self, n: int) -> int:
        return self.ranks.get(n, 0)

    def diff(self, n: int) -> Matrix:
        m = self.differentials.get(n)
        if m is None:
            return zero_matrix(self.rank(n), self.rank(n - 1), self.nvars)
        return m

    def degrees(self):
        return sorted(self.ranks)

    def __eq__(self, other):
        return (
            isinstance(other, FreeDComplex)
            and self.nvars == other.nvars
            and self.ranks == other.ranks
            and self.differentials == other.differentials
        )

    def __repr__(self):
        ranks = ", ".join(f"{n}: D^{r}" for n, r in sorted(self.ranks.items()))
        return f"FreeDComplex({{{ranks}}})"


def sphere(n: int, nvars: int = 1) -> FreeDComplex:
    """D concentrated in degree n with zero differential."""
    if n < 0:
        raise ComplexError("sphere needs n >= 0")
    return FreeDComplex(nvars, {n: 1}, {})


def disk(n: int, nvars: int = 1) -> FreeDComplex:
    """D in degrees n and n-1 with identity differential; acyclic."""
    if n < 1:
        raise ComplexError("disk needs n >= 1")
    return FreeDComplex(nvars, {n: 1, n - 1: 1}, {n: identity_matrix(1, nvars)})


class ChainMap:
    """A degree-preserving map of complexes commuting with differentials."""

    def __init__(self, source: FreeDComplex, target: FreeDComplex, maps: Dict[int, Sequence[Sequence[WeylElement]]]):
        if source.nvars != target.nvars:
            raise ComplexError("source and target over different Weyl algebras")
        self.source = source
        self.target = target
        self.nvars = source.nvars
        mats: Dict[int, Matrix] = {}
        for n, m in maps.items():
            mat = tuple(tuple(row) for row in m)
            if len(mat) != source.rank(n) or any(len(r) != target.rank(n) for r in mat):
                raise ComplexError(f"component at degree {n} has the wrong shape")
            if mat and mat[0] and not mat_is_zero(mat):
                mats[n] = mat
        self.maps = mats
        top = max(source.top, target.top)
        for n in range(1, top + 1):
            r, c = source.rank(n), target.rank(n - 1)
            if r == 0 or c == 0:
                continue
            if target.rank(n) == 0:
                lhs = zero_matrix(r, c, self.nvars)
            else:
                lhs = mat_mul(self.component(n), target.diff(n), self.nvars)
            if source.rank(n - 1) == 0:
                rhs = zero_matrix(r, c, self.nvars)
            else:
                rhs = mat_mul(source.diff(n), self.component(n - 1), self.nvars)
            if lhs != rhs:
                raise ComplexError(f"does not commute with differentials at degree {n}")

    def component(self, n: int) -> Matrix:
        m = self.maps.get(n)
        if m is None:
            return zero_matrix(self.source.rank(n), self.target.rank(n), self.nvars)
        return m

    def apply(self, n: int, v: FreeModuleElement) -> FreeModuleElement:
        return mat_apply(v, self.component(n), self.nvars, self.target.rank(n))

    def __eq__(self, other):
        return (
            isinstance(other, ChainMap)
            and self.source == other.source
            and self.target == other.target
            and self.maps == other.maps
        )

    def __repr__(self):
        return f"ChainMap({self.source!r} -> {self.target!r})"


def identity_map(c: FreeDComplex) -> ChainMap:
    return ChainMap(c, c, {n: identity_matrix(c.rank(n), c.nvars) for n in c.degrees()})


def compose(f: ChainMap, g: ChainMap) -> ChainMap:
    """g after f (apply f first)."""
    if f.target != g.source:
        raise ComplexError("maps do not compose")
    mats = {}
    for n in f.source.degrees():
        if g.target.rank(n):
            mats[n] = mat_mul(f.component(n), g.component(n), f.nvars)
    return ChainMap(f.source, g.target, mats)


def zero_map(source: FreeDComplex, target: FreeDComplex) -> ChainMap:
    return ChainMap(source, target, {})


def direct_sum(c1: FreeDComplex, c2: FreeDComplex) -> FreeDComplex:
    """Degreewise direct sum; simultaneously the product and the coproduct."""
    if c1.nvars != c2.nvars:
        raise ComplexError("summands over different Weyl algebras")
    nvars = c1.nvars
    ranks = {}
    for n in set(c1.ranks) | set(c2.ranks):
        ranks[n] = c1.rank(n) + c2.rank(n)
    diffs = {}
    for n in range(1, max(c1.top, c2.top) + 1):
        r, c = ranks.get(n, 0), ranks.get(n - 1, 0)
        if r == 0 or c == 0:
            continue
        rows = []
        for i in range(c1.rank(n)):
            row = list(c1.diff(n)[i]) + [WeylElement.zero(nvars)] * c2.rank(n - 1)
            rows.append(tuple(row))
        for i in range(c2.rank(n)):
            row = [WeylElement.zero(nvars)] * c1.rank(n - 1) + list(c2.diff(n)[i])
            rows.append(tuple(row))
        diffs[n] = tuple(rows)
    return FreeDComplex(nvars, ranks, diffs)


def summand_inclusion(c1: FreeDComplex, c2: FreeDComplex, which: int) -> ChainMap:
    total = direct_sum(c1, c2)
    src = c1 if which == 0 else c2
    nvars = src.nvars
    maps = {}
    for n in src.degrees():
        rows = []
        for i in range(src.rank(n)):
            row = [WeylElement.zero(nvars)] * total.rank(n)
            offset = 0 if which == 0 else c1.rank(n)
            row[offset + i] = WeylElement.one(nvars)
            rows.append(tuple(row))
        maps[n] = tuple(rows)
    return ChainMap(src, total, maps)


def summand_projection(c1: FreeDComplex, c2: FreeDComplex, which: int) -> ChainMap:
    total = direct_sum(c1, c2)
    tgt = c1 if which == 0 else c2
    nvars = tgt.nvars
    maps = {}
    for n in total.degrees():
        if tgt.rank(n) == 0:
            continue
        rows = []
        for i in range(total.rank(n)):
            row = [WeylElement.zero(nvars)] * tgt.rank(n)
            offset = 0 if which == 0 else c1.rank(n)
            if offset <= i < offset + tgt.rank(n):
                row[i - offset] = WeylElement.one(nvars)
            rows.append(tuple(row))
        maps[n] = tuple(rows)
    return ChainMap(total, tgt, maps)


# ---------------------------------------------------------------- homology

@dataclass
class HomologyPresentation:
    """H_n presented by kernel generators and relation rows.

    `generators` live in the ambient free module D^{ambient_rank};
    each relation is a row in D^{len(generators)} whose evaluation
    sum u_l * generators[l] lies in the image of the next differential
    (or vanishes, for syzygy rows).  An empty generator list means H_n = 0.
    """

    degree: int
    nvars: int
    ambient_rank: int
    generators: List[FreeModuleElement] = field(default_factory=list)
    relations: List[FreeModuleElement] = field(default_factory=list)

    def is_zero(self) -> bool:
        return not self.generators

    def is_free_of_rank(self, r: int) -> bool:
        return len(self.generators) == r and not self.relations


def kernel_generators(c: FreeDComplex, n: int) -> List[FreeModuleElement]:
    """Generators of ker d_n inside D^{rank(n)} (all of it when d_n = 0)."""
    r = c.rank(n)
    if r == 0:
        return []
    if n == 0 or c.rank(n - 1) == 0 or n not in c.differentials:
        return [FreeModuleElement.unit(r, c.nvars, i) for i in range(r)]
    ker = syzygies(c.diff(n), c.nvars, source_rank=r, target_rank=c.rank(n - 1))
    return list(ker.generators)


def image_generators(c: FreeDComplex, n: int) -> List[FreeModuleElement]:
    """Images of the unit vectors under d_{n+1}, i.e. rows of its matrix."""
    if c.rank(n + 1) == 0 or c.rank(n) == 0:
        return []
    m = c.diff(n + 1)
    return [FreeModuleElement(list(row)) for row in m]


def homology(c: FreeDComplex, n: int) -> HomologyPresentation:
    """Presentation of H_n = ker d_n / im d_{n+1} (C_0 / im d_1 at n = 0)."""
    r = c.rank(n)
    if r == 0:
        return HomologyPresentation(n, c.nvars, 0)
    kernel = kernel_generators(c, n)
    image = [g for g in image_generators(c, n) if not g.is_zero()]
    if not kernel:
        return HomologyPresentation(n, c.nvars, r)
    gb_img = buchberger(image, rank=r, nvars=c.nvars)
    if all(member(k, gb_img) for k in kernel):
        return HomologyPresentation(n, c.nvars, r)
    t = len(kernel)
    gb_ker = buchberger(kernel)
    relations: List[FreeModuleElement] = []
    for g in image:
        u = express_in_inputs(g, gb_ker)
        if u is None:
            raise AssertionError("image element escaped the kernel: d*d != 0?")
        relations.append(FreeModuleElement(u))
    ker_matrix = [list(k.coords) for k in kernel]
    for s in syzygies(ker_matrix, c.nvars, source_rank=t, target_rank=r).generators:
        relations.append(s)
    return HomologyPresentation(n, c.nvars, r, kernel, relations)


def is_acyclic(c: FreeDComplex) -> bool:
    """Exact Groebner acyclicity: every cycle is a boundary, H_0 included."""
    for n in range(0, c.top + 1):
        r = c.rank(n)
        if r == 0:
            continue
        image = [g for g in image_generators(c, n) if not g.is_zero()]
        gb_img = buchberger(image, rank=r, nvars=c.nvars)
        for k in kernel_generators(c, n):
            if not member(k, gb_img):
                return False
    return True


# ---------------------------------------------------------------- cone, shift

def mapping_cone(f: ChainMap) -> FreeDComplex:
    """Mc(f)_n = X_{n-1} (+) Y_n with d(c, c') = (-dc, f(c) + dc')."""
    x, y = f.source, f.target
    nvars = f.nvars
    ranks = {}
    for n in range(0, max(x.top + 1, y.top) + 1):
        r = x.rank(n - 1) + y.rank(n)
        if r:
            ranks[n] = r
    diffs = {}
    for n in range(1, max(x.top + 1, y.top) + 1):
        rows_n = x.rank(n - 1) + y.rank(n)
        cols = x.rank(n - 2) + y.rank(n - 1)
        if rows_n == 0 or cols == 0:
            continue
        rows = []
        negd = mat_neg(x.diff(n - 1))
        fcomp = f.component(n - 1)
        for i in range(x.rank(n - 1)):
            row = [negd[i][j] for j in range(x.rank(n - 2))] + [
                fcomp[i][j] for j in range(y.rank(n - 1))
            ]
            rows.append(tuple(row))
        dy = y.diff(n)
        for i in range(y.rank(n)):
            row = [WeylElement.zero(nvars)] * x.rank(n - 2) + [
                dy[i][j] for j in range(y.rank(n - 1))
            ]
            rows.append(tuple(row))
        diffs[n] = tuple(rows)
    return FreeDComplex(nvars, ranks, diffs)


def shift(c: FreeDComplex, k: int) -> FreeDComplex:
    """Reindex degrees down by k: shift(c, k)_n = c_{n+k}, d scaled by (-1)^k.

    Negative k raises degrees.  The result must stay non-negatively
    graded, so k may not exceed the lowest occupied degree.
    """
    if c.ranks and k > min(c.ranks):
        raise ComplexError(f"shift by {k} drops below degree 0")
    sign = 1 if k % 2 == 0 else -1
    ranks = {n - k: r for n, r in c.ranks.items()}
    diffs = {}
    for n, m in c.differentials.items():
        diffs[n - k] = m if sign == 1 else mat_neg(m)
    return FreeDComplex(c.nvars, ranks, diffs)


def is_weak_equivalence(f: ChainMap) -> bool:
    """True iff the mapping cone of f is acyclic (exact computation)."""
    return is_acyclic(mapping_cone(f))


def cone_to_cokernel_projection(f: ChainMap, coker: FreeDComplex, proj: Dict[int, Matrix]) -> ChainMap:
    """Assemble the canonical quasi-isomorphism Mc(f) -> coker(f).

    The caller supplies the degreewise cokernel complex and projections
    q_n: Y_n -> coker_n; the cone map is (c, c') |-> q(c').
    """
    cone = mapping_cone(f)
    x, y = f.source, f.target
    maps = {}
    for n in cone.degrees():
        if coker.rank(n) == 0:
            continue
        rows = []
        for _ in range(x.rank(n - 1)):
            rows.append(tuple(WeylElement.zero(f.nvars) for _ in range(coker.rank(n))))
        q = proj.get(n, zero_matrix(y.rank(n), coker.rank(n), f.nvars))
        for i in range(y.rank(n)):
            rows.append(tuple(q[i]))
        maps[n] = tuple(rows)
    return ChainMap(cone, coker, maps)


# ---------------------------------------------------------------- connections

class ConnectionModule:
    """An O-coherent D-module: free O-module of rank s with a flat connection.

    matrices[i] is the s x s matrix over O of the action of d_{i+1}:
    d_i . e_j = sum_k A_i[k][j] e_k, so on coordinate columns the
    operator is  partial_i + A_i.  Flatness of the connection is checked
    at construction (automatic for one variable).
    """

    def __init__(self, nvars: int, rank: int, matrices: Sequence[Sequence[Sequence[Polynomial]]]):
        if rank < 1:
            raise ValueError("rank must be positive")
        if len(matrices) != nvars:
            raise ValueError("need one connection matrix per variable")
        self.nvars = nvars
        self.rank = rank
        self.matrices = tuple(
            tuple(tuple(entry for entry in row) for row in m) for m in matrices
        )
        for m in self.matrices:
            if len(m) != rank or any(len(row) != rank for row in m):
                raise ValueError("connection matrix of the wrong shape")
        if not self.is_flat():
            raise ValueError("connection is not flat")

    @classmethod
    def trivial(cls, nvars: int) -> "ConnectionModule":
        zero = Polynomial.zero(nvars)
        return cls(nvars, 1, [[[zero]] for _ in range(nvars)])

    def is_flat(self) -> bool:
        if self.nvars == 1:
            return True
        for i in range(self.nvars):
            for j in range(i + 1, self.nvars):
                if not self._curvature_vanishes(i, j):
                    return False
        return True

    def _curvature_vanishes(self, i: int, j: int) -> bool:
        # partial_i A_j - partial_j A_i + [A_i, A_j] == 0
        s = self.rank
        for r in range(s):
            for c in range(s):
                term = _poly_partial(self.matrices[j][r][c], i) - _poly_partial(
                    self.matrices[i][r][c], j
                )
                for k in range(s):
                    term = term + self.matrices[i][r][k] * self.matrices[j][k][c]
                    term = term - self.matrices[j][r][k] * self.matrices[i][k][c]
                if not term.is_zero():
                    return False
        return True


def _poly_partial(p: Polynomial, i: int) -> Polynomial:
    terms = {}
    for a, c in p.terms.items():
        if a[i] == 0:
            continue
        key = tuple(e - 1 if idx == i else e for idx, e in enumerate(a))
        terms[key] = terms.get(key, 0) + c * a[i]
    return Polynomial(p.nvars, terms)


def _untwist(p: WeylElement, j: int, m: ConnectionModule) -> List[WeylElement]:
    """Express the plain tensor p (x) e_j as sum_k Q_k acting on 1 (x) e_k.

    Recursion peels one d off each monomial using
    (d_i R) (x) e_j = d_i . (R (x) e_j) - sum_k (R A_i[k][j]) (x) e_k.
    """
    nvars = m.nvars
    out = [WeylElement.zero(nvars) for _ in range(m.rank)]
    for (a, b), coef in p.terms.items():
        term = _untwist_mono(a, b, j, m)
        for k in range(m.rank):
            out[k] = out[k] + term[k].scale(coef)
    return out


def _untwist_mono(a, b, j: int, m: ConnectionModule) -> List[WeylElement]:
    nvars = m.nvars
    if sum(b) == 0:
        out = [WeylElement.zero(nvars) for _ in range(m.rank)]
        out[j] = WeylElement.monomial(nvars, a, b)
        return out
    i = next(idx for idx, e in enumerate(b) if e > 0)
    b_rest = tuple(e - 1 if idx == i else e for idx, e in enumerate(b))
    rest = _untwist_mono((0,) * nvars, b_rest, j, m)
    di = WeylElement.d(i + 1, nvars)
    out = [di * q for q in rest]
    r_elt = WeylElement.monomial(nvars, (0,) * nvars, b_rest)
    for k in range(m.rank):
        gain = m.matrices[i][k][j]
        if gain.is_zero():
            continue
        sub = _untwist(r_elt * gain.to_weyl(), k, m)
        for t in range(m.rank):
            out[t] = out[t] - sub[t]
    if sum(a) > 0:
        xa = WeylElement.monomial(nvars, a, (0,) * nvars)
        out = [xa * q for q in out]
    return out


def _untwist_matrix(mat: Matrix, rows: int, cols: int, m: ConnectionModule, nvars: int) -> Matrix:
    """Conjugate a matrix over D through D (x)_O M ~ D^s blockwise."""
    s = m.rank
    out = []
    for u in range(rows):
        for j in range(s):
            row = [WeylElement.zero(nvars) for _ in range(cols * s)]
            for v in range(cols):
                entry = mat[u][v]
                if entry.is_zero():
                    continue
                q = _untwist(entry, j, m)
                for k in range(s):
                    row[v * s + k] = row[v * s + k] + q[k]
            out.append(tuple(row))
    return tuple(out)


def tensor_with_connection(c: FreeDComplex, m: ConnectionModule) -> FreeDComplex:
    """C (x)_O M as a free D-complex through D (x)_O M ~ D^s.

    The isomorphism sends the unit row (u, j) to 1 (x) e_j in the u-th
    coordinate; the new differential is the old one conjugated through
    it, which amounts to untwisting each matrix entry.
    """
    if c.nvars != m.nvars:
        raise ValueError("complex and connection over different Weyl algebras")
    if not m.is_flat():
        raise ValueError("connection is not flat")
    s = m.rank
    ranks = {n: r * s for n, r in c.ranks.items()}
    diffs = {
        n: _untwist_matrix(mat, c.rank(n), c.rank(n - 1), m, c.nvars)
        for n, mat in c.differentials.items()
    }
    return FreeDComplex(c.nvars, ranks, diffs)


def tensor_chain_map_with_connection(f: ChainMap, m: ConnectionModule) -> ChainMap:
    """f (x) Id_M between the twisted complexes (same untwisting)."""
    src = tensor_with_connection(f.source, m)
    tgt = tensor_with_connection(f.target, m)
    maps = {
        n: _untwist_matrix(mat, f.source.rank(n), f.target.rank(n), m, f.nvars)
        for n, mat in f.maps.items()
    }
    return ChainMap(src, tgt, maps)
