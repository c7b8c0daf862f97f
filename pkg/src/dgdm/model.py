"""The projective model structure at the level of computable recognizers.

Fibrations are detected exactly (Groebner surjectivity in positive
degrees).  Cofibration recognition is a certificate system: `certified`
means degreewise injective with an explicitly computed free complement
of the image, `refuted` means injectivity fails, and `not-certified`
is an honest "don't know" (projectivity of a general cokernel is not
decided here).  Pushouts are taken along certified maps only, which is
exactly the class of pushouts the underlying theory ever computes.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .complexes import (
    ChainMap,
    ComplexError,
    FreeDComplex,
    Matrix,
    compose,
    disk,
    identity_matrix,
    mat_apply,
    sphere,
    zero_matrix,
)
from .groebner import FreeModuleElement, buchberger, express_in_inputs, member
from .obasis import (
    Entry,
    OBasisChainMap,
    OBasisComplex,
    Slot,
    SlotId,
    tensor_free,
)
from .weyl import WeylElement


# ---------------------------------------------------------------- generators

@dataclass(frozen=True)
class GeneratingMap:
    """iota_n: S^{n-1} -> D^n (n >= 1), iota_0: 0 -> S^0, zeta_n: 0 -> D^n."""

    kind: str  # "iota" | "zeta"
    n: int

    def __post_init__(self):
        if self.kind not in ("iota", "zeta"):
            raise ValueError(f"unknown generating map kind {self.kind!r}")
        if self.kind == "iota" and self.n < 0:
            raise ValueError("iota needs n >= 0")
        if self.kind == "zeta" and self.n < 1:
            raise ValueError("zeta needs n >= 1")

    def source(self, nvars: int = 1) -> FreeDComplex:
        if self.kind == "zeta" or self.n == 0:
            return FreeDComplex(nvars, {}, {})
        return sphere(self.n - 1, nvars)

    def target(self, nvars: int = 1) -> FreeDComplex:
        if self.kind == "iota" and self.n == 0:
            return sphere(0, nvars)
        return disk(self.n, nvars)

    def chain_map(self, nvars: int = 1) -> ChainMap:
        src, tgt = self.source(nvars), self.target(nvars)
        maps = {}
        if self.kind == "iota" and self.n >= 1:
            maps[self.n - 1] = identity_matrix(1, nvars)
        return ChainMap(src, tgt, maps)


def iota(n: int) -> GeneratingMap:
    return GeneratingMap("iota", n)


def zeta(n: int) -> GeneratingMap:
    return GeneratingMap("zeta", n)


# ---------------------------------------------------------------- fibrations

def is_fibration(f: ChainMap) -> bool:
    """Surjective in every strictly positive degree (exact membership)."""
    for n in range(1, f.target.top + 1):
        s = f.target.rank(n)
        if s == 0:
            continue
        rows = [
            FreeModuleElement(list(r))
            for r in f.component(n)
            if any(not e.is_zero() for e in r)
        ]
        gb = buchberger(rows, rank=s, nvars=f.nvars)
        for i in range(s):
            if not member(FreeModuleElement.unit(s, f.nvars, i), gb):
                return False
    return True


# ---------------------------------------------------------------- cofibrations

@dataclass
class CofibrationCertificate:
    """Outcome of cofibration recognition for a chain map.

    certified: degreewise injective and the image has an explicit free
    complement; `complement[n]` lists elements of the target degree-n
    module whose classes freely generate the cokernel.
    refuted: `kernel_witness` is a nonzero kernel element in some degree.
    not-certified: injective as far as checked, but no scalar-pivot
    splitting was found; nothing is claimed about the cokernel.
    """

    verdict: str
    complement: Dict[int, List[FreeModuleElement]] = field(default_factory=dict)
    kernel_witness: Optional[Tuple[int, FreeModuleElement]] = None


def _scalar_entry(e: WeylElement) -> Optional[Fraction]:
    if e.is_scalar() and not e.is_zero():
        return e.scalar_value()
    return None


def _free_complement(mat: Matrix, rows: int, cols: int, nvars: int) -> Optional[List[FreeModuleElement]]:
    """Unit-pivot reduction: split the image off the target, or give up.

    Column operations are tracked as an evolving target basis B (in the
    original coordinates): the op col_w -= col_v * c replaces
    B[v] by B[v] + c*B[w].  When every row gets pivoted the non-pivot
    basis vectors freely complement the image.
    """
    if rows == 0:
        return [FreeModuleElement.unit(cols, nvars, j) for j in range(cols)] if cols else []
    if cols == 0:
        return None  # nonzero source into the zero module cannot split injectively
    work = [[e for e in row] for row in mat]
    basis = [[WeylElement.zero(nvars) for _ in range(cols)] for _ in range(cols)]
    for j in range(cols):
        basis[j][j] = WeylElement.one(nvars)
    piv_rows: Dict[int, int] = {}
    piv_cols = set()
    while True:
        found = None
        for u in range(rows):
            if u in piv_rows:
                continue
            for v in range(cols):
                if v in piv_cols:
                    continue
                sc = _scalar_entry(work[u][v])
                if sc is not None:
                    found = (u, v, sc)
                    break
            if found:
                break
        if not found:
            break
        u, v, sc = found
        # clear row u with column ops (the only ops that move the basis)
        for w in range(cols):
            if w == v or work[u][w].is_zero():
                continue
            c = work[u][w].scale(Fraction(1) / sc)
            for t in range(rows):
                if not work[t][v].is_zero():
                    work[t][w] = work[t][w] - work[t][v] * c
            for t in range(cols):
                if not basis[w][t].is_zero():
                    basis[v][t] = basis[v][t] + c * basis[w][t]
        # clear column v with row ops (no basis impact)
        for t in range(rows):
            if t == u or work[t][v].is_zero():
                continue
            q = work[t][v].scale(Fraction(1) / sc)
            for w in range(cols):
                if not work[u][w].is_zero():
                    work[t][w] = work[t][w] - q * work[u][w]
        piv_rows[u] = v
        piv_cols.add(v)
    if len(piv_rows) < rows:
        # some row not pivoted: either a hidden dependency or no scalar pivot
        return None
    return [FreeModuleElement(basis[w]) for w in range(cols) if w not in piv_cols]


def certify_cofibration(f: ChainMap) -> CofibrationCertificate:
    """Certificate-style cofibration recognition (see class docstring)."""
    top = max(f.source.top, f.target.top)
    # injectivity first: a nonzero kernel refutes
    for n in range(0, top + 1):
        r = f.source.rank(n)
        if r == 0:
            continue
        from .groebner import syzygies

        ker = syzygies(f.component(n), f.nvars, source_rank=r, target_rank=f.target.rank(n))
        if ker.generators:
            return CofibrationCertificate("refuted", kernel_witness=(n, ker.generators[0]))
    complement: Dict[int, List[FreeModuleElement]] = {}
    for n in range(0, top + 1):
        s = f.target.rank(n)
        comp = _free_complement(f.component(n), f.source.rank(n), s, f.nvars)
        if comp is None:
            return CofibrationCertificate("not-certified")
        if comp:
            complement[n] = comp
    return CofibrationCertificate("certified", complement=complement)


# ---------------------------------------------------------------- pushouts

@dataclass
class PushoutResult:
    complex: FreeDComplex
    from_target: ChainMap  # Y -> Z, along f
    from_attached: ChainMap  # W -> Z, the pushout of f


def _decompose(
    w: FreeModuleElement,
    g_rows: List[FreeModuleElement],
    comp: List[FreeModuleElement],
    nvars: int,
) -> Tuple[List[WeylElement], List[WeylElement]]:
    """Unique splitting w = sum a_i g(e_i) + sum q_k c_k in W_n."""
    gens = g_rows + comp
    gb = buchberger(gens, rank=w.rank, nvars=nvars)
    u = express_in_inputs(w, gb)
    if u is None:
        raise ComplexError("element escapes im(g) + complement; certificate is stale")
    return u[: len(g_rows)], u[len(g_rows):]


def pushout(
    f: ChainMap,
    g: ChainMap,
    certificate: Optional[CofibrationCertificate] = None,
) -> PushoutResult:
    """Pushout of f: X -> Y along a split-injective g: X -> W.

    Z_n = Y_n (+) (free complement of g)_n with the induced differential;
    requires (and checks) a `certified` certificate for g.
    """
    if f.source != g.source:
        raise ComplexError("legs do not share a source")
    if certificate is None:
        certificate = certify_cofibration(g)
    if certificate.verdict != "certified":
        raise ComplexError(f"attaching leg is {certificate.verdict}; pushout needs a certified map")
    x, y, w = f.source, f.target, g.target
    nvars = f.nvars
    comp = certificate.complement
    cells = {n: comp.get(n, []) for n in range(0, w.top + 1)}

    ranks = {}
    for n in set(y.ranks) | {n for n, cs in cells.items() if cs}:
        r = y.rank(n) + len(cells.get(n, []))
        if r:
            ranks[n] = r

    def g_rows(n: int) -> List[FreeModuleElement]:
        if x.rank(n) == 0 or w.rank(n) == 0:
            return []
        return [FreeModuleElement(list(r)) for r in g.component(n)]

    diffs: Dict[int, List[Tuple[WeylElement, ...]]] = {}
    top = max([w.top, y.top, 0])
    for n in range(1, top + 1):
        rows_n = ranks.get(n, 0)
        cols = ranks.get(n - 1, 0)
        if rows_n == 0 or cols == 0:
            continue
        zero_row = [WeylElement.zero(nvars)] * cols
        rows = []
        dy = y.diff(n)
        for i in range(y.rank(n)):
            row = list(zero_row)
            for j in range(y.rank(n - 1)):
                row[j] = dy[i][j]
            rows.append(tuple(row))
        for cell in cells.get(n, []):
            dcell = mat_apply(cell, w.diff(n), nvars, w.rank(n - 1)) if w.rank(n - 1) else None
            row = list(zero_row)
            if dcell is not None and not dcell.is_zero():
                a, q = _decompose(dcell, g_rows(n - 1), cells.get(n - 1, []), nvars)
                xv = FreeModuleElement(a) if a else None
                if xv is not None and y.rank(n - 1):
                    fx = mat_apply(xv, f.component(n - 1), nvars, y.rank(n - 1))
                    for j in range(y.rank(n - 1)):
                        row[j] = fx.coords[j]
                for k, qk in enumerate(q):
                    row[y.rank(n - 1) + k] = qk
            rows.append(tuple(row))
        diffs[n] = tuple(rows)
    z = FreeDComplex(nvars, ranks, diffs)

    h_maps = {}
    for n in y.degrees():
        rows = []
        for i in range(y.rank(n)):
            row = [WeylElement.zero(nvars)] * z.rank(n)
            row[i] = WeylElement.one(nvars)
            rows.append(tuple(row))
        h_maps[n] = tuple(rows)
    h = ChainMap(y, z, h_maps)

    k_maps = {}
    for n in w.degrees():
        if z.rank(n) == 0:
            continue
        rows = []
        for i in range(w.rank(n)):
            unit = FreeModuleElement.unit(w.rank(n), nvars, i)
            a, q = _decompose(unit, g_rows(n), cells.get(n, []), nvars)
            row = [WeylElement.zero(nvars)] * z.rank(n)
            if a and y.rank(n):
                fx = mat_apply(FreeModuleElement(a), f.component(n), nvars, y.rank(n))
                for j in range(y.rank(n)):
                    row[j] = fx.coords[j]
            for kk, qk in enumerate(q):
                row[y.rank(n) + kk] = qk
            rows.append(tuple(row))
        k_maps[n] = tuple(rows)
    k = ChainMap(w, z, k_maps)

    if compose(f, h) != compose(g, k):
        raise AssertionError("pushout square does not commute")
    return PushoutResult(z, h, k)


def pushout_factor(po: PushoutResult, q: ChainMap, p: ChainMap) -> ChainMap:
    """The unique map u: Z -> E with u o from_target = q, u o from_attached = p.

    q: Y -> E and p: W -> E must form a cocone (q f = p g); rows of u are
    forced: Y-part by q, cell rows by p on the complement elements.
    """
    y = po.from_target.source
    w = po.from_attached.source
    z = po.complex
    e = q.target
    if p.target != e:
        raise ComplexError("cocone legs land in different complexes")
    nvars = z.nvars
    maps = {}
    for n in z.degrees():
        if e.rank(n) == 0:
            continue
        rows = []
        for i in range(y.rank(n)):
            rows.append(tuple(q.component(n)[i]))
        n_cells = z.rank(n) - y.rank(n)
        if n_cells:
            # cell i of Z at degree n is the image under from_attached of the
            # i-th complement element; pushing it through p gives the row
            comp_elements = _complement_elements(po, n)
            for cell in comp_elements:
                img = mat_apply(cell, p.component(n), nvars, e.rank(n))
                rows.append(tuple(img.coords))
        maps[n] = tuple(rows)
    return ChainMap(z, e, maps)


def _complement_elements(po: PushoutResult, n: int) -> List[FreeModuleElement]:
    """Recover the complement elements whose classes are the cells of Z_n."""
    w = po.from_attached.source
    z = po.complex
    y = po.from_target.source
    nvars = z.nvars
    cells = []
    n_cells = z.rank(n) - y.rank(n)
    if n_cells == 0:
        return []
    # solve k(c) = cell unit: cells appear as the rows of from_attached with
    # unit coordinates in the cell block; reconstruct by Groebner expression
    units = [FreeModuleElement.unit(w.rank(n), nvars, i) for i in range(w.rank(n))]
    kmat = po.from_attached.component(n)
    images = [mat_apply(u, kmat, nvars, z.rank(n)) for u in units]
    gb = buchberger(images, rank=z.rank(n), nvars=nvars)
    for j in range(n_cells):
        target = FreeModuleElement.unit(z.rank(n), nvars, y.rank(n) + j)
        u = express_in_inputs(target, gb)
        if u is None:
            raise AssertionError("cell unit not in the image of the attached leg")
        acc = FreeModuleElement.zero(w.rank(n), nvars)
        for c, unit in zip(u, units):
            acc = acc + unit.left_mul(c)
        cells.append(acc)
    return cells


# ---------------------------------------------------------------- cells

@dataclass
class AttachResult:
    complex: FreeDComplex
    inclusion: ChainMap  # base -> complex


def attach_cells(base: FreeDComplex, attachments: Sequence[Tuple[int, Optional[FreeModuleElement]]]) -> AttachResult:
    """Iterated pushout along generating cofibrations iota_n.

    Each attachment is (n, z) with z a cycle in degree n-1 of the current
    complex (z is ignored for n = 0).  Returns the final complex and the
    composite inclusion of the base, which certify_cofibration certifies.
    """
    current = base
    incl = None  # ChainMap base -> current
    nvars = base.nvars
    for (n, z) in attachments:
        gen = iota(n)
        g = gen.chain_map(nvars)
        if n == 0:
            f = ChainMap(g.source, current, {})
        else:
            if z is None:
                z = FreeModuleElement.zero(max(current.rank(n - 1), 1), nvars)
            if current.rank(n - 1) == 0 or z.rank != current.rank(n - 1):
                raise ComplexError(f"attaching element has rank {z.rank}, degree {n - 1} has rank {current.rank(n - 1)}")
            if current.rank(n - 2) > 0:
                img = mat_apply(z, current.diff(n - 1), nvars, current.rank(n - 2))
                if not img.is_zero():
                    raise ComplexError("attaching element is not a cycle")
            f = ChainMap(g.source, current, {n - 1: (tuple(z.coords),)})
        po = pushout(f, g)
        step = po.from_target
        incl = step if incl is None else compose(incl, step)
        current = po.complex
    if incl is None:
        from .complexes import identity_map

        incl = identity_map(base)
    return AttachResult(current, incl)


# ---------------------------------------------------------------- lifting

def solve_lifting(i: ChainMap, cert: CofibrationCertificate, p: ChainMap, u: ChainMap, v: ChainMap) -> Optional[ChainMap]:
    """Solve h i = u, p h = v for a certified i: A -> C against p: E -> B.

    Builds h degree by degree on A-part plus complement cells, choosing
    cell values by exact membership (p(e), d(e)) = (v(c), h(dc)).
    Returns None when some cell value has no preimage.
    """
    a, c = i.source, i.target
    e, b = p.source, p.target
    nvars = i.nvars
    if u.source != a or u.target != e or v.source != c or v.target != b:
        raise ComplexError("lifting square is malformed")
    h_rows: Dict[int, List[Tuple[WeylElement, ...]]] = {}

    def g_rows(n):
        if a.rank(n) == 0 or c.rank(n) == 0:
            return []
        return [FreeModuleElement(list(r)) for r in i.component(n)]

    cells = {n: cert.complement.get(n, []) for n in range(0, c.top + 1)}
    h_on_cells: Dict[int, List[FreeModuleElement]] = {}
    for n in range(0, c.top + 1):
        vals: List[FreeModuleElement] = []
        for cell in cells.get(n, []):
            # target data
            vc = mat_apply(cell, v.component(n), nvars, b.rank(n)) if b.rank(n) else None
            hdc = None
            if c.rank(n - 1) and e.rank(n - 1):
                dcell = mat_apply(cell, c.diff(n), nvars, c.rank(n - 1))
                hdc = _apply_extension(dcell, n - 1, g_rows, cells, u, h_on_cells, e, nvars)
            # solve e with p(e) = vc, d(e) = hdc
            cols_b, cols_e1 = b.rank(n), e.rank(n - 1)
            gens = []
            for idx in range(e.rank(n)):
                unit = FreeModuleElement.unit(e.rank(n), nvars, idx)
                img_p = mat_apply(unit, p.component(n), nvars, cols_b) if cols_b else None
                img_d = mat_apply(unit, e.diff(n), nvars, cols_e1) if cols_e1 else None
                coords = (list(img_p.coords) if img_p else []) + (list(img_d.coords) if img_d else [])
                if not coords:
                    coords = [WeylElement.zero(nvars)]
                gens.append(FreeModuleElement(coords))
            tgt_coords = (list(vc.coords) if vc is not None else [WeylElement.zero(nvars)] * cols_b) + (
                list(hdc.coords) if hdc is not None else [WeylElement.zero(nvars)] * cols_e1
            )
            if not tgt_coords:
                tgt_coords = [WeylElement.zero(nvars)]
            gb = buchberger(gens, rank=max(len(tgt_coords), 1), nvars=nvars)
            sol = express_in_inputs(FreeModuleElement(tgt_coords), gb)
            if sol is None:
                return None
            vals.append(FreeModuleElement(sol) if sol else FreeModuleElement.zero(max(e.rank(n), 1), nvars))
        h_on_cells[n] = vals
    # assemble h as a matrix: rows = C-units decomposed through (i, cells)
    maps = {}
    for n in range(0, c.top + 1):
        if c.rank(n) == 0 or e.rank(n) == 0:
            continue
        rows = []
        for idx in range(c.rank(n)):
            unit = FreeModuleElement.unit(c.rank(n), nvars, idx)
            img = _apply_extension(unit, n, g_rows, cells, u, h_on_cells, e, nvars)
            rows.append(tuple(img.coords))
        maps[n] = tuple(rows)
    h = ChainMap(c, e, maps)
    if compose(i, h) != u or compose(h, p) != v:
        return None
    return h


def _apply_extension(w, n, g_rows, cells, u, h_on_cells, e, nvars):
    """Evaluate the partial lift on w in C_n: through A via u, cells via chosen values."""
    a_coeffs, q = _decompose(w, g_rows(n), cells.get(n, []), nvars)
    out = FreeModuleElement.zero(e.rank(n), nvars) if e.rank(n) else None
    if out is None:
        raise ComplexError("lift lands in a zero module")
    if a_coeffs and u.source.rank(n):
        ua = mat_apply(FreeModuleElement(a_coeffs), u.component(n), nvars, e.rank(n))
        out = out + ua
    for qk, val in zip(q, h_on_cells.get(n, [])):
        out = out + val.left_mul(qk)
    return out


# ---------------------------------------------------------------- box products

@dataclass
class PushoutProductResult:
    """The corner map of two generating maps, with its cokernel described.

    `cokernel` maps each degree to the codomain slots not hit by the
    (slotwise identity) corner map; each listed slot is a copy of
    D (x)_O D with O-basis {d^a e (x) d^b f}.
    """

    domain: OBasisComplex
    codomain: OBasisComplex
    map: OBasisChainMap
    cokernel: Dict[int, List[SlotId]]


def pushout_product(a: GeneratingMap, b: GeneratingMap, nvars: int = 1) -> PushoutProductResult:
    """The induced map from the pushout corner of a(x)id, id(x)b to tgt(a)(x)tgt(b)."""
    one = WeylElement.one(nvars)
    codomain = tensor_free(a.target(nvars), b.target(nvars))

    slots: Dict[SlotId, Slot] = {}
    diff: Dict[SlotId, List[Entry]] = {}
    if a.kind == "iota" and b.kind == "iota" and a.n >= 1 and b.n >= 1:
        m, n = a.n, b.n
        # corner per the cokernel computation: two slots on top, the
        # identified D(x)D below
        slots[(m, n - 1, 0, 0)] = Slot(degree=m + n - 1, factors=2)
        slots[(m - 1, n, 0, 0)] = Slot(degree=m + n - 1, factors=2)
        slots[(m - 1, n - 1, 0, 0)] = Slot(degree=m + n - 2, factors=2)
        diff[(m, n - 1, 0, 0)] = [((m - 1, n - 1, 0, 0), 0, one)]
        sign = one if (m - 1) % 2 == 0 else -one
        diff[(m - 1, n, 0, 0)] = [((m - 1, n - 1, 0, 0), 1, sign)]
    elif a.kind == "iota" and b.kind == "iota":
        # at least one leg is iota_0; corner = S^0 (x) src(b) or src(a) (x) S^0
        corner = tensor_free(a.target(nvars) if a.n == 0 else a.source(nvars),
                             b.source(nvars) if a.n == 0 else b.target(nvars))
        if a.n == 0 and b.n == 0:
            corner = tensor_free(FreeDComplex(nvars, {}, {}), FreeDComplex(nvars, {}, {}))
        slots, diff = corner.slots, corner.diff_entries
    elif a.kind == "zeta" and b.kind == "iota":
        if b.n >= 1:
            corner = tensor_free(a.target(nvars), b.source(nvars))
        else:
            corner = tensor_free(FreeDComplex(nvars, {}, {}), FreeDComplex(nvars, {}, {}))
        slots, diff = corner.slots, corner.diff_entries
    elif a.kind == "iota" and b.kind == "zeta":
        if a.n >= 1:
            corner = tensor_free(a.source(nvars), b.target(nvars))
        else:
            corner = tensor_free(FreeDComplex(nvars, {}, {}), FreeDComplex(nvars, {}, {}))
        slots, diff = corner.slots, corner.diff_entries
    else:  # zeta box zeta
        corner = tensor_free(FreeDComplex(nvars, {}, {}), FreeDComplex(nvars, {}, {}))
        slots, diff = corner.slots, corner.diff_entries

    domain = OBasisComplex(nvars, slots, diff)
    entries = {sid: [(sid, 0, one)] for sid in domain.slots if sid in codomain.slots}
    if len(entries) != len(domain.slots):
        raise AssertionError("corner slot missing from the full tensor product")
    corner_map = OBasisChainMap(domain, codomain, entries)
    corner_map.check_chain_property(max_weight=2)

    image_slots = set(domain.slots)
    cokernel: Dict[int, List[SlotId]] = {}
    for sid, slot in codomain.slots.items():
        if sid not in image_slots:
            cokernel.setdefault(slot.degree, []).append(sid)
    for deg in cokernel:
        cokernel[deg].sort()
    return PushoutProductResult(domain, codomain, corner_map, cokernel)
