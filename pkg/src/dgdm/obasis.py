"""Complexes with countable O-basis: tensor products and bounded exactness.

Tensor products over O of free D-complexes have infinite rank over D but
are free over O: D (x)_O D has O-basis {d^a e (x) d^b f}.  A basis key is

    (slot, alpha, (b_1, ..., b_k))

where the slot names a tensor component (degree and factor structure),
alpha is the x-exponent of the O-coefficient (absorbed into the first
factor), and the b_i are the d-exponents of the k factors.  The weight
|alpha| + sum |b_i| slices each degree into finite-dimensional pieces.

Differentials and chain maps are specified slot-to-slot by a factor
index and a WeylElement: the incoming factor's operator multiplies the
given element on the left and the product is re-expanded in the basis,
with any x-part joining the global O-coefficient.

Acyclicity of these objects is only ever certified on truncation slices
(exact Q-linear algebra, margin 2) and reported as "bounded-pass",
never as unconditional truth.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product as iproduct
from typing import Dict, Hashable, Iterator, List, Sequence, Tuple

from .complexes import FreeDComplex
from .slices import TruncationResult, bounded_acyclicity
from .weyl import WeylElement

SlotId = Hashable
# a differential/map entry: (target slot, factor index, coefficient)
Entry = Tuple[SlotId, int, WeylElement]
Key = Tuple[SlotId, Tuple[int, ...], Tuple[Tuple[int, ...], ...]]
Element = Dict[Key, Fraction]

DEFAULT_TRUNCATION = 6


@dataclass(frozen=True)
class Slot:
    degree: int
    factors: int  # number of d-exponent blocks carried by basis elements


class OBasisComplex:
    """A non-negatively graded complex presented on a countable O-basis."""

    def __init__(self, nvars: int, slots: Dict[SlotId, Slot], diff: Dict[SlotId, List[Entry]]):
        self.nvars = nvars
        self.slots = dict(slots)
        self.diff_entries = {s: list(es) for s, es in diff.items() if es}
        for sid, entries in self.diff_entries.items():
            sl = self.slots[sid]
            for tgt, factor, coef in entries:
                if tgt not in self.slots:
                    raise ValueError(f"entry from {sid} targets unknown slot {tgt}")
                if self.slots[tgt].degree != sl.degree - 1:
                    raise ValueError(f"entry from {sid} to {tgt} does not lower degree by 1")
                if not 0 <= factor < sl.factors:
                    raise ValueError(f"factor index {factor} out of range for slot {sid}")
                if coef.nvars != nvars:
                    raise ValueError("coefficient over the wrong Weyl algebra")

    @property
    def top(self) -> int:
        return max((s.degree for s in self.slots.values()), default=-1)

    def slots_in_degree(self, p: int) -> List[SlotId]:
        return sorted(
            (sid for sid, s in self.slots.items() if s.degree == p),
            key=repr,
        )

    # -- elements -----------------------------------------------------

    def apply_entries(self, key: Key, entries: Sequence[Entry]) -> Element:
        """Expand the action of slot-to-slot entries on one basis element."""
        sid, alpha, bs = key
        zero_a = (0,) * self.nvars
        out: Element = {}
        for tgt, factor, coef in entries:
            if coef.is_zero():
                continue
            tgt_factors = self.slots[tgt].factors
            if factor == 0:
                carrier = WeylElement.monomial(self.nvars, alpha, bs[0]) * coef
                for (na, nb), c in carrier.terms.items():
                    nbs = (nb,) + bs[1:]
                    nkey = (tgt, na, nbs[:tgt_factors])
                    _acc(out, nkey, c)
            else:
                carrier = WeylElement.monomial(self.nvars, zero_a, bs[factor]) * coef
                for (na, nb), c in carrier.terms.items():
                    nalpha = tuple(x + y for x, y in zip(alpha, na))
                    nbs = bs[:factor] + (nb,) + bs[factor + 1:]
                    nkey = (tgt, nalpha, nbs[:tgt_factors])
                    _acc(out, nkey, c)
        return out

    def diff_key(self, key: Key) -> Element:
        return self.apply_entries(key, self.diff_entries.get(key[0], ()))

    def diff_element(self, elt: Element) -> Element:
        out: Element = {}
        for key, c in elt.items():
            for k2, c2 in self.diff_key(key).items():
                _acc(out, k2, c * c2)
        return out

    # -- basis enumeration ---------------------------------------------

    def basis_keys(self, p: int, max_weight: int) -> Iterator[Key]:
        for sid in self.slots_in_degree(p):
            k = self.slots[sid].factors
            for exps in _bounded_exponent_blocks(self.nvars, k + 1, max_weight):
                yield (sid, exps[0], tuple(exps[1:]))

    @staticmethod
    def weight(key: Key) -> int:
        _, alpha, bs = key
        return sum(alpha) + sum(sum(b) for b in bs)

    def validate_dsquare(self, max_weight: int = 3):
        """d*d = 0 on every basis element up to the given weight."""
        for p in range(2, self.top + 1):
            for key in self.basis_keys(p, max_weight):
                if self.diff_element(self.diff_key(key)):
                    raise ValueError(f"d*d != 0 on basis element {key}")


def _acc(store: Element, key: Key, c: Fraction):
    s = store.get(key, Fraction(0)) + c
    if s:
        store[key] = s
    else:
        store.pop(key, None)


def _bounded_exponent_blocks(nvars: int, blocks: int, total: int):
    """All tuples of `blocks` exponent vectors with combined degree <= total."""
    def gen_vec(budget):
        for e in iproduct(*(range(budget + 1) for _ in range(nvars))):
            if sum(e) <= budget:
                yield e

    def rec(i, budget):
        if i == blocks - 1:
            for e in gen_vec(budget):
                yield (e,)
            return
        for e in gen_vec(budget):
            for rest in rec(i + 1, budget - sum(e)):
                yield (e,) + rest

    yield from rec(0, total)


class OBasisChainMap:
    """A chain map between O-basis complexes given by slot-to-slot entries."""

    def __init__(self, source: OBasisComplex, target: OBasisComplex, entries: Dict[SlotId, List[Entry]]):
        if source.nvars != target.nvars:
            raise ValueError("source and target over different Weyl algebras")
        self.source = source
        self.target = target
        self.entries = {s: list(es) for s, es in entries.items() if es}
        for sid, es in self.entries.items():
            sdeg = source.slots[sid].degree
            for tgt, factor, coef in es:
                if target.slots[tgt].degree != sdeg:
                    raise ValueError("chain map entry changes degree")

    def apply_key(self, key: Key) -> Element:
        return self.target.apply_entries(key, self.entries.get(key[0], ()))

    def check_chain_property(self, max_weight: int = 3):
        """f d = d f on basis elements up to the given weight."""
        for p in range(1, self.source.top + 1):
            for key in self.source.basis_keys(p, max_weight):
                lhs: Element = {}
                for k2, c in self.source.diff_key(key).items():
                    for k3, c3 in self.apply_key(k2).items():
                        _acc(lhs, k3, c * c3)
                rhs: Element = {}
                for k2, c in self.apply_key(key).items():
                    for k3, c3 in self.target.diff_key(k2).items():
                        _acc(rhs, k3, c * c3)
                if lhs != rhs:
                    raise ValueError(f"chain property fails on {key}")


def obasis_of_free(c: FreeDComplex, tag: str = "F") -> OBasisComplex:
    """View a free complex through its O-basis {x^a d^b e_s}."""
    slots: Dict[SlotId, Slot] = {}
    diff: Dict[SlotId, List[Entry]] = {}
    for n, r in c.ranks.items():
        for s in range(r):
            slots[(tag, n, s)] = Slot(degree=n, factors=1)
    for n in c.differentials:
        mat = c.diff(n)
        for s in range(c.rank(n)):
            entries = []
            for v in range(c.rank(n - 1)):
                if not mat[s][v].is_zero():
                    entries.append(((tag, n - 1, v), 0, mat[s][v]))
            if entries:
                diff[(tag, n, s)] = entries
    return OBasisComplex(c.nvars, slots, diff)


def tensor_free(c1: FreeDComplex, c2: FreeDComplex) -> OBasisComplex:
    """C (x)_O C' with the Leibniz D-action and differential d(x)1 + (-1)^i 1(x)d.

    Slots are (i, j, s, t): degree-i basis index s of the first factor
    against degree-j index t of the second; basis elements carry two
    d-exponent blocks.
    """
    if c1.nvars != c2.nvars:
        raise ValueError("factors over different Weyl algebras")
    nvars = c1.nvars
    slots: Dict[SlotId, Slot] = {}
    diff: Dict[SlotId, List[Entry]] = {}
    for i, r1 in c1.ranks.items():
        for j, r2 in c2.ranks.items():
            for s in range(r1):
                for t in range(r2):
                    slots[(i, j, s, t)] = Slot(degree=i + j, factors=2)
    for (i, j, s, t) in list(slots):
        entries: List[Entry] = []
        if i >= 1 and c1.rank(i - 1) > 0 and i in c1.differentials:
            mat = c1.diff(i)
            for v in range(c1.rank(i - 1)):
                if not mat[s][v].is_zero():
                    entries.append(((i - 1, j, v, t), 0, mat[s][v]))
        if j >= 1 and c2.rank(j - 1) > 0 and j in c2.differentials:
            sign = 1 if i % 2 == 0 else -1
            mat = c2.diff(j)
            for w in range(c2.rank(j - 1)):
                if not mat[t][w].is_zero():
                    entries.append(((i, j - 1, s, w), 1, mat[t][w].scale(sign)))
        if entries:
            diff[(i, j, s, t)] = entries
    return OBasisComplex(nvars, slots, diff)


def obasis_direct_sum(t1: OBasisComplex, t2: OBasisComplex) -> OBasisComplex:
    if t1.nvars != t2.nvars:
        raise ValueError("summands over different Weyl algebras")
    slots: Dict[SlotId, Slot] = {}
    diff: Dict[SlotId, List[Entry]] = {}
    for idx, t in ((0, t1), (1, t2)):
        for sid, s in t.slots.items():
            slots[(idx, sid)] = s
        for sid, es in t.diff_entries.items():
            diff[(idx, sid)] = [((idx, tgt), f, c) for tgt, f, c in es]
    return OBasisComplex(t1.nvars, slots, diff)


def obasis_inclusion(t1: OBasisComplex, t2: OBasisComplex, which: int) -> OBasisChainMap:
    total = obasis_direct_sum(t1, t2)
    src = t1 if which == 0 else t2
    one = WeylElement.one(src.nvars)
    entries = {sid: [((which, sid), 0, one)] for sid in src.slots}
    return OBasisChainMap(src, total, entries)


def obasis_cone(f: OBasisChainMap) -> OBasisComplex:
    """Mapping cone with d(c, c') = (-dc, f(c) + dc')."""
    src, tgt = f.source, f.target
    slots: Dict[SlotId, Slot] = {}
    diff: Dict[SlotId, List[Entry]] = {}
    for sid, s in src.slots.items():
        slots[("s", sid)] = Slot(degree=s.degree + 1, factors=s.factors)
    for sid, s in tgt.slots.items():
        slots[("t", sid)] = Slot(degree=s.degree, factors=s.factors)
    for sid in src.slots:
        entries: List[Entry] = []
        for tgt_slot, factor, coef in src.diff_entries.get(sid, ()):
            entries.append((("s", tgt_slot), factor, -coef))
        for tgt_slot, factor, coef in f.entries.get(sid, ()):
            entries.append((("t", tgt_slot), factor, coef))
        if entries:
            diff[("s", sid)] = entries
    for sid in tgt.slots:
        entries = [(("t", t2), factor, coef) for t2, factor, coef in tgt.diff_entries.get(sid, ())]
        if entries:
            diff[("t", sid)] = entries
    return OBasisComplex(src.nvars, slots, diff)


# ---------------------------------------------------------------- truncation

def truncated_acyclicity(t: OBasisComplex, n: int = DEFAULT_TRUNCATION) -> TruncationResult:
    """Check exactness of every degree on the weight-<= n slice, margin 2.

    Cycles of weight <= n-2 must bound elements of weight <= n; the check
    runs at levels n and n+1 and only then reports bounded-pass.
    """
    degrees = range(0, t.top + 1)
    return bounded_acyclicity(t.basis_keys, t.diff_key, degrees, n)


def is_bounded_weq(f: OBasisChainMap, n: int = DEFAULT_TRUNCATION) -> TruncationResult:
    """Bounded weak-equivalence test: truncated acyclicity of the cone."""
    return truncated_acyclicity(obasis_cone(f), n)
