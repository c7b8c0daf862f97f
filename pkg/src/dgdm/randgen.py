"""Seeded constructive generators for randomized checks.

Weak equivalences are never found by search: they are assembled from
pieces that are weak equivalences by construction (inclusions into
direct sums with cones of identities, chain-level shears, elementary
automorphisms, acyclic Sullivan extensions), so every seed yields a
valid input.
"""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Optional, Tuple

from .complexes import (
    ChainMap,
    FreeDComplex,
    compose,
    direct_sum,
    disk,
    identity_map,
    mapping_cone,
    mat_apply,
    sphere,
    summand_inclusion,
    zero_matrix,
)
from .dga import AlgebraElement, AlgebraMorphism, Generator, SullivanAlgebra
from .groebner import FreeModuleElement
from .weyl import WeylElement
from . import amod as amod_mod


def random_weyl(rng: random.Random, nvars: int = 1, max_terms: int = 2, max_exp: int = 1) -> WeylElement:
    terms = {}
    for _ in range(rng.randint(0, max_terms)):
        a = tuple(rng.randint(0, max_exp) for _ in range(nvars))
        b = tuple(rng.randint(0, max_exp) for _ in range(nvars))
        terms[(a, b)] = Fraction(rng.randint(-2, 2))
    return WeylElement(nvars, terms)


def random_complex(
    rng: random.Random,
    nvars: int = 1,
    max_top: int = 2,
    max_cells: int = 3,
    twists: int = 2,
) -> FreeDComplex:
    """A direct sum of spheres and disks conjugated by elementary
    automorphisms; d*d = 0 holds by construction."""
    pieces = [sphere(rng.randint(0, max_top), nvars)]
    for _ in range(rng.randint(0, max_cells - 1)):
        if rng.random() < 0.5:
            pieces.append(sphere(rng.randint(0, max_top), nvars))
        else:
            pieces.append(disk(rng.randint(1, max_top), nvars))
    c = pieces[0]
    for p in pieces[1:]:
        c = direct_sum(c, p)
    ranks = dict(c.ranks)
    diffs = {n: [list(row) for row in c.diff(n)] for n in c.differentials}
    for _ in range(twists):
        degrees = [n for n, r in ranks.items() if r >= 2]
        if not degrees:
            break
        n = rng.choice(degrees)
        r = ranks[n]
        i, j = rng.sample(range(r), 2)
        p = random_weyl(rng, nvars, 1, 1)
        if p.is_zero():
            continue
        # basis change e_i += p * e_j in degree n
        if n in diffs:
            for col in range(len(diffs[n][0])):
                diffs[n][i][col] = diffs[n][i][col] + p * diffs[n][j][col]
        if (n + 1) in diffs:
            for row in range(len(diffs[n + 1])):
                diffs[n + 1][row][j] = diffs[n + 1][row][j] - diffs[n + 1][row][i] * p
    return FreeDComplex(nvars, ranks, {n: tuple(tuple(r) for r in m) for n, m in diffs.items()})


def random_map_from_cone(rng: random.Random, z: FreeDComplex, x: FreeDComplex) -> ChainMap:
    """A chain map cone(id_Z) -> X from arbitrary degree-raising data u.

    With cone(id_Z)_n = Z_{n-1} (+) Z_n, any family u_n: Z_{n-1} -> X_n
    determines the chain map (a, b) |-> u(a) + v(b) where the chain
    condition forces v_n = u_n o d_Z + d_X o u_{n+1}; every choice of u
    works, so the family is as random as u is.
    """
    from .complexes import mat_add, mat_mul

    cone = mapping_cone(identity_map(z))
    nv = z.nvars
    u = {}
    for n in range(0, max(z.top + 2, x.top + 1) + 1):
        if z.rank(n - 1) and x.rank(n):
            u[n] = tuple(
                tuple(random_weyl(rng, nv, 1, 1) for _ in range(x.rank(n)))
                for _ in range(z.rank(n - 1))
            )
    maps = {}
    for n in range(0, cone.top + 1):
        rows_z1, rows_z = z.rank(n - 1), z.rank(n)
        cols = x.rank(n)
        if (rows_z1 + rows_z) == 0 or cols == 0:
            continue
        rows = []
        for i in range(rows_z1):
            rows.append(u[n][i] if n in u else tuple(WeylElement.zero(nv) for _ in range(cols)))
        if rows_z:
            v = zero_matrix(rows_z, cols, nv)
            if n in u and rows_z1:
                v = mat_add(v, mat_mul(z.diff(n), u[n], nv))
            if (n + 1) in u and x.rank(n + 1):
                v = mat_add(v, mat_mul(u[n + 1], x.diff(n + 1), nv))
            rows.extend(v)
        maps[n] = tuple(rows)
    return ChainMap(cone, x, maps)


def random_weq(
    rng: random.Random,
    x: Optional[FreeDComplex] = None,
    nvars: int = 1,
    max_top: int = 2,
) -> ChainMap:
    """A random weak equivalence out of x (or a fresh random complex).

    Shape: X -> X (+) cone(id_Z), the inclusion twisted by a shear that
    moves the cone summand into X; both pieces are weqs by construction.
    """
    if x is None:
        x = random_complex(rng, nvars, max_top)
    z = random_complex(rng, nvars, max(1, max_top - 1), 2, 0)
    cz = mapping_cone(identity_map(z))
    y = direct_sum(x, cz)
    inc = summand_inclusion(x, cz, 0)
    psi = random_map_from_cone(rng, z, x)
    # shear (x', c) |-> (x' + psi(c), c): a chain automorphism of Y
    maps = {}
    for n in y.degrees():
        rows = []
        for i in range(x.rank(n)):
            row = [WeylElement.zero(x.nvars) for _ in range(y.rank(n))]
            row[i] = WeylElement.one(x.nvars)
            rows.append(tuple(row))
        for i in range(cz.rank(n)):
            row = [WeylElement.zero(x.nvars) for _ in range(y.rank(n))]
            if x.rank(n):
                unit = FreeModuleElement.unit(cz.rank(n), x.nvars, i)
                img = psi.apply(n, unit) if x.rank(n) else None
                for col in range(x.rank(n)):
                    row[col] = img.coords[col]
            row[x.rank(n) + i] = WeylElement.one(x.nvars)
            rows.append(tuple(row))
        maps[n] = tuple(rows)
    shear = ChainMap(y, y, maps)
    return compose(inc, shear)


def random_cycle(rng: random.Random, c: FreeDComplex, n: int) -> FreeModuleElement:
    """A (possibly zero) cycle in degree n, built as a boundary plus any
    unit vectors that happen to be cycles."""
    r = c.rank(n)
    nvars = c.nvars
    if r == 0:
        raise ValueError(f"degree {n} is zero in this complex")
    out = FreeModuleElement.zero(r, nvars)
    if c.rank(n + 1):
        w = FreeModuleElement([random_weyl(rng, nvars, 1, 1) for _ in range(c.rank(n + 1))])
        out = out + mat_apply(w, c.diff(n + 1), nvars, r)
    if c.rank(n - 1) == 0 or n == 0:
        # everything is a cycle
        out = out + FreeModuleElement([random_weyl(rng, nvars, 1, 1) for _ in range(r)])
    else:
        for i in range(r):
            unit = FreeModuleElement.unit(r, nvars, i)
            if mat_apply(unit, c.diff(n), nvars, c.rank(n - 1)).is_zero():
                if rng.random() < 0.5:
                    out = out + unit.left_mul(random_weyl(rng, nvars, 1, 1))
    return out


# ------------------------------------------------------------- algebras

def random_algebra(
    rng: random.Random,
    nvars: int = 1,
    max_gens: int = 2,
    max_degree: int = 3,
) -> SullivanAlgebra:
    """A Sullivan algebra with a lowering differential: each generator's
    differential is a boundary of the earlier part (hence closed)."""
    a = SullivanAlgebra.oh(nvars)
    for idx in range(rng.randint(0, max_gens)):
        deg = rng.randint(1, max_degree)
        d_assign = None
        if rng.random() < 0.5 and deg >= 1:
            cand = random_algebra_element(rng, a, deg, 3)
            d_assign = a.d(cand)
            if d_assign.is_zero():
                d_assign = None
        a = a.extended(Generator(f"g{idx}", deg), d_assign)
    return a


def random_algebra_element(
    rng: random.Random, a: SullivanAlgebra, degree: int, max_weight: int = 3
) -> AlgebraElement:
    keys = list(a.basis_keys(degree, max_weight))
    if not keys:
        return a.zero()
    coeffs = {}
    for _ in range(rng.randint(1, 2)):
        coeffs[rng.choice(keys)] = Fraction(rng.randint(-2, 2))
    return AlgebraElement(a, {k: c for k, c in coeffs.items() if c})


def random_algebra_weq(
    rng: random.Random, x: SullivanAlgebra, pairs: int = 1
) -> Tuple[SullivanAlgebra, AlgebraMorphism]:
    """X -> X (x) (acyclic Sullivan extension), postcomposed with shears."""
    y = x
    for k in range(pairs):
        deg = rng.randint(1, 2)
        y = y.extended(Generator(f"a{k}", deg), None)
        y = y.extended(Generator(f"b{k}", deg + 1), y.generator(len(y.generators) - 1))
    assignments = {j: y.generator(j) for j in range(len(x.generators))}
    f = AlgebraMorphism(x, y, assignments, check=False)
    # shear: send one generator g to g + d(random) (an automorphism)
    if y.generators and rng.random() < 0.7:
        j = rng.randrange(len(y.generators))
        deg = y.generators[j].degree
        u = random_algebra_element(rng, y, deg + 1, 3)
        u = AlgebraElement(
            y, {k: c for k, c in u.coeffs.items() if all(a[0] < j for a in k[1])}
        )
        w = y.d(u)
        if not w.is_zero():
            shear_assign = {i: y.generator(i) for i in range(len(y.generators))}
            shear_assign[j] = y.generator(j) + w
            shear = AlgebraMorphism(y, y, shear_assign)
            from .dga import compose_morphisms

            f = compose_morphisms(f, shear)
    return y, f


# ------------------------------------------------------------- A-modules

def random_amodule(
    rng: random.Random,
    algebra: SullivanAlgebra,
    cells: int = 2,
    max_degree: int = 3,
) -> amod_mod.AModule:
    """A Sullivan A-module built by attaching cells along closed elements."""
    base = amod_mod.free_sphere_module(algebra, rng.randint(0, max_degree - 1), name="b")
    stages = []
    current = base
    for idx in range(cells - 1):
        n = rng.randint(1, max_degree)
        z = random_closed_element(rng, current, n - 1)
        src = amod_mod.free_sphere_module(algebra, n - 1, name=f"s{idx}")
        f = amod_mod.AModuleMorphism(src, current, None, {0: z}, check=True)
        current = amod_mod.amod_pushout_gen(f, name=f"c{idx}").module
    return current


def random_module_element(
    rng: random.Random, m: amod_mod.AModule, degree: int, max_weight: int = 3
) -> amod_mod.AModuleElement:
    keys = list(m.basis_keys(degree, max_weight))
    if not keys:
        return m.zero()
    coeffs = {}
    for _ in range(rng.randint(1, 2)):
        coeffs[rng.choice(keys)] = Fraction(rng.randint(-2, 2))
    return amod_mod.AModuleElement(m, {k: c for k, c in coeffs.items() if c})


def random_closed_element(
    rng: random.Random, m: amod_mod.AModule, degree: int
) -> amod_mod.AModuleElement:
    """A closed element: the boundary of a random element (or zero)."""
    if rng.random() < 0.3:
        return m.zero()
    return m.d(random_module_element(rng, m, degree + 1))


def random_amodule_weq(
    rng: random.Random, p: amod_mod.AModule
) -> Tuple[amod_mod.AModule, amod_mod.AModuleMorphism]:
    """P -> P + (contractible cell pair), composed with a shear."""
    n = rng.randint(1, 2)
    tr = amod_mod.transfinite_compose_finite(p, [(n, None)])
    mid = tr.module
    top_gen = mid.generator(0)
    tr2 = amod_mod.transfinite_compose_finite(mid, [(n + 1, top_gen)])
    q = tr2.module
    inc1 = amod_mod.AModuleMorphism.t_inclusion(mid)
    inc2 = amod_mod.AModuleMorphism.t_inclusion(q)
    f = amod_mod.compose_amodule_morphisms(inc1, inc2)
    # shear the top cell by a boundary
    w = q.d(random_module_element(rng, q, q.gens[0].degree + 1))
    if not w.is_zero():
        t_map = amod_mod.AModuleMorphism.t_inclusion(q)
        shear = amod_mod.AModuleMorphism(
            q, q, t_map, {0: q.generator(0) + w}, check=True
        )
        f = amod_mod.compose_amodule_morphisms(f, shear)
    return q, f
