"""Complexes: homology presentations, cones, shifts, weqs, connections."""

import random
from fractions import Fraction

import pytest

from dgdm.complexes import (
    ChainMap,
    ComplexError,
    ConnectionModule,
    FreeDComplex,
    compose,
    direct_sum,
    disk,
    homology,
    identity_map,
    identity_matrix,
    is_acyclic,
    is_weak_equivalence,
    mapping_cone,
    shift,
    sphere,
    summand_inclusion,
    summand_projection,
    tensor_with_connection,
    zero_map,
    cone_to_cokernel_projection,
)
from dgdm.groebner import FreeModuleElement, submodule_equal
from dgdm.weyl import Polynomial, WeylElement

D1 = WeylElement.d(1, 1)
X1 = WeylElement.x(1, 1)
ONE = WeylElement.one(1)
ZERO = WeylElement.zero(1)
EMPTY = FreeDComplex(1, {}, {})


def d_complex():
    # 0 -> D --(.d)--> D
    return FreeDComplex(1, {0: 1, 1: 1}, {1: [[D1]]})


def test_dsquare_enforced():
    with pytest.raises(ComplexError):
        FreeDComplex(1, {0: 1, 1: 1, 2: 1}, {1: [[ONE]], 2: [[ONE]]})


def test_shape_enforced():
    with pytest.raises(ComplexError):
        FreeDComplex(1, {0: 2, 1: 1}, {1: [[D1]]})
    with pytest.raises(ComplexError):
        FreeDComplex(1, {-1: 1}, {})


def test_sphere_disk():
    s = sphere(0)
    assert s.ranks == {0: 1} and s.differentials == {}
    d = disk(1)
    assert d.ranks == {1: 1, 0: 1} and d.diff(1) == identity_matrix(1, 1)
    with pytest.raises(ComplexError):
        sphere(-1)
    with pytest.raises(ComplexError):
        disk(0)


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_disks_acyclic(n):
    c = disk(n)
    for k in range(0, n + 1):
        assert homology(c, k).is_zero()
    assert is_acyclic(c)


def test_homology_of_d_complex():
    c = d_complex()
    h0 = homology(c, 0)
    # D/Dd = O: one generator e with one relation d*e
    assert h0.generators == [FreeModuleElement([ONE])]
    assert h0.relations == [FreeModuleElement([D1])]
    assert homology(c, 1).is_zero()


def test_homology_sphere_free():
    h = homology(sphere(2), 2)
    assert h.is_free_of_rank(1)
    assert homology(sphere(2), 1).is_zero()
    assert homology(sphere(2), 3).is_zero()


def test_mapping_cone_of_identity_acyclic():
    for c in [sphere(0), disk(2), d_complex()]:
        assert is_acyclic(mapping_cone(identity_map(c)))


def test_cone_of_iota1_matches_cokernel():
    # iota_1: S^0 -> D^1 has cokernel S^1; the canonical projection
    # Mc(iota_1) -> S^1 is a quasi-isomorphism
    f = ChainMap(sphere(0), disk(1), {0: identity_matrix(1, 1)})
    cone = mapping_cone(f)
    assert homology(cone, 0).is_zero()
    assert homology(cone, 1).is_free_of_rank(1)
    assert homology(cone, 2).is_zero()
    coker = sphere(1)
    proj = {1: identity_matrix(1, 1)}
    q = cone_to_cokernel_projection(f, coker, proj)
    assert is_weak_equivalence(q)
    assert homology(coker, 1).is_free_of_rank(1)


def test_shift():
    assert shift(sphere(2), -1) == sphere(3)
    assert shift(sphere(2), 2) == sphere(0)
    assert shift(disk(3), 1) == FreeDComplex(1, {2: 1, 1: 1}, {2: [[-ONE]]})
    assert shift(shift(disk(3), 1), -1) == disk(3)
    with pytest.raises(ComplexError):
        shift(sphere(1), 2)


def test_weak_equivalence_examples():
    assert is_weak_equivalence(identity_map(d_complex()))
    # zeta_1: 0 -> D^1 is a generating trivial cofibration
    assert is_weak_equivalence(ChainMap(EMPTY, disk(1), {}))
    assert not is_weak_equivalence(zero_map(EMPTY, sphere(0)))


def test_chain_map_validation():
    c = d_complex()
    with pytest.raises(ComplexError):
        ChainMap(c, sphere(0), {1: [[ONE]]})  # wrong shape
    with pytest.raises(ComplexError):
        # does not commute: X1 vs identity around the square
        ChainMap(c, c, {0: [[ONE]], 1: [[X1]]})


def test_direct_sum_is_biproduct():
    c1, c2 = d_complex(), sphere(1)
    s = direct_sum(c1, c2)
    i1 = summand_inclusion(c1, c2, 0)
    i2 = summand_inclusion(c1, c2, 1)
    p1 = summand_projection(c1, c2, 0)
    p2 = summand_projection(c1, c2, 1)
    assert compose(i1, p1) == identity_map(c1)
    assert compose(i2, p2) == identity_map(c2)
    assert s.rank(1) == c1.rank(1) + c2.rank(1)


def test_connection_flatness_two_vars():
    zero = Polynomial.zero(2)
    x2 = Polynomial.x(2, 2)
    # d_1 acts by x2, d_2 by 0: curvature d_2(x2) = 1 != 0
    with pytest.raises(ValueError):
        ConnectionModule(2, 1, [[[x2]], [[zero]]])
    # constant commuting matrices are fine
    one = Polynomial.one(2)
    ConnectionModule(2, 1, [[[one]], [[one]]])


def test_tensor_with_trivial_connection_is_identity():
    c = d_complex()
    assert tensor_with_connection(c, ConnectionModule.trivial(1)) == c


def test_tensor_with_rank1_twist():
    c = d_complex()
    m = ConnectionModule(1, 1, [[[Polynomial.x(1, 1)]]])
    t = tensor_with_connection(c, m)
    assert t.diff(1)[0][0] == D1 - X1
    # d - x is a nonzerodivisor: H_1 = 0; H_0 is D/D(d-x)
    assert homology(t, 1).is_zero()
    h0 = homology(t, 0)
    assert h0.generators == [FreeModuleElement([ONE])]
    assert h0.relations == [FreeModuleElement([D1 - X1])]


def test_tensor_with_connection_rank2():
    # rank-2 connection: d.e1 = e2, d.e2 = 0 (nilpotent, flat since n = 1)
    zero, one = Polynomial.zero(1), Polynomial.one(1)
    m = ConnectionModule(1, 2, [[[zero, zero], [one, zero]]])
    c = d_complex()
    t = tensor_with_connection(c, m)
    assert t.rank(0) == t.rank(1) == 2
    assert is_acyclic(mapping_cone(identity_map(t)))  # d^2 = 0 held at build


def test_cone_tensor_compatibility_rank1():
    # Mc(f (x) id_M) identified with Mc(f) (x) M for a rank-1 twist
    rng = random.Random(4)
    m = ConnectionModule(1, 1, [[[Polynomial.x(1, 1)]]])
    f = ChainMap(sphere(0), disk(1), {0: identity_matrix(1, 1)})
    lhs = mapping_cone(
        ChainMap(
            tensor_with_connection(f.source, m),
            tensor_with_connection(f.target, m),
            {n: f.component(n) for n in f.maps},
        )
    )
    rhs = tensor_with_connection(mapping_cone(f), m)
    assert lhs.ranks == rhs.ranks
    for n in lhs.degrees():
        for k in range(0, lhs.top + 1):
            pass
    # same differentials after the canonical index identification
    assert lhs == rhs


def test_homology_relations_evaluate_into_image():
    c = FreeDComplex(1, {0: 1, 1: 2}, {1: [[D1], [X1 * D1]]})
    h = homology(c, 0)
    # every relation row evaluated on the generators lies in im d_1
    image = [FreeModuleElement([D1]), FreeModuleElement([X1 * D1])]
    for rel in h.relations:
        acc = FreeModuleElement.zero(1, 1)
        for coef, gen in zip(rel.coords, h.generators):
            acc = acc + gen.left_mul(coef)
        from dgdm.groebner import buchberger, member

        assert member(acc, buchberger(image))


def test_dsquare_rejected_on_mutated_random_complexes():
    # mutate one differential entry of a valid complex with adjacent
    # differentials; construction must reject exactly when d*d breaks
    from dgdm.randgen import random_weyl
    from dgdm.complexes import mat_mul, mat_is_zero

    rng = random.Random(17)
    base = direct_sum(direct_sum(disk(2), disk(1)), sphere(1))
    rejected = accepted = 0
    for _ in range(30):
        n = rng.choice([1, 2])
        mat = [list(row) for row in base.diff(n)]
        i, j = rng.randrange(len(mat)), rng.randrange(len(mat[0]))
        mat[i][j] = mat[i][j] + random_weyl(rng, 1, 2, 1)
        diffs = {k: base.diff(k) for k in base.differentials}
        diffs[n] = tuple(tuple(r) for r in mat)
        product = mat_mul(diffs[2], diffs[1], 1)
        if mat_is_zero(product):
            c = FreeDComplex(1, dict(base.ranks), diffs)  # must construct fine
            accepted += 1
        else:
            with pytest.raises(ComplexError) as exc:
                FreeDComplex(1, dict(base.ranks), diffs)
            assert "degree" in str(exc.value)  # names the offending degree
            rejected += 1
    assert rejected > 0 and accepted > 0


def test_weq_agrees_with_truncation_oracle_on_elementary_complexes():
    # exact weq decisions match the bounded k-linear oracle on small maps
    from dgdm.randgen import random_weq
    from dgdm.obasis import obasis_of_free, OBasisChainMap, is_bounded_weq

    rng = random.Random(23)
    checked = 0
    for _ in range(8):
        f = random_weq(rng, nvars=1, max_top=1)
        assert is_weak_equivalence(f)
        src_t = obasis_of_free(f.source, "S")
        tgt_t = obasis_of_free(f.target, "T")
        entries = {}
        for n in f.maps:
            mat = f.component(n)
            for s in range(f.source.rank(n)):
                es = []
                for t in range(f.target.rank(n)):
                    if not mat[s][t].is_zero():
                        es.append((("T", n, t), 0, mat[s][t]))
                if es:
                    entries[("S", n, s)] = es
        ob_f = OBasisChainMap(src_t, tgt_t, entries)
        assert is_bounded_weq(ob_f, 5).ok
        checked += 1
    assert checked == 8
    # and a non-weq fails both ways
    g = zero_map(EMPTY, sphere(0))
    assert not is_weak_equivalence(g)
    ob_g = OBasisChainMap(obasis_of_free(EMPTY), obasis_of_free(sphere(0)), {})
    assert is_bounded_weq(ob_g, 5).verdict == "fail"


def test_homology_empty_iff_acyclic_consistency():
    from dgdm.randgen import random_complex

    rng = random.Random(31)
    for _ in range(15):
        c = random_complex(rng)
        all_zero = all(homology(c, n).is_zero() for n in range(0, c.top + 1))
        assert all_zero == is_acyclic(c)


def test_weq_oracle_agreement_on_arbitrary_maps():
    # exact verdicts match the bounded oracle on arbitrary small chain maps,
    # including nullhomotopic maps f = du + ud (weqs only between acyclics)
    from dgdm.randgen import random_complex, random_weyl
    from dgdm.obasis import obasis_of_free, OBasisChainMap, is_bounded_weq
    from dgdm.complexes import mat_mul, mat_add, zero_matrix

    rng = random.Random(37)
    agree = 0
    for _ in range(12):
        x = random_complex(rng, max_top=2, max_cells=2, twists=1)
        y = random_complex(rng, max_top=2, max_cells=2, twists=1)
        u = {}
        for n in range(0, max(x.top, y.top) + 1):
            if x.rank(n) and y.rank(n + 1):
                u[n] = tuple(
                    tuple(random_weyl(rng, 1, 1, 1) for _ in range(y.rank(n + 1)))
                    for _ in range(x.rank(n))
                )
        maps = {}
        for n in range(0, max(x.top, y.top) + 1):
            if x.rank(n) == 0 or y.rank(n) == 0:
                continue
            total = zero_matrix(x.rank(n), y.rank(n), 1)
            if n in u and y.rank(n + 1):
                total = mat_add(total, mat_mul(u[n], y.diff(n + 1), 1))
            if (n - 1) in u and x.rank(n - 1):
                total = mat_add(total, mat_mul(x.diff(n), u[n - 1], 1))
            maps[n] = total
        f = ChainMap(x, y, maps)
        exact = is_weak_equivalence(f)
        entries = {}
        for n in f.maps:
            mat = f.component(n)
            for s in range(x.rank(n)):
                es = [(("T", n, t), 0, mat[s][t]) for t in range(y.rank(n)) if not mat[s][t].is_zero()]
                if es:
                    entries[("S", n, s)] = es
        ob_f = OBasisChainMap(obasis_of_free(x, "S"), obasis_of_free(y, "T"), entries)
        bounded = is_bounded_weq(ob_f, 5)
        assert exact == bounded.ok, (exact, bounded.verdict)
        agree += 1
    assert agree == 12
