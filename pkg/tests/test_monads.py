"""Formal monad towers: structure maps and laws on random probes."""

import random
from fractions import Fraction

from dgdm.complexes import disk, sphere
from dgdm.dga import Generator, SullivanAlgebra
from dgdm.monads import (
    FormalSym,
    FreeBase,
    TensorWithA,
    check_sym_monad_laws,
    check_tensor_monad_laws,
    sym_eta,
    sym_mu,
    tensor_eta,
    tensor_mu,
)


def random_probes(rng, cores, levels=3, count=8):
    probes = []
    for _ in range(count):
        elem = {}
        for _ in range(rng.randint(1, levels)):
            elem[((rng.randint(0, 2),), rng.choice(cores))] = Fraction(rng.randint(-2, 2))
        elem = {k: v for k, v in elem.items() if v}
        if elem:
            probes.append(elem)
    return probes


def test_sym_monad_laws_small():
    rng = random.Random(0)
    c = disk(1)
    s3 = FormalSym(FormalSym(FormalSym(FreeBase(c))))
    cores = [core for d in range(0, 4) for core in s3.cores(d, 4)]
    assert check_sym_monad_laws(c, random_probes(rng, cores)) == []


def test_sym_monad_laws_with_sphere():
    rng = random.Random(1)
    c = sphere(1)
    s3 = FormalSym(FormalSym(FormalSym(FreeBase(c))))
    cores = [core for d in range(0, 4) for core in s3.cores(d, 4)]
    assert check_sym_monad_laws(c, random_probes(rng, cores)) == []


def test_tensor_monad_laws():
    rng = random.Random(2)
    c = disk(1)
    a = SullivanAlgebra(1, [Generator("g", 1), Generator("u", 2)])
    u3 = TensorWithA(a, TensorWithA(a, TensorWithA(a, FreeBase(c))))
    cores = [core for d in range(0, 4) for core in u3.cores(d, 4)]
    assert check_tensor_monad_laws(a, c, random_probes(rng, cores)) == []


def test_unit_triangle_concrete():
    # O case: U = Id-like, laws trivially exact on a concrete element
    a = SullivanAlgebra.oh(1)
    base = FreeBase(sphere(0))
    u1 = TensorWithA(a, base)
    u2 = TensorWithA(a, u1)
    w = {((1,), ((), (0, 0, (2,)))): Fraction(3)}
    assert tensor_mu(u2, tensor_eta(w)) == w


def test_sym_differential_squares_to_zero():
    s2 = FormalSym(FormalSym(FreeBase(disk(2))))
    for deg in range(0, 5):
        for key in list(s2.basis_keys(deg, 4))[:30]:
            acc = {}
            for k2, c in s2.diff_key(key).items():
                for k3, c3 in s2.diff_key(k2).items():
                    acc[k3] = acc.get(k3, Fraction(0)) + c * c3
            assert not any(acc.values()), key
