"""Graded modules and parity-homogeneous maps: composition, shift, dual, tensor."""

import random

import pytest

from mfcert import (EVEN, ODD, ParityMap, PolyRing, ShapeError, SuperModule,
                    compose, direct_sum, dual, parity_unit, rationals, shift,
                    tensor)

RING = PolyRing(rationals(), ("x", "y"))


def modmake(e, o):
    return SuperModule.free(RING, e, o)


def koszul_map():
    v = modmake(1, 1)
    z = RING.zero
    return v, ParityMap(v, v, ODD, [[z, RING.parse("-y")], [RING.parse("x"), z]])


def random_map(rng, source, target, parity):
    entries = []
    for i in range(target.total_rank):
        row = []
        for j in range(source.total_rank):
            if (target.parity(i) - source.parity(j)) % 2 == parity and rng.random() < 0.7:
                row.append(RING.monomial((rng.randint(0, 1), rng.randint(0, 1)),
                                         rng.choice([-2, -1, 1, 2])))
            else:
                row.append(RING.zero)
        entries.append(row)
    return ParityMap(source, target, parity, entries)


def test_identity_composition():
    v, d = koszul_map()
    ident = ParityMap.identity(v)
    assert compose(ident, d) == d
    assert compose(d, ident) == d


def test_odd_compose_odd_is_even():
    v, d = koszul_map()
    assert compose(d, d).parity == EVEN


def test_koszul_square_has_both_blocks_minus_xy():
    v, d = koszul_map()
    sq = compose(d, d)
    minus_xy = RING.parse("-x*y")
    assert sq.entries[0][0] == minus_xy
    assert sq.entries[1][1] == minus_xy
    assert sq.entries[0][1].is_zero() and sq.entries[1][0].is_zero()


def test_compose_associativity_random():
    rng = random.Random(7)
    for _ in range(10):
        a, b, c, d = (modmake(rng.randint(0, 2), rng.randint(0, 2))
                      for _ in range(4))
        f = random_map(rng, c, d, rng.randint(0, 1))
        g = random_map(rng, b, c, rng.randint(0, 1))
        h = random_map(rng, a, b, rng.randint(0, 1))
        assert compose(compose(f, g), h) == compose(f, compose(g, h))


def test_shape_mismatch():
    v, d = koszul_map()
    w = modmake(2, 1)
    f = ParityMap.zero(w, w, EVEN)
    with pytest.raises(ShapeError):
        compose(d, f)


def test_parity_pattern_enforced():
    v = modmake(1, 1)
    one = RING.one
    with pytest.raises(ShapeError):
        ParityMap(v, v, ODD, [[one, RING.zero], [RING.zero, RING.zero]])


def test_shift_involution_on_modules():
    m = modmake(2, 3)
    assert shift(shift(m)) == m
    assert shift(m).even_rank == 3 and shift(m).odd_rank == 2


def test_shift_on_maps_preserves_action():
    v, d = koszul_map()
    shifted = shift(d)
    assert shift(shifted) == d
    assert shifted.parity == ODD
    # the underlying matrix is a reindexing: entry (odd0 <- even0) moves
    assert shifted.entries[0][1] == RING.parse("x")
    assert shifted.entries[1][0] == RING.parse("-y")


def test_dual_involution():
    rng = random.Random(3)
    m, n = modmake(2, 1), modmake(1, 2)
    f = random_map(rng, m, n, ODD)
    assert dual(dual(f)) == f
    assert dual(m) == m
    assert dual(f).entries[0][0] == f.entries[0][0]


def test_tensor_koszul_sign_on_one_dimensional_pieces():
    # f odd: (0|1) -> (1|0), g odd: (1|0) -> (0|1); on the odd source vector
    # the rule (f x g)(v x w) = (-1)^{|g||v|} f(v) x g(w) contributes -1
    a = modmake(0, 1)
    b = modmake(1, 0)
    one = RING.one
    f = ParityMap(a, b, ODD, [[one]])
    g = ParityMap(b, a, ODD, [[one]])
    fg = tensor(f, g)
    assert fg.parity == EVEN
    assert fg.source.total_rank == 1 and fg.target.total_rank == 1
    assert fg.entries[0][0] == -one


def test_tensor_composition_sign_rule():
    rng = random.Random(11)
    for _ in range(8):
        a, b, c = (modmake(rng.randint(1, 2), rng.randint(1, 2)) for _ in range(3))
        a2, b2, c2 = (modmake(rng.randint(1, 2), rng.randint(1, 2)) for _ in range(3))
        pf, pg, pf2, pg2 = (rng.randint(0, 1) for _ in range(4))
        f = random_map(rng, b, c, pf)
        g = random_map(rng, b2, c2, pg)
        f2 = random_map(rng, a, b, pf2)
        g2 = random_map(rng, a2, b2, pg2)
        lhs = compose(tensor(f, g), tensor(f2, g2))
        rhs = tensor(compose(f, f2), compose(g, g2))
        if (pg * pf2) % 2:
            rhs = -rhs
        assert lhs == rhs


def test_direct_sum_of_maps():
    v, d = koszul_map()
    s = direct_sum(d, d)
    assert s.source.total_rank == 4
    assert compose(s, s).entries[0][0] == RING.parse("-x*y")


def test_parity_unit_roundtrip():
    m = modmake(2, 1)
    u = parity_unit(m)                 # shift(m) -> m
    u_rev = parity_unit(shift(m))      # m -> shift(m)
    assert compose(u, u_rev) == ParityMap.identity(m)
    assert compose(u_rev, u) == ParityMap.identity(shift(m))
    assert u.parity == ODD
