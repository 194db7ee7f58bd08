"""Conjugation orbits on scalar cosets, with Schreier stabiliser generators."""

import itertools

import pytest

from l2rep.errors import BudgetExceededError
from l2rep.fields import FiniteField
from l2rep.matrices import GroupSpec, Matrix, group_order
from l2rep.orbits import (
    canonical_coset_rep,
    enumerate_orbits,
    sl_generators,
    stabilizer_subgroup,
)
from l2rep.stabilizer import coset_stabilizer

F2 = FiniteField.get(2)
F3 = FiniteField.get(3)


def fmat(F, rows):
    return Matrix(F, [[F.elem(c) for c in r] for r in rows])


def test_sl_generators_generate():
    from l2rep.chartable import closure
    for F, n, order in ((F2, 2, 6), (F3, 2, 24)):
        gens = sl_generators(n, F)
        assert all(g.det() == F.one for g in gens)
        elems = closure(gens, Matrix.identity(F, n), budget=10_000)
        assert len(elems) == order == group_order(GroupSpec(n, F, "SL"))


def test_sl_generators_use_prime_basis():
    F4 = FiniteField.get(2, 2)
    gens = sl_generators(2, F4)
    # 2 positions x 2 basis elements
    assert len(gens) == 4


def test_canonical_coset_rep():
    x = fmat(F3, [[2, 1], [0, 1]])
    c = canonical_coset_rep(x)
    assert c[0, 0] == F3.zero
    assert c == fmat(F3, [[0, 1], [0, 2]])
    assert canonical_coset_rep(c) == c
    # all scalar shifts agree
    for a in F3.elements:
        assert canonical_coset_rep(x + Matrix.scalar(F3, 2, a)) == c


def test_orbit_table_2_2_golden():
    table = enumerate_orbits(2, F2)
    assert table.coset_count == 8
    assert sorted(table.sizes) == [1, 3, 3, 1] or sorted(table.sizes) == [1, 1, 3, 3]
    order = group_order(GroupSpec(2, F2, "SL"))
    stab_orders = sorted(order // s for s in table.sizes)
    assert stab_orders == [2, 2, 6, 6]


def test_orbit_table_2_3_invariants():
    table = enumerate_orbits(2, F3)
    assert table.coset_count == 27
    order = group_order(GroupSpec(2, F3, "SL"))
    for size in table.sizes:
        assert order % size == 0
    # orbits partition the cosets
    assert sum(table.sizes) == 27


def test_orbits_partition_against_brute_force():
    # independent check on (2,2): group the 8 canonical cosets by brute
    # conjugation sweep over all of SL_2(F_2)
    sl = [m for m in (Matrix(F2, [list(e[:2]), list(e[2:])])
                      for e in itertools.product(F2.elements, repeat=4))
          if m.det() == F2.one]
    assert len(sl) == 6
    cosets = set()
    for e in itertools.product(F2.elements, repeat=3):
        cosets.add(fmat(F2, [[0, e[0].i], [e[1].i, e[2].i]]))
    brute_orbits = set()
    for x in cosets:
        orbit = frozenset(canonical_coset_rep(g * x * g.inverse()) for g in sl)
        brute_orbits.add(orbit)
    table = enumerate_orbits(2, F2)
    got = {frozenset(tr.keys()) for tr in table.transversals}
    assert got == brute_orbits


def test_orbit_index_and_transversals():
    table = enumerate_orbits(2, F3)
    for k, rep in enumerate(table.reps):
        assert table.orbit_index(rep) == k
        # a conjugate lands in the same orbit
        g = fmat(F3, [[1, 1], [0, 1]])
        assert table.orbit_index(g * rep * g.inverse()) == k
        # transversal entries conjugate the rep onto their key
        for key, t in table.transversals[k].items():
            assert canonical_coset_rep(t * rep * t.inverse()) == key


def test_orbit_index_without_transversals():
    table = enumerate_orbits(2, F2, keep_transversals=False)
    assert all(tr is None for tr in table.transversals)
    for k, rep in enumerate(table.reps):
        assert table.orbit_index(rep) == k
    g = fmat(F2, [[1, 1], [0, 1]])
    x = fmat(F2, [[0, 1], [0, 0]])
    assert table.orbit_index(g * x * g.inverse()) == table.orbit_index(x)


def test_stabilizer_subgroup_matches_direct_computation():
    table = enumerate_orbits(2, F3)
    for rep in table.reps:
        stab = stabilizer_subgroup(table, rep)
        direct = coset_stabilizer(rep)
        assert set(stab) == set(direct.coset_elements)
        # Schreier generators really stabilise the coset
        for g in stab:
            assert (g * rep * g.inverse() - rep).is_scalar()


def test_budget_errors():
    with pytest.raises(BudgetExceededError):
        enumerate_orbits(2, F3, budget=10)
    table = enumerate_orbits(2, F2)
    zero = Matrix.zero(F2, 2)
    with pytest.raises(BudgetExceededError):
        stabilizer_subgroup(table, zero, budget=2)
