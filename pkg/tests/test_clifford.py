"""Degree distributions of SL_n over length-two rings: the orbit assembly
against direct enumeration, with frozen small values."""

import pytest

from l2rep.clifford import (
    CountReport,
    clifford_distribution,
    compare_rings,
    direct_distribution,
    sl_order,
    sl_ring_generators,
)
from l2rep.chartable import MatrixGroup, character_degrees, closure
from l2rep.errors import BudgetExceededError, UsageError
from l2rep.fields import FiniteField
from l2rep.matrices import GroupSpec, Matrix, group_order
from l2rep.rings import DUAL, KINDS, WITT, LocalRing

F2 = FiniteField.get(2)
F3 = FiniteField.get(3)

GOLD_2_2 = {1: 4, 2: 2, 3: 4}
GOLD_2_3 = {1: 3, 2: 3, 3: 1, 4: 12, 6: 4, 12: 2}


def test_sl_order_formula():
    assert sl_order(2, 2) == 6
    assert sl_order(2, 3) == 24
    assert sl_order(3, 3) == 5616
    for n, q in ((2, 2), (2, 3), (3, 2)):
        F = FiniteField.get(q)
        assert sl_order(n, q) == group_order(GroupSpec(n, F, "SL"))


@pytest.mark.parametrize("kind", KINDS)
def test_sl_ring_generators_generate(kind):
    R = LocalRing.get(F2, kind)
    gens = sl_ring_generators(2, R)
    assert all(g.det() == R.one for g in gens)
    elems = closure(gens, Matrix.identity(R, 2), budget=100)
    assert len(elems) == 48
    with pytest.raises(UsageError):
        sl_ring_generators(1, R)


@pytest.mark.parametrize("kind", KINDS)
def test_direct_2_2(kind):
    report = direct_distribution(2, F2, kind)
    assert report.total.counts == GOLD_2_2
    assert report.method == "direct"
    report.check_invariants()


@pytest.mark.parametrize("kind", KINDS)
def test_clifford_2_2(kind):
    report = clifford_distribution(2, F2, kind)
    assert report.total.counts == GOLD_2_2
    assert report.total.total() == 10
    assert len(report.orbits) == 4
    sizes = sorted(orb.orbit_size for orb in report.orbits)
    assert sizes == [1, 1, 3, 3]
    report.check_invariants()


@pytest.mark.parametrize("kind", KINDS)
def test_clifford_2_3(kind):
    report = clifford_distribution(2, F3, kind)
    assert report.total.counts == GOLD_2_3
    # 24 * 3^3 elements in all
    assert report.total.dimension_square_sum() == 648
    report.check_invariants()


def test_direct_matches_clifford_2_3():
    direct = direct_distribution(2, F3, WITT, budget=1000)
    assert direct.total.counts == GOLD_2_3


def test_direct_budget():
    with pytest.raises(BudgetExceededError):
        direct_distribution(2, F3, WITT, budget=100)


def test_compare_rings_2_2():
    verdict = compare_rings(2, F2)
    assert verdict.equal
    assert verdict.labels == sorted(["clifford-witt2", "clifford-dual",
                                     "direct-witt2", "direct-dual"])
    assert len(verdict.reports) == 4
    for rep in verdict.reports.values():
        assert rep.total.counts == GOLD_2_2


def test_compare_rings_suppressed_direct():
    verdict = compare_rings(2, F2, direct_budget=0)
    assert verdict.equal
    assert sorted(verdict.reports) == ["clifford-dual", "clifford-witt2"]


def test_zero_orbit_contributes_residue_degrees():
    # the zero coset's stabiliser is all of SL_2(F_q); its contribution is
    # the classical degree multiset
    report = clifford_distribution(2, F3, WITT)
    zero_orbits = [orb for orb in report.orbits if orb.orbit_size == 1
                   and all(not e for row in orb.rep.rows for e in row)]
    assert len(zero_orbits) == 1
    assert zero_orbits[0].degrees.counts == {1: 3, 2: 3, 3: 1}
    assert zero_orbits[0].stabilizer_order == 24


def test_check_invariants_catches_wrong_total():
    from l2rep.chartable import DegreeDistribution
    bad = CountReport(2, F2, WITT, "direct",
                      DegreeDistribution({1: 4, 2: 2, 3: 3}, 48))
    with pytest.raises(AssertionError):
        bad.check_invariants()


def test_cache_round_trip(tmp_path, monkeypatch):
    from l2rep import clifford as clifford_mod
    from l2rep.cache import DiskCache
    cache = DiskCache(tmp_path / "c")
    first = clifford_distribution(2, F2, WITT, cache=cache)
    files = sorted(p.name for p in (tmp_path / "c").iterdir())
    assert len(files) == len(first.orbits)

    def boom(group):
        raise AssertionError("degree oracle should not run on a warm cache")

    # a warm cache must satisfy every stabiliser-degree lookup
    monkeypatch.setattr(clifford_mod, "character_degrees", boom)
    second = clifford_distribution(2, F2, WITT, cache=cache)
    assert first.total.counts == second.total.counts == GOLD_2_2
    assert sorted(p.name for p in (tmp_path / "c").iterdir()) == files
