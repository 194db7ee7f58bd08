"""Verification suite: every headline claim of the package, checked end to end.

Ten criteria, each independent of the implementation paths it checks
wherever that is possible at desk scale: brute-force enumerations, classical
cross-checks, and frozen structural facts.  ``run_all`` prints one pass/fail
line per criterion and is what the ``reproduce-all`` CLI subcommand calls;
the test suite asserts the same functions one by one.
"""

from __future__ import annotations

import itertools
import os
import random
import time
from dataclasses import dataclass

from .cache import DiskCache
from .centralizer import (centralizer_basis, check_reduction_surjectivity,
                          check_x_lambda_surjectivity, weyr_pattern)
from .characters import verify_extension
from .chartable import MatrixGroup, character_degrees
from .clifford import clifford_distribution, compare_rings, sl_order
from .errors import BudgetExceededError, MathDiscrepancyError
from .fields import FiniteField
from .matrices import Matrix
from .orbits import enumerate_orbits, sl_generators
from .rings import DUAL, KINDS, WITT, LocalRing
from .splitting import (dual_splitting_section, lift_order_search,
                        remark_witnesses, verify_power_formula)
from .stabilizer import coset_stabilizer
from .weyr import (WeyrStructure, build_basic_weyr, conjugate_partition,
                   enumerate_weyr_forms, jordan_partition, weyr_partition)

# (n, q) grid for the structural criteria
SMALL_GRID = ((2, 2), (2, 3), (2, 4), (3, 2))


@dataclass(frozen=True)
class CriterionResult:
    ident: int
    name: str
    passed: bool
    detail: str
    seconds: float

    @property
    def line(self) -> str:
        mark = "PASS" if self.passed else "FAIL"
        return (f"[{mark}] criterion {self.ident} ({self.name}): "
                f"{self.detail} [{self.seconds:.1f}s]")


def _field_for(q: int) -> FiniteField:
    for p in (2, 3, 5, 7):
        f = 0
        m = 1
        while m < q:
            m *= p
            f += 1
        if m == q:
            return FiniteField.get(p, f)
    raise ValueError(f"no prime power table entry for q = {q}")


# -- criterion 1: ring foundation -------------------------------------------


def _check_zp2_isomorphism(p: int) -> None:
    """The Witt pairs over F_p match Z/p^2 under (a0, a1) -> a0^p + p*a1."""
    F = FiniteField.get(p)
    R = LocalRing.get(F, WITT)

    def phi(e):
        c0, c1 = e.components()
        return (pow(c0.coeffs[0], p, p * p) + p * c1.coeffs[0]) % (p * p)

    images = {phi(e) for e in R.elements}
    assert images == set(range(p * p)), f"phi is not a bijection at p={p}"
    for x in R.elements:
        for y in R.elements:
            assert phi(x + y) == (phi(x) + phi(y)) % (p * p), (x, y, "add")
            assert phi(x * y) == (phi(x) * phi(y)) % (p * p), (x, y, "mul")


def _check_ring_axioms(R: LocalRing, sample: int | None = None,
                       seed: int = 11) -> str:
    elems = R.elements
    zero, one = R.zero, R.one
    for x in elems:
        assert x + zero == x and x * one == x
        assert x + (-x) == zero
        assert x.is_unit() == bool(x.reduce())
        if x.is_unit():
            assert x * x.inverse() == one
    if sample is None:
        triples = itertools.product(elems, elems, elems)
        label = "exhaustive"
    else:
        rng = random.Random(seed)
        triples = ((rng.choice(elems), rng.choice(elems), rng.choice(elems))
                   for _ in range(sample))
        label = f"{sample} sampled"
    for x, y, z in triples:
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x + y == y + x and x * y == y * x
    return label


def criterion_1(cache=None) -> str:
    for p in (2, 3, 5):
        _check_zp2_isomorphism(p)
    F4 = FiniteField.get(2, 2)
    F9 = FiniteField.get(3, 2)
    _check_ring_axioms(LocalRing.get(F4, WITT))
    _check_ring_axioms(LocalRing.get(F4, DUAL))
    label9 = _check_ring_axioms(LocalRing.get(F9, WITT), sample=20_000)
    return ("Z/p^2 isomorphism exact for p=2,3,5; axioms exhaustive over "
            f"both rings on F_4, {label9} over W2(F_9)")


# -- criterion 2: the 7x7 golden case ---------------------------------------


def criterion_2(cache=None) -> str:
    F = FiniteField.get(2)
    display = Matrix.from_rows(F, [
        [0, 0, 0, 1, 0, 0, 0],
        [0, 0, 0, 0, 1, 0, 0],
        [0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 1, 0],
        [0, 0, 0, 0, 0, 0, 1],
        [0, 0, 0, 0, 0, 0, 0],
        [0, 0, 0, 0, 0, 0, 0],
    ])
    assert display == build_basic_weyr(F.zero, (3, 2, 2), F)
    assert weyr_partition(display, F.zero) == (3, 2, 2)
    assert conjugate_partition((3, 2, 2)) == (3, 3, 1)
    assert jordan_partition(display, F.zero) == (3, 3, 1)
    alg = centralizer_basis(display)
    assert alg.field_dimension() == 17, alg.field_dimension()
    pat = weyr_pattern(WeyrStructure(F, ((F.zero, (3, 2, 2)),)))
    assert set(pat.lambda_partition) == {(2, 3), (1, 1)}
    assert pat.dimension() == 17
    return ("partition (3,2,2), conjugate (3,3,1), centraliser dimension 17, "
            "pattern {(2,3),(1,1)}; brute solve agrees")


# -- criterion 3: centraliser reduction is onto -----------------------------


def criterion_3(cache=None) -> str:
    checked = 0
    for n, q in SMALL_GRID:
        F = _field_for(q)
        for x in enumerate_weyr_forms(F, n):
            dim = centralizer_basis(x).field_dimension()
            for kind in KINDS:
                rep = check_reduction_surjectivity(x, kind)
                assert rep.surjective, (n, q, kind, x)
                # the kernel is cut out of pi * commutant by one det condition
                ratio, rem = divmod(rep.group_size_ring, rep.group_size_residue)
                assert rem == 0 and ratio in (q ** dim, q ** (dim - 1))
                checked += 1
    return f"reduction onto residue centraliser for {checked} (x, kind) cases"


# -- criterion 4: coset stabiliser decomposition ----------------------------


def criterion_4(cache=None) -> str:
    from .chartable import closure
    checked = 0
    for n, q in SMALL_GRID:
        F = _field_for(q)
        p = F.p
        S = closure(sl_generators(n, F), Matrix.identity(F, n))
        for x in enumerate_weyr_forms(F, n):
            brute = {g for g in S if (g * x * g.inverse() - x).is_scalar()}
            data = coset_stabilizer(x, kind=WITT)
            assert set(data.coset_elements) == brute, (n, q, x)
            index = len(brute) // len(data.centralizer)
            assert index in (1, p), (n, q, x, index)
            spanned = {(data.v ** k) * c for k in range(data.order_v)
                       for c in data.centralizer}
            assert spanned == brute, (n, q, x)
            checked += 1
    return f"<v>-decomposition matches brute force for {checked} Weyr forms"


# -- criterion 5: determinant-condition groups lift -------------------------


def _lambda_family(bound: int):
    """Multisets of (d, e) pairs with sum of d*e at most ``bound``."""
    pairs = [(d, e) for d in range(1, bound + 1)
             for e in range(1, bound // d + 1)]
    for size in range(1, bound + 1):
        for combo in itertools.combinations_with_replacement(pairs, size):
            if sum(d * e for d, e in combo) <= bound:
                yield combo


def criterion_5(cache=None) -> str:
    lams = list(_lambda_family(5))
    assert ((1, 2),) in lams  # the 1-dim exponent-2 case over F_2
    checked = 0
    for q in (2, 3):
        F = _field_for(q)
        for lam in lams:
            for kind in KINDS:
                assert check_x_lambda_surjectivity(lam, kind, F), (q, lam, kind)
                checked += 1
    return (f"every residue point lifts for {len(lams)} shapes x 2 fields "
            f"x 2 kinds ({checked} checks)")


# -- criterion 6: kernel characters extend ----------------------------------


def criterion_6(cache=None) -> str:
    exhaustive = sampled = 0
    for q in (2, 3):
        F = _field_for(q)
        table = enumerate_orbits(2, F)
        for rep in table.reps:
            for kind in KINDS:
                assert verify_extension(rep, kind, mode="exhaustive"), \
                    (q, kind, rep)
                exhaustive += 1
    for n, q in ((2, 4), (3, 3)):
        F = _field_for(q)
        table = enumerate_orbits(n, F)
        for rep in table.reps:
            for kind in KINDS:
                assert verify_extension(rep, kind, mode="sampled",
                                        rounds=60, seed=0), (n, q, kind, rep)
                sampled += 1
    return (f"extends for all reps: {exhaustive} exhaustive checks at n=2 "
            f"q=2,3; {sampled} sampled checks at (2,4), (3,3)")


# -- criterion 7: direct count equals the assembled count -------------------


def criterion_7(cache=None) -> str:
    for q, expect in ((2, 48), (3, 648)):
        F = _field_for(q)
        verdict = compare_rings(2, F, cache=cache)
        assert verdict.equal, (q, verdict.labels)
        assert sorted(verdict.reports) == [
            "clifford-dual", "clifford-witt2", "direct-dual", "direct-witt2"]
        for label, report in verdict.reports.items():
            total = report.total.dimension_square_sum()
            assert total == expect, (q, label, total)
    detail = "four equal distributions at q=2 (sum 48) and q=3 (sum 648)"
    if os.environ.get("L2REP_ACCEPTANCE_OPTIONAL"):
        F4 = _field_for(4)
        verdict = compare_rings(2, F4, cache=cache)
        assert verdict.equal, verdict.labels
        assert "direct-witt2" in verdict.reports, "direct run was skipped"
        for label, report in verdict.reports.items():
            assert report.total.dimension_square_sum() == 3840, label
        detail += "; optional (2,4) direct comparison equal (sum 3840)"
    else:
        verdict = compare_rings(2, _field_for(4), direct_budget=0, cache=cache)
        assert verdict.equal, verdict.labels
        detail += ("; (2,4) assembled counts equal across kinds "
                   "(direct run gated off; set L2REP_ACCEPTANCE_OPTIONAL=1)")
    return detail


# -- criterion 8: the q = 3, n = 3 count ------------------------------------


def criterion_8(cache=None) -> str:
    F = FiniteField.get(3)
    expected = 5616 * 3 ** 8
    assert expected == 36_846_576 and sl_order(3, 3) == 5616
    frozen = {1: 1, 12: 1, 13: 1, 16: 4, 26: 3, 27: 1, 39: 1, 104: 2,
              117: 4, 144: 6, 208: 4, 234: 6, 312: 4, 351: 4, 432: 34,
              468: 5, 624: 9, 702: 24, 936: 12, 1404: 1}
    counts = {}
    for kind in KINDS:
        report = clifford_distribution(3, F, kind, cache=cache)
        report.check_invariants()
        total = report.total.dimension_square_sum()
        assert total == expected, (kind, total)
        counts[kind] = report.total.counts
        zero = [orb for orb in report.orbits if orb.orbit_size == 1
                and all(not e for row in orb.rep.rows for e in row)]
        assert len(zero) == 1
        # the zero coset contributes the classical SL_3(F_3) degrees
        assert zero[0].degrees.counts == {1: 1, 12: 1, 13: 1, 16: 4, 26: 3,
                                          27: 1, 39: 1}
    assert counts[WITT] == counts[DUAL] == frozen
    table = enumerate_orbits(3, F)
    for rep in table.reps:
        for kind in KINDS:
            assert verify_extension(rep, kind, mode="sampled", rounds=60,
                                    seed=0), (kind, rep)
    irreps = sum(counts[WITT].values())
    return (f"both kinds: invariants pass, square sum 36846576, equal "
            f"distributions ({irreps} irreducibles); sampled extension "
            f"checks pass for all {len(table.reps)} orbits")


# -- criterion 9: order-p lifts of a transvection ---------------------------


def criterion_9(cache=None) -> str:
    none_at = []
    for q in (5, 2):
        res = lift_order_search(2, _field_for(q), WITT)
        assert res.mode == "exhaustive", (q, res.mode)
        assert res.found is None, (q, res.found)
        none_at.append(f"(2,{q})")
    rem = remark_witnesses()
    assert rem.ok_32 and rem.ok_33, (rem.ok_32, rem.ok_33)
    assert rem.no_lift_22 and rem.shape_ok_22
    for q in (2, 3):
        assert dual_splitting_section(2, _field_for(q)), q
    assert verify_power_formula(2, _field_for(5), exhaustive=True)
    return ("no order-p lift at " + ", ".join(none_at) + " (exhaustive); "
            "explicit (3,2) and (3,3) witnesses verify; dual section "
            "exhaustive at (2,2), (2,3); power formula exhaustive at (2,5)")


# -- criterion 10: the degree oracle against classical answers --------------


def criterion_10(cache=None) -> str:
    results = {}
    for q, expect in ((2, {1: 2, 2: 1}), (3, {1: 3, 2: 3, 3: 1})):
        F = _field_for(q)
        group = MatrixGroup.generated(sl_generators(2, F),
                                      Matrix.identity(F, 2),
                                      name=f"SL_2(F_{q})")
        dist = character_degrees(group)
        assert dist.counts == expect, (q, dist.counts)
        assert dist.total() == len(group.conjugacy_classes()[0])
        results[q] = dist.counts
    return ("SL_2(F_2) degrees {1:2, 2:1} and SL_2(F_3) degrees "
            "{1:3, 2:3, 3:1}; class count = irreducible count; the "
            "two-prime agreement assert runs inside every invocation")


CRITERIA = (
    (1, "ring-foundation", criterion_1),
    (2, "weyr-7x7-golden", criterion_2),
    (3, "reduction-surjectivity", criterion_3),
    (4, "coset-stabilizer-decomposition", criterion_4),
    (5, "determinant-condition-lifting", criterion_5),
    (6, "character-extension", criterion_6),
    (7, "small-count-comparison", criterion_7),
    (8, "count-at-3-3", criterion_8),
    (9, "transvection-lift-search", criterion_9),
    (10, "degree-oracle-health", criterion_10),
)


def run_criterion(ident: int, cache_dir: str | None = None) -> CriterionResult:
    for cid, name, fn in CRITERIA:
        if cid == ident:
            break
    else:
        raise ValueError(f"no criterion {ident}")
    cache = DiskCache(cache_dir) if cache_dir else None
    start = time.perf_counter()
    try:
        detail = fn(cache=cache)
        passed = True
    except (AssertionError, MathDiscrepancyError, BudgetExceededError) as exc:
        detail = f"{type(exc).__name__}: {exc}"
        passed = False
    return CriterionResult(ident, name, passed, detail,
                           time.perf_counter() - start)


def run_all(cache_dir: str | None = None, log=None, only=None):
    results = []
    for cid, _name, _fn in CRITERIA:
        if only is not None and cid not in only:
            continue
        result = run_criterion(cid, cache_dir=cache_dir)
        if log is not None:
            log(result.line)
        results.append(result)
    if log is not None:
        passed = sum(r.passed for r in results)
        log(f"{passed}/{len(results)} criteria passed")
    return results
