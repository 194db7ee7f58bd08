"""Irreducible dimension counts for SL_n over the length-two rings.

The congruence kernel S1 is abelian, its characters are the trace pairings
against cosets x + Z, and conjugation moves them the way it moves cosets.
Each coset orbit therefore contributes the irreducible degrees of its
stabiliser C_S(x+Z), scaled by the orbit size, provided the kernel
character extends to the full level-two stabiliser; the extension is
checked per orbit and is the only place the ring kind enters.  The
assembled distribution uses residue-level data alone, which is why the two
kinds agree.

A direct oracle enumerates the whole level-two group and runs the
class-matrix degree computation on it; feasible up to a few thousand
elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dataclass_field

from .cache import DiskCache, cache_key
from .characters import EXTENSION_BUDGET, verify_extension
from .chartable import DegreeDistribution, MatrixGroup, character_degrees
from .errors import BudgetExceededError, MathDiscrepancyError, UsageError
from .fields import FiniteField
from .matrices import Matrix
from .orbits import ORBIT_BUDGET, enumerate_orbits, stabilizer_subgroup
from .rings import DUAL, WITT, LocalRing

DIRECT_BUDGET = 5_000


def sl_order(n: int, q: int) -> int:
    """|SL_n(F_q)| = q^{n(n-1)/2} * prod_{k=2..n} (q^k - 1)."""
    out = q ** (n * (n - 1) // 2)
    for k in range(2, n + 1):
        out *= q ** k - 1
    return out


def sl_ring_generators(n: int, ring: LocalRing) -> list[Matrix]:
    """Transvections generating SL_n over a length-two local ring.

    Entries run over additive generators of the ring: Teichmuller lifts of
    an F_p-basis of F_q, which for Witt vectors already reach the maximal
    ideal through p * s(b) = pi * b^p; dual numbers need the pi-multiples
    as extra generators since everything has additive order p.
    """
    if n < 2:
        raise UsageError("SL_n generators need n >= 2")
    F = ring.field
    basis = [F.elem([1 if k == m else 0 for k in range(F.f)]) for m in range(F.f)]
    addgens = [ring.teichmuller(b) for b in basis]
    if ring.kind == DUAL:
        addgens += [ring.from_pair(0, b.i) for b in basis]
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                out.extend(Matrix.elementary(ring, n, i, j, a) for a in addgens)
    return out


@dataclass(frozen=True)
class OrbitContribution:
    rep: Matrix
    orbit_size: int
    stabilizer_order: int
    degrees: DegreeDistribution
    extension_mode: str

    @property
    def index(self) -> int:
        # the coset-stabiliser index in SL_n(F_q) is the orbit size
        return self.orbit_size


@dataclass(frozen=True)
class CountReport:
    n: int
    field: FiniteField
    kind: str | None
    method: str
    total: DegreeDistribution
    orbits: tuple = dataclass_field(default=())

    def check_invariants(self) -> None:
        q = self.field.q
        order = sl_order(self.n, q) * q ** (self.n * self.n - 1)
        assert self.total.dimension_square_sum() == order, \
            f"sum of squares {self.total.dimension_square_sum()} != |group| {order}"
        if self.orbits:
            res_order = sl_order(self.n, q)
            acc = 0
            for orb in self.orbits:
                assert orb.orbit_size * orb.stabilizer_order == res_order
                acc += orb.orbit_size ** 2 * orb.degrees.dimension_square_sum()
            assert acc == order


def _rep_payload(rep: Matrix) -> list:
    return [[e.i for e in row] for row in rep.rows]


def _stab_degrees(field, rep, elements, cache: DiskCache | None) -> DegreeDistribution:
    key = None
    if cache is not None:
        key = cache_key("stab-degrees", field.p, field.f, list(field.modulus),
                        rep.n, _rep_payload(rep))
        hit = cache.get(key)
        if hit is not None and hit.get("order") == len(elements):
            counts = {int(d): c for d, c in hit["counts"].items()}
            return DegreeDistribution(counts, len(elements))
    dist = character_degrees(MatrixGroup(elements))
    if cache is not None:
        cache.put(key, {"order": dist.group_order,
                        "counts": {str(d): c for d, c in dist.counts.items()}})
    return dist


def clifford_distribution(n: int, field: FiniteField, kind: str,
                          budget: int = ORBIT_BUDGET,
                          extension_budget: int = EXTENSION_BUDGET,
                          extension_rounds: int = 60,
                          cache: DiskCache | None = None) -> CountReport:
    """Assemble the level-two degree distribution from residue orbit data."""
    q = field.q
    table = enumerate_orbits(n, field, budget=budget)
    res_order = sl_order(n, q)
    contributions = []
    total = DegreeDistribution({}, res_order * q ** (n * n - 1),
                               f"SL_{n} level-two q={q} via orbits")
    for k, rep in enumerate(table.reps):
        stab = stabilizer_subgroup(table, rep, budget=max(res_order, 1))
        size = table.sizes[k]
        assert size * len(stab) == res_order
        mode = "exhaustive" if len(stab) * q ** (n * n - 1) <= extension_budget \
            else "sampled"
        if not verify_extension(rep, kind, mode=mode, budget=extension_budget,
                                rounds=extension_rounds):
            raise MathDiscrepancyError(
                "kernel character fails to extend to its stabiliser", witness=rep)
        degrees = _stab_degrees(field, rep, stab, cache)
        contributions.append(OrbitContribution(rep, size, len(stab), degrees, mode))
        total = total.merged(degrees.scaled(size))
    report = CountReport(n, field, kind, "clifford", total, tuple(contributions))
    report.check_invariants()
    return report


def direct_distribution(n: int, field: FiniteField, kind: str,
                        budget: int = DIRECT_BUDGET) -> CountReport:
    """Ground truth: enumerate SL_n over the ring and run the degree oracle."""
    q = field.q
    order = sl_order(n, q) * q ** (n * n - 1)
    if order > budget:
        raise BudgetExceededError(
            f"level-two group has {order} elements", required=order, budget=budget)
    R = LocalRing.get(field, kind)
    group = MatrixGroup.generated(sl_ring_generators(n, R), Matrix.identity(R, n),
                                  budget=order, name=f"SL_{n}({kind} q={q})")
    assert group.order == order, "generated group has unexpected order"
    dist = character_degrees(group)
    report = CountReport(n, field, kind, "direct", dist)
    report.check_invariants()
    return report


@dataclass(frozen=True)
class CompareVerdict:
    n: int
    field: FiniteField
    reports: dict
    equal: bool

    @property
    def labels(self):
        return sorted(self.reports)


def compare_rings(n: int, field: FiniteField, direct_budget: int = DIRECT_BUDGET,
                  cache: DiskCache | None = None, **kw) -> CompareVerdict:
    """Clifford counts for both kinds, direct counts when feasible; all equal?"""
    reports = {
        "clifford-witt2": clifford_distribution(n, field, WITT, cache=cache, **kw),
        "clifford-dual": clifford_distribution(n, field, DUAL, cache=cache, **kw),
    }
    order = sl_order(n, field.q) * field.q ** (n * n - 1)
    if order <= direct_budget:
        reports["direct-witt2"] = direct_distribution(n, field, WITT, budget=direct_budget)
        reports["direct-dual"] = direct_distribution(n, field, DUAL, budget=direct_budget)
    items = sorted(reports.items())
    first = items[0][1].total.counts
    equal = all(r.total.counts == first for _, r in items[1:])
    return CompareVerdict(n, field, reports, equal)
