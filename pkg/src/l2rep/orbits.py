"""Conjugation orbits of SL_n(F_q) on M_n(F_q) modulo scalars.

Cosets x + Z are keyed by the canonical representative with zero (0, 0)
entry (subtract x[0,0] * I; scalar shifts only move the diagonal).  Orbits
come from a BFS over generator conjugation with parent pointers, so each
visited coset carries a transversal element t with t x t^-1 = u + scalar,
and Schreier's lemma turns the BFS tree into generators of the coset
stabiliser C_S(x + Z) for free.
"""

from __future__ import annotations

from dataclasses import dataclass

from .chartable import closure
from .errors import BudgetExceededError, UsageError
from .fields import FiniteField
from .matrices import GroupSpec, Matrix, group_order

ORBIT_BUDGET = 10_000_000
STABILIZER_BUDGET = 10_000


def sl_generators(n: int, field: FiniteField):
    """Elementary matrices e_ij(b) over an F_p-basis of the field.

    Row operations generate SL_n over any field; restricting the parameter
    to an F_p-basis keeps the set small while additivity of e_ij in the
    parameter recovers every e_ij(a).
    """
    if n < 2:
        raise UsageError("SL_n generators need n >= 2")
    basis = [field.elem([1 if k == m else 0 for k in range(field.f)])
             for m in range(field.f)]
    gens = []
    for i in range(n):
        for j in range(n):
            if i != j:
                for b in basis:
                    gens.append(Matrix.elementary(field, n, i, j, b))
    return gens


def canonical_coset_rep(x: Matrix) -> Matrix:
    """The representative of x + Z with zero (0, 0) entry."""
    a = x[0, 0]
    if not a:
        return x
    return x - Matrix.scalar(x.ring, x.n, a)


def _iter_canonical(field: FiniteField, n: int):
    """All canonical coset representatives, in mixed-radix entry order."""
    cells = n * n - 1
    elems = field.elements
    q = field.q
    idx = [0] * cells
    while True:
        flat = [field.zero] + [elems[i] for i in idx]
        yield Matrix(field, [flat[r * n:(r + 1) * n] for r in range(n)])
        pos = 0
        while pos < cells:
            idx[pos] += 1
            if idx[pos] < q:
                break
            idx[pos] = 0
            pos += 1
        if pos == cells:
            return


@dataclass
class OrbitTable:
    """S-orbit decomposition of M_n(F_q)/Z with Schreier stabiliser data."""

    field: FiniteField
    n: int
    reps: list
    sizes: list
    stab_gens: list
    transversals: list  # per orbit: {canonical rep: t with t*orbit_rep*t^-1 ~ rep}, or None

    @property
    def coset_count(self) -> int:
        return sum(self.sizes)

    def orbit_index(self, x: Matrix) -> int:
        key = canonical_coset_rep(x)
        for k, tr in enumerate(self.transversals):
            if tr is not None:
                if key in tr:
                    return k
            elif key == self.reps[k]:
                return k
        # transversal-free fallback: walk the orbit again
        gens = sl_generators(self.n, self.field)
        inv = [g.inverse() for g in gens]
        for k, rep in enumerate(self.reps):
            seen = {rep}
            frontier = [rep]
            while frontier:
                nxt = []
                for u in frontier:
                    for g, gi in zip(gens, inv):
                        v = canonical_coset_rep(g * u * gi)
                        if v not in seen:
                            seen.add(v)
                            nxt.append(v)
                frontier = nxt
            if key in seen:
                return k
        raise UsageError("matrix does not reduce to any enumerated coset")


def enumerate_orbits(n: int, field: FiniteField,
                     budget: int = ORBIT_BUDGET,
                     keep_transversals: bool = True) -> OrbitTable:
    """BFS orbit partition of all q^(n^2 - 1) cosets under SL_n conjugation."""
    total = field.q ** (n * n - 1)
    if total > budget:
        raise BudgetExceededError(
            f"coset space has {total} elements, budget {budget}",
            required=total, budget=budget)
    gens = sl_generators(n, field)
    inv = [g.inverse() for g in gens]
    identity = Matrix.identity(field, n)
    visited = set()
    reps, sizes, stab_gens_all, transversals = [], [], [], []
    for seed in _iter_canonical(field, n):
        if seed in visited:
            continue
        transversal = {seed: identity}
        frontier = [seed]
        schreier = []
        schreier_seen = {identity}
        while frontier:
            nxt = []
            for u in frontier:
                tu = transversal[u]
                for g, gi in zip(gens, inv):
                    v = canonical_coset_rep(g * u * gi)
                    tv = transversal.get(v)
                    if tv is None:
                        transversal[v] = g * tu
                        nxt.append(v)
                    else:
                        s = tv.inverse() * g * tu
                        if s not in schreier_seen:
                            schreier_seen.add(s)
                            schreier.append(s)
            frontier = nxt
        visited.update(transversal)
        reps.append(seed)
        sizes.append(len(transversal))
        stab_gens_all.append(schreier)
        transversals.append(transversal if keep_transversals else None)
    assert sum(sizes) == total
    order = group_order(GroupSpec(n, field, "SL"))
    for size in sizes:
        assert order % size == 0, "orbit size must divide the group order"
    return OrbitTable(field, n, reps, sizes, stab_gens_all, transversals)


def stabilizer_subgroup(table: OrbitTable, rep: Matrix,
                        budget: int = STABILIZER_BUDGET):
    """All of C_S(x + Z) for the orbit containing rep, from Schreier closure."""
    k = table.orbit_index(rep)
    order = group_order(GroupSpec(table.n, table.field, "SL"))
    predicted = order // table.sizes[k]
    if predicted > budget:
        raise BudgetExceededError(
            f"stabiliser has {predicted} elements, budget {budget}",
            required=predicted, budget=budget)
    identity = Matrix.identity(table.field, table.n)
    elems = closure(table.stab_gens[k], identity, budget=predicted)
    assert len(elems) == predicted, (len(elems), predicted)
    return list(elems)
