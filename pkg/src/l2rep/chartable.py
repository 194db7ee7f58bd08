"""Finite matrix groups and their irreducible character degrees.

Degrees come from the class-algebra method: structure constants a_{jkl} of the
class sums are integers; over a prime ell = 1 mod exp(G) with ell > |G| the
central characters are the simultaneous eigenvectors of the commuting matrices
A_j = (a_{jkl}), found as eigenvectors of a random linear combination; then

    d_i^2 = |G| / sum_k w_i(c_k) w_i(c_k') / h_k   (mod ell)

recovers each squared degree exactly since d_i^2 <= |G| < ell.  The whole
computation runs twice with independent primes and the degree multisets must
agree; sum d_i^2 = |G| and #degrees = #classes are asserted.  Everything is
integer arithmetic mod ell (never table-backed fields; ell is far too big).
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from math import isqrt

from .errors import BudgetExceededError, UsageError
from .matrices import Matrix

_EIGEN_RETRY_CAP = 32


def closure(generators, identity: Matrix, budget: int | None = None):
    """All products of the generators; BFS, so word length grows outward."""
    gens = [g for g in generators]
    seen = {identity}
    frontier = [identity]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = x * g
                if y not in seen:
                    if budget is not None and len(seen) >= budget:
                        raise BudgetExceededError(
                            f"group closure exceeded {budget} elements",
                            required=len(seen) + 1, budget=budget)
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


class MatrixGroup:
    """A finite group of invertible matrices, given by its full element set."""

    def __init__(self, elements, generators=None, name: str = ""):
        elements = list(elements)
        if not elements:
            raise UsageError("a group needs at least the identity")
        ring = elements[0].ring
        n = elements[0].n
        self.identity = Matrix.identity(ring, n)
        if self.identity not in set(elements):
            raise UsageError("element set does not contain the identity")
        self.elements = tuple(elements)
        self.index = {g: i for i, g in enumerate(self.elements)}
        if len(self.index) != len(self.elements):
            raise UsageError("duplicate elements")
        self.generators = tuple(generators) if generators is not None else self.elements
        self.name = name
        self._classes = None
        self._class_of = None

    @classmethod
    def generated(cls, generators, identity: Matrix, budget: int | None = None,
                  name: str = "") -> "MatrixGroup":
        return cls(closure(generators, identity, budget), generators, name)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, g: Matrix) -> bool:
        return g in self.index

    def small_generators(self):
        """A short generating sequence; greedy, so at most log2 |G| long.

        Groups handed over as bare element lists carry every element as a
        generator, which would make class and commutativity sweeps quadratic;
        this trims them once and caches the result.
        """
        if len(self.generators) <= 24 or len(self.generators) < self.order:
            return self.generators
        rng = random.Random(1234)
        candidates = list(self.elements)
        rng.shuffle(candidates)
        gens = []
        covered = {self.identity}
        for g in candidates:
            if g in covered:
                continue
            gens.append(g)
            covered = closure(gens, self.identity)
            if len(covered) == self.order:
                break
        self.generators = tuple(gens)
        return self.generators

    def is_abelian(self) -> bool:
        gens = self.small_generators()
        return all(a * b == b * a for i, a in enumerate(gens) for b in gens[i + 1:])

    def conjugacy_classes(self):
        """List of classes (tuples of elements) and the element -> class map.

        Classes are found by conjugating representatives by the generators
        until closed; the class of the identity comes first, the rest follow
        element-enumeration order.
        """
        if self._classes is not None:
            return self._classes, self._class_of
        gens = [(g, g.inverse()) for g in self.small_generators()]
        class_of = {}
        classes = []
        for start in (self.identity,) + self.elements:
            if start in class_of:
                continue
            idx = len(classes)
            members = [start]
            class_of[start] = idx
            pos = 0
            while pos < len(members):
                x = members[pos]
                pos += 1
                for g, gi in gens:
                    y = g * x * gi
                    if y not in class_of:
                        class_of[y] = idx
                        members.append(y)
            classes.append(tuple(members))
        assert sum(len(c) for c in classes) == self.order
        self._classes, self._class_of = classes, class_of
        return classes, class_of

    def exponent(self) -> int:
        """lcm of element orders, computed on class representatives."""
        classes, _ = self.conjugacy_classes()
        from math import lcm
        e = 1
        for cls_members in classes:
            g = cls_members[0]
            o, acc = 1, g
            while acc != self.identity:
                acc = acc * g
                o += 1
            e = lcm(e, o)
        return e


@dataclass(frozen=True)
class DegreeDistribution:
    """Multiset of irreducible character degrees: degree -> multiplicity."""

    counts: dict
    group_order: int
    label: str = ""

    def total(self) -> int:
        return sum(self.counts.values())

    def dimension_square_sum(self) -> int:
        return sum(d * d * c for d, c in self.counts.items())

    def scaled(self, factor: int) -> "DegreeDistribution":
        """Distribution with every degree multiplied by factor."""
        out = {}
        for d, c in self.counts.items():
            out[d * factor] = out.get(d * factor, 0) + c
        return DegreeDistribution(out, self.group_order, self.label)

    def merged(self, other: "DegreeDistribution", order: int | None = None,
               label: str | None = None) -> "DegreeDistribution":
        out = dict(self.counts)
        for d, c in other.counts.items():
            out[d] = out.get(d, 0) + c
        return DegreeDistribution(
            out, self.group_order if order is None else order,
            self.label if label is None else label)

    def as_sorted_items(self):
        return sorted(self.counts.items())


def _is_probable_prime(n: int) -> bool:
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _dixon_primes(order: int, exponent: int, count: int = 2):
    """Primes ell = 1 mod exponent with ell > order (and > #classes bound)."""
    out = []
    ell = ((max(order, 2) // exponent) + 1) * exponent + 1
    while len(out) < count:
        if ell > order and _is_probable_prime(ell):
            out.append(ell)
        ell += exponent
    return out


def _structure_constants(group: MatrixGroup):
    """a[j][k][l] with c_j c_k = sum_l a_{jkl} c_l, plus class sizes and the
    inverse-class permutation."""
    classes, class_of = group.conjugacy_classes()
    c = len(classes)
    reps = [members[0] for members in classes]
    sizes = [len(members) for members in classes]
    inv_class = [class_of[r.inverse()] for r in reps]
    a = [[[0] * c for _ in range(c)] for _ in range(c)]
    inverses = [u.inverse() for u in group.elements]
    for l, z in enumerate(reps):
        for u, ui in zip(group.elements, inverses):
            j = class_of[u]
            k = class_of[ui * z]
            a[j][k][l] += 1
    return a, sizes, inv_class


def _mod_charpoly(m, ell):
    """Characteristic polynomial of m over Z/ell by the trace recurrence;
    valid because ell exceeds the matrix size, so the divisions exist."""
    c = len(m)
    coeffs = [0] * (c + 1)
    coeffs[c] = 1
    mk = [row[:] for row in m]
    ident = [[1 if i == j else 0 for j in range(c)] for i in range(c)]
    ck_list = []
    for k in range(1, c + 1):
        tr = sum(mk[i][i] for i in range(c)) % ell
        ck = tr * pow(k, -1, ell) % ell
        ck_list.append(ck)
        if k == c:
            break
        tmp = [[(mk[i][j] - (ck if i == j else 0)) % ell for j in range(c)] for i in range(c)]
        mk = _mod_matmul(m, tmp, ell)
    # p(x) = x^c - c_1 x^{c-1} - c_2 x^{c-2} - ... - c_c; coeffs[i] is on x^i
    for k, ck in enumerate(ck_list, start=1):
        coeffs[c - k] = (-ck) % ell
    return coeffs


def _mod_matmul(a, b, ell):
    c = len(a)
    bt = list(zip(*b))
    return [[sum(x * y for x, y in zip(row, col)) % ell for col in bt] for row in a]


def _mod_nullspace(m, ell):
    """Right-kernel basis of m over Z/ell."""
    c = len(m)
    rows = [row[:] for row in m]
    pivots = []
    r = 0
    for col in range(c):
        sel = None
        for i in range(r, len(rows)):
            if rows[i][col] % ell:
                sel = i
                break
        if sel is None:
            continue
        rows[r], rows[sel] = rows[sel], rows[r]
        inv = pow(rows[r][col], -1, ell)
        rows[r] = [x * inv % ell for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][col] % ell:
                f = rows[i][col]
                rows[i] = [(x - f * y) % ell for x, y in zip(rows[i], rows[r])]
        pivots.append(col)
        r += 1
    pivot_set = set(pivots)
    basis = []
    for j in range(c):
        if j in pivot_set:
            continue
        v = [0] * c
        v[j] = 1
        for i, pc in enumerate(pivots):
            v[pc] = (-rows[i][j]) % ell
        basis.append(v)
    return basis


def _degrees_mod_ell(group: MatrixGroup, a, sizes, inv_class, ell, seed: int):
    """Squared degrees via central-character eigenvectors over Z/ell."""
    c = len(sizes)
    order = group.order
    rng = random.Random(seed)
    # identity class index: the class containing the identity is first by
    # construction of conjugacy_classes
    id_class = 0
    for attempt in range(_EIGEN_RETRY_CAP):
        r = [rng.randrange(ell) for _ in range(c)]
        m = [[sum(r[j] * a[j][k][l] for j in range(c)) % ell for l in range(c)]
             for k in range(c)]
        cp = _mod_charpoly(m, ell)
        roots = []
        for lam in range(ell):
            acc = 0
            for co in reversed(cp):
                acc = (acc * lam + co) % ell
            if acc == 0:
                roots.append(lam)
        if len(roots) != c:
            continue
        vectors = []
        ok = True
        for lam in roots:
            shifted = [[(m[i][j] - (lam if i == j else 0)) % ell for j in range(c)]
                       for i in range(c)]
            ker = _mod_nullspace(shifted, ell)
            if len(ker) != 1 or ker[0][id_class] % ell == 0:
                ok = False
                break
            v = ker[0]
            scale = pow(v[id_class], -1, ell)
            vectors.append([x * scale % ell for x in v])
        if not ok:
            continue
        degrees2 = []
        for w in vectors:
            s = 0
            for k in range(c):
                s = (s + w[k] * w[inv_class[k]] * pow(sizes[k], -1, ell)) % ell
            if s == 0:
                ok = False
                break
            d2 = order * pow(s, -1, ell) % ell
            degrees2.append(d2)
        if not ok:
            continue
        return degrees2
    raise AssertionError(  # pragma: no cover - retries exhausted
        f"no separating class-algebra element found mod {ell}")


def character_degrees(
    group: MatrixGroup, seed: int = 2024, primes=None
) -> DegreeDistribution:
    """Irreducible character degrees of the group, as degree -> count.

    ``primes`` overrides the automatically chosen working primes; each must
    be a prime > |G| congruent to 1 mod exp(G).  Fewer than two entries are
    padded from the automatic sequence so the cross-check still runs.
    """
    order = group.order
    if group.is_abelian():
        return DegreeDistribution({1: order}, order, group.name)
    classes, _ = group.conjugacy_classes()
    c = len(classes)
    a, sizes, inv_class = _structure_constants(group)
    exp = group.exponent()
    if primes:
        chosen = []
        for ell in primes:
            ell = int(ell)
            if ell <= order or ell % exp != 1 or not _is_probable_prime(ell):
                raise UsageError(
                    f"working prime {ell} must be a prime > {order} with "
                    f"{ell} = 1 mod {exp}"
                )
            chosen.append(ell)
        for ell in _dixon_primes(order, exp, 2):
            if len(chosen) >= 2:
                break
            if ell not in chosen:
                chosen.append(ell)
    else:
        chosen = list(_dixon_primes(order, exp, 2))
    results = []
    for run, ell in enumerate(chosen):
        degrees2 = _degrees_mod_ell(group, a, sizes, inv_class, ell, seed + run)
        degs = []
        for d2 in degrees2:
            d = isqrt(d2)
            assert d * d == d2, f"non-square degree^2 = {d2} mod {ell}"
            degs.append(d)
        results.append(sorted(degs))
    assert results[0] == results[1], "degree multisets disagree between primes"
    degs = results[0]
    assert len(degs) == c
    assert sum(d * d for d in degs) == order
    counts = {}
    for d in degs:
        counts[d] = counts.get(d, 0) + 1
    return DegreeDistribution(counts, order, group.name)
