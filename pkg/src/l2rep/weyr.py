"""Weyr canonical form over finite fields.

A basic Weyr block for eigenvalue a and partition (n_1 >= ... >= n_r) has
a*I_{n_i} on the block diagonal and the full-column-rank echelon matrix
(I_{n_{i+1}} over zero rows) on the block superdiagonal.  A Weyr matrix is a
direct sum of basic blocks with pairwise distinct eigenvalues.  The Weyr
partition at an eigenvalue is the conjugate of the Jordan partition; both are
computed here from kernel/rank sequences so each can act as the other's oracle.

Eigenvalues are found by exhaustive root search over extension fields
F_{q^m}, growing m until the characteristic polynomial splits; the conjugator
comes from a basis adapted to the kernel filtration of x - a, and its defining
property g*x*g^{-1} = W is asserted, not trusted.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import lcm

from .errors import BudgetExceededError, UsageError
from .fields import FieldElement, FiniteField, extend_field
from .linalg import nullspace, rank, rref
from .matrices import Matrix

SPLITTING_BUDGET = 10 ** 6  # largest |F_{q^m}| the eigenvalue search will build


def conjugate_partition(partition) -> tuple[int, ...]:
    """Transpose of a Young diagram; parts need not be sorted on input."""
    parts = sorted((p for p in partition if p), reverse=True)
    if not parts:
        return ()
    return tuple(sum(1 for p in parts if p > i) for i in range(parts[0]))


def partitions_of(n: int):
    """All weakly decreasing partitions of n."""
    if n == 0:
        yield ()
        return

    def rec(rem, maxpart):
        if rem == 0:
            yield ()
            return
        for first in range(min(rem, maxpart), 0, -1):
            for rest in rec(rem - first, first):
                yield (first,) + rest

    yield from rec(n, n)


@dataclass(frozen=True)
class WeyrStructure:
    """Eigenvalues with their Weyr partitions, over the splitting field."""

    field: FiniteField
    blocks: tuple  # of (eigenvalue: FieldElement, partition: tuple[int, ...])

    def __post_init__(self):
        seen = set()
        for a, part in self.blocks:
            if a.field is not self.field:
                raise UsageError("eigenvalue not in the stated field")
            if a.i in seen:
                raise UsageError("eigenvalues must be pairwise distinct")
            seen.add(a.i)
            if any(part[i] < part[i + 1] for i in range(len(part) - 1)) or \
                    any(p < 1 for p in part):
                raise UsageError(f"partition {part} is not weakly decreasing and positive")

    @property
    def n(self) -> int:
        return sum(sum(part) for _, part in self.blocks)

    def centralizer_dimension(self) -> int:
        """dim over the splitting field of {y : Wy = yW}: sum of squared parts."""
        return sum(p * p for _, part in self.blocks for p in part)


@dataclass(frozen=True)
class WeyrDecomposition:
    structure: WeyrStructure
    W: Matrix
    g: Matrix


def _eigen_sort_key(a: FieldElement):
    # lexicographic on the coefficient vector (constant term first)
    return a.coeffs


def splitting_eigenvalues(x: Matrix, budget: int = SPLITTING_BUDGET):
    """Smallest F_{q^m} over which char_poly(x) splits, with its roots.

    Returns (k, embedding of the base field into k, [(eigenvalue, multiplicity)])
    with eigenvalues sorted canonically and multiplicities summing to n.
    """
    F = x.ring
    if not isinstance(F, FiniteField):
        raise UsageError("eigenvalue search works over a field")
    cp = x.char_poly()
    n = x.n
    # the splitting degree is the lcm of the irreducible-factor degrees,
    # hence at most lcm(1..n)
    m_cap = lcm(*range(1, n + 1)) if n > 1 else 1
    for m in range(1, m_cap + 1):
        if F.q ** m > budget:
            raise BudgetExceededError(
                f"splitting search needs |F_{{{F.q}^{m}}}| = {F.q ** m} > budget {budget}",
                required=F.q ** m, budget=budget)
        K, emb = extend_field(F, m)
        roots = cp.map_coeffs(emb, K).roots_with_multiplicity()
        if sum(mult for _, mult in roots) == n:
            roots.sort(key=lambda rm: _eigen_sort_key(rm[0]))
            return K, emb, roots
    raise AssertionError("characteristic polynomial failed to split")  # pragma: no cover


def weyr_partition(x: Matrix, a: FieldElement) -> tuple[int, ...]:
    """(n_1, ..., n_r) with n_i = nullity (x-a)^i - nullity (x-a)^{i-1}."""
    F = x.ring
    if not isinstance(F, FiniteField) or a.field is not F:
        raise UsageError("weyr_partition needs a matrix and eigenvalue over one field")
    N = x - Matrix.scalar(F, x.n, a)
    parts = []
    prev = 0
    power = Matrix.identity(F, x.n)
    while True:
        power = power * N
        nullity = x.n - rank(power.rows, F)
        step = nullity - prev
        if step == 0:
            break
        parts.append(step)
        prev = nullity
    if not parts:
        raise UsageError(f"{a!r} is not an eigenvalue")
    assert all(parts[i] >= parts[i + 1] for i in range(len(parts) - 1))
    return tuple(parts)


def jordan_partition(x: Matrix, a: FieldElement) -> tuple[int, ...]:
    """Jordan block sizes at a, from second differences of rank (x-a)^i.

    Independent of :func:`weyr_partition`; the two must be conjugate.
    """
    F = x.ring
    N = x - Matrix.scalar(F, x.n, a)
    ranks = [x.n]
    power = Matrix.identity(F, x.n)
    for _ in range(x.n):
        power = power * N
        ranks.append(rank(power.rows, F))
        if ranks[-1] == ranks[-2]:
            break
    ranks.append(ranks[-1])
    out = []
    for s in range(1, len(ranks) - 1):
        count = ranks[s - 1] - 2 * ranks[s] + ranks[s + 1]
        out.extend([s] * count)
    if not out:
        raise UsageError(f"{a!r} is not an eigenvalue")
    return tuple(sorted(out, reverse=True))


def build_basic_weyr(a, partition, ring) -> Matrix:
    """The basic Weyr block W(a; n_1 >= ... >= n_r) over any coefficient ring."""
    partition = tuple(int(p) for p in partition)
    if not partition or any(p < 1 for p in partition) or \
            any(partition[i] < partition[i + 1] for i in range(len(partition) - 1)):
        raise UsageError(f"partition {partition} must be weakly decreasing and positive")
    a = ring.elem(a)
    n = sum(partition)
    z, o = ring.zero, ring.one
    rows = [[z] * n for _ in range(n)]
    for d in range(n):
        rows[d][d] = a
    off = 0
    for i in range(len(partition) - 1):
        ni, nj = partition[i], partition[i + 1]
        # identity of size n_{i+1} in the top rows of block (i, i+1)
        for t in range(nj):
            rows[off + t][off + ni + t] = o
        off += ni
    return Matrix(ring, rows)


def build_weyr(structure: WeyrStructure) -> Matrix:
    blocks = [build_basic_weyr(a, part, structure.field) for a, part in structure.blocks]
    return Matrix.block_diagonal(structure.field, blocks)


def _extend_to_complement(field, inside_rows, avoid_rows, candidates):
    """Vectors from candidates extending avoid_rows to a basis of the span of
    inside_rows + avoid_rows... precisely: greedily pick candidates independent
    of span(avoid_rows) while staying inside span(inside_rows)."""
    picked = []
    base = [list(v) for v in avoid_rows]
    r = rank(base, field) if base else 0
    for v in candidates:
        trial = base + [list(v)]
        r2 = rank(trial, field)
        if r2 > r:
            picked.append(tuple(v))
            base = trial
            r = r2
    return picked


def weyr_decompose(x: Matrix, budget: int = SPLITTING_BUDGET) -> WeyrDecomposition:
    """Weyr form W over the splitting field k and a g with g*x*g^{-1} = W.

    Blocks are ordered by the canonical eigenvalue order (lexicographic on
    coefficient vectors), making the output deterministic; the conjugation
    identity is asserted exactly before returning.
    """
    F = x.ring
    if not isinstance(F, FiniteField):
        raise UsageError("weyr_decompose expects a matrix over a field")
    K, emb, roots = splitting_eigenvalues(x, budget)
    xk = x.map_entries(emb, K) if K is not F else x
    n = x.n
    blocks = []
    columns = []  # basis vectors, column per column
    for a, mult in roots:
        N = xk - Matrix.scalar(K, n, a)
        # kernel filtration K_1 subset K_2 subset ...
        kernels = []
        power = Matrix.identity(K, n)
        while True:
            power = power * N
            ker = nullspace(power.rows, K, n)
            if kernels and len(ker) == len(kernels[-1]):
                break
            kernels.append(ker)
            if len(ker) == mult:
                break
        partition = tuple(len(kernels[i]) - (len(kernels[i - 1]) if i else 0)
                          for i in range(len(kernels)))
        blocks.append((a, partition))
        r = len(partition)
        # choose cluster bases top-down: U_r a complement of K_{r-1} in K_r,
        # then U_i starts with N*U_{i+1} and is completed to a complement
        clusters = [None] * r
        for i in range(r, 0, -1):
            prev_rows = kernels[i - 2] if i >= 2 else []
            forced = []
            if i < r:
                forced = [_apply(N, v) for v in clusters[i]]  # N maps K_{i+1}-cluster into K_i
            avoid = [list(v) for v in prev_rows] + [list(v) for v in forced]
            extra = _extend_to_complement(K, kernels[i - 1], avoid, kernels[i - 1])
            cluster = forced + extra
            assert len(cluster) == partition[i - 1]
            clusters[i - 1] = cluster
        for cluster in clusters:
            columns.extend(cluster)
    structure = WeyrStructure(K, tuple(blocks))
    W = build_weyr(structure)
    B = Matrix(K, list(zip(*columns)))  # columns are the adapted basis
    g = B.inverse()
    assert g * xk * B == W, "conjugator postcondition failed"
    return WeyrDecomposition(structure, W, g)


def _apply(m: Matrix, v):
    K = m.ring
    out = []
    for row in m.rows:
        acc = K.zero
        for c, e in zip(row, v):
            if e.i:
                acc = acc + c * e
        out.append(acc)
    return tuple(out)


def weyr_structure_of(x: Matrix, budget: int = SPLITTING_BUDGET) -> WeyrStructure:
    K, emb, roots = splitting_eigenvalues(x, budget)
    xk = x.map_entries(emb, K) if K is not x.ring else x
    return WeyrStructure(K, tuple((a, weyr_partition(xk, a)) for a, _ in roots))


def enumerate_weyr_forms(field: FiniteField, n: int):
    """All n x n Weyr matrices over the field, eigenvalues in canonical order.

    Yields each matrix exactly once: eigenvalue support runs over subsets in
    canonical order, multiplicities over compositions, partitions per block.
    """
    elems = sorted(field.elements, key=_eigen_sort_key)

    def assign(idx, remaining):
        if remaining == 0:
            yield ()
            return
        if idx == len(elems):
            return
        for mult in range(remaining + 1):
            for rest in assign(idx + 1, remaining - mult):
                yield ((elems[idx], mult),) + rest if mult else rest

    for support in assign(0, n):
        def with_partitions(k):
            if k == len(support):
                yield ()
                return
            a, mult = support[k]
            for part in partitions_of(mult):
                for rest in with_partitions(k + 1):
                    yield ((a, part),) + rest

        for blocks in with_partitions(0):
            yield build_weyr(WeyrStructure(field, blocks))


def is_weyr_form(x: Matrix) -> bool:
    """Structural test: a direct sum of basic Weyr blocks, one per eigenvalue.

    Maximal constant runs on the diagonal delimit candidate blocks (a basic
    block has a constant diagonal, and distinct blocks carry distinct values);
    each candidate must equal a rebuilt basic block for some partition, and
    everything outside the candidate squares must vanish.  Works over fields
    and length-two rings alike, so lifted Weyr matrices can be tested too.
    """
    n = x.n
    segments = []  # (start, size, eigenvalue)
    pos = 0
    while pos < n:
        a = x[pos, pos]
        run = 1
        while pos + run < n and x[pos + run, pos + run] == a:
            run += 1
        segments.append((pos, run, a))
        pos += run
    if len({a for _, _, a in segments}) != len(segments):
        return False
    z = x.ring.zero
    for i in range(n):
        for j in range(n):
            if any(s <= i < s + sz and s <= j < s + sz for s, sz, _ in segments):
                continue
            if x[i, j] != z:
                return False
    for start, size, a in segments:
        sub = Matrix(x.ring, [row[start:start + size]
                              for row in x.rows[start:start + size]])
        if not any(sub == build_basic_weyr(a, part, x.ring)
                   for part in partitions_of(size)):
            return False
    return True
