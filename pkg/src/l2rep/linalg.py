"""Linear algebra over a finite field: rref, rank, nullspace, solve, spans.

Vectors are tuples of FieldElement; matrices here are plain lists of rows and
may be rectangular (unlike :class:`l2rep.matrices.Matrix`, which is square and
ring-aware).  Everything the package needs over a length-two ring reduces to
field systems through the two-component split, so this module only ever sees
fields.
"""

from __future__ import annotations

from .errors import UsageError
from .fields import FiniteField


def rref(rows, field: FiniteField):
    """Reduced row echelon form.  Returns (new_rows, pivot_columns).

    Zero rows are dropped; new_rows[i] has its pivot 1 in column pivots[i].
    """
    m = [list(r) for r in rows]
    nrows = len(m)
    ncols = len(m[0]) if nrows else 0
    pivots = []
    r = 0
    for c in range(ncols):
        sel = None
        for i in range(r, nrows):
            if m[i][c]:
                sel = i
                break
        if sel is None:
            continue
        m[r], m[sel] = m[sel], m[r]
        inv = field._objs[field.inv_i(m[r][c].i)]
        if inv.i != 1:
            m[r] = [e * inv for e in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return [tuple(row) for row in m[:r]], tuple(pivots)


def rank(rows, field: FiniteField) -> int:
    return len(rref(rows, field)[1])


def nullspace(rows, field: FiniteField, ncols: int | None = None):
    """Basis of the right kernel {v : A v = 0}, as tuples of length ncols."""
    if ncols is None:
        if not rows:
            raise UsageError("nullspace of an empty system needs ncols")
        ncols = len(rows[0])
    red, pivots = rref(rows, field) if rows else ([], ())
    pivot_set = set(pivots)
    free = [c for c in range(ncols) if c not in pivot_set]
    basis = []
    z, o = field.zero, field.one
    for j in free:
        v = [z] * ncols
        v[j] = o
        for i, pc in enumerate(pivots):
            v[pc] = -red[i][j]
        basis.append(tuple(v))
    return basis


def solve(rows, rhs, field: FiniteField):
    """One solution of A x = b, or None if the system is inconsistent."""
    if not rows:
        return () if all(not b for b in rhs) else None
    ncols = len(rows[0])
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    red, pivots = rref(aug, field)
    z = field.zero
    x = [z] * ncols
    for i, pc in enumerate(pivots):
        if pc == ncols:
            return None  # pivot in the constants column
        x[pc] = red[i][ncols]
    return tuple(x)


def in_span(rows, v, field: FiniteField) -> bool:
    """Whether v lies in the row span of rows."""
    if not rows:
        return all(not e for e in v)
    return rank(rows, field) == rank(list(rows) + [list(v)], field)


def span_dimension(rows, field: FiniteField) -> int:
    return rank(rows, field) if rows else 0


def iter_coefficients(field: FiniteField, k: int):
    """All coefficient tuples in F_q^k, in lexicographic index order."""
    if k == 0:
        yield ()
        return
    idx = [0] * k
    q = field.q
    objs = field._objs
    while True:
        yield tuple(objs[i] for i in idx)
        pos = 0
        while pos < k:
            idx[pos] += 1
            if idx[pos] < q:
                break
            idx[pos] = 0
            pos += 1
        if pos == k:
            return


def iter_span(basis, field: FiniteField, length: int | None = None):
    """All linear combinations of the given vectors (tuples); no repetitions
    when the input is independent."""
    k = len(basis)
    if k == 0:
        if length is None:
            raise UsageError("iter_span of an empty basis needs the vector length")
        yield (field.zero,) * length
        return
    n = len(basis[0])
    z = field.zero
    for cs in iter_coefficients(field, k):
        acc = [z] * n
        for c, v in zip(cs, basis):
            if c.i:
                for t in range(n):
                    acc[t] = acc[t] + c * v[t]
        yield tuple(acc)
