"""Matrices over a finite field or a length-two local ring.

A :class:`Matrix` is an immutable, hashable tuple-of-tuples of interned field
or ring elements, carrying a reference to its coefficient structure (a
FiniteField or LocalRing).  Determinants and inverses use Gaussian elimination
with unit pivots; over a local ring an invertible matrix always has a unit
pivot available in each column (otherwise every term of the determinant would
lie in the maximal ideal), and a cofactor fallback covers the singular cases
where no unit pivot exists.

Also here: elementary matrices, entrywise Teichmüller lift and reduction, the
characteristic polynomial by cofactor expansion with polynomial entries,
group orders of GL_n/SL_n over all four coefficient structures, det-1 lifts of
reduced matrices, and the logarithm/exponential between the principal
congruence kernel and matrices over the residue field.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import UsageError
from .fields import FieldElement, FiniteField
from .polys import Poly
from .rings import DUAL, WITT, LocalRing, RingElement


class Matrix:
    __slots__ = ("ring", "n", "rows", "_hash")

    def __init__(self, ring, rows):
        self.ring = ring
        self.rows = tuple(tuple(r) for r in rows)
        self.n = len(self.rows)
        for r in self.rows:
            if len(r) != self.n:
                raise UsageError("matrix must be square")
        self._hash = None

    # -- constructors --------------------------------------------------------

    @classmethod
    def from_rows(cls, ring, rows) -> "Matrix":
        conv = ring.elem
        return cls(ring, [[conv(e) for e in r] for r in rows])

    @classmethod
    def zero(cls, ring, n: int) -> "Matrix":
        z = ring.zero
        return cls(ring, [[z] * n for _ in range(n)])

    @classmethod
    def identity(cls, ring, n: int) -> "Matrix":
        z, o = ring.zero, ring.one
        return cls(ring, [[o if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def scalar(cls, ring, n: int, a) -> "Matrix":
        a = ring.elem(a)
        z = ring.zero
        return cls(ring, [[a if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def diagonal(cls, ring, entries) -> "Matrix":
        entries = [ring.elem(e) for e in entries]
        n = len(entries)
        z = ring.zero
        return cls(ring, [[entries[i] if i == j else z for j in range(n)] for i in range(n)])

    @classmethod
    def basis_matrix(cls, ring, n: int, i: int, j: int, a=None) -> "Matrix":
        """a * E_ij (defaults to E_ij)."""
        a = ring.one if a is None else ring.elem(a)
        z = ring.zero
        return cls(ring, [[a if (r == i and c == j) else z for c in range(n)] for r in range(n)])

    @classmethod
    def elementary(cls, ring, n: int, i: int, j: int, a) -> "Matrix":
        """e_ij(a) = I + a*E_ij, i != j."""
        if i == j:
            raise UsageError("elementary matrix needs i != j")
        a = ring.elem(a)
        z, o = ring.zero, ring.one
        rows = [[o if r == c else z for c in range(n)] for r in range(n)]
        rows[i][j] = a
        return cls(ring, rows)

    @classmethod
    def block_diagonal(cls, ring, blocks) -> "Matrix":
        n = sum(b.n for b in blocks)
        z = ring.zero
        rows = [[z] * n for _ in range(n)]
        off = 0
        for b in blocks:
            for i in range(b.n):
                rows[off + i][off:off + b.n] = b.rows[i]
            off += b.n
        return cls(ring, rows)

    # -- basics --------------------------------------------------------------

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def __add__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.ring, [[a + b for a, b in zip(ra, rb)]
                                  for ra, rb in zip(self.rows, other.rows)])

    def __sub__(self, other: "Matrix") -> "Matrix":
        return Matrix(self.ring, [[a - b for a, b in zip(ra, rb)]
                                  for ra, rb in zip(self.rows, other.rows)])

    def __neg__(self) -> "Matrix":
        return Matrix(self.ring, [[-a for a in r] for r in self.rows])

    def __mul__(self, other):
        if not isinstance(other, Matrix):
            a = self.ring.elem(other)
            return Matrix(self.ring, [[e * a for e in r] for r in self.rows])
        n = self.n
        bcols = tuple(zip(*other.rows))
        out = []
        for ra in self.rows:
            row = []
            for cb in bcols:
                acc = ra[0] * cb[0]
                for k in range(1, n):
                    acc = acc + ra[k] * cb[k]
                row.append(acc)
            out.append(row)
        return Matrix(self.ring, out)

    def __rmul__(self, other):
        a = self.ring.elem(other)
        return Matrix(self.ring, [[a * e for e in r] for r in self.rows])

    def __pow__(self, k: int) -> "Matrix":
        if k < 0:
            return self.inverse() ** (-k)
        acc = Matrix.identity(self.ring, self.n)
        b = self
        while k:
            if k & 1:
                acc = acc * b
            b = b * b
            k >>= 1
        return acc

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, Matrix) and other.ring is self.ring and other.rows == self.rows

    def __hash__(self):
        h = self._hash
        if h is None:
            h = self._hash = hash(self.rows)
        return h

    def __repr__(self):
        body = "; ".join(" ".join(repr(e) for e in r) for r in self.rows)
        return f"[{body}]"

    def transpose(self) -> "Matrix":
        return Matrix(self.ring, tuple(zip(*self.rows)))

    def trace(self):
        acc = self.rows[0][0]
        for k in range(1, self.n):
            acc = acc + self.rows[k][k]
        return acc

    def is_identity(self) -> bool:
        o, z = self.ring.one, self.ring.zero
        return all(self.rows[i][j] == (o if i == j else z)
                   for i in range(self.n) for j in range(self.n))

    def is_scalar(self) -> bool:
        a = self.rows[0][0]
        z = self.ring.zero
        return all(self.rows[i][j] == (a if i == j else z)
                   for i in range(self.n) for j in range(self.n))

    # -- determinant / inverse ----------------------------------------------

    def det(self):
        n = self.n
        r = self.ring
        if n == 1:
            return self.rows[0][0]
        if n == 2:
            (a, b), (c, d) = self.rows
            return a * d - b * c
        if n == 3:
            (a, b, c), (d, e, f), (g, h, i) = self.rows
            return (a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g))
        return _det_eliminate([list(row) for row in self.rows], r)

    def inverse(self) -> "Matrix":
        n = self.n
        ring = self.ring
        if n == 1:
            e = self.rows[0][0]
            if not e.is_unit():
                raise ZeroDivisionError("matrix is not invertible")
            return Matrix(ring, [[_unit_inv(e)]])
        if n == 2:
            (a, b), (c, d) = self.rows
            det = a * d - b * c
            if not det.is_unit():
                raise ZeroDivisionError("matrix is not invertible")
            di = _unit_inv(det)
            return Matrix(ring, [[d * di, -b * di], [-c * di, a * di]])
        return _inverse_eliminate(self)

    # -- characteristic polynomial -------------------------------------------

    def char_poly(self) -> Poly:
        """det(X*I - a) over the coefficient field (fields only)."""
        if not isinstance(self.ring, FiniteField):
            raise UsageError("char_poly is defined over a field")
        F = self.ring
        x = Poly.x(F)
        entries = [[(x if i == j else Poly.const(F, F.zero)) - Poly.const(F, self.rows[i][j])
                    for j in range(self.n)] for i in range(self.n)]
        return _poly_det(entries, F)

    # -- change of coefficients ----------------------------------------------

    def map_entries(self, fn, new_ring) -> "Matrix":
        return Matrix(new_ring, [[fn(e) for e in r] for r in self.rows])

    def teichmuller_lift(self, ring: LocalRing) -> "Matrix":
        """Entrywise multiplicative section into W_2(F_q) or F_q[t]/t^2."""
        if not isinstance(self.ring, FiniteField) or ring.field is not self.ring:
            raise UsageError("lift expects a matrix over the ring's residue field")
        return self.map_entries(ring.teichmuller, ring)

    def reduce(self) -> "Matrix":
        """Entrywise reduction to the residue field."""
        if not isinstance(self.ring, LocalRing):
            raise UsageError("reduce expects a matrix over a length-two ring")
        return self.map_entries(lambda e: e.reduce(), self.ring.field)


def _unit_inv(e):
    if isinstance(e, RingElement):
        return e.inverse()
    return e.field._objs[e.field.inv_i(e.i)]


def _det_eliminate(rows, ring):
    """Unit-pivot elimination; cofactor expansion when a column has no unit."""
    n = len(rows)
    if n == 1:
        return rows[0][0]
    # find a unit pivot in column 0
    piv = None
    for i in range(n):
        if rows[i][0].is_unit():
            piv = i
            break
    if piv is None:
        # every entry in column 0 is a non-unit: expand along the column
        acc = None
        for i in range(n):
            e = rows[i][0]
            if not e:
                continue
            minor = [r[1:] for k, r in enumerate(rows) if k != i]
            term = e * _det_eliminate(minor, ring)
            if i % 2:
                term = -term
            acc = term if acc is None else acc + term
        return acc if acc is not None else ring.zero
    sign = 1
    if piv != 0:
        rows[0], rows[piv] = rows[piv], rows[0]
        sign = -1
    inv = _unit_inv(rows[0][0])
    reduced = []
    for i in range(1, n):
        lead = rows[i][0]
        if lead:
            factor = lead * inv
            reduced.append([rows[i][j] - factor * rows[0][j] for j in range(1, n)])
        else:
            reduced.append(rows[i][1:])
    sub = _det_eliminate(reduced, ring)
    out = rows[0][0] * sub
    return -out if sign < 0 else out


def _inverse_eliminate(m: Matrix) -> Matrix:
    n, ring = m.n, m.ring
    a = [list(r) for r in m.rows]
    b = [list(r) for r in Matrix.identity(ring, n).rows]
    for col in range(n):
        piv = None
        for i in range(col, n):
            if a[i][col].is_unit():
                piv = i
                break
        if piv is None:
            raise ZeroDivisionError("matrix is not invertible")
        a[col], a[piv] = a[piv], a[col]
        b[col], b[piv] = b[piv], b[col]
        inv = _unit_inv(a[col][col])
        a[col] = [e * inv for e in a[col]]
        b[col] = [e * inv for e in b[col]]
        for i in range(n):
            if i != col and a[i][col]:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[col])]
                b[i] = [x - f * y for x, y in zip(b[i], b[col])]
    return Matrix(ring, b)


def _poly_det(entries, F) -> Poly:
    n = len(entries)
    if n == 1:
        return entries[0][0]
    acc = None
    for i in range(n):
        e = entries[i][0]
        if e.degree < 0:
            continue
        minor = [row[1:] for k, row in enumerate(entries) if k != i]
        term = e * _poly_det(minor, F)
        if i % 2:
            term = -term
        acc = term if acc is None else acc + term
    if acc is None:
        return Poly.const(F, F.zero)
    return acc


def commutator(a: Matrix, b: Matrix) -> Matrix:
    return a * b - b * a


def group_commutator(a: Matrix, b: Matrix) -> Matrix:
    return a * b * a.inverse() * b.inverse()


# -- group orders ------------------------------------------------------------

@dataclass(frozen=True)
class GroupSpec:
    """GL_n or SL_n over a field or length-two local ring."""
    n: int
    ring: object
    constraint: str = "SL"  # "GL" | "SL"

    def __post_init__(self):
        if self.constraint not in ("GL", "SL"):
            raise UsageError("constraint must be GL or SL")
        if self.n < 1:
            raise UsageError("n must be positive")


def group_order(spec: GroupSpec) -> int:
    n, ring = spec.n, spec.ring
    if isinstance(ring, FiniteField):
        q = ring.q
        gl = 1
        for i in range(n):
            gl *= q ** n - q ** i
        return gl if spec.constraint == "GL" else gl // (q - 1)
    q = ring.field.q
    base = group_order(GroupSpec(n, ring.field, spec.constraint))
    extra = n * n if spec.constraint == "GL" else n * n - 1
    return base * q ** extra


# -- lifts and the congruence kernel ----------------------------------------

def lift_to_sl(m: Matrix, ring: LocalRing) -> Matrix:
    """A determinant-1 lift of a determinant-1 matrix over the residue field.

    Teichmüller-lift entrywise, then rescale the first row by the inverse of
    the resulting determinant (a unit reducing to 1), which fixes det without
    changing the reduction.
    """
    if not isinstance(m.ring, FiniteField) or m.ring is not ring.field:
        raise UsageError("lift_to_sl expects a matrix over the ring's residue field")
    if m.det() != m.ring.one:
        raise UsageError("matrix must have determinant 1")
    lifted = m.teichmuller_lift(ring)
    d = lifted.det()
    if d == ring.one:
        return lifted
    di = d.inverse()
    rows = [list(r) for r in lifted.rows]
    rows[0] = [di * e for e in rows[0]]
    out = Matrix(ring, rows)
    assert out.det() == ring.one
    return out


def pi_multiple(y: Matrix, ring: LocalRing) -> Matrix:
    """pi * (any lift of y): depends only on y, entries (0, y_ij^p) or (0, y_ij)."""
    if not isinstance(y.ring, FiniteField) or y.ring is not ring.field:
        raise UsageError("pi_multiple expects a matrix over the residue field")
    F = ring.field
    witt = ring.kind == WITT
    return Matrix(ring, [[ring.from_pair(0, F._frob[e.i] if witt else e.i) for e in row]
                         for row in y.rows])


def pi_quotient(m: Matrix) -> Matrix:
    """The y with pi_multiple(y) = m; rejects m not divisible by pi."""
    ring = m.ring
    if not isinstance(ring, LocalRing):
        raise UsageError("pi_quotient expects a matrix over a length-two ring")
    F = ring.field
    witt = ring.kind == WITT
    out = []
    for row in m.rows:
        line = []
        for e in row:
            if e.a0 != 0:
                raise UsageError("matrix is not divisible by pi")
            line.append(F._objs[F._frob_inv[e.a1] if witt else e.a1])
        out.append(line)
    return Matrix(F, out)


def kernel_log(g: Matrix) -> Matrix:
    """Inverse of 1 + pi*yhat -> rho(yhat) on the principal congruence kernel.

    For witt2 the pi-multiple of a lift carries an entrywise Frobenius
    (p*(y0,y1) = (0, y0^p) in coordinates), so the extraction undoes it; for
    dual numbers the a1 component is rho(yhat) on the nose.
    """
    ring = g.ring
    if not isinstance(ring, LocalRing):
        raise UsageError("kernel_log expects a matrix over a length-two ring")
    F = ring.field
    n = g.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            e = g.rows[i][j]
            if e.a0 != (F.one.i if i == j else 0):
                raise UsageError("matrix does not reduce to the identity")
            idx = F._frob_inv[e.a1] if ring.kind == WITT else e.a1
            row.append(F._objs[idx])
        out.append(row)
    return Matrix(F, out)


def kernel_exp(y: Matrix, ring: LocalRing) -> Matrix:
    """1 + pi*yhat for any lift yhat of y; inverse of :func:`kernel_log`."""
    if not isinstance(y.ring, FiniteField) or y.ring is not ring.field:
        raise UsageError("kernel_exp expects a matrix over the residue field")
    F = ring.field
    n = y.n
    out = []
    for i in range(n):
        row = []
        for j in range(n):
            a1 = F._frob[y.rows[i][j].i] if ring.kind == WITT else y.rows[i][j].i
            a0 = F.one.i if i == j else 0
            row.append(ring.from_pair(a0, a1))
        out.append(row)
    return Matrix(ring, out)
