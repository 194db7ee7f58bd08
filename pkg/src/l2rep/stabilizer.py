"""Stabilisers of scalar-cosets x + Z under SL_n conjugation.

C_S(x) is normal in C_S(x+Z) with index 1 or p: an element moving x inside
its coset conjugates x to x + lambda*I, which forces a shift permutation of
the eigenvalue set.  For x in Weyr form the witness is an explicit block
permutation matrix v (order p, det 1); in general a det-1 witness is found,
if one exists, inside the solution space of g x = (x + lambda I) g.  At
level two everything is controlled by reduction: C_{S_2}(x+Z) and C_{S_2}(x)
are the rho-preimages of their residue counterparts, so any det-1 lift w of
v gives C_{S_2}(x+Z) = <w> C_{S_2}(x).
"""

from __future__ import annotations

from dataclasses import dataclass

from .centralizer import ENUMERATION_BUDGET, centralizer_group
from .errors import BudgetExceededError, UsageError
from .fields import FiniteField
from .linalg import iter_span, nullspace
from .matrices import Matrix, lift_to_sl
from .rings import LocalRing
from .weyr import is_weyr_form, weyr_structure_of


@dataclass(frozen=True)
class StabilizerData:
    """C_S(x+Z) together with the witnesses that build it from C_S(x).

    shift is the scalar lambda with v x v^-1 = x + lambda*I (None when
    C_S(x+Z) = C_S(x) and v = I); sigma is the block permutation of the Weyr
    structure realizing the shift (None off the Weyr path); w is a det-1
    ring lift of v with rho(w) = v.
    """

    x: Matrix
    v: Matrix
    shift: object
    sigma: tuple | None
    w: Matrix
    order_v: int
    centralizer: list
    coset_elements: list

    @property
    def index(self) -> int:
        return self.order_v


def find_shift(x: Matrix):
    """(lambda, sigma) with eigenvalue shift a_{sigma(i)} = a_i + lambda.

    Only nonzero shifts count; sigma must also preserve the block partitions.
    Returns None when no shift exists.  When one exists the valid shifts are
    exactly the p - 1 prime-subfield multiples of any one of them, and p
    divides the number of blocks; both facts are asserted.
    """
    if not is_weyr_form(x):
        raise UsageError("find_shift expects a matrix in Weyr form")
    F = x.ring
    blocks = weyr_structure_of(x).blocks
    r = len(blocks)
    by_eig = {a: (k, part) for k, (a, part) in enumerate(blocks)}
    found = []
    for lam in F.units():
        sigma = [None] * r
        for k, (a, part) in enumerate(blocks):
            hit = by_eig.get(a + lam)
            if hit is None or hit[1] != part:
                sigma = None
                break
            sigma[k] = hit[0]
        if sigma is not None:
            found.append((lam, tuple(sigma)))
    if not found:
        return None
    lam0 = found[0][0]
    expected = {F.elem(m) * lam0 for m in range(1, F.p)}
    assert {lam for lam, _ in found} == expected
    assert len(found) == F.p - 1
    assert r % F.p == 0, "shift permutation forces p to divide the block count"
    lam, sigma = min(found, key=lambda t: t[0].i)
    # sigma decomposes into p-cycles: the shift orbit of each eigenvalue
    for k in range(r):
        orbit, j = 1, sigma[k]
        while j != k:
            j = sigma[j]
            orbit += 1
        assert orbit == F.p
    return lam, sigma


def build_v(x: Matrix, lam, sigma) -> Matrix:
    """The block permutation matrix with v x v^-1 = x + lambda*I.

    Identity blocks sit at block positions (sigma^-1(j), j); determinant is
    1 (odd p: the permutation is a product of p-cycles on equal coordinate
    groups, hence even; p = 2: -1 = 1), and v^p = I.
    """
    F = x.ring
    blocks = weyr_structure_of(x).blocks
    r = len(blocks)
    sizes = [sum(part) for _, part in blocks]
    offsets = [0]
    for m in sizes:
        offsets.append(offsets[-1] + m)
    sigma_inv = [None] * r
    for i, j in enumerate(sigma):
        sigma_inv[j] = i
    n = x.n
    rows = [[F.zero] * n for _ in range(n)]
    for j in range(r):
        i = sigma_inv[j]
        assert sizes[i] == sizes[j]
        for t in range(sizes[j]):
            rows[offsets[i] + t][offsets[j] + t] = F.one
    v = Matrix(F, rows)
    assert v * x == (x + Matrix.scalar(F, n, lam)) * v, "shift conjugation failed"
    assert v.det() == F.one
    assert (v ** F.p).is_identity()
    return v


def lift_w(v: Matrix, kind: str) -> Matrix:
    """A det-1 signed-permutation lift of a det-1 permutation matrix v.

    The entrywise lift has determinant +-1; for odd p it must be 1 already,
    and for p = 2 a -1 is repaired by diag(-1, 1, ..., 1).
    """
    F = v.ring
    R = LocalRing.get(F, kind)
    vhat = v.teichmuller_lift(R)
    d = vhat.det()
    if d != R.one:
        assert F.p == 2 and d == -R.one, "lift of a permutation matrix has det +-1"
        fix = Matrix.diagonal(R, [-R.one] + [R.one] * (v.n - 1))
        vhat = fix * vhat
    assert vhat.det() == R.one
    assert vhat.reduce() == v
    return vhat


def _shift_witness(x: Matrix, budget):
    """A det-1 g with g x g^-1 = x + lambda*I for some lambda != 0, if any.

    Solves the linear system for each candidate lambda and scans its
    solution space; the space is a coset of the centralizer algebra, so the
    scan size matches centraliser enumeration.
    """
    F = x.ring
    n = x.n
    one = F.one
    for lam in F.units():
        shifted = x + Matrix.scalar(F, n, lam)
        # system g*x - shifted*g = 0, row (a,b): sum_j g[a,j] x[j,b] - shifted[a,j] g[j,b]
        rows = []
        for a in range(n):
            for b in range(n):
                coeff = [F.zero] * (n * n)
                for j in range(n):
                    coeff[a * n + j] = coeff[a * n + j] + x[j, b]
                for j in range(n):
                    coeff[j * n + b] = coeff[j * n + b] - shifted[a, j]
                rows.append(coeff)
        basis = nullspace(rows, F, n * n)
        if not basis:
            continue
        if budget is not None and F.q ** len(basis) > budget:
            raise BudgetExceededError(
                f"shift witness scan needs {F.q ** len(basis)} elements",
                required=F.q ** len(basis), budget=budget)
        for vec in iter_span(basis, F, n * n):
            g = Matrix(F, [list(vec[i * n:(i + 1) * n]) for i in range(n)])
            if g.det() == one:
                return lam, g
    return None


def coset_stabilizer(x: Matrix, kind: str = "witt2",
                     budget: int | None = ENUMERATION_BUDGET) -> StabilizerData:
    """C_S(x+Z) = <v> C_S(x) with all witnesses, for any x over F_q.

    For x in Weyr form, v is the explicit block permutation and w its signed
    permutation lift; otherwise a det-1 witness for the shift (if one
    exists) is found by linear algebra and lifted entrywise.
    """
    F = x.ring
    if not isinstance(F, FiniteField):
        raise UsageError("coset_stabilizer works over the residue field")
    n = x.n
    cz = centralizer_group(x, sl=True, budget=budget)
    R = LocalRing.get(F, kind)
    if is_weyr_form(x):
        hit = find_shift(x)
        if hit is None:
            v, shift, sigma = Matrix.identity(F, n), None, None
        else:
            shift, sigma = hit
            v = build_v(x, shift, sigma)
        w = lift_w(v, kind) if shift is not None else Matrix.identity(R, n)
    else:
        sigma = None
        hit = _shift_witness(x, budget)
        if hit is None:
            v, shift = Matrix.identity(F, n), None
            w = Matrix.identity(R, n)
        else:
            shift, v = hit
            w = lift_to_sl(v, R)
    order_v = 1 if shift is None else F.p
    coset = list(cz)
    if order_v > 1:
        power = Matrix.identity(F, n)
        for _ in range(order_v - 1):
            power = power * v
            coset.extend(power * c for c in cz)
    assert len(set(coset)) == order_v * len(cz), "coset pieces must be disjoint"
    return StabilizerData(x, v, shift, sigma, w, order_v, cz, coset)


def verify_w_block_action(x: Matrix, c: Matrix) -> bool:
    """Does w act on block-diagonal ring centraliser elements by permuting
    blocks, the leading one up to conjugation by u?

    Concretely w c w^-1 must equal u c_{sigma(1)} u^-1 + c_{sigma(2)} + ...
    (block diagonal), with u = I except in the p = 2 determinant-fix case,
    where u = diag(-1, 1, ..., 1) on the leading block.
    """
    if not is_weyr_form(x):
        raise UsageError("verify_w_block_action expects x in Weyr form")
    R = c.ring
    if not isinstance(R, LocalRing) or R.field is not x.ring:
        raise UsageError("c must live over a length-two ring above x's field")
    xs = x.teichmuller_lift(R)
    assert c * xs == xs * c, "c must centralise s(x)"
    hit = find_shift(x)
    if hit is None:
        return True  # w = I
    shift, sigma = hit
    v = build_v(x, shift, sigma)
    w = lift_w(v, R.kind)
    blocks = weyr_structure_of(x).blocks
    sizes = [sum(part) for _, part in blocks]
    offsets = [0]
    for m in sizes:
        offsets.append(offsets[-1] + m)

    def sub(m, k):
        return Matrix(R, [[m[offsets[k] + a, offsets[k] + b] for b in range(sizes[k])]
                          for a in range(sizes[k])])

    # cross-blocks of a ring centraliser element vanish for split Weyr x
    for a in range(x.n):
        for b in range(x.n):
            ka = max(k for k in range(len(sizes)) if offsets[k] <= a)
            kb = max(k for k in range(len(sizes)) if offsets[k] <= b)
            if ka != kb and c[a, b] != R.zero:
                return False
    conj = w * c * w.inverse()
    u_is_trivial = w == v.teichmuller_lift(R)
    for k in range(len(sizes)):
        expected = sub(c, sigma[k])
        if k == 0 and not u_is_trivial:
            u = Matrix.diagonal(R, [-R.one] + [R.one] * (sizes[0] - 1))
            expected = u * expected * u.inverse()
        if sub(conj, k) != expected:
            return False
    # off-diagonal blocks of the conjugate must vanish too
    for a in range(x.n):
        for b in range(x.n):
            ka = max(k for k in range(len(sizes)) if offsets[k] <= a)
            kb = max(k for k in range(len(sizes)) if offsets[k] <= b)
            if ka != kb and conj[a, b] != R.zero:
                return False
    return True
