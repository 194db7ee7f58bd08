"""Order-p lift obstructions over the length-two rings.

Over the dual numbers the constant section makes reduction split, so every
transvection has an order-p lift.  Over Witt vectors the analogous search
fails for p >= 5: expanding (A + pX)^p with A = e_12 leaves A^p = I + pE_12
because the correction term carries coefficients divisible by p.  These
searches and the power-formula expansion are implemented exactly, along
with the two explicit small-characteristic witnesses where an order-p lift
does exist.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import BudgetExceededError, UsageError
from .fields import FiniteField
from .linalg import iter_coefficients
from .matrices import Matrix, kernel_exp, pi_multiple, pi_quotient
from .rings import DUAL, WITT, LocalRing

SEARCH_BUDGET = 1_000_000
SECTION_PAIR_BUDGET = 10_000


@dataclass(frozen=True)
class LiftSearchResult:
    target: Matrix
    kind: str
    found: Matrix | None
    search_space_size: int
    mode: str

    def __post_init__(self):
        if self.found is not None:
            R = self.found.ring
            assert self.found.reduce() == self.target
            assert self.found.det() == R.one
            assert (self.found ** R.field.p).is_identity()


def _det_one_lifts(target: Matrix, ring: LocalRing, xs):
    """Lifts base + pi*X of target with determinant exactly 1.

    det(base + pi*X) = det(base) + pi*Tr(adj(target) X), so the determinant
    condition is one affine-linear constraint on X over the residue field.
    """
    F = target.ring
    n = target.n
    base = target.teichmuller_lift(ring)
    adj = target.inverse()  # det(target) = 1, so the adjugate is the inverse
    delta_mat = base.det() - ring.one
    delta = F.zero
    if delta_mat != ring.zero:
        delta = pi_quotient(Matrix(ring, [[delta_mat]]))[0, 0]
    for coeffs in xs:
        x = Matrix(F, [list(coeffs[i * n:(i + 1) * n]) for i in range(n)])
        if delta + (adj * x).trace() != F.zero:
            continue
        g = base + pi_multiple(x, ring)
        assert g.det() == ring.one
        yield g


def lift_order_search(n: int, field: FiniteField, kind: str,
                      target: Matrix | None = None,
                      budget: int = SEARCH_BUDGET, rounds: int = 500,
                      seed: int = 0) -> LiftSearchResult:
    """First det-1 lift of the target transvection with g^p = I, if any.

    Exhaustive over all q^{n^2 - 1} determinant-one lifts when that fits
    the budget; otherwise scans the tridiagonally supported lifts (which
    contain both known small-characteristic witnesses) plus seeded random
    draws, and records the mode.
    """
    if target is None:
        target = Matrix.elementary(field, n, 0, 1, field.one)
    if target.ring is not field or target.n != n:
        raise UsageError("target must be n x n over the given field")
    if target.det() != field.one:
        raise UsageError("target must have determinant 1")
    R = LocalRing.get(field, kind)
    p = field.p
    total = field.q ** (n * n)
    if total <= budget:
        found = None
        count = 0
        for g in _det_one_lifts(target, R, iter_coefficients(field, n * n)):
            count += 1
            if found is None and (g ** p).is_identity():
                found = g
        return LiftSearchResult(target, kind, found, count, "exhaustive")
    # structured subfamily: X supported on the tridiagonal band
    band = [(i, j) for i in range(n) for j in range(n) if abs(i - j) <= 1]
    if field.q ** len(band) > budget:
        raise BudgetExceededError(
            f"even the banded lift search needs {field.q ** len(band)} points",
            required=field.q ** len(band), budget=budget)

    def banded():
        for vals in iter_coefficients(field, len(band)):
            full = [field.zero] * (n * n)
            for (i, j), v in zip(band, vals):
                full[i * n + j] = v
            yield tuple(full)

    def sampled():
        rng = random.Random(seed)
        elems = field.elements
        for _ in range(rounds):
            yield tuple(rng.choice(elems) for _ in range(n * n))

    found = None
    count = 0
    for source in (banded(), sampled()):
        for g in _det_one_lifts(target, R, source):
            count += 1
            if found is None and (g ** p).is_identity():
                found = g
    return LiftSearchResult(target, kind, found, count, "sampled")


def _int_elem(ring, m: int):
    acc = ring.zero
    for _ in range(m % (ring.field.p ** 2)):
        acc = acc + ring.one
    return acc


def verify_power_formula(n: int, field: FiniteField, exhaustive: bool | None = None,
                         rounds: int = 1000, seed: int = 0) -> bool:
    """Check the Witt-vector expansion of (A + pX)^p for A = e_12, p >= 5.

    Verifies three things for each sampled X: the commutator identity
    [A^m, Xhat] = m [A, Xhat]; the closed form
    (A+pX)^p = A^p + p(p(p+1)/2 I + p(p-1)(p+1)/3 E_12)[A, Xhat];
    and the conclusion (A+pX)^p = A^p = I + pE_12 != I.
    """
    p = field.p
    if p < 5:
        raise UsageError("the power formula needs p >= 5")
    R = LocalRing.get(field, WITT)
    e12_res = Matrix.basis_matrix(field, n, 0, 1)
    A = Matrix.elementary(R, n, 0, 1, R.one)
    Ap_expected = Matrix.identity(R, n) + pi_multiple(e12_res, R)
    if (A ** p) != Ap_expected or Ap_expected.is_identity():
        return False
    c1 = _int_elem(R, p * (p + 1) // 2)
    c2 = _int_elem(R, p * (p - 1) * (p + 1) // 3)
    coeff = Matrix.scalar(R, n, c1) + Matrix.basis_matrix(R, n, 0, 1, c2)
    pR = _int_elem(R, p)
    if exhaustive is None:
        exhaustive = field.q ** (n * n) <= 10_000
    if exhaustive:
        source = iter_coefficients(field, n * n)
    else:
        rng = random.Random(seed)
        elems = field.elements
        source = (tuple(rng.choice(elems) for _ in range(n * n))
                  for _ in range(rounds))
    for coeffs in source:
        x = Matrix(field, [list(coeffs[i * n:(i + 1) * n]) for i in range(n)])
        xhat = x.teichmuller_lift(R)
        commAX = A * xhat - xhat * A
        for m in range(1, p + 1):
            Am = A ** m
            lhs = Am * xhat - xhat * Am
            rhs = Matrix(R, [[e * _int_elem(R, m) for e in row] for row in commAX.rows])
            if lhs != rhs:
                return False
        g = A + pi_multiple(x, R)
        power = g ** p
        closed = A ** p + (coeff * commAX) * pR
        if power != closed or power != Ap_expected:
            return False
    return True


@dataclass(frozen=True)
class RemarkReport:
    witness_32: Matrix
    witness_33: Matrix
    ok_32: bool
    ok_33: bool
    no_lift_22: bool
    square_lift_dets_22: tuple
    shape_ok_22: bool


def remark_witnesses() -> RemarkReport:
    """The explicit order-p lifts at (3,2) and (3,3), and the (2,2) obstruction.

    (3,2): I + E_12 + 2*diag(1,0,-1) squares to I with determinant 1.
    (3,3): I + E_12 + E_23 + 3*(-E_21 - E_22) cubes to I with determinant 1.
    (2,2): every det-1 lift of e_12 to SL_2(W_2(F_2)) has order > 2; the
    lifts of order 2 all have determinant -1, and their X is upper
    triangular with diagonal (x, x+1).
    """
    F2 = FiniteField(2, 1)
    R4 = LocalRing.get(F2, WITT)
    two = _int_elem(R4, 2)
    d = Matrix.diagonal(F2, [F2.one, F2.zero, F2.one])  # -1 = 1 mod 2
    w32 = (Matrix.elementary(R4, 3, 0, 1, R4.one)
           + Matrix(R4, [[e * two for e in row]
                         for row in d.teichmuller_lift(R4).rows]))
    ok_32 = (w32 ** 2).is_identity() and w32.det() == R4.one \
        and w32.reduce() == Matrix.elementary(F2, 3, 0, 1, F2.one)

    F3 = FiniteField(3, 1)
    R9 = LocalRing.get(F3, WITT)
    three = _int_elem(R9, 3)
    minus = -F3.one
    y = Matrix(F3, [[F3.zero] * 3,
                    [minus, minus, F3.zero],
                    [F3.zero] * 3])
    w33 = (Matrix.identity(R9, 3) + Matrix.basis_matrix(R9, 3, 0, 1)
           + Matrix.basis_matrix(R9, 3, 1, 2)
           + Matrix(R9, [[e * three for e in row]
                         for row in y.teichmuller_lift(R9).rows]))
    ok_33 = (w33 ** 3).is_identity() and w33.det() == R9.one

    # (2,2): exhaustive over all 16 lifts of e_12
    e12 = Matrix.elementary(F2, 2, 0, 1, F2.one)
    base = e12.teichmuller_lift(R4)
    no_lift = True
    dets = set()
    shape_ok = True
    for coeffs in iter_coefficients(F2, 4):
        x = Matrix(F2, [list(coeffs[:2]), list(coeffs[2:])])
        g = base + pi_multiple(x, R4)
        if not (g ** 2).is_identity():
            continue
        dets.add(g.det())
        if g.det() == R4.one:
            no_lift = False
        if x[1, 0] != F2.zero or x[1, 1] != x[0, 0] + F2.one:
            shape_ok = False
    return RemarkReport(w32, w33, ok_32, ok_33, no_lift,
                        tuple(sorted((d.a0, d.a1) for d in dets)), shape_ok)


def dual_splitting_section(n: int, field: FiniteField,
                           pair_budget: int = SECTION_PAIR_BUDGET,
                           rounds: int = 500, seed: int = 0) -> bool:
    """Is the constant embedding a homomorphic section of reduction?

    Entrywise Teichmuller lifting into the dual numbers is a ring
    homomorphism, hence restricts to a group section of rho on SL_n.
    Checked on all pairs when |SL_n(F_q)|^2 fits the budget, else sampled.
    """
    from .chartable import closure
    from .orbits import sl_generators
    R = LocalRing.get(field, DUAL)
    S = sorted(closure(sl_generators(n, field), Matrix.identity(field, n)),
               key=lambda m: [e.i for row in m.rows for e in row])

    def section(g):
        return g.teichmuller_lift(R)

    for g in S:
        if section(g).reduce() != g:
            return False
        if section(g).det() != R.one:
            return False
    if len(S) ** 2 <= pair_budget:
        pairs = ((g, h) for g in S for h in S)
    else:
        rng = random.Random(seed)
        pairs = ((rng.choice(S), rng.choice(S)) for _ in range(rounds))
    return all(section(g) * section(h) == section(g * h) for g, h in pairs)


def check_kernel_structure(n: int, field: FiniteField, kind: str,
                           pair_budget: int = SECTION_PAIR_BUDGET) -> bool:
    """The reduction kernel is elementary abelian of order q^{n^2-1}.

    Asserts the exact relations (1+piX)(1+piY) = 1+pi(X+Y) and
    (1+piX)^p = 1 on the trace-zero parametrization.
    """
    from .characters import traceless_basis
    R = LocalRing.get(field, kind)
    basis = traceless_basis(field, n)
    mats = []
    for vec in iter_coefficients(field, len(basis)):
        m = Matrix(field, [[field.zero] * n for _ in range(n)])
        for c, b in zip(vec, basis):
            if c != field.zero:
                m = m + b * c
        mats.append(m)
    if len(mats) != field.q ** (n * n - 1):
        return False
    kl = [kernel_exp(m, R) for m in mats]
    if len(set(kl)) != len(kl):
        return False
    p = field.p
    for g in kl:
        if not (g ** p).is_identity():
            return False
    if len(mats) ** 2 <= pair_budget:
        idx = range(len(mats))
        for i in idx:
            for j in idx:
                if kl[i] * kl[j] != kernel_exp(mats[i] + mats[j], R):
                    return False
    else:
        rng = random.Random(7)
        for _ in range(500):
            i, j = rng.randrange(len(mats)), rng.randrange(len(mats))
            if kl[i] * kl[j] != kernel_exp(mats[i] + mats[j], R):
                return False
    return True
