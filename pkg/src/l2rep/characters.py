"""Additive characters of the principal congruence kernel.

The kernel S1 = {1 + pi*yhat : tr(y) = 0} of SL_n over a length-two ring is
an elementary abelian p-group isomorphic to the trace-zero matrices over
F_q.  Every matrix x over F_q defines a character through the trace
pairing, g = 1 + pi*yhat |-> Tr_{F_q/F_p}(Tr(x y)); scalar shifts of x drop
out on trace-zero y, so the character depends on the coset x + Z only.
Character values are kept as exponents in Z/p (plain ints), never as
complex numbers.

The extension test asks whether this degree-one character of S1 spreads to
a degree-one character of the full coset stabiliser H: it does exactly when
it kills S1 intersect [H,H].
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .chartable import closure
from .errors import BudgetExceededError, UsageError
from .fields import FiniteField
from .linalg import iter_coefficients, rank
from .matrices import Matrix, kernel_exp, kernel_log, lift_to_sl
from .rings import LocalRing
from .stabilizer import coset_stabilizer
from .weyr import is_weyr_form, weyr_structure_of

EXTENSION_BUDGET = 200_000
S1_EXHAUSTIVE_CAP = 10_000
SAMPLE_ROUNDS = 200


@dataclass(frozen=True)
class PsiCharacter:
    """The character of S1 attached to the coset x + Z via the trace pairing."""

    x: Matrix
    kind: str

    def __post_init__(self):
        if not isinstance(self.x.ring, FiniteField):
            raise UsageError("character data lives over the residue field")

    @property
    def ring(self) -> LocalRing:
        return LocalRing.get(self.x.ring, self.kind)


def psi_value(char: PsiCharacter, g: Matrix) -> int:
    """Exponent in Z/p of the character at g = 1 + pi*yhat.

    Rejects g outside S1 (residue not the identity, or determinant not 1).
    """
    R = g.ring
    if not isinstance(R, LocalRing) or R is not char.ring:
        raise UsageError("element does not live over the character's ring")
    if not g.reduce().is_identity():
        raise UsageError("element is not in the congruence kernel")
    if g.det() != R.one:
        raise UsageError("kernel element has determinant != 1")
    y = kernel_log(g)
    return (char.x * y).trace().absolute_trace()


def traceless_basis(field: FiniteField, n: int) -> list[Matrix]:
    """F_q-basis of the trace-zero matrices: E_ij (i != j) and E_ii - E_{n-1,n-1}."""
    out = []
    for i in range(n):
        for j in range(n):
            if i != j:
                out.append(Matrix.basis_matrix(field, n, i, j))
    for i in range(n - 1):
        out.append(Matrix.basis_matrix(field, n, i, i)
                   - Matrix.basis_matrix(field, n, n - 1, n - 1))
    return out


def coset_basis(field: FiniteField, n: int) -> list[Matrix]:
    """Matrices whose images form a basis of M_n(F_q)/Z.

    For p not dividing n the trace-zero basis works as is.  When p divides
    n the scalars are themselves trace-zero, so one diagonal difference is
    redundant mod Z and a non-traceless member (E_{n-1,n-1}) takes its place.
    """
    basis = traceless_basis(field, n)
    if n % field.p != 0:
        return basis
    basis = basis[:-1]
    basis.append(Matrix.basis_matrix(field, n, n - 1, n - 1))
    return basis


def iter_s1(ring: LocalRing, n: int):
    """All of S1: kernel exponentials of the trace-zero matrices."""
    F = ring.field
    basis = traceless_basis(F, n)
    zero = Matrix(F, [[F.zero] * n for _ in range(n)])
    for coeffs in iter_coefficients(F, len(basis)):
        y = zero
        for c, b in zip(coeffs, basis):
            if c != F.zero:
                y = y + b * c
        yield kernel_exp(y, ring)


def _random_traceless(field: FiniteField, n: int, rng) -> Matrix:
    elems = field.elements
    rows = [[rng.choice(elems) for _ in range(n)] for _ in range(n)]
    tr = sum((rows[i][i] for i in range(1, n)), rows[0][0])
    rows[0][0] = rows[0][0] - tr
    return Matrix(field, rows)


def check_equivariance(x: Matrix, g: Matrix, kind: str,
                       cap: int = S1_EXHAUSTIVE_CAP, rounds: int = SAMPLE_ROUNDS,
                       seed: int = 0) -> bool:
    """Does conjugating the coset match conjugating the character?

    Tests psi_{gxg^-1+Z}(h) = psi_{x+Z}(ghat^-1 h ghat) over h in S1,
    exhaustively when |S1| <= cap and on seeded random h otherwise.
    """
    F = x.ring
    n = x.n
    if g.ring is not F:
        raise UsageError("x and g must live over the same field")
    R = LocalRing.get(F, kind)
    char_x = PsiCharacter(x, kind)
    char_gx = PsiCharacter(g * x * g.inverse(), kind)
    ghat = lift_to_sl(g, R)
    ghat_inv = ghat.inverse()
    size = F.q ** (n * n - 1)
    if size <= cap:
        sample = iter_s1(R, n)
    else:
        rng = random.Random(seed)
        sample = (kernel_exp(_random_traceless(F, n, rng), R)
                  for _ in range(rounds))
    for h in sample:
        if psi_value(char_gx, h) != psi_value(char_x, ghat_inv * h * ghat):
            return False
    return True


def pairing_nondegenerate(field: FiniteField, n: int) -> bool:
    """Is (x + Z, y) |-> Tr_{F_q/F_p}(Tr(xy)) a perfect F_p-pairing?

    Full rank here means distinct cosets define distinct characters.
    """
    xs = coset_basis(field, n)
    ys = traceless_basis(field, n)
    scalars = [field.elem([1 if k == m else 0 for k in range(field.f)])
               for m in range(field.f)]
    Fp = FiniteField(field.p, 1)
    rows = []
    for bx in xs:
        for cx in scalars:
            row = []
            for by in ys:
                for cy in scalars:
                    val = ((bx * cx) * (by * cy)).trace().absolute_trace()
                    row.append(Fp.elem(val))
            rows.append(row)
    full = (n * n - 1) * field.f
    return rank(rows, Fp) == full


def trace_identity_check(wblock: Matrix, c: Matrix) -> bool:
    """For a one-eigenvalue Weyr matrix, Tr(W(a) c) = a Tr(c) on its centraliser."""
    if not is_weyr_form(wblock):
        raise UsageError("expected a matrix in Weyr form")
    blocks = weyr_structure_of(wblock).blocks
    if len(blocks) != 1:
        raise UsageError("expected a single-eigenvalue Weyr matrix")
    if wblock * c != c * wblock:
        raise UsageError("c must commute with the Weyr matrix")
    a = blocks[0][0]
    return (wblock * c).trace() == a * c.trace()


def _generating_subset(elements, identity: Matrix) -> list[Matrix]:
    """Greedy small generating set of a finite matrix group given as a list."""
    gens: list[Matrix] = []
    have = {identity}
    for e in elements:
        if e in have:
            continue
        gens.append(e)
        have = closure(gens, identity)
    assert set(elements) <= have
    return gens


def extension_mode(x: Matrix, kind: str, budget: int = EXTENSION_BUDGET) -> str:
    """Which strategy verify_extension will use at this size under auto."""
    F = x.ring
    data = coset_stabilizer(x, kind=kind)
    size = len(data.coset_elements) * F.q ** (x.n * x.n - 1)
    return "exhaustive" if size <= budget else "sampled"


def verify_extension(x: Matrix, kind: str, mode: str = "auto",
                     budget: int = EXTENSION_BUDGET, rounds: int = SAMPLE_ROUNDS,
                     seed: int = 0) -> bool:
    """Does the character of x + Z extend to the full coset stabiliser?

    H is the preimage of C_S(x+Z) at level two.  The character extends iff
    it vanishes on S1 intersect [H,H].  Exhaustive mode computes [H,H] as
    the normal closure of generator commutators; sampled mode draws random
    commutators (landing in S1 by construction or by residue collision) and
    can only err on the side of "extends".
    """
    if mode not in ("auto", "exhaustive", "sampled"):
        raise UsageError(f"unknown mode {mode!r}")
    F = x.ring
    n = x.n
    R = LocalRing.get(F, kind)
    char = PsiCharacter(x, kind)
    data = coset_stabilizer(x, kind=kind)
    hbar = data.coset_elements
    size = len(hbar) * F.q ** (n * n - 1)
    if mode == "auto":
        mode = "exhaustive" if size <= budget else "sampled"
    if mode == "exhaustive":
        if size > budget:
            raise BudgetExceededError(
                f"coset stabiliser preimage has {size} elements",
                required=size, budget=budget)
        return _verify_extension_exhaustive(char, R, hbar, size)
    return _verify_extension_sampled(char, R, hbar, rounds, seed)


def _kernel_generators(ring: LocalRing, n: int) -> list[Matrix]:
    F = ring.field
    scalars = [F.elem([1 if k == m else 0 for k in range(F.f)])
               for m in range(F.f)]
    return [kernel_exp(b * c, ring) for b in traceless_basis(F, n) for c in scalars]


def _verify_extension_exhaustive(char, ring, hbar, size) -> bool:
    n = char.x.n
    ident_bar = Matrix.identity(char.x.ring, n)
    gens_bar = _generating_subset(hbar, ident_bar)
    gens = [lift_to_sl(g, ring) for g in gens_bar] + _kernel_generators(ring, n)
    ident = Matrix.identity(ring, n)
    seeds = set()
    for a in gens:
        a_inv = a.inverse()
        for b in gens:
            t = a * b * a_inv * b.inverse()
            if t != ident:
                seeds.add(t)
    # close the seed set under conjugation, then take the generated subgroup
    inv = [(g, g.inverse()) for g in gens]
    work = list(seeds)
    while work:
        t = work.pop()
        for g, g_inv in inv:
            u = g * t * g_inv
            if u not in seeds:
                seeds.add(u)
                work.append(u)
        if len(seeds) > size:
            raise AssertionError("commutator closure escaped the group")
    derived = closure(list(seeds), ident, budget=size) if seeds else {ident}
    for d in derived:
        if d.reduce().is_identity() and psi_value(char, d) != 0:
            return False
    return True


def _verify_extension_sampled(char, ring, hbar, rounds, seed) -> bool:
    F = char.x.ring
    n = char.x.n
    rng = random.Random(seed)

    def draw():
        c = rng.choice(hbar)
        return lift_to_sl(c, ring) * kernel_exp(_random_traceless(F, n, rng), ring)

    def comm(a, b):
        return a * b * a.inverse() * b.inverse()

    for _ in range(rounds):
        h1, h2 = draw(), draw()
        s = kernel_exp(_random_traceless(F, n, rng), ring)
        # [h, s] and [h, h*s] land in the kernel by construction
        candidates = [comm(h1, s), comm(h2, h2 * s), comm(h1, s) * comm(h2, s)]
        t = comm(h1, h2)
        if t.reduce().is_identity():
            candidates.append(t)
        for t in candidates:
            if t.reduce().is_identity() and psi_value(char, t) != 0:
                return False
    return True
