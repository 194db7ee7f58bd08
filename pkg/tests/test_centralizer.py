"""Commutants over fields and length-two rings, the block pattern of a basic
Weyr commutant, reduction surjectivity, and determinant-condition groups."""

import itertools

import pytest

from l2rep.centralizer import (
    CentralizerAlgebra,
    centralizer_basis,
    centralizer_group,
    check_reduction_surjectivity,
    check_x_lambda_surjectivity,
    commutant_field_basis,
    structure_lambda,
    weyr_pattern,
    x_lambda_elements,
    x_lambda_lift,
)
from l2rep.errors import BudgetExceededError, UsageError
from l2rep.fields import FiniteField
from l2rep.matrices import Matrix
from l2rep.rings import DUAL, KINDS, WITT, LocalRing
from l2rep.weyr import (
    WeyrStructure,
    build_basic_weyr,
    build_weyr,
    conjugate_partition,
    enumerate_weyr_forms,
    partitions_of,
)

F2 = FiniteField.get(2)
F3 = FiniteField.get(3)


def fmat(F, rows):
    return Matrix(F, [[F.elem(c) for c in r] for r in rows])


def brute_commutant(x):
    F = x.ring
    n = x.n
    out = []
    for entries in itertools.product(F.elements, repeat=n * n):
        y = Matrix(F, [list(entries[i * n:(i + 1) * n]) for i in range(n)])
        if y * x == x * y:
            out.append(y)
    return out


# -- field commutants --------------------------------------------------------

def test_commutant_dimension_formula():
    # dim C(W) = sum of squared Weyr parts = sum (2i-1) * (conjugate part i)
    for n in range(1, 5):
        for part in partitions_of(n):
            W = build_basic_weyr(F2.zero, part, F2)
            dim = len(commutant_field_basis(W))
            assert dim == sum(p * p for p in part)
            jordan = conjugate_partition(part)
            assert dim == sum((2 * i + 1) * jordan[i] for i in range(len(jordan)))


@pytest.mark.parametrize("rows", [
    [[0, 1], [0, 0]],
    [[1, 0], [0, 2]],
    [[0, 1, 0], [0, 0, 0], [0, 0, 1]],
])
def test_commutant_matches_brute_force(rows):
    x = fmat(F3, rows)
    alg = centralizer_basis(x)
    brute = set(brute_commutant(x))
    assert set(alg.elements()) == brute
    assert alg.size() == len(brute)
    assert alg.field_dimension() == len(alg.basis)


def test_scalar_matrix_has_full_commutant():
    x = Matrix.scalar(F2, 2, F2.one)
    alg = centralizer_basis(x)
    assert alg.field_dimension() == 4
    assert alg.size() == 16


def test_elements_budget():
    x = Matrix.zero(F3, 2)
    alg = centralizer_basis(x)
    with pytest.raises(BudgetExceededError):
        list(alg.elements(budget=10))


# -- ring commutants ---------------------------------------------------------

def brute_ring_commutant(xr):
    R = xr.ring
    n = xr.n
    out = []
    for entries in itertools.product(R.elements, repeat=n * n):
        y = Matrix(R, [list(entries[i * n:(i + 1) * n]) for i in range(n)])
        if y * xr == xr * y:
            out.append(y)
    return out


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("rows", [
    [[0, 1], [0, 0]],
    [[1, 0], [0, 0]],
    [[0, 0], [0, 0]],
])
def test_ring_commutant_matches_brute_force(kind, rows):
    R = LocalRing.get(F2, kind)
    xbar = fmat(F2, rows)
    alg = centralizer_basis(xbar, R)
    brute = brute_ring_commutant(xbar.teichmuller_lift(R))
    assert alg.size() == len(brute)
    assert set(alg.elements()) == set(brute)
    for y in alg.elements():
        assert alg.contains(y)


@pytest.mark.parametrize("kind", KINDS)
def test_ring_commutant_size_for_weyr_forms(kind):
    # for Weyr x the reduction C_R -> C_F is onto, so |C_R| = q^(2 dim)
    R = LocalRing.get(F3, kind)
    for W in enumerate_weyr_forms(F3, 2):
        alg = centralizer_basis(W, R)
        dim = len(commutant_field_basis(W))
        assert alg.log_size() == 2 * dim
        assert len(alg.image_basis) == dim
        assert not any(
            b.reduce() != Matrix.zero(F3, 2) for b in alg.basis[len(alg.image_lifts):])


def test_centralizer_basis_base_mismatch():
    x = fmat(F2, [[0, 1], [0, 0]])
    with pytest.raises(UsageError):
        centralizer_basis(x, F3)
    with pytest.raises(UsageError):
        centralizer_basis(x, LocalRing.get(F3, WITT))


# -- centraliser groups ------------------------------------------------------

def test_centralizer_group_field_brute():
    x = fmat(F3, [[0, 1], [0, 0]])
    gl = [y for y in brute_commutant(x) if y.det()]
    sl = [y for y in gl if y.det() == F3.one]
    assert set(centralizer_group(x, sl=False)) == set(gl)
    assert set(centralizer_group(x, sl=True)) == set(sl)


@pytest.mark.parametrize("kind", KINDS)
def test_centralizer_group_ring_brute(kind):
    R = LocalRing.get(F2, kind)
    xbar = fmat(F2, [[0, 1], [0, 0]])
    got = centralizer_group(xbar, R, sl=True)
    brute = [y for y in brute_ring_commutant(xbar.teichmuller_lift(R))
             if y.det() == R.one]
    assert set(got) == set(brute)


# -- the D + N pattern -------------------------------------------------------

def test_weyr_pattern_golden_322():
    st = WeyrStructure(F2, ((F2.zero, (3, 2, 2)),))
    pat = weyr_pattern(st)
    assert pat.lambda_partition == ((2, 3), (1, 1))
    assert pat.dimension() == 17
    # dimension = sum of d^2 (here 4 + 1) plus one per off-diagonal chain
    assert len(pat.offdiag_positions) == 12
    # the M_2 factor occupies coordinate offsets 0 of each of the 3 clusters,
    # the M_1 factor the last coordinate of the first cluster
    assert pat.diag_slices == ((0, 3, 5), (2,))


def test_weyr_pattern_single_eigenvalue_cases():
    # partition (1,1,1) is a single Jordan block: commutant = polynomials in
    # it, one diagonal chain and the two strictly-upper nilpotent chains
    pat = weyr_pattern(WeyrStructure(F3, ((F3.one, (1, 1, 1)),)))
    assert pat.lambda_partition == ((1, 3),)
    assert pat.offdiag_positions == frozenset({(0, 2), (1, 2)})
    assert pat.dimension() == 3
    # one row cluster: W is scalar and the commutant is all of M_3
    pat = weyr_pattern(WeyrStructure(F3, ((F3.zero, (3,)),)))
    assert pat.lambda_partition == ((3, 1),)
    assert pat.offdiag_positions == frozenset()
    assert pat.dimension() == 9


def test_weyr_pattern_rejects_multi_block():
    st = WeyrStructure(F3, ((F3.zero, (1,)), (F3.one, (1,))))
    with pytest.raises(UsageError):
        weyr_pattern(st)


def test_weyr_pattern_all_partitions_to_5():
    for n in range(1, 6):
        for part in partitions_of(n):
            pat = weyr_pattern(WeyrStructure(F2, ((F2.zero, part),)))
            assert pat.dimension() == sum(p * p for p in part)
            assert sum(d * e for d, e in pat.lambda_partition) == n


def test_structure_lambda_concatenates():
    st = WeyrStructure(F3, ((F3.zero, (2, 1)), (F3.one, (1,))))
    lam = structure_lambda(st)
    assert sorted(lam) == sorted(((1, 2), (1, 1), (1, 1)))


# -- reduction surjectivity --------------------------------------------------

@pytest.mark.parametrize("kind", KINDS)
def test_reduction_surjectivity_examples(kind):
    for rows in ([[0, 1], [0, 0]], [[1, 0], [0, 2]], [[0, 0], [0, 0]]):
        rep = check_reduction_surjectivity(fmat(F3, rows), kind)
        assert rep.surjective
        assert rep.witness is None
        assert rep.group_size_ring % rep.group_size_residue == 0


def test_reduction_surjectivity_requires_weyr():
    with pytest.raises(UsageError):
        check_reduction_surjectivity(fmat(F3, [[0, 0], [1, 0]]), WITT)


# -- determinant-condition groups --------------------------------------------

def test_x_lambda_elements_counts():
    # lambda = ((1,1),): units with u = 1: one point over a field
    pts = x_lambda_elements(((1, 1),), F3)
    assert len(pts) == 1
    # ((1,1),(1,1)): pairs (u, u^{-1})
    pts = x_lambda_elements(((1, 1), (1, 1)), F3)
    assert len(pts) == 2
    # ((2,1),): SL_2(F_2)
    pts = x_lambda_elements(((2, 1),), F2)
    assert len(pts) == 6
    # ((1,2),): square roots of unity
    assert len(x_lambda_elements(((1, 2),), F3)) == 2
    assert len(x_lambda_elements(((1, 2),), F2)) == 1


def test_x_lambda_elements_over_ring():
    R = LocalRing.get(F2, DUAL)
    # dets of units of F_2[t]/t^2 are 1 and 1+t; squares kill the t part
    pts = x_lambda_elements(((1, 2),), R)
    assert len(pts) == 2
    for (m,) in pts:
        assert (m.det() ** 2) == R.one


def test_x_lambda_validation_and_budget():
    with pytest.raises(UsageError):
        x_lambda_elements((), F2)
    with pytest.raises(UsageError):
        x_lambda_elements(((0, 1),), F2)
    with pytest.raises(BudgetExceededError):
        x_lambda_elements(((2, 1), (2, 1)), F3, budget=100)


@pytest.mark.parametrize("kind", KINDS)
def test_x_lambda_lift_membership(kind):
    R = LocalRing.get(F3, kind)
    lam = ((2, 1), (1, 2))
    for point in x_lambda_elements(lam, F3, budget=100_000):
        lifted = x_lambda_lift(point, lam, R)
        acc = R.one
        for (d, e), m in zip(lam, lifted):
            acc = acc * m.det() ** e
        assert acc == R.one
        assert all(m.reduce() == pm for m, pm in zip(lifted, point))


@pytest.mark.parametrize("kind", KINDS)
def test_x_lambda_surjectivity_methods_agree(kind):
    # a shape small enough to run literally but eligible for the determinant
    # reduction: both must return True
    lam = ((2, 2), (1, 1))
    assert check_x_lambda_surjectivity(lam, kind, F2, method="literal")
    assert check_x_lambda_surjectivity(lam, kind, F2, method="determinant")
    assert check_x_lambda_surjectivity(lam, kind, F2, method="auto")


def test_x_lambda_surjectivity_p_divides_e():
    # exponent divisible by p: Teichmuller lifts already satisfy the condition
    for kind in KINDS:
        assert check_x_lambda_surjectivity(((1, 2),), kind, F2)
        assert check_x_lambda_surjectivity(((1, 3),), kind, F3)


def test_x_lambda_surjectivity_bad_method():
    with pytest.raises(UsageError):
        check_x_lambda_surjectivity(((1, 1),), WITT, F2, method="magic")


# -- consistency of the pattern with the commutant unit group ----------------

@pytest.mark.parametrize("part", [(2,), (1, 1), (2, 1), (2, 2)])
def test_pattern_lambda_counts_unit_group(part):
    # |C(x)^x over F_q| with det-1... the reductive part of the det-1
    # centraliser group has |X_lambda| elements and the unipotent radical is
    # a q-group of dimension = number of off-diagonal chains
    W = build_basic_weyr(F2.zero, part, F2)
    pat = weyr_pattern(WeyrStructure(F2, ((F2.zero, part),)))
    group = centralizer_group(W, sl=True)
    x_pts = x_lambda_elements(pat.lambda_partition, F2, budget=100_000)
    assert len(group) == len(x_pts) * 2 ** len(pat.offdiag_positions)
