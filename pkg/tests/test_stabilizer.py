"""Scalar-coset stabilisers C_S(x+Z) = <v> C_S(x) and the block action of the
lifted witness w."""

import itertools
import random

import pytest

from l2rep.centralizer import centralizer_basis
from l2rep.errors import UsageError
from l2rep.fields import FiniteField
from l2rep.matrices import Matrix
from l2rep.rings import DUAL, KINDS, WITT, LocalRing
from l2rep.stabilizer import (
    build_v,
    coset_stabilizer,
    find_shift,
    lift_w,
    verify_w_block_action,
)

F2 = FiniteField.get(2)
F3 = FiniteField.get(3)


def fmat(F, rows):
    return Matrix(F, [[F.elem(c) for c in r] for r in rows])


def all_matrices(F, n):
    for entries in itertools.product(F.elements, repeat=n * n):
        yield Matrix(F, [list(entries[i * n:(i + 1) * n]) for i in range(n)])


def brute_coset_stab(x):
    """All det-1 g with g x g^-1 = x + scalar."""
    F = x.ring
    out = []
    for g in all_matrices(F, x.n):
        if g.det() != F.one:
            continue
        if (g * x * g.inverse() - x).is_scalar():
            out.append(g)
    return out


# -- shift detection ---------------------------------------------------------

def test_find_shift_worked_example():
    x = fmat(F2, [[0, 0], [0, 1]])
    lam, sigma = find_shift(x)
    assert lam == F2.one
    assert sigma == (1, 0)


def test_find_shift_none():
    # over F_3 the spectrum {0, 1} admits no common shift
    assert find_shift(fmat(F3, [[0, 0], [0, 1]])) is None
    # a single eigenvalue can never shift onto itself
    assert find_shift(fmat(F3, [[1, 0], [0, 1]])) is None
    assert find_shift(Matrix.zero(F2, 2)) is None


def test_find_shift_partition_mismatch_blocks():
    # eigenvalues 0 and 1 with different partitions: 0 has (1,1), 1 has (2,)
    # shifting 0 -> 1 would need equal partitions
    x = fmat(F2, [[0, 1, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    # block order: eigenvalue 0 partition (1,1) then eigenvalue 1 partition (2,)
    assert find_shift(x) is None


def test_find_shift_full_orbit_p3():
    x = fmat(F3, [[0, 0, 0], [0, 1, 0], [0, 0, 2]])
    lam, sigma = find_shift(x)
    # the smallest-index nonzero shift is reported; sigma is a 3-cycle
    assert lam == F3.one
    assert sigma == (1, 2, 0)


def test_find_shift_requires_weyr():
    with pytest.raises(UsageError):
        find_shift(fmat(F2, [[0, 0], [1, 0]]))


# -- witness construction ----------------------------------------------------

def test_build_v_worked_example():
    x = fmat(F2, [[0, 0], [0, 1]])
    lam, sigma = find_shift(x)
    v = build_v(x, lam, sigma)
    assert v == fmat(F2, [[0, 1], [1, 0]])


def test_lift_w_worked_example():
    x = fmat(F2, [[0, 0], [0, 1]])
    lam, sigma = find_shift(x)
    v = build_v(x, lam, sigma)
    # p = 2 determinant repair: entrywise lift has det -1, fixed by a sign
    W2 = LocalRing.get(F2, WITT)
    w = lift_w(v, WITT)
    assert w.ring is W2
    assert w == Matrix(W2, [[W2.zero, -W2.one], [W2.one, W2.zero]])
    assert w.det() == W2.one
    # dual numbers in characteristic 2: -1 = 1, no repair needed
    D2 = LocalRing.get(F2, DUAL)
    wd = lift_w(v, DUAL)
    assert wd == v.teichmuller_lift(D2)


def test_build_v_odd_p_det_one_without_repair():
    x = fmat(F3, [[0, 0, 0], [0, 1, 0], [0, 0, 2]])
    lam, sigma = find_shift(x)
    v = build_v(x, lam, sigma)
    assert v.det() == F3.one and (v ** 3).is_identity()
    for kind in KINDS:
        w = lift_w(v, kind)
        assert w == v.teichmuller_lift(LocalRing.get(F3, kind))


# -- the decomposition, exhaustively at desk scale ---------------------------

def test_coset_stabilizer_brute_sweep_f2():
    for x in all_matrices(F2, 2):
        data = coset_stabilizer(x)
        assert set(data.coset_elements) == set(brute_coset_stab(x))
        assert data.index in (1, 2)
        assert len(data.coset_elements) == data.index * len(data.centralizer)
        if data.shift is not None:
            shifted = x + Matrix.scalar(F2, 2, data.shift)
            assert data.v * x * data.v.inverse() == shifted
            assert data.w.reduce() == data.v
            assert data.w.det() == data.w.ring.one


def test_coset_stabilizer_brute_sweep_f3():
    for x in all_matrices(F3, 2):
        data = coset_stabilizer(x)
        assert set(data.coset_elements) == set(brute_coset_stab(x))
        assert data.index in (1, 3)


def test_scalar_x_has_trivial_quotient():
    data = coset_stabilizer(Matrix.zero(F3, 2))
    assert data.index == 1
    assert data.shift is None
    assert data.v.is_identity()
    assert len(data.centralizer) == 24  # all of SL_2(F_3)


def test_non_weyr_fallback_path():
    # irreducible characteristic polynomial: not similar to any Weyr form
    # over the base field, but x and x+1 share char poly t^2+t+1, so a det-1
    # witness exists and the index is 2
    x = fmat(F2, [[0, 1], [1, 1]])
    data = coset_stabilizer(x)
    assert data.sigma is None
    assert data.index == 2
    assert (data.v * x * data.v.inverse() - x).is_scalar()
    assert data.w.reduce() == data.v and data.w.det() == data.w.ring.one
    assert set(data.coset_elements) == set(brute_coset_stab(x))


# -- level-two consequence: preimages decompose the same way -----------------

def sl2_elements(R):
    out = []
    for entries in itertools.product(R.elements, repeat=4):
        m = Matrix(R, [entries[:2], entries[2:]])
        if m.det() == R.one:
            out.append(m)
    return out


@pytest.mark.parametrize("kind", KINDS)
def test_ring_preimages_decompose(kind):
    R = LocalRing.get(F2, kind)
    s2 = sl2_elements(R)
    assert len(s2) == 48
    x = fmat(F2, [[0, 0], [0, 1]])
    data = coset_stabilizer(x, kind=kind)
    cz = set(data.centralizer)
    coset = set(data.coset_elements)
    pre_cz = {g for g in s2 if g.reduce() in cz}
    pre_coset = {g for g in s2 if g.reduce() in coset}
    w = data.w if kind == WITT else lift_w(data.v, kind)
    spanned = set(pre_cz) | {w * g for g in pre_cz}
    assert spanned == pre_coset
    assert len(pre_coset) == 2 * len(pre_cz)


# -- block action of w on ring centraliser elements --------------------------

def test_verify_w_block_action_exhaustive_basis_and_samples():
    x = fmat(F2, [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    rng = random.Random(0)
    for kind in KINDS:
        R = LocalRing.get(F2, kind)
        alg = centralizer_basis(x, R)
        basis = alg.basis
        for b in basis:
            assert verify_w_block_action(x, b)
        # the action is additive in c, so random combinations add little
        # beyond the basis check; keep a few as a guard
        for _ in range(25):
            c = Matrix.zero(R, 4)
            for b in basis:
                if rng.randrange(2):
                    c = c + b
            assert verify_w_block_action(x, c)


def test_verify_w_block_action_trivial_when_no_shift():
    x = fmat(F3, [[0, 0], [0, 1]])
    R = LocalRing.get(F3, WITT)
    assert verify_w_block_action(x, Matrix.identity(R, 2))


def test_verify_w_block_action_validation():
    R = LocalRing.get(F2, WITT)
    with pytest.raises(UsageError):
        verify_w_block_action(fmat(F2, [[0, 0], [1, 0]]), Matrix.identity(R, 2))
    with pytest.raises(UsageError):
        verify_w_block_action(fmat(F2, [[0, 0], [0, 1]]), Matrix.identity(F2, 2))
