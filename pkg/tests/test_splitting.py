"""Order-p lifts of transvections: obstructions at small (n, q), explicit
witnesses, the dual-numbers section, and the p >= 5 power expansion."""

import pytest

from l2rep.errors import UsageError
from l2rep.fields import FiniteField
from l2rep.matrices import Matrix
from l2rep.rings import DUAL, KINDS, WITT, LocalRing
from l2rep.splitting import (
    check_kernel_structure,
    dual_splitting_section,
    lift_order_search,
    remark_witnesses,
    verify_power_formula,
)

F2 = FiniteField.get(2)
F3 = FiniteField.get(3)
F5 = FiniteField.get(5)


# -- the search --------------------------------------------------------------

def test_no_order_p_lift_at_2_2():
    res = lift_order_search(2, F2, WITT)
    assert res.mode == "exhaustive"
    assert res.found is None
    # every det-1 lift of e_12 was inspected: the fiber has q^(n^2-1) points
    assert res.search_space_size == 8


def test_no_order_p_lift_at_2_5():
    res = lift_order_search(2, F5, WITT)
    assert res.mode == "exhaustive"
    assert res.found is None
    assert res.search_space_size == 125


def test_order_p_lift_found_at_3_2():
    res = lift_order_search(3, F2, WITT)
    assert res.found is not None
    g = res.found
    R = g.ring
    assert (g ** 2).is_identity()
    assert g.det() == R.one
    assert g.reduce() == Matrix.elementary(F2, 3, 0, 1, F2.one)


def test_order_p_lift_found_at_3_3():
    res = lift_order_search(3, F3, WITT)
    assert res.found is not None
    assert (res.found ** 3).is_identity()


def test_dual_kind_transvection_lifts_trivially():
    # over the dual numbers the constant section gives an order-p lift at
    # once, for any n and q
    for F in (F2, F3):
        res = lift_order_search(2, F, DUAL)
        assert res.found is not None
        assert (res.found ** F.p).is_identity()


def test_search_sampled_mode():
    # a budget under the full 2^9 fiber forces the banded + sampled scan;
    # at (3,2) the witness is tridiagonal, so it is still found
    res = lift_order_search(3, F2, WITT, budget=200, rounds=50)
    assert res.mode == "sampled"
    assert res.found is not None


def test_search_validation():
    with pytest.raises(UsageError):
        lift_order_search(2, F2, WITT, target=Matrix.identity(F3, 2))
    bad = Matrix.diagonal(F2, [F2.one, F2.zero])
    with pytest.raises(UsageError):
        lift_order_search(2, F2, WITT, target=bad)


# -- frozen witnesses --------------------------------------------------------

def test_remark_witnesses():
    rem = remark_witnesses()
    assert rem.ok_32 and rem.ok_33
    assert rem.no_lift_22
    assert rem.shape_ok_22
    # all order-2 lifts of e_12 over W_2(F_2) share determinant -1 = (1, 1)
    assert rem.square_lift_dets_22 == ((1, 1),)
    # spot-check the explicit matrices themselves
    R4 = rem.witness_32.ring
    assert (rem.witness_32 ** 2).is_identity() and rem.witness_32.det() == R4.one
    R9 = rem.witness_33.ring
    assert (rem.witness_33 ** 3).is_identity() and rem.witness_33.det() == R9.one
    # (3,2) witness is I + E_12 + 2*diag(1,0,1) over Z/4
    w = rem.witness_32
    assert w == Matrix(R4, [
        [R4.from_int(3), R4.one, R4.zero],
        [R4.zero, R4.one, R4.zero],
        [R4.zero, R4.zero, R4.from_int(3)],
    ])


# -- dual section and kernel structure ---------------------------------------

@pytest.mark.parametrize("q", [2, 3, 4])
def test_dual_splitting_section(q):
    F = FiniteField.get(2, 2) if q == 4 else FiniteField.get(q)
    assert dual_splitting_section(2, F)


def test_dual_splitting_section_sampled():
    assert dual_splitting_section(2, F3, pair_budget=10, rounds=60)


@pytest.mark.parametrize("kind", KINDS)
def test_kernel_structure(kind):
    assert check_kernel_structure(2, F2, kind)
    assert check_kernel_structure(2, F3, kind)


def test_kernel_structure_sampled_pairs():
    assert check_kernel_structure(2, F3, WITT, pair_budget=4)


# -- the p >= 5 power formula ------------------------------------------------

def test_power_formula_2_5_exhaustive():
    assert verify_power_formula(2, F5, exhaustive=True)


def test_power_formula_sampled():
    assert verify_power_formula(2, F5, exhaustive=False, rounds=40, seed=1)


def test_power_formula_rejects_small_p():
    with pytest.raises(UsageError):
        verify_power_formula(2, F3)
    with pytest.raises(UsageError):
        verify_power_formula(2, F2)
