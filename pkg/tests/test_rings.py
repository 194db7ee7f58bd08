"""Both length-two rings against the Z/p^2 model and each other."""

import pytest
from hypothesis import given, settings, strategies as st

from l2rep.errors import UsageError
from l2rep.fields import FiniteField
from l2rep.rings import DUAL, KINDS, WITT, LocalRing

F2 = FiniteField.get(2)
F3 = FiniteField.get(3)
F4 = FiniteField.get(2, 2)
F9 = FiniteField.get(3, 2)


def zp2_image(e):
    """(a0, a1) -> teich(a0) + p*a1 as an integer mod p^2."""
    p = e.ring.field.p
    c0, c1 = e.components()
    return (pow(c0.coeffs[0], p, p * p) + p * c1.coeffs[0]) % (p * p)


@pytest.mark.parametrize("p", (2, 3, 5))
def test_witt_over_prime_field_is_zp2(p):
    R = LocalRing.get(FiniteField.get(p), WITT)
    assert {zp2_image(x) for x in R.elements} == set(range(p * p))
    for x in R.elements:
        for y in R.elements:
            assert zp2_image(x + y) == (zp2_image(x) + zp2_image(y)) % (p * p)
            assert zp2_image(x * y) == (zp2_image(x) * zp2_image(y)) % (p * p)


@pytest.mark.parametrize("p", (2, 3, 5))
def test_from_int_inverts_the_isomorphism(p):
    R = LocalRing.get(FiniteField.get(p), WITT)
    for m in range(p * p):
        assert zp2_image(R.from_int(m)) == m
    D = LocalRing.get(FiniteField.get(p), DUAL)
    for m in range(3 * p):
        assert D.from_int(m) == D.from_int(m % p)


def test_characteristic_distinguishes_the_kinds():
    for F in (F2, F3, F4, F9):
        W = LocalRing.get(F, WITT)
        D = LocalRing.get(F, DUAL)
        p = F.p
        acc_w, acc_d = W.zero, D.zero
        for _ in range(p):
            acc_w = acc_w + W.one
            acc_d = acc_d + D.one
        assert acc_w != W.zero and acc_d == D.zero
        assert W.char == p * p and D.char == p


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("F", (F4, F3), ids=("F4", "F3"))
def test_ring_axioms_exhaustive(F, kind):
    R = LocalRing.get(F, kind)
    els = R.elements
    assert len(els) == F.q ** 2
    for x in els:
        assert x + R.zero == x and x * R.one == x
        assert x + (-x) == R.zero
    for x in els:
        for y in els:
            assert x + y == y + x and x * y == y * x
            for z in els:
                assert (x + y) + z == x + (y + z)
                assert (x * y) * z == x * (y * z)
                assert x * (y + z) == x * y + x * z


@pytest.mark.parametrize("kind", KINDS)
def test_ring_axioms_sampled_f9(kind):
    import random
    R = LocalRing.get(F9, kind)
    rng = random.Random(5)
    els = R.elements
    for _ in range(4000):
        x, y, z = rng.choice(els), rng.choice(els), rng.choice(els)
        assert (x + y) + z == x + (y + z)
        assert (x * y) * z == x * (y * z)
        assert x * (y + z) == x * y + x * z
        assert x * y == y * x


@pytest.mark.parametrize("kind", KINDS)
@pytest.mark.parametrize("F", (F2, F3, F4, F9), ids=("F2", "F3", "F4", "F9"))
def test_units_and_nilpotents(F, kind):
    R = LocalRing.get(F, kind)
    units = R.units()
    assert len(units) == F.q * (F.q - 1)
    for x in units:
        assert x.is_unit() and x * x.inverse() == R.one
    nonunits = [x for x in R.elements if not x.is_unit()]
    assert len(nonunits) == F.q
    for x in nonunits:
        for y in nonunits:
            # the maximal ideal squares to zero
            assert x * y == R.zero


def test_pi_squared_is_zero():
    for F in (F2, F9):
        for kind in KINDS:
            R = LocalRing.get(F, kind)
            pi = R.from_pair(0, F.one.i)
            assert pi != R.zero and pi * pi == R.zero


@pytest.mark.parametrize("kind", KINDS)
def test_teichmuller_is_multiplicative_section(kind):
    for F in (F4, F9):
        R = LocalRing.get(F, kind)
        for a in F.elements:
            assert R.teichmuller(a).reduce() == a
            for b in F.elements:
                assert R.teichmuller(a * b) == R.teichmuller(a) * R.teichmuller(b)


def test_teichmuller_witt_is_the_unique_qth_root_section():
    R = LocalRing.get(F9, WITT)
    for a in F9.elements:
        t = R.teichmuller(a)
        assert t ** 9 == t


def test_reduce_is_a_ring_map():
    for kind in KINDS:
        R = LocalRing.get(F9, kind)
        els = R.elements
        for x in els[:30]:
            for y in els[:30]:
                assert (x + y).reduce() == x.reduce() + y.reduce()
                assert (x * y).reduce() == x.reduce() * y.reduce()


@given(st.integers(0, 80), st.integers(0, 80))
@settings(max_examples=60)
def test_witt_f9_inverse_and_subtraction(i, j):
    R = LocalRing.get(F9, WITT)
    x, y = R.elements[i], R.elements[j]
    assert (x - y) + y == x
    if x.is_unit():
        assert (x / x) == R.one


def test_unknown_kind_rejected():
    with pytest.raises(UsageError):
        LocalRing(F2, "witt3")


def test_elem_conversions():
    R = LocalRing.get(F4, DUAL)
    assert R.elem((F4.one, F4.zero)) == R.one
    assert R.elem(F4.one, F4.zero) == R.one
    assert R.elem(1) == R.one
    with pytest.raises(UsageError):
        R.elem(F4.one)
    W = LocalRing.get(F2, WITT)
    assert W.from_int(3) == W.one + W.one + W.one
