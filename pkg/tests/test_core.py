"""Exact ring arithmetic, canonical associates, division, gcd."""

import math

import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussgold.core import (
    I,
    ONE,
    UNITS,
    ZERO,
    GaussInt,
    RationalPoint,
    arg_angle,
    divide_into_box,
    exact_divide,
    gcd,
    in_box,
    is_coprime,
    pairing,
    pairing_int,
)

small = st.integers(min_value=-50, max_value=50)
gauss = st.builds(GaussInt, small, small)
gauss_nz = gauss.filter(bool)


def test_ring_basics():
    a, b = GaussInt(3, -2), GaussInt(-1, 4)
    assert a + b == GaussInt(2, 2)
    assert a - b == GaussInt(4, -6)
    assert a * b == GaussInt(5, 14)
    assert -a == GaussInt(-3, 2)
    assert a.conj() == GaussInt(3, 2)
    assert a.norm == 13
    assert (a * b).norm == a.norm * b.norm
    assert not ZERO and ONE and I


def test_coordinates_must_be_ints():
    with pytest.raises(TypeError):
        GaussInt(1.0, 0)


@given(gauss, gauss)
def test_norm_multiplicative(a, b):
    assert (a * b).norm == a.norm * b.norm


@given(gauss)
def test_canonical_idempotent_and_in_quadrant(z):
    c = z.canonical()
    assert c.canonical() == c
    if z:
        assert c.re > 0 and c.im >= 0
        assert c.norm == z.norm
        assert z.unit_to_canonical() * z == c
    else:
        assert c == ZERO


@given(gauss_nz)
def test_associates_share_canonical(z):
    forms = {(u * z).canonical() for u in UNITS}
    assert forms == {z.canonical()}


def test_even_iff_one_plus_i_divides():
    for re in range(-6, 7):
        for im in range(-6, 7):
            z = GaussInt(re, im)
            assert z.is_even() == (exact_divide(z, GaussInt(1, 1)) is not None)


@given(gauss, gauss_nz)
def test_division_into_box(x, q):
    quot, rem = divide_into_box(x, q)
    assert quot * q + rem == x
    assert in_box(rem, q)


def test_division_by_zero():
    with pytest.raises(ZeroDivisionError):
        divide_into_box(ONE, ZERO)


@given(gauss, gauss)
def test_gcd_divides_both_and_is_canonical(a, b):
    g = gcd(a, b)
    assert g == g.canonical()
    if a or b:
        assert exact_divide(a, g) is not None
        assert exact_divide(b, g) is not None
    else:
        assert g == ZERO


@given(gauss, gauss, gauss)
def test_gcd_common_divisor_divides_gcd(a, b, d):
    if not d:
        return
    g = gcd(a * d, b * d)
    assert exact_divide(g, d.canonical()) is not None


def test_gcd_cycling_pair_terminates():
    # this pair cycles forever under box-remainder division; the
    # nearest-rounding loop must finish and give the ramified prime
    assert gcd(GaussInt(1, 5), GaussInt(-1, 5)) == GaussInt(1, 1)


def test_gcd_known_values():
    assert gcd(GaussInt(12, 0), GaussInt(18, 0)) == GaussInt(6, 0)
    assert gcd(GaussInt(3, 1), GaussInt(1, 3)).norm == 2
    assert gcd(ZERO, GaussInt(-7, 0)) == GaussInt(7, 0)
    assert is_coprime(GaussInt(2, 1), GaussInt(2, -1))


@given(gauss, gauss)
def test_pairing_matches_complex_form(z, w):
    assert pairing_int(z, w) == z.re * w.re + z.im * w.im
    assert pairing(z.to_complex(), w.to_complex()) == pytest.approx(
        (z * w.conj()).re
    )


@given(gauss, gauss_nz)
def test_exact_divide_round_trip(x, d):
    q = exact_divide(x * d, d)
    assert q == x


def test_exact_divide_rejects_non_divisor():
    assert exact_divide(GaussInt(1, 0), GaussInt(2, 0)) is None
    assert exact_divide(ONE, ZERO) is None


def test_arg_angle_quadrants():
    assert arg_angle(GaussInt(1, 0)) == 0.0
    assert arg_angle(GaussInt(0, 1)) == pytest.approx(math.pi / 2)
    assert arg_angle(GaussInt(-1, 0)) == pytest.approx(math.pi)
    assert arg_angle(GaussInt(1, -1)) == pytest.approx(7 * math.pi / 4)
    with pytest.raises(ValueError):
        arg_angle(ZERO)


def test_rational_point_validation_and_coords():
    # the box of 1+i is {0, i}, so i is its only reduced numerator
    p = RationalPoint(I, GaussInt(1, 1))
    u, v = p.torus_coords()
    assert (u, v) == (0.5, 0.5)
    with pytest.raises(ValueError):
        RationalPoint(GaussInt(2, 0), GaussInt(2, 0))  # not reduced
    with pytest.raises(ValueError):
        RationalPoint(ONE, ZERO)
    with pytest.raises(ValueError):
        RationalPoint(GaussInt(1, 0), GaussInt(1, 1))  # outside the box


def test_rational_point_coords_in_unit_square():
    from gaussgold.residues import build_box

    for q in (GaussInt(2, 1), GaussInt(3, 0), GaussInt(2, 2)):
        for a in build_box(q).reduced:
            x, y = RationalPoint(a, q).torus_coords()
            assert 0.0 <= x < 1.0 and 0.0 <= y < 1.0
