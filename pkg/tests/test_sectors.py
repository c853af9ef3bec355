"""Sector measures on the lattice, convolutions, exponential sums."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussgold.core import GaussInt
from gaussgold.errors import CapacityError, ConfigError
from gaussgold.sectors import (
    LatticeArray,
    Sector,
    build_A,
    build_M,
    convolve,
    convolve_power,
    exp_sum_A,
    exp_sum_M,
    full_sector,
    load_lattice_array,
    make_sector,
    sector_boundary_distance,
)

TWO_PI = 2.0 * math.pi


def test_sector_length_and_membership():
    s = make_sector(0.0, math.pi / 4)
    assert s.length == pytest.approx(math.pi / 4)
    assert s.contains(GaussInt(5, 1))
    assert not s.contains(GaussInt(1, 5))
    assert s.contains(GaussInt(1, 0))  # closed at theta0
    assert not s.contains(GaussInt(1, 1))  # open at theta1
    assert full_sector().contains(GaussInt(-3, -7))


def test_sector_wraparound():
    s = make_sector(7 * math.pi / 4, math.pi / 4)
    assert s.length == pytest.approx(math.pi / 2)
    assert s.contains(GaussInt(5, 1))
    assert s.contains(GaussInt(5, -1))
    assert not s.contains(GaussInt(0, 1))


def test_sector_rejects_bad_endpoints():
    with pytest.raises(ConfigError):
        Sector(-1.0, 1.0)


@given(st.floats(0.0, 6.28), st.floats(0.01, 6.28))
def test_mask_agrees_with_contains(theta0, dtheta):
    s = make_sector(theta0, (theta0 + dtheta) % TWO_PI)
    pts = [GaussInt(a, b) for a in range(-4, 5) for b in range(-4, 5) if a or b]
    re = np.array([p.re for p in pts])
    im = np.array([p.im for p in pts])
    mask = s.mask(re, im)
    assert mask.tolist() == [s.contains(p) for p in pts]


def test_boundary_distance():
    s = make_sector(0.0, math.pi / 2)
    assert sector_boundary_distance(s, GaussInt(1, 1)) == pytest.approx(math.pi / 4)
    assert sector_boundary_distance(s, GaussInt(1, 0)) == 0.0
    assert sector_boundary_distance(s, GaussInt(-1, 0)) == 0.0  # outside
    assert sector_boundary_distance(full_sector(), GaussInt(1, 0)) == math.inf


def test_count_measure_small(table_small):
    m = build_M(table_small, 10, full_sector())
    assert int(np.count_nonzero(m.values)) == 28
    assert m.total_mass() == pytest.approx(2.8)
    assert m.value_at(GaussInt(0, 0)) == 0.0
    assert m.value_at(GaussInt(1, 2)) == pytest.approx(1 / 10)


def test_count_measure_mass_tends_to_pi(table_10k):
    m = build_M(table_10k, 10**4, full_sector())
    assert m.total_mass() == pytest.approx(math.pi, rel=2e-3)


def test_sector_count_measure_mass(table_10k):
    # ~ N |w| / 2 points, each weighted |w| / (2 pi N): mass -> |w|^2/(4 pi)
    s = make_sector(0.0, math.pi / 4)
    m = build_M(table_10k, 10**4, s)
    assert m.total_mass() == pytest.approx(s.length**2 / (4 * math.pi), rel=2e-2)


def test_weighted_measure_small(table_small):
    a = build_A(table_small, 3, full_sector())
    assert a.total_mass() == pytest.approx(4 * math.log(2) / 3)
    assert a.value_at(GaussInt(1, 1)) == pytest.approx(math.log(2) / 3)
    assert a.value_at(GaussInt(1, 0)) == 0.0


def test_weighted_measure_normalization_balances_sector(table_10k):
    # the 2 pi / |w| prefactor keeps sector masses comparable to the full one
    full = build_A(table_10k, 10**4, full_sector()).total_mass()
    sect = build_A(table_10k, 10**4, make_sector(0.0, math.pi / 2)).total_mass()
    assert sect == pytest.approx(full, rel=0.1)


def test_capacity_error_when_table_too_small(table_small):
    with pytest.raises(CapacityError):
        build_M(table_small, 10**6, full_sector())


def test_convolution_matches_direct(table_small):
    m = build_M(table_small, 30, full_sector())
    conv = convolve(m, m)
    assert conv.half_width == 2 * m.half_width
    # direct quadratic check at a few targets
    for target in (GaussInt(0, 0), GaussInt(2, 0), GaussInt(3, 1), GaussInt(-4, 2)):
        direct = 0.0
        w = m.half_width
        for a in range(-w, w + 1):
            for b in range(-w, w + 1):
                other = target - GaussInt(a, b)
                if abs(other.re) <= w and abs(other.im) <= w:
                    direct += m.value_at(GaussInt(a, b)) * m.value_at(other)
        assert conv.value_at(target) == pytest.approx(direct, abs=1e-12)


def test_convolve_power_orders(table_small):
    m = build_M(table_small, 30, full_sector())
    c2 = convolve_power(m, 2)
    c3 = convolve_power(m, 3, {"note": "test"})
    assert c2.order == 2 and c3.order == 3
    assert c3.normalization == {"note": "test"}
    direct = convolve(convolve(m, m), m)
    assert np.allclose(c3.values.values, direct.values, atol=1e-12)
    assert c2.values.total_mass() == pytest.approx(m.total_mass() ** 2, rel=1e-9)
    with pytest.raises(ValueError):
        convolve_power(m, 4)


def test_exp_sum_matches_direct(table_small):
    sector = make_sector(0.0, math.pi)
    n = 100
    rng = np.random.default_rng(5)
    for _ in range(5):
        beta = complex(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3))
        got = exp_sum_M(table_small, n, sector, beta)
        direct = 0.0
        for a in range(-10, 11):
            for b in range(-10, 11):
                z = GaussInt(a, b)
                if z and z.norm < n and sector.contains(z):
                    direct += np.exp(-2j * np.pi * (a * beta.real + b * beta.imag))
        direct *= sector.length / (TWO_PI * n)
        assert got == pytest.approx(direct, abs=1e-12)


def test_exp_sum_at_zero_is_mass(table_small):
    sector = make_sector(0.3, 2.0)
    n = 500
    assert exp_sum_M(table_small, n, sector, 0j).real == pytest.approx(
        build_M(table_small, n, sector).total_mass()
    )
    lam_sum = exp_sum_A(table_small, n, sector, 0j).real
    a = build_A(table_small, n, sector)
    assert lam_sum == pytest.approx(
        a.total_mass() * sector.length * n / TWO_PI, rel=1e-12
    )


def test_exp_sum_A_periodic(table_small):
    alpha = complex(0.37, -0.21)
    one = exp_sum_A(table_small, 300, full_sector(), alpha)
    shifted = exp_sum_A(table_small, 300, full_sector(), complex(alpha.real + 1, alpha.imag - 2))
    assert one == pytest.approx(shifted, abs=1e-9)


def test_lattice_array_value_lookup(table_small):
    m = build_M(table_small, 50, full_sector())
    assert m.value_at(GaussInt(m.half_width + 3, 0)) == 0.0  # outside support
    re, im = m.coords()
    assert re.shape == m.values.shape == im.shape


def test_lattice_array_io_round_trip(tmp_path, table_small):
    m = build_A(table_small, 200, make_sector(0.0, 2.0))
    path = tmp_path / "measure.ggl"
    m.write_binary(path)
    back = load_lattice_array(path)
    assert back.half_width == m.half_width
    assert np.array_equal(back.values, m.values)

    csv_path = tmp_path / "measure.csv"
    m.write_csv(csv_path)
    rows = csv_path.read_text().strip().splitlines()
    assert rows[0] == "re,im,value"
    assert len(rows) == 1 + np.count_nonzero(m.values)


def test_lattice_array_csv_with_zeros(tmp_path, table_small):
    m = build_M(table_small, 10, full_sector())
    path = tmp_path / "full.csv"
    m.write_csv(path, include_zeros=True)
    rows = path.read_text().strip().splitlines()
    side = 2 * m.half_width + 1
    assert len(rows) == 1 + side * side
