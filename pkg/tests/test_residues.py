"""Residue boxes B_q and the finite Fourier transform over them."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from gaussgold.core import GaussInt, divide_into_box, gcd, in_box
from gaussgold.ramanujan import canonical_moduli
from gaussgold.residues import build_box, dft, inverse_dft, orthogonality_sum

small = st.integers(min_value=-30, max_value=30)
gauss = st.builds(GaussInt, small, small)


def _moduli_sample():
    return [GaussInt(1, 1), GaussInt(2, 1), GaussInt(3, 0), GaussInt(3, 2), GaussInt(4, 1)]


def test_box_is_complete_residue_system():
    for q in _moduli_sample():
        box = build_box(q)
        assert len(box.points) == q.norm
        assert len(set(box.points)) == q.norm
        for r in box.points:
            assert in_box(r, q)
        # distinct residues mod q
        reduced_forms = {divide_into_box(r, q)[1] for r in box.points}
        assert len(reduced_forms) == q.norm


def test_reduced_residues_are_coprime():
    for q in _moduli_sample():
        box = build_box(q)
        for r in box.points:
            assert (r in box.reduced) == gcd(r, q).is_unit()


@given(gauss, st.sampled_from(_moduli_sample()))
def test_reduce_is_canonical_residue(z, q):
    box = build_box(q)
    r = box.reduce(z)
    assert in_box(r, q)
    # difference is a multiple of q
    diff = z - r
    w = diff * q.conj()
    assert w.re % q.norm == 0 and w.im % q.norm == 0


def test_position_indexes_points():
    for q in _moduli_sample():
        box = build_box(q)
        for i, r in enumerate(box.points):
            assert box.position(r) == i


def test_orthogonality_exact():
    for q in _moduli_sample():
        nq = q.norm
        for n in build_box(q).points:
            s = orthogonality_sum(q, n)
            divisible = (n * q).re % nq == 0 and (n * q).im % nq == 0
            expected = nq if divisible else 0.0
            assert abs(s - expected) < 1e-9 * nq


def test_dft_round_trip_and_linearity():
    rng = np.random.default_rng(7)
    for q in _moduli_sample():
        box = build_box(q)
        f = rng.standard_normal(q.norm) + 1j * rng.standard_normal(q.norm)
        g = rng.standard_normal(q.norm) + 1j * rng.standard_normal(q.norm)
        assert np.allclose(inverse_dft(box, dft(box, f)), f, atol=1e-12)
        assert np.allclose(
            dft(box, 2.0 * f + g), 2.0 * dft(box, f) + dft(box, g), atol=1e-12
        )


def test_dft_batch_matches_single():
    rng = np.random.default_rng(8)
    q = GaussInt(3, 2)
    box = build_box(q)
    batch = rng.standard_normal((5, q.norm)) + 1j * rng.standard_normal((5, q.norm))
    stacked = dft(box, batch)
    for i in range(5):
        assert np.allclose(stacked[i], dft(box, batch[i]), atol=1e-12)


def test_dft_parseval():
    rng = np.random.default_rng(9)
    for q in _moduli_sample():
        box = build_box(q)
        f = rng.standard_normal(q.norm) + 1j * rng.standard_normal(q.norm)
        f_hat = dft(box, f)
        assert np.sum(np.abs(f_hat) ** 2) == pytest.approx(
            q.norm * np.sum(np.abs(f) ** 2), rel=1e-12
        )


def test_dft_of_delta_is_flat_magnitude():
    q = GaussInt(2, 1)
    box = build_box(q)
    delta = np.zeros(q.norm, dtype=complex)
    delta[0] = 1.0  # the zero residue sits at index 0 of the sorted box
    assert box.points[box.position(GaussInt(0, 0))] == GaussInt(0, 0)
    flat = dft(box, delta)
    assert np.allclose(np.abs(flat), 1.0)


def test_box_sizes_match_phi(table_small):
    for q in canonical_moduli(2, 80):
        assert len(build_box(q).reduced) == table_small.phi(q)
