import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from fixedscat.grid import make_grid
from fixedscat.potential import (
    bump_potential,
    fourier_of_potential,
    l2_norm,
    load_potential,
    piecewise_smooth_potential,
    save_potential,
    zero_potential,
)
from fixedscat.spectral import forward_ft


def test_bump_center_value(dom33):
    q = bump_potential(dom33, 1.0, 0.8)
    assert q(np.zeros(3)) == pytest.approx(np.exp(-1))
    assert q.values[16, 16, 16] == pytest.approx(np.exp(-1))


def test_bump_vanishes_at_support_edge(dom33):
    q = bump_potential(dom33, 1.0, 0.8)
    assert q(np.array([0.8, 0.0, 0.0])) == 0.0
    assert q(np.array([0.0, 0.6, 0.0]) * (0.8 / 0.6)) == 0.0


def test_negative_amplitude_range(dom33):
    q = bump_potential(dom33, -2.0, 0.8)
    assert q.values.min() >= -2 * np.exp(-1) - 1e-15
    assert q.values.max() <= 0.0
    assert q.values.dtype == float


def test_support_is_exact(dom33):
    q = bump_potential(dom33, 1.0, 0.6)
    assert np.max(np.abs(q.values[dom33.radius >= 0.6])) == 0.0


@pytest.mark.parametrize("r", [1.0, 1.2])
def test_bump_rejects_large_support(dom17, r):
    with pytest.raises(ValueError):
        bump_potential(dom17, 1.0, r)


def test_shifted_support_must_fit(dom17):
    with pytest.raises(ValueError):
        bump_potential(dom17, 1.0, 0.7, center=(0.4, 0, 0))


def test_poly_center_value(dom33):
    q = piecewise_smooth_potential(dom33, 0.3, 0.8, 4)
    assert q(np.zeros(3)) == pytest.approx(0.3)
    assert q.smoothness_ell == 4


def test_poly_rejects_low_order(dom17):
    with pytest.raises(ValueError):
        piecewise_smooth_potential(dom17, 1.0, 0.8, 3)


def test_poly_radial_derivatives_vanish_at_edge(dom17):
    # (1 - r^2/R^2)^4 has a zero of order 4 at r = R
    q = piecewise_smooth_potential(dom17, 1.0, 0.8, 4)
    r = 0.8 - np.array([1e-2, 5e-3, 2.5e-3])
    vals = q(np.stack([r, 0 * r, 0 * r], axis=-1))
    slopes = np.diff(np.log(vals)) / np.diff(np.log(0.8 - r))
    assert np.allclose(slopes, 4.0, atol=0.02)


def test_poly_l2_norm_against_radial_oracle():
    exact = np.sqrt(4 * np.pi * integrate.quad(lambda r: r * r * (1 - r * r) ** 8, 0, 1)[0])
    # support_r must stay inside B_a, so use a = 1.25 with support 1
    q = piecewise_smooth_potential(make_grid(1.25, 65), 1.0, 1.0, 4)
    assert l2_norm(q) == pytest.approx(exact, rel=2e-3)


def test_zero_frequency_is_mass(bump33):
    val = fourier_of_potential(bump33, np.zeros(3))
    assert abs(val.imag) < 1e-15
    assert val.real == pytest.approx(np.sum(bump33.domain.ball_weights * bump33.values))


@settings(max_examples=20, deadline=None)
@given(st.lists(st.floats(-20, 20), min_size=3, max_size=3))
def test_reality_symmetry(xi):
    q = bump_potential(make_grid(1.0, 17), 0.1, 0.7, center=(0.1, -0.05, 0.0))
    xi = np.asarray(xi)
    assert abs(fourier_of_potential(q, -xi) - np.conj(fourier_of_potential(q, xi))) < 1e-10


def test_direct_transform_matches_dft(bump33):
    xi = np.array([5.0, 0.0, 0.0])
    direct = fourier_of_potential(bump33, xi)
    grid = forward_ft(bump33.values, bump33.domain, padding=4).at(xi)
    assert abs(direct - grid) / abs(direct) < 0.01


def test_radial_family_transform_depends_on_norm(bump33):
    a = fourier_of_potential(bump33, np.array([4.0, 0.0, 0.0]))
    b = fourier_of_potential(bump33, np.array([0.0, 0.0, 4.0]))
    c = fourier_of_potential(bump33, 4.0 * np.array([1.0, 1.0, 1.0]) / np.sqrt(3))
    assert abs(a - b) < 1e-12 * abs(a)
    assert abs(a - c) / abs(a) < 1e-3


def test_save_load_roundtrip(tmp_path, bump17):
    save_potential(bump17, tmp_path / "q")
    back = load_potential(tmp_path / "q.bin")
    np.testing.assert_array_equal(back.values, bump17.values)
    assert back.domain == bump17.domain
    assert back.smoothness_ell == bump17.smoothness_ell
    assert back.label == bump17.label


def test_rejects_values_on_rim(dom17):
    v = dom17.zeros()
    v[0, 8, 8] = 1.0
    from fixedscat.potential import Potential

    with pytest.raises(ValueError):
        Potential(dom17, v, 8, "bad")


def test_zero_potential(dom17):
    z = zero_potential(dom17)
    assert z.is_zero
    assert fourier_of_potential(z, np.ones(3)) == 0
