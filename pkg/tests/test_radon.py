import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fixedscat.grid import fibonacci_sphere, make_grid, unit
from fixedscat.potential import Potential, bump_potential, zero_potential
from fixedscat.radon import (
    antipodal_identity_check,
    moment_identity_check,
    plane_basis,
    radon_transform,
    slice_identity_check,
    symmetric_offsets,
)


def ball_indicator(a=1.25, n=49, r=1.0):
    d = make_grid(a, n)
    func = lambda x: (np.linalg.norm(x, axis=-1) <= r).astype(float)
    return Potential(d, func(d.coords), 8, "indicator", func, r)


def test_disk_area_at_center():
    f = ball_indicator()
    p = radon_transform(f, (0.0, 0.0, 1.0), method="exact")
    mid = np.argmin(np.abs(p.lambdas))
    assert abs(p.lambdas[mid]) < 0.03
    assert abs(p.values[mid] - np.pi * (1 - p.lambdas[mid] ** 2)) / np.pi < 0.02


def test_empty_slices_outside_unit_ball():
    f = ball_indicator()
    p = radon_transform(f, unit([1.0, 2.0, 0.5]), method="exact")
    assert np.all(p.values[np.abs(p.lambdas) > 1.0] == 0)


@pytest.mark.parametrize("method", ["linear", "cubic"])
def test_radial_profile_is_even(bump33, method):
    p = radon_transform(bump33, unit([0.2, 0.3, 0.9]), method=method)
    assert np.max(np.abs(p.values - p.values[::-1])) < 1e-6 * np.max(p.values)


def test_offsets_antisymmetric():
    lam = symmetric_offsets(1.3, 37)
    np.testing.assert_array_equal(lam, -lam[::-1])


@given(st.lists(st.floats(-1, 1), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-3))
def test_plane_basis_shared_and_orthonormal(v):
    b = unit(v)
    e1, e2 = plane_basis(b)
    f1, f2 = plane_basis(-b)
    np.testing.assert_array_equal(e1, f1)
    np.testing.assert_array_equal(e2, f2)
    m = np.stack([b, e1, e2])
    np.testing.assert_allclose(m @ m.T, np.eye(3), atol=1e-14)


def test_moment_identity(bump33):
    assert moment_identity_check(bump33, unit([1, 1, 0])) < 0.01


def test_moment_zero(zero17):
    assert moment_identity_check(zero17, (1, 0, 0)) == 0.0
    assert slice_identity_check(zero17, (1, 0, 0), 3.0) == 0.0


def test_slice_reduces_to_moment(bump33):
    b = unit([0.1, 0.7, 0.3])
    assert slice_identity_check(bump33, b, 0.0) == pytest.approx(moment_identity_check(bump33, b), rel=1e-8)


def test_slice_identity(bump33):
    assert slice_identity_check(bump33, unit([0.4, -0.2, 0.9]), 5.0) < 0.01


def test_identities_shrink_under_refinement():
    b = unit([0.4, -0.2, 0.9])
    m_err, s_err = [], []
    for n in (17, 33):
        q = bump_potential(make_grid(1.0, n), 0.1, 0.8)
        m_err.append(moment_identity_check(q, b))
        s_err.append(slice_identity_check(q, b, 5.0))
    assert m_err[1] < m_err[0]
    assert s_err[1] < s_err[0]


def test_antipodal_zero_potential(zero17):
    assert antipodal_identity_check(zero17, fibonacci_sphere(6)) == 0.0


def test_antipodal_bump(bump17):
    assert antipodal_identity_check(bump17, fibonacci_sphere(8)) < 1e-10


def test_antipodal_shifted_bump(dom17):
    q = bump_potential(dom17, 0.1, 0.5, center=(0.2, 0.1, -0.15))
    assert antipodal_identity_check(q, fibonacci_sphere(8)) < 1e-6


def test_linearity(bump17, dom17):
    g = bump_potential(dom17, 0.3, 0.5, center=(0.2, 0.0, 0.0))
    s = Potential(dom17, 2 * bump17.values - g.values, 8, "combo")
    b = unit([1, 2, 3])
    lhs = radon_transform(s, b).values
    rhs = 2 * radon_transform(bump17, b).values - radon_transform(g, b).values
    np.testing.assert_allclose(lhs, rhs, atol=1e-14)


def test_rejects_few_offsets(bump17):
    with pytest.raises(ValueError):
        radon_transform(bump17, (0, 0, 1), 8)


def test_profile_csv(tmp_path, bump17):
    p = radon_transform(bump17, (0, 0, 1))
    lines = p.to_csv(tmp_path / "p.csv", "config_hash=y").read_text().splitlines()
    assert lines[:2] == ["# config_hash=y", "lambda,value"]
    assert len(lines) == 2 + len(p.lambdas)
