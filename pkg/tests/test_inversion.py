import numpy as np
import pytest

from fixedscat.grid import fibonacci_sphere, make_grid
from fixedscat.inversion import (
    FourierSamples,
    born_table,
    data_to_fourier_samples,
    reconstruct,
    relative_l2_error,
)
from fixedscat.potential import bump_potential, fourier_of_potential, zero_potential
from fixedscat.solver import AmplitudeTable, fixed_direction_dataset

A0 = np.array([0.0, 0.0, 1.0])


def table_of(betas, ks, values):
    b = np.asarray(betas, float)
    return AmplitudeTable(b, np.tile(A0, (len(b), 1)), np.asarray(ks, complex), np.asarray(values, complex))


def test_forward_direction_gives_zero_frequency():
    s = data_to_fourier_samples(table_of([A0], [3.0], [0.1]), A0)
    np.testing.assert_array_equal(s.xi[0], 0.0)
    assert s.values[0] == pytest.approx(-4 * np.pi * 0.1)


def test_backward_direction_gives_largest_frequency():
    s = data_to_fourier_samples(table_of([-A0], [3.0], [0.0]), A0)
    assert np.linalg.norm(s.xi[0]) == pytest.approx(6.0)


def test_rejects_other_incidence():
    t = table_of([A0], [1.0], [0.0])
    with pytest.raises(ValueError):
        data_to_fourier_samples(t, (1.0, 0.0, 0.0))


def test_reflection_conjugates():
    s = FourierSamples(np.array([[1.0, 2.0, 3.0]]), np.array([1 + 2j]))
    r = s.reflected()
    np.testing.assert_array_equal(r.xi[1], -s.xi[0])
    assert r.values[1] == 1 - 2j


def test_samples_fill_half_space_cone():
    dirs = fibonacci_sphere(200)
    t = table_of(dirs.directions, np.full(200, 4.0), np.zeros(200))
    xi = data_to_fourier_samples(t, A0).xi
    # xi.alpha0 = k (1 - beta.alpha0) >= 0, and every sample lies in the reachable set
    assert np.all(xi @ A0 >= -1e-12)
    assert np.all(np.sum(xi * xi, axis=1) <= 2 * 4.0 * (xi @ A0) + 1e-9)


def test_born_table_matches_direct_transform(bump17):
    dirs = fibonacci_sphere(12)
    t = born_table(bump17, A0, dirs, [2.0, 5.0])
    xi = np.real(t.ks)[:, None] * (A0 - t.betas)
    ref = -fourier_of_potential(bump17, xi) / (4 * np.pi)
    assert np.max(np.abs(t.values - ref)) < 1e-4 * np.max(np.abs(ref))
    direct = born_table(bump17, A0, dirs, [2.0, 5.0], method="direct")
    assert np.max(np.abs(direct.values - ref)) < 1e-14


def test_zero_data_reconstructs_zero(dom17):
    q = zero_potential(dom17)
    dirs = fibonacci_sphere(64)
    t = fixed_direction_dataset(q, A0, dirs, [2.0, 4.0])
    with pytest.warns(RuntimeWarning):
        res = reconstruct(data_to_fourier_samples(t, A0), dom17, truth=q)
    assert not np.any(res.q_rec.values)


def test_empty_samples_rejected(dom17):
    with pytest.raises(ValueError):
        reconstruct(FourierSamples(np.zeros((0, 3)), np.zeros(0)), dom17)


def test_bad_fill_mode_rejected(dom17):
    s = FourierSamples(np.zeros((1, 3)), np.ones(1))
    with pytest.raises(ValueError):
        reconstruct(s, dom17, reg_fill="spline")


def test_low_coverage_warns(bump17):
    t = born_table(bump17, A0, fibonacci_sphere(8), [3.0])
    with pytest.warns(RuntimeWarning, match="coverage"):
        reconstruct(data_to_fourier_samples(t, A0), bump17.domain)


@pytest.fixture(scope="module")
def born_run():
    d = make_grid(1.0, 17)
    q = bump_potential(d, 0.05, 0.8)
    dirs = fibonacci_sphere(2048)
    ks = np.arange(0.5, 24.1, 0.5)
    t = born_table(q, A0, dirs, ks)
    return q, data_to_fourier_samples(t, A0)


def test_reconstruction_is_real_before_truncation(born_run):
    q, s = born_run
    res = reconstruct(s, q.domain, truth=q)
    assert res.imag_max < 1e-10 * np.max(np.abs(q.values))
    assert 0 <= res.coverage_map <= 1
    assert res.rel_l2_error >= 0


def test_exact_born_data_reconstruct(born_run):
    q, s = born_run
    res = reconstruct(s, q.domain, truth=q)
    assert res.rel_l2_error < 0.15
    assert res.coverage_map > 0.5


def test_radial_fill_helps(born_run):
    q, s = born_run
    zero = reconstruct(s, q.domain, truth=q)
    radial = reconstruct(s, q.domain, reg_fill="radial", truth=q)
    assert radial.rel_l2_error < zero.rel_l2_error


def test_relative_error_of_truth_is_zero(bump17):
    assert relative_l2_error(bump17, bump17) == 0.0
