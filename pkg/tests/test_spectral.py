import numpy as np
import pytest

from fixedscat.grid import ball_quadrature, fibonacci_sphere, make_grid
from fixedscat.potential import bump_potential, fourier_of_potential, piecewise_smooth_potential, zero_potential
from fixedscat.solver import solve_eps
from fixedscat.spectral import (
    MAX_ETA_A,
    box_transform,
    complex_freq_transform,
    convolution_check,
    direct_complex_transform,
    eps_tilde_residual,
    forward_ft,
    inverse_ft,
    parseval_gap,
)

Z = (0.0, 0.0, 1.0)


def test_point_mass_flat_spectrum(dom17):
    f = dom17.zeros()
    f[8, 8, 8] = 1.0 / dom17.cell_volume
    spec = forward_ft(f, dom17)
    np.testing.assert_allclose(spec.values, 1.0, atol=1e-12)


def test_even_field_real_spectrum(dom17, rng):
    g = rng.normal(size=dom17.shape)
    g = g + g[::-1, ::-1, ::-1]
    spec = forward_ft(g, dom17, padding=2)
    # the dual grid has even size, so its first row has no mirror partner
    assert np.max(np.abs(spec.values[1:, 1:, 1:].imag)) < 1e-10 * np.max(np.abs(spec.values))


def test_zero_frequency_equals_mass(bump33):
    spec = forward_ft(bump33.values, bump33.domain)
    mid = spec.size // 2
    assert abs(spec.values[mid, mid, mid] - ball_quadrature(bump33.domain, bump33.values)) < 1e-10


def test_roundtrip(dom17, rng):
    f = rng.normal(size=dom17.shape) + 1j * rng.normal(size=dom17.shape)
    spec = box_transform(f, dom17.spacing, -1.0, 2 * dom17.grid_n)
    back = inverse_ft(spec, dom17.spacing, -1.0)[:17, :17, :17]
    assert np.max(np.abs(back - f)) < 1e-10


def test_transform_matches_direct_quadrature(bump17):
    spec = forward_ft(bump17.values, bump17.domain, padding=2)
    xi = spec.xi[5:9, 10, 3:6]
    np.testing.assert_allclose(spec.values[5:9, 10, 3:6], fourier_of_potential(bump17, xi), atol=1e-12)


def test_parseval(bump33):
    assert parseval_gap(bump33.values, bump33.domain) < 1e-6


def test_convolution_self(bump17):
    assert convolution_check(bump17.values, bump17.values, bump17.domain) < 1e-8


def test_convolution_zero(bump17):
    assert convolution_check(bump17.values, bump17.domain.zeros(), bump17.domain) == 0.0


def test_convolution_shifted(dom17):
    f = bump_potential(dom17, 1.0, 0.5, center=(0.25, 0.0, 0.0))
    g = bump_potential(dom17, 1.0, 0.5, center=(-0.25, 0.125, 0.0))
    assert convolution_check(f.values, g.values, dom17) < 1e-8


def test_shift_theorem(dom17):
    # translating by whole nodes multiplies the transform by exp(i xi.d)
    f = bump_potential(dom17, 1.0, 0.5, center=(-0.25, 0.0, 0.0))
    g = bump_potential(dom17, 1.0, 0.5, center=(0.25, 0.0, 0.0))
    sf, sg = forward_ft(f.values, dom17), forward_ft(g.values, dom17)
    phase = np.exp(1j * sf.xi[..., 0] * 0.5)
    assert np.max(np.abs(sg.values - phase * sf.values)) < 1e-8 * np.max(np.abs(sf.values))


def test_eps_residual_free(zero17):
    sol = solve_eps(zero17, Z, 5.0)
    assert eps_tilde_residual(sol, zero17) == 0.0


def test_eps_residual_weak_bump(bump33):
    sol = solve_eps(bump33, Z, 10.0)
    r, info = eps_tilde_residual(sol, bump33, padding=2, return_info=True)
    assert r < 0.05
    assert 0 < info["skipped_fraction"] < 0.5


def test_eps_residual_detects_wrong_field(bump33):
    from dataclasses import replace

    sol = solve_eps(bump33, Z, 10.0)
    bad = replace(sol, eps=1.5 * sol.eps)
    assert eps_tilde_residual(bad, bump33) > 5 * eps_tilde_residual(sol, bump33)


@pytest.mark.parametrize("amp", [0.1, 1.0])
def test_first_born_residual_tracks_dropped_term(dom33, amp):
    # residual of the one-term iterate = discretisation floor (seen in the full
    # solution's residual) plus the dropped convolution term
    from fixedscat.green import KernelParams
    from fixedscat.solver import ScatteringSolution, apply_T

    q = bump_potential(dom33, amp, 0.8)
    terms = []
    for k in (5.0, 10.0, 20.0):
        e1 = -apply_T(np.ones(dom33.shape), q, KernelParams(k, Z))
        u = np.exp(1j * k * dom33.coords[..., 2]) * (1 + e1)
        first = ScatteringSolution(u, 1 + e1, e1, np.array(Z), complex(k), 1, 0.0)
        r, info = eps_tilde_residual(first, q, return_info=True)
        floor = eps_tilde_residual(solve_eps(q, Z, k), q)
        t = info["max_convolution_term"] / info["max_eps_tilde"]
        terms.append(t)
        assert abs(r - floor) <= t
    assert terms[0] > terms[1] > terms[2]


def test_complex_transform_real_axis(bump33):
    beta = np.array([0.0, 0.6, 0.8])
    val = complex_freq_transform(bump33, beta, 6.0, 0.0)
    ref = forward_ft(bump33.values, bump33.domain, padding=4).at(6.0 * beta)
    assert abs(val - ref) / abs(ref) < 0.01


def test_complex_transform_zero(bump33):
    val = complex_freq_transform(bump33, Z, 0.0, 0.0)
    mass = ball_quadrature(bump33.domain, bump33.values)
    assert abs(val - mass) / mass < 1e-3


@pytest.mark.parametrize("kappa, eta", [(5.0, 1.0), (10.0, 2.3), (16.0, 5.0)])
def test_two_paths_agree(poly33, kappa, eta):
    a, b = complex_freq_transform(poly33, (0.3, 0.4, np.sqrt(0.75)), kappa, eta, return_both=True)
    assert abs(a - b) / abs(b) < 5e-3


def test_overflow_guard(bump17):
    with pytest.raises(OverflowError):
        complex_freq_transform(bump17, Z, 1.0, MAX_ETA_A + 1)
    with pytest.raises(ValueError):
        direct_complex_transform(bump17, Z, 1.0, -1.0)


def test_maximum_symmetry(dom33):
    p = bump_potential(dom33, 0.1, 0.5, center=(0.2, -0.1, 0.1))
    dirs = fibonacci_sphere(32).symmetrized()
    up = max(abs(complex_freq_transform(p, b, 12.0, 2.0)) for b in dirs)
    from fixedscat.radon import radon_transform
    from fixedscat.spectral import profile_transform

    down = max(abs(profile_transform(radon_transform(p, b, method="cubic"), 12.0, -2.0)) for b in dirs)
    assert abs(up - down) / up < 1e-6


def test_csv_slice(tmp_path, bump17):
    spec = forward_ft(bump17.values, bump17.domain)
    path = spec.to_csv_slice(tmp_path / "s.csv", header_comment="config_hash=x")
    lines = path.read_text().splitlines()
    assert lines[0] == "# config_hash=x"
    assert lines[1] == "xi_x,xi_y,re,im"
    assert len(lines) == 2 + spec.size**2
