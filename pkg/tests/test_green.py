import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from fixedscat.errors import ResonanceError, SingularEvaluationError
from fixedscat.green import (
    KernelParams,
    convolve_green,
    factored_green,
    free_green,
    green_symbol,
    self_weight,
    truncated_symbol,
)
from fixedscat.grid import make_grid
from fixedscat.potential import bump_potential

X0 = np.zeros(3)
E1 = np.array([1.0, 0.0, 0.0])


def test_free_green_static():
    assert free_green(E1, X0, 0) == pytest.approx(1 / (4 * np.pi))


def test_free_green_half_turn():
    assert free_green(E1, X0, np.pi) == pytest.approx(-1 / (4 * np.pi))


def test_free_green_imaginary_k():
    assert free_green(E1, X0, 1j) == pytest.approx(np.exp(-1) / (4 * np.pi))
    assert abs(np.exp(-1) / (4 * np.pi) - 0.0292746) < 1e-6


def test_free_green_diagonal_raises():
    with pytest.raises(SingularEvaluationError):
        free_green(E1, E1, 1.0)


def test_factored_green_along_beta():
    p = KernelParams(3.7, (0.0, 0.0, 1.0))
    assert factored_green(np.array([0, 0, 0.5]), p) == pytest.approx(1 / (4 * np.pi * 0.5))


def test_factored_green_against_beta():
    k = 2.3
    p = KernelParams(k, (0.0, 0.0, 1.0))
    assert factored_green(np.array([0, 0, -1.0]), p) == pytest.approx(np.exp(2j * k) / (4 * np.pi))


@settings(max_examples=50)
@given(
    st.lists(st.floats(-2, 2), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-2),
    st.floats(0, 30),
    st.floats(0, 3),
)
def test_factored_equals_modulated_free(z, kr, ki):
    z = np.asarray(z)
    beta = np.array([0.6, 0.0, 0.8])
    k = complex(kr, ki)
    lhs = factored_green(z, KernelParams(k, tuple(beta)))
    rhs = free_green(z, X0, k) * np.exp(-1j * k * (beta @ z))
    assert abs(lhs - rhs) <= 1e-14 * max(1.0, abs(rhs)) * np.exp(2 * ki * np.linalg.norm(z))


@settings(max_examples=50)
@given(
    st.lists(st.floats(-2, 2), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-2),
    st.floats(0, 30),
    st.floats(0, 3),
)
def test_factored_green_growth_bound(z, kr, ki):
    z = np.asarray(z)
    r = np.linalg.norm(z)
    val = factored_green(z, KernelParams(complex(kr, ki), (0.0, 1.0, 0.0)))
    assert abs(val) <= np.exp(2 * ki * r) / (4 * np.pi * r) * (1 + 1e-12)


def test_kernel_params_validation():
    with pytest.raises(ValueError):
        KernelParams(1 - 1j, (0, 0, 1))
    with pytest.raises(ValueError):
        KernelParams(1, (0, 0, 2))


def test_symbol_static():
    assert green_symbol(E1, 0, (0, 0, 1)) == pytest.approx(1.0)


@given(st.complex_numbers(max_magnitude=50, allow_nan=False, allow_infinity=False))
def test_symbol_orthogonal_direction(k):
    assert green_symbol(np.array([0.0, 1.0, 0.0]), k, (1.0, 0.0, 0.0)) == pytest.approx(1.0)


def test_symbol_resonance_raises():
    # xi = 2k beta lies on the characteristic set
    with pytest.raises(ResonanceError):
        green_symbol(np.array([0, 0, 6.0]), 3.0, (0, 0, 1))


@settings(max_examples=100)
@given(
    st.lists(st.floats(-20, 20), min_size=3, max_size=3).filter(lambda v: np.linalg.norm(v) > 1e-3),
    st.floats(0, 20),
    st.floats(1e-3, 5),
)
def test_symbol_nonzero_off_real_axis(xi, kr, ki):
    xi = np.asarray(xi)
    green_symbol(xi, complex(kr, ki), (0.0, 0.0, 1.0))


def test_self_weight_value():
    h = 0.1
    assert self_weight(h) == pytest.approx(3 * h * h / (4 * np.pi))


def test_convolve_zero_field(dom17):
    p = KernelParams(2.0, (0, 0, 1))
    assert not np.any(convolve_green(dom17.zeros(complex), p, dom17))


def test_convolve_linearity(dom17, rng):
    p = KernelParams(3.0 + 0.5j, (0, 1, 0))
    f = rng.normal(size=dom17.shape) * dom17.ball_mask
    g = rng.normal(size=dom17.shape) * dom17.ball_mask
    a, c = 1.7 - 0.3j, -0.4
    lhs = convolve_green(a * f + c * g, p, dom17, method="fft")
    rhs = a * convolve_green(f, p, dom17, method="fft") + c * convolve_green(g, p, dom17, method="fft")
    assert np.max(np.abs(lhs - rhs)) < 1e-12 * np.max(np.abs(lhs))


def test_fft_matches_direct_on_tiny_grid(rng):
    d = make_grid(1.0, 9)
    f = rng.normal(size=d.shape) + 1j * rng.normal(size=d.shape)
    p = KernelParams(4.0 + 1.0j, (0.0, 0.6, 0.8))
    a = convolve_green(f, p, d, method="direct")
    b = convolve_green(f, p, d, method="fft")
    assert np.max(np.abs(a - b)) < 1e-10 * np.max(np.abs(a))


def test_newtonian_potential_of_bump():
    # oracle: the Newtonian potential of a radial density at the origin is int rho(r) r dr
    from scipy import integrate

    R = 0.8
    exact = integrate.quad(lambda r: r * np.exp(-R * R / (R * R - r * r)), 0, R)[0]
    for n in (33,):
        q = bump_potential(make_grid(1.0, n), 1.0, R)
        val = convolve_green(q.values, KernelParams(0.0, (0.6, 0.0, 0.8)), q.domain)
        mid = n // 2
        assert abs(val[mid, mid, mid] - exact) / exact < 0.01


def test_truncated_symbol_tends_to_symbol():
    # points where Im(k - rho) >= 0.17, so the tail decays like exp(-0.17 R)
    xi = np.array([[3.0, 1.0, 0.5], [-4.0, 2.0, 1.0], [2.0, 2.0, 2.0]])
    k = 5.0 + 1.0j
    beta = (0.0, 0.0, 1.0)
    exact = green_symbol(xi, k, beta)
    errs = [np.max(np.abs(truncated_symbol(xi, k, beta, R) - exact) / np.abs(exact)) for R in (4.0, 16.0, 32.0)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-2


def test_grid_dft_matches_truncated_symbol(dom17):
    # the discrete kernel on the padded box transforms to the truncated symbol
    from fixedscat.green import _kernel_spectrum

    p = KernelParams(4.0 + 0.5j, (0.0, 0.0, 1.0))
    size = 4 * dom17.grid_n
    R = 1.9
    h = dom17.spacing
    spec = _kernel_spectrum(dom17.grid_n, h, p, size, R)
    freqs = 2 * np.pi * np.fft.fftfreq(size, d=h)
    # DFT with exp(-i) on index grid equals transform at -xi
    pick = [(1, 0, 0), (0, 2, 1), (3, 0, 2), (0, 0, 4)]
    for i, j, l in pick:
        xi = -np.array([freqs[i], freqs[j], freqs[l]])
        ref = truncated_symbol(xi, p.k, p.beta, R)
        assert abs(spec[i, j, l] - ref) / abs(ref) < 0.1
