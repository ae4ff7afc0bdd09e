"""Acceptance criteria 1-15 at the default scale (a=1, n=33, m=64, amplitude 0.1).

Each test prints one PASS/FAIL line with the measured numbers and then asserts
the verdict; run with ``-s`` to see the lines inline.
"""

import pytest

from fixedscat.checks import Settings, run_check

SETTINGS = Settings()


def _run(number):
    res = run_check(number, SETTINGS)
    print(f"\n{res.line()}  ({res.seconds:.1f}s)")
    assert res.passed, res.line()


def test_criterion_01_free_case():
    _run(1)


def test_criterion_02_integral_equation_residual():
    _run(2)


def test_criterion_03_amplitude_difference_identity():
    _run(3)


def test_criterion_04_reciprocity():
    _run(4)


def test_criterion_05_plane_integral_identities():
    _run(5)


def test_criterion_06_complex_frequency_two_paths():
    _run(6)


def test_criterion_07_conjugate_height_maximum():
    _run(7)


def test_criterion_08_transform_decay():
    _run(8)


def test_criterion_09_matching_height():
    _run(9)


def test_criterion_10_contraction_factor():
    _run(10)


def test_criterion_11_j_integral_decay():
    _run(11)


@pytest.mark.slow
def test_criterion_12_iterated_operator_norm():
    _run(12)


def test_criterion_13_spheroidal_quadrature():
    _run(13)


@pytest.mark.slow
def test_criterion_14_born_inversion_loop():
    _run(14)


def test_criterion_15_fourier_domain_residual():
    _run(15)
