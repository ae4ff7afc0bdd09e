"""Certification suite: one function per acceptance property, shared by the
test-suite and the ``all-checks`` command. Each returns a :class:`CheckResult`
holding every measured number the verdict was derived from."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .asymptotics import (
    DirectionalTransform,
    cartesian_I1,
    decay_bound_check,
    eta_curve,
    i1_sweep,
    j_sweep,
    log_eta_rule,
    nu_sweep,
    spheroid_volume_check,
    spheroidal_I1,
    t2_sweep,
)
from .grid import fibonacci_sphere, make_grid, unit
from .identities import amplitude_difference_check, orthogonality_relation_check, reciprocity_check
from .inversion import born_table, data_to_fourier_samples, dense_sweep, l2_difference, reconstruct
from .potential import bump_potential, piecewise_smooth_potential, zero_potential
from .radon import antipodal_identity_check, moment_identity_check, slice_identity_check
from .solver import fixed_direction_dataset, lippmann_schwinger_residual, scattering_amplitude, solve_eps, sup_norm
from .spectral import complex_freq_transform, eps_tilde_residual


@dataclass
class Settings:
    a: float = 1.0
    n: int = 33
    m: int = 64
    amplitude: float = 0.1
    support_r: float = 0.8
    seed: int = 0

    def grid(self, n: int | None = None):
        return make_grid(self.a, self.n if n is None else n)

    def bump(self, n: int | None = None, amplitude: float | None = None, **kw):
        amp = self.amplitude if amplitude is None else amplitude
        return bump_potential(self.grid(n), amp, self.support_r * self.a, **kw)

    def directions(self, m: int | None = None):
        return fibonacci_sphere(self.m if m is None else m)


@dataclass
class CheckResult:
    criterion: int
    name: str
    passed: bool
    values: dict = field(default_factory=dict)
    seconds: float = 0.0

    def line(self) -> str:
        shown = ", ".join(f"{k}={_fmt(v)}" for k, v in self.values.items())
        return f"criterion {self.criterion:2d} [{self.name}]: {'PASS' if self.passed else 'FAIL'}  {shown}"


def _fmt(v):
    if isinstance(v, (bool, np.bool_)):
        return str(bool(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.4g}"
    if isinstance(v, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt(x) for x in v) + "]"
    return str(v)


def _rel(x, y) -> float:
    scale = max(abs(x), abs(y))
    return 0.0 if scale == 0 else abs(x - y) / scale


def free_case(s: Settings) -> CheckResult:
    q0 = zero_potential(s.grid())
    alpha, beta = np.array([0.0, 0.0, 1.0]), unit([1.0, 1.0, 0.0])
    sol = solve_eps(q0, alpha, 5.0)
    A = scattering_amplitude(q0, sol, s.directions().directions)
    reports = [
        amplitude_difference_check(q0, q0, beta, alpha, 5.0),
        reciprocity_check(q0, beta, alpha, 5.0),
        orthogonality_relation_check(q0, q0, alpha, beta, 5.0),
    ]
    worst = max(r.abs_err for r in reports)
    vals = {"max_eps": sup_norm(sol.eps), "max_A": sup_norm(A), "max_identity_err": worst}
    return CheckResult(1, "free case", all(v <= 1e-12 for v in vals.values()), vals)


def ls_residual(s: Settings) -> CheckResult:
    q = s.bump()
    sol = solve_eps(q, (0, 0, 1), 5.0)
    r = lippmann_schwinger_residual(q, sol)
    return CheckResult(2, "Lippmann-Schwinger residual", r < 1e-7, {"residual": r, "iterations": sol.iterations})


def _difference_pair(s: Settings, n: int):
    g_kw = {"amplitude": s.amplitude}
    q1 = s.bump(n, **g_kw)
    q2 = bump_potential(s.grid(n), 0.8 * s.amplitude, 0.6 * s.a, center=(0.1 * s.a, 0.0, 0.0))
    return amplitude_difference_check(q1, q2, (0, 1, 0), (0, 0, 1), 5.0)


def amplitude_difference(s: Settings, fine: int | None = None, ref: int = 65) -> CheckResult:
    fine = fine or max(s.n + 16, 49)
    base = _difference_pair(s, s.n)
    top = _difference_pair(s, fine)
    best = _difference_pair(s, ref)
    e0 = abs(base.lhs - best.lhs) / abs(best.lhs)
    e1 = abs(top.lhs - best.lhs) / abs(best.lhs)
    h0, h1 = 2 * s.a / (s.n - 1), 2 * s.a / (fine - 1)
    order = float(np.log(e0 / e1) / np.log(h0 / h1)) if e0 > 0 and e1 > 0 else float("inf")
    vals = {
        "identity_rel_err": base.rel_err,
        "identity_rel_err_fine": top.rel_err,
        "discretisation_err": e0,
        "discretisation_err_fine": e1,
        "observed_order": order,
    }
    ok = base.rel_err < 1e-2 and top.rel_err <= max(base.rel_err, 1e-12) * 10 and order >= 2.0
    return CheckResult(3, "amplitude-difference identity", ok, vals)


def reciprocity(s: Settings, pairs: int = 10) -> CheckResult:
    q = s.bump(center=(0.05 * s.a, -0.05 * s.a, 0.0))
    rng = np.random.default_rng(s.seed)
    errs = []
    for _ in range(pairs):
        b, a = unit(rng.normal(size=3)), unit(rng.normal(size=3))
        errs.append(reciprocity_check(q, b, a, 5.0).rel_err)
    return CheckResult(4, "reciprocity", max(errs) < 1e-2, {"max_rel_err": max(errs), "pairs": pairs})


def radon_identities(s: Settings) -> CheckResult:
    beta, k = unit([1.0, 2.0, 2.0]), 5.0
    q = s.bump()
    qq = s.bump(2 * s.n - 1)
    e17 = moment_identity_check(q, beta)
    e18 = slice_identity_check(q, beta, k)
    e17f = moment_identity_check(qq, beta)
    e18f = slice_identity_check(qq, beta, k)
    e19 = antipodal_identity_check(q, s.directions(16))
    r17 = e17 / e17f if e17f > 0 else float("inf")
    r18 = e18 / e18f if e18f > 0 else float("inf")
    vals = {
        "mass_err": e17, "slice_err": e18, "antipodal_err": e19,
        "mass_refine_ratio": r17, "slice_refine_ratio": r18,
    }
    ok = e17 < 1e-2 and e18 < 1e-2 and e19 < 1e-6 and 1.5 <= r17 <= 3 and 1.5 <= r18 <= 3
    return CheckResult(5, "plane-integral identities", ok, vals)


def two_path(s: Settings) -> CheckResult:
    q = s.bump(center=(0.05 * s.a, 0.0, -0.05 * s.a))
    worst = 0.0
    for b in ([0, 0, 1], [1, 1, 0], [1, -2, 2]):
        for kappa in (0.0, 2.0, 5.0, 10.0):
            for eta_a in (0.0, 1.0, 2.5, 5.0):
                x, y = complex_freq_transform(q, unit(b), kappa, eta_a / s.a, return_both=True)
                worst = max(worst, _rel(x, y))
    return CheckResult(6, "two-path complex-frequency transform", worst < 5e-3, {"max_rel_err": worst})


def _test_potentials(s: Settings):
    g = s.grid()
    return [
        s.bump(),
        bump_potential(g, s.amplitude, 0.5 * s.a, center=(0.2 * s.a, 0.1 * s.a, 0.0)),
        piecewise_smooth_potential(g, s.amplitude, 0.6 * s.a, 4, center=(0.0, 0.15 * s.a, -0.1 * s.a)),
    ]


def max_symmetry(s: Settings) -> CheckResult:
    dirs = s.directions().symmetrized()
    worst = 0.0
    for p in _test_potentials(s):
        dt = DirectionalTransform(p, dirs)
        for kappa in (4.0, 16.0):
            eta = log_eta_rule(kappa, s.a)
            up = float(np.max(np.abs(dt.values(kappa, eta))))
            down = float(np.max(np.abs(dt.values(kappa, -eta))))
            worst = max(worst, _rel(up, down))
    return CheckResult(7, "directional-maximum symmetry", worst < 1e-6, {"max_rel_gap": worst})


def _poly4(s: Settings):
    return piecewise_smooth_potential(s.grid(), s.amplitude, s.support_r * s.a, 4, center=(0.05 * s.a, -0.03 * s.a, 0.02 * s.a))


def decay(s: Settings) -> CheckResult:
    rep = decay_bound_check(_poly4(s), s.directions().symmetrized(), [4, 8, 16, 32, 64], [0.0, 1.0, 2.0, 4.0])
    vals = {"fitted_exponent": rep.fitted_exponent, "c_fit": rep.scalars["c_fit"], "dominates": rep.verdicts["dominates"]}
    ok = rep.fitted_exponent <= -3.5 and rep.verdicts["dominates"] and rep.verdicts["bounded"]
    return CheckResult(8, "transform decay bound", ok, vals)


def matching_height(s: Settings) -> CheckResult:
    rep = eta_curve(_poly4(s), [16, 32, 64, 128], s.directions().symmetrized())
    vals = {"etas": rep.etas, "eta_over_ln_kappa": rep.measured, "band": (0.7 / s.a, 1.4 / s.a)}
    vals.update({k: v for k, v in rep.verdicts.items()})
    return CheckResult(9, "matching height", rep.passed, vals)


def nu_contraction(s: Settings) -> CheckResult:
    ks = [8, 16, 32, 64]
    rep = nu_sweep(s.bump(), ks, log_eta_rule(ks, s.a), s.directions())
    vals = {"nu": rep.measured, "max_skipped_fraction": float(np.max(rep.extra["skipped_fraction"]))}
    return CheckResult(10, "nu contraction", rep.passed, vals)


def j_decay(s: Settings) -> CheckResult:
    ks = [8, 16, 32, 64, 128]
    rep = j_sweep(ks, log_eta_rule(ks, s.a), 4)
    vals = {"kappa_J": rep.extra["kappa_J"], "J": rep.measured, "majorant": rep.bound_or_fit}
    return CheckResult(11, "J decay", rep.passed, vals)


def t2_norm(s: Settings) -> CheckResult:
    ks = [8, 16, 32, 64]
    rep = t2_sweep(s.bump(), ks, log_eta_rule(ks, s.a), 8, seed=s.seed)
    return CheckResult(12, "T^2 norm decay", rep.passed, {"estimates": rep.measured, "slope": rep.fitted_exponent})


def spheroidal(s: Settings) -> CheckResult:
    q = s.bump()
    x = s.a * np.array([0.1, 0.2, -0.1])
    y = s.a * np.array([-0.2, 0.0, 0.25])
    eta10 = float(log_eta_rule(10.0, s.a))
    sph = spheroidal_I1(q, x, y, 10.0, eta10)
    cart = cartesian_I1(q, x, y, 10.0, eta10)
    two = _rel(sph, cart)
    ks = [8, 16, 32, 64]
    rep = i1_sweep(q, x, y, ks, log_eta_rule(ks, s.a))
    vs, vc = spheroid_volume_check(x, y, 2.0)
    vol = _rel(vs, vc)
    vals = {"two_path_rel": two, "kappa_abs_I1": rep.extra["kappa_abs_I1"], "volume_rel": vol}
    ok = two < 0.02 and rep.passed and vol < 0.01
    return CheckResult(13, "spheroidal quadrature", ok, vals)


def born_inversion(s: Settings, amplitude: float = 0.05) -> CheckResult:
    alpha0 = (0.0, 0.0, 1.0)
    betas, ks = dense_sweep()
    out = {}
    for amp in (amplitude, 0.5 * amplitude):
        q = s.bump(amplitude=amp)
        born = reconstruct(data_to_fourier_samples(born_table(q, alpha0, betas, ks), alpha0), q.domain, truth=q)
        data = reconstruct(
            data_to_fourier_samples(fixed_direction_dataset(q, alpha0, betas, ks), alpha0), q.domain, truth=q
        )
        out[amp] = (born, data, l2_difference(data.q_rec, born.q_rec))
    b_full, d_full, lin_full = out[amplitude]
    _, d_half, lin_half = out[0.5 * amplitude]
    ratio_lin = lin_full / lin_half if lin_half > 0 else float("inf")
    ratio_rel = d_full.rel_l2_error / d_half.rel_l2_error if d_half.rel_l2_error > 0 else float("inf")
    vals = {
        "born_data_err": b_full.rel_l2_error,
        "solver_data_err": d_full.rel_l2_error,
        "coverage": b_full.coverage_map,
        "linearisation_err_ratio": ratio_lin,
        "rel_err_ratio": ratio_rel,
    }
    ok = b_full.rel_l2_error < 0.05 and d_full.rel_l2_error < 0.15 and 2.5 <= ratio_lin <= 6
    return CheckResult(14, "Born inversion loop", ok, vals)


def fourier_residual(s: Settings) -> CheckResult:
    q = s.bump()
    sol = solve_eps(q, (0, 0, 1), 10.0)
    r, info = eps_tilde_residual(sol, q, padding=2, return_info=True)
    return CheckResult(15, "Fourier-domain residual", r < 0.05, {"residual": r, "skipped_fraction": info["skipped_fraction"]})


CHECKS = {
    1: free_case,
    2: ls_residual,
    3: amplitude_difference,
    4: reciprocity,
    5: radon_identities,
    6: two_path,
    7: max_symmetry,
    8: decay,
    9: matching_height,
    10: nu_contraction,
    11: j_decay,
    12: t2_norm,
    13: spheroidal,
    14: born_inversion,
    15: fourier_residual,
}


def run_check(number: int, settings: Settings | None = None) -> CheckResult:
    s = settings or Settings()
    t = time.perf_counter()
    res = CHECKS[number](s)
    res.seconds = time.perf_counter() - t
    return res


def run_all(settings: Settings | None = None, only=None):
    for number in sorted(CHECKS):
        if only is None or number in only:
            yield run_check(number, settings)
