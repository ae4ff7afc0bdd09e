"""Numerical certificates for the amplitude-difference identity, reciprocity and
the rewriting of the data-equality relation in the ``(kappa, zeta)`` variables."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import unit
from .potential import Potential
from .solver import ScatteringSolution, scattering_amplitude, solve_eps

SOLVE_TOL = 1e-10


@dataclass(frozen=True)
class IdentityReport:
    lhs: complex
    rhs: complex
    abs_err: float
    rel_err: float
    context: dict = field(default_factory=dict)

    @classmethod
    def compare(cls, lhs, rhs, **context) -> "IdentityReport":
        lhs, rhs = complex(lhs), complex(rhs)
        err = abs(lhs - rhs)
        scale = max(abs(lhs), abs(rhs))
        return cls(lhs, rhs, err, 0.0 if scale == 0 else err / scale, context)

    def row(self) -> dict:
        out = {
            "re_lhs": self.lhs.real, "im_lhs": self.lhs.imag,
            "re_rhs": self.rhs.real, "im_rhs": self.rhs.imag,
            "abs_err": self.abs_err, "rel_err": self.rel_err,
        }
        out.update({k: v for k, v in self.context.items() if np.isscalar(v)})
        return out


def _solve(q: Potential, direction, k, tol) -> ScatteringSolution:
    return solve_eps(q, unit(direction), k, tol)


def ball_integral(q: Potential, values) -> complex:
    return complex(np.sum(q.domain.ball_weights * values))


def amplitude_difference_check(q1: Potential, q2: Potential, beta, alpha, k: float, *, tol: float = SOLVE_TOL) -> IdentityReport:
    """``-4 pi [A1(beta, alpha, k) - A2(beta, alpha, k)]`` against
    ``int_{B_a} (q1 - q2) u1(x, alpha, k) u2(x, -beta, k) dx``."""
    if q1.domain != q2.domain:
        raise ValueError("potentials must share a grid")
    beta, alpha = unit(beta), unit(alpha)
    s1 = _solve(q1, alpha, k, tol)
    s2 = _solve(q2, alpha, k, tol)
    lhs = -4.0 * np.pi * (scattering_amplitude(q1, s1, beta) - scattering_amplitude(q2, s2, beta))
    s2_back = _solve(q2, -beta, k, tol)
    rhs = ball_integral(q1, (q1.values - q2.values) * s1.u * s2_back.u)
    return IdentityReport.compare(lhs, rhs, k=float(k), n=q1.domain.grid_n)


def reciprocity_check(q: Potential, beta, alpha, k: float, *, tol: float = SOLVE_TOL) -> IdentityReport:
    """``A(beta, alpha, k)`` against ``A(-alpha, -beta, k)``."""
    beta, alpha = unit(beta), unit(alpha)
    fwd = scattering_amplitude(q, _solve(q, alpha, k, tol), beta)
    rev = scattering_amplitude(q, _solve(q, -beta, k, tol), -alpha)
    return IdentityReport.compare(fwd, rev, k=float(k), n=q.domain.grid_n)


def change_of_variables(alpha0, beta, k: float):
    """``(tau, zeta, kappa)`` with ``tau = |alpha0 - beta|``, ``zeta = (alpha0 - beta)/tau``, ``kappa = tau k``."""
    d = unit(alpha0) - unit(beta)
    tau = float(np.linalg.norm(d))
    if tau < 1e-12:
        raise ValueError("beta == alpha0 gives tau = 0; zeta is undefined")
    return tau, d / tau, tau * k


def orthogonality_relation_check(
    q1: Potential, q2: Potential, alpha0, beta, k: float, *, tol: float = SOLVE_TOL
) -> IdentityReport:
    """``int p u1(x, alpha0, k) u2(x, -beta, k) dx`` against
    ``int exp(i kappa zeta.x) (1 + eps) p dx`` with ``eps = eps1 + eps2 + eps1 eps2``."""
    alpha0, beta = unit(alpha0), unit(beta)
    tau, zeta, kappa = change_of_variables(alpha0, beta, k)
    s1 = _solve(q1, alpha0, k, tol)
    s2 = _solve(q2, -beta, k, tol)
    p = q1.values - q2.values
    lhs = ball_integral(q1, p * s1.u * s2.u)
    eps = s1.eps + s2.eps + s1.eps * s2.eps
    x = q1.domain.coords
    rhs = ball_integral(q1, np.exp(1j * kappa * (x @ zeta)) * (1.0 + eps) * p)
    return IdentityReport.compare(lhs, rhs, k=float(k), tau=tau, kappa=kappa)
