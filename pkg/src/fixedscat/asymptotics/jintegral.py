"""The ``(r, t)`` integral ``J`` that bounds the leading term of ``nu`` and its
one-dimensional majorant ``cal J`` with the split into ``J1, J2, j1, j2``."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy import integrate

from .report import EstimateReport, loglog_slope

TAIL_TOL = 1e-12
QUAD = dict(limit=400, epsabs=0.0, epsrel=1e-10)


@dataclass(frozen=True)
class JParts:
    kappa: float
    eta: float
    ell: int
    J: float
    cal_J: float
    J_bound: float
    J1: float
    J2: float
    j1: float
    j2: float
    r_max: float


def _check(kappa, eta, ell):
    if ell <= 3:
        raise ValueError("ell must exceed 3")
    if eta <= 0:
        raise ValueError("eta must be positive")
    if kappa <= 0:
        raise ValueError("kappa must be positive")


def tail_cutoff(ell: int, tol: float = TAIL_TOL) -> float:
    """``R`` with ``int_R^inf 4 pi r^{-ell} dr < tol`` (the large-r majorant of ``2 pi r B(r)``)."""
    return (4.0 * np.pi / ((ell - 1) * tol)) ** (1.0 / (ell - 1))


def B(r: float, kappa: float, eta: float, ell: int) -> float:
    """Inner ``t`` integral of ``J`` at radius ``r``."""
    gamma = kappa**2 + eta**2

    def f(t):
        return 1.0 / (np.sqrt((r - kappa * t) ** 2 + eta**2 * t**2) * (1.0 + gamma + r * r - 2.0 * r * kappa * t) ** (ell / 2.0))

    # near-singular at the minimiser of the first factor
    t_star = r * kappa / gamma
    pts = [t_star] if -1.0 < t_star < 1.0 else None
    return integrate.quad(f, -1.0, 1.0, points=pts, **QUAD)[0]


def _breaks(kappa: float, r_max: float) -> list[float]:
    pts = [0.0, 1.0, 0.5 * kappa, kappa, 2.0 * kappa]
    r = 4.0 * kappa
    while r < r_max:
        pts.append(r)
        r *= 4.0
    pts.append(r_max)
    return sorted({p for p in pts if p <= r_max})


def J_direct(kappa: float, eta: float, ell: int) -> tuple[float, float]:
    """``2 pi int_0^{r_max} r B(r) dr``; returns ``(J, r_max)``."""
    _check(kappa, eta, ell)
    r_max = max(tail_cutoff(ell), 4.0 * kappa)
    edges = _breaks(kappa, r_max)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += integrate.quad(lambda r: r * B(r, kappa, eta, ell), lo, hi, **QUAD)[0]
    return 2.0 * np.pi * total, r_max


def _radial_quad(f, lo, hi, kappa):
    pts = [p for p in (0.5 * kappa, kappa, 2.0 * kappa) if lo < p < hi]
    if np.isinf(hi):
        mid = max(lo + 1.0, 4.0 * kappa)
        first = integrate.quad(f, lo, mid, points=[p for p in pts if p < mid] or None, **QUAD)[0]
        return first + integrate.quad(f, mid, np.inf, **QUAD)[0]
    return integrate.quad(f, lo, hi, points=pts or None, **QUAD)[0]


def cal_J_parts(kappa: float, eta: float, ell: int) -> dict:
    """``cal J = J1 + J2`` and ``J21 = j1 + j2`` (``J22`` reported for completeness)."""
    _check(kappa, eta, ell)
    b = ell / 2.0 - 1.0
    gamma = kappa**2 + eta**2
    w2 = 1.0 + gamma
    W2 = 1.0 + eta**2

    def cal(r):
        if r < 1e-8:
            # limit of the difference quotient at r -> 0
            return 4.0 * b * kappa / w2 ** (b + 1.0)
        return ((w2 + r * r - 2.0 * kappa * r) ** (-b) - (w2 + r * r + 2.0 * kappa * r) ** (-b)) / r

    def j21(r):
        return (W2 + (r - kappa) ** 2) ** (-b) / r

    def j22(r):
        return (W2 + (r + kappa) ** 2) ** (-b) / r

    J1 = _radial_quad(cal, 0.0, 1.0, kappa)
    J2 = _radial_quad(cal, 1.0, np.inf, kappa)
    half = max(1.0, 0.5 * kappa)
    j1 = _radial_quad(j21, 1.0, half, kappa) if half > 1.0 else 0.0
    j2 = _radial_quad(j21, half, np.inf, kappa)
    J22 = _radial_quad(j22, 1.0, np.inf, kappa)
    return {"cal_J": J1 + J2, "J1": J1, "J2": J2, "j1": j1, "j2": j2, "J21": j1 + j2, "J22": J22}


def J_integral(kappa: float, eta: float, ell: int = 4, *, parts: bool = False):
    """Direct ``J``; with ``parts=True`` a :class:`JParts` including the majorant
    ``2 pi gamma^{1/2} eta^{-1} [(ell - 2) kappa]^{-1} cal J``."""
    J, r_max = J_direct(kappa, eta, ell)
    if not parts:
        return J
    sub = cal_J_parts(kappa, eta, ell)
    gamma = kappa**2 + eta**2
    bound = 2.0 * np.pi * np.sqrt(gamma) / (eta * (ell - 2) * kappa) * sub["cal_J"]
    return JParts(kappa, eta, ell, J, sub["cal_J"], bound, sub["J1"], sub["J2"], sub["j1"], sub["j2"], r_max)


def j_sweep(kappas, etas, ell: int = 4) -> EstimateReport:
    """``kappa J`` along a curve and the majorant check at every point."""
    ks = np.asarray(kappas, dtype=float)
    es = np.asarray(etas, dtype=float)
    res = [J_integral(k, e, ell, parts=True) for k, e in zip(ks, es)]
    J = np.array([r.J for r in res])
    bound = np.array([r.J_bound for r in res])
    kJ = ks * J
    verdicts = {
        "positive": bool(np.all(J > 0)),
        "kappa_J_decreasing": bool(np.all(np.diff(kJ) < 0)),
        "majorant_dominates": bool(np.all(bound >= J * (1 - 1e-8))),
    }
    extra = {
        "kappa_J": kJ,
        "cal_J": np.array([r.cal_J for r in res]),
        "J1": np.array([r.J1 for r in res]),
        "J2": np.array([r.J2 for r in res]),
        "j1": np.array([r.j1 for r in res]),
        "j2": np.array([r.j2 for r in res]),
    }
    return EstimateReport("J_integral", ks, es, J, bound, loglog_slope(ks, J), verdicts, {"ell": ell}, extra)
