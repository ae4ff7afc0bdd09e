"""Two-centre integral of the iterated kernel in prolate spheroidal coordinates.

For foci ``x, y`` with half-distance ``l = |x - y|/2`` a point is
``z = m + l s t e + l sqrt((s^2-1)(1-t^2)) (cos psi e1 + sin psi e2)``
with ``m = (x+y)/2``, ``s >= 1``, ``|t| <= 1``; then ``|x-z| + |z-y| = 2 l s``,
``|x-z||z-y| = l^2 (s^2 - t^2)`` and the volume element is ``l^3 (s^2 - t^2)``.
"""

from __future__ import annotations

import numpy as np

from ..grid import unit
from ..potential import Potential
from ..radon import plane_basis
from .report import EstimateReport

DECAY_FLOOR = 1e-14


def _frame(x, y):
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    d = x - y
    ell = 0.5 * float(np.linalg.norm(d))
    if ell == 0:
        raise ValueError("x and y must differ")
    e = unit(d)
    e1, e2 = plane_basis(e)
    return 0.5 * (x + y), ell, e, e1, e2


def spheroidal_points(x, y, s, t, psi) -> np.ndarray:
    """Cartesian points for broadcastable ``s, t, psi``."""
    mid, ell, e, e1, e2 = _frame(x, y)
    s, t, psi = np.broadcast_arrays(*(np.asarray(v, dtype=float) for v in (s, t, psi)))
    rad = ell * np.sqrt(np.clip((s * s - 1.0) * (1.0 - t * t), 0.0, None))
    return (
        mid
        + (ell * s * t)[..., None] * e
        + (rad * np.cos(psi))[..., None] * e1
        + (rad * np.sin(psi))[..., None] * e2
    )


def _gauss(n, lo, hi):
    u, w = np.polynomial.legendre.leggauss(n)
    return 0.5 * (hi - lo) * u + 0.5 * (hi + lo), 0.5 * (hi - lo) * w


def shell_average(q: Potential, x, y, s, *, nt: int = 64, npsi: int = 64) -> np.ndarray:
    """``Q(s) = int_0^{2 pi} dpsi int_{-1}^1 dt q(z(s, t, psi))`` for an array of ``s``."""
    if q.func is None:
        raise ValueError("needs a potential with an analytic formula")
    s = np.atleast_1d(np.asarray(s, dtype=float))
    t, wt = _gauss(nt, -1.0, 1.0)
    psi = 2.0 * np.pi * np.arange(npsi) / npsi
    wpsi = 2.0 * np.pi / npsi
    out = np.empty(s.shape)
    for i, si in enumerate(s):
        pts = spheroidal_points(x, y, si, t[:, None], psi[None, :])
        out[i] = wpsi * np.sum(wt[:, None] * q.func(pts))
    return out


def s_range(q: Potential, x, y, kappa_eta_imag: float) -> float:
    """Upper ``s`` limit: the smaller of the support envelope and the damping cut."""
    _, ell, *_ = _frame(x, y)
    reach = q.support_radius if q.support_radius is not None else q.domain.radius_a
    # the support lies in |z| <= reach, so |x-z| + |z-y| <= |x| + |y| + 2 reach
    far = np.linalg.norm(np.asarray(x, float)) + np.linalg.norm(np.asarray(y, float)) + 2.0 * reach
    s_sup = far / (2.0 * ell)
    if kappa_eta_imag > 0:
        s_damp = 1.0 + np.log(1.0 / DECAY_FLOOR) / (2.0 * kappa_eta_imag * ell)
        return float(min(s_sup, s_damp))
    return float(s_sup)


def spheroidal_I1(
    q: Potential,
    x,
    y,
    kappa: float,
    eta: float,
    *,
    ns: int = 512,
    nt: int = 64,
    npsi: int = 64,
) -> complex:
    """``I1 = l int_1^S exp(2 i (kappa + i eta) l s) Q(s) ds`` by Gauss-Legendre in ``s``."""
    if q.is_zero:
        return 0j
    _, ell, *_ = _frame(x, y)
    S = s_range(q, x, y, eta)
    # graded panels: Q is smooth but the phase oscillates with frequency 2 kappa l
    panels = max(1, int(np.ceil((S - 1.0) * 2.0 * max(kappa, 1.0) * ell / (2.0 * np.pi) / 4.0)))
    edges = np.linspace(1.0, S, panels + 1)
    per = max(8, ns // panels)
    total = 0j
    z = complex(kappa, eta)
    for lo, hi in zip(edges[:-1], edges[1:]):
        s, w = _gauss(per, lo, hi)
        total += np.sum(w * np.exp(2j * z * ell * s) * shell_average(q, x, y, s, nt=nt, npsi=npsi))
    return complex(ell * total)


def cartesian_I1(q: Potential, x, y, kappa: float, eta: float, *, spacing: float = 0.02) -> complex:
    """Midpoint-rule ``int exp(i(kappa + i eta)(|x-z| + |z-y|)) q(z) / (|x-z||z-y|) dz``.

    The cell centres are offset by half a cell from a lattice through ``x``,
    so the two ``1/r`` singularities sit on cell corners.
    """
    if q.is_zero:
        return 0j
    reach = q.support_radius if q.support_radius is not None else q.domain.radius_a
    h = float(spacing)
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    lo = -reach - h
    steps = int(np.ceil(2 * (reach + h) / h)) + 1
    base = x + h * (np.floor((lo - x) / h) + 0.5)
    ax = [base[i] + h * np.arange(steps) for i in range(3)]
    z = complex(kappa, eta)
    total = 0j
    Y, Z = np.meshgrid(ax[1], ax[2], indexing="ij")
    for xi in ax[0]:
        pts = np.stack([np.full(Y.shape, xi), Y, Z], axis=-1)
        qv = q.func(pts)
        nz = qv != 0
        if not np.any(nz):
            continue
        p = pts[nz]
        r1 = np.linalg.norm(p - x, axis=-1)
        r2 = np.linalg.norm(p - y, axis=-1)
        total += np.sum(np.exp(1j * z * (r1 + r2)) * qv[nz] / (r1 * r2))
    return complex(total * h**3)


def spheroid_volume_check(x, y, S: float, *, spacing: float = 0.01, ns: int = 64, nt: int = 64) -> tuple[float, float]:
    """``(spheroidal, cartesian)`` volumes of ``{|x-z| + |z-y| <= 2 l S}``.

    The first integrates the Jacobian ``l^3 (s^2 - t^2)`` over ``[1,S] x [-1,1] x [0, 2pi)``,
    the second counts midpoint-rule cells inside the region.
    """
    mid, ell, *_ = _frame(x, y)
    s, ws = _gauss(ns, 1.0, S)
    t, wt = _gauss(nt, -1.0, 1.0)
    jac = ell**3 * (s[:, None] ** 2 - t[None, :] ** 2)
    vol_s = 2.0 * np.pi * float(ws @ jac @ wt)
    h = float(spacing)
    semi = ell * S
    ax = h * (np.arange(-np.ceil(semi / h), np.ceil(semi / h)) + 0.5)
    count = 0
    x = np.asarray(x, float)
    y = np.asarray(y, float)
    Y, Z = np.meshgrid(ax, ax, indexing="ij")
    for a1 in ax:
        pts = mid + np.stack([np.full(Y.shape, a1), Y, Z], axis=-1)
        d = np.linalg.norm(pts - x, axis=-1) + np.linalg.norm(pts - y, axis=-1)
        count += int(np.count_nonzero(d <= 2.0 * ell * S))
    return vol_s, count * h**3


def i1_sweep(q: Potential, x, y, kappas, etas) -> EstimateReport:
    """``kappa |I1|`` along a curve; bounded means it does not grow past its first value."""
    ks = np.asarray(kappas, dtype=float)
    es = np.asarray(etas, dtype=float)
    vals = np.array([abs(spheroidal_I1(q, x, y, k, e)) for k, e in zip(ks, es)])
    scaled = ks * vals
    verdicts = {"kappa_I1_bounded": bool(np.all(scaled <= scaled[0] * (1 + 1e-9)))} if len(ks) else {}
    return EstimateReport(
        "I1", ks, es, vals, np.full(ks.shape, scaled[0] if len(ks) else 0.0) / ks, float("nan"),
        verdicts, {}, {"kappa_abs_I1": scaled},
    )
