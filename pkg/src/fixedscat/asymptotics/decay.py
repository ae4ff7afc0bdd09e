"""Complex-frequency decay of a potential's transform and the matching height
where its directional maximum reaches the real-frequency maximum."""

from __future__ import annotations

import numpy as np

from ..errors import NoCrossingError
from ..grid import DirectionSet
from ..potential import Potential
from ..radon import radon_transform
from ..spectral import MAX_ETA_A, max_abs_transform, profile_transform
from .report import EstimateReport, loglog_slope


class DirectionalTransform:
    """``beta -> p~((kappa + i eta) beta)`` over a direction set, via plane-integral profiles.

    The profiles are computed once; every later evaluation is a 1D sum.
    """

    def __init__(self, p: Potential, betas: DirectionSet, *, m: int | None = None, method: str = "exact"):
        self.p = p
        self.betas = betas
        self.a = p.domain.radius_a
        if m is None:
            m = 8 * p.domain.grid_n
        method = method if p.func is not None else "linear"
        self._lam = None
        rows = []
        for b in betas.directions:
            prof = radon_transform(p, b, m, method=method)
            rows.append(prof.weights() * prof.values)
            self._lam = prof.lambdas
        self._wv = np.array(rows)

    def values(self, kappa: float, eta: float) -> np.ndarray:
        if eta * self.a > MAX_ETA_A:
            raise OverflowError(f"eta * a = {eta * self.a:g} exceeds {MAX_ETA_A}")
        phase = np.exp((1j * kappa - eta) * self._lam)
        return self._wv @ phase

    def envelope(self, kappa: float, eta: float) -> float:
        """``max_beta |p~((kappa + i eta) beta)|`` over the set."""
        return float(np.max(np.abs(self.values(kappa, eta))))


def decay_bound_check(
    p: Potential,
    betas: DirectionSet,
    kappas,
    etas,
    *,
    ell: int | None = None,
    m: int | None = None,
    method: str = "exact",
) -> EstimateReport:
    """Compare ``max_beta |p~((kappa + i eta) beta)|`` with ``c e^{a|eta|} / (1 + kappa^2 + eta^2)^{ell/2}``.

    ``c`` is fitted on the lower half of the kappa sweep and then required to
    dominate every point of the full sweep. The decay exponent is the log-log
    slope in kappa at ``eta = 0`` (or the smallest eta given); the declared
    smoothness must be reproduced within 0.5.
    """
    ell = p.smoothness_ell if ell is None else int(ell)
    a = p.domain.radius_a
    kappas = np.asarray(sorted(float(k) for k in kappas))
    etas = np.asarray(sorted(float(e) for e in etas))
    K, E = np.meshgrid(kappas, etas, indexing="ij")
    K, E = K.ravel(), E.ravel()
    shape = 1.0 / (1.0 + K**2 + E**2) ** (ell / 2.0) * np.exp(a * np.abs(E))

    if p.is_zero:
        zeros = np.zeros(K.shape)
        return EstimateReport(
            "decay_bound", K, E, zeros, zeros, float("-inf"),
            {"bounded": True, "dominates": True, "exponent": True},
            {"ell": ell, "c_fit": 0.0},
        )

    dt = DirectionalTransform(p, betas, m=m, method=method)
    measured = np.array([dt.envelope(k, e) for k, e in zip(K, E)])
    ratio = measured / shape
    low = K <= np.median(kappas)
    c_fit = float(np.max(ratio[low]))
    c_all = float(np.max(ratio))
    bound = c_fit * shape
    at_min_eta = E == etas[0]
    slope = loglog_slope(K[at_min_eta], measured[at_min_eta])
    verdicts = {
        "bounded": bool(np.isfinite(c_all)),
        "dominates": bool(np.all(measured <= bound * (1 + 1e-9))),
        "exponent": bool(slope <= -ell + 0.5),
    }
    scalars = {"ell": ell, "c_fit": c_fit, "c_full_sweep": c_all, "ell_effective": -slope}
    return EstimateReport(
        "decay_bound", K, E, measured, bound, slope, verdicts, scalars, {"log_c_point": np.log(ratio)}
    )


def windowed_exponents(p: Potential, betas: DirectionSet, kappas, *, m: int | None = None, method: str = "exact"):
    """Log-log slopes of the eta = 0 envelope over consecutive kappa windows of three points."""
    dt = DirectionalTransform(p, betas, m=m, method=method)
    ks = np.asarray(kappas, dtype=float)
    vals = np.array([dt.envelope(k, 0.0) for k in ks])
    return [loglog_slope(ks[i : i + 3], vals[i : i + 3]) for i in range(len(ks) - 2)]


def find_eta(
    p: Potential,
    kappa: float,
    betas: DirectionSet,
    tol: float = 1e-6,
    *,
    peak: float | None = None,
    eta_cap: float | None = None,
    transform: DirectionalTransform | None = None,
    padding: int = 2,
) -> float:
    """Height ``eta`` where ``max_beta |p~((kappa + i eta) beta)|`` equals the real maximum ``P``.

    ``P`` is the global maximum of ``|p~|`` on the real dual grid unless given.
    Bracketing doubles ``eta`` from 1/a up to ``eta_cap`` (default ``60/a``);
    then bisection runs until ``|envelope - P| <= tol * P``.
    """
    if p.is_zero:
        raise ValueError("the matching height is undefined for p == 0")
    a = p.domain.radius_a
    dt = transform if transform is not None else DirectionalTransform(p, betas)
    P = max_abs_transform(p, padding) if peak is None else float(peak)
    cap = 60.0 / a if eta_cap is None else float(eta_cap)
    cap = min(cap, MAX_ETA_A / a)

    def gap(eta):
        return dt.envelope(kappa, eta) - P

    g0 = gap(0.0)
    if g0 >= -tol * P:
        raise NoCrossingError(
            f"kappa={kappa:g} is below the crossing regime: the eta=0 maximum already reaches P",
            cap=0.0,
            value_at_cap=g0 + P,
        )
    lo, hi = 0.0, 1.0 / a
    while gap(hi) < 0:
        lo = hi
        if hi >= cap:
            raise NoCrossingError(
                f"no crossing up to eta={cap:g} at kappa={kappa:g}", cap=cap, value_at_cap=gap(cap) + P
            )
        hi = min(2.0 * hi, cap)
    for _ in range(200):
        mid = 0.5 * (lo + hi)
        g = gap(mid)
        if abs(g) <= tol * P:
            return mid
        if g < 0:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-14 * max(1.0, hi):
            break
    return 0.5 * (lo + hi)


def eta_curve(p: Potential, kappas, betas: DirectionSet, tol: float = 1e-6) -> EstimateReport:
    """``eta(kappa)`` over a sweep with the ratio ``eta / ln kappa`` and its drift."""
    a = p.domain.radius_a
    dt = DirectionalTransform(p, betas)
    P = max_abs_transform(p)
    ks = np.asarray(kappas, dtype=float)
    etas = np.array([find_eta(p, k, betas, tol, peak=P, transform=dt) for k in ks])
    ratio = etas / np.log(ks)
    drift = np.abs(np.diff(ratio))
    env = np.array([dt.envelope(k, e) for k, e in zip(ks, etas)])
    verdicts = {
        "matched": bool(np.all(np.abs(env - P) <= tol * P * (1 + 1e-9))),
        "ratio_in_band": bool(0.7 / a <= ratio[-1] <= 1.4 / a),
        "drift_shrinks": bool(len(drift) < 2 or drift[-1] <= drift[0]),
    }
    return EstimateReport(
        "eta_curve", ks, etas, ratio, np.full(ks.shape, 1.0 / a), float("nan"), verdicts,
        {"P": P, "ratio_last": float(ratio[-1])},
        {"envelope": env, "drift": np.concatenate([[np.nan], drift])},
    )
