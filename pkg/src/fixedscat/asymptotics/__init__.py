"""Quantitative estimates: transform decay, matching height, the smallness
functional, the J integrals, the norm of T^2 and the spheroidal integral."""

from .decay import DirectionalTransform, decay_bound_check, eta_curve, find_eta, windowed_exponents
from .jintegral import J_integral, JParts, cal_J_parts, j_sweep
from .nu import nu_functional, nu_sweep
from .operator_norm import T2_norm_estimate, row_norm_T2, t2_sweep
from .report import EstimateReport, log_eta_rule, loglog_slope
from .spheroidal import cartesian_I1, i1_sweep, spheroid_volume_check, spheroidal_I1

__all__ = [
    "DirectionalTransform",
    "EstimateReport",
    "JParts",
    "J_integral",
    "T2_norm_estimate",
    "cal_J_parts",
    "cartesian_I1",
    "decay_bound_check",
    "eta_curve",
    "find_eta",
    "i1_sweep",
    "j_sweep",
    "log_eta_rule",
    "loglog_slope",
    "nu_functional",
    "nu_sweep",
    "row_norm_T2",
    "spheroid_volume_check",
    "spheroidal_I1",
    "t2_sweep",
    "windowed_exponents",
]
