"""Lower bounds for the sup-norm operator norm of ``T^2`` at complex wavenumber."""

from __future__ import annotations

import numpy as np

from ..green import KernelParams, _offset_kernel, convolve_green
from ..grid import unit
from ..potential import Potential
from ..solver import apply_T, sup_norm
from .report import EstimateReport, loglog_slope


def smooth_probe(domain, rng: np.random.Generator, modes: int = 4, max_freq: float = 3.0) -> np.ndarray:
    """Random complex sum of a few low-frequency plane waves (sup-normalised)."""
    x = domain.coords
    f = np.zeros(domain.shape, dtype=complex)
    for _ in range(modes):
        kvec = rng.uniform(-max_freq, max_freq, 3) / domain.radius_a
        c = rng.normal() + 1j * rng.normal()
        f += c * np.exp(1j * (x @ kvec))
    return f / sup_norm(f)


def row_norm_T2(q: Potential, params: KernelParams, node) -> float:
    """``sum_y |K(x0, y)|`` for the discrete kernel of ``T^2`` at node ``x0``.

    This is ``|T^2 f(x0)|`` for the unimodular ``f`` aligned with that row,
    hence a lower bound for the operator norm.
    """
    dom = q.domain
    h3 = dom.cell_volume
    node = np.asarray(node)
    offsets = node - np.indices(dom.shape).transpose(1, 2, 3, 0)
    first = _offset_kernel(offsets, dom.spacing, params, None)  # tab(x0 - z)
    reverse = KernelParams(params.k, tuple(-params.beta_array))
    inner = convolve_green(first * q.values, reverse, dom)  # sum_z tab(z - y) tab(x0 - z) q(z) w_z
    row = q.values * dom.ball_weights / h3 * inner
    return float(np.sum(np.abs(row)))


def T2_norm_estimate(
    q: Potential,
    kappa: float,
    eta: float,
    probes: int = 8,
    *,
    beta=(0.0, 0.0, 1.0),
    seed: int = 0,
    aligned_nodes: int = 4,
    return_info: bool = False,
):
    """Lower bound of ``||T^2||`` on ``C(B_a)`` for the kernel at ``k = kappa + i eta``.

    Maximises ``|T^2 f|_sup / |f|_sup`` over the constant field and ``probes``
    random smooth fields, then over ``aligned_nodes`` probes matched to single
    rows of the kernel (the best random probe's peak, the centre and random
    nodes of the support).
    """
    if probes < 8:
        raise ValueError("need at least 8 probes")
    if q.is_zero:
        return (0.0, {"best": "zero"}) if return_info else 0.0
    dom = q.domain
    params = KernelParams(complex(kappa, eta), tuple(unit(beta)))
    rng = np.random.default_rng(seed)

    def ratio(f):
        g = apply_T(apply_T(f, q, params), q, params)
        return sup_norm(g) / sup_norm(f), g

    best, label, peak = -1.0, "", None
    for i in range(probes + 1):
        f = np.ones(dom.shape, complex) if i == 0 else smooth_probe(dom, rng)
        r, g = ratio(f)
        if r > best:
            best, label = r, ("constant" if i == 0 else f"random{i}")
            peak = np.unravel_index(np.argmax(np.abs(g) * dom.ball_mask), dom.shape)

    nodes = [peak, (dom.grid_n // 2,) * 3]
    support = np.argwhere(q.values != 0)
    while len(nodes) < aligned_nodes and len(support):
        nodes.append(tuple(support[rng.integers(len(support))]))
    for nd in nodes[:aligned_nodes]:
        r = row_norm_T2(q, params, nd)
        if r > best:
            best, label = r, f"aligned{tuple(int(c) for c in nd)}"
    if return_info:
        return best, {"best": label}
    return best


def t2_sweep(q: Potential, kappas, etas, probes: int = 8, *, seed: int = 0, beta=(0.0, 0.0, 1.0)) -> EstimateReport:
    ks = np.asarray(kappas, dtype=float)
    es = np.asarray(etas, dtype=float)
    vals = np.array([T2_norm_estimate(q, k, e, probes, seed=seed, beta=beta) for k, e in zip(ks, es)])
    gamma = ks**2 + es**2
    slope = loglog_slope(ks, vals)
    ref = vals[0] * np.sqrt(gamma[0] / gamma)
    verdicts = {"slope_le_-0.8": bool(slope <= -0.8)}
    return EstimateReport("T2_norm", ks, es, vals, ref, slope, verdicts, {"seed": seed})
