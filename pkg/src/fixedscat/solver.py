"""Born/Neumann solution of the Lippmann-Schwinger equation and the far-field
amplitude.

The unknown is ``eps = v - 1`` with ``v = exp(-ik alpha.x) u``; it satisfies
``eps = -T 1 - T eps`` where ``T f = int_{B_a} G(x-y) q(y) f(y) dy`` and ``G`` is
the kernel factored along the incidence direction.
"""

from __future__ import annotations

import csv
import logging
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .errors import DivergenceError
from .green import KernelParams, convolve_green
from .grid import DirectionSet, unit
from .potential import Potential

logger = logging.getLogger(__name__)

DEFAULT_TOL = 1e-8


@dataclass(frozen=True, eq=False)
class ScatteringSolution:
    u: np.ndarray
    v: np.ndarray
    eps: np.ndarray
    alpha: np.ndarray
    k: complex
    iterations: int
    residual: float
    tol: float = DEFAULT_TOL
    term_norms: tuple = field(default=(), repr=False)

    @property
    def converged(self) -> bool:
        return self.residual < 10 * self.tol


def sup_norm(f) -> float:
    return float(np.max(np.abs(f))) if np.size(f) else 0.0


def apply_T(eps, q: Potential, params: KernelParams, *, method: str = "auto") -> np.ndarray:
    """``(T eps)(x) = int_{B_a} G(x-y) q(y) eps(y) dy`` on the grid."""
    return convolve_green(q.values * np.asarray(eps), params, q.domain, method=method)


def incident_wave(q: Potential, alpha, k: complex) -> np.ndarray:
    return np.exp(1j * complex(k) * (q.domain.coords @ np.asarray(alpha, dtype=float)))


def solve_eps(
    q: Potential,
    alpha,
    k: complex,
    tol: float = DEFAULT_TOL,
    max_iter: int = 200,
    *,
    method: str = "auto",
) -> ScatteringSolution:
    """Neumann series ``eps = sum_{m>=1} (-T)^m 1``.

    Stops once two successive terms are below ``tol`` in sup-norm. Raises
    :class:`DivergenceError` when the pair ratio ``|t_m| / |t_{m-2}|`` exceeds
    one for ``max_iter // 2`` consecutive steps, or when ``max_iter`` is hit.
    """
    if not tol > 0:
        raise ValueError("tol must be positive")
    alpha = unit(alpha)
    params = KernelParams(k, tuple(alpha))
    dom = q.domain
    k = params.k
    if q.is_zero:
        eps = dom.zeros(complex)
        u = incident_wave(q, alpha, k)
        return ScatteringSolution(u, np.ones(dom.shape, complex), eps, alpha, k, 0, 0.0, tol)

    term = -apply_T(np.ones(dom.shape), q, params, method=method)
    eps = term.copy()
    norms = [sup_norm(term)]
    growing = 0
    it = 1
    while True:
        if len(norms) >= 2 and norms[-1] < tol and norms[-2] < tol:
            break
        if norms[-1] == 0.0:
            break
        if it >= max_iter:
            raise DivergenceError(
                f"Neumann series not converged after {max_iter} terms (last |term|={norms[-1]:.3e})"
            )
        term = -apply_T(term, q, params, method=method)
        eps += term
        norms.append(sup_norm(term))
        it += 1
        if not np.isfinite(norms[-1]):
            raise DivergenceError("non-finite Neumann term")
        if len(norms) >= 3 and norms[-1] > norms[-3]:
            growing += 1
            if growing >= max(1, max_iter // 2):
                raise DivergenceError(
                    f"Neumann terms grew for {growing} consecutive pairs; raise k or shrink q"
                )
        else:
            growing = 0

    v = 1.0 + eps
    residual = sup_norm(eps + apply_T(v, q, params, method=method))
    u = incident_wave(q, alpha, k) * v
    logger.debug("solve k=%s alpha=%s: %d terms, residual %.2e", k, alpha, it, residual)
    return ScatteringSolution(u, v, eps, alpha, k, it, residual, tol, tuple(norms))


def dense_solve(q: Potential, alpha, k: complex) -> ScatteringSolution:
    """Direct dense solve of the discrete system; oracle for small grids (n <= 13)."""
    dom = q.domain
    if dom.grid_n > 13:
        raise ValueError("dense oracle limited to n <= 13")
    alpha = unit(alpha)
    params = KernelParams(k, tuple(alpha))
    npts = dom.grid_n**3
    cols = np.empty((npts, npts), dtype=complex)
    e = np.zeros(npts)
    for j in range(npts):
        e[j] = 1.0
        cols[:, j] = apply_T(e.reshape(dom.shape), q, params, method="direct").ravel()
        e[j] = 0.0
    rhs = -apply_T(np.ones(dom.shape), q, params, method="direct").ravel()
    eps = np.linalg.solve(np.eye(npts) + cols, rhs).reshape(dom.shape)
    v = 1.0 + eps
    residual = sup_norm(eps + apply_T(v, q, params, method="direct"))
    u = incident_wave(q, alpha, params.k) * v
    return ScatteringSolution(u, v, eps, alpha, params.k, 0, residual, DEFAULT_TOL)


def lippmann_schwinger_residual(q: Potential, sol: ScatteringSolution) -> float:
    """Sup-norm residual of ``u = exp(ik alpha.x) - int g q u dy`` with the unfactored kernel."""
    g_params = KernelParams(sol.k, None)
    gu = convolve_green(q.values * sol.u, g_params, q.domain)
    return sup_norm(sol.u - incident_wave(q, sol.alpha, sol.k) + gu)


def scattering_amplitude(
    q: Potential, sol: ScatteringSolution, beta, *, method: str = "direct", padding: int = 4
) -> complex | np.ndarray:
    """``A = -(1/4pi) int_{B_a} exp(-ik beta.y) q(y) u(y) dy``.

    ``beta`` may be one unit vector or an array of shape ``(m, 3)``. With
    ``method="fft"`` (real ``k`` only) the sum is read off a zero-padded
    grid transform of ``q u`` at ``-k beta`` by cubic interpolation.
    """
    if not sol.converged:
        warnings.warn(
            f"amplitude from a non-converged solution (residual {sol.residual:.2e})",
            RuntimeWarning,
            stacklevel=2,
        )
    dom = q.domain
    w = dom.ball_weights * q.values * sol.u
    b = np.asarray(beta, dtype=float)
    if method == "fft":
        if sol.k.imag != 0:
            raise ValueError("the fft path needs real k")
        from .spectral import box_transform

        spec = box_transform(w / dom.cell_volume, dom.spacing, -dom.radius_a, padding * dom.grid_n)
        vals = spec.at(-sol.k.real * b.reshape(-1, 3))
        out = -np.asarray(vals).reshape(-1) / (4.0 * np.pi)
        return complex(out[0]) if b.ndim == 1 else out
    if method != "direct":
        raise ValueError(f"unknown method {method!r}")
    idx = np.nonzero(w)
    pts = dom.coords[idx]
    wv = w[idx]
    if b.ndim == 1:
        return complex(-np.sum(np.exp(-1j * sol.k * (pts @ b)) * wv) / (4.0 * np.pi))
    out = np.empty(b.shape[0], dtype=complex)
    block = max(1, 4_000_000 // max(1, pts.shape[0]))
    for s in range(0, b.shape[0], block):
        out[s : s + block] = np.exp(-1j * sol.k * (b[s : s + block] @ pts.T)) @ wv
    return -out / (4.0 * np.pi)


@dataclass
class AmplitudeTable:
    """Rows of ``(beta, alpha, k, A)``; stored as parallel arrays."""

    betas: np.ndarray
    alphas: np.ndarray
    ks: np.ndarray
    values: np.ndarray

    COLUMNS = (
        "beta_x", "beta_y", "beta_z", "alpha_x", "alpha_y", "alpha_z",
        "re_k", "im_k", "re_A", "im_A",
    )

    def __len__(self):
        return self.values.shape[0]

    def rows(self):
        for b, a, k, A in zip(self.betas, self.alphas, self.ks, self.values):
            yield (*b, *a, k.real, k.imag, A.real, A.imag)

    def to_csv(self, path, header_comment: str | None = None) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            if header_comment:
                fh.write(f"# {header_comment}\n")
            w = csv.writer(fh)
            w.writerow(self.COLUMNS)
            for row in self.rows():
                w.writerow([repr(float(x)) for x in row])
        return path

    @classmethod
    def from_csv(cls, path) -> "AmplitudeTable":
        lines = [ln for ln in Path(path).read_text().splitlines() if ln and not ln.startswith("#")]
        data = np.array([ln.split(",") for ln in lines], dtype=str).reshape(len(lines), -1)
        if data.shape[0] and not _is_number(data[0, 0]):
            data = data[1:]
        arr = data.astype(float).reshape(-1, 10)
        return cls(arr[:, 0:3], arr[:, 3:6], arr[:, 6] + 1j * arr[:, 7], arr[:, 8] + 1j * arr[:, 9])


def _is_number(s) -> bool:
    try:
        float(s)
    except ValueError:
        return False
    return True


def fixed_direction_dataset(
    q: Potential,
    alpha0,
    betas: DirectionSet | np.ndarray,
    ks,
    tol: float = DEFAULT_TOL,
    max_iter: int = 200,
    *,
    amplitude_method: str = "auto",
) -> AmplitudeTable:
    """``A(beta, alpha0, k)`` over the product of ``betas`` and ``ks``; one solve per k.

    ``amplitude_method="auto"`` sums directly for up to 256 directions and
    uses the padded-FFT path beyond that.
    """
    alpha0 = unit(alpha0)
    dirs = betas.directions if isinstance(betas, DirectionSet) else np.asarray(betas, float).reshape(-1, 3)
    ks = [float(k) for k in ks]
    if any(k <= 0 for k in ks):
        raise ValueError("all k must be positive")
    how = amplitude_method
    if how == "auto":
        how = "direct" if dirs.shape[0] <= 256 else "fft"
    blocks_b, blocks_k, blocks_A = [], [], []
    for k in ks:
        sol = solve_eps(q, alpha0, k, tol, max_iter)
        blocks_A.append(np.atleast_1d(scattering_amplitude(q, sol, dirs, method=how)))
        blocks_b.append(dirs)
        blocks_k.append(np.full(dirs.shape[0], k, dtype=complex))
    if not ks:
        empty = np.zeros((0, 3))
        return AmplitudeTable(empty, empty, np.zeros(0, complex), np.zeros(0, complex))
    b = np.concatenate(blocks_b)
    return AmplitudeTable(b, np.tile(alpha0, (b.shape[0], 1)), np.concatenate(blocks_k), np.concatenate(blocks_A))
