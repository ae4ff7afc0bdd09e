"""Born-approximation reconstruction of a weak potential from fixed-incidence
amplitude data ``A(beta, alpha0, k)``.

Each datum maps to one Fourier sample, ``q~(k(alpha0 - beta)) ~ -4 pi A``;
samples are reflected through ``q~(-xi) = conj q~(xi)``, binned on a dual
grid, and inverted with the grid transform.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .grid import BallDomain, DirectionSet, unit
from .potential import Potential, fourier_of_potential
from .solver import AmplitudeTable, fixed_direction_dataset
from .spectral import SpectralField, forward_ft, inverse_ft

FILL_MODES = ("zero", "radial")


@dataclass(frozen=True, eq=False)
class FourierSamples:
    """Frequencies and transform estimates; ``alpha0``/``k_max`` describe the
    reachable set ``|xi|^2 <= 2 k_max |alpha0.xi|`` when known."""

    xi: np.ndarray
    values: np.ndarray
    alpha0: np.ndarray | None = None
    k_max: float | None = None

    def __len__(self):
        return self.values.shape[0]

    def reflected(self) -> "FourierSamples":
        return FourierSamples(
            np.concatenate([self.xi, -self.xi]),
            np.concatenate([self.values, np.conj(self.values)]),
            self.alpha0,
            self.k_max,
        )

    def reachable(self, xi: np.ndarray) -> np.ndarray:
        """Mask of frequencies inside the region the data can reach (with reflection)."""
        rho2 = np.sum(xi * xi, axis=-1)
        if self.alpha0 is None or self.k_max is None:
            top = float(np.max(np.sum(self.xi * self.xi, axis=-1))) if len(self) else 0.0
            return rho2 <= top
        return rho2 <= 2.0 * self.k_max * np.abs(xi @ self.alpha0)


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    q_rec: Potential
    rel_l2_error: float
    coverage_map: float
    grid_fraction: float = 0.0
    imag_max: float = 0.0
    spectrum: SpectralField | None = None


def data_to_fourier_samples(table: AmplitudeTable, alpha0) -> FourierSamples:
    """``xi = k (alpha0 - beta)`` and ``q~_est(xi) = -4 pi A(beta, alpha0, k)`` per row."""
    alpha0 = unit(alpha0)
    if len(table) and not np.allclose(table.alphas, alpha0, atol=1e-12):
        raise ValueError("table was not generated with the given incidence direction")
    k = np.real(table.ks)
    xi = k[:, None] * (alpha0[None, :] - table.betas)
    k_max = float(np.max(k)) if len(k) else 0.0
    return FourierSamples(xi, -4.0 * np.pi * np.asarray(table.values, dtype=complex), alpha0, k_max)


def born_table(q: Potential, alpha0, betas, ks, *, method: str = "fft", padding: int = 6) -> AmplitudeTable:
    """First-Born amplitudes ``-q~(k(alpha0 - beta)) / (4 pi)`` in table form.

    ``q~`` is the grid transform of ``q``: summed directly (``"direct"``) or
    read off a ``padding``-fold zero-padded FFT by cubic interpolation
    (``"fft"``, a few 1e-6 relative at the default padding).
    """
    alpha0 = unit(alpha0)
    dirs = betas.directions if isinstance(betas, DirectionSet) else np.asarray(betas, float).reshape(-1, 3)
    ks = np.asarray([float(k) for k in ks])
    b = np.tile(dirs, (len(ks), 1))
    kk = np.repeat(ks, dirs.shape[0])
    xi = kk[:, None] * (alpha0 - b)
    if method == "direct":
        qt = fourier_of_potential(q, xi)
    elif method == "fft":
        qt = forward_ft(q.values, q.domain, padding).at(xi) if len(xi) else np.zeros(0, complex)
    else:
        raise ValueError(f"unknown method {method!r}")
    A = -np.atleast_1d(qt) / (4.0 * np.pi)
    return AmplitudeTable(b, np.tile(alpha0, (b.shape[0], 1)), kk.astype(complex), np.atleast_1d(A))


def _radial_fill(grid: np.ndarray, filled: np.ndarray, inside: np.ndarray, rho: np.ndarray, dxi: float) -> np.ndarray:
    # unreached nodes take the shell mean of reached nodes, interpolated in |xi|
    out = grid.copy()
    todo = inside & ~filled
    if not np.any(todo) or not np.any(filled):
        return out
    shell = np.rint(rho / dxi).astype(int)
    hit = filled & inside
    nb = int(shell[inside].max()) + 1
    cnt = np.bincount(shell[hit], minlength=nb)
    sre = np.bincount(shell[hit], weights=grid[hit].real, minlength=nb)
    sim = np.bincount(shell[hit], weights=grid[hit].imag, minlength=nb)
    have = cnt > 0
    radii = np.arange(nb)[have] * dxi
    mean_re = sre[have] / cnt[have]
    mean_im = sim[have] / cnt[have]
    out[todo] = np.interp(rho[todo], radii, mean_re) + 1j * np.interp(rho[todo], radii, mean_im)
    return out


def _hermitian(grid: np.ndarray) -> np.ndarray:
    # zero frequency at index N//2 (N even): xi_j -> -xi_j maps j to N - j
    N = grid.shape[0]
    idx = (N - np.arange(N)) % N
    mirror = np.conj(grid[np.ix_(idx, idx, idx)])
    return 0.5 * (grid + mirror)


def reconstruct(
    samples: FourierSamples,
    domain: BallDomain,
    reg_fill: str = "zero",
    *,
    padding: int = 3,
    capture: float = 0.5,
    truth: Potential | None = None,
    smoothness_ell: int = 8,
) -> ReconstructionResult:
    """Bin samples onto the dual grid and invert.

    Samples (and their reflections) within ``capture * dxi`` of a dual node
    (per axis; 0.5 means plain nearest-node binning) are averaged into that
    node. Coverage is the reached fraction of nodes in the data's reachable
    set. Unreached nodes with ``|xi|`` below the largest sample are left at
    zero (``"zero"``) or given the shell mean of reached nodes interpolated
    in ``|xi|`` (``"radial"``). The inverse transform is truncated to its
    real part and to the interior of ``B_a``.
    """
    if reg_fill not in FILL_MODES:
        raise ValueError(f"reg_fill must be one of {FILL_MODES}")
    if len(samples) == 0:
        raise ValueError("no samples")
    n, h, a = domain.grid_n, domain.spacing, domain.radius_a
    N = padding * n
    if N % 2:
        N += 1
    dxi = 2.0 * np.pi / (N * h)
    both = samples.reflected()
    pos = both.xi / dxi + N // 2
    node = np.rint(pos).astype(int)
    near = np.all(np.abs(pos - node) <= capture, axis=1) & np.all((node >= 0) & (node < N), axis=1)
    flat = np.ravel_multi_index(tuple(node[near].T), (N, N, N))
    sums = np.bincount(flat, weights=both.values[near].real, minlength=N**3) + 1j * np.bincount(
        flat, weights=both.values[near].imag, minlength=N**3
    )
    counts = np.bincount(flat, minlength=N**3)
    filled = (counts > 0).reshape((N,) * 3)
    grid = np.zeros(N**3, dtype=complex)
    grid[counts > 0] = sums[counts > 0] / counts[counts > 0]
    grid = grid.reshape((N,) * 3)

    axis = dxi * (np.arange(N) - N // 2)
    rho = np.sqrt(axis[:, None, None] ** 2 + axis[None, :, None] ** 2 + axis[None, None, :] ** 2)
    reach = float(np.max(np.linalg.norm(samples.xi, axis=1)))
    inside = rho <= reach
    xi_nodes = np.stack(np.meshgrid(axis, axis, axis, indexing="ij"), axis=-1)
    region = samples.reachable(xi_nodes)
    coverage = float(np.count_nonzero(filled & region) / max(1, np.count_nonzero(region)))
    if 1.0 - coverage > 0.5:
        warnings.warn(f"low dual-grid coverage: {coverage:.1%} of reachable nodes", RuntimeWarning, stacklevel=2)
    if reg_fill == "radial":
        grid = _radial_fill(grid, filled, inside, rho, dxi)
    grid = _hermitian(grid)

    spec = SpectralField(grid, dxi)
    field = inverse_ft(spec, h, -a)[:n, :n, :n]
    imag_max = float(np.max(np.abs(field.imag)))
    values = np.where(domain.radius < a - h - 1e-12, field.real, 0.0)
    q_rec = Potential(domain, values, smoothness_ell, "reconstruction")
    err = relative_l2_error(q_rec, truth) if truth is not None else float("nan")
    return ReconstructionResult(q_rec, err, coverage, float(filled.mean()), imag_max, spec)


def l2_difference(q: Potential, ref: Potential) -> float:
    w = q.domain.ball_weights
    return float(np.sqrt(np.sum(w * (q.values - ref.values) ** 2)))


def relative_l2_error(q: Potential, ref: Potential) -> float:
    w = ref.domain.ball_weights
    norm = float(np.sqrt(np.sum(w * ref.values**2)))
    diff = l2_difference(q, ref)
    return diff if norm == 0 else diff / norm


def dense_sweep(m: int = 8192, k_max: float = 48.0, dk: float = 0.5):
    """Direction set and wavenumber list used for the dense reconstruction runs."""
    from .grid import fibonacci_sphere

    ks = np.arange(dk, k_max + 0.5 * dk, dk)
    return fibonacci_sphere(m), ks


def invert_potential(q: Potential, alpha0, betas, ks, *, born: bool = False, **kw) -> ReconstructionResult:
    """Generate data (solver or exact Born) for ``q`` and reconstruct it."""
    table = born_table(q, alpha0, betas, ks) if born else fixed_direction_dataset(q, alpha0, betas, ks)
    return reconstruct(data_to_fourier_samples(table, alpha0), q.domain, truth=q, **kw)
