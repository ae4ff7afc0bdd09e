"""Free-space Helmholtz kernel, its direction-factored form and Fourier symbol.

All transforms in the package use the ``exp(+i xi.x)`` forward convention,
fixed in :mod:`fixedscat.spectral`.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy import fft

from .errors import ResonanceError, SingularEvaluationError
from .grid import BallDomain

FOUR_PI = 4.0 * np.pi
# largest n handled by explicit summation when method="auto"
DIRECT_MAX_N = 17


@dataclass(frozen=True)
class KernelParams:
    """Wavenumber ``k`` (Im k >= 0) and factoring direction ``beta``.

    ``beta=None`` selects the unfactored kernel ``g``.
    """

    k: complex
    beta: tuple[float, float, float] | None = None

    def __post_init__(self):
        k = complex(self.k)
        if k.imag < 0:
            raise ValueError(f"Im k must be >= 0, got k={k}")
        object.__setattr__(self, "k", k)
        if self.beta is not None:
            b = np.asarray(self.beta, dtype=float).reshape(3)
            if abs(np.linalg.norm(b) - 1.0) > 1e-12:
                raise ValueError("beta must be a unit vector")
            object.__setattr__(self, "beta", tuple(float(c) for c in b))

    @property
    def beta_array(self) -> np.ndarray:
        return np.zeros(3) if self.beta is None else np.asarray(self.beta)


def free_green(x, y, k: complex):
    """``exp(ik|x-y|) / (4 pi |x-y|)``; broadcasts over leading axes."""
    r = np.linalg.norm(np.asarray(x, dtype=float) - np.asarray(y, dtype=float), axis=-1)
    if np.any(r == 0):
        raise SingularEvaluationError("free_green evaluated on the diagonal x == y")
    out = np.exp(1j * complex(k) * r) / (FOUR_PI * r)
    return out if out.ndim else complex(out)


def factored_green(x_minus_y, params: KernelParams):
    """``exp(ik(|z| - beta.z)) / (4 pi |z|)`` with ``z = x - y``."""
    z = np.asarray(x_minus_y, dtype=float)
    r = np.linalg.norm(z, axis=-1)
    if np.any(r == 0):
        raise SingularEvaluationError("factored_green evaluated at z == 0")
    phase = r - z @ params.beta_array
    out = np.exp(1j * params.k * phase) / (FOUR_PI * r)
    return out if out.ndim else complex(out)


def symbol_denominator(xi, k: complex, beta) -> np.ndarray:
    xi = np.asarray(xi)
    return np.sum(xi * xi, axis=-1) - 2.0 * complex(k) * (xi @ np.asarray(beta, dtype=float))


def green_symbol(xi, k: complex, beta, *, atol: float = 1e-14):
    """``1 / (xi.xi - 2 k beta.xi)``; raises on the characteristic set."""
    d = symbol_denominator(xi, k, beta)
    if np.any(np.abs(d) <= atol):
        raise ResonanceError("xi lies on the characteristic set xi^2 = 2k beta.xi")
    out = 1.0 / d
    return out if np.ndim(out) else complex(out)


def truncated_symbol(xi, k: complex, beta, cutoff: float):
    """Exact transform of the factored kernel restricted to ``|z| < cutoff``.

    Equals ``(1/rho) int_0^R exp(ikr) sin(rho r) dr`` with
    ``rho^2 = (xi - k beta).(xi - k beta)``; it tends to ``green_symbol`` as
    ``cutoff`` grows whenever ``Im(k +- rho) > 0``.
    """
    xi = np.asarray(xi, dtype=complex)
    k = complex(k)
    w = xi - k * np.asarray(beta, dtype=float)
    rho = np.sqrt(np.sum(w * w, axis=-1))
    R = float(cutoff)

    def phi(c):
        # (exp(icR) - 1)/c, with the c -> 0 limit iR
        small = np.abs(c * R) < 1e-6
        cs = np.where(small, 1.0, c)
        val = np.expm1(1j * cs * R) / cs
        return np.where(small, 1j * R - 0.5 * c * R * R, val)

    tiny = np.abs(rho * R) < 1e-6
    rs = np.where(tiny, 1.0, rho)
    general = -0.5 * (phi(k + rs) - phi(k - rs)) / rs
    # rho -> 0: int_0^R r exp(ikr) dr
    if abs(k * R) < 1e-8:
        at_zero = 0.5 * R * R + 0j
    else:
        ik = 1j * k
        at_zero = (np.exp(ik * R) * (ik * R - 1.0) + 1.0) / (ik * ik)
    out = np.where(tiny, at_zero, general)
    return out if np.ndim(out) else complex(out)


def self_weight(spacing: float) -> float:
    """Quadrature weight of the singular node.

    Average of ``1/r`` over a ball of radius ``h/2`` (``3/h``) times the cell
    volume, times ``1/(4 pi)``.
    """
    h = spacing
    return (3.0 / (2.0 * (h / 2.0))) * h**3 / FOUR_PI


def _offset_kernel(offsets: np.ndarray, spacing: float, params: KernelParams, cutoff):
    """Kernel times cell volume on integer offsets; singular node gets ``self_weight``."""
    z = offsets * spacing
    r = np.linalg.norm(z, axis=-1)
    at_origin = r == 0
    rs = np.where(at_origin, 1.0, r)
    phase = rs - z @ params.beta_array
    vals = np.exp(1j * params.k * phase) / (FOUR_PI * rs) * spacing**3
    vals[at_origin] = self_weight(spacing)
    if cutoff is not None:
        vals[r > cutoff] = 0.0
    return vals


@lru_cache(maxsize=12)
def _kernel_spectrum(n: int, spacing: float, params: KernelParams, size: int, cutoff):
    idx = np.arange(size)
    idx = np.where(idx < (size + 1) // 2, idx, idx - size)  # minimum image
    offsets = np.stack(np.meshgrid(idx, idx, idx, indexing="ij"), axis=-1)
    return fft.fftn(_offset_kernel(offsets, spacing, params, cutoff), workers=-1)


@lru_cache(maxsize=4)
def _offset_table(n: int, spacing: float, params: KernelParams):
    d = np.arange(-(n - 1), n)
    offsets = np.stack(np.meshgrid(d, d, d, indexing="ij"), axis=-1)
    return _offset_kernel(offsets, spacing, params, None)


def padded_size(n: int, padding: int = 2) -> int:
    if padding < 2:
        raise ValueError("zero padding must be at least 2x to avoid wrap-around")
    return padding * n


def convolve_green(
    field,
    params: KernelParams,
    domain: BallDomain,
    *,
    method: str = "auto",
    padding: int = 2,
) -> np.ndarray:
    """Grid evaluation of ``x -> int_{B_a} G(x - y) field(y) dy`` at every node.

    The integrand is restricted to ``|y| <= a`` with trapezoidal weights; the
    diagonal uses :func:`self_weight`.
    """
    f = np.asarray(field)
    if f.shape != domain.shape:
        raise ValueError(f"field shape {f.shape} != grid {domain.shape}")
    n, h = domain.grid_n, domain.spacing
    # trapezoid weights relative to the full cell volume already in the kernel
    fw = f * (domain.ball_weights / domain.cell_volume)
    if method == "auto":
        method = "direct" if n <= DIRECT_MAX_N else "fft"
    if method == "direct":
        return _convolve_direct(fw, n, h, params)
    if method != "fft":
        raise ValueError(f"unknown convolution method {method!r}")
    size = padded_size(n, padding)
    kf = _kernel_spectrum(n, h, params, size, None)
    buf = np.zeros((size,) * 3, dtype=complex)
    buf[:n, :n, :n] = fw
    out = fft.ifftn(fft.fftn(buf, workers=-1) * kf, workers=-1)
    return out[:n, :n, :n]


def _convolve_direct(fw: np.ndarray, n: int, h: float, params: KernelParams) -> np.ndarray:
    table = _offset_table(n, h, params)
    src = np.argwhere(fw != 0)
    if src.size == 0:
        return np.zeros(fw.shape, dtype=complex)
    vals = fw[tuple(src.T)]
    tgt = np.indices(fw.shape).reshape(3, -1).T
    out = np.empty(tgt.shape[0], dtype=complex)
    block = max(1, 2_000_000 // src.shape[0])
    for s in range(0, tgt.shape[0], block):
        d = tgt[s : s + block, None, :] - src[None, :, :] + (n - 1)
        out[s : s + block] = table[d[..., 0], d[..., 1], d[..., 2]] @ vals
    return out.reshape(fw.shape)


def extended_convolution(field, params: KernelParams, domain: BallDomain, cutoff: float, padding: int = 2):
    """Convolution with the kernel truncated to ``|z| <= cutoff`` on the whole padded box.

    The result is the periodised field on ``padding * n`` nodes per axis
    starting at ``-a``; its grid transform at the dual nodes samples the
    continuum transform of the truncated convolution.
    """
    f = np.asarray(field)
    n, h = domain.grid_n, domain.spacing
    size = padded_size(n, padding)
    if cutoff > (size // 2) * h + 1e-12:
        raise ValueError("cutoff exceeds half the padded box")
    kf = _kernel_spectrum(n, h, params, size, float(cutoff))
    buf = np.zeros((size,) * 3, dtype=complex)
    buf[:n, :n, :n] = f * (domain.ball_weights / domain.cell_volume)
    return fft.ifftn(fft.fftn(buf, workers=-1) * kf, workers=-1)
