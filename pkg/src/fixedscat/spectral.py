"""Grid Fourier transforms under the single convention

    F(g)(xi) = int g(x) exp(+i xi.x) dx,   g(x) = (2 pi)^-3 int exp(-i xi.x) F(g)(xi) dxi,

the convolution theorem, the Fourier-domain equation for ``eps`` and the
complex-frequency transform along a direction.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy import fft, ndimage, signal

from .green import KernelParams, extended_convolution, symbol_denominator, truncated_symbol
from .grid import BallDomain, unit
from .potential import Potential
from .radon import RadonProfile, radon_transform

# sign of the exponent in the forward transform; everything else derives from it
FORWARD_SIGN = +1
# largest |eta| * a accepted before exp(eta * a) leaves double range
MAX_ETA_A = 700.0


@dataclass(frozen=True, eq=False)
class SpectralField:
    """Transform samples on the dual grid, zero frequency at index ``N // 2``."""

    values: np.ndarray
    freq_spacing: float
    convention: str = "exp(+i xi.x)"

    @property
    def size(self) -> int:
        return self.values.shape[0]

    @cached_property
    def axis(self) -> np.ndarray:
        return self.freq_spacing * (np.arange(self.size) - self.size // 2)

    @cached_property
    def xi(self) -> np.ndarray:
        a = self.axis
        return np.stack(np.meshgrid(a, a, a, indexing="ij"), axis=-1)

    @property
    def period(self) -> float:
        return self.freq_spacing * self.size

    def at(self, xi) -> np.ndarray | complex:
        """Cubic-spline interpolation; the grid spectrum is periodic in ``xi``."""
        pts = np.asarray(xi, dtype=float)
        idx = pts / self.freq_spacing + self.size // 2
        flat = idx.reshape(-1, 3).T
        re = ndimage.map_coordinates(self.values.real, flat, order=3, mode="grid-wrap")
        im = ndimage.map_coordinates(self.values.imag, flat, order=3, mode="grid-wrap")
        out = (re + 1j * im).reshape(pts.shape[:-1])
        return complex(out) if out.ndim == 0 else out

    def to_csv_slice(self, path, axis: int = 2, index: int | None = None, header_comment: str | None = None) -> Path:
        """Write the plane ``xi_axis = axis_value[index]`` as rows ``(xi1, xi2, re, im)``."""
        index = self.size // 2 if index is None else index
        plane = np.take(self.values, index, axis=axis)
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        names = [n for i, n in enumerate(("xi_x", "xi_y", "xi_z")) if i != axis]
        with path.open("w", newline="") as fh:
            if header_comment:
                fh.write(f"# {header_comment}\n")
            w = csv.writer(fh)
            w.writerow([*names, "re", "im"])
            for i, a in enumerate(self.axis):
                for j, b in enumerate(self.axis):
                    w.writerow([repr(float(a)), repr(float(b)), repr(float(plane[i, j].real)), repr(float(plane[i, j].imag))])
        return path


def box_transform(values, spacing: float, origin: float, size: int | None = None) -> SpectralField:
    """``h^3 sum f(x_n) exp(i xi_j.x_n)`` for nodes ``x_n = origin + n h``, zero-padded to ``size``."""
    f = np.asarray(values)
    n = f.shape[0]
    size = n if size is None else int(size)
    buf = np.zeros((size,) * 3, dtype=complex)
    buf[:n, :n, :n] = f
    # sum_n f_n exp(+2 pi i j n / N) == N^3 * ifftn
    raw = fft.ifftn(buf, workers=-1) * size**3
    raw = fft.fftshift(raw)
    dxi = 2.0 * np.pi / (size * spacing)
    xi1 = dxi * (np.arange(size) - size // 2)
    ph = np.exp(1j * FORWARD_SIGN * xi1 * origin)
    raw *= ph[:, None, None] * ph[None, :, None] * ph[None, None, :]
    return SpectralField(raw * spacing**3, dxi)


def forward_ft(field, domain: BallDomain, padding: int = 2) -> SpectralField:
    """Trapezoidal grid transform of a field on ``domain``, zero-padded ``padding``-fold."""
    if padding < 1:
        raise ValueError("padding must be >= 1")
    f = np.asarray(field)
    if f.shape != domain.shape:
        raise ValueError("field does not match the grid")
    fw = f * (domain.trapezoid_weights / domain.cell_volume)
    return box_transform(fw, domain.spacing, -domain.radius_a, padding * domain.grid_n)


def inverse_ft(spec: SpectralField, spacing: float, origin: float) -> np.ndarray:
    """Inverse of :func:`box_transform` on the full periodic box."""
    size = spec.size
    xi1 = spec.axis
    ph = np.exp(-1j * FORWARD_SIGN * xi1 * origin)
    g = spec.values * ph[:, None, None] * ph[None, :, None] * ph[None, None, :]
    g = fft.ifftshift(g)
    # (2pi)^-3 dxi^3 sum_j F_j exp(-2 pi i j n / N) == fftn / (N h)^3
    return fft.fftn(g, workers=-1) / (size * spacing) ** 3


def parseval_gap(field, domain: BallDomain, padding: int = 2) -> float:
    """Relative gap between ``sum |f|^2 h^3`` and ``(2 pi)^-3 sum |F|^2 dxi^3``."""
    f = np.asarray(field) * (domain.trapezoid_weights / domain.cell_volume)
    spec = box_transform(f, domain.spacing, -domain.radius_a, padding * domain.grid_n)
    lhs = np.sum(np.abs(f) ** 2) * domain.cell_volume
    rhs = np.sum(np.abs(spec.values) ** 2) * spec.freq_spacing**3 / (2 * np.pi) ** 3
    return float(abs(lhs - rhs) / lhs) if lhs else float(abs(rhs))


def convolution_check(f, g, domain: BallDomain, padding: int = 2) -> float:
    """Max relative gap between ``F(f*g)`` and ``F(f) F(g)``.

    ``f*g`` is summed in real space (direct for small grids, scipy's FFT
    convolution otherwise) on the ``2n-1`` grid starting at ``-2a``.
    """
    n, h, a = domain.grid_n, domain.spacing, domain.radius_a
    w = domain.trapezoid_weights / domain.cell_volume
    fw, gw = np.asarray(f) * w, np.asarray(g) * w
    size = max(padding * n, 2 * n - 1)
    how = "direct" if n <= 13 else "fft"
    conv = signal.convolve(fw, gw, mode="full", method=how) * domain.cell_volume
    lhs = box_transform(conv, h, -2 * a, size).values
    rhs = (box_transform(fw, h, -a, size).values * box_transform(gw, h, -a, size).values)
    scale = np.max(np.abs(rhs))
    if scale == 0:
        return float(np.max(np.abs(lhs)))
    return float(np.max(np.abs(lhs - rhs)) / scale)


def eps_tilde_residual(
    sol,
    q: Potential,
    beta=None,
    k: complex | None = None,
    *,
    padding: int = 2,
    margin: float = 1.0,
    cutoff: float | None = None,
    return_info: bool = False,
):
    """Residual of the Fourier-domain equation for ``eps`` over the dual grid.

    ``eps`` is extended off ``B_a`` by the convolution with the kernel cut at
    ``|z| = cutoff`` (default ``2a``, which leaves an exact solution unchanged
    on ``B_a``) while the solver's values are kept inside ``B_a``; its
    transform is then an honest function, and the equation is checked with the
    symbol of that truncated kernel, whose large-cutoff limit is
    ``1 / (xi^2 - 2k alpha.xi)``. The ``q * eps`` convolution term is evaluated
    as ``F(q eps)``. Dual nodes with ``|xi^2 - 2k alpha.xi| < margin`` are
    skipped. The value returned is ``max |residual| / max |eps~|`` over the
    remaining nodes.
    """
    alpha = sol.alpha if beta is None else unit(beta)
    if not np.allclose(alpha, sol.alpha, atol=1e-12):
        raise ValueError("kernel direction must equal the solution's incidence direction")
    k = sol.k if k is None else complex(k)
    if abs(k - sol.k) > 1e-12 * max(1.0, abs(k)):
        raise ValueError("k differs from the solution's wavenumber")
    dom = q.domain
    a, h, n = dom.radius_a, dom.spacing, dom.grid_n
    cutoff = 2.0 * a if cutoff is None else float(cutoff)
    reach = q.support_radius if q.support_radius is not None else a
    if cutoff < a + reach - 1e-12:
        raise ValueError("cutoff too small: the extension would change eps on the support of q")
    params = KernelParams(k, tuple(alpha))
    size = padding * n

    eps_ext = -extended_convolution(q.values * sol.v, params, dom, cutoff, padding)
    # inside the ball keep the solver's own field so a non-solution shows up
    inner = eps_ext[:n, :n, :n]
    inner[dom.ball_mask] = np.asarray(sol.eps)[dom.ball_mask]
    eps_t = box_transform(eps_ext, h, -a).values
    qt = forward_ft(q.values, dom, padding)
    conv_term = forward_ft(q.values * sol.eps, dom, padding).values
    xi = qt.xi
    sym = truncated_symbol(xi, k, alpha, cutoff)
    resid = eps_t + sym * (qt.values + conv_term)
    den = symbol_denominator(xi, k, alpha)
    keep = np.abs(den) >= margin
    skipped = 1.0 - keep.mean()
    scale = np.max(np.abs(eps_t[keep])) if np.any(keep) else 0.0
    value = 0.0 if scale == 0 else float(np.max(np.abs(resid[keep])) / scale)
    if return_info:
        info = {
            "skipped_fraction": float(skipped),
            "admissible_nodes": int(keep.sum()),
            "dual_size": size,
            "cutoff": cutoff,
            "max_eps_tilde": float(scale),
            "max_convolution_term": float(np.max(np.abs(sym * conv_term)[keep])) if np.any(keep) else 0.0,
        }
        return value, info
    return value


def _check_eta(eta: float, a: float):
    if eta < 0:
        raise ValueError("eta must be >= 0")
    if eta * a > MAX_ETA_A:
        raise OverflowError(f"eta * a = {eta * a:g} exceeds {MAX_ETA_A}")


def direct_complex_transform(p: Potential, beta, kappa: float, eta: float) -> complex:
    """3D quadrature of ``int p(x) exp(i (kappa + i eta) beta.x) dx``."""
    _check_eta(eta, p.domain.radius_a)
    b = unit(beta)
    dom = p.domain
    z = complex(kappa, eta)
    return complex(np.sum(dom.ball_weights * p.values * np.exp(1j * z * (dom.coords @ b))))


def profile_transform(profile: RadonProfile, kappa, eta) -> np.ndarray | complex:
    """``int exp(i kappa lam - eta lam) p(beta, lam) dlam``; broadcasts over kappa/eta."""
    kappa = np.asarray(kappa, dtype=float)
    eta = np.asarray(eta, dtype=float)
    lam = profile.lambdas
    wv = profile.weights() * profile.values
    expo = (1j * kappa[..., None] - eta[..., None]) * lam
    out = np.exp(expo) @ wv
    return complex(out) if out.ndim == 0 else out


def complex_freq_transform(
    p: Potential,
    beta,
    kappa: float,
    eta: float,
    *,
    m: int | None = None,
    method: str = "cubic",
    return_both: bool = False,
):
    """``p~((kappa + i eta) beta)`` through the plane-integral profile.

    Plane values come from cubic grid interpolation by default; linear
    interpolation carries an ``O((kappa h)^2)`` error into this path.

    With ``return_both=True`` the pair ``(profile_value, direct_value)`` is
    returned so the two evaluation routes can be compared.
    """
    _check_eta(eta, p.domain.radius_a)
    prof = radon_transform(p, beta, m, method=method)
    val = profile_transform(prof, kappa, eta)
    if return_both:
        return val, direct_complex_transform(p, beta, kappa, eta)
    return val


def max_abs_transform(p: Potential, padding: int = 2) -> float:
    """Global maximum of ``|p~|`` over the real dual grid."""
    return float(np.max(np.abs(forward_ft(p.values, p.domain, padding).values)))
