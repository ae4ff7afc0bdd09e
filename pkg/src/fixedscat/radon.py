"""Plane-integral (Radon) transform of grid potentials and its three standard
identities: total mass, the Fourier slice relation and antipodal symmetry."""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .grid import DirectionSet, ball_quadrature, unit
from .potential import Potential

METHODS = ("linear", "cubic", "exact")


@dataclass(frozen=True, eq=False)
class RadonProfile:
    beta: np.ndarray
    lambdas: np.ndarray
    values: np.ndarray

    @property
    def dlambda(self) -> float:
        return float(self.lambdas[1] - self.lambdas[0])

    def weights(self) -> np.ndarray:
        w = np.full(self.lambdas.shape, self.dlambda)
        w[0] = w[-1] = 0.5 * self.dlambda
        return w

    def integrate(self, g=None) -> complex:
        """Trapezoidal ``int p(beta, lam) g(lam) dlam`` (``g = 1`` by default)."""
        vals = self.values if g is None else self.values * g(self.lambdas)
        return np.sum(self.weights() * vals)

    def to_csv(self, path, header_comment: str | None = None) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with path.open("w", newline="") as fh:
            if header_comment:
                fh.write(f"# {header_comment}\n")
            w = csv.writer(fh)
            w.writerow(["lambda", "value"])
            for lam, val in zip(self.lambdas, self.values):
                w.writerow([repr(float(lam)), repr(float(val))])
        return path


def symmetric_offsets(a: float, m: int) -> np.ndarray:
    """``m`` uniform samples of ``[-a, a]`` with exact antisymmetry ``lam[m-1-j] == -lam[j]``."""
    num = 2.0 * np.arange(m) - (m - 1)
    return a * num / (m - 1)


def plane_basis(beta) -> tuple[np.ndarray, np.ndarray]:
    """Orthonormal basis of the plane orthogonal to ``beta``, identical for ``+-beta``.

    Sharing the lattice between antipodal directions makes the sampled
    profile satisfy ``p(beta, lam) == p(-beta, -lam)`` node by node.
    """
    b = unit(beta)
    lead = b[np.argmax(np.abs(b) > 1e-12)]
    if lead < 0:
        b = -b
    ref = np.zeros(3)
    ref[np.argmin(np.abs(b))] = 1.0
    e1 = unit(np.cross(b, ref))
    e2 = np.cross(b, e1)
    return e1, e2


def _sample(f: Potential, pts: np.ndarray, method: str) -> np.ndarray:
    if method == "exact":
        return f(pts)
    dom = f.domain
    idx = (pts + dom.radius_a) / dom.spacing
    order = 1 if method == "linear" else 3
    return ndimage.map_coordinates(
        f.values, idx.reshape(-1, 3).T, order=order, mode="constant", cval=0.0
    ).reshape(pts.shape[:-1])


def radon_transform(f: Potential, beta, m: int | None = None, *, method: str = "linear") -> RadonProfile:
    """Profile ``lam -> int_{beta.x = lam} f dsigma`` on ``m`` offsets in ``[-a, a]``.

    Each plane is covered by a square lattice of the grid spacing, clipped
    to the disk ``|x| <= a``; values come from grid interpolation
    (``linear``/``cubic``) or the potential's own formula (``exact``).
    """
    if method not in METHODS:
        raise ValueError(f"method must be one of {METHODS}")
    dom = f.domain
    a, h = dom.radius_a, dom.spacing
    m = 2 * dom.grid_n if m is None else int(m)
    if m < 16:
        raise ValueError("need at least 16 offsets")
    b = unit(beta)
    lambdas = symmetric_offsets(a, m)
    if f.is_zero:
        return RadonProfile(b, lambdas, np.zeros(m))
    e1, e2 = plane_basis(b)
    M = int(np.ceil(a / h))
    uv = h * np.arange(-M, M + 1)
    U, V = np.meshgrid(uv, uv, indexing="ij")
    rho2 = U * U + V * V
    disk = rho2 <= a * a
    U, V, rho2 = U[disk], V[disk], rho2[disk]
    values = np.zeros(m)
    for j, lam in enumerate(lambdas):
        keep = rho2 <= a * a - lam * lam
        if not np.any(keep):
            continue
        pts = lam * b + U[keep, None] * e1 + V[keep, None] * e2
        values[j] = h * h * np.sum(_sample(f, pts, method))
    return RadonProfile(b, lambdas, values)


def _rel(lhs, rhs) -> float:
    scale = max(abs(lhs), abs(rhs))
    return 0.0 if scale == 0 else float(abs(lhs - rhs) / scale)


def moment_identity_check(f: Potential, beta, *, m: int | None = None, method: str = "linear") -> float:
    """Relative gap between ``int_{B_a} f dx`` and ``int p(beta, lam) dlam``."""
    lhs = ball_quadrature(f.domain, f.values)
    rhs = radon_transform(f, beta, m, method=method).integrate()
    return _rel(lhs, rhs)


def slice_identity_check(f: Potential, beta, k: float, *, m: int | None = None, method: str = "linear") -> float:
    """Relative gap between ``int exp(ik beta.x) f dx`` and ``int exp(ik lam) p(beta, lam) dlam``."""
    b = unit(beta)
    dom = f.domain
    lhs = ball_quadrature(dom, np.exp(1j * k * (dom.coords @ b)) * f.values)
    rhs = radon_transform(f, b, m, method=method).integrate(lambda lam: np.exp(1j * k * lam))
    return _rel(lhs, rhs)


def antipodal_identity_check(f: Potential, betas: DirectionSet, *, m: int | None = None, method: str = "linear") -> float:
    """``max |p(beta, lam) - p(-beta, -lam)|`` over the set and all offsets."""
    worst = 0.0
    for b in betas.directions:
        p = radon_transform(f, b, m, method=method)
        q = radon_transform(f, -b, m, method=method)
        worst = max(worst, float(np.max(np.abs(p.values - q.values[::-1]))))
    return worst
