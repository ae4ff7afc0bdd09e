"""Admissible test potentials: real, compactly supported inside B_a, with an
honest smoothness declaration."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

import numpy as np

from .grid import BallDomain, make_grid

# rows of xi evaluated per block in the direct Fourier sum
_XI_BLOCK = 256


@dataclass(frozen=True, eq=False)
class Potential:
    """Real potential sampled on a ``BallDomain``.

    ``func`` optionally evaluates the generating formula at arbitrary points
    (shape ``(..., 3)``); it is used wherever off-grid values are needed.
    """

    domain: BallDomain
    values: np.ndarray
    smoothness_ell: int
    label: str
    func: Callable[[np.ndarray], np.ndarray] | None = field(default=None, repr=False)
    support_radius: float | None = None

    def __post_init__(self):
        v = np.asarray(self.values)
        if np.iscomplexobj(v):
            if np.any(v.imag != 0):
                raise ValueError("potential values must be real")
            v = v.real
        v = np.ascontiguousarray(v, dtype=float)
        if v.shape != self.domain.shape:
            raise ValueError(f"values shape {v.shape} != grid shape {self.domain.shape}")
        rim = self.domain.radius >= self.domain.radius_a - self.domain.spacing * (1 - 1e-12)
        if np.any(v[rim] != 0):
            raise ValueError(
                "potential must vanish on nodes with |x| >= a - spacing (compact support margin)"
            )
        object.__setattr__(self, "values", v)

    @property
    def is_zero(self) -> bool:
        return not np.any(self.values)

    def __call__(self, points) -> np.ndarray:
        if self.func is None:
            raise ValueError(f"potential {self.label!r} has no analytic evaluator")
        return self.func(np.asarray(points, dtype=float))

    def scaled(self, c: float, label: str | None = None) -> "Potential":
        f = self.func
        return Potential(
            self.domain,
            c * self.values,
            self.smoothness_ell,
            label or f"{c:g}*{self.label}",
            None if f is None else (lambda x: c * f(x)),
            self.support_radius,
        )

    def __sub__(self, other: "Potential") -> "Potential":
        if other.domain != self.domain:
            raise ValueError("potentials live on different grids")
        f, g = self.func, other.func
        func = None if f is None or g is None else (lambda x: f(x) - g(x))
        radii = [r for r in (self.support_radius, other.support_radius) if r is not None]
        return Potential(
            self.domain,
            self.values - other.values,
            min(self.smoothness_ell, other.smoothness_ell),
            f"{self.label}-{other.label}",
            func,
            max(radii) if len(radii) == 2 else None,
        )


def _radial(center) -> Callable[[np.ndarray], np.ndarray]:
    c = np.zeros(3) if center is None else np.asarray(center, dtype=float)
    return lambda x: np.linalg.norm(np.asarray(x) - c, axis=-1)


def _check_support(domain: BallDomain, support_r: float, center) -> float:
    if not 0 < support_r < domain.radius_a:
        raise ValueError(f"need 0 < support_r < a={domain.radius_a}, got {support_r}")
    offset = 0.0 if center is None else float(np.linalg.norm(center))
    if offset + support_r >= domain.radius_a:
        raise ValueError("shifted support leaves B_a")
    return offset + support_r


def bump_potential(
    domain: BallDomain,
    amplitude: float,
    support_r: float,
    *,
    center=None,
    smoothness_ell: int = 8,
    label: str | None = None,
) -> Potential:
    """C-infinity bump ``amplitude * exp(-R^2 / (R^2 - |x-c|^2))`` inside ``|x-c| < R``."""
    reach = _check_support(domain, support_r, center)
    if smoothness_ell <= 3:
        raise ValueError("declared smoothness must exceed 3")
    r_of = _radial(center)
    r2 = support_r**2

    def func(x):
        r = r_of(x)
        inside = r < support_r
        gap = np.where(inside, r2 - r * r, 1.0)
        return np.where(inside, amplitude * np.exp(-r2 / gap), 0.0)

    return Potential(
        domain,
        func(domain.coords),
        smoothness_ell,
        label or f"bump(A={amplitude:g},R={support_r:g})",
        func,
        reach,
    )


def piecewise_smooth_potential(
    domain: BallDomain,
    amplitude: float,
    support_r: float,
    order: int,
    *,
    center=None,
    label: str | None = None,
) -> Potential:
    """Finite-smoothness family ``amplitude * (1 - |x-c|^2/R^2)_+^order``; declared ell = order."""
    if order < 4:
        raise ValueError(f"order must be >= 4 so that ell > 3, got {order}")
    reach = _check_support(domain, support_r, center)
    r_of = _radial(center)

    def func(x):
        s = 1.0 - (r_of(x) / support_r) ** 2
        return amplitude * np.where(s > 0, s, 0.0) ** order

    return Potential(
        domain,
        func(domain.coords),
        int(order),
        label or f"poly{order}(A={amplitude:g},R={support_r:g})",
        func,
        reach,
    )


def zero_potential(domain: BallDomain, smoothness_ell: int = 8) -> Potential:
    return Potential(
        domain, domain.zeros(), smoothness_ell, "zero", lambda x: np.zeros(np.shape(x)[:-1]), 0.0
    )


def fourier_of_potential(q: Potential, xi) -> np.ndarray | complex:
    """Direct-quadrature transform ``sum_w q(x) exp(i xi.x)`` at the given frequencies.

    ``xi`` may be a single 3-vector or an array of shape ``(..., 3)``; complex
    frequencies are accepted.
    """
    xi = np.asarray(xi)
    scalar = xi.ndim == 1
    flat = xi.reshape(-1, 3)
    w = q.domain.ball_weights * q.values
    idx = np.nonzero(w)
    pts = q.domain.coords[idx]
    wv = w[idx]
    out = np.empty(flat.shape[0], dtype=complex)
    for start in range(0, flat.shape[0], _XI_BLOCK):
        block = flat[start : start + _XI_BLOCK]
        out[start : start + _XI_BLOCK] = np.exp(1j * (block @ pts.T)) @ wv
    if scalar:
        return complex(out[0])
    return out.reshape(xi.shape[:-1])


def l2_norm(q: Potential) -> float:
    return float(np.sqrt(np.sum(q.domain.ball_weights * q.values**2)))


def save_potential(q: Potential, path) -> tuple[Path, Path]:
    """Write ``<path>.bin`` (float64, C order) and a JSON header ``<path>.json``."""
    base = Path(path)
    if base.suffix in (".bin", ".json"):
        base = base.with_suffix("")
    binpath, hdrpath = base.with_suffix(".bin"), base.with_suffix(".json")
    binpath.parent.mkdir(parents=True, exist_ok=True)
    q.values.astype("<f8").tofile(binpath)
    header = {
        "n": q.domain.grid_n,
        "a": q.domain.radius_a,
        "ell": q.smoothness_ell,
        "label": q.label,
        "dtype": "float64-le",
        "order": "C",
        "data": binpath.name,
    }
    hdrpath.write_text(json.dumps(header, indent=2) + "\n")
    return binpath, hdrpath


def load_potential(path) -> Potential:
    base = Path(path)
    if base.suffix in (".bin", ".json"):
        base = base.with_suffix("")
    header = json.loads(base.with_suffix(".json").read_text())
    domain = make_grid(header["a"], header["n"])
    values = np.fromfile(base.with_suffix(".bin"), dtype="<f8").reshape(domain.shape)
    return Potential(domain, values, int(header["ell"]), header["label"])
