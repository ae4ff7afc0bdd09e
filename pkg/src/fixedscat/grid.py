"""Uniform Cartesian grids over the cube enclosing B_a, sphere direction sets
and the trapezoidal quadrature shared by the rest of the package."""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

GOLDEN_ANGLE = np.pi * (3.0 - np.sqrt(5.0))


@dataclass(frozen=True)
class BallDomain:
    """Grid of ``grid_n`` points per axis spanning ``[-a, a]^3``."""

    radius_a: float
    grid_n: int

    def __post_init__(self):
        if not self.radius_a > 0:
            raise ValueError(f"radius_a must be positive, got {self.radius_a}")
        if self.grid_n < 8:
            raise ValueError(f"grid_n must be >= 8, got {self.grid_n}")

    @property
    def spacing(self) -> float:
        return 2.0 * self.radius_a / (self.grid_n - 1)

    @property
    def shape(self) -> tuple[int, int, int]:
        return (self.grid_n,) * 3

    @property
    def cell_volume(self) -> float:
        return self.spacing**3

    @cached_property
    def axis(self) -> np.ndarray:
        return np.linspace(-self.radius_a, self.radius_a, self.grid_n)

    @cached_property
    def coords(self) -> np.ndarray:
        """Node coordinates, shape ``(n, n, n, 3)``."""
        x = self.axis
        return np.stack(np.meshgrid(x, x, x, indexing="ij"), axis=-1)

    @cached_property
    def radius(self) -> np.ndarray:
        return np.linalg.norm(self.coords, axis=-1)

    @cached_property
    def ball_mask(self) -> np.ndarray:
        # small slack so nodes sitting exactly on |x| = a are kept
        return self.radius <= self.radius_a * (1.0 + 1e-12)

    @cached_property
    def trapezoid_weights(self) -> np.ndarray:
        w1 = np.full(self.grid_n, self.spacing)
        w1[0] = w1[-1] = 0.5 * self.spacing
        return w1[:, None, None] * w1[None, :, None] * w1[None, None, :]

    @cached_property
    def ball_weights(self) -> np.ndarray:
        """Trapezoidal weights zeroed outside ``|x| <= a``."""
        return np.where(self.ball_mask, self.trapezoid_weights, 0.0)

    @property
    def has_center_node(self) -> bool:
        return self.grid_n % 2 == 1

    def zeros(self, dtype=float) -> np.ndarray:
        return np.zeros(self.shape, dtype=dtype)


def make_grid(radius_a: float, n: int) -> BallDomain:
    return BallDomain(float(radius_a), int(n))


@dataclass(frozen=True, eq=False)
class DirectionSet:
    """Unit vectors with quadrature weights.

    ``mode="sphere"`` weights sum to 4*pi, ``mode="average"`` weights sum to 1.
    """

    directions: np.ndarray
    weights: np.ndarray
    mode: str = "sphere"

    def __post_init__(self):
        d = np.asarray(self.directions, dtype=float).reshape(-1, 3)
        w = np.asarray(self.weights, dtype=float).reshape(-1)
        if d.shape[0] != w.shape[0]:
            raise ValueError("directions and weights differ in length")
        if self.mode not in ("sphere", "average"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if np.any(w <= 0):
            raise ValueError("weights must be positive")
        if np.max(np.abs(np.linalg.norm(d, axis=1) - 1.0)) > 1e-12:
            raise ValueError("directions must be unit vectors")
        object.__setattr__(self, "directions", d)
        object.__setattr__(self, "weights", w)

    def __len__(self):
        return self.directions.shape[0]

    def __iter__(self):
        return iter(self.directions)

    def integrate(self, values) -> complex | float:
        return np.sum(self.weights * np.asarray(values))

    def symmetrized(self) -> "DirectionSet":
        """Union with the antipodal set; total weight preserved."""
        d = np.concatenate([self.directions, -self.directions])
        w = 0.5 * np.concatenate([self.weights, self.weights])
        return DirectionSet(d, w, self.mode)

    def as_average(self) -> "DirectionSet":
        return DirectionSet(self.directions, self.weights / self.weights.sum(), "average")


def _normalize_rows(v: np.ndarray) -> np.ndarray:
    return v / np.linalg.norm(v, axis=-1, keepdims=True)


def fibonacci_sphere(m: int) -> DirectionSet:
    if m < 6:
        raise ValueError(f"need m >= 6 directions, got {m}")
    i = np.arange(m)
    z = 1.0 - (2.0 * i + 1.0) / m
    rho = np.sqrt(1.0 - z * z)
    phi = i * GOLDEN_ANGLE
    d = _normalize_rows(np.stack([rho * np.cos(phi), rho * np.sin(phi), z], axis=1))
    return DirectionSet(d, np.full(m, 4.0 * np.pi / m), "sphere")


def unit(v) -> np.ndarray:
    v = np.asarray(v, dtype=float)
    n = np.linalg.norm(v)
    if n == 0:
        raise ValueError("zero vector has no direction")
    return v / n


def ball_quadrature(domain: BallDomain, f) -> complex:
    """Trapezoidal sum of ``f`` over the grid nodes with ``|x| <= a``.

    ``f`` is either an array sampled on the grid or a callable taking
    coordinates of shape ``(..., 3)``.
    """
    values = f(domain.coords) if callable(f) else np.asarray(f)
    if values.shape != domain.shape:
        raise ValueError(f"field shape {values.shape} does not match grid {domain.shape}")
    return np.sum(domain.ball_weights * values)
