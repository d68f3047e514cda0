"""Deterministic samplers for circles, annuli and tori.

Every sampler steps uniformly in parameter space with arc-length step at most
``h / 2`` in each parameter direction, so each point of the continuous shape
is within ``h / 2`` of the cloud (and the cloud lies on the shape).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ..exceptions import ResourceError
from .cloud import DEFAULT_MAX_POINTS, PointCloud


@dataclass(frozen=True)
class Circle:
    radius: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if self.radius <= 0:
            raise ValueError("circle radius must be positive")

    @property
    def reach(self) -> float:
        return self.radius


@dataclass(frozen=True)
class Annulus:
    inner: float
    outer: float
    center: tuple[float, float] = (0.0, 0.0)

    def __post_init__(self):
        if not 0 < self.inner < self.outer:
            raise ValueError("annulus needs 0 < inner < outer")

    @property
    def reach(self) -> float:
        return self.inner


@dataclass(frozen=True)
class Torus:
    """Torus of revolution; the default (2, 1) torus has reach 1."""

    major: float = 2.0
    minor: float = 1.0
    center: tuple[float, float, float] = (0.0, 0.0, 0.0)
    axis: tuple[float, float, float] = (0.0, 0.0, 1.0)

    def __post_init__(self):
        if not 0 < self.minor < self.major:
            raise ValueError("torus needs 0 < minor < major")
        if np.linalg.norm(self.axis) == 0:
            raise ValueError("torus axis must be non-zero")

    @property
    def reach(self) -> float:
        return min(self.minor, self.major - self.minor)


@dataclass(frozen=True)
class AnnuliCounterexample:
    eps: float
    delta: float


@dataclass(frozen=True)
class ToriCounterexample:
    eps: float
    delta: float


ShapeSpec = Circle | Annulus | Torus | AnnuliCounterexample | ToriCounterexample


def _steps(length: float, h: float) -> int:
    return max(int(math.ceil(length / (0.5 * h) - 1e-9)), 1)


def check_budget(count: int, max_points: int | None):
    if max_points is not None and count > max_points:
        raise ResourceError(
            f"sample would contain {count} points, above the cap of {max_points}; "
            "increase the density h or raise the cap"
        )


def ring(radius: float, h: float) -> np.ndarray:
    """Points on a planar circle of the given radius, the first at angle 0."""
    n = max(_steps(2 * math.pi * radius, h), 3)
    theta = 2 * math.pi * np.arange(n) / n
    return radius * np.column_stack([np.cos(theta), np.sin(theta)])


def _frame(axis) -> np.ndarray:
    """Rows e1, e2, axis of a right-handed orthonormal frame."""
    a = np.asarray(axis, dtype=float)
    a = a / np.linalg.norm(a)
    helper = np.array([1.0, 0.0, 0.0]) if abs(a[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = helper - np.dot(helper, a) * a
    e1 /= np.linalg.norm(e1)
    return np.vstack([e1, np.cross(a, e1), a])


def tube_angles(phi_lo: float, phi_hi: float, tube: float, h: float, closed: bool) -> np.ndarray:
    """Tube angles covering ``[phi_lo, phi_hi]``; endpoints included unless closed."""
    n = _steps((phi_hi - phi_lo) * tube, h)
    if closed:
        return phi_lo + (phi_hi - phi_lo) * np.arange(n) / n
    return np.linspace(phi_lo, phi_hi, n + 1)


def torus_rings(major: float, tube: float, phis: np.ndarray, h: float,
                max_points: int | None = DEFAULT_MAX_POINTS) -> np.ndarray:
    """Surface-of-revolution grid around the z axis: one revolution ring per tube angle."""
    radii = major + tube * np.cos(phis)
    counts = [max(_steps(2 * math.pi * rho, h), 3) for rho in radii]
    check_budget(int(sum(counts)), max_points)
    blocks = []
    for phi, rho, n in zip(phis, radii, counts):
        theta = 2 * math.pi * np.arange(n) / n
        z = np.full(n, tube * math.sin(phi))
        blocks.append(np.column_stack([rho * np.cos(theta), rho * np.sin(theta), z]))
    return np.vstack(blocks)


def sample_shape(shape: ShapeSpec, h: float, max_points: int | None = DEFAULT_MAX_POINTS) -> PointCloud:
    """Discretize ``shape`` so both one-sided Hausdorff distances are at most ``h / 2``."""
    if not h > 0:
        raise ValueError(f"density h must be positive, got {h}")
    if isinstance(shape, Circle):
        check_budget(_steps(2 * math.pi * shape.radius, h), max_points)
        return PointCloud(ring(shape.radius, h) + np.asarray(shape.center, float))
    if isinstance(shape, Annulus):
        m = _steps(shape.outer - shape.inner, h)
        radii = np.linspace(shape.inner, shape.outer, m + 1)
        check_budget(sum(_steps(2 * math.pi * r, h) for r in radii), max_points)
        pts = np.vstack([ring(r, h) for r in radii])
        return PointCloud(pts + np.asarray(shape.center, float))
    if isinstance(shape, Torus):
        phis = tube_angles(0.0, 2 * math.pi, shape.minor, h, closed=True)
        local = torus_rings(shape.major, shape.minor, phis, h, max_points)
        return PointCloud(local @ _frame(shape.axis) + np.asarray(shape.center, float))
    if isinstance(shape, (AnnuliCounterexample, ToriCounterexample)):
        from .counterexamples import annuli_radius_sequence, build_counterexample_cloud, tori_radius_sequence

        if isinstance(shape, AnnuliCounterexample):
            meta = annuli_radius_sequence(shape.eps, shape.delta)
        else:
            meta = tori_radius_sequence(shape.eps, shape.delta)
        return build_counterexample_cloud(meta, h, max_points=max_points)
    raise TypeError(f"unsupported shape {shape!r}")
