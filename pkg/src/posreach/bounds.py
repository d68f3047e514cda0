"""Closed-form sampling conditions and admissible radius intervals.

Every quantity is a pure function of a :class:`ReachParams` triple
``(reach, eps, delta)``: ``eps`` bounds how far the shape is from the sample
and ``delta`` how far the sample is from the shape.  Inequalities are closed
(non-strict); boundary comparisons allow a relative slack of ``TOL``.
"""
from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from typing import Literal

import numpy as np

from .exceptions import InapplicableError

SQRT2 = math.sqrt(2.0)
SET_CONSTANT = SQRT2 - 1.0  # eps + sqrt2*delta <= (sqrt2 - 1) R
MANIFOLD_CONSTANT = 4.0 * SQRT2 - 5.0  # (R - delta)^2 - eps^2 >= (4 sqrt2 - 5) R^2
TOL = 1e-12

Mode = Literal["set", "manifold"]


@dataclass(frozen=True)
class ReachParams:
    """Reach lower bound and the two one-sided Hausdorff distances."""

    reach: float
    eps: float
    delta: float

    def __post_init__(self):
        for name in ("reach", "eps", "delta"):
            value = float(getattr(self, name))
            if not math.isfinite(value):
                raise ValueError(f"{name} must be finite, got {value!r}")
            object.__setattr__(self, name, value)
        if self.reach <= 0:
            raise ValueError(f"reach must be positive, got {self.reach}")
        if not 0 <= self.eps < self.reach:
            raise ValueError(f"eps must lie in [0, reach), got {self.eps}")
        if not 0 <= self.delta < self.reach:
            raise ValueError(f"delta must lie in [0, reach), got {self.delta}")

    def scaled(self, factor: float) -> "ReachParams":
        return ReachParams(self.reach * factor, self.eps * factor, self.delta * factor)


@dataclass(frozen=True)
class Interval:
    """Closed interval ``[lo, hi]``; ``empty`` intervals carry NaN endpoints."""

    lo: float
    hi: float
    empty: bool = False

    def __post_init__(self):
        if not self.empty and not (0 <= self.lo <= self.hi):
            raise ValueError(f"invalid interval [{self.lo}, {self.hi}]")

    @classmethod
    def make_empty(cls):
        return cls(math.nan, math.nan, True)

    def __contains__(self, x: float) -> bool:
        return not self.empty and self.lo <= x <= self.hi

    @property
    def midpoint(self) -> float:
        if self.empty:
            raise ValueError("empty interval has no midpoint")
        return 0.5 * (self.lo + self.hi)

    @property
    def width(self) -> float:
        return 0.0 if self.empty else self.hi - self.lo

    def to_dict(self) -> dict:
        if self.empty:
            return {"empty": True, "lo": None, "hi": None}
        return {"empty": False, "lo": self.lo, "hi": self.hi}


class RadiusInterval(Interval):
    """Admissible ball radii ``r``."""


class AlphaInterval(Interval):
    """Admissible tubular-neighbourhood sizes ``alpha``."""


def _require_manifold_applicable(p: ReachParams):
    if p.delta > p.eps:
        raise InapplicableError(
            f"manifold bound needs delta <= eps (got delta={p.delta}, eps={p.eps}); "
            "use the set bound instead"
        )


def check_set_condition(p: ReachParams) -> bool:
    """True iff ``eps + sqrt(2) delta <= (sqrt(2) - 1) reach``."""
    return p.eps + SQRT2 * p.delta <= SET_CONSTANT * p.reach + TOL * p.reach


def check_manifold_condition(p: ReachParams) -> bool:
    """True iff ``(reach - delta)^2 - eps^2 >= (4 sqrt(2) - 5) reach^2``.

    Raises :class:`InapplicableError` when ``delta > eps``.
    """
    _require_manifold_applicable(p)
    lhs = (p.reach - p.delta) ** 2 - p.eps**2
    return lhs >= (MANIFOLD_CONSTANT - TOL) * p.reach**2


def set_discriminant(p: ReachParams) -> float:
    return 2.0 * (p.reach - p.delta) ** 2 - (p.reach + p.eps) ** 2


def set_radius_interval(p: ReachParams, extended: bool = False) -> RadiusInterval:
    """Radii for which the union of balls retracts onto a set of positive reach.

    ``extended=True`` uses the alternative upper endpoint
    ``sqrt((R-delta)^2/2 + (R+eps) sqrt(D)/2)``.
    """
    if not check_set_condition(p):
        return RadiusInterval.make_empty()
    root = math.sqrt(max(set_discriminant(p), 0.0))
    lo = 0.5 * (p.reach + p.eps - root)
    if extended:
        hi = math.sqrt(0.5 * (p.reach - p.delta) ** 2 + 0.5 * (p.reach + p.eps) * root)
    else:
        hi = 0.5 * (p.reach + p.eps + root)
    return RadiusInterval(max(lo, 0.0), max(hi, lo, 0.0))


def manifold_discriminant(p: ReachParams) -> float:
    y = p.eps**2 - (p.reach - p.delta) ** 2
    return y * y / p.reach**2 - 10.0 * y - 7.0 * p.reach**2


def manifold_alpha_interval(p: ReachParams) -> AlphaInterval:
    if not check_manifold_condition(p):
        return AlphaInterval.make_empty()
    root = math.sqrt(max(manifold_discriminant(p), 0.0))
    base = ((p.reach - p.delta) ** 2 + p.reach**2 - p.eps**2) / p.reach
    lo = 0.25 * (base - root)
    hi = 0.25 * (base + root)
    return AlphaInterval(max(lo, 0.0), max(hi, lo, 0.0))


def manifold_radius_interval(p: ReachParams) -> RadiusInterval:
    """Radii for which the union of balls retracts onto a manifold of positive reach."""
    alpha = manifold_alpha_interval(p)
    if alpha.empty:
        return RadiusInterval.make_empty()
    R, eps, delta = p.reach, p.eps, p.delta
    a_min, a_max = alpha.lo, alpha.hi
    lower_sq = (1 + a_min / R) * eps**2 + a_min**2 + (a_min / R) * (R**2 - (R - delta) ** 2)
    upper_sq = (R - delta) ** 2 - (R - a_max) ** 2
    lo = math.sqrt(max(lower_sq, 0.0))
    hi = math.sqrt(max(upper_sq, 0.0))
    # lo == hi in exact arithmetic when the discriminant vanishes
    return RadiusInterval(lo, max(hi, lo))


def radius_interval(p: ReachParams, mode: Mode, extended: bool = False) -> RadiusInterval:
    if mode == "set":
        return set_radius_interval(p, extended)
    if mode == "manifold":
        if extended:
            raise ValueError("the extended endpoint is only available in set mode")
        return manifold_radius_interval(p)
    raise ValueError(f"unknown mode {mode!r}")


def retract_condition(r: float, alpha: float, p: ReachParams, mode: Mode) -> bool:
    """Check that balls of radius ``r`` cover the ``alpha``-tube and keep
    normal segments star shaped.
    """
    if r < 0:
        raise ValueError(f"r must be non-negative, got {r}")
    if not 0 <= alpha <= r:
        raise ValueError(f"need 0 <= alpha <= r, got alpha={alpha}, r={r}")
    R, eps, delta = p.reach, p.eps, p.delta
    slack = TOL * R * R
    if mode == "set":
        covered = alpha <= r - eps + TOL * R
    elif mode == "manifold":
        need = alpha**2 + (alpha / R) * (R**2 + eps**2 - (R - delta) ** 2) + eps**2
        covered = r * r >= need - slack
    else:
        raise ValueError(f"unknown mode {mode!r}")
    star_shaped = r * r <= (R - delta) ** 2 - (R - alpha) ** 2 + slack
    return covered and star_shaped


@dataclass(frozen=True)
class FeasibilityRegion:
    """Feasibility flags on a uniform ``(eps, delta)`` grid.

    ``set_feasible[j, i]`` and ``manifold_feasible[j, i]`` refer to
    ``delta = axis[j]`` and ``eps = axis[i]``.  ``manifold_applicable`` is false
    strictly above the diagonal (and everywhere when the manifold flags were
    not requested); the manifold flag is then false and reported as ``na``.
    """

    reach: float
    axis: np.ndarray
    set_feasible: np.ndarray | None
    manifold_feasible: np.ndarray | None
    manifold_applicable: np.ndarray

    def rows(self):
        for j, delta in enumerate(self.axis):
            for i, eps in enumerate(self.axis):
                s = None if self.set_feasible is None else bool(self.set_feasible[j, i])
                if self.manifold_feasible is not None and self.manifold_applicable[j, i]:
                    m = bool(self.manifold_feasible[j, i])
                else:
                    m = None
                yield float(eps), float(delta), s, m

    def to_csv(self, fh=None) -> str | None:
        out = io.StringIO() if fh is None else fh
        writer = csv.writer(out, lineterminator="\n")
        writer.writerow(["eps", "delta", "set_feasible", "manifold_feasible"])
        flag = {True: "1", False: "0", None: "na"}
        for eps, delta, s, m in self.rows():
            writer.writerow([repr(eps), repr(delta), flag[s], flag[m]])
        return out.getvalue() if fh is None else None


def feasibility_region(reach: float, resolution: int, mode: str = "both") -> FeasibilityRegion:
    """Evaluate both conditions on the grid ``{i * reach / resolution}`` squared."""
    if resolution < 2:
        raise ValueError(f"resolution must be >= 2, got {resolution}")
    if mode not in ("set", "manifold", "both"):
        raise ValueError(f"unknown mode {mode!r}")
    axis = np.arange(resolution) * (reach / resolution)
    shape = (resolution, resolution)
    set_flags = np.zeros(shape, bool) if mode in ("set", "both") else None
    mfld_flags = np.zeros(shape, bool) if mode in ("manifold", "both") else None
    applicable = np.zeros(shape, bool)
    for j, delta in enumerate(axis):
        for i, eps in enumerate(axis):
            p = ReachParams(reach, eps, delta)
            if set_flags is not None:
                set_flags[j, i] = check_set_condition(p)
            if mfld_flags is not None and delta <= eps:
                applicable[j, i] = True
                mfld_flags[j, i] = check_manifold_condition(p)
    return FeasibilityRegion(float(reach), axis, set_flags, mfld_flags, applicable)
