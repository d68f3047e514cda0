"""End-to-end checks: reconstruction at admissible radii and the regime tables
of the annuli and tori counterexamples.

Betti numbers are computed on the Čech filtration restricted to the Delaunay
triangulation by default (``restrict="delaunay"``); pass ``restrict=None`` for
the full Čech complex on small clouds.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .bounds import (
    ReachParams,
    check_manifold_condition,
    check_set_condition,
    radius_interval,
)
from .complex import DEFAULT_MAX_SIMPLICES, Filtration, cech_filtration
from .exceptions import DensityError, InfeasibleError
from .geometry.cloud import DEFAULT_MAX_POINTS, PointCloud
from .geometry.counterexamples import (
    CounterexampleMetadata,
    annuli_radius_sequence,
    build_counterexample_cloud,
    pair_triangles_acute,
    tori_radius_sequence,
)
from .geometry.shapes import Annulus, Circle, Torus, sample_shape
from .homology import Barcode, BettiProfile, persistence

DEFAULT_GAP_FACTOR = 8.0
SHAPE_PROFILES = {Circle: (1, 1, 0), Annulus: (1, 1, 0), Torus: (1, 2, 1)}


@dataclass(frozen=True)
class Expectation:
    """Constraints on a Betti profile.

    ``exact`` pins the leading Betti numbers, ``sums`` pins sums over a set of
    dimensions and ``upper`` bounds single Betti numbers from above.
    """

    exact: tuple[int, ...] | None = None
    sums: tuple[tuple[tuple[int, ...], int], ...] = ()
    upper: tuple[tuple[int, int], ...] = ()

    def holds(self, betti: tuple[int, ...]) -> bool:
        if self.exact is not None and tuple(betti[: len(self.exact)]) != self.exact:
            return False
        if any(sum(betti[d] for d in dims) != value for dims, value in self.sums):
            return False
        return all(betti[d] <= bound for d, bound in self.upper)

    def to_dict(self) -> dict:
        out = {}
        if self.exact is not None:
            out["betti"] = list(self.exact)
        for dims, value in self.sums:
            out["+".join(f"betti{d}" for d in dims)] = value
        for d, bound in self.upper:
            out[f"betti{d}_max"] = bound
        return out


@dataclass(frozen=True)
class ProbeResult:
    component: int | None
    radius: float
    regime: str
    expected: Expectation
    observed: BettiProfile
    euler_consistent: bool
    bracket: tuple[float, float] | None = None

    @property
    def passed(self) -> bool:
        return self.euler_consistent and self.expected.holds(self.observed.betti)

    def to_dict(self) -> dict:
        return {
            "component": self.component,
            "radius": self.radius,
            "regime": self.regime,
            "expected": self.expected.to_dict(),
            "observed": list(self.observed.betti),
            "euler_consistent": self.euler_consistent,
            "bracket": None if self.bracket is None else list(self.bracket),
            "passed": self.passed,
        }


@dataclass
class VerificationReport:
    scenario: str
    details: list[ProbeResult] = field(default_factory=list)
    certificates: dict[str, bool] = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)
    notes: str = ""

    @property
    def passed(self) -> bool:
        return bool(self.details) and all(d.passed for d in self.details) and all(self.certificates.values())

    def failures(self) -> list[ProbeResult]:
        return [d for d in self.details if not d.passed]

    def to_dict(self) -> dict:
        return {
            "scenario": self.scenario,
            "passed": self.passed,
            "parameters": self.parameters,
            "certificates": self.certificates,
            "details": [d.to_dict() for d in self.details],
            "notes": self.notes,
        }

    def to_json(self, path=None) -> str | None:
        text = json.dumps(self.to_dict(), indent=1)
        if path is None:
            return text
        Path(path).write_text(text + "\n")
        return None


def euler_consistent(f: Filtration, b: Barcode, r: float) -> bool:
    """Alternating sum of Betti numbers equals the alternating simplex count at ``r``."""
    counts = f.counts_at(r)
    betti = [b.betti_at(r, k) for k in range(len(counts))]
    signs = (-1) ** np.arange(len(counts))
    return int(signs @ counts) == int(signs @ np.array(betti))


def probe_profiles(cloud: PointCloud, radii, max_dim: int = 3, restrict: str | None = "delaunay",
                   max_simplices: int | None = DEFAULT_MAX_SIMPLICES):
    """Betti profiles (dims 0..2) and Euler checks of the Čech filtration at each radius."""
    radii = [float(r) for r in radii]
    f = cech_filtration(cloud, max_dim, max(radii), restrict=restrict, max_simplices=max_simplices)
    b = persistence(f)
    return [(b.profile(r), euler_consistent(f, b, r)) for r in radii]


def _probe(component, radius, regime, expected, profile, bracket=None) -> ProbeResult:
    observed, euler = profile
    return ProbeResult(component, radius, regime, expected, observed, euler, bracket)


def _density_bound(brackets: list[tuple[float, float]], gap_factor: float) -> float:
    return min(hi - lo for lo, hi in brackets) / gap_factor


def _check_density(h: float, brackets, gap_factor: float, enforce: bool) -> float:
    bound = _density_bound(brackets, gap_factor)
    if enforce and h > bound:
        raise DensityError(
            f"density h={h} is too coarse: the probes need h <= {bound!r} "
            f"(smallest bracketing gap / {gap_factor:g})"
        )
    return bound


def verify_reconstruction(
    shape,
    p: ReachParams,
    h: float,
    r: float | None = None,
    mode: str | None = None,
    restrict: str | None = "delaunay",
    max_points: int | None = DEFAULT_MAX_POINTS,
    max_simplices: int | None = DEFAULT_MAX_SIMPLICES,
) -> VerificationReport:
    """Sample ``shape`` and compare the Čech Betti numbers at radius ``r`` with
    the shape's own. ``mode`` defaults to "manifold" for tori and "set" otherwise."""
    expected = SHAPE_PROFILES.get(type(shape))
    if expected is None:
        raise TypeError(f"no reference Betti profile for {shape!r}")
    if not h > 0:
        raise ValueError(f"density h must be positive, got {h}")
    if shape.reach < p.reach * (1 - 1e-12):
        raise ValueError(f"shape reach {shape.reach} is below the assumed reach {p.reach}")
    mode = mode or ("manifold" if isinstance(shape, Torus) else "set")
    holds = check_set_condition(p) if mode == "set" else check_manifold_condition(p)
    if not holds:
        raise InfeasibleError(f"{mode} condition fails for {p}")
    interval = radius_interval(p, mode)
    radius = interval.midpoint if r is None else float(r)
    density = min(h, p.eps) if p.eps > 0 else h
    cloud = sample_shape(shape, density, max_points)
    notes = f"{len(cloud)} sample points at density {density!r}"
    if radius not in interval:
        notes += f"; radius {radius!r} lies outside the admissible interval"
    profile = probe_profiles(cloud, [radius], restrict=restrict, max_simplices=max_simplices)[0]
    return VerificationReport(
        scenario=f"reconstruction:{type(shape).__name__.lower()}",
        details=[_probe(None, radius, "admissible", Expectation(exact=expected), profile)],
        parameters={
            "reach": p.reach, "eps": p.eps, "delta": p.delta, "mode": mode, "h": h,
            "interval": interval.to_dict(),
        },
        notes=notes,
    )


def annuli_expectation(meta: CounterexampleMetadata, i: int, r: float) -> Expectation | None:
    """Betti profile of component ``i`` at radius ``r``; None where nothing is claimed.

    The extra cycle of component ``i`` lives on ``[r_i, R_i)``.  For ``i < k``
    this is ``[r_i, r_{i+1})`` except at the clipped last step, where
    ``R_{k-1}`` may exceed ``r_k = 1 - delta``.
    """
    r_i, R_i, Rk = meta.r_seq[i], meta.circum_seq[i], meta.final_circumradius
    if r < meta.r_seq[0]:
        return Expectation(exact=(3, 1))
    if r >= Rk:
        return Expectation(exact=(1, 0)) if i == meta.k else None
    if r_i <= r < R_i:
        return Expectation(exact=(1, 2))
    return Expectation(exact=(1, 1))


def annuli_brackets(meta: CounterexampleMetadata) -> list[tuple[float, float]]:
    """Consecutive critical radii, preceded by ``(0, r_0)`` and followed by one
    bracket above ``R_k`` as wide as the last gap."""
    crit = list(meta.critical_radii)
    tail = crit[-1] - crit[-2] if len(crit) > 1 else crit[-1]
    return [(0.0, crit[0])] + list(zip(crit[:-1], crit[1:])) + [(crit[-1], crit[-1] + tail)]


def _bracket_name(meta: CounterexampleMetadata, lo: float, hi: float) -> str:
    names = {}
    for j, x in enumerate(meta.circum_seq):
        names.setdefault(x, f"R_{j}")
    for j, x in enumerate(meta.r_seq):
        names[x] = f"r_{j}"
    if lo == meta.final_circumradius and hi not in names:
        return f"above R_{meta.k}"
    return f"({names.get(lo, repr(lo))}, {names.get(hi, repr(hi))})"


def annuli_probes(meta: CounterexampleMetadata, i: int):
    """(radius, regime, expectation, bracket) for component ``i``: below r_0,
    around the birth r_i and around the death R_i of its extra cycle."""
    brackets = annuli_brackets(meta)
    starts = [lo for lo, _ in brackets]
    j_r = starts.index(meta.r_seq[i])
    j_R = starts.index(meta.circum_seq[i])
    chosen = list(dict.fromkeys([0, j_r - 1, j_r, j_R - 1, j_R]))
    out = []
    for j in chosen:
        lo, hi = brackets[j]
        radius = 0.5 * (lo + hi)
        expected = annuli_expectation(meta, i, radius)
        out.append((radius, _bracket_name(meta, lo, hi), expected or Expectation(), (lo, hi)))
    return out


def verify_annuli_counterexample(
    eps: float,
    delta: float,
    h: float,
    components=None,
    full_table: bool = False,
    gap_factor: float = DEFAULT_GAP_FACTOR,
    check_density: bool = True,
    restrict: str | None = "delaunay",
    max_points: int | None = DEFAULT_MAX_POINTS,
    max_simplices: int | None = DEFAULT_MAX_SIMPLICES,
) -> VerificationReport:
    """Per-component regime checks; ``components`` defaults to {0, 1, k}.

    With ``full_table`` every component is probed and the summed profiles are
    checked against the table for the whole union as well.
    """
    meta = annuli_radius_sequence(eps, delta)
    k = meta.k
    if full_table:
        comps = list(range(k + 1))
    elif components is None:
        comps = sorted({0, min(1, k), k})
    else:
        comps = sorted({int(c) for c in components})
        if not comps or comps[0] < 0 or comps[-1] > k:
            raise ValueError(f"component indices must lie in [0, {k}]")
    plans = {i: annuli_probes(meta, i) for i in comps}
    table = _annuli_table(meta) if full_table else []
    brackets = [pl[3] for plan in plans.values() for pl in plan] + [t[3] for t in table]
    bound = _check_density(h, brackets, gap_factor, check_density)

    details = []
    totals: dict[float, np.ndarray] = {}
    euler_all: dict[float, bool] = {}
    for i in comps:
        cloud = build_counterexample_cloud(meta, h, [i], max_points=max_points)
        radii = [pl[0] for pl in plans[i]] + [t[0] for t in table]
        profiles = probe_profiles(cloud, radii, max_dim=2, restrict=restrict, max_simplices=max_simplices)
        for (radius, regime, expected, bracket), prof in zip(plans[i], profiles):
            details.append(_probe(i, radius, regime, expected, prof, bracket))
        for t, (prof, euler) in zip(table, profiles[len(plans[i]):]):
            totals[t[0]] = totals.get(t[0], np.zeros(3, int)) + np.array(prof.betti)
            euler_all[t[0]] = euler_all.get(t[0], True) and euler
    for radius, regime, expected, bracket in table:
        betti = tuple(int(b) for b in totals[radius])
        details.append(ProbeResult(None, radius, f"table {regime}", expected, BettiProfile(radius, betti),
                                   euler_all[radius], bracket))
    return VerificationReport(
        scenario="annuli",
        details=details,
        certificates={"acute": all(meta.certificates)},
        parameters={
            "eps": eps, "delta": delta, "h": h, "k": k, "components": comps,
            "r_seq": list(meta.r_seq), "R_k": meta.final_circumradius,
            "density_bound": bound, "density_checked": check_density,
        },
        notes=f"growth constant {meta.growth_constant!r}",
    )


def _annuli_table(meta: CounterexampleMetadata):
    """Probes for the union of all k+1 components, one per bracket."""
    n = meta.k + 1
    rows = []
    for lo, hi in annuli_brackets(meta):
        radius = 0.5 * (lo + hi)
        parts = [annuli_expectation(meta, i, radius) for i in range(n)]
        if lo >= meta.final_circumradius:
            expected = Expectation(upper=((0, n), (1, meta.k)))
        else:
            expected = Expectation(exact=tuple(int(x) for x in np.sum([e.exact for e in parts], axis=0)))
        rows.append((radius, _bracket_name(meta, lo, hi), expected, (lo, hi)))
    return rows


def verify_tori_counterexample(
    eps: float,
    delta: float,
    h: float,
    probes=None,
    components=(0,),
    gap_factor: float = DEFAULT_GAP_FACTOR,
    check_density: bool = True,
    restrict: str | None = "delaunay",
    max_points: int | None = DEFAULT_MAX_POINTS,
    max_simplices: int | None = DEFAULT_MAX_SIMPLICES,
) -> VerificationReport:
    """beta_2 = 0 below r_0 (a torus has beta_2 = 1) and beta_1 + beta_2 = 4 on
    (r_0, r_1); probes outside those ranges are reported without a constraint."""
    meta = tori_radius_sequence(eps, delta)
    r0, r1 = meta.r_seq[0], meta.r_seq[1] if meta.k >= 1 else meta.final_circumradius
    probes = [0.9 * r0, 0.5 * (r0 + r1)] if probes is None else [float(x) for x in probes]
    plan = []
    for radius in probes:
        if radius < r0:
            plan.append((radius, "below r_0", Expectation(sums=(((2,), 0),)), (0.0, r0)))
        elif r0 < radius < r1:
            plan.append((radius, "(r_0, r_1)", Expectation(sums=(((1, 2), 4),)), (r0, r1)))
        else:
            plan.append((radius, "unconstrained", Expectation(), None))
    brackets = [pl[3] for pl in plan if pl[3] is not None]
    bound = _check_density(h, brackets, gap_factor, check_density) if brackets else math.inf
    certificates = {
        "self_centred": all(meta.certificates),
        "pair_acute": pair_triangles_acute(eps, delta),
    }
    details = []
    for i in sorted({int(c) for c in components}):
        cloud = build_counterexample_cloud(meta, h, [i], max_points=max_points)
        profiles = probe_profiles(cloud, probes, max_dim=3, restrict=restrict, max_simplices=max_simplices)
        for (radius, regime, expected, bracket), prof in zip(plan, profiles):
            details.append(_probe(i, radius, regime, expected, prof, bracket))
    return VerificationReport(
        scenario="tori",
        details=details,
        certificates=certificates,
        parameters={
            "eps": eps, "delta": delta, "h": h, "k": meta.k, "r_0": r0, "r_1": r1,
            "ell": meta.ell, "density_bound": bound, "density_checked": check_density,
        },
        notes="reference torus profile (1, 2, 1)",
    )
