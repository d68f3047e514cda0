"""Unions of annuli / tori whose samples defeat every ball radius.

Both constructions use reach 1.  Component ``i`` carries a pair of sample
points ``p_i, p~_i`` at distance ``2 r_i`` on the circle of radius ``1 - delta``;
``r_{i+1}`` is the circumradius of the simplex the pair spans with the nearest
point(s) of the dense part, clipped to ``1 - delta``.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.optimize import minimize_scalar

from ..bounds import ReachParams, check_manifold_condition, check_set_condition
from ..exceptions import InapplicableError, ResourceError
from .cloud import DEFAULT_MAX_POINTS, PointCloud
from .shapes import check_budget, ring, torus_rings, tube_angles
from .simplices import circumcenter, is_strictly_acute, is_strictly_self_centred

MAX_STEPS = 100_000
ANNULI_GAP = 2.0
TORUS_MAJOR = 2.0
TORUS_OUTER = 3.0
CROSS_CHECK_TOL = 1e-9


@dataclass(frozen=True)
class CounterexampleMetadata:
    kind: str
    eps: float
    delta: float
    r_seq: tuple[float, ...]
    circum_seq: tuple[float, ...]
    component_offsets: tuple[tuple[float, ...], ...]
    critical_radii: tuple[float, ...]
    certificates: tuple[bool, ...]
    growth_constant: float
    ell: float | None = None
    h: float | None = None

    @property
    def k(self) -> int:
        return len(self.r_seq) - 1

    @property
    def final_circumradius(self) -> float:
        return self.circum_seq[-1]

    def pair(self, i: int) -> np.ndarray:
        """The two extra sample points of component ``i`` (already translated)."""
        r = self.r_seq[i]
        t = math.sqrt(max((1.0 - self.delta) ** 2 - r * r, 0.0))
        if self.kind == "annuli":
            pts = np.array([[t, r], [t, -r]])
        else:
            pts = np.array([[t, r, 0.0], [t, -r, 0.0]])
        return pts + np.asarray(self.component_offsets[i])

    def to_json(self, path=None) -> str | None:
        doc = {
            "kind": self.kind,
            "eps": self.eps,
            "delta": self.delta,
            "k": self.k,
            "r_seq": list(self.r_seq),
            "circum_seq": list(self.circum_seq),
            "critical_radii": list(self.critical_radii),
            "ell": self.ell,
            "h": self.h,
            "offsets": [list(o) for o in self.component_offsets],
            "certificates": list(self.certificates),
            "growth_constant": self.growth_constant,
        }
        text = json.dumps(doc, indent=1)
        if path is None:
            return text
        Path(path).write_text(text + "\n")
        return None

    @classmethod
    def from_json(cls, source) -> "CounterexampleMetadata":
        text = source if isinstance(source, str) and source.lstrip().startswith("{") else Path(source).read_text()
        doc = json.loads(text)
        meta = cls(
            kind=doc["kind"],
            eps=doc["eps"],
            delta=doc["delta"],
            r_seq=tuple(doc["r_seq"]),
            circum_seq=tuple(doc["circum_seq"]),
            component_offsets=tuple(tuple(o) for o in doc["offsets"]),
            critical_radii=tuple(doc["critical_radii"]),
            certificates=tuple(doc["certificates"]),
            growth_constant=doc["growth_constant"],
            ell=doc.get("ell"),
            h=doc.get("h"),
        )
        if meta.k != doc["k"]:
            raise ValueError("k does not match the length of r_seq")
        return meta


def annuli_growth_constant(eps: float, delta: float) -> float:
    """Constant c with ``R_i - r_i >= c r_i`` for every step of the annuli recursion."""
    phi = 2.0 * (math.pi / 4 - math.asin((1.0 - delta) / (1.0 + eps)))
    return 1.0 / math.cos(phi) - 1.0


def _check_close(closed_form: float, oracle: float, what: str):
    if abs(closed_form - oracle) > CROSS_CHECK_TOL * max(1.0, abs(oracle)):
        raise ArithmeticError(f"{what}: closed form {closed_form!r} disagrees with circumcenter {oracle!r}")


def annuli_step(r: float, eps: float, delta: float) -> tuple[float, float, float]:
    """Pair abscissa ``t``, circumcenter abscissa ``u`` and circumradius of the
    triangle ``(t, r), (t, -r), (1 + eps, 0)``."""
    a, b = 1.0 - delta, 1.0 + eps
    t = math.sqrt(max(a * a - r * r, 0.0))
    u = (b * b - t * t - r * r) / (2.0 * (b - t))
    return t, u, b - u


def annuli_radius_sequence(eps: float, delta: float, max_steps: int = MAX_STEPS) -> CounterexampleMetadata:
    """Radii ``r_0 < ... < r_k = 1 - delta`` of the annuli counterexample.

    Requires ``eps + sqrt(2) delta > sqrt(2) - 1`` (the set condition fails).
    """
    params = ReachParams(1.0, eps, delta)
    if check_set_condition(params):
        raise InapplicableError(
            f"(eps={eps}, delta={delta}) satisfies the set condition; no counterexample exists"
        )
    a, b = 1.0 - delta, 1.0 + eps
    r = min(0.5 * (delta + eps), a)
    r_seq, circum, acute = [], [], []
    while True:
        t, u, R = annuli_step(r, eps, delta)
        p, pt, q = np.array([t, r]), np.array([t, -r]), np.array([b, 0.0])
        _, oracle = circumcenter([p, pt, q])
        _check_close(R, oracle, f"circumradius at step {len(r_seq)}")
        r_seq.append(r)
        circum.append(R)
        acute.append(is_strictly_acute(p, pt, q))
        if r >= a:
            break
        if len(r_seq) > max_steps:
            raise ResourceError(f"sequence did not terminate within {max_steps} steps")
        r = R if R < a else a
    spacing = 2.0 * (1.0 + 2.0 * eps) + ANNULI_GAP
    offsets = tuple((i * spacing, 0.0) for i in range(len(r_seq)))
    return CounterexampleMetadata(
        kind="annuli",
        eps=float(eps),
        delta=float(delta),
        r_seq=tuple(r_seq),
        circum_seq=tuple(circum),
        component_offsets=offsets,
        critical_radii=tuple(sorted(set(r_seq) | set(circum))),
        certificates=tuple(acute),
        growth_constant=annuli_growth_constant(eps, delta),
    )


def tori_geometry(eps: float, delta: float) -> tuple[float, float]:
    """Offsets ``(ell, h)`` of the cut boundary point ``q = (1 + ell, 0, h)``."""
    ell = 0.5 * (eps * eps - delta * delta + 2.0 * delta)
    return ell, math.sqrt(max(eps * eps - ell * ell, 0.0))


def tori_step(r: float, a: float, ell: float, h: float) -> tuple[float, float, float]:
    """Pair abscissa ``t``, circumcenter abscissa ``u`` and circumradius of the
    tetrahedron ``(t, +-r, 0), (1 + ell, 0, +-h)``; ``a = 1 - delta``."""
    t = math.sqrt(max(a * a - r * r, 0.0))
    u = ((1.0 + ell) ** 2 + h * h - t * t - r * r) / (2.0 * (1.0 + ell - t))
    return t, u, math.sqrt((u - t) ** 2 + r * r)


def tori_growth_constant(eps: float, delta: float, grid: int = 1024) -> float:
    """Minimum of ``u - t`` over ``r`` in ``[h, 1 - delta]``.

    A uniform grid locates the minimum, which is then polished inside the
    neighbouring grid cells so the result does not overestimate it.
    """
    ell, h = tori_geometry(eps, delta)
    a = 1.0 - delta

    def gap(r):
        t, u, _ = tori_step(r, a, ell, h)
        return u - t

    rs = np.linspace(h, a, grid)
    values = np.array([gap(r) for r in rs])
    j = int(values.argmin())
    lo, hi = rs[max(j - 1, 0)], rs[min(j + 1, grid - 1)]
    if hi <= lo:
        return float(values[j])
    res = minimize_scalar(gap, bounds=(lo, hi), method="bounded", options={"xatol": 1e-13})
    return float(min(values[j], res.fun))


def tori_radius_sequence(eps: float, delta: float, max_steps: int = MAX_STEPS) -> CounterexampleMetadata:
    """Radii of the tori counterexample; requires ``delta <= eps`` and a failing
    manifold condition."""
    params = ReachParams(1.0, eps, delta)
    if delta > eps:
        raise InapplicableError("the tori construction needs delta <= eps")
    if check_manifold_condition(params):
        raise InapplicableError(
            f"(eps={eps}, delta={delta}) satisfies the manifold condition; no counterexample exists"
        )
    ell, h = tori_geometry(eps, delta)
    a = 1.0 - delta
    r = min(h, a)
    r_seq, circum, centred = [], [], []
    while True:
        t, u, R = tori_step(r, a, ell, h)
        simplex = np.array([[t, r, 0.0], [t, -r, 0.0], [1 + ell, 0.0, h], [1 + ell, 0.0, -h]])
        center, oracle = circumcenter(simplex)
        _check_close(R, oracle, f"circumradius at step {len(r_seq)}")
        _check_close(u, center[0], f"circumcenter abscissa at step {len(r_seq)}")
        r_seq.append(r)
        circum.append(R)
        centred.append(is_strictly_self_centred(simplex))
        if r >= a:
            break
        if len(r_seq) > max_steps:
            raise ResourceError(f"sequence did not terminate within {max_steps} steps")
        r = R if R < a else a
    spacing = 2.0 * TORUS_OUTER + 2.0
    offsets = tuple((i * spacing, 0.0, 0.0) for i in range(len(r_seq)))
    return CounterexampleMetadata(
        kind="tori",
        eps=float(eps),
        delta=float(delta),
        r_seq=tuple(r_seq),
        circum_seq=tuple(circum),
        component_offsets=offsets,
        critical_radii=tuple(sorted(set(r_seq) | set(circum))),
        certificates=tuple(centred),
        growth_constant=tori_growth_constant(eps, delta),
        ell=ell,
        h=h,
    )


def pair_triangles_acute(eps: float, delta: float, grid: int = 1024) -> bool:
    """Whether ``Q(t) = 2t^2 - 2t(1 + ell) + 4 ell`` stays positive on ``[0, 1 - ell]``.

    Positivity of Q is strict acuteness of the triangle ``p_i p~_i q_i`` for
    every admissible pair position.
    """
    if delta > eps:
        raise InapplicableError("needs delta <= eps")
    ell, _ = tori_geometry(eps, delta)
    disc = (1.0 + ell) ** 2 - 8.0 * ell
    if disc < 0:
        return True
    t1 = 0.5 * ((1.0 + ell) - math.sqrt(disc))
    t2 = 0.5 * ((1.0 + ell) + math.sqrt(disc))
    if t1 <= 1.0 - ell and t2 >= 0.0:
        return False
    t = np.linspace(0.0, 1.0 - ell, grid)
    return bool(np.all(2 * t * t - 2 * t * (1 + ell) + 4 * ell > 0))


def cut_torus(meta: CounterexampleMetadata, h: float, max_points: int | None = DEFAULT_MAX_POINTS) -> np.ndarray:
    """Tube of radius ``1 - delta`` around the circle of radius 2, minus the open
    ``eps``-neighbourhood of the unit circle; cut boundary rings are sampled exactly."""
    a = 1.0 - meta.delta
    phi_edge = math.atan2(meta.h, meta.ell - 1.0)
    phis = tube_angles(-phi_edge, phi_edge, a, h, closed=False)
    return torus_rings(TORUS_MAJOR, a, phis, h, max_points)


def build_counterexample_cloud(
    meta: CounterexampleMetadata,
    h: float,
    components=None,
    which: str | None = None,
    max_points: int | None = DEFAULT_MAX_POINTS,
) -> PointCloud:
    """Sample the requested components; labels hold the component index."""
    if which is not None and which != meta.kind:
        raise ValueError(f"metadata describes {meta.kind}, not {which}")
    if not h > 0:
        raise ValueError(f"density h must be positive, got {h}")
    idx = list(range(meta.k + 1)) if components is None else sorted(set(int(i) for i in components))
    if not idx:
        raise ValueError("no components requested")
    if idx[0] < 0 or idx[-1] > meta.k:
        raise ValueError(f"component indices must lie in [0, {meta.k}]")
    if meta.kind == "annuli":
        base = ring(1.0 + meta.eps, h)
    else:
        base = cut_torus(meta, h, max_points)
    check_budget(len(idx) * (len(base) + 2), max_points)
    blocks, labels = [], []
    for i in idx:
        pts = np.vstack([base + np.asarray(meta.component_offsets[i]), meta.pair(i)])
        blocks.append(pts)
        labels.append(np.full(len(pts), i))
    return PointCloud(np.vstack(blocks), np.concatenate(labels))
