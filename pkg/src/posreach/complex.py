"""Čech and Vietoris–Rips filtrations of point clouds.

Filtration values are radii: a simplex enters at the smallest ``r`` for which
the radius-``r`` balls around its vertices have a common point (Čech: radius
of the minimum enclosing ball) or pairwise intersect (Rips: half the
diameter).  With ``restrict="delaunay"`` only faces of the Delaunay
triangulation are considered; with Čech values this is the Delaunay–Čech
filtration, which has the homotopy type of the union of balls at every radius.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Literal

import numpy as np
from scipy.spatial import Delaunay, QhullError, cKDTree

from .exceptions import ResourceError
from .geometry.cloud import PointCloud

DEFAULT_MAX_SIMPLICES = 500_000
CONTAIN_RTOL = 1e-9
GRAM_TOL = 1e-12

Kind = Literal["cech", "rips"]


def _subset_balls(P: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Circumballs (in the affine hull) of each row-block of ``P``.

    P has shape (n, m, d); returns centers (n, d), squared radii (n,) and a
    mask of the non-degenerate blocks.
    """
    n, m, d = P.shape
    if m == 1:
        return P[:, 0].copy(), np.zeros(n), np.ones(n, bool)
    base = P[:, 0]
    A = P[:, 1:] - base[:, None, :]
    G = A @ A.transpose(0, 2, 1)
    diag = np.diagonal(G, axis1=1, axis2=2)
    scale = diag.max(axis=1)
    ok = (scale > 0) & (np.linalg.det(G) > GRAM_TOL * scale ** (m - 1))
    centers = np.zeros((n, d))
    r2 = np.full(n, np.inf)
    if ok.any():
        lam = np.linalg.solve(G[ok], 0.5 * diag[ok][..., None])[..., 0]
        offset = np.einsum("nk,nkd->nd", lam, A[ok])
        centers[ok] = base[ok] + offset
        r2[ok] = np.einsum("nd,nd->n", offset, offset)
    return centers, r2, ok


def meb_batch(P: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Minimum enclosing balls of many small point sets at once.

    ``P`` has shape (n, m, d) with m <= 4.  Every support subset of size at
    most d + 1 is tried; the smallest circumball containing the whole set wins.
    Returns centers (n, d) and squared radii (n,).
    """
    P = np.asarray(P, dtype=float)
    n, m, d = P.shape
    best_r2 = np.full(n, np.inf)
    best_c = np.zeros((n, d))
    diam2 = np.zeros(n)
    for i, j in itertools.combinations(range(m), 2):
        diff = P[:, i] - P[:, j]
        diam2 = np.maximum(diam2, np.einsum("nd,nd->n", diff, diff))
    slack = CONTAIN_RTOL * diam2 + 1e-300
    for size in range(1, min(m, d + 1) + 1):
        for subset in itertools.combinations(range(m), size):
            c, r2, ok = _subset_balls(P[:, subset])
            dist2 = ((P - c[:, None, :]) ** 2).sum(axis=2).max(axis=1)
            valid = ok & (dist2 <= r2 + slack) & (r2 < best_r2)
            best_r2[valid] = r2[valid]
            best_c[valid] = c[valid]
    return best_c, best_r2


def min_enclosing_ball(points) -> tuple[np.ndarray, float]:
    """Smallest ball containing 1 to 4 points.

    >>> c, r = min_enclosing_ball([[0, 0], [4, 0], [1, 0.5]])
    >>> c.tolist(), r
    ([2.0, 0.0], 2.0)
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if not 1 <= len(pts) <= 4:
        raise ValueError("min_enclosing_ball takes between 1 and 4 points")
    c, r2 = meb_batch(pts[None])
    return c[0], float(np.sqrt(r2[0]))


def _rips_sq_values(P: np.ndarray) -> np.ndarray:
    m = P.shape[1]
    out = np.zeros(P.shape[0])
    for i, j in itertools.combinations(range(m), 2):
        diff = P[:, i] - P[:, j]
        out = np.maximum(out, np.einsum("nd,nd->n", diff, diff))
    return out / 4.0


@dataclass(frozen=True, eq=False)
class Filtration:
    """Simplices sorted by (value, dimension, vertices); values are radii."""

    source: PointCloud
    kind: str
    max_dim: int
    simplices: tuple[tuple[int, ...], ...]
    sq_values: np.ndarray
    restrict: str | None = None

    @property
    def values(self) -> np.ndarray:
        return np.sqrt(self.sq_values)

    @property
    def dims(self) -> np.ndarray:
        return np.fromiter((len(s) - 1 for s in self.simplices), dtype=int, count=len(self.simplices))

    def __len__(self) -> int:
        return len(self.simplices)

    def __iter__(self) -> Iterator[tuple[tuple[int, ...], float]]:
        return zip(self.simplices, self.values.tolist())

    def counts_at(self, r: float) -> np.ndarray:
        """Number of simplices of each dimension with value <= r."""
        mask = self.sq_values <= r * r if r >= 0 else np.zeros(len(self), bool)
        return np.bincount(self.dims[mask], minlength=self.max_dim + 1)

    def dump(self) -> str:
        return "".join(
            f"{value!r};{','.join(map(str, s))}\n" for s, value in zip(self.simplices, self.values.tolist())
        )


def _check_cap(count: int, cap: int | None, what: str):
    if cap is not None and count > cap:
        raise ResourceError(f"{what}: {count} simplices exceed the cap of {cap}")


def _values(points: np.ndarray, simplices: np.ndarray, kind: str) -> np.ndarray:
    if len(simplices) == 0:
        return np.zeros(0)
    P = points[simplices]
    if kind == "cech":
        return meb_batch(P)[1]
    return _rips_sq_values(P)


def _clique_candidates(kept: np.ndarray, nbrs: list[set], kept_faces: set) -> np.ndarray:
    """Extend sorted k-simplices by a larger common neighbour whose facets are all kept."""
    out = []
    k = kept.shape[1]
    for row in kept.tolist():
        common = nbrs[row[0]].intersection(*(nbrs[v] for v in row[1:]))
        last = row[-1]
        for x in common:
            if x <= last:
                continue
            cand = row + [x]
            if k >= 2 and not all(
                tuple(f) in kept_faces for f in itertools.combinations(cand, k) if x in f
            ):
                continue
            out.append(cand)
    return np.array(sorted(out), dtype=int).reshape(-1, k + 1)


def _delaunay_faces(points: np.ndarray, max_dim: int) -> list[np.ndarray] | None:
    n, d = points.shape
    if d < 2 or n < d + 2:
        return None
    try:
        tri = Delaunay(points, qhull_options="QJ")
    except (QhullError, ValueError):
        return None
    tops = np.sort(tri.simplices, axis=1)
    faces = []
    for k in range(1, min(max_dim, d) + 1):
        cols = list(itertools.combinations(range(d + 1), k + 1))
        rows = np.vstack([tops[:, c] for c in cols])
        faces.append(np.unique(rows, axis=0))
    return faces


def build_filtration(
    cloud: PointCloud,
    kind: Kind,
    max_dim: int,
    max_value: float,
    restrict: str | None = None,
    max_simplices: int | None = DEFAULT_MAX_SIMPLICES,
) -> Filtration:
    if not 0 <= max_dim <= 3:
        raise ValueError(f"max_dim must lie in [0, 3], got {max_dim}")
    if not max_value > 0:
        raise ValueError(f"max_value must be positive, got {max_value}")
    if kind not in ("cech", "rips"):
        raise ValueError(f"unknown complex kind {kind!r}")
    if restrict not in (None, "delaunay"):
        raise ValueError(f"unknown restriction {restrict!r}")
    pts = cloud.points
    n = len(pts)
    limit = max_value * max_value * (1 + 1e-12)
    _check_cap(n, max_simplices, "vertices")

    levels: list[tuple[np.ndarray, np.ndarray]] = [(np.arange(n)[:, None], np.zeros(n))]
    faces = _delaunay_faces(pts, max_dim) if restrict == "delaunay" else None
    if faces is not None:
        total = n
        for k, cand in enumerate(faces, start=1):
            _check_cap(total + len(cand), None if max_simplices is None else 2 * max_simplices, f"{k}-simplex candidates")
            vals = _values(pts, cand, kind)
            keep = vals <= limit
            levels.append((cand[keep], vals[keep]))
            total += int(keep.sum())
            _check_cap(total, max_simplices, f"filtration up to dimension {k}")
    elif max_dim >= 1:
        pairs = cKDTree(pts).query_pairs(2.0 * max_value * (1 + 1e-12), output_type="ndarray")
        edges = np.sort(pairs, axis=1) if len(pairs) else np.zeros((0, 2), int)
        edges = edges[np.lexsort((edges[:, 1], edges[:, 0]))] if len(edges) else edges
        vals = _values(pts, edges, kind)
        keep = vals <= limit
        levels.append((edges[keep], vals[keep]))
        total = n + int(keep.sum())
        _check_cap(total, max_simplices, "filtration up to dimension 1")
        nbrs = [set() for _ in range(n)]
        for u, v in levels[1][0].tolist():
            nbrs[u].add(v)
            nbrs[v].add(u)
        for k in range(2, max_dim + 1):
            prev = levels[k - 1][0]
            kept_faces = set(map(tuple, prev.tolist()))
            cand = _clique_candidates(prev, nbrs, kept_faces)
            _check_cap(total + len(cand), None if max_simplices is None else 2 * max_simplices, f"{k}-simplex candidates")
            vals = _values(pts, cand, kind)
            keep = vals <= limit
            levels.append((cand[keep], vals[keep]))
            total += int(keep.sum())
            _check_cap(total, max_simplices, f"filtration up to dimension {k}")

    # faces never enter after their cofaces, even under rounding; a coface
    # whose face fell just outside the cutoff is dropped to keep a complex
    lookup = {}
    for k in range(2, len(levels)):
        simp, vals = levels[k]
        prev, prev_vals = levels[k - 1]
        lookup = dict(zip(map(tuple, prev.tolist()), prev_vals.tolist()))
        present = np.ones(len(simp), bool)
        for idx, row in enumerate(simp.tolist()):
            for face in itertools.combinations(row, k):
                fv = lookup.get(face)
                if fv is None:
                    present[idx] = False
                    break
                if fv > vals[idx]:
                    vals[idx] = fv
        levels[k] = (simp[present], vals[present])

    simplices: list[tuple[int, ...]] = []
    sq = []
    dims = []
    cols = np.full((sum(len(s) for s, _ in levels), 4), -1)
    row = 0
    for k, (simp, vals) in enumerate(levels):
        simplices.extend(map(tuple, simp.tolist()))
        sq.append(vals)
        dims.append(np.full(len(simp), k))
        cols[row: row + len(simp), : k + 1] = simp
        row += len(simp)
    sq_arr = np.concatenate(sq)
    dim_arr = np.concatenate(dims)
    order = np.lexsort((cols[:, 3], cols[:, 2], cols[:, 1], cols[:, 0], dim_arr, sq_arr))
    return Filtration(
        source=cloud,
        kind=kind,
        max_dim=max_dim,
        simplices=tuple(simplices[i] for i in order.tolist()),
        sq_values=sq_arr[order],
        restrict=restrict if faces is not None else None,
    )


def cech_filtration(cloud: PointCloud, max_dim: int, max_value: float, restrict: str | None = None,
                    max_simplices: int | None = DEFAULT_MAX_SIMPLICES) -> Filtration:
    """Čech filtration: each simplex enters at its minimum-enclosing-ball radius."""
    return build_filtration(cloud, "cech", max_dim, max_value, restrict, max_simplices)


def rips_filtration(cloud: PointCloud, max_dim: int, max_value: float, restrict: str | None = None,
                    max_simplices: int | None = DEFAULT_MAX_SIMPLICES) -> Filtration:
    """Rips filtration: each simplex enters at half its diameter."""
    return build_filtration(cloud, "rips", max_dim, max_value, restrict, max_simplices)
