"""Circumspheres and angle certificates for small simplices."""
from __future__ import annotations

import numpy as np

from ..exceptions import DegenerateSimplexError

GRAM_TOL = 1e-12
POSITIVE_TOL = 1e-12


def _vertices(points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    if pts.shape[0] < 2:
        raise DegenerateSimplexError("need at least two vertices")
    if pts.shape[0] - 1 > pts.shape[1]:
        raise DegenerateSimplexError(
            f"{pts.shape[0]} vertices cannot be affinely independent in R^{pts.shape[1]}"
        )
    return pts


def _solve_circumcenter(pts: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Return (center, barycentric weights) of the circumsphere in the affine hull."""
    edges = pts[1:] - pts[0]
    gram = edges @ edges.T
    scale = float(np.max(np.diag(gram)))
    k = len(edges)
    if scale == 0.0 or np.linalg.det(gram) <= GRAM_TOL * scale**k:
        raise DegenerateSimplexError("vertices are affinely dependent")
    lam = np.linalg.solve(gram, 0.5 * np.diag(gram))
    center = pts[0] + lam @ edges
    return center, np.concatenate([[1.0 - lam.sum()], lam])


def circumcenter(points) -> tuple[np.ndarray, float]:
    """Center and radius of the sphere through k+1 affinely independent points.

    The center lies in the affine hull of the points.

    >>> c, r = circumcenter([[0, 0], [2, 0], [0, 2]])
    >>> c.tolist(), round(r**2, 12)
    ([1.0, 1.0], 2.0)
    """
    pts = _vertices(points)
    center, _ = _solve_circumcenter(pts)
    return center, float(np.linalg.norm(pts[0] - center))


def is_strictly_acute(p, q, s) -> bool:
    """All three angles of triangle pqs are strictly less than pi/2."""
    tri = _vertices([p, q, s])
    _solve_circumcenter(tri)  # degeneracy check
    for i in range(3):
        a, b, c = tri[i], tri[(i + 1) % 3], tri[(i + 2) % 3]
        if np.dot(b - a, c - a) <= 0.0:
            return False
    return True


def is_strictly_self_centred(simplex) -> bool:
    """True iff the circumcenter lies in the relative interior of the simplex."""
    _, weights = _solve_circumcenter(_vertices(simplex))
    return bool(np.all(weights > POSITIVE_TOL))
