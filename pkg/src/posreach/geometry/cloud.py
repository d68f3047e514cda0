from __future__ import annotations

import io
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

DEFAULT_MAX_POINTS = 100_000


def _frozen(a: np.ndarray) -> np.ndarray:
    a = np.array(a, copy=True)
    a.flags.writeable = False
    return a


@dataclass(frozen=True, eq=False)
class PointCloud:
    """Finite point set in R^d with optional per-point component labels."""

    points: np.ndarray
    labels: np.ndarray | None = None

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 1 or pts.shape[1] < 1:
            raise ValueError(f"points must be a non-empty (n, d) array, got shape {pts.shape}")
        if not np.all(np.isfinite(pts)):
            raise ValueError("point coordinates must be finite")
        object.__setattr__(self, "points", _frozen(pts))
        if self.labels is not None:
            labels = np.asarray(self.labels, dtype=int)
            if labels.shape != (pts.shape[0],):
                raise ValueError("labels must have one entry per point")
            object.__setattr__(self, "labels", _frozen(labels))

    @property
    def dim(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.points.shape[0]

    def select(self, label: int) -> "PointCloud":
        if self.labels is None:
            raise ValueError("cloud has no labels")
        mask = self.labels == label
        if not mask.any():
            raise ValueError(f"no point carries label {label}")
        return PointCloud(self.points[mask], self.labels[mask])

    def to_csv(self, path=None) -> str | None:
        buf = io.StringIO()
        buf.write(f"# dim={self.dim}\n")
        for row in self.points:
            buf.write(",".join(format(float(x), ".17g") for x in row))
            buf.write("\n")
        if path is None:
            return buf.getvalue()
        Path(path).write_text(buf.getvalue())
        return None

    @classmethod
    def from_csv(cls, source) -> "PointCloud":
        """Read a cloud from a path or from CSV text (anything containing a newline)."""
        text = source if isinstance(source, str) and "\n" in source else Path(source).read_text()
        dim = None
        rows = []
        for lineno, line in enumerate(text.splitlines(), 1):
            line = line.strip()
            if not line:
                continue
            if line.startswith("#"):
                key, _, value = line[1:].strip().partition("=")
                if key.strip() == "dim":
                    dim = int(value)
                continue
            try:
                rows.append([float(x) for x in line.split(",")])
            except ValueError as exc:
                raise ValueError(f"line {lineno}: {exc}") from None
        if not rows:
            raise ValueError("no points found")
        widths = {len(r) for r in rows}
        if len(widths) != 1 or (dim is not None and widths != {dim}):
            raise ValueError(f"inconsistent row lengths {sorted(widths)} (dim={dim})")
        return cls(np.array(rows))


def concatenate(clouds: list[PointCloud]) -> PointCloud:
    if not clouds:
        raise ValueError("nothing to concatenate")
    labels = None
    if all(c.labels is not None for c in clouds):
        labels = np.concatenate([c.labels for c in clouds])
    return PointCloud(np.vstack([c.points for c in clouds]), labels)


def one_sided_hausdorff(source: PointCloud, target: PointCloud) -> float:
    """Largest distance from a point of ``source`` to its nearest point in ``target``.

    This is the smallest rho with ``source`` contained in ``target + B(rho)``.
    """
    if source.dim != target.dim:
        raise ValueError(f"dimension mismatch: {source.dim} vs {target.dim}")
    dist, _ = cKDTree(target.points).query(source.points, k=1)
    return float(dist.max())
