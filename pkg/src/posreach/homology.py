"""Persistent homology over Z/2 and Betti numbers at a radius."""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .complex import Filtration


@dataclass(frozen=True)
class BettiProfile:
    radius: float
    betti: tuple[int, ...]

    def __post_init__(self):
        if any(b < 0 for b in self.betti):
            raise ValueError("Betti numbers are non-negative")

    def to_dict(self) -> dict:
        return {"radius": self.radius, "betti": list(self.betti)}


@dataclass(frozen=True, eq=False)
class Barcode:
    """Persistence intervals; ``deaths`` holds ``inf`` for essential classes.

    Zero-length intervals are kept so that the pairing is complete, but they
    never contribute to Betti numbers.
    """

    dims: np.ndarray
    births: np.ndarray
    deaths: np.ndarray
    max_dim: int | None = None

    def __post_init__(self):
        for name in ("dims", "births", "deaths"):
            arr = np.asarray(getattr(self, name))
            arr.setflags(write=False)
            object.__setattr__(self, name, arr)
        if not (len(self.dims) == len(self.births) == len(self.deaths)):
            raise ValueError("dims, births and deaths must have equal length")
        if np.any(self.births > self.deaths):
            raise ValueError("every interval needs birth <= death")

    def __len__(self) -> int:
        return len(self.dims)

    @property
    def reliable_dims(self) -> int | None:
        """Highest dimension whose intervals are exact for the filtered space."""
        return None if self.max_dim is None else self.max_dim - 1

    def intervals(self, dim: int | None = None) -> list[tuple[int, float, float]]:
        mask = np.ones(len(self), bool) if dim is None else self.dims == dim
        return list(zip(self.dims[mask].tolist(), self.births[mask].tolist(), self.deaths[mask].tolist()))

    def betti_at(self, r: float, dim: int) -> int:
        return betti_at(self, r, dim)

    def profile(self, r: float, top_dim: int = 2) -> BettiProfile:
        return BettiProfile(float(r), tuple(betti_at(self, r, k) for k in range(top_dim + 1)))

    def to_json(self, path=None) -> str | None:
        doc = {
            "intervals": [
                {"dim": d, "birth": b, "death": None if math.isinf(x) else x}
                for d, b, x in self.intervals()
            ]
        }
        text = json.dumps(doc)
        if path is None:
            return text
        Path(path).write_text(text + "\n")
        return None

    @classmethod
    def from_json(cls, source) -> "Barcode":
        text = source if isinstance(source, str) and source.lstrip().startswith("{") else Path(source).read_text()
        items = json.loads(text)["intervals"]
        return cls(
            dims=np.array([it["dim"] for it in items], dtype=int),
            births=np.array([it["birth"] for it in items], dtype=float),
            deaths=np.array([math.inf if it["death"] is None else it["death"] for it in items], dtype=float),
        )


def boundary_columns(f: Filtration) -> list[list[int]]:
    """Boundary of each simplex as filtration indices of its facets."""
    index = {s: i for i, s in enumerate(f.simplices)}
    cols = []
    for s in f.simplices:
        if len(s) == 1:
            cols.append([])
            continue
        cols.append(sorted(index[s[:j] + s[j + 1:]] for j in range(len(s))))
    return cols


def persistence(f: Filtration) -> Barcode:
    """Standard column reduction with clearing, highest dimension first."""
    n = len(f)
    cols = boundary_columns(f)
    dims = f.dims
    values = f.values
    death_of = np.full(n, -1)
    pivot_owner: dict[int, int] = {}
    cleared = np.zeros(n, bool)
    reduced: dict[int, set] = {}
    for k in range(int(dims.max()) if n else 0, 0, -1):
        for j in np.flatnonzero(dims == k).tolist():
            if cleared[j]:
                continue
            col = set(cols[j])
            while col:
                low = max(col)
                owner = pivot_owner.get(low)
                if owner is None:
                    break
                col ^= reduced[owner]
            if col:
                low = max(col)
                pivot_owner[low] = j
                reduced[j] = col
                death_of[low] = j
                cleared[low] = True
    out_dims, births, deaths = [], [], []
    for i in range(n):
        if cleared[i] and death_of[i] < 0:
            continue
        if i in reduced:
            continue  # negative simplex: it kills a class
        out_dims.append(int(dims[i]))
        births.append(float(values[i]))
        deaths.append(float(values[death_of[i]]) if death_of[i] >= 0 else math.inf)
    return Barcode(np.array(out_dims, dtype=int), np.array(births), np.array(deaths), max_dim=f.max_dim)


def betti_at(b: Barcode, r: float, dim: int) -> int:
    """Number of intervals of dimension ``dim`` with ``birth <= r < death``."""
    if dim < 0:
        raise ValueError("dimension must be non-negative")
    mask = (b.dims == dim) & (b.births <= r) & (r < b.deaths)
    return int(mask.sum())
