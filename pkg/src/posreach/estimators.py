"""scikit-learn style wrappers around the filtration and persistence engines."""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .complex import DEFAULT_MAX_SIMPLICES, build_filtration
from .geometry.cloud import PointCloud
from .homology import persistence


def check_point_cloud(X) -> PointCloud:
    """Validate an (n_points, dim) array of finite coordinates."""
    if isinstance(X, PointCloud):
        return X
    return PointCloud(check_array(X, dtype=np.float64, ensure_min_features=1))


def _check_params(est):
    if est.complex not in ("cech", "rips"):
        raise ValueError(f"complex must be 'cech' or 'rips', got {est.complex!r}")
    if est.restrict not in (None, "delaunay"):
        raise ValueError(f"restrict must be None or 'delaunay', got {est.restrict!r}")
    if not 0 <= est.max_dim <= 3:
        raise ValueError(f"max_dim must lie in [0, 3], got {est.max_dim}")


class CechPersistence(BaseEstimator):
    """Barcode of the filtration of one point cloud.

    After ``fit`` the estimator exposes ``filtration_`` and ``barcode_``;
    ``betti_profile(r)`` reads off Betti numbers at a radius.
    """

    def __init__(self, max_value=1.0, max_dim=3, complex="cech", restrict=None,
                 max_simplices=DEFAULT_MAX_SIMPLICES):
        self.max_value = max_value
        self.max_dim = max_dim
        self.complex = complex
        self.restrict = restrict
        self.max_simplices = max_simplices

    def fit(self, X, y=None):
        _check_params(self)
        cloud = check_point_cloud(X)
        self.filtration_ = build_filtration(cloud, self.complex, self.max_dim, self.max_value,
                                            self.restrict, self.max_simplices)
        self.barcode_ = persistence(self.filtration_)
        self.n_features_in_ = cloud.dim
        return self

    def betti_profile(self, r, top_dim=2):
        check_is_fitted(self, "barcode_")
        if r > self.max_value:
            raise ValueError(f"radius {r} exceeds the fitted max_value {self.max_value}")
        return self.barcode_.profile(r, top_dim)


class BettiVectorizer(TransformerMixin, BaseEstimator):
    """Map each point cloud in a sequence to its Betti numbers at fixed radii.

    The output row of a cloud is ``[b_0(r), ..., b_top(r)]`` concatenated over
    ``radii``.
    """

    def __init__(self, radii=(0.5,), top_dim=2, max_dim=3, complex="cech", restrict="delaunay",
                 max_simplices=DEFAULT_MAX_SIMPLICES):
        self.radii = radii
        self.top_dim = top_dim
        self.max_dim = max_dim
        self.complex = complex
        self.restrict = restrict
        self.max_simplices = max_simplices

    def fit(self, X, y=None):
        _check_params(self)
        radii = np.asarray(self.radii, dtype=float).ravel()
        if radii.size == 0 or np.any(radii < 0) or not np.all(np.isfinite(radii)):
            raise ValueError("radii must be a non-empty list of non-negative numbers")
        if not 0 <= self.top_dim <= self.max_dim:
            raise ValueError("top_dim must lie in [0, max_dim]")
        self.radii_ = radii
        return self

    def transform(self, X):
        check_is_fitted(self, "radii_")
        top = max(float(self.radii_.max()), 1e-12)
        rows = []
        for pts in X:
            cloud = check_point_cloud(pts)
            f = build_filtration(cloud, self.complex, self.max_dim, top, self.restrict, self.max_simplices)
            b = persistence(f)
            rows.append([b.betti_at(r, k) for r in self.radii_ for k in range(self.top_dim + 1)])
        return np.array(rows, dtype=int).reshape(len(rows), len(self.radii_) * (self.top_dim + 1))
