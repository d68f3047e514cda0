import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posreach.exceptions import DegenerateSimplexError, InapplicableError, ResourceError
from posreach.geometry import (
    Annulus,
    AnnuliCounterexample,
    Circle,
    CounterexampleMetadata,
    PointCloud,
    ToriCounterexample,
    Torus,
    annuli_growth_constant,
    annuli_radius_sequence,
    build_counterexample_cloud,
    circumcenter,
    pair_triangles_acute,
    concatenate,
    is_strictly_acute,
    is_strictly_self_centred,
    one_sided_hausdorff,
    sample_shape,
    tori_geometry,
    tori_growth_constant,
    tori_radius_sequence,
)


def brute_hausdorff(a, b):
    d = np.linalg.norm(a[:, None, :] - b[None, :, :], axis=2)
    return d.min(axis=1).max()


def lstsq_circumcenter(pts):
    """Equidistance equations in the affine hull, solved by least squares."""
    pts = np.asarray(pts, float)
    A = 2 * (pts[1:] - pts[0])
    b = (pts[1:] ** 2).sum(1) - (pts[0] ** 2).sum()
    basis = (pts[1:] - pts[0]).T
    coef = np.linalg.lstsq(A @ basis, b - A @ pts[0], rcond=None)[0]
    c = pts[0] + basis @ coef
    return c, np.linalg.norm(pts[0] - c)


class TestPointCloud:
    def test_validation(self):
        with pytest.raises(ValueError):
            PointCloud(np.zeros((0, 2)))
        with pytest.raises(ValueError):
            PointCloud([[0, math.inf]])
        with pytest.raises(ValueError):
            PointCloud([[0, 0]], labels=[0, 1])

    def test_immutable(self):
        c = PointCloud([[0.0, 1.0]])
        with pytest.raises(ValueError):
            c.points[0, 0] = 3

    def test_csv_round_trip(self, tmp_path):
        c = PointCloud(np.random.default_rng(0).normal(size=(20, 3)))
        text = c.to_csv()
        assert text.startswith("# dim=3")
        back = PointCloud.from_csv(text)
        assert np.array_equal(back.points, c.points)
        c.to_csv(tmp_path / "c.csv")
        assert np.array_equal(PointCloud.from_csv(tmp_path / "c.csv").points, c.points)

    def test_select_and_concatenate(self):
        a = PointCloud([[0, 0], [1, 0]], labels=[0, 0])
        b = PointCloud([[5, 0]], labels=[1])
        ab = concatenate([a, b])
        assert len(ab) == 3 and len(ab.select(1)) == 1


class TestHausdorff:
    def test_examples(self):
        a = PointCloud([[0.0, 0.0]])
        assert one_sided_hausdorff(a, a) == 0
        assert one_sided_hausdorff(a, PointCloud([[3.0, 4.0]])) == pytest.approx(5)

    def test_dimension_mismatch(self):
        with pytest.raises(ValueError):
            one_sided_hausdorff(PointCloud([[0, 0]]), PointCloud([[0, 0, 0]]))

    @settings(max_examples=50, deadline=None)
    @given(st.integers(0, 10_000), st.integers(1, 30), st.integers(1, 30))
    def test_matches_brute_force(self, seed, n, m):
        rng = np.random.default_rng(seed)
        a, b = rng.normal(size=(n, 2)), rng.normal(size=(m, 2))
        assert one_sided_hausdorff(PointCloud(a), PointCloud(b)) == pytest.approx(brute_hausdorff(a, b))

    def test_subsample(self):
        dense = sample_shape(Circle(1.0), 0.01)
        sub = PointCloud(dense.points[::2])
        step = np.linalg.norm(dense.points[1] - dense.points[0])
        assert one_sided_hausdorff(dense, sub) <= step + 1e-12


class TestSamplers:
    def test_circle_eight_points(self):
        c = sample_shape(Circle(1.0), math.pi / 2)
        assert len(c) == 8
        assert np.allclose(np.linalg.norm(c.points, axis=1), 1.0, atol=1e-15)

    @pytest.mark.parametrize("shape,h", [(Circle(1.0), 0.01), (Circle(2.0, (1.0, -1.0)), 0.05),
                                         (Annulus(1.0, 1.5), 0.05), (Torus(), 0.2),
                                         (Torus(axis=(1.0, 1.0, 0.0)), 0.3)])
    def test_hausdorff_bound_against_denser_reference(self, shape, h):
        cloud = sample_shape(shape, h)
        reference = sample_shape(shape, h / 10, max_points=None)
        assert one_sided_hausdorff(reference, cloud) <= h / 2
        assert one_sided_hausdorff(cloud, reference) <= h / 20 + 1e-9

    def test_torus_points_on_surface(self):
        c = sample_shape(Torus(), 0.2).points
        rho = np.hypot(c[:, 0], c[:, 1])
        assert np.allclose(np.hypot(rho - 2, c[:, 2]), 1.0)
        assert len(c) == 7945

    def test_resource_cap(self):
        with pytest.raises(ResourceError):
            sample_shape(Torus(), 0.001)
        with pytest.raises(ValueError):
            sample_shape(Circle(1.0), 0.0)

    def test_deterministic(self):
        a, b = sample_shape(Torus(), 0.3), sample_shape(Torus(), 0.3)
        assert np.array_equal(a.points, b.points)

    def test_reach(self):
        assert Torus().reach == 1 and Circle(3).reach == 3 and Annulus(1, 2).reach == 1
        with pytest.raises(ValueError):
            Annulus(2, 1)
        with pytest.raises(ValueError):
            Torus(1, 2)


class TestCircumcenter:
    def test_examples(self):
        c, r = circumcenter([[0, 0], [2, 0], [0, 2]])
        assert np.allclose(c, [1, 1]) and r == pytest.approx(math.sqrt(2))
        s = 1.7
        _, r = circumcenter([[0, 0], [s, 0], [s / 2, s * math.sqrt(3) / 2]])
        assert r == pytest.approx(s / math.sqrt(3))
        tet = s / math.sqrt(8) * np.array([[1, 1, 1], [1, -1, -1], [-1, 1, -1], [-1, -1, 1]])
        _, r = circumcenter(tet)
        assert r == pytest.approx(s * math.sqrt(3 / 8))

    def test_degenerate(self):
        with pytest.raises(DegenerateSimplexError):
            circumcenter([[0, 0], [1, 0], [2, 0]])
        with pytest.raises(DegenerateSimplexError):
            circumcenter([[0, 0], [1, 0], [0, 1], [1, 1]])

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.sampled_from([2, 3]))
    def test_matches_least_squares(self, seed, m, d):
        if m > d + 1:
            return
        pts = np.random.default_rng(seed).normal(size=(m, d))
        try:
            c, r = circumcenter(pts)
        except DegenerateSimplexError:
            return
        c2, r2 = lstsq_circumcenter(pts)
        assert np.allclose(c, c2, atol=1e-7 * max(1, r)) and r == pytest.approx(r2, rel=1e-7)
        assert np.allclose(np.linalg.norm(pts - c, axis=1), r, rtol=1e-9)


class TestCertificates:
    def test_acute(self):
        assert is_strictly_acute([0, 0], [1, 0], [0.5, 1])
        assert not is_strictly_acute([0, 0], [1, 0], [0, 1])

    def test_self_centred(self):
        assert is_strictly_self_centred([[0, 0], [1, 0], [0.5, math.sqrt(3) / 2]])
        assert not is_strictly_self_centred([[0, 0], [1, 0], [0, 1]])

    @settings(max_examples=200, deadline=None)
    @given(st.integers(0, 2**32 - 1))
    def test_triangle_self_centred_iff_acute(self, seed):
        p = np.random.default_rng(seed).normal(size=(3, 2))
        try:
            assert is_strictly_self_centred(p) == is_strictly_acute(*p)
        except DegenerateSimplexError:
            pass


class TestAnnuliSequence:
    meta = annuli_radius_sequence(0.25, 0.25)

    def test_values(self):
        m = self.meta
        assert m.r_seq[0] == 0.25 and m.r_seq[-1] == 0.75
        assert m.final_circumradius == pytest.approx((1.25**2 + 0.75**2) / 2.5) == pytest.approx(0.85)
        assert m.k == 15
        assert all(np.diff(m.r_seq) > 0)
        assert all(R >= r for r, R in zip(m.r_seq, m.circum_seq))

    def test_growth_and_acuteness(self):
        m = self.meta
        c = annuli_growth_constant(0.25, 0.25)
        assert c > 0
        for r, R in zip(m.r_seq, m.circum_seq):
            assert R - r >= c * r * (1 - 1e-12)
        assert all(m.certificates)

    def test_independent_circumradius(self):
        m = self.meta
        for i, (r, R) in enumerate(zip(m.r_seq, m.circum_seq)):
            t = math.sqrt(0.75**2 - r * r)
            _, oracle = lstsq_circumcenter([[t, r], [t, -r], [1.25, 0]])
            assert R == pytest.approx(oracle, abs=1e-9)

    def test_inapplicable(self):
        with pytest.raises(InapplicableError):
            annuli_radius_sequence(0.1, 0.1)
        with pytest.raises(InapplicableError):
            annuli_radius_sequence(math.sqrt(2) - 1, 0.0)

    def test_json_round_trip(self, tmp_path):
        text = self.meta.to_json()
        for key in ("k", "r_seq", "circum_seq", "critical_radii", "ell", "h", "offsets"):
            assert key in text
        assert CounterexampleMetadata.from_json(text) == self.meta
        self.meta.to_json(tmp_path / "m.json")
        assert CounterexampleMetadata.from_json(tmp_path / "m.json") == self.meta

    @settings(max_examples=30, deadline=None)
    @given(st.floats(0.05, 0.9), st.floats(0.05, 0.9))
    def test_sequence_properties(self, eps, delta):
        if eps + math.sqrt(2) * delta <= (math.sqrt(2) - 1) * 1.05:
            return
        m = annuli_radius_sequence(eps, delta)
        assert m.r_seq[-1] == 1 - delta
        assert all(np.diff(m.r_seq) > 0)
        c = annuli_growth_constant(eps, delta)
        for r, R in zip(m.r_seq[:-1], m.circum_seq[:-1]):
            assert R - r >= c * r * (1 - 1e-9)


class TestToriSequence:
    meta = tori_radius_sequence(0.4, 0.1)

    def test_geometry(self):
        ell, h = tori_geometry(0.4, 0.1)
        assert ell == pytest.approx(0.175)
        assert h == pytest.approx(float(mp.sqrt(mp.mpf("0.129375"))), rel=1e-14)
        assert self.meta.r_seq[0] == pytest.approx(h)
        assert self.meta.r_seq[-1] == 0.9

    def test_growth(self):
        c = tori_growth_constant(0.4, 0.1)
        assert c > 0
        r = np.array(self.meta.r_seq)
        assert np.all(np.diff(r**2) >= c**2 * (1 - 1e-9))

    def test_certificates(self):
        assert all(self.meta.certificates)
        ell, h = tori_geometry(0.4, 0.1)
        for i in range(0, self.meta.k, 97):
            r = self.meta.r_seq[i]
            t = math.sqrt(0.81 - r * r)
            p, pt, q, qt = [t, r, 0], [t, -r, 0], [1 + ell, 0, h], [1 + ell, 0, -h]
            assert is_strictly_acute(p, pt, q) and is_strictly_acute(q, qt, p)
            c, R = lstsq_circumcenter([p, pt, q, qt])
            assert R == pytest.approx(self.meta.circum_seq[i], abs=1e-9)

    def test_inapplicable(self):
        with pytest.raises(InapplicableError):
            tori_radius_sequence(0.1, 0.2)
        with pytest.raises(InapplicableError):
            tori_radius_sequence(0.3, 0.0)

    def test_pair_triangles_acute(self):
        assert pair_triangles_acute(0.4, 0.1)
        assert not pair_triangles_acute(0.0, 0.0)
        ell = 3 - 2 * math.sqrt(2)
        assert (1 + ell) ** 2 - 8 * ell == pytest.approx(0, abs=1e-14)
        with pytest.raises(InapplicableError):
            pair_triangles_acute(0.1, 0.2)


class TestCounterexampleClouds:
    def test_annuli_component(self):
        m = annuli_radius_sequence(0.25, 0.25)
        c = build_counterexample_cloud(m, 0.05, [0])
        pts = c.points
        norms = np.linalg.norm(pts, axis=1)
        ring = np.isclose(norms, 1.25)
        assert ring.sum() == len(pts) - 2
        pair = pts[~ring]
        assert np.linalg.norm(pair[0] - pair[1]) == pytest.approx(0.5, abs=1e-12)
        assert np.allclose(np.linalg.norm(pair, axis=1), 0.75)
        assert np.all(c.labels == 0)

    def test_pairs_and_offsets(self):
        m = annuli_radius_sequence(0.25, 0.25)
        for i in range(m.k + 1):
            p = m.pair(i) - np.asarray(m.component_offsets[i])
            assert np.linalg.norm(p[0] - p[1]) == pytest.approx(2 * m.r_seq[i], abs=1e-12)
            assert np.allclose(np.linalg.norm(p, axis=1), 0.75)
        gaps = np.diff([o[0] for o in m.component_offsets]) - 2 * 1.5
        assert np.all(gaps >= 2 - 1e-12)

    def test_cut_torus_avoids_inner_circle(self):
        m = tori_radius_sequence(0.4, 0.1)
        h = 0.2
        c = build_counterexample_cloud(m, h, [0], which="tori")
        pts = c.points[:-2]
        rho = np.hypot(pts[:, 0], pts[:, 1])
        dist = np.hypot(rho - 1.0, pts[:, 2])
        assert dist.min() >= 0.4 - h / 2
        assert np.allclose(np.hypot(rho - 2.0, pts[:, 2]), 0.9)

    def test_errors(self):
        m = annuli_radius_sequence(0.25, 0.25)
        with pytest.raises(ValueError):
            build_counterexample_cloud(m, 0.05, [])
        with pytest.raises(ValueError):
            build_counterexample_cloud(m, 0.05, [99])
        with pytest.raises(ValueError):
            build_counterexample_cloud(m, 0.05, which="tori")
        with pytest.raises(ResourceError):
            build_counterexample_cloud(m, 1e-5)

    def test_sample_shape_dispatch(self):
        c = sample_shape(AnnuliCounterexample(0.25, 0.25), 0.1)
        assert set(np.unique(c.labels)) == set(range(16))
        with pytest.raises(ResourceError):
            sample_shape(ToriCounterexample(0.4, 0.1), 0.2)

    def test_deterministic(self):
        m = tori_radius_sequence(0.4, 0.1)
        a = build_counterexample_cloud(m, 0.3, [0, 1])
        b = build_counterexample_cloud(m, 0.3, [0, 1])
        assert np.array_equal(a.points, b.points)
