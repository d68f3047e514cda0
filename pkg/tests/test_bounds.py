import io
import math

import mpmath as mp
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from posreach.bounds import (
    MANIFOLD_CONSTANT,
    SET_CONSTANT,
    ReachParams,
    check_manifold_condition,
    check_set_condition,
    feasibility_region,
    manifold_alpha_interval,
    manifold_discriminant,
    manifold_radius_interval,
    radius_interval,
    retract_condition,
    set_radius_interval,
)
from posreach.exceptions import InapplicableError

mp.mp.dps = 50
S2 = math.sqrt(2)


def mp_set_interval(R, e, d):
    R, e, d = mp.mpf(R), mp.mpf(e), mp.mpf(d)
    disc = 2 * (R - d) ** 2 - (R + e) ** 2
    return (R + e - mp.sqrt(disc)) / 2, (R + e + mp.sqrt(disc)) / 2


def mp_alpha_interval(R, e, d):
    R, e, d = mp.mpf(R), mp.mpf(e), mp.mpf(d)
    y = e**2 - (R - d) ** 2
    disc = y**2 / R**2 - 10 * y - 7 * R**2
    base = ((R - d) ** 2 + R**2 - e**2) / R
    return (base - mp.sqrt(disc)) / 4, (base + mp.sqrt(disc)) / 4


params = st.builds(
    lambda R, e, d: ReachParams(R, e * R, d * R),
    st.floats(0.1, 10),
    st.floats(0, 0.999),
    st.floats(0, 0.999),
)
manifold_params = params.filter(lambda p: p.delta <= p.eps)


class TestReachParams:
    @pytest.mark.parametrize("args", [(0, 0, 0), (-1, 0, 0), (1, 1, 0), (1, 0, 1), (1, -0.1, 0), (1, math.nan, 0)])
    def test_rejects_invalid(self, args):
        with pytest.raises(ValueError):
            ReachParams(*args)

    def test_scaled(self):
        assert ReachParams(1, 0.2, 0.1).scaled(2) == ReachParams(2, 0.4, 0.2)


class TestSetCondition:
    def test_zero_noise(self):
        assert check_set_condition(ReachParams(1, 0, 0))

    def test_boundary_values(self):
        assert check_set_condition(ReachParams(1, S2 - 1, 0))
        assert check_set_condition(ReachParams(1, 3 - math.sqrt(8), 3 - math.sqrt(8)))
        assert not check_set_condition(ReachParams(1, 0.18, 0.18))

    def test_just_outside(self):
        assert not check_set_condition(ReachParams(1, S2 - 1 + 1e-9, 0))


class TestManifoldCondition:
    def test_values(self):
        assert check_manifold_condition(ReachParams(1, 0, 0))
        assert check_manifold_condition(ReachParams(1, 2 - S2, 0))
        assert check_manifold_condition(ReachParams(1, 3 - math.sqrt(8), 3 - math.sqrt(8)))
        assert not check_manifold_condition(ReachParams(1, 2 - S2 + 1e-9, 0))

    def test_equal_noise_boundary_is_exact(self):
        x = mp.mpf(3) - mp.sqrt(8)
        assert mp.almosteq((1 - x) ** 2 - x**2, 4 * mp.sqrt(2) - 5, 1e-40)

    def test_inapplicable(self):
        with pytest.raises(InapplicableError):
            check_manifold_condition(ReachParams(1, 0.1, 0.2))
        with pytest.raises(InapplicableError):
            manifold_alpha_interval(ReachParams(1, 0.1, 0.2))
        with pytest.raises(InapplicableError):
            manifold_radius_interval(ReachParams(1, 0.1, 0.2))


class TestSetInterval:
    def test_trivial(self):
        for ext in (False, True):
            iv = set_radius_interval(ReachParams(1, 0, 0), extended=ext)
            assert (iv.lo, iv.hi) == pytest.approx((0.0, 1.0), abs=1e-12)

    def test_against_high_precision(self):
        iv = set_radius_interval(ReachParams(1, 0.2, 0.1))
        lo, hi = mp_set_interval(1, 0.2, 0.1)
        assert iv.lo == pytest.approx(float(lo), rel=1e-12)
        assert iv.hi == pytest.approx(float(hi), rel=1e-12)
        assert iv.lo == pytest.approx(0.5 * (1.2 - math.sqrt(0.18)), rel=1e-12)

    def test_empty(self):
        iv = set_radius_interval(ReachParams(1, 0.5, 0))
        assert iv.empty and math.isnan(iv.lo)
        assert iv.to_dict() == {"empty": True, "lo": None, "hi": None}
        assert 0.5 not in iv

    @settings(max_examples=300, deadline=None)
    @given(params)
    def test_nonempty_iff_condition(self, p):
        assert (not set_radius_interval(p).empty) == check_set_condition(p)

    @settings(max_examples=300, deadline=None)
    @given(params)
    def test_extended_contains_standard(self, p):
        std = set_radius_interval(p)
        if std.empty:
            return
        ext = set_radius_interval(p, extended=True)
        assert ext.lo == std.lo
        assert ext.hi >= std.hi * (1 - 1e-12)

    @settings(max_examples=200, deadline=None)
    @given(params, st.lists(st.floats(0, 1), min_size=1, max_size=64))
    def test_retraction_holds_inside(self, p, fractions):
        iv = set_radius_interval(p)
        if iv.empty:
            return
        for t in fractions:
            r = iv.lo + t * iv.width
            assert retract_condition(r, max(r - p.eps, 0.0), p, "set")


class TestManifoldIntervals:
    def test_trivial(self):
        a = manifold_alpha_interval(ReachParams(1, 0, 0))
        r = manifold_radius_interval(ReachParams(1, 0, 0))
        assert (a.lo, a.hi) == pytest.approx((0, 1), abs=1e-12)
        assert (r.lo, r.hi) == pytest.approx((0, 1), abs=1e-12)

    def test_boundary_degenerate(self):
        p = ReachParams(1, 2 - S2, 0)
        assert manifold_discriminant(p) == pytest.approx(0, abs=1e-10)
        a = manifold_alpha_interval(p)
        assert not a.empty and a.width == pytest.approx(0, abs=1e-5)

    def test_alpha_against_high_precision(self):
        a = manifold_alpha_interval(ReachParams(1, 0.3, 0.1))
        lo, hi = mp_alpha_interval(1, 0.3, 0.1)
        assert not a.empty
        assert (a.lo, a.hi) == pytest.approx((float(lo), float(hi)), rel=1e-12)

    def test_radius_examples(self):
        assert not manifold_radius_interval(ReachParams(1, 0.5, 0)).empty
        assert manifold_radius_interval(ReachParams(1, 0.6, 0)).empty

    def test_radius_against_high_precision(self):
        p = ReachParams(1, 0.35, 0.05)
        amin, amax = mp_alpha_interval(1, 0.35, 0.05)
        e, d = mp.mpf("0.35"), mp.mpf("0.05")
        lo2 = (1 + amin) * e**2 + amin**2 + amin * (1 - (1 - d) ** 2)
        hi2 = (1 - d) ** 2 - (1 - amax) ** 2
        iv = manifold_radius_interval(p)
        assert (iv.lo, iv.hi) == pytest.approx((float(mp.sqrt(lo2)), float(mp.sqrt(hi2))), rel=1e-12)

    @settings(max_examples=300, deadline=None)
    @given(manifold_params)
    def test_nonempty_iff_condition(self, p):
        assert (not manifold_radius_interval(p).empty) == check_manifold_condition(p)
        assert (not manifold_alpha_interval(p).empty) == check_manifold_condition(p)

    @settings(max_examples=100, deadline=None)
    @given(manifold_params, st.lists(st.floats(0, 1), min_size=1, max_size=64))
    def test_some_alpha_retracts(self, p, fractions):
        iv = manifold_radius_interval(p)
        if iv.empty:
            return
        R, delta = p.reach, p.delta
        for t in fractions:
            r = iv.lo + t * iv.width
            # coverage only gets harder as alpha grows, so the smallest
            # star-shaped alpha is the best candidate
            alpha = max(R - math.sqrt(max((R - delta) ** 2 - r * r, 0.0)), 0.0)
            assert retract_condition(r, min(alpha, r), p, "manifold")


class TestRetractCondition:
    def test_examples(self):
        p = ReachParams(1, 0, 0)
        assert retract_condition(0.5, 0.5, p, "set")
        assert not retract_condition(0.9, 0.1, p, "set")

    def test_rejects_alpha_above_r(self):
        with pytest.raises(ValueError):
            retract_condition(0.2, 0.3, ReachParams(1, 0, 0), "set")


@pytest.mark.parametrize("scale", [0.5, 2, 10])
@pytest.mark.parametrize("e,d", [(0.1, 0.05), (0.2, 0.1), (0.3, 0.2), (0.0, 0.0)])
def test_scale_equivariance(scale, e, d):
    p = ReachParams(1, e, d)
    q = p.scaled(scale)
    for mode in ("set", "manifold"):
        a, b = radius_interval(p, mode), radius_interval(q, mode)
        assert a.empty == b.empty
        if not a.empty:
            assert b.lo == pytest.approx(scale * a.lo, rel=1e-12, abs=1e-12 * scale)
            assert b.hi == pytest.approx(scale * a.hi, rel=1e-12)


def test_radius_interval_dispatch():
    p = ReachParams(1, 0.1, 0.05)
    assert radius_interval(p, "set") == set_radius_interval(p)
    with pytest.raises(ValueError):
        radius_interval(p, "manifold", extended=True)
    with pytest.raises(ValueError):
        radius_interval(p, "other")


class TestRegion:
    def test_small_grid(self):
        reg = feasibility_region(1, 3)
        assert reg.set_feasible.shape == (3, 3)
        assert reg.set_feasible[0, 0] and reg.manifold_feasible[0, 0]

    def test_boundary_crossings(self):
        reg = feasibility_region(1, 1000)
        row = reg.set_feasible[0]
        assert row[414] and not row[415]
        mrow = reg.manifold_feasible[0]
        assert mrow[585] and not mrow[586]

    def test_containment(self):
        reg = feasibility_region(1, 200)
        below = reg.manifold_applicable
        assert np.all(~reg.set_feasible[below] | reg.manifold_feasible[below])
        assert not reg.manifold_feasible[~below].any()

    def test_csv(self):
        buf = io.StringIO()
        feasibility_region(1, 4).to_csv(buf)
        lines = buf.getvalue().splitlines()
        assert lines[0] == "eps,delta,set_feasible,manifold_feasible"
        assert len(lines) == 17
        assert any(line.endswith(",na") for line in lines)

    def test_constants(self):
        assert SET_CONSTANT == pytest.approx(S2 - 1)
        assert MANIFOLD_CONSTANT == pytest.approx(4 * S2 - 5)
