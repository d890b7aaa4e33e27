import numpy as np
import pytest

from fncode import (
    FUNCTION,
    SLEPIAN_WOLF,
    RateRegion,
    boundary_points,
    containment,
    contains,
    corner_points,
    full_report,
    region_of,
)
from conftest import (
    binary_entropy,
    constant_function,
    dsbs,
    identity_function,
    mod2_function,
    random_function,
    random_source,
)


def test_identity_function_region_equals_slepian_wolf_exactly():
    rng = np.random.default_rng(31)
    for _ in range(25):
        src = random_source(rng)
        rep = full_report(src, identity_function(src.x_size, src.y_size))
        assert region_of(rep, FUNCTION) == region_of(rep, SLEPIAN_WOLF)


def test_constant_function_region_is_whole_quadrant():
    rep = full_report(dsbs(0.25), constant_function(2, 2))
    region = region_of(rep, FUNCTION)
    assert region == RateRegion(0.0, 0.0, 0.0)
    assert contains(region, 0.0, 0.0)


def test_mod2_dsbs_region_thresholds():
    rep = full_report(dsbs(0.25), mod2_function())
    region = region_of(rep, FUNCTION)
    h = binary_entropy(0.25)
    assert region.r1_min == pytest.approx(h, abs=1e-9)
    assert region.r2_min == pytest.approx(h, abs=1e-9)
    assert region.rsum_min == pytest.approx(h, abs=1e-9)
    # sum constraint inactive at the corner
    assert region.r1_min + region.r2_min >= region.rsum_min
    assert corner_points(region) == [(region.r1_min, region.r2_min)]


def test_contains_boundary_and_violations():
    rep = full_report(dsbs(0.25), mod2_function())
    region = region_of(rep, FUNCTION)
    assert contains(region, region.r1_min, region.r2_min, tol=0.0)
    assert not contains(region, 0.5, 0.9)
    with pytest.raises(ValueError):
        contains(region, -0.1, 0.5)


def test_contains_monotone():
    region = RateRegion(0.4, 0.7, 1.5)
    rng = np.random.default_rng(3)
    for _ in range(50):
        r1, r2 = rng.uniform(0, 3, 2)
        if contains(region, r1, r2):
            d = float(rng.uniform(0, 2))
            assert contains(region, r1 + d, r2 + d)


def test_corner_points_degenerate():
    assert corner_points(RateRegion(0.0, 0.0, 0.0)) == [(0.0, 0.0)]


def test_corner_points_slepian_wolf_dsbs():
    rep = full_report(dsbs(0.25), mod2_function())
    sw = region_of(rep, SLEPIAN_WOLF)
    h = binary_entropy(0.25)
    corners = corner_points(sw)
    assert len(corners) == 2
    assert corners[0] == pytest.approx((h, 1.0), abs=1e-9)
    assert corners[1] == pytest.approx((1.0, h), abs=1e-9)
    assert corners[0][0] < corners[1][0]  # increasing r1 order


def test_corners_sit_on_boundary():
    rng = np.random.default_rng(11)
    for _ in range(50):
        src = random_source(rng)
        fspec = random_function(rng, src)
        rep = full_report(src, fspec)
        for which in (FUNCTION, SLEPIAN_WOLF):
            region = region_of(rep, which)
            for r1, r2 in corner_points(region):
                assert contains(region, r1, r2, tol=1e-12)
            # perturbing a binding coordinate leaves the region
            corners = corner_points(region)
            if len(corners) == 1:
                r1, r2 = corners[0]
                if r1 > 1e-5:
                    assert not contains(region, r1 - 1e-6, r2, tol=1e-12)
                if r2 > 1e-5:
                    assert not contains(region, r1, r2 - 1e-6, tol=1e-12)
            else:
                (a1, a2), (b1, b2) = corners
                if a1 > 1e-5:
                    assert not contains(region, a1 - 1e-6, a2, tol=1e-12)
                assert not contains(region, b1, b2 - 1e-6, tol=1e-12)


def test_containment_reflexive_and_strict():
    region = RateRegion(0.3, 0.2, 0.9)
    assert containment(region, region)
    assert not containment(RateRegion(1.0, 0.0, 1.0), RateRegion(0.0, 0.0, 0.0))
    assert containment(RateRegion(0.0, 0.0, 0.0), RateRegion(1.0, 0.0, 1.0))


def test_function_region_contains_slepian_wolf():
    rng = np.random.default_rng(19)
    for _ in range(100):
        src = random_source(rng)
        fspec = random_function(rng, src)
        rep = full_report(src, fspec)
        assert containment(region_of(rep, FUNCTION), region_of(rep, SLEPIAN_WOLF))


def test_boundary_points_trace():
    region = RateRegion(0.2, 0.3, 1.0)
    pts = boundary_points(region, 10)
    assert len(pts) == 11
    assert pts[0] == (0.2, 0.8)
    assert pts[-1] == pytest.approx((0.7, 0.3), abs=1e-12)
    for r1, r2 in pts:
        assert contains(region, r1, r2, tol=1e-12)
    # single-corner region collapses to the corner
    assert boundary_points(RateRegion(0.5, 0.5, 0.5), 10) == [(0.5, 0.5)]


def test_boundary_points_resolution_validation():
    with pytest.raises(ValueError):
        boundary_points(RateRegion(0.0, 0.0, 0.0), 0)


def test_region_rejects_negative_thresholds():
    with pytest.raises(ValueError):
        RateRegion(-0.1, 0.0, 0.0)


def test_region_of_unknown_kind():
    rep = full_report(dsbs(0.25), mod2_function())
    with pytest.raises(ValueError):
        region_of(rep, "other")
