"""Closed rate regions cut out by three entropy thresholds.

A region is the set of rate pairs (r1, r2) with r1 >= r1_min,
r2 >= r2_min and r1 + r2 >= rsum_min.  Regions are stored as thresholds;
corner points and boundary traces are derived data.  No ordering between
rsum_min and r1_min + r2_min is assumed: both cases occur.
"""

from __future__ import annotations

from dataclasses import dataclass

from .measures import EntropyReport

FUNCTION = "function"
SLEPIAN_WOLF = "slepian_wolf"

DEFAULT_TOLERANCE = 1e-9


@dataclass(frozen=True)
class RateRegion:
    r1_min: float
    r2_min: float
    rsum_min: float

    def __post_init__(self):
        if self.r1_min < 0 or self.r2_min < 0 or self.rsum_min < 0:
            raise ValueError("rate thresholds must be nonnegative")

    def as_dict(self) -> dict:
        return {
            "r1_min": self.r1_min,
            "r2_min": self.r2_min,
            "rsum_min": self.rsum_min,
        }


def region_of(report: EntropyReport, which: str) -> RateRegion:
    """Build a region from an entropy report.

    `which` selects the thresholds: "function" uses the conditional and
    plain entropies of the function output, "slepian_wolf" the classical
    thresholds for recovering the pair itself.
    """
    if which == FUNCTION:
        return RateRegion(
            r1_min=report.h_z_given_y,
            r2_min=report.h_z_given_x,
            rsum_min=report.h_z,
        )
    if which == SLEPIAN_WOLF:
        return RateRegion(
            r1_min=report.h_x_given_y,
            r2_min=report.h_y_given_x,
            rsum_min=report.h_xy,
        )
    raise ValueError(f"unknown region kind {which!r}")


def contains(region: RateRegion, r1: float, r2: float,
             tol: float = DEFAULT_TOLERANCE) -> bool:
    """Closed membership test with a tolerance for entropy arithmetic."""
    if r1 < 0 or r2 < 0:
        raise ValueError("rates must be nonnegative")
    if tol < 0:
        raise ValueError("tolerance must be nonnegative")
    return (
        r1 >= region.r1_min - tol
        and r2 >= region.r2_min - tol
        and r1 + r2 >= region.rsum_min - tol
    )


def corner_points(region: RateRegion) -> list[tuple[float, float]]:
    """Vertices of the dominant boundary, in increasing r1 order.

    When the sum constraint is slack at (r1_min, r2_min) there is a single
    corner; otherwise the sum constraint contributes two.
    """
    if region.r1_min + region.r2_min >= region.rsum_min:
        return [(region.r1_min, region.r2_min)]
    return [
        (region.r1_min, region.rsum_min - region.r1_min),
        (region.rsum_min - region.r2_min, region.r2_min),
    ]


def containment(region: RateRegion, other: RateRegion) -> bool:
    """True iff every rate pair of `other` also lies in `region`.

    Threshold regions nest by componentwise threshold comparison.
    """
    return (
        region.r1_min <= other.r1_min
        and region.r2_min <= other.r2_min
        and region.rsum_min <= other.rsum_min
    )


def boundary_points(region: RateRegion, resolution: int) -> list[tuple[float, float]]:
    """Sample the dominant boundary for plotting.

    Traces r2(r1) = max(r2_min, rsum_min - r1) between the extreme corners
    with `resolution` segments; degenerate (single-corner) regions yield
    just the corner.
    """
    if resolution < 1:
        raise ValueError("resolution must be at least 1")
    corners = corner_points(region)
    if len(corners) == 1:
        return corners
    r1_lo, r1_hi = corners[0][0], corners[1][0]
    step = (r1_hi - r1_lo) / resolution
    points = []
    for i in range(resolution + 1):
        r1 = r1_lo + i * step
        points.append((r1, max(region.r2_min, region.rsum_min - r1)))
    return points
