"""Circular-orbit pass geometry and the beacon/signal pointing angles.

Covers the line-of-sight range to the platform, the apparent angular slew
rate, and the three small angles that drive anisoplanatism: the physical
beacon-to-signal separation angle, the angle swept during one corrector
response time, and their difference (the column of air the correction
misses).
"""

from __future__ import annotations

import dataclasses
import math
from dataclasses import dataclass
from typing import Optional

from .quadrature import BracketError, find_zero

EARTH_RADIUS = 6.371e6
EARTH_MU = 3.986004418e14  # gravitational parameter, m^3/s^2

MAX_ZENITH = math.radians(75.0)


@dataclass(frozen=True)
class PassGeometry:
    """One look geometry: platform altitude and zenith angle of the sight line.

    Zenith angle may reach pi/2 here because range and slew stay finite at
    the horizon; path integrals that diverge there enforce their own caps.
    """

    h_alt: float
    zenith: float
    earth_radius: float = EARTH_RADIUS
    earth_mu: float = EARTH_MU

    def __post_init__(self):
        if not self.h_alt > 0:
            raise ValueError("h_alt must be > 0")
        if not 0 <= self.zenith <= math.pi / 2:
            raise ValueError("zenith must lie in [0, pi/2]")


@dataclass(frozen=True)
class BeamGeometry:
    """Pointing angles for a beacon displaced ahead of the signal.

    response_time is the 10-90% rise time of the correction loop, fixed to
    0.35/loop_bandwidth. path_angle = |temporal_angle - spatial_angle| is
    the residual angular offset that contributes to anisoplanatism.
    """

    separation: float
    loop_bandwidth: float
    response_time: float
    spatial_angle: float
    temporal_angle: float
    path_angle: float

    def __post_init__(self):
        if self.separation < 0:
            raise ValueError("separation must be >= 0")
        if not self.loop_bandwidth > 0:
            raise ValueError("loop_bandwidth must be > 0")


def slant_range(geom: PassGeometry) -> float:
    """Line-of-sight distance (m) from ground station to platform."""
    h, big_r = geom.h_alt, geom.earth_radius
    cosz = math.cos(geom.zenith)
    return math.sqrt(h * h + 2.0 * h * big_r + big_r * big_r * cosz * cosz) - big_r * cosz


def slew_rate(geom: PassGeometry) -> float:
    """Apparent angular speed (rad/s) of the platform across the sky."""
    h = geom.h_alt
    cosz = math.cos(geom.zenith)
    return math.sqrt(geom.earth_mu / (h * h * (h + geom.earth_radius))) * cosz * cosz


def beam_angles(
    geom: PassGeometry, separation: float, loop_bandwidth: float = 500.0
) -> BeamGeometry:
    """Derive the anisoplanatism angles for a given beacon separation.

    separation = 0 is the single-path baseline: no spatial offset, so the
    whole angle swept during the loop response contributes.
    """
    if separation < 0:
        raise ValueError("separation must be >= 0")
    if not loop_bandwidth > 0:
        raise ValueError("loop_bandwidth must be > 0")
    z = slant_range(geom)
    response_time = 0.35 / loop_bandwidth
    spatial = separation / z
    temporal = slew_rate(geom) * response_time
    return BeamGeometry(
        separation=separation,
        loop_bandwidth=loop_bandwidth,
        response_time=response_time,
        spatial_angle=spatial,
        temporal_angle=temporal,
        path_angle=abs(temporal - spatial),
    )


def zero_crossing_zenith(
    geom: PassGeometry,
    separation: float,
    loop_bandwidth: float = 500.0,
    tol: float = 1e-10,
) -> Optional[float]:
    """Zenith angle in [0, 75 deg] where temporal and spatial angles cancel.

    The zenith field of geom is ignored; the search runs over the whole
    usable pass. Returns None when the two angles never cross (always true
    for separation = 0, where the difference stays strictly positive).
    """
    if separation <= 0:
        return None

    def offset(zenith: float) -> float:
        g = dataclasses.replace(geom, zenith=zenith)
        angles = beam_angles(g, separation, loop_bandwidth)
        return angles.temporal_angle - angles.spatial_angle

    try:
        return find_zero(offset, 0.0, MAX_ZENITH, tol)
    except BracketError:
        return None
