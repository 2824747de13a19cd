"""Channel efficiency chain, beacon cross-talk, and background photon counts.

The end-to-end efficiency is a product of six factors: atmospheric
transmission, the receiver-optics split, the spectral filter, detector
quantum efficiency, aperture capture of the spread Gaussian beam, and the
field-stop pass fraction (proportional to the Strehl ratio). Cross-talk is
the energy fraction of the beacon's obscured-aperture diffraction pattern
falling inside the signal field stop.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

from .budget import AoSystemConfig
from .geometry import MAX_ZENITH, PassGeometry, slant_range
from .quadrature import QuadratureSpec, bessel_j1, integrate

PLANCK = 6.62607015e-34
LIGHT_SPEED = 299792458.0

# fixed detection-chain factors
RECEIVER_SPLIT = 0.5
SPECTRAL_FILTER = 0.9
DETECTOR_QE = 0.8

# atmospheric transmission anchors of the linear model
TRANS_AT_ZENITH = 0.92
TRANS_AT_MAX = 0.74

# fraction of a diffraction-limited spot passing the matched field stop
FIELD_STOP_PASS = 0.84

# night-sky radiance standing in for beacon scattering, W m^-2 sr^-1 um^-1,
# with the wide-open spectral window used for that estimate
NIGHT_RADIANCE = 1.5e-5
NIGHT_BANDWIDTH = 1e-6
NIGHT_WINDOW = 1e-9

_CROSSTALK_SPEC = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-30, max_subdivisions=2000)


@dataclass(frozen=True)
class ReceiverOptics:
    """Receiving telescope parameters and the derived field-stop geometry.

    The field stop defaults to the first dark ring of the signal's
    diffraction pattern; pass field_stop_diameter to override.
    """

    aperture: float = 1.03
    obscuration: float = 0.36 / 1.03
    focal_length: float = 8.0
    signal_wavelength: float = 780e-9
    field_stop_diameter: Optional[float] = None

    def __post_init__(self):
        if not self.aperture > 0 or not self.focal_length > 0:
            raise ValueError("aperture and focal_length must be > 0")
        if not 0 <= self.obscuration < 1:
            raise ValueError("obscuration must lie in [0, 1)")
        if not self.signal_wavelength > 0:
            raise ValueError("signal_wavelength must be > 0")
        if self.field_stop_diameter is None:
            derived = 2.44 * self.signal_wavelength * self.focal_length / self.aperture
            object.__setattr__(self, "field_stop_diameter", derived)
        if not self.field_stop_diameter > 0:
            raise ValueError("field_stop_diameter must be > 0")

    @classmethod
    def from_config(cls, cfg: AoSystemConfig) -> "ReceiverOptics":
        return cls(
            aperture=cfg.aperture,
            obscuration=cfg.obscuration,
            focal_length=cfg.focal_length,
            signal_wavelength=cfg.signal_wavelength,
        )

    @property
    def field_of_view(self) -> float:
        """Full angular field of view (rad) set by the field stop."""
        return self.field_stop_diameter / self.focal_length

    @property
    def solid_angle_fov(self) -> float:
        """Solid angle (sr) of the field of view."""
        return math.pi * self.field_of_view**2 / 4.0


@dataclass(frozen=True)
class EfficiencyBreakdown:
    """The six efficiency factors and their product."""

    transmission: float
    receiver_split: float
    spectral_filter: float
    detector: float
    beam_capture: float
    field_stop: float
    total: float

    def __post_init__(self):
        factors = (self.transmission, self.receiver_split, self.spectral_filter,
                   self.detector, self.beam_capture, self.field_stop)
        if any(not 0 <= x <= 1 for x in factors):
            raise ValueError("every efficiency factor must lie in [0, 1]")
        product = math.prod(factors)
        if self.total != product:
            raise ValueError("total must equal the product of the factors")


def eta_geo(
    lam: float,
    geom: PassGeometry,
    receiver_aperture: float = 1.03,
    transmitter_aperture: float = 0.05,
) -> float:
    """Fraction of the spread Gaussian beam captured by the receiving aperture.

    The transmitted beam waist is taken as 70% of the transmitter radius
    (a truncated-Gaussian rule of thumb) and spreads over the slant range.
    """
    if not lam > 0 or not receiver_aperture > 0 or not transmitter_aperture > 0:
        raise ValueError("wavelength and apertures must be > 0")
    waist = 0.7 * transmitter_aperture / 2.0
    rayleigh = math.pi * waist * waist / lam
    z = slant_range(geom)
    spot_sq = waist * waist * (1.0 + (z / rayleigh) ** 2)
    return 1.0 - math.exp(-receiver_aperture**2 / (2.0 * spot_sq))


def eta_trans(zenith: float) -> float:
    """Atmospheric transmission, linear between the zenith and 75-degree anchors."""
    if not 0 <= zenith <= MAX_ZENITH:
        raise ValueError("zenith must lie in [0, 75 deg] for the transmission model")
    return TRANS_AT_ZENITH + (TRANS_AT_MAX - TRANS_AT_ZENITH) * zenith / MAX_ZENITH


def eta_total(
    cfg: AoSystemConfig,
    geom: PassGeometry,
    strehl: float,
    receiver_split: float = RECEIVER_SPLIT,
    spectral_filter: float = SPECTRAL_FILTER,
    detector: float = DETECTOR_QE,
) -> EfficiencyBreakdown:
    """Assemble the six-factor efficiency chain for one look geometry."""
    if not 0 < strehl <= 1:
        raise ValueError("strehl must lie in (0, 1]")
    transmission = eta_trans(geom.zenith)
    capture = eta_geo(
        cfg.signal_wavelength, geom, cfg.aperture, cfg.transmitter_aperture
    )
    field_stop = FIELD_STOP_PASS * strehl
    factors = (transmission, receiver_split, spectral_filter, detector,
               capture, field_stop)
    return EfficiencyBreakdown(
        transmission=transmission,
        receiver_split=receiver_split,
        spectral_filter=spectral_filter,
        detector=detector,
        beam_capture=capture,
        field_stop=field_stop,
        total=math.prod(factors),
    )


def _pattern_ratio(x: float, scale: float, obscuration: float) -> float:
    """Beacon image intensity at radius x, normalized by the on-axis prefactor.

    The pattern of an annular pupil: ((J1(u) - b*J1(b*u)) / u)^2 with
    u = x / scale. The u -> 0 limit is ((1 - b^2)/2)^2.
    """
    u = x / scale
    if u < 1e-9:
        half = (1.0 - obscuration * obscuration) / 2.0
        return half * half
    j = bessel_j1(u) - obscuration * bessel_j1(obscuration * u)
    return (j / u) ** 2


def crosstalk_fraction(
    optics: ReceiverOptics, lam: float, image_offset: float
) -> float:
    """Weighted area (m^2) of the beacon diffraction pattern inside the field stop.

    The field-stop disk sits image_offset away from the beacon image center;
    the integral runs in polar coordinates about the beacon center, weighting
    each radius by the arc length falling inside the stop.
    """
    if image_offset < 0:
        raise ValueError("image_offset must be >= 0")
    if not lam > 0:
        raise ValueError("wavelength must be > 0")
    scale = optics.focal_length * lam / (math.pi * optics.aperture)
    stop_radius = optics.field_stop_diameter / 2.0
    d = image_offset
    b = optics.obscuration

    ratio = lambda x: _pattern_ratio(x, scale, b)

    if d == 0.0:
        return integrate(
            lambda x: 2.0 * math.pi * x * ratio(x), 0.0, stop_radius, _CROSSTALK_SPEC
        )

    total = 0.0
    if d < stop_radius:
        # radii fully enclosed by the stop
        total += integrate(
            lambda x: 2.0 * math.pi * x * ratio(x), 0.0, stop_radius - d,
            _CROSSTALK_SPEC,
        )

    def arc_weighted(x: float) -> float:
        cos_arg = (x * x + d * d - stop_radius * stop_radius) / (2.0 * x * d)
        cos_arg = min(1.0, max(-1.0, cos_arg))
        return 2.0 * x * math.acos(cos_arg) * ratio(x)

    total += integrate(
        arc_weighted, abs(stop_radius - d), stop_radius + d, _CROSSTALK_SPEC
    )
    return total


def sky_noise_photons(
    radiance: float,
    optics: ReceiverOptics,
    lam: float,
    bandwidth: float,
    window: float,
) -> float:
    """Expected background photons per detection window from diffuse sky radiance.

    radiance is in W m^-2 sr^-1 um^-1; bandwidth is the spectral filter
    width in metres (converted internally to the radiance's micrometre
    convention); window is the detection gate in seconds.
    """
    if radiance < 0 or bandwidth < 0 or window < 0 or not lam > 0:
        raise ValueError("radiance, bandwidth and window must be >= 0, lam > 0")
    return (
        radiance
        * optics.solid_angle_fov
        * math.pi
        * optics.aperture**2
        * lam
        * (bandwidth * 1e6)
        * window
        / (4.0 * PLANCK * LIGHT_SPEED)
    )


def night_scatter_probability(optics: ReceiverOptics, lam: float) -> float:
    """Per-window probability of detecting a beacon photon scattered by clear sky.

    Uses the night-sky radiance as a proxy for the beacon's scattered light,
    a wide-open spectral window (scatter shares the signal wavelength, so
    the filter cannot reject it), and the detection-chain efficiencies.
    """
    raw = sky_noise_photons(NIGHT_RADIANCE, optics, lam, NIGHT_BANDWIDTH, NIGHT_WINDOW)
    return raw * SPECTRAL_FILTER * RECEIVER_SPLIT * DETECTOR_QE


def beacon_crosstalk_photons(
    optics: ReceiverOptics, lam: float, safety_factor: float = 100.0
) -> float:
    """Conservative beacon cross-talk count: the scatter estimate times a margin."""
    return safety_factor * night_scatter_probability(optics, lam)
