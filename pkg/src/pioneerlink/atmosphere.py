"""Turbulence and wind profiles with their integrated seeing parameters.

The vertical structure-parameter profile is Hufnagel-Valley with a
configurable pseudo-wind, the wind profile is Bufton plus an apparent-motion
term, and the three classic integrals (coherence diameter, isoplanatic
angle, turbulence bandwidth frequency) are evaluated over altitude from the
ground to the platform altitude.

All quantities are SI throughout: metres, seconds, radians.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass

import numpy as np

from .quadrature import QuadratureSpec, integrate

# Profile integrands have magnitudes around 1e-12 or far below, so the
# absolute floor must sit well under any value we ever produce or the
# integrator would stop on the absolute test at huge relative error.
PROFILE_SPEC = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-35, max_subdivisions=2000)


@dataclass(frozen=True)
class AtmosphereModel:
    """Constants of the turbulence and wind profiles.

    pseudo_wind tunes the high-altitude turbulence strength, ground_wind is
    the Bufton floor, hv_coefficients are the three structure-profile term
    weights, and troposphere_top caps the air-density integral used by the
    chromatic error budget.
    """

    pseudo_wind: float = 21.0
    ground_wind: float = 5.0
    hv_coefficients: tuple[float, float, float] = (0.00594, 2.7e-16, 1.7e-14)
    troposphere_top: float = 1.1e4

    def __post_init__(self):
        if not self.pseudo_wind > 0:
            raise ValueError("pseudo_wind must be > 0")
        if self.ground_wind < 0:
            raise ValueError("ground_wind must be >= 0")
        if len(self.hv_coefficients) != 3 or any(c < 0 for c in self.hv_coefficients):
            raise ValueError("hv_coefficients must be three non-negative numbers")


DEFAULT_ATMOSPHERE = AtmosphereModel()


def cn2(h, model: AtmosphereModel = DEFAULT_ATMOSPHERE):
    """Refractive-index structure parameter at altitude h (m), in m^(-2/3).

    Accepts a scalar or an ndarray. Negative altitude is a domain error.
    """
    h_arr = np.asarray(h, dtype=float)
    if np.any(h_arr < 0):
        raise ValueError("altitude must be >= 0")
    a, b, c = model.hv_coefficients
    w = model.pseudo_wind
    val = (
        a * (w / 27.0) ** 2 * (h_arr * 1e-5) ** 10 * np.exp(-h_arr / 1000.0)
        + b * np.exp(-h_arr / 1500.0)
        + c * np.exp(-h_arr / 100.0)
    )
    return float(val) if np.isscalar(h) else val


def wind_natural(h, model: AtmosphereModel = DEFAULT_ATMOSPHERE):
    """Bufton wind speed (m/s) at altitude h: ground floor plus jet-stream bump."""
    h_arr = np.asarray(h, dtype=float)
    val = model.ground_wind + 30.0 * np.exp(-(((h_arr - 9400.0) / 4800.0) ** 2))
    return float(val) if np.isscalar(h) else val


def wind_total(h, slew: float, model: AtmosphereModel = DEFAULT_ATMOSPHERE):
    """Wind speed plus the apparent component slew*h from tracking the platform.

    Scalar addition: for a fast-moving source the apparent term dominates,
    so vector orientation of the natural wind is ignored.
    """
    if slew < 0:
        raise ValueError("slew must be >= 0")
    h_arr = np.asarray(h, dtype=float)
    val = wind_natural(h_arr, model) + slew * h_arr
    return float(val) if np.isscalar(h) else val


def _check_seeing_domain(lam: float, zenith: float, h_alt: float) -> None:
    if not lam > 0:
        raise ValueError("wavelength must be > 0")
    if not 0 <= zenith < math.pi / 2:
        raise ValueError("zenith angle must lie in [0, pi/2)")
    if not h_alt > 0:
        raise ValueError("platform altitude must be > 0")


@functools.lru_cache(maxsize=256)
def _moment_integral(power: float, h_alt: float, model: AtmosphereModel) -> float:
    """Integral of h^power * Cn2(h) over [0, h_alt]."""
    if power == 0.0:
        f = lambda h: cn2(h, model)
    else:
        f = lambda h: h**power * cn2(h, model)
    return integrate(f, 0.0, h_alt, PROFILE_SPEC)


@functools.lru_cache(maxsize=1024)
def _wind_weighted_integral(slew: float, h_alt: float, model: AtmosphereModel) -> float:
    """Integral of v_total(h)^(5/3) * Cn2(h) over [0, h_alt]."""
    f = lambda h: wind_total(h, slew, model) ** (5.0 / 3.0) * cn2(h, model)
    return integrate(f, 0.0, h_alt, PROFILE_SPEC)


def fried_r0(
    lam: float,
    zenith: float,
    h_alt: float,
    model: AtmosphereModel = DEFAULT_ATMOSPHERE,
) -> float:
    """Atmospheric coherence diameter (m) for wavelength lam at the given zenith angle."""
    _check_seeing_domain(lam, zenith, h_alt)
    k = 2.0 * math.pi / lam
    sec = 1.0 / math.cos(zenith)
    moment = _moment_integral(0.0, h_alt, model)
    return (0.423 * k * k * sec * moment) ** (-3.0 / 5.0)


def isoplanatic_angle(
    lam: float,
    zenith: float,
    h_alt: float,
    model: AtmosphereModel = DEFAULT_ATMOSPHERE,
) -> float:
    """Isoplanatic angle (rad): angular radius of a common turbulence column."""
    _check_seeing_domain(lam, zenith, h_alt)
    k = 2.0 * math.pi / lam
    sec = 1.0 / math.cos(zenith)
    moment = _moment_integral(5.0 / 3.0, h_alt, model)
    return (2.913 * k * k * sec ** (8.0 / 3.0) * moment) ** (-3.0 / 5.0)


def greenwood_frequency(
    lam: float,
    zenith: float,
    h_alt: float,
    slew: float,
    model: AtmosphereModel = DEFAULT_ATMOSPHERE,
) -> float:
    """Characteristic temporal frequency (Hz) of the turbulence seen while slewing."""
    _check_seeing_domain(lam, zenith, h_alt)
    if slew < 0:
        raise ValueError("slew must be >= 0")
    k = 2.0 * math.pi / lam
    sec = 1.0 / math.cos(zenith)
    moment = _wind_weighted_integral(slew, h_alt, model)
    return (0.1022 * k * k * sec * moment) ** (3.0 / 5.0)
