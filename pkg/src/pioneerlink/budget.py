"""Wavefront-variance budget and Strehl ratios for each multiplexing scheme.

Five error terms are modeled: correction-loop bandwidth lag, anisoplanatism
from the beacon/signal angular offset, and three chromatic terms that only
matter when beacon and signal wavelengths differ (diffraction-pattern
mismatch, compensator path-length error, dispersion-induced path split).

Scheme composition:
  SpatialPioneer  bandwidth + anisoplanatism with the displaced beacon
  PureTDM         bandwidth + anisoplanatism with zero displacement
  PureWDM         PureTDM terms + all three chromatic terms
  WdmPioneer      SpatialPioneer terms + all three chromatic terms
  NoAO            no correction at all; aberrated Strehl directly from D/r0
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass
from enum import Enum
from typing import Optional

from .atmosphere import (
    DEFAULT_ATMOSPHERE,
    AtmosphereModel,
    _moment_integral,
    _wind_weighted_integral,
    cn2,
    fried_r0,
    isoplanatic_angle,
)
from .geometry import PassGeometry, beam_angles, slant_range, slew_rate
from .quadrature import QuadratureSpec, bessel_j1, integrate

# Air-density altitude model: altitude(density) = DENSITY_A - DENSITY_B * rho^DENSITY_P,
# valid through the troposphere; inverted analytically below.
DENSITY_A = 44330.8
DENSITY_B = 42266.5
DENSITY_P = 0.234969

# integrands here live at magnitudes 1e-30..1e-4, so keep the absolute
# floor far below anything we produce and let the relative test govern
_BAND_SPEC = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-20, max_subdivisions=2000)
_DIFFRACTION_SPEC = QuadratureSpec(rel_tol=1e-9, abs_tol=1e-28, max_subdivisions=2000)
_TROPO_SPEC = QuadratureSpec(rel_tol=1e-10, abs_tol=1e-30, max_subdivisions=2000)


class Scheme(Enum):
    """Beacon/signal multiplexing architectures under comparison."""

    SPATIAL_PIONEER = "SpatialPioneer"
    PURE_TDM = "PureTDM"
    PURE_WDM = "PureWDM"
    WDM_PIONEER = "WdmPioneer"
    NO_AO = "NoAO"

    @property
    def uses_pioneer(self) -> bool:
        """True when the beacon is physically displaced ahead of the signal."""
        return self in (Scheme.SPATIAL_PIONEER, Scheme.WDM_PIONEER)

    @property
    def dual_wavelength(self) -> bool:
        """True when beacon and signal ride on different wavelengths."""
        return self in (Scheme.PURE_WDM, Scheme.WDM_PIONEER)


@dataclass(frozen=True)
class AoSystemConfig:
    """Optical and correction-loop parameters of one system under study.

    beacon_wavelength defaults to 808 nm for the dual-wavelength schemes
    and to the signal wavelength otherwise (single-wavelength multiplexing
    shares the beam).
    """

    scheme: Scheme
    signal_wavelength: float = 780e-9
    beacon_wavelength: Optional[float] = None
    separation: float = 0.0
    loop_bandwidth: float = 500.0
    aperture: float = 1.03
    obscuration: float = 0.36 / 1.03
    focal_length: float = 8.0
    transmitter_aperture: float = 0.05

    def __post_init__(self):
        if self.beacon_wavelength is None:
            default = 808e-9 if self.scheme.dual_wavelength else self.signal_wavelength
            object.__setattr__(self, "beacon_wavelength", default)
        if not self.signal_wavelength > 0 or not self.beacon_wavelength > 0:
            raise ValueError("wavelengths must be > 0")
        if self.separation < 0:
            raise ValueError("separation must be >= 0")
        if not self.loop_bandwidth > 0:
            raise ValueError("loop_bandwidth must be > 0")
        if not self.aperture > 0 or not self.focal_length > 0:
            raise ValueError("aperture and focal_length must be > 0")
        if not self.transmitter_aperture > 0:
            raise ValueError("transmitter_aperture must be > 0")
        if not 0 <= self.obscuration < 1:
            raise ValueError("obscuration must lie in [0, 1)")


@dataclass(frozen=True)
class VarianceBudget:
    """The five wavefront variance terms (rad^2), their sum, and the Strehl ratio.

    For the no-correction scheme all terms are zero and strehl comes from
    the aberrated-aperture formula instead of exp(-total).
    """

    band: float
    path: float
    diffraction: float
    chromatic: float
    chromatic_aniso: float
    total: float
    strehl: float

    def __post_init__(self):
        terms = (self.band, self.path, self.diffraction, self.chromatic,
                 self.chromatic_aniso, self.total)
        if any(t < 0 for t in terms):
            raise ValueError("variance terms must be >= 0")
        if not 0 < self.strehl <= 1:
            raise ValueError("strehl must lie in (0, 1]")


def refractive_index_air(lam: float) -> float:
    """Phase refractive index of standard dry air (15 C, 101325 Pa, 450 ppm CO2).

    Two-resonance dispersion fit; valid for wavelengths between 300 nm and
    1700 nm, a domain error outside.
    """
    if not 300e-9 <= lam <= 1700e-9:
        raise ValueError("wavelength outside the 300-1700 nm validity range")
    sigma2 = (1.0 / (lam * 1e6)) ** 2  # inverse micrometers, squared
    return 1.0 + (
        5792105.0 / (238.0185 - sigma2) + 167917.0 / (57.362 - sigma2)
    ) * 1e-8


def air_density(h: float) -> float:
    """Tropospheric air density (kg/m^3) from the inverted altitude model."""
    if h < 0 or h > DENSITY_A:
        raise ValueError("altitude outside the density model domain")
    return ((DENSITY_A - h) / DENSITY_B) ** (1.0 / DENSITY_P)


def density_ratio_integral(h: float, model: AtmosphereModel = DEFAULT_ATMOSPHERE) -> float:
    """Integral from 0 to h of air density normalized to its sea-level value.

    Closed form of the antiderivative; the density is treated as zero above
    the troposphere top, so the integral saturates there.
    """
    if h < 0:
        raise ValueError("altitude must be >= 0")
    upper = min(h, model.troposphere_top)
    c = 1.0 / DENSITY_P
    rho0 = (DENSITY_A / DENSITY_B) ** c
    # antiderivative of ((A - z)/B)^c is -B/(c+1) * ((A - z)/B)^(c+1)
    prim = lambda z: -DENSITY_B / (c + 1.0) * ((DENSITY_A - z) / DENSITY_B) ** (c + 1.0)
    return (prim(upper) - prim(0.0)) / rho0


@functools.lru_cache(maxsize=64)
def _loop_rejection_integral(loop_bandwidth: float) -> float:
    """Integral over frequency of the closed-loop residual response times f^(-8/3).

    The residual |1 - H|^2 of a single-pole loop is f^2/(f^2 + fc^2); the
    turbulence spectrum supplies the f^(-8/3) weight. Evaluated numerically;
    the closed form pi * fc^(-5/3) is kept out of the code path so tests can
    use it as an independent check.
    """
    fc = loop_bandwidth
    f = lambda x: x ** (-2.0 / 3.0) / (x * x + fc * fc)
    return integrate(f, 0.0, math.inf, _BAND_SPEC)


def sigma_band(
    cfg: AoSystemConfig,
    geom: PassGeometry,
    model: AtmosphereModel = DEFAULT_ATMOSPHERE,
) -> float:
    """Wavefront variance (rad^2) left by the finite correction-loop bandwidth.

    Identical for every correcting scheme: the loop must follow the beacon
    regardless of how beacon and signal are multiplexed.
    """
    k = 2.0 * math.pi / cfg.signal_wavelength
    sec = 1.0 / math.cos(geom.zenith)
    upper = slant_range(geom) * math.cos(geom.zenith)
    path = sec * _wind_weighted_integral(slew_rate(geom), upper, model)
    return 0.0326 * k * k * _loop_rejection_integral(cfg.loop_bandwidth) * path


def sigma_path(path_angle: float, iso_angle: float) -> float:
    """Anisoplanatism variance (rad^2) for a given beacon/signal angular offset."""
    if not iso_angle > 0:
        raise ValueError("isoplanatic angle must be > 0")
    if path_angle < 0:
        raise ValueError("path angle must be >= 0")
    return (path_angle / iso_angle) ** (5.0 / 3.0)


def sigma_chromatic_path(cfg: AoSystemConfig, r0: float) -> float:
    """Variance (rad^2) from the compensator being exact at one wavelength only."""
    if not r0 > 0:
        raise ValueError("r0 must be > 0")
    lam, lam_b = cfg.signal_wavelength, cfg.beacon_wavelength
    if lam == lam_b:
        return 0.0
    eps = (lam_b / lam) * (
        (refractive_index_air(lam) - refractive_index_air(lam_b))
        / (refractive_index_air(lam_b) - 1.0)
    )
    return 1.03 * (cfg.aperture / r0) ** (5.0 / 3.0) * eps * eps


@functools.lru_cache(maxsize=64)
def _tropo_weighted_integral(h_alt: float, model: AtmosphereModel) -> float:
    """Integral of density_ratio_integral(h)^(5/3) * Cn2(h) over [0, h_alt]."""
    top = min(model.troposphere_top, h_alt)
    f = lambda h: density_ratio_integral(h, model) ** (5.0 / 3.0) * cn2(h, model)
    value = integrate(f, 0.0, top, _TROPO_SPEC)
    if h_alt > top:
        # above the troposphere the weight is frozen at its saturated value
        saturated = density_ratio_integral(top, model) ** (5.0 / 3.0)
        value += saturated * (
            _moment_integral(0.0, h_alt, model) - _moment_integral(0.0, top, model)
        )
    return value


def sigma_chromatic_aniso(
    cfg: AoSystemConfig,
    geom: PassGeometry,
    model: AtmosphereModel = DEFAULT_ATMOSPHERE,
) -> float:
    """Variance (rad^2) from dispersion separating beacon and signal paths."""
    lam, lam_b = cfg.signal_wavelength, cfg.beacon_wavelength
    if lam == lam_b or geom.zenith == 0.0:
        return 0.0
    delta_n = abs(refractive_index_air(lam) - refractive_index_air(lam_b))
    k_b = 2.0 * math.pi / lam_b
    sec = 1.0 / math.cos(geom.zenith)
    weight = 2.91 * k_b * k_b * sec * _tropo_weighted_integral(geom.h_alt, model)
    lever = math.sin(geom.zenith) * delta_n * sec * sec
    return lever ** (5.0 / 3.0) * weight


def _profile_cos_transform(nu: float, model: AtmosphereModel) -> float:
    """Cosine transform of the turbulence profile: integral of Cn2(h)*cos(nu*h).

    Exact in closed form because every profile term is h^n * exp(-h/s):
    the upper limit is taken to infinity, which differs from any slant-path
    altitude cap by an exponentially negligible tail.
    """
    a, b, c = model.hv_coefficients
    w = model.pseudo_wind
    # term 1: a*(w/27)^2 * 1e-50 * h^10 * exp(-h/1000); the transform of
    # h^10 * exp(-beta*h) * cos(nu*h) is Re[10! / (beta - i*nu)^11]
    beta = complex(1e-3, -nu)
    b2 = beta * beta
    b4 = b2 * b2
    b8 = b4 * b4
    term1 = a * (w / 27.0) ** 2 * 1e-50 * (3628800.0 / (b8 * b2 * beta)).real
    # term 2 and 3: pure exponentials with scale heights 1500 m and 100 m
    term2 = b * 1500.0 / (1.0 + (nu * 1500.0) ** 2)
    term3 = c * 100.0 / (1.0 + (nu * 100.0) ** 2)
    return term1 + term2 + term3


def _sigma_diffraction_details(
    lam: float,
    lam_b: float,
    aperture: float,
    geom: PassGeometry,
    model: AtmosphereModel,
) -> tuple[float, float, float]:
    """Diffraction-mismatch variance with its spatial-frequency cutoff and tail bound.

    The propagation-distance integral is done analytically per spatial
    frequency via the profile cosine transform; only the spatial-frequency
    integral is numerical. The cutoff doubles until the analytic tail bound
    drops below 0.1% of the accumulated value.
    """
    if lam == lam_b:
        return 0.0, 0.0, 0.0
    k = 2.0 * math.pi / lam
    k_b = 2.0 * math.pi / lam_b
    sec = 1.0 / math.cos(geom.zenith)
    d = aperture

    half_inv_kb = sec / k_b   # nu for the doubled beacon-phase cosine, per K^2
    half_inv_k = sec / k
    diff_inv = 0.5 * sec * abs(1.0 / k_b - 1.0 / k)
    sum_inv = 0.5 * sec * (1.0 / k_b + 1.0 / k)
    c0 = _profile_cos_transform(0.0, model)

    def integrand(big_k: float) -> float:
        if big_k == 0.0:
            return 0.0
        u = 0.5 * big_k * d
        j = bessel_j1(u)
        aperture_filter = 1.0 - (2.0 * j / u) ** 2
        kk = big_k * big_k
        # squared cosine difference integrated over the path, term by term
        g = (
            c0
            + 0.5 * _profile_cos_transform(kk * half_inv_kb, model)
            + 0.5 * _profile_cos_transform(kk * half_inv_k, model)
            - _profile_cos_transform(kk * diff_inv, model)
            - _profile_cos_transform(kk * sum_inv, model)
        )
        return big_k ** (-8.0 / 3.0) * aperture_filter * g

    prefactor = (4.08 / math.pi) * k * k * sec
    k_cut = 2000.0 / d
    value = prefactor * integrate(integrand, 0.0, k_cut, _DIFFRACTION_SPEC)
    # |g| <= 4*c0 and the aperture filter <= 1, so the discarded tail is
    # bounded by the bare power law
    tail = prefactor * 4.0 * c0 * (3.0 / 5.0) * k_cut ** (-5.0 / 3.0)
    while tail > 1e-3 * abs(value):
        extension = prefactor * integrate(integrand, k_cut, 2.0 * k_cut, _DIFFRACTION_SPEC)
        value += extension
        k_cut *= 2.0
        tail = prefactor * 4.0 * c0 * (3.0 / 5.0) * k_cut ** (-5.0 / 3.0)
    return value, k_cut, tail


@functools.lru_cache(maxsize=2048)
def _sigma_diffraction_cached(
    lam: float,
    lam_b: float,
    aperture: float,
    geom: PassGeometry,
    model: AtmosphereModel,
) -> float:
    return _sigma_diffraction_details(lam, lam_b, aperture, geom, model)[0]


def sigma_diffraction(
    cfg: AoSystemConfig,
    geom: PassGeometry,
    model: AtmosphereModel = DEFAULT_ATMOSPHERE,
) -> float:
    """Variance (rad^2) from wavelength-dependent diffraction of the shared pupil."""
    return _sigma_diffraction_cached(
        cfg.signal_wavelength, cfg.beacon_wavelength, cfg.aperture, geom, model
    )


def strehl_ao(total_variance: float) -> float:
    """Strehl ratio of a corrected beam from its residual wavefront variance."""
    if total_variance < 0:
        raise ValueError("variance must be >= 0")
    return math.exp(-total_variance)


def strehl_no_ao(aperture: float, r0: float) -> float:
    """Strehl ratio of an uncorrected aperture much larger than the coherence scale."""
    if not aperture > 0 or not r0 > 0:
        raise ValueError("aperture and r0 must be > 0")
    return (1.0 + (aperture / r0) ** (5.0 / 3.0)) ** (-6.0 / 5.0)


def compose_budget(
    cfg: AoSystemConfig,
    geom: PassGeometry,
    model: AtmosphereModel = DEFAULT_ATMOSPHERE,
) -> VarianceBudget:
    """Assemble the scheme-appropriate variance terms and the resulting Strehl."""
    lam = cfg.signal_wavelength
    r0 = fried_r0(lam, geom.zenith, geom.h_alt, model)

    if cfg.scheme is Scheme.NO_AO:
        return VarianceBudget(
            band=0.0, path=0.0, diffraction=0.0, chromatic=0.0,
            chromatic_aniso=0.0, total=0.0,
            strehl=strehl_no_ao(cfg.aperture, r0),
        )

    band = sigma_band(cfg, geom, model)
    effective_sep = cfg.separation if cfg.scheme.uses_pioneer else 0.0
    angles = beam_angles(geom, effective_sep, cfg.loop_bandwidth)
    iso = isoplanatic_angle(lam, geom.zenith, geom.h_alt, model)
    path = sigma_path(angles.path_angle, iso)

    if cfg.scheme.dual_wavelength:
        diffraction = sigma_diffraction(cfg, geom, model)
        chromatic = sigma_chromatic_path(cfg, r0)
        aniso = sigma_chromatic_aniso(cfg, geom, model)
    else:
        diffraction = chromatic = aniso = 0.0

    total = band + path + diffraction + chromatic + aniso
    return VarianceBudget(
        band=band, path=path, diffraction=diffraction, chromatic=chromatic,
        chromatic_aniso=aniso, total=total, strehl=strehl_ao(total),
    )
