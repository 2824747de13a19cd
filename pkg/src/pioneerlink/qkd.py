"""Decoy-state BB84 with a weak coherent source: gains, QBER, and key rate.

The estimator is the standard vacuum + weak-decoy bound: the decoy gain and
error rate bound the single-photon yield and error from below/above, and the
asymptotic secret fraction follows from the usual one-way postprocessing
formula. Negative yield estimates are clamped to zero (collapsed estimator,
zero rate) instead of raising, since deeply lossy links do hit that regime.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .channel import DETECTOR_QE, RECEIVER_SPLIT, SPECTRAL_FILTER


@dataclass(frozen=True)
class QkdParams:
    """Source, detector, and postprocessing parameters.

    Intensities are mean photon numbers per pulse. sky_radiance is the
    daytime background level feeding the sky-noise count; the dark rate is
    per detector (four detectors total in the background-yield formula).
    """

    signal_intensity: float = 0.7
    decoy_intensity: float = 0.1
    source_rate: float = 1e7
    sky_radiance: float = 25.0
    dark_rate: float = 10.0
    misalignment_error: float = 0.01
    noise_error: float = 0.5
    filter_bandwidth: float = 0.2e-9
    window: float = 1e-9
    error_correction_efficiency: float = 1.22
    basis_match: float = 0.5

    def __post_init__(self):
        if not 0 < self.decoy_intensity < self.signal_intensity:
            raise ValueError(
                "decoy-state estimator requires nu < mu with both positive"
            )
        if not 0 < self.basis_match <= 1:
            raise ValueError("basis_match must lie in (0, 1]")
        if not 0 <= self.misalignment_error <= 1:
            raise ValueError("misalignment_error must lie in [0, 1]")
        if not 0 <= self.noise_error <= 1:
            raise ValueError("noise_error must lie in [0, 1]")
        for name in ("source_rate", "sky_radiance", "dark_rate",
                     "filter_bandwidth", "window"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be >= 0")
        if not self.error_correction_efficiency >= 1:
            raise ValueError("error_correction_efficiency must be >= 1")


@dataclass(frozen=True)
class DecoyEstimate:
    """Single-photon yield and error bounds, with a collapse flag.

    collapsed means the raw yield estimate was non-positive; the clamped
    values then force a zero key rate.
    """

    single_yield: float
    single_error: float
    collapsed: bool


@dataclass(frozen=True)
class QkdResult:
    """Full protocol evaluation at one channel operating point."""

    background_yield: float
    gain_signal: float
    gain_decoy: float
    qber_signal: float
    qber_decoy: float
    single_yield: float
    single_error: float
    collapsed: bool
    secret_fraction: float
    rate_hz: float


def background_yield(
    n_sky: float,
    n_cross: float,
    params: QkdParams,
    detection_chain: float = SPECTRAL_FILTER * RECEIVER_SPLIT * DETECTOR_QE,
) -> float:
    """Probability of a background click per window: filtered photons plus darks."""
    if n_sky < 0 or n_cross < 0:
        raise ValueError("photon counts must be >= 0")
    return (n_sky + n_cross) * detection_chain + 4.0 * params.dark_rate * params.window


def gain(eta: float, intensity: float, y0: float) -> float:
    """Click probability per pulse at the given mean photon number."""
    if not 0 <= eta <= 1:
        raise ValueError("eta must lie in [0, 1]")
    if intensity < 0 or y0 < 0:
        raise ValueError("intensity and y0 must be >= 0")
    return y0 + 1.0 - math.exp(-eta * intensity)


def qber(eta: float, intensity: float, y0: float, params: QkdParams) -> float:
    """Error rate of the sifted key at the given mean photon number."""
    q = gain(eta, intensity, y0)
    if q <= 0:
        raise ValueError("gain is zero; QBER undefined")
    signal_part = 1.0 - math.exp(-eta * intensity)
    return (params.noise_error * y0 + params.misalignment_error * signal_part) / q


def decoy_estimates(
    gain_signal: float,
    gain_decoy: float,
    qber_decoy: float,
    y0: float,
    params: QkdParams,
) -> DecoyEstimate:
    """Bound the single-photon yield and error from the two measured gains."""
    mu, nu = params.signal_intensity, params.decoy_intensity
    y1_raw = (mu / (mu * nu - nu * nu)) * (
        gain_decoy * math.exp(nu)
        - gain_signal * math.exp(mu) * nu * nu / (mu * mu)
        - (mu * mu - nu * nu) / (mu * mu) * y0
    )
    if y1_raw <= 0:
        # no usable single-photon signal; force the rate to zero downstream
        return DecoyEstimate(single_yield=0.0, single_error=0.5, collapsed=True)
    y1 = min(y1_raw, 1.0)
    e1_raw = (gain_decoy * qber_decoy * math.exp(nu) - params.noise_error * y0) / (
        y1 * nu
    )
    e1 = min(max(e1_raw, 0.0), 0.5)
    return DecoyEstimate(single_yield=y1, single_error=e1, collapsed=False)


def binary_entropy(x: float) -> float:
    """Binary entropy in bits; 0 at both endpoints by continuity."""
    if not 0 <= x <= 1:
        raise ValueError("binary entropy argument must lie in [0, 1]")
    if x == 0.0 or x == 1.0:
        return 0.0
    return -x * math.log2(x) - (1.0 - x) * math.log2(1.0 - x)


def key_rate(
    gain_signal: float,
    qber_signal: float,
    estimate: DecoyEstimate,
    params: QkdParams,
) -> tuple[float, float]:
    """Asymptotic secret fraction per pulse and the resulting rate in bits/s."""
    mu = params.signal_intensity
    privacy = (
        math.exp(-mu)
        * mu
        * estimate.single_yield
        * (1.0 - binary_entropy(estimate.single_error))
    )
    correction = (
        params.error_correction_efficiency
        * gain_signal
        * binary_entropy(qber_signal)
    )
    fraction = max(0.0, params.basis_match * (privacy - correction))
    return fraction, params.source_rate * fraction


def evaluate_qkd(
    eta: float, n_sky: float, n_cross: float, params: QkdParams
) -> QkdResult:
    """Run the whole protocol stack at one total channel efficiency."""
    y0 = background_yield(n_sky, n_cross, params)
    mu, nu = params.signal_intensity, params.decoy_intensity
    q_mu = gain(eta, mu, y0)
    q_nu = gain(eta, nu, y0)
    e_mu = qber(eta, mu, y0, params)
    e_nu = qber(eta, nu, y0, params)
    estimate = decoy_estimates(q_mu, q_nu, e_nu, y0, params)
    fraction, rate = key_rate(q_mu, e_mu, estimate, params)
    return QkdResult(
        background_yield=y0,
        gain_signal=q_mu,
        gain_decoy=q_nu,
        qber_signal=e_mu,
        qber_decoy=e_nu,
        single_yield=estimate.single_yield,
        single_error=estimate.single_error,
        collapsed=estimate.collapsed,
        secret_fraction=fraction,
        rate_hz=rate,
    )
