"""Deterministic link-budget simulator for ground-to-LEO optical QKD.

Computes adaptive-optics wavefront-error budgets, end-to-end channel
efficiencies, and decoy-state BB84 secret-key rates, and compares
beacon/signal multiplexing architectures over full satellite passes.
"""

from .atmosphere import (
    DEFAULT_ATMOSPHERE,
    AtmosphereModel,
    cn2,
    fried_r0,
    greenwood_frequency,
    isoplanatic_angle,
    wind_natural,
    wind_total,
)
from .budget import (
    AoSystemConfig,
    Scheme,
    VarianceBudget,
    air_density,
    compose_budget,
    density_ratio_integral,
    refractive_index_air,
    sigma_band,
    sigma_chromatic_aniso,
    sigma_chromatic_path,
    sigma_diffraction,
    sigma_path,
    strehl_ao,
    strehl_no_ao,
)
from .channel import (
    EfficiencyBreakdown,
    ReceiverOptics,
    beacon_crosstalk_photons,
    crosstalk_fraction,
    eta_geo,
    eta_total,
    eta_trans,
    night_scatter_probability,
    sky_noise_photons,
)
from .geometry import (
    BeamGeometry,
    PassGeometry,
    beam_angles,
    slant_range,
    slew_rate,
    zero_crossing_zenith,
)
from .qkd import (
    DecoyEstimate,
    QkdParams,
    QkdResult,
    background_yield,
    binary_entropy,
    decoy_estimates,
    evaluate_qkd,
    gain,
    key_rate,
    qber,
)
from .quadrature import (
    BracketError,
    QuadratureError,
    QuadratureSpec,
    bessel_j1,
    find_zero,
    integrate,
)
from .scenario import (
    COLUMNS,
    PRESET_COLUMNS,
    ImprovementRow,
    Scenario,
    ScenarioError,
    SweepRow,
    emit_csv,
    format_report_text,
    improvement_report,
    load_scenario,
    parse_csv,
    run_sweep,
)

__version__ = "0.1.0"
