"""Scenario files, parameter sweeps, CSV output, and improvement reports.

A scenario is a flat `key = value` text file with dotted section prefixes
(atmosphere., optics., qkd., sweep., output.). Omitted keys fall back to the
built-in defaults. The sweep evaluates the full pipeline over the cartesian
grid (scheme, altitude, separation, zenith) in a fixed order, so two runs of
the same scenario produce byte-identical CSV files regardless of the thread
count used.
"""

from __future__ import annotations

import concurrent.futures
import csv
import io
import math
import os
from dataclasses import dataclass
from typing import Callable, Optional, Sequence, Union

from .atmosphere import AtmosphereModel
from .budget import AoSystemConfig, Scheme, compose_budget
from .channel import (
    ReceiverOptics,
    beacon_crosstalk_photons,
    eta_total,
    sky_noise_photons,
)
from .geometry import PassGeometry, beam_angles
from .qkd import QkdParams, evaluate_qkd


class ScenarioError(Exception):
    """A scenario file failed to parse or violated a parameter invariant."""


MAX_ZENITH_DEG = 75.0


@dataclass(frozen=True)
class Scenario:
    """Everything one simulation run needs: physics parameters plus sweep axes."""

    atmosphere: AtmosphereModel = AtmosphereModel()
    signal_wavelength: float = 780e-9
    beacon_wavelength: Optional[float] = None
    loop_bandwidth: float = 500.0
    aperture: float = 1.03
    obscuration: float = 0.36 / 1.03
    focal_length: float = 8.0
    transmitter_aperture: float = 0.05
    field_stop_diameter: Optional[float] = None
    qkd: QkdParams = QkdParams()
    zenith_start_deg: float = 0.0
    zenith_stop_deg: float = 75.0
    zenith_step_deg: float = 1.0
    separations: tuple[float, ...] = (1.0, 2.0, 3.0, 4.0, 5.0)
    altitudes: tuple[float, ...] = (400e3, 800e3)
    schemes: tuple[Scheme, ...] = (
        Scheme.SPATIAL_PIONEER,
        Scheme.PURE_TDM,
        Scheme.PURE_WDM,
        Scheme.WDM_PIONEER,
        Scheme.NO_AO,
    )
    preset: Optional[str] = None

    def __post_init__(self):
        if not 0 <= self.zenith_start_deg <= self.zenith_stop_deg <= MAX_ZENITH_DEG:
            raise ValueError(
                "zenith sweep must satisfy 0 <= start <= stop <= 75 degrees"
            )
        if not self.zenith_step_deg > 0:
            raise ValueError("zenith step must be > 0")
        if any(s < 0 for s in self.separations):
            raise ValueError("separations must be >= 0")
        if any(h <= 0 for h in self.altitudes):
            raise ValueError("altitudes must be > 0")
        if not self.separations or not self.altitudes or not self.schemes:
            raise ValueError("sweep axes must be non-empty")
        if self.preset is not None and self.preset not in PRESET_COLUMNS:
            raise ValueError(
                f"unknown preset '{self.preset}'; expected one of "
                + ", ".join(sorted(PRESET_COLUMNS))
            )

    def zenith_grid_deg(self) -> list[float]:
        n = int(math.floor(
            (self.zenith_stop_deg - self.zenith_start_deg) / self.zenith_step_deg
            + 1e-9
        )) + 1
        return [self.zenith_start_deg + i * self.zenith_step_deg for i in range(n)]


@dataclass(frozen=True)
class SweepRow:
    """One fully evaluated grid point; status is 'ok' or the failure text."""

    scheme: str
    h_alt: float
    separation: float
    zenith_deg: float
    theta_path: float
    sigma2_band: float
    sigma2_path: float
    sigma2_diff: float
    sigma2_chrom: float
    sigma2_aniso: float
    sigma2_total: float
    strehl: float
    eta_trans: float
    eta_rec: float
    eta_spec: float
    eta_det: float
    eta_geo: float
    eta_fs: float
    eta_total: float
    y0: float
    q_mu: float
    e_mu: float
    y1: float
    e1: float
    secret_fraction: float
    rate_hz: float
    status: str = "ok"


# CSV columns in emission order; "L" is the separation axis
COLUMNS: tuple[str, ...] = (
    "scheme", "h_alt", "L", "zenith_deg", "theta_path",
    "sigma2_band", "sigma2_path", "sigma2_diff", "sigma2_chrom",
    "sigma2_aniso", "sigma2_total", "strehl",
    "eta_trans", "eta_rec", "eta_spec", "eta_det", "eta_geo", "eta_fs",
    "eta_total",
    "y0", "q_mu", "e_mu", "y1", "e1", "secret_fraction", "rate_hz", "status",
)

_FIELD_FOR_COLUMN = {
    "L": "separation",
    **{c: c for c in COLUMNS if c != "L"},
}

# presets mirror the published sweep figures: one response column each
PRESET_COLUMNS: dict[str, tuple[str, ...]] = {
    "fig2": ("scheme", "h_alt", "L", "zenith_deg", "theta_path"),
    "fig3": ("scheme", "h_alt", "L", "zenith_deg", "sigma2_path"),
    "fig4": ("scheme", "h_alt", "L", "zenith_deg", "strehl"),
    "fig5": ("scheme", "h_alt", "L", "zenith_deg", "eta_total"),
    "fig6": ("scheme", "h_alt", "L", "zenith_deg", "e_mu"),
    "fig7": ("scheme", "h_alt", "L", "zenith_deg", "rate_hz"),
    "fig8": ("scheme", "h_alt", "L", "zenith_deg", "strehl"),
    "fig9": ("scheme", "h_alt", "L", "zenith_deg", "eta_total"),
    "fig10": ("scheme", "h_alt", "L", "zenith_deg", "e_mu"),
    "fig11": ("scheme", "h_alt", "L", "zenith_deg", "rate_hz"),
}


# every accepted scenario key with its parser
def _float(text: str) -> float:
    return float(text)


def _float_list(text: str) -> tuple[float, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of numbers")
    return tuple(float(p) for p in parts)


def _scheme_list(text: str) -> tuple[Scheme, ...]:
    parts = [p.strip() for p in text.split(",") if p.strip()]
    if not parts:
        raise ValueError("expected a comma-separated list of scheme names")
    out = []
    for p in parts:
        try:
            out.append(Scheme(p))
        except ValueError:
            valid = ", ".join(s.value for s in Scheme)
            raise ValueError(f"unknown scheme '{p}'; expected one of {valid}")
    return tuple(out)


def _string(text: str) -> str:
    return text


_KEY_PARSERS: dict[str, Callable[[str], object]] = {
    "atmosphere.pseudo_wind": _float,
    "atmosphere.ground_wind": _float,
    "atmosphere.hv_coefficients": _float_list,
    "atmosphere.troposphere_top": _float,
    "optics.signal_wavelength": _float,
    "optics.beacon_wavelength": _float,
    "optics.loop_bandwidth": _float,
    "optics.aperture": _float,
    "optics.obscuration": _float,
    "optics.focal_length": _float,
    "optics.transmitter_aperture": _float,
    "optics.field_stop_diameter": _float,
    "qkd.signal_intensity": _float,
    "qkd.decoy_intensity": _float,
    "qkd.source_rate": _float,
    "qkd.sky_radiance": _float,
    "qkd.dark_rate": _float,
    "qkd.misalignment_error": _float,
    "qkd.noise_error": _float,
    "qkd.filter_bandwidth": _float,
    "qkd.window": _float,
    "qkd.error_correction_efficiency": _float,
    "qkd.basis_match": _float,
    "sweep.zenith_start_deg": _float,
    "sweep.zenith_stop_deg": _float,
    "sweep.zenith_step_deg": _float,
    "sweep.separations": _float_list,
    "sweep.altitudes": _float_list,
    "sweep.schemes": _scheme_list,
    "output.preset": _string,
}


def load_scenario(path: str) -> Scenario:
    """Parse and validate a scenario file; any problem names the key and line."""
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario file {path}: {exc}")

    values: dict[str, object] = {}
    where: dict[str, int] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise ScenarioError(
                f"line {lineno}: expected 'key = value', got '{line}'"
            )
        key, _, text = line.partition("=")
        key, text = key.strip(), text.strip()
        if key not in _KEY_PARSERS:
            raise ScenarioError(f"line {lineno}: unknown key '{key}'")
        if key in values:
            raise ScenarioError(
                f"line {lineno}: key '{key}' already set on line {where[key]}"
            )
        try:
            values[key] = _KEY_PARSERS[key](text)
        except ValueError as exc:
            raise ScenarioError(f"line {lineno}: key '{key}': {exc}")
        where[key] = lineno

    def _lines_of(prefix: str) -> str:
        hits = sorted(n for k, n in where.items() if k.startswith(prefix))
        return ", ".join(str(n) for n in hits) if hits else "defaults"

    hv = values.get("atmosphere.hv_coefficients")
    if hv is not None and len(hv) != 3:
        raise ScenarioError(
            f"line {where['atmosphere.hv_coefficients']}: "
            "key 'atmosphere.hv_coefficients': expected exactly three numbers"
        )

    try:
        atmosphere = AtmosphereModel(
            pseudo_wind=values.get("atmosphere.pseudo_wind", 21.0),
            ground_wind=values.get("atmosphere.ground_wind", 5.0),
            hv_coefficients=tuple(
                values.get("atmosphere.hv_coefficients", (0.00594, 2.7e-16, 1.7e-14))
            ),
            troposphere_top=values.get("atmosphere.troposphere_top", 1.1e4),
        )
    except ValueError as exc:
        raise ScenarioError(f"atmosphere.* (lines {_lines_of('atmosphere.')}): {exc}")

    try:
        qkd = QkdParams(
            signal_intensity=values.get("qkd.signal_intensity", 0.7),
            decoy_intensity=values.get("qkd.decoy_intensity", 0.1),
            source_rate=values.get("qkd.source_rate", 1e7),
            sky_radiance=values.get("qkd.sky_radiance", 25.0),
            dark_rate=values.get("qkd.dark_rate", 10.0),
            misalignment_error=values.get("qkd.misalignment_error", 0.01),
            noise_error=values.get("qkd.noise_error", 0.5),
            filter_bandwidth=values.get("qkd.filter_bandwidth", 0.2e-9),
            window=values.get("qkd.window", 1e-9),
            error_correction_efficiency=values.get(
                "qkd.error_correction_efficiency", 1.22
            ),
            basis_match=values.get("qkd.basis_match", 0.5),
        )
    except ValueError as exc:
        raise ScenarioError(f"qkd.* (lines {_lines_of('qkd.')}): {exc}")

    defaults = Scenario()
    try:
        return Scenario(
            atmosphere=atmosphere,
            signal_wavelength=values.get(
                "optics.signal_wavelength", defaults.signal_wavelength
            ),
            beacon_wavelength=values.get("optics.beacon_wavelength"),
            loop_bandwidth=values.get("optics.loop_bandwidth", defaults.loop_bandwidth),
            aperture=values.get("optics.aperture", defaults.aperture),
            obscuration=values.get("optics.obscuration", defaults.obscuration),
            focal_length=values.get("optics.focal_length", defaults.focal_length),
            transmitter_aperture=values.get(
                "optics.transmitter_aperture", defaults.transmitter_aperture
            ),
            field_stop_diameter=values.get("optics.field_stop_diameter"),
            qkd=qkd,
            zenith_start_deg=values.get("sweep.zenith_start_deg", 0.0),
            zenith_stop_deg=values.get("sweep.zenith_stop_deg", 75.0),
            zenith_step_deg=values.get("sweep.zenith_step_deg", 1.0),
            separations=values.get("sweep.separations", defaults.separations),
            altitudes=values.get("sweep.altitudes", defaults.altitudes),
            schemes=values.get("sweep.schemes", defaults.schemes),
            preset=values.get("output.preset"),
        )
    except ValueError as exc:
        raise ScenarioError(f"sweep/optics/output (lines {_lines_of('')}): {exc}")


def _receiver_optics(scenario: Scenario) -> ReceiverOptics:
    return ReceiverOptics(
        aperture=scenario.aperture,
        obscuration=scenario.obscuration,
        focal_length=scenario.focal_length,
        signal_wavelength=scenario.signal_wavelength,
        field_stop_diameter=scenario.field_stop_diameter,
    )


def _evaluate_point(
    scenario: Scenario,
    scheme: Scheme,
    h_alt: float,
    separation: float,
    zenith_deg: float,
) -> SweepRow:
    nan = float("nan")
    try:
        cfg = AoSystemConfig(
            scheme=scheme,
            signal_wavelength=scenario.signal_wavelength,
            beacon_wavelength=scenario.beacon_wavelength,
            separation=separation,
            loop_bandwidth=scenario.loop_bandwidth,
            aperture=scenario.aperture,
            obscuration=scenario.obscuration,
            focal_length=scenario.focal_length,
            transmitter_aperture=scenario.transmitter_aperture,
        )
        geom = PassGeometry(h_alt=h_alt, zenith=math.radians(zenith_deg))
        budget = compose_budget(cfg, geom, scenario.atmosphere)
        effective_sep = separation if scheme.uses_pioneer else 0.0
        angles = beam_angles(geom, effective_sep, scenario.loop_bandwidth)
        breakdown = eta_total(cfg, geom, budget.strehl)
        optics = _receiver_optics(scenario)
        n_sky = sky_noise_photons(
            scenario.qkd.sky_radiance,
            optics,
            scenario.signal_wavelength,
            scenario.qkd.filter_bandwidth,
            scenario.qkd.window,
        )
        if scheme is Scheme.SPATIAL_PIONEER:
            n_cross = beacon_crosstalk_photons(optics, scenario.signal_wavelength)
        else:
            n_cross = 0.0
        result = evaluate_qkd(breakdown.total, n_sky, n_cross, scenario.qkd)
        return SweepRow(
            scheme=scheme.value,
            h_alt=h_alt,
            separation=separation,
            zenith_deg=zenith_deg,
            theta_path=angles.path_angle,
            sigma2_band=budget.band,
            sigma2_path=budget.path,
            sigma2_diff=budget.diffraction,
            sigma2_chrom=budget.chromatic,
            sigma2_aniso=budget.chromatic_aniso,
            sigma2_total=budget.total,
            strehl=budget.strehl,
            eta_trans=breakdown.transmission,
            eta_rec=breakdown.receiver_split,
            eta_spec=breakdown.spectral_filter,
            eta_det=breakdown.detector,
            eta_geo=breakdown.beam_capture,
            eta_fs=breakdown.field_stop,
            eta_total=breakdown.total,
            y0=result.background_yield,
            q_mu=result.gain_signal,
            e_mu=result.qber_signal,
            y1=result.single_yield,
            e1=result.single_error,
            secret_fraction=result.secret_fraction,
            rate_hz=result.rate_hz,
        )
    except Exception as exc:  # failed points still produce a row
        return SweepRow(
            scheme=scheme.value, h_alt=h_alt, separation=separation,
            zenith_deg=zenith_deg, theta_path=nan,
            sigma2_band=nan, sigma2_path=nan, sigma2_diff=nan,
            sigma2_chrom=nan, sigma2_aniso=nan, sigma2_total=nan, strehl=nan,
            eta_trans=nan, eta_rec=nan, eta_spec=nan, eta_det=nan,
            eta_geo=nan, eta_fs=nan, eta_total=nan,
            y0=nan, q_mu=nan, e_mu=nan, y1=nan, e1=nan,
            secret_fraction=nan, rate_hz=nan,
            status=f"{type(exc).__name__}: {exc}",
        )


def run_sweep(scenario: Scenario, threads: Optional[int] = None) -> list[SweepRow]:
    """Evaluate every grid point; row order is fixed regardless of threads."""
    grid = [
        (scheme, h_alt, sep, zen)
        for scheme in sorted(set(scenario.schemes), key=lambda s: s.value)
        for h_alt in sorted(set(scenario.altitudes))
        for sep in sorted(set(scenario.separations))
        for zen in scenario.zenith_grid_deg()
    ]
    workers = threads if threads else (os.cpu_count() or 1)
    if workers <= 1:
        return [_evaluate_point(scenario, *point) for point in grid]
    with concurrent.futures.ThreadPoolExecutor(max_workers=workers) as pool:
        return list(
            pool.map(lambda point: _evaluate_point(scenario, *point), grid)
        )


@dataclass(frozen=True)
class ImprovementRow:
    """Worst-case rate improvement of target over baseline for one (h_alt, L)."""

    baseline: str
    target: str
    h_alt: float
    separation: float
    zenith_max_deg: float
    improvement_pct: Optional[float]
    note: str = ""


def improvement_report(
    rows: Sequence[SweepRow],
    baseline_scheme: Scheme,
    target_scheme: Scheme,
    zenith_max_deg: float,
) -> list[ImprovementRow]:
    """Minimum percentage rate improvement over the zenith range, per (h_alt, L).

    Zenith points where the baseline rate is zero cannot produce a finite
    percentage; if no point in range has a nonzero baseline the result is
    flagged 'undefined (baseline zero)'.
    """
    baseline_rates: dict[tuple[float, float, float], float] = {}
    target_rates: dict[tuple[float, float, float], float] = {}
    for row in rows:
        if row.status != "ok" or row.zenith_deg > zenith_max_deg + 1e-9:
            continue
        key = (row.h_alt, row.separation, row.zenith_deg)
        if row.scheme == baseline_scheme.value:
            baseline_rates[key] = row.rate_hz
        elif row.scheme == target_scheme.value:
            target_rates[key] = row.rate_hz

    pairs = sorted(set(
        (h, sep) for (h, sep, _z) in target_rates
        if any(k[:2] == (h, sep) for k in baseline_rates)
    ))
    if not pairs:
        raise ValueError(
            "no overlapping grid points for the requested schemes and zenith range"
        )

    report = []
    for h_alt, sep in pairs:
        improvements = []
        for (h, s, z), target in target_rates.items():
            if (h, s) != (h_alt, sep):
                continue
            base = baseline_rates.get((h, s, z))
            if base is None or base <= 0:
                continue
            improvements.append(100.0 * (target - base) / base)
        if improvements:
            report.append(ImprovementRow(
                baseline=baseline_scheme.value, target=target_scheme.value,
                h_alt=h_alt, separation=sep, zenith_max_deg=zenith_max_deg,
                improvement_pct=min(improvements),
            ))
        else:
            report.append(ImprovementRow(
                baseline=baseline_scheme.value, target=target_scheme.value,
                h_alt=h_alt, separation=sep, zenith_max_deg=zenith_max_deg,
                improvement_pct=None, note="undefined (baseline zero)",
            ))
    return report


def _format_value(value: object) -> str:
    if isinstance(value, str):
        return value
    return format(value, ".9g")


def emit_csv(
    rows: Sequence[SweepRow],
    destination: Union[str, io.TextIOBase],
    columns: Optional[Sequence[str]] = None,
) -> None:
    """Write rows as CSV: header, 9 significant digits, LF line endings."""
    cols = tuple(columns) if columns is not None else COLUMNS
    unknown = [c for c in cols if c not in _FIELD_FOR_COLUMN]
    if unknown:
        raise ValueError(f"unknown columns requested: {unknown}")

    def _write(fh) -> None:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(cols)
        for row in rows:
            writer.writerow(
                _format_value(getattr(row, _FIELD_FOR_COLUMN[c])) for c in cols
            )

    if isinstance(destination, (str, os.PathLike)):
        try:
            with open(destination, "w", encoding="utf-8", newline="") as fh:
                _write(fh)
        except OSError as exc:
            raise ScenarioError(f"cannot write CSV to {destination}: {exc}")
    else:
        _write(destination)


def parse_csv(path: str) -> tuple[list[str], list[dict[str, str]]]:
    """Read back an emitted CSV as its header plus one dict per row."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        return header, [dict(zip(header, row)) for row in reader]


def format_report_text(report: Sequence[ImprovementRow]) -> str:
    """Aligned text table of an improvement report."""
    headers = ("baseline", "target", "h_alt", "L", "zenith_max_deg", "improvement")
    body = []
    for r in report:
        improvement = (
            f"{r.improvement_pct:+.2f}%" if r.improvement_pct is not None else r.note
        )
        body.append((
            r.baseline, r.target, _format_value(r.h_alt),
            _format_value(r.separation), _format_value(r.zenith_max_deg),
            improvement,
        ))
    widths = [
        max(len(headers[i]), *(len(row[i]) for row in body)) if body else len(headers[i])
        for i in range(len(headers))
    ]
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(headers)).rstrip()
    ]
    for row in body:
        lines.append(
            "  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)).rstrip()
        )
    return "\n".join(lines) + "\n"


def default_scenario_text() -> str:
    """The effective defaults, rendered in the scenario file format."""
    s = Scenario()
    q = s.qkd
    a = s.atmosphere
    hv = ", ".join(_format_value(c) for c in a.hv_coefficients)
    lines = [
        "# pioneerlink scenario defaults",
        f"atmosphere.pseudo_wind = {_format_value(a.pseudo_wind)}",
        f"atmosphere.ground_wind = {_format_value(a.ground_wind)}",
        f"atmosphere.hv_coefficients = {hv}",
        f"atmosphere.troposphere_top = {_format_value(a.troposphere_top)}",
        f"optics.signal_wavelength = {_format_value(s.signal_wavelength)}",
        "# optics.beacon_wavelength defaults per scheme: the signal wavelength",
        "# for single-wavelength schemes, 808e-9 for the dual-wavelength ones",
        f"optics.loop_bandwidth = {_format_value(s.loop_bandwidth)}",
        f"optics.aperture = {_format_value(s.aperture)}",
        f"optics.obscuration = {_format_value(s.obscuration)}",
        f"optics.focal_length = {_format_value(s.focal_length)}",
        f"optics.transmitter_aperture = {_format_value(s.transmitter_aperture)}",
        "# optics.field_stop_diameter defaults to the first dark ring",
        f"qkd.signal_intensity = {_format_value(q.signal_intensity)}",
        f"qkd.decoy_intensity = {_format_value(q.decoy_intensity)}",
        f"qkd.source_rate = {_format_value(q.source_rate)}",
        f"qkd.sky_radiance = {_format_value(q.sky_radiance)}",
        f"qkd.dark_rate = {_format_value(q.dark_rate)}",
        f"qkd.misalignment_error = {_format_value(q.misalignment_error)}",
        f"qkd.noise_error = {_format_value(q.noise_error)}",
        f"qkd.filter_bandwidth = {_format_value(q.filter_bandwidth)}",
        f"qkd.window = {_format_value(q.window)}",
        f"qkd.error_correction_efficiency = "
        f"{_format_value(q.error_correction_efficiency)}",
        f"qkd.basis_match = {_format_value(q.basis_match)}",
        f"sweep.zenith_start_deg = {_format_value(s.zenith_start_deg)}",
        f"sweep.zenith_stop_deg = {_format_value(s.zenith_stop_deg)}",
        f"sweep.zenith_step_deg = {_format_value(s.zenith_step_deg)}",
        "sweep.separations = " + ", ".join(_format_value(x) for x in s.separations),
        "sweep.altitudes = " + ", ".join(_format_value(x) for x in s.altitudes),
        "sweep.schemes = " + ", ".join(sch.value for sch in s.schemes),
        "# output.preset: fig2..fig11 column subsets; omitted = all columns",
    ]
    return "\n".join(lines) + "\n"
