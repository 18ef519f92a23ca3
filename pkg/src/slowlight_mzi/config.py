"""Scenario configuration: a flat INI file with one section per domain type.

Sections and keys mirror the dataclass fields exactly:

    [run]        seed
    [laser]      wavelength, output_power, cavity_length,
                 output_coupler_reflectivity, measured_linewidth
    [geometry]   intrinsic_imbalance_length, medium_length
    [medium]     group_index, phase_index, transmission
    [detection]  quantum_efficiency, measurement_time, measurement_bandwidth
    [eit_scheme] pump_rabi_13, ..., ground_exchange_rate, pump_detuning,
                 probe_detuning, excited_splitting, wavelength
    [eit_cell]   temperature, length, slice_count, atom_mass, number_density,
                 velocity_points, velocity_span
    [noise]      rms_voltage, term_count, noise_bandwidth, amplifier_gain,
                 mixer_frequency, mixer_normalization, mixer_scale,
                 lpf_bandwidth, dc_blocker_loading, seed

Unknown sections or keys are rejected.  Every section is optional; omitted
keys keep the defaults of `default_scenario`.
"""

import configparser
import dataclasses
from dataclasses import dataclass, replace

from .eit import CellConfig, FourLevelScheme, REFERENCE_SUSCEPTIBILITY_SCALE, reference_scheme
from .interferometer import DispersiveMedium, InterferometerGeometry
from .laser import LaserSpec
from .noise import NoiseChainConfig
from .sensitivity import DetectionSpec


class ConfigError(ValueError):
    """Raised for unknown keys/sections or invalid values in a config file."""


@dataclass(frozen=True)
class ScenarioConfig:
    laser: LaserSpec
    geometry: InterferometerGeometry
    medium: DispersiveMedium
    detection: DetectionSpec
    scheme: FourLevelScheme
    cell: CellConfig
    noise_chain: NoiseChainConfig
    seed: int = 0


def default_scenario() -> ScenarioConfig:
    """Defaults matching the slow-light demonstration's probe-laser setup."""
    return ScenarioConfig(
        laser=LaserSpec(
            wavelength=795e-9, output_power=1.6e-3, cavity_length=0.70,
            output_coupler_reflectivity=0.9, measured_linewidth=2.4e6,
        ),
        geometry=InterferometerGeometry.from_time_constants(1.56e-9, 0.27e-9),
        medium=DispersiveMedium.vacuum(),
        # effective quantum efficiency of the attenuated detection path
        detection=DetectionSpec(quantum_efficiency=1.63e-4, measurement_time=1.0 / 20.7),
        scheme=reference_scheme(),
        cell=CellConfig(number_density=REFERENCE_SUSCEPTIBILITY_SCALE),
        noise_chain=NoiseChainConfig(),
        seed=0,
    )


_SECTION_FIELDS = {
    "laser": ("laser", LaserSpec),
    "geometry": ("geometry", InterferometerGeometry),
    "medium": ("medium", DispersiveMedium),
    "detection": ("detection", DetectionSpec),
    "eit_scheme": ("scheme", FourLevelScheme),
    "eit_cell": ("cell", CellConfig),
    "noise": ("noise_chain", NoiseChainConfig),
}

_INT_FIELDS = {"slice_count", "velocity_points", "term_count", "seed"}
_BOOL_FIELDS = {"dc_blocker_loading"}


def _convert(name: str, raw: str):
    try:
        if name in _INT_FIELDS:
            return int(raw)
        if name in _BOOL_FIELDS:
            lowered = raw.strip().lower()
            if lowered in ("true", "1", "yes"):
                return True
            if lowered in ("false", "0", "no"):
                return False
            raise ValueError(raw)
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"cannot parse value for {name!r}: {raw!r}") from exc


def load_config(path: str) -> ScenarioConfig:
    """Parse an INI scenario file against `default_scenario` defaults."""
    parser = configparser.ConfigParser()
    read = parser.read(path)
    if not read:
        raise ConfigError(f"config file not found or unreadable: {path}")

    scenario = default_scenario()
    for section in parser.sections():
        if section == "run":
            for key, raw in parser.items(section):
                if key != "seed":
                    raise ConfigError(f"unknown key {key!r} in section [run]")
                scenario = replace(scenario, seed=_convert("seed", raw))
            continue
        if section not in _SECTION_FIELDS:
            raise ConfigError(f"unknown section [{section}]")
        attr, cls = _SECTION_FIELDS[section]
        known = {f.name for f in dataclasses.fields(cls)}
        overrides = {}
        for key, raw in parser.items(section):
            if key not in known:
                raise ConfigError(f"unknown key {key!r} in section [{section}]")
            overrides[key] = _convert(key, raw)
        try:
            scenario = replace(scenario, **{attr: replace(getattr(scenario, attr), **overrides)})
        except ValueError as exc:
            raise ConfigError(f"invalid [{section}] configuration: {exc}") from exc
    return scenario
