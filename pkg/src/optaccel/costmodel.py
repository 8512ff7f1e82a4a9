"""Latency and energy bookkeeping for the digital <-> optical pipeline.

Configuration files are INI-style key/value files with the unit in the key
suffix (``_s`` seconds, ``_j`` joules, ``_m`` meters)::

    [hardware]
    input_prep_s = 0.0154
    slm_write_s = 2.618
    propagation_distance_m = 0.3   ; or optical_propagation_s
    camera_read_s = 2.57011
    digital_post_s = 0.00549

    [software]
    total_s = 0.219

    [energy]            ; optional
    e_dac_per_sample_j = ...
"""

import configparser
import math
from dataclasses import asdict, dataclass, fields
from importlib import resources
from pathlib import Path

from .errors import InvalidInputError, ParseError

SPEED_OF_LIGHT = 2.998e8  # m/s
DIGITAL_MAC_ENERGY_J = 300e-15

# Share of system energy spent moving data in modern computers. This is a cited
# external measurement carried as a reference constant; nothing here derives it.
SYSTEM_DATA_MOVEMENT_ENERGY_FRACTION = 0.627

STAGES = ("input_prep_s", "slm_write_s", "optical_propagation_s", "camera_read_s", "digital_post_s")
MOVEMENT_STAGES = ("slm_write_s", "camera_read_s")


def propagation_time(distance_m):
    """Time of flight of light over ``distance_m``."""
    if distance_m < 0:
        raise InvalidInputError("distance must be non-negative")
    return distance_m / SPEED_OF_LIGHT


@dataclass(frozen=True)
class StageTiming:
    input_prep_s: float = 0.0
    slm_write_s: float = 0.0
    optical_propagation_s: float = 0.0
    camera_read_s: float = 0.0
    digital_post_s: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (math.isfinite(v) and v >= 0):
                raise InvalidInputError(f"{f.name} must be finite and >= 0, got {v}")

    @property
    def total_s(self):
        return sum(getattr(self, s) for s in STAGES)

    def scaled(self, k):
        return StageTiming(**{s: getattr(self, s) * k for s in STAGES})


@dataclass(frozen=True)
class EnergyModel:
    e_dac_per_sample: float
    e_adc_per_sample: float
    e_mac_digital: float = DIGITAL_MAC_ENERGY_J
    e_mac_analog: float = 0.0

    def __post_init__(self):
        for f in fields(self):
            v = getattr(self, f.name)
            if not (math.isfinite(v) and v >= 0):
                raise InvalidInputError(f"{f.name} must be finite and >= 0, got {v}")


@dataclass(frozen=True)
class PipelineBreakdown:
    total_s: float
    per_stage_fraction: dict
    data_movement_fraction: float


def pipeline_time(stages):
    """Total latency, per-stage shares, and the data-movement share.

    Data movement is SLM programming plus camera readout.
    """
    total = stages.total_s
    if total <= 0:
        raise InvalidInputError("all stages are zero; fractions are undefined")
    fractions = {s: getattr(stages, s) / total for s in STAGES}
    movement = sum(getattr(stages, s) for s in MOVEMENT_STAGES) / total
    return PipelineBreakdown(total_s=total, per_stage_fraction=fractions, data_movement_fraction=movement)


def hardware_vs_software_ratio(hardware, software_total_s):
    """How many times slower the hardware path is than software (>1 = slower)."""
    if not software_total_s > 0:
        raise InvalidInputError("software time must be positive")
    return hardware.total_s / software_total_s


def energy_advantage(model, macs, dac_samples, adc_samples):
    """Digital MAC energy over analog energy including conversions.

    ``math.inf`` when the analog side costs nothing.
    """
    if macs < 1:
        raise InvalidInputError("macs must be >= 1")
    if dac_samples < 0 or adc_samples < 0:
        raise InvalidInputError("sample counts must be non-negative")
    digital = macs * model.e_mac_digital
    analog = (
        dac_samples * model.e_dac_per_sample
        + adc_samples * model.e_adc_per_sample
        + macs * model.e_mac_analog
    )
    if analog == 0:
        return math.inf
    return digital / analog


@dataclass(frozen=True)
class CostConfig:
    hardware: StageTiming = None
    software_total_s: float = None
    energy: EnergyModel = None
    workload: dict = None

    def to_dict(self):
        out = {}
        if self.hardware is not None:
            out["hardware"] = asdict(self.hardware)
            out["software_total_s"] = self.software_total_s
        if self.energy is not None:
            out["energy"] = asdict(self.energy)
        if self.workload is not None:
            out["workload"] = dict(self.workload)
        return out


_ENERGY_KEYS = {
    "e_dac_per_sample_j": "e_dac_per_sample",
    "e_adc_per_sample_j": "e_adc_per_sample",
    "e_mac_digital_j": "e_mac_digital",
    "e_mac_analog_j": "e_mac_analog",
}
_WORKLOAD_KEYS = ("macs", "dac_samples", "adc_samples")


def _float(section, key, path):
    raw = section[key]
    try:
        return float(raw)
    except ValueError:
        raise ParseError(f"[{section.name}] {key} = {raw!r} is not a number", path=path) from None


def bundled_config_path(name):
    """Path of a config shipped inside the package, e.g. ``prototype.cfg``."""
    return resources.files("optaccel").joinpath("config").joinpath(name)


def load_config(path):
    """Read a cost-model config. Bare names fall back to the bundled configs."""
    p = Path(path)
    if not p.exists():
        bundled = bundled_config_path(p.name)
        if not bundled.is_file():
            raise InvalidInputError(f"config not found: {path}")
        text, p = bundled.read_text(), Path(str(bundled))
    else:
        text = p.read_text()

    parser = configparser.ConfigParser(inline_comment_prefixes=(";", "#"))
    try:
        parser.read_string(text, source=str(p))
    except configparser.Error as exc:
        raise ParseError(str(exc), path=str(p)) from None

    has_timing = parser.has_section("hardware") or parser.has_section("software")
    if not has_timing and not parser.has_section("energy"):
        raise ParseError("config needs [hardware] + [software] sections, an [energy] section, or both", path=str(p))
    hardware = software = None
    if has_timing:
        hardware, software = _timing(parser, p)

    energy = workload = None
    if parser.has_section("energy"):
        sec = parser["energy"]
        kwargs = {attr: _float(sec, key, p) for key, attr in _ENERGY_KEYS.items() if key in sec}
        try:
            energy = EnergyModel(**kwargs)
        except TypeError:
            raise ParseError("[energy] needs e_dac_per_sample_j and e_adc_per_sample_j", path=str(p)) from None
    if parser.has_section("workload"):
        sec = parser["workload"]
        workload = {k: int(_float(sec, k, p)) for k in _WORKLOAD_KEYS if k in sec}
    return CostConfig(hardware=hardware, software_total_s=software, energy=energy, workload=workload)


def _timing(parser, p):
    if not parser.has_section("hardware") or not parser.has_section("software"):
        raise ParseError("[hardware] and [software] must appear together", path=str(p))
    hw = parser["hardware"]
    known = set(STAGES) | {"propagation_distance_m"}
    unknown = set(hw) - known
    if unknown:
        raise ParseError(f"unknown [hardware] keys: {sorted(unknown)}", path=str(p))
    stages = {k: _float(hw, k, p) for k in STAGES if k in hw}
    if "propagation_distance_m" in hw:
        if "optical_propagation_s" in stages:
            raise ParseError("give optical_propagation_s or propagation_distance_m, not both", path=str(p))
        stages["optical_propagation_s"] = propagation_time(_float(hw, "propagation_distance_m", p))
    if "total_s" not in parser["software"]:
        raise ParseError("[software] total_s missing", path=str(p))
    return StageTiming(**stages), _float(parser["software"], "total_s", p)
