"""Problem instance description: geometry, RF constants, and power budget.

Internally everything is SI: meters, Hz, watts.  dBm appears only at the
config-file boundary (``*_dbm`` keys) and is converted on load.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from pathlib import Path

import numpy as np
import yaml

from .errors import ConfigError, GeometryError

SPEED_OF_LIGHT = 299_792_458.0  # m/s


def dbm_to_watts(dbm: float) -> float:
    return 10.0 ** (dbm / 10.0) * 1e-3


def watts_to_dbm(watts: float) -> float:
    if watts <= 0:
        raise ValueError("power must be positive to convert to dBm")
    return 10.0 * math.log10(watts / 1e-3)


@dataclass(frozen=True)
class Scenario:
    """One secure-downlink problem instance.

    The serving region is an ``region_side x region_side`` square centered at
    the origin in the z=0 plane.  Waveguides run parallel to the x-axis at
    height ``waveguide_height``, one per entry of ``waveguide_y_offsets``.
    The legitimate user (Bob) and the eavesdropper (Eve) are single-antenna
    ground terminals.
    """

    bob_pos: np.ndarray          # (3,) meters, z = 0
    eve_pos: np.ndarray          # (3,) meters, z = 0
    region_side: float           # meters
    waveguide_height: float      # meters
    waveguide_y_offsets: tuple[float, ...] = (0.0,)
    carrier_freq: float = 28e9   # Hz
    eff_refractive_index: float = 1.4
    min_spacing: float | None = None   # meters; default: half a wavelength
    max_power: float = 1e-3      # watts
    noise_bob: float = 1e-12     # watts
    noise_eve: float = 1e-12     # watts
    num_pas_per_waveguide: int = 4

    def __post_init__(self):
        bob = np.asarray(self.bob_pos, dtype=float).reshape(3)
        eve = np.asarray(self.eve_pos, dtype=float).reshape(3)
        object.__setattr__(self, "bob_pos", bob)
        object.__setattr__(self, "eve_pos", eve)
        object.__setattr__(self, "waveguide_y_offsets",
                           tuple(float(y) for y in self.waveguide_y_offsets))
        if self.min_spacing is None:
            object.__setattr__(self, "min_spacing", self.wavelength / 2.0)
        self.validate()

    # -- derived RF constants ------------------------------------------------

    @property
    def wavelength(self) -> float:
        """Free-space wavelength (m)."""
        return SPEED_OF_LIGHT / self.carrier_freq

    @property
    def guide_wavelength(self) -> float:
        """In-waveguide wavelength (m), compressed by the refractive index."""
        return self.wavelength / self.eff_refractive_index

    @property
    def path_gain(self) -> float:
        """Free-space gain coefficient (m^2); amplitude at distance d is
        sqrt(path_gain)/d."""
        return (SPEED_OF_LIGHT / (4.0 * math.pi * self.carrier_freq)) ** 2

    @property
    def num_waveguides(self) -> int:
        return len(self.waveguide_y_offsets)

    def user_pos(self, user: str) -> np.ndarray:
        if user == "bob":
            return self.bob_pos
        if user == "eve":
            return self.eve_pos
        raise ValueError(f"unknown user {user!r}")

    # -- validation ----------------------------------------------------------

    def validate(self) -> None:
        half = self.region_side / 2.0
        for name, pos in (("bob_pos", self.bob_pos), ("eve_pos", self.eve_pos)):
            if pos.shape != (3,):
                raise GeometryError(f"{name} must be a 3-vector")
            if abs(pos[2]) > 1e-12:
                raise GeometryError(f"{name} must lie in the z=0 plane")
            if abs(pos[0]) > half + 1e-12 or abs(pos[1]) > half + 1e-12:
                raise GeometryError(f"{name}={pos[:2]} outside the serving square")
        if self.region_side <= 0:
            raise GeometryError("region_side must be positive")
        if self.waveguide_height <= 0:
            raise GeometryError("waveguide_height must be positive")
        if self.carrier_freq <= 0:
            raise GeometryError("carrier_freq must be positive")
        if self.eff_refractive_index < 1.0:
            raise GeometryError("eff_refractive_index must be >= 1")
        if self.min_spacing is not None and self.min_spacing <= 0:
            raise GeometryError("min_spacing must be positive")
        if self.max_power <= 0:
            raise GeometryError("max_power must be positive")
        if self.noise_bob <= 0 or self.noise_eve <= 0:
            raise GeometryError("noise powers must be positive")
        if self.num_pas_per_waveguide < 1:
            raise GeometryError("num_pas_per_waveguide must be >= 1")
        if self.num_waveguides < 1:
            raise GeometryError("at least one waveguide is required")

    def with_users(self, bob_pos, eve_pos) -> "Scenario":
        return replace(self, bob_pos=np.asarray(bob_pos, float),
                       eve_pos=np.asarray(eve_pos, float))


def dual_waveguide_offsets(separation: float) -> tuple[float, float]:
    """Symmetric pair of y-offsets with the given total separation."""
    return (separation / 2.0, -separation / 2.0)


# -- config file I/O ---------------------------------------------------------
#
# Flat key/value mapping with units baked into the key names.  Power and
# noise accept either watts (canonical) or dBm (convenience).

_SCHEMA = {
    "bob_pos_m": "list of 2 or 3 floats (x, y[, 0])",
    "eve_pos_m": "list of 2 or 3 floats (x, y[, 0])",
    "region_side_m": "float",
    "waveguide_height_m": "float",
    "waveguide_y_offsets_m": "list of floats, one per waveguide",
    "carrier_freq_hz": "float (or carrier_freq_ghz)",
    "eff_refractive_index": "float",
    "min_spacing_m": "float, optional (default: half wavelength)",
    "max_power_w": "float (or max_power_dbm)",
    "noise_bob_w": "float (or noise_bob_dbm)",
    "noise_eve_w": "float (or noise_eve_dbm)",
    "num_pas_per_waveguide": "int",
}


def _pos3(raw, key: str) -> np.ndarray:
    vals = [float(v) for v in raw]
    if len(vals) == 2:
        vals.append(0.0)
    if len(vals) != 3:
        raise ConfigError(f"{key} must have 2 or 3 entries")
    return np.array(vals)


def _power(data: dict, key_w: str, key_dbm: str, default=None) -> float:
    if key_w in data and key_dbm in data:
        raise ConfigError(f"give {key_w} or {key_dbm}, not both")
    if key_w in data:
        return float(data[key_w])
    if key_dbm in data:
        return dbm_to_watts(float(data[key_dbm]))
    if default is None:
        raise ConfigError(f"missing {key_w} (or {key_dbm})")
    return default


def scenario_from_mapping(data: dict) -> Scenario:
    try:
        if "carrier_freq_hz" in data:
            fc = float(data["carrier_freq_hz"])
        elif "carrier_freq_ghz" in data:
            fc = float(data["carrier_freq_ghz"]) * 1e9
        else:
            raise ConfigError("missing carrier_freq_hz (or carrier_freq_ghz)")
        kwargs = dict(
            bob_pos=_pos3(data["bob_pos_m"], "bob_pos_m"),
            eve_pos=_pos3(data["eve_pos_m"], "eve_pos_m"),
            region_side=float(data["region_side_m"]),
            waveguide_height=float(data["waveguide_height_m"]),
            waveguide_y_offsets=tuple(float(y) for y in
                                      data.get("waveguide_y_offsets_m", [0.0])),
            carrier_freq=fc,
            eff_refractive_index=float(data.get("eff_refractive_index", 1.4)),
            max_power=_power(data, "max_power_w", "max_power_dbm", 1e-3),
            noise_bob=_power(data, "noise_bob_w", "noise_bob_dbm", 1e-12),
            noise_eve=_power(data, "noise_eve_w", "noise_eve_dbm", 1e-12),
            num_pas_per_waveguide=int(data.get("num_pas_per_waveguide", 4)),
        )
        if "min_spacing_m" in data:
            kwargs["min_spacing"] = float(data["min_spacing_m"])
    except KeyError as exc:
        raise ConfigError(f"missing scenario key {exc.args[0]!r}") from exc
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad scenario value: {exc}") from exc
    try:
        return Scenario(**kwargs)
    except GeometryError as exc:
        raise ConfigError(str(exc)) from exc


def scenario_to_mapping(scn: Scenario) -> dict:
    return {
        "bob_pos_m": [float(v) for v in scn.bob_pos],
        "eve_pos_m": [float(v) for v in scn.eve_pos],
        "region_side_m": scn.region_side,
        "waveguide_height_m": scn.waveguide_height,
        "waveguide_y_offsets_m": list(scn.waveguide_y_offsets),
        "carrier_freq_hz": scn.carrier_freq,
        "eff_refractive_index": scn.eff_refractive_index,
        "min_spacing_m": scn.min_spacing,
        "max_power_w": scn.max_power,
        "noise_bob_w": scn.noise_bob,
        "noise_eve_w": scn.noise_eve,
        "num_pas_per_waveguide": scn.num_pas_per_waveguide,
    }


def load_scenario(path) -> Scenario:
    data = yaml.safe_load(Path(path).read_text())
    if not isinstance(data, dict):
        raise ConfigError(f"{path}: expected a key/value mapping")
    return scenario_from_mapping(data)


def save_scenario(scn: Scenario, path) -> None:
    Path(path).write_text(yaml.safe_dump(scenario_to_mapping(scn), sort_keys=True))
