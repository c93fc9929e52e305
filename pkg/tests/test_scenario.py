import math

import numpy as np
import pytest

from pinchsec.errors import ConfigError, GeometryError
from pinchsec.scenario import (SPEED_OF_LIGHT, Scenario, dbm_to_watts,
                               dual_waveguide_offsets, load_scenario,
                               save_scenario, scenario_from_mapping,
                               watts_to_dbm)


def make_scenario(**kw):
    base = dict(bob_pos=[1.0, 0.5, 0.0], eve_pos=[-1.0, 1.0, 0.0],
                region_side=5.0, waveguide_height=2.0)
    base.update(kw)
    return Scenario(**base)


def test_derived_rf_constants():
    scn = make_scenario(carrier_freq=28e9, eff_refractive_index=1.4)
    lam = SPEED_OF_LIGHT / 28e9
    assert scn.wavelength == pytest.approx(lam, rel=1e-15)
    assert scn.guide_wavelength == pytest.approx(lam / 1.4, rel=1e-15)
    assert math.sqrt(scn.path_gain) == pytest.approx(lam / (4 * math.pi), rel=1e-15)


def test_min_spacing_defaults_to_half_wavelength():
    scn = make_scenario()
    assert scn.min_spacing == pytest.approx(scn.wavelength / 2)
    assert make_scenario(min_spacing=0.01).min_spacing == 0.01


@pytest.mark.parametrize("kw", [
    dict(bob_pos=[3.0, 0.0, 0.0]),           # outside the square
    dict(eve_pos=[0.0, 0.0, 1.0]),            # off the ground plane
    dict(carrier_freq=-1.0),
    dict(eff_refractive_index=0.9),
    dict(min_spacing=0.0),
    dict(max_power=0.0),
    dict(noise_bob=0.0),
    dict(waveguide_height=0.0),
    dict(num_pas_per_waveguide=0),
    dict(waveguide_y_offsets=()),
])
def test_invalid_scenarios_rejected(kw):
    with pytest.raises(GeometryError):
        make_scenario(**kw)


def test_dbm_conversions():
    assert dbm_to_watts(-90.0) == pytest.approx(1e-12, rel=1e-12)
    assert dbm_to_watts(0.0) == pytest.approx(1e-3, rel=1e-12)
    assert watts_to_dbm(1e-3) == pytest.approx(0.0, abs=1e-12)
    with pytest.raises(ValueError):
        watts_to_dbm(0.0)


def test_dual_waveguide_offsets_total_separation():
    hi, lo = dual_waveguide_offsets(0.5)
    assert hi - lo == pytest.approx(0.5)
    assert hi == -lo


def test_config_round_trip(tmp_path):
    scn = make_scenario(waveguide_y_offsets=dual_waveguide_offsets(0.5),
                        num_pas_per_waveguide=3)
    path = tmp_path / "scenario.yaml"
    save_scenario(scn, path)
    back = load_scenario(path)
    assert np.allclose(back.bob_pos, scn.bob_pos)
    assert np.allclose(back.eve_pos, scn.eve_pos)
    assert back.waveguide_y_offsets == scn.waveguide_y_offsets
    assert back.carrier_freq == scn.carrier_freq
    assert back.min_spacing == scn.min_spacing
    assert back.max_power == scn.max_power
    assert back.num_pas_per_waveguide == scn.num_pas_per_waveguide


def test_mapping_accepts_dbm_and_ghz_keys():
    scn = scenario_from_mapping({
        "bob_pos_m": [1.0, 0.5], "eve_pos_m": [-1.0, 1.0],
        "region_side_m": 5.0, "waveguide_height_m": 2.0,
        "carrier_freq_ghz": 28.0, "max_power_dbm": 0.0,
        "noise_bob_dbm": -90.0, "noise_eve_dbm": -90.0,
    })
    assert scn.carrier_freq == pytest.approx(28e9)
    assert scn.max_power == pytest.approx(1e-3)
    assert scn.noise_bob == pytest.approx(1e-12)
    assert scn.bob_pos[2] == 0.0


def test_mapping_rejects_conflicting_and_missing_keys():
    base = {"bob_pos_m": [0, 0], "eve_pos_m": [1, 1], "region_side_m": 5.0,
            "waveguide_height_m": 2.0, "carrier_freq_hz": 28e9}
    with pytest.raises(ConfigError):
        scenario_from_mapping({**base, "max_power_w": 1e-3, "max_power_dbm": 0.0})
    with pytest.raises(ConfigError):
        scenario_from_mapping({k: v for k, v in base.items()
                               if k != "carrier_freq_hz"})
