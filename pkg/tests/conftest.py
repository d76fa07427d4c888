import json

import pytest

from ommsim import TWO_PI, default_params, drive_power_params


@pytest.fixture(scope="session")
def baseline_model():
    """Effective-coupling working point used throughout the suite."""
    return default_params().validate()


@pytest.fixture(scope="session")
def power_model():
    """Drive-strength variant of the same device (pinned effective detunings)."""
    return drive_power_params().validate()


BASELINE_CONFIG = {
    "omega_b": {"over_2pi_hz": 40e6},
    "omega_m": {"over_2pi_hz": 10e9},
    "lambda_L": 1.064e-6,
    "kappa_c": {"over_2pi_hz": 2e6},
    "kappa_m": {"over_2pi_hz": 1e6},
    "gamma_a": {"over_2pi_hz": 1e6},
    "gamma_b": {"over_2pi_hz": 100.0},
    "g_c": {"over_2pi_hz": 1e3},
    "g_m": {"over_2pi_hz": 20.0},
    "g_a": {"over_2pi_hz": 1e3},
    "g_N": {"over_2pi_hz": 8e6},
    "delta_a": {"over_2pi_hz": -40e6},
    "delta_c_eff": {"over_2pi_hz": 20e6},
    "delta_m_eff": {"over_2pi_hz": 40e6},
    "G_c": {"over_2pi_hz": 8e6},
    "G_m": {"over_2pi_hz": 2.5e6},
    "T": 0.01,
}


@pytest.fixture()
def baseline_config_path(tmp_path):
    path = tmp_path / "baseline.json"
    path.write_text(json.dumps(BASELINE_CONFIG, indent=2))
    return str(path)
