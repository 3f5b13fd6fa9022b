from pathlib import Path

import pytest

from photongauge.config import ExperimentConfig, load_config, parse_config
from photongauge.errors import ConfigError

EXAMPLE = Path(__file__).resolve().parents[1] / "configs" / "experiment.toml"


def test_example_config_is_the_default():
    assert load_config(EXAMPLE) == ExperimentConfig()


def test_tier_sets_points():
    assert parse_config({"tier": "reference"}).points == 96
    assert parse_config({}).points == 64
    assert parse_config({"grid": {"points": 48}, "tier": "reference"}).points == 48


@pytest.mark.parametrize("data", [
    {"unknown": 1},
    {"grid": {"point": 64}},
    {"tier": "slow"},
    {"seed": -1},
    {"seed": 2**64},
    {"packet": {"gauge": [0, 0, 2]}},
    {"berry_flux": {"radii": []}},
    {"oam_spectrum": {"charges": [7]}},
    {"tolerances": {"flux": 1e-3}},
    {"tolerances": {"curl": 0}},
    {"grid": {"widths": 5}},
])
def test_invalid_configs_rejected(data):
    with pytest.raises(ConfigError):
        parse_config(data)


def test_tolerance_override():
    cfg = parse_config({"tolerances": {"barycenter": 0.05}})
    assert cfg.tolerance("barycenter") == 0.05
    assert cfg.tolerance("curl") == 1e-6


def test_malformed_toml(tmp_path):
    p = tmp_path / "bad.toml"
    p.write_text("seed = = 3\n")
    with pytest.raises(ConfigError):
        load_config(p)


def test_echo_round_trips():
    cfg = parse_config({"seed": 5, "barycenter": {"theta_deg": [40.0]}})
    assert parse_config(cfg.echo()) == cfg
