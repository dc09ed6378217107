from dataclasses import replace

import numpy as np
import pytest

from src.core.errors import ConfigError, RejectRange
from src.fluctuation.config import MEANDER, SUPREMUM
from src.utils.runconfig import RunConfig, parse_config_text, parse_value

CONFIG_TEXT = """
# symmetric alpha = 1.5
alpha = 1.5
c_plus = 1
c_minus = 1      # same intensity both ways
seed = 20240229

n_paths = 1e6
meander_paths = 1_000
levels = 16, 32,64
n_steps = 64
p_up = yes
"""


def _config(**overrides) -> RunConfig:
    values = dict(alpha=1.5, c_plus=1.0, c_minus=1.0, seed=7, n_steps=64, levels=(16, 32, 64))
    values.update(overrides)
    return RunConfig(**values)


# =============================================================================
# PARSING
# =============================================================================

def test_parse_config_text():
    values = parse_config_text(CONFIG_TEXT)
    assert values["alpha"] == 1.5
    assert values["c_minus"] == 1.0
    assert values["seed"] == 20240229
    assert values["n_paths"] == 1_000_000 and isinstance(values["n_paths"], int)
    assert values["meander_paths"] == 1000
    assert values["levels"] == (16, 32, 64)
    assert values["p_up"] is True


@pytest.mark.parametrize("text, message", [
    ("alpah = 1.5", "unknown config key"),
    ("seed = 1\nseed = 2", "given twice"),
    ("alpha 1.5", "expected 'key = value'"),
    ("n_paths = 1.5", "bad value for n_paths"),
    ("alpha = inf", "bad value for alpha"),
    ("p_up = maybe", "bad value for p_up"),
    ("grid_spacing = cubic", "bad value for grid_spacing"),
])
def test_malformed_config_text(text, message):
    with pytest.raises(ConfigError, match=message):
        parse_config_text(text, source="run.cfg")


def test_errors_name_the_line():
    with pytest.raises(ConfigError, match="run.cfg:3"):
        parse_config_text("alpha = 1.5\n\nbogus = 1", source="run.cfg")


def test_typed_values_pass_through():
    assert parse_value("levels", [8, 16]) == (8, 16)
    assert parse_value("alpha", 1.25) == 1.25
    assert parse_value("levels", "8,16") == (8, 16)
    with pytest.raises(ConfigError):
        parse_value("unknown", 1)


# =============================================================================
# PRECEDENCE
# =============================================================================

def test_cli_overrides_file_overrides_defaults(tmp_path):
    path = tmp_path / "run.cfg"
    path.write_text(CONFIG_TEXT, encoding="utf-8")
    config = RunConfig.from_sources(path, {"alpha": 1.2, "seed": None, "grid_points": 11})
    assert config.alpha == 1.2
    assert config.seed == 20240229
    assert config.grid_points == 11
    assert config.n_paths == 1_000_000
    assert config.t_points == 120


def test_missing_required_key():
    with pytest.raises(ConfigError, match="seed"):
        RunConfig.from_sources(None, {"alpha": 1.5, "c_plus": 1.0, "c_minus": 1.0})


def test_unreadable_file(tmp_path):
    with pytest.raises(ConfigError, match="cannot read"):
        RunConfig.from_sources(tmp_path / "absent.cfg", {})


@pytest.mark.parametrize("overrides", [
    {"seed": -1},
    {"seed": 2 ** 64},
    {"grid_min": 0.0},
    {"grid_min": 10.0, "grid_max": 1.0},
    {"t_points": 1},
    {"workers": 0},
    {"exponent_tol": -0.1},
    {"pup_exponent_tol": -0.1},
])
def test_invalid_values_are_rejected(overrides):
    with pytest.raises(ConfigError):
        _config(**overrides)


def test_parameters_are_validated_lazily():
    config = _config(alpha=2.5)
    with pytest.raises(RejectRange):
        config.params()


# =============================================================================
# SERIALIZATION
# =============================================================================

def test_effective_config_parses_back(tmp_path):
    config = _config(out=str(tmp_path), workers=4, p_up=True, derivatives=2)
    parsed = parse_config_text(config.to_text())
    assert "out" not in parsed and "workers" not in parsed
    assert RunConfig(**parsed, out=str(tmp_path), workers=4) == config


def test_effective_config_ignores_out_and_workers(tmp_path):
    config = _config()
    assert replace(config, out=str(tmp_path), workers=4).to_text() == config.to_text()


def test_digest_ignores_out_and_workers(tmp_path):
    config = _config()
    assert replace(config, out=str(tmp_path), workers=4).digest() == config.digest()
    assert replace(config, seed=8).digest() != config.digest()
    assert len(config.digest()) == 64


# =============================================================================
# DERIVED OBJECTS
# =============================================================================

def test_mc_configs():
    config = _config(n_paths=5000, meander_paths=300, horizon=2.0)
    sup = config.mc_config(SUPREMUM)
    meander = config.mc_config(MEANDER)
    assert (sup.n_paths, meander.n_paths) == (5000, 300)
    assert sup.levels == (16, 32, 64) and sup.n_steps == 64
    assert sup.horizon == 2.0
    with pytest.raises(ValueError):
        config.mc_config("bridge")


def test_mc_config_checks_levels():
    with pytest.raises(ConfigError):
        _config(levels=(16, 48)).mc_config()


def test_grid_times_and_tolerances():
    config = _config(grid_min=0.01, grid_max=100.0, grid_points=5, t_points=3, t_min=0.1, t_max=10.0)
    np.testing.assert_allclose(config.grid(), [0.01, 0.1, 1.0, 10.0, 100.0])
    np.testing.assert_allclose(config.times(), [0.1, 1.0, 10.0])
    tolerances = config.tolerances()
    assert tolerances.exponent == config.exponent_tol
    assert tolerances.meander_constant == config.meander_constant_tol
    assert (tolerances.tight_exponent, tolerances.tight_constant, tolerances.pup_exponent) == (0.10, 0.10, 0.20)
    assert replace(config, tight_constant_tol=0.05).tolerances().tight_constant == 0.05
