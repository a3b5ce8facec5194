from pathlib import Path

import numpy as np
import pytest

from ncstar.config import DEFAULT_CONFIG_YAML, RunConfig
from ncstar.errors import AdmissibilityError, ConfigError

REPO_ROOT = Path(__file__).resolve().parent.parent


def test_defaults_match_repository_config():
    assert (REPO_ROOT / "config.yaml").read_text(encoding="utf-8") == DEFAULT_CONFIG_YAML


def test_default_config():
    config = RunConfig.default()
    assert config.n == 2
    assert config.grid.points == 32
    assert config.basis.K == 16
    assert config.tolerances.residual == 1e-4
    params = config.params()
    assert params.theta[0, 1] == pytest.approx(0.1)
    assert params.eta[1, 0] == pytest.approx(-0.05)
    assert config.phase_grid().half_width == pytest.approx(6.0)


@pytest.mark.parametrize(
    "overrides",
    [
        {"unknown": 1},
        {"grid": {"spacing": 0.1}},
        {"tolerances": {"eigen": 1e-8, "foo": 1.0}},
    ],
)
def test_unknown_keys_rejected(make_config, overrides):
    with pytest.raises(ConfigError):
        make_config(**overrides)


@pytest.mark.parametrize(
    "overrides",
    [
        {"grid": {"points": 6}},
        {"grid": {"points": 33}},
        {"grid": {"points": 128}},
        {"n": 3, "grid": {"points": 32}},
        {"basis": {"K": 41}},
        {"basis": {"K": 0}},
        {"hbar": 0.0},
        {"tolerances": {"grid": -1.0}},
        {"threads": 0},
        {"n": 1, "theta": 0.2},
    ],
)
def test_invalid_values_rejected(make_config, overrides):
    with pytest.raises(ConfigError):
        make_config(**overrides)


def test_inadmissible_parameters(make_config):
    with pytest.raises(AdmissibilityError):
        make_config(theta=1.0, eta=1.0, hbar=1.0)


def test_matrix_parameters(make_config):
    theta = [[0.0, 0.1, 0.0], [-0.1, 0.0, 0.2], [0.0, -0.2, 0.0]]
    config = make_config(n=3, theta=theta, eta=0.0, grid={"points": 16})
    assert np.array_equal(config.params().theta, np.array(theta))


def test_schedule(make_config):
    schedule = {"alpha_theta": 3, "alpha_eta": 4, "c_eta": 2.0}
    config = make_config(hbar=0.5, theta=1.0, eta=1.0, schedule=schedule)
    params = config.params()
    assert params.theta[0, 1] == pytest.approx(0.125)
    assert params.eta[0, 1] == pytest.approx(0.125)
    assert params.schedule is not None


def test_from_file(write_config):
    path = write_config(n=1, theta=0.0, eta=0.0, seed=7)
    config = RunConfig.from_file(path)
    assert config.n == 1
    assert config.seed == 7


def test_invalid_yaml(tmp_path):
    path = tmp_path / "broken.yaml"
    path.write_text("n: [1, 2\n", encoding="utf-8")
    with pytest.raises(ConfigError):
        RunConfig.from_file(path)


def test_overrides(line_config):
    config = line_config.with_overrides(seed=3, tolerance=1e-3)
    assert config.seed == 3
    assert config.tol(1e-6) == 1e-3
    assert line_config.tol(1e-6) == 1e-6
    with pytest.raises(ConfigError):
        line_config.with_overrides(tolerance=0.0)


def test_to_dict_round_trip(make_config):
    config = make_config(seed=5)
    data = config.to_dict()
    assert data["seed"] == 5
    assert data["grid"] == {"half_width": None, "points": 32}
