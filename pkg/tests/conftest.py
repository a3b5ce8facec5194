"""공용 fixture"""

import numpy as np
import pytest
import yaml

from ncstar.config import DEFAULT_CONFIG_YAML, RunConfig
from ncstar.star.grid import PhaseGrid
from ncstar.symplectic import NCParams


@pytest.fixture
def nc_params() -> NCParams:
    """θ₁₂ = 0.1, η₁₂ = 0.05, ħ = 1 (n = 2)"""
    return NCParams.single_pair(theta=0.1, eta=0.05, hbar=1.0)


@pytest.fixture
def flat_params() -> NCParams:
    return NCParams(n=2, hbar=1.0)


@pytest.fixture
def line_grid() -> PhaseGrid:
    """n = 1, L = 5 (πħ/h ≥ 2L 이라 커널 Moyal 곱에 앨리어싱이 없다)"""
    return PhaseGrid(1, 5.0, 32, 1.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(0)


def config_data(**overrides) -> dict:
    """기본 설정 사전에 덮어쓰기 (중첩 블록은 병합)"""
    data = yaml.safe_load(DEFAULT_CONFIG_YAML)
    for key, value in overrides.items():
        if isinstance(value, dict) and isinstance(data.get(key), dict):
            data[key] = {**data[key], **value}
        else:
            data[key] = value
    return data


@pytest.fixture
def make_config():
    """덮어쓸 값을 받아 RunConfig 를 만드는 함수"""

    def build(**overrides) -> RunConfig:
        return RunConfig.from_dict(config_data(**overrides))

    return build


@pytest.fixture
def line_config(make_config) -> RunConfig:
    """n = 1 가환 설정 (작은 격자라 빠르다)"""
    return make_config(n=1, theta=0.0, eta=0.0)


@pytest.fixture
def write_config(tmp_path):
    """덮어쓴 설정을 YAML 파일로 저장하고 경로를 돌려주는 함수"""

    def build(**overrides):
        path = tmp_path / "config.yaml"
        path.write_text(yaml.safe_dump(config_data(**overrides), allow_unicode=True), encoding="utf-8")
        return path

    return build
