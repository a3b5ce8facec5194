"""설정 파일 로더"""

import logging
from dataclasses import dataclass, field, fields, replace
from pathlib import Path
from typing import Any

import numpy as np
import yaml

from .errors import ConfigError

# 자원 상한
MIN_GRID_POINTS = 8
MAX_GRID_POINTS = 64
MAX_GRID_TOTAL = 2**24
MAX_BASIS_K = 40
DENSE_MAX_POINTS = 4096

DEFAULT_CONFIG_YAML = """\
# ncstar 설정 파일

# 자유도 수와 플랑크 상수
n: 2
hbar: 1.0

# 위치/운동량 비가환 파라미터
# 숫자 하나면 θ₁₂ (n ≥ 2), 아니면 n×n 반대칭 행렬
theta: 0.1
eta: 0.05

# ħ 스케줄 (null이면 사용 안 함)
# 사용하면 theta/eta는 모양 행렬 Θ̂, N̂ 로 해석: Θ(ħ) = c_theta·ħ^alpha_theta·Θ̂
schedule: null
#  alpha_theta: 3
#  c_theta: 1.0
#  alpha_eta: 3
#  c_eta: 1.0

# 위상 공간 격자 (half_width가 null이면 6·√ħ)
grid:
  half_width: null
  points: 32

# Hermite 기저 (half_width/points가 null이면 자동)
basis:
  K: 16
  half_width: null
  points: null

# 허용 오차
tolerances:
  sw: 1.0e-12
  grid: 1.0e-6
  eigen: 1.0e-8
  residual: 1.0e-4
  decay: 1.0e-6

# 난수 시드
seed: 0

# 작업 스레드 수 (null이면 CPU 수, NCSTAR_THREADS 환경 변수가 우선)
threads: null

# 로깅 설정
logging:
  level: "INFO"  # DEBUG, INFO, WARNING, ERROR
  file: null     # 로그 파일 경로 (null이면 stderr)
"""


@dataclass
class LoggingConfig:
    level: str = "INFO"
    file: str | None = None


@dataclass
class GridConfig:
    half_width: float | None = None   # L (None이면 6√ħ)
    points: int = 32                  # 축당 M


@dataclass
class BasisConfig:
    K: int = 16                       # 축당 Hermite 함수 개수
    half_width: float | None = None   # Lx
    points: int | None = None         # Mx


@dataclass
class ScheduleConfig:
    alpha_theta: float
    alpha_eta: float
    c_theta: float = 1.0
    c_eta: float = 1.0


@dataclass
class Tolerances:
    sw: float = 1e-12         # sJsᵀ = Ω 잔차
    grid: float = 1e-6        # 격자 경로 비교
    eigen: float = 1e-8       # 고윳값 수렴 판정
    residual: float = 1e-4    # star-고유쌍 잔차
    decay: float = 1e-6       # 경계 감쇠 플래그


def _section(cls, data: Any, name: str):
    """중첩 블록을 데이터클래스로 (모르는 키는 거부)"""
    if data is None:
        return cls()
    if not isinstance(data, dict):
        raise ConfigError(f"'{name}' 블록은 매핑이어야 함")
    known = {f.name for f in fields(cls)}
    unknown = sorted(set(data) - known)
    if unknown:
        raise ConfigError(f"'{name}' 블록에 알 수 없는 키: {', '.join(unknown)}")
    try:
        return cls(**data)
    except TypeError as e:
        raise ConfigError(f"'{name}' 블록 오류: {e}") from e


@dataclass
class RunConfig:
    n: int = 2
    hbar: float = 1.0
    theta: float | list = 0.0
    eta: float | list = 0.0
    schedule: ScheduleConfig | None = None
    grid: GridConfig = field(default_factory=GridConfig)
    basis: BasisConfig = field(default_factory=BasisConfig)
    tolerances: Tolerances = field(default_factory=Tolerances)
    seed: int = 0
    threads: int | None = None
    tolerance: float | None = None    # --tol 덮어쓰기
    logging: LoggingConfig = field(default_factory=LoggingConfig)

    @classmethod
    def from_file(cls, config_path: Path) -> "RunConfig":
        """YAML 설정 파일에서 RunConfig 객체 생성"""
        try:
            with open(config_path, "r", encoding="utf-8") as f:
                data = yaml.safe_load(f)
        except yaml.YAMLError as e:
            raise ConfigError(f"YAML 파싱 실패: {config_path}: {e}") from e
        return cls.from_dict(data or {})

    @classmethod
    def from_dict(cls, data: dict) -> "RunConfig":
        if not isinstance(data, dict):
            raise ConfigError("설정 최상위는 매핑이어야 함")
        known = {f.name for f in fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise ConfigError(f"알 수 없는 설정 키: {', '.join(unknown)}")
        schedule = data.get("schedule")
        config = cls(
            n=data.get("n", 2),
            hbar=float(data.get("hbar", 1.0)),
            theta=data.get("theta", 0.0),
            eta=data.get("eta", 0.0),
            schedule=None if schedule is None else _section(ScheduleConfig, schedule, "schedule"),
            grid=_section(GridConfig, data.get("grid"), "grid"),
            basis=_section(BasisConfig, data.get("basis"), "basis"),
            tolerances=_section(Tolerances, data.get("tolerances"), "tolerances"),
            seed=data.get("seed", 0),
            threads=data.get("threads"),
            tolerance=data.get("tolerance"),
            logging=_section(LoggingConfig, data.get("logging"), "logging"),
        )
        config.validate()
        return config

    @classmethod
    def default(cls) -> "RunConfig":
        """기본 설정으로 RunConfig 객체 생성 (config.yaml 과 같은 내용)"""
        return cls.from_dict(yaml.safe_load(DEFAULT_CONFIG_YAML))

    def with_overrides(self, seed: int | None = None, tolerance: float | None = None) -> "RunConfig":
        """CLI 옵션 --seed, --tol 반영"""
        config = self
        if seed is not None:
            config = replace(config, seed=seed)
        if tolerance is not None:
            config = replace(config, tolerance=tolerance)
        config.validate()
        return config

    def tol(self, default: float) -> float:
        """--tol 이 있으면 그것, 없으면 기본 허용 오차"""
        return self.tolerance if self.tolerance is not None else default

    def validate(self) -> None:
        """자원 상한과 파라미터 검증"""
        if not isinstance(self.n, int) or self.n < 1:
            raise ConfigError(f"n은 양의 정수여야 함: {self.n}")
        if not self.hbar > 0:
            raise ConfigError(f"hbar는 양수여야 함: {self.hbar}")
        points = self.grid.points
        if not isinstance(points, int) or not MIN_GRID_POINTS <= points <= MAX_GRID_POINTS:
            raise ConfigError(
                f"grid.points={points} 는 {MIN_GRID_POINTS}..{MAX_GRID_POINTS} 범위여야 함"
            )
        if points % 2:
            raise ConfigError(f"grid.points는 짝수여야 함: {points}")
        if points ** (2 * self.n) > MAX_GRID_TOTAL:
            raise ConfigError(f"격자점 총수 {points}^{2 * self.n} 가 상한 {MAX_GRID_TOTAL}을 넘음")
        if not isinstance(self.basis.K, int) or not 1 <= self.basis.K <= MAX_BASIS_K:
            raise ConfigError(f"basis.K={self.basis.K} 는 1..{MAX_BASIS_K} 범위여야 함")
        for f in fields(self.tolerances):
            if not getattr(self.tolerances, f.name) > 0:
                raise ConfigError(f"tolerances.{f.name} 는 양수여야 함")
        if self.tolerance is not None and not self.tolerance > 0:
            raise ConfigError(f"tol은 양수여야 함: {self.tolerance}")
        if self.threads is not None and (not isinstance(self.threads, int) or self.threads < 1):
            raise ConfigError(f"threads는 양의 정수여야 함: {self.threads}")
        self.params()

    def _matrix(self, value, name: str) -> np.ndarray:
        from .symplectic import pair_matrix

        if isinstance(value, (int, float)):
            if self.n < 2 and value:
                raise ConfigError(f"n=1에서는 {name}이 0이어야 함")
            return pair_matrix(self.n, float(value))
        try:
            return np.array(value, dtype=float)
        except (TypeError, ValueError) as e:
            raise ConfigError(f"{name} 값을 행렬로 읽을 수 없음: {value!r}") from e

    def params(self):
        """NCParams 생성 (스케줄이 있으면 theta/eta는 모양 행렬)"""
        from .symplectic import NCParams, Schedule, check_admissible

        theta = self._matrix(self.theta, "theta")
        eta = self._matrix(self.eta, "eta")
        if self.schedule is not None:
            schedule = Schedule(
                alpha_theta=self.schedule.alpha_theta,
                c_theta=self.schedule.c_theta,
                alpha_eta=self.schedule.alpha_eta,
                c_eta=self.schedule.c_eta,
                theta_shape=theta,
                eta_shape=eta,
            )
            return NCParams.from_schedule(self.n, self.hbar, schedule)
        params = NCParams(n=self.n, hbar=self.hbar, theta=theta, eta=eta)
        check_admissible(params)
        return params

    def sw_map(self, variant: int = 0):
        """설정의 Ω 에 대한 SW 맵"""
        from .symplectic import build_omega, solve_sw_map

        return solve_sw_map(build_omega(self.params()), variant)

    def phase_grid(self):
        from .star.grid import PhaseGrid

        if self.grid.half_width is None:
            return PhaseGrid.default(self.n, self.hbar, self.grid.points)
        return PhaseGrid(self.n, float(self.grid.half_width), self.grid.points, self.hbar)

    def hermite_basis(self):
        from .wigner.hermite import HermiteBasis

        return HermiteBasis(
            n=self.n,
            K=self.basis.K,
            hbar=self.hbar,
            half_width=self.basis.half_width,
            points=self.basis.points,
        )

    def to_dict(self) -> dict:
        """출력 파일에 되돌려 적는 설정 값"""
        return {
            "n": self.n,
            "hbar": self.hbar,
            "theta": self.theta,
            "eta": self.eta,
            "schedule": None if self.schedule is None else vars(self.schedule).copy(),
            "grid": vars(self.grid).copy(),
            "basis": vars(self.basis).copy(),
            "seed": self.seed,
        }

    def setup_logging(self) -> None:
        """로깅 설정 적용"""
        level = getattr(logging, self.logging.level.upper(), logging.INFO)

        handlers: list[logging.Handler] = []

        if self.logging.file:
            handlers.append(logging.FileHandler(self.logging.file))
        else:
            handlers.append(logging.StreamHandler())

        logging.basicConfig(
            level=level,
            format="%(asctime)s [%(levelname)s] %(name)s: %(message)s",
            handlers=handlers,
        )


__all__ = [
    "DEFAULT_CONFIG_YAML",
    "DENSE_MAX_POINTS",
    "MAX_BASIS_K",
    "MAX_GRID_POINTS",
    "MAX_GRID_TOTAL",
    "MIN_GRID_POINTS",
    "RunConfig",
]
