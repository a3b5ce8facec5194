"""ħ 스케일 Hermite 함수와 Wigner 쌍 표

h₀(x) = (πħ)^{−1/4} e^{−x²/2ħ}
h_{j+1}(x) = √(2/(ħ(j+1))) x h_j(x) − √(j/(j+1)) h_{j−1}(x)
"""

import itertools
import logging
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from ..errors import ConfigError, GridMismatchError

logger = logging.getLogger(__name__)

GRAM_TOL = 1e-10


def hermite_table(count: int, x, hbar: float) -> np.ndarray:
    """h_0..h_{count−1} 를 x에서 계산, 형상 (count, *x.shape)"""
    x = np.asarray(x, dtype=float)
    table = np.empty((count,) + x.shape)
    table[0] = (np.pi * hbar) ** -0.25 * np.exp(-(x**2) / (2 * hbar))
    if count > 1:
        table[1] = np.sqrt(2 / hbar) * x * table[0]
    for j in range(1, count - 1):
        table[j + 1] = (
            np.sqrt(2 / (hbar * (j + 1))) * x * table[j] - np.sqrt(j / (j + 1)) * table[j - 1]
        )
    return table


def hermite_eval(j: Sequence[int], x: Sequence, hbar: float):
    """텐서곱 Hermite 함수 h_j(x) = Π_α h_{j_α}(x_α)"""
    result = 1.0
    for index, coordinate in zip(j, x):
        result = result * hermite_table(index + 1, coordinate, hbar)[index]
    return result


def wigner_pair_table(count: int, x, p, hbar: float) -> np.ndarray:
    """W(h_m, h_n)(x, p) 의 정확한 값, 형상 (count, count, *x.shape)

    α = (x + ip)/√(2ħ) 로 Laguerre 형 사다리 점화식을 쓴다.
    """
    alpha = (np.asarray(x, dtype=float) + 1j * np.asarray(p, dtype=float)) / np.sqrt(2 * hbar)
    table = np.empty((count, count) + alpha.shape, dtype=complex)
    table[0, 0] = np.exp(-2 * np.abs(alpha) ** 2) / (np.pi * hbar)
    for n in range(1, count):
        table[0, n] = 2 * alpha * table[0, n - 1] / np.sqrt(n)
    for m in range(1, count):
        table[m, m] = (2 * np.conj(alpha) * table[m - 1, m] - np.sqrt(m) * table[m - 1, m - 1]) / np.sqrt(m)
        for n in range(m + 1, count):
            table[m, n] = (2 * alpha * table[m, n - 1] - np.sqrt(m) * table[m - 1, n - 1]) / np.sqrt(n)
    for m in range(count):
        for n in range(m):
            table[m, n] = np.conj(table[n, m])
    return table


def _default_half_width(count: int, hbar: float) -> float:
    # 고전 전환점 √(ħ(2K+1)) 바깥으로 6√ħ 여유
    return float(np.sqrt(hbar * (2 * count + 1)) + 6 * np.sqrt(hbar))


def _default_points(count: int, hbar: float, half_width: float) -> int:
    bandwidth = np.sqrt(hbar * (2 * count + 1)) + 6 * np.sqrt(hbar)
    step = np.pi * hbar / (2 * bandwidth)
    points = int(np.ceil(2 * half_width / step))
    return points + points % 2


@dataclass(frozen=True)
class HermiteBasis:
    """배위 공간 ℝⁿ 의 텐서 Hermite 기저 (축당 K개)"""
    n: int
    K: int                      # 축당 함수 개수
    hbar: float = 1.0
    half_width: float | None = None   # Lx (None이면 자동)
    points: int | None = None         # Mx (None이면 자동)

    def __post_init__(self) -> None:
        if self.n < 1 or self.K < 1:
            raise ConfigError(f"n, K는 양의 정수여야 함: n={self.n}, K={self.K}")
        if self.half_width is None:
            object.__setattr__(self, "half_width", _default_half_width(self.K, self.hbar))
        if self.points is None:
            object.__setattr__(
                self, "points", _default_points(self.K, self.hbar, self.half_width)
            )
        deviation = self.gram_deviation()
        logger.debug(f"Hermite 기저 Gram 편차 {deviation:.2e} (K={self.K}, Mx={self.points})")
        if deviation > GRAM_TOL:
            raise ConfigError(
                f"Hermite 기저 Gram 편차 {deviation:.2e} > {GRAM_TOL:.0e}; "
                f"basis.half_width 또는 basis.points를 늘리세요"
            )

    @property
    def size(self) -> int:
        return self.K**self.n

    @property
    def step(self) -> float:
        return 2 * self.half_width / self.points

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.half_width + self.step * np.arange(self.points)

    @cached_property
    def table(self) -> np.ndarray:
        """(K, Mx) 1차원 표"""
        return hermite_table(self.K, self.axis, self.hbar)

    def gram_deviation(self) -> float:
        """텐서 Gram 행렬과 I 의 최대 편차"""
        gram1 = self.table @ self.table.T * self.step
        gram = gram1
        for _ in range(self.n - 1):
            gram = np.kron(gram, gram1)
        return float(np.abs(gram - np.eye(self.size)).max())

    def multi_index(self, flat: int) -> tuple[int, ...]:
        return tuple(int(v) for v in np.unravel_index(flat, (self.K,) * self.n))

    def flat_index(self, j: Sequence[int]) -> int:
        return int(np.ravel_multi_index(tuple(j), (self.K,) * self.n))

    def ordered(self, count: int | None = None) -> list[tuple[int, ...]]:
        """총 차수, 사전식 순으로 정렬한 다중 지수"""
        indices = sorted(
            itertools.product(range(self.K), repeat=self.n), key=lambda j: (sum(j), j)
        )
        return indices if count is None else indices[:count]

    def function(self, j: "Sequence[int] | int") -> "WaveFunction":
        flat = j if isinstance(j, (int, np.integer)) else self.flat_index(j)
        coefficients = np.zeros(self.size, dtype=complex)
        coefficients[flat] = 1.0
        return WaveFunction(self, coefficients=coefficients)

    def resized(self, count: int) -> "HermiteBasis":
        """같은 격자 설정으로 K만 바꾼 기저 (자동 설정이면 다시 계산)"""
        return HermiteBasis(self.n, count, self.hbar)


@dataclass(frozen=True, eq=False)
class WaveFunction:
    """Hermite 계수 또는 배위 격자 샘플로 표현한 ψ"""
    basis: HermiteBasis
    coefficients: np.ndarray | None = None   # 길이 K^n
    samples: np.ndarray | None = None        # 형상 (Mx,)*n

    def __post_init__(self) -> None:
        if (self.coefficients is None) == (self.samples is None):
            raise ValueError("coefficients와 samples 중 정확히 하나가 필요함")
        if self.coefficients is not None:
            coefficients = np.asarray(self.coefficients, dtype=complex).ravel()
            if coefficients.shape != (self.basis.size,):
                raise GridMismatchError(f"계수 길이 {coefficients.size} != K^n = {self.basis.size}")
            object.__setattr__(self, "coefficients", coefficients)
        else:
            samples = np.asarray(self.samples, dtype=complex)
            if samples.shape != (self.basis.points,) * self.basis.n:
                raise GridMismatchError(f"샘플 형상 {samples.shape} 이 배위 격자와 다름")
            object.__setattr__(self, "samples", samples)

    @classmethod
    def from_coefficients(cls, basis: HermiteBasis, coefficients) -> "WaveFunction":
        return cls(basis, coefficients=coefficients)

    @classmethod
    def from_samples(cls, basis: HermiteBasis, samples) -> "WaveFunction":
        return cls(basis, samples=samples)

    @property
    def is_coefficient(self) -> bool:
        return self.coefficients is not None

    def coefficient_tensor(self) -> np.ndarray:
        return self.to_coefficients().reshape((self.basis.K,) * self.basis.n)

    def to_coefficients(self) -> np.ndarray:
        """c_j = Σ_x h_j(x) ψ(x) h_x^n (샘플 표현은 구적 투영)"""
        if self.coefficients is not None:
            return self.coefficients
        result = self.samples
        for _ in range(self.basis.n):
            # 첫 축을 계수 축으로 바꾸고 맨 뒤로 보낸다
            result = np.moveaxis(np.tensordot(self.basis.table, result, axes=([1], [0])), 0, -1)
        return result.ravel() * self.basis.step**self.basis.n

    def to_samples(self) -> np.ndarray:
        if self.samples is not None:
            return self.samples
        result = self.coefficient_tensor()
        for _ in range(self.basis.n):
            result = np.moveaxis(np.tensordot(self.basis.table, result, axes=([0], [0])), 0, -1)
        return result

    def as_coefficients(self) -> "WaveFunction":
        return WaveFunction(self.basis, coefficients=self.to_coefficients())

    def norm(self) -> float:
        if self.coefficients is not None:
            return float(np.linalg.norm(self.coefficients))
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.basis.step**self.basis.n))

    def inner(self, other: "WaveFunction") -> complex:
        """⟨self, other⟩ (Hermite 계수 기준)"""
        return complex(np.vdot(self.to_coefficients(), other.to_coefficients()))

    def __add__(self, other: "WaveFunction") -> "WaveFunction":
        return WaveFunction(self.basis, coefficients=self.to_coefficients() + other.to_coefficients())

    def __sub__(self, other: "WaveFunction") -> "WaveFunction":
        return WaveFunction(self.basis, coefficients=self.to_coefficients() - other.to_coefficients())

    def __mul__(self, value: complex) -> "WaveFunction":
        return WaveFunction(self.basis, coefficients=self.to_coefficients() * value)

    __rmul__ = __mul__


__all__ = [
    "HermiteBasis",
    "WaveFunction",
    "hermite_eval",
    "hermite_table",
    "wigner_pair_table",
]
