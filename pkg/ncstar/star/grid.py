"""위상공간 격자와 격자 위의 심볼

격자점은 축마다 z_k = −L + k·h (h = 2L/M, k = 0..M−1) 이고 배열 축 순서는
(x1..xn, p1..pn) 이다.
"""

import logging
import warnings
from dataclasses import dataclass, field, replace
from functools import cached_property
from typing import Callable, Sequence

import numpy as np
from scipy import linalg

from ..config import MIN_GRID_POINTS
from ..errors import ConfigError, DecayError, GridMismatchError, ParameterError
from ..symbol.expr import Expr, evaluate, max_index

logger = logging.getLogger(__name__)

DEFAULT_DECAY_TOL = 1e-6

# z(성분 배열의 시퀀스) → 값 배열
Evaluator = Callable[[Sequence[np.ndarray]], np.ndarray]


@dataclass(frozen=True)
class PhaseGrid:
    """ℝ^{2n}의 균일 격자"""
    n: int
    half_width: float   # L
    points: int         # 축당 M (짝수)
    hbar: float = 1.0

    def __post_init__(self) -> None:
        if self.n < 1:
            raise ConfigError(f"n은 양의 정수여야 함: {self.n}")
        if self.points < MIN_GRID_POINTS or self.points % 2:
            raise ConfigError(
                f"축당 격자점 수는 {MIN_GRID_POINTS} 이상의 짝수여야 함: {self.points}"
            )
        if not self.half_width > 0 or not self.hbar > 0:
            raise ConfigError("L과 ħ는 양수여야 함")

    @classmethod
    def default(cls, n: int, hbar: float = 1.0, points: int = 32) -> "PhaseGrid":
        """L = 6√ħ"""
        return cls(n=n, half_width=6.0 * np.sqrt(hbar), points=points, hbar=hbar)

    @classmethod
    def symplectic(cls, n: int, points: int, hbar: float = 1.0, scale: float = 1.0) -> "PhaseGrid":
        """Ω = scale·J 에 대해 자기쌍대인 격자 (h² = 2π·scale·ħ/M)

        이 격자에서는 이산 F_Ω 가 정확히 대합이다.
        """
        half_width = float(np.sqrt(np.pi * scale * hbar * points / 2))
        return cls(n=n, half_width=half_width, points=points, hbar=hbar)

    @property
    def dim(self) -> int:
        return 2 * self.n

    @property
    def step(self) -> float:
        return 2 * self.half_width / self.points

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.points,) * self.dim

    @property
    def size(self) -> int:
        return self.points**self.dim

    @property
    def weight(self) -> float:
        """격자점당 구적 가중치 h^{2n}"""
        return self.step**self.dim

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.half_width + self.step * np.arange(self.points)

    def coordinates(self, sparse: bool = True) -> list[np.ndarray]:
        """축별 좌표 배열 (sparse면 브로드캐스트 가능한 형상)"""
        return np.meshgrid(*([self.axis] * self.dim), indexing="ij", sparse=sparse)

    def flat_points(self) -> np.ndarray:
        """(M^{2n}, 2n) 행 우선 순서의 격자점"""
        return np.stack([c.ravel() for c in self.coordinates(sparse=False)], axis=1)

    @property
    def interior(self) -> tuple[slice, ...]:
        """축마다 가운데 절반"""
        quarter = self.points // 4
        return (slice(quarter, self.points - quarter),) * self.dim

    def require_same(self, other: "PhaseGrid") -> None:
        if self != other:
            raise GridMismatchError(f"격자 불일치: {self} != {other}")


@dataclass(frozen=True, eq=False)
class GridSymbol:
    """격자 위 샘플 (constant면 해석적 상수, source면 정확한 평가 함수 보유)"""
    grid: PhaseGrid
    samples: np.ndarray
    constant: complex | None = None
    source: Evaluator | None = field(default=None, repr=False)

    def __post_init__(self) -> None:
        samples = np.asarray(self.samples, dtype=complex)
        if samples.shape != self.grid.shape:
            raise GridMismatchError(f"샘플 형상 {samples.shape} != 격자 {self.grid.shape}")
        if not np.isfinite(samples).all():
            raise ParameterError("샘플에 유한하지 않은 값이 있음")
        object.__setattr__(self, "samples", samples)

    @classmethod
    def filled(cls, grid: PhaseGrid, value: complex) -> "GridSymbol":
        """해석적으로 다루는 상수 심볼"""
        value = complex(value)
        samples = np.full(grid.shape, value, dtype=complex)
        return cls(grid, samples, constant=value, source=lambda z: _broadcast(value, z))

    @property
    def is_constant(self) -> bool:
        return self.constant is not None

    def norm(self) -> float:
        """구적 L² 노름"""
        return float(np.sqrt(np.sum(np.abs(self.samples) ** 2) * self.grid.weight))

    def inner(self, other: "GridSymbol") -> complex:
        """⟨self, other⟩ = Σ conj(self)·other·h^{2n}"""
        self.grid.require_same(other.grid)
        return complex(np.vdot(self.samples, other.samples) * self.grid.weight)

    def interior_sup(self) -> float:
        return float(np.abs(self.samples[self.grid.interior]).max())

    def sup_diff(self, other: "GridSymbol", interior: bool = True) -> float:
        """sup |self − other| (기본은 내부 영역)"""
        self.grid.require_same(other.grid)
        diff = np.abs(self.samples - other.samples)
        return float(diff[self.grid.interior].max() if interior else diff.max())

    def boundary_ratio(self) -> float:
        """경계 껍질의 최댓값 / 전체 최댓값"""
        magnitude = np.abs(self.samples)
        peak = magnitude.max()
        if peak == 0:
            return 0.0
        shell = max(
            max(np.take(magnitude, 0, axis=k).max(), np.take(magnitude, -1, axis=k).max())
            for k in range(magnitude.ndim)
        )
        return float(shell / peak)

    def decays(self, tol: float = DEFAULT_DECAY_TOL) -> bool:
        return self.boundary_ratio() <= tol

    def require_decay(self, tol: float = DEFAULT_DECAY_TOL, what: str = "심볼") -> None:
        """감쇠 플래그 확인 (상수 심볼은 해석적으로 다루므로 제외)"""
        if self.is_constant:
            return
        ratio = self.boundary_ratio()
        logger.debug(f"{what} 경계 비율 {ratio:.2e}")
        if ratio > tol:
            raise DecayError(
                f"{what}가 격자 경계에서 감쇠하지 않음 (비율 {ratio:.2e} > {tol:.0e}); L을 늘리세요"
            )

    def with_samples(self, samples: np.ndarray) -> "GridSymbol":
        return replace(self, samples=samples, constant=None, source=None)

    def __add__(self, other: "GridSymbol") -> "GridSymbol":
        self.grid.require_same(other.grid)
        return self.with_samples(self.samples + other.samples)

    def __sub__(self, other: "GridSymbol") -> "GridSymbol":
        self.grid.require_same(other.grid)
        return self.with_samples(self.samples - other.samples)

    def __mul__(self, value: complex) -> "GridSymbol":
        return self.with_samples(self.samples * value)

    __rmul__ = __mul__


def _broadcast(value, z: Sequence[np.ndarray]) -> np.ndarray:
    shape = np.broadcast_shapes(*(np.shape(c) for c in z)) if len(z) else ()
    return np.broadcast_to(np.asarray(value, dtype=complex), shape)


def expression_evaluator(e: Expr) -> Evaluator:
    """표현식을 점 배열에서 평가하는 함수"""
    return lambda z: _broadcast(evaluate(e, z), z)


def sample(e: Expr, grid: PhaseGrid) -> GridSymbol:
    """격자점에서 표현식을 평가

    변수가 없는 표현식은 해석적 상수 심볼이 된다.
    """
    if max_index(e) > grid.n:
        raise ParameterError(f"표현식 차원({max_index(e)})이 격자 n={grid.n}보다 큼")
    if max_index(e) == 0:
        return GridSymbol.filled(grid, complex(evaluate(e, [])))
    evaluator = expression_evaluator(e)
    samples = np.array(evaluator(grid.coordinates()), dtype=complex)
    return GridSymbol(grid, samples, source=evaluator)


def sample_function(grid: PhaseGrid, evaluator: Evaluator) -> GridSymbol:
    """정확한 평가 함수로 샘플링 (당김에서 재사용할 수 있게 source 보관)"""
    samples = np.array(_broadcast(evaluator(grid.coordinates()), grid.coordinates()))
    return GridSymbol(grid, samples, source=evaluator)


# --- 스펙트럼 연산 ---


def wavenumbers(grid: PhaseGrid) -> np.ndarray:
    """FFT 각파수 κ_k = 2πk/(2L), Nyquist 모드는 0"""
    k = np.fft.fftfreq(grid.points, d=1.0 / grid.points)
    kappa = np.pi * k / grid.half_width
    kappa[grid.points // 2] = 0.0
    return kappa


def spectral_derivative(samples: np.ndarray, grid: PhaseGrid, axis: int, order: int = 1) -> np.ndarray:
    """∂^order / ∂z_axis^order (주기적 삼각 보간의 미분)"""
    if order == 0:
        return samples
    shape = [1] * samples.ndim
    shape[axis] = grid.points
    factor = ((1j * wavenumbers(grid)) ** order).reshape(shape)
    return np.fft.ifft(np.fft.fft(samples, axis=axis) * factor, axis=axis)


def upsample_axis(samples: np.ndarray, axis: int, factor: int = 2) -> np.ndarray:
    """FFT 영 채우기로 간격을 1/factor로 세분 (원래 격자점 값은 유지)"""
    m = samples.shape[axis]
    spectrum = np.fft.fft(samples, axis=axis)
    spectrum = np.moveaxis(spectrum, axis, -1)
    padded = np.zeros(spectrum.shape[:-1] + (factor * m,), dtype=complex)
    half = m // 2
    padded[..., :half] = spectrum[..., :half]
    padded[..., -half + 1 :] = spectrum[..., half + 1 :]
    # Nyquist 모드는 양쪽에 반씩
    padded[..., half] = spectrum[..., half] / 2
    padded[..., -half] = spectrum[..., half] / 2
    fine = np.fft.ifft(padded, axis=-1) * factor
    return np.moveaxis(fine, -1, axis)


def _trig_eval(samples: np.ndarray, grid: PhaseGrid, axis: int, targets: np.ndarray) -> np.ndarray:
    """axis 방향 삼각 보간을 targets(같은 형상)의 좌표에서 평가"""
    spectrum = np.moveaxis(np.fft.fft(samples, axis=axis), axis, -1)
    targets = np.moveaxis(targets, axis, -1) + grid.half_width
    k = np.fft.fftfreq(grid.points, d=1.0 / grid.points)
    kappa = np.pi * k / grid.half_width
    result = np.zeros(targets.shape, dtype=complex)
    for index, wavenumber in enumerate(kappa):
        result += spectrum[..., index : index + 1] * np.exp(1j * wavenumber * targets)
    return np.moveaxis(result / grid.points, -1, axis)


def _shear(samples: np.ndarray, grid: PhaseGrid, axis: int, row: np.ndarray) -> np.ndarray:
    """g(u) = f(u_0, .., row·u, .., u_{2n−1})"""
    unit = np.zeros(grid.dim)
    unit[axis] = 1.0
    if np.array_equal(row, unit):
        return samples
    coordinates = grid.coordinates()
    targets = sum(weight * c for weight, c in zip(row, coordinates) if weight)
    targets = np.broadcast_to(targets, grid.shape)
    return _trig_eval(samples, grid, axis, targets)


def resample_linear(samples: np.ndarray, grid: PhaseGrid, matrix: np.ndarray) -> np.ndarray:
    """f ↦ f∘A 를 LU 분해(A = PLU)의 1차원 전단들로 계산

    각 전단은 한 축의 삼각 보간으로 정확하게 적용된다. 샘플은 감쇠해야 한다.
    """
    matrix = np.asarray(matrix, dtype=float)
    if np.array_equal(matrix, np.eye(grid.dim)):
        return np.asarray(samples, dtype=complex)
    p, lower, upper = linalg.lu(matrix)
    axes = [int(np.argmax(p[:, j])) for j in range(grid.dim)]
    result = np.transpose(np.asarray(samples, dtype=complex), axes)
    for i in range(grid.dim):
        result = _shear(result, grid, i, lower[i])
    for i in reversed(range(grid.dim)):
        result = _shear(result, grid, i, upper[i])
    return result


# --- CSV v1 ---

_CSV_TAG = "ncstar-grid v1"
_CSV_COMMENT = "# "


def write_grid_csv(symbol: GridSymbol, path) -> None:
    """헤더 한 줄 + 행 우선 순서의 "k1,...,k2n,re,im" 행"""
    grid = symbol.grid
    header = f"{_CSV_TAG}; n={grid.n}; M={grid.points}; L={grid.half_width!r}; hbar={grid.hbar!r}"
    indices = np.indices(grid.shape).reshape(grid.dim, -1).T
    values = symbol.samples.ravel()
    table = np.column_stack([indices, values.real, values.imag])
    # %.17g 는 float64 를 손실 없이 되읽는다
    fmt = ["%d"] * grid.dim + ["%.17g", "%.17g"]
    np.savetxt(path, table, fmt=fmt, delimiter=",", header=header, comments=_CSV_COMMENT, encoding="utf-8")


def _parse_header(line: str) -> PhaseGrid:
    parts = [part.strip() for part in line.strip().split(";")]
    if not parts or parts[0] != _CSV_COMMENT + _CSV_TAG:
        raise ConfigError(f"ncstar-grid v1 헤더가 아님: {line.strip()!r}")
    fields: dict[str, str] = {}
    for part in parts[1:]:
        key, sep, value = part.partition("=")
        if not sep:
            raise ConfigError(f"헤더 항목 형식 오류: {part!r}")
        fields[key.strip()] = value.strip()
    missing = {"n", "M", "L", "hbar"} - set(fields)
    if missing:
        raise ConfigError(f"헤더에 누락된 항목: {sorted(missing)}")
    try:
        return PhaseGrid(
            n=int(fields["n"]),
            half_width=float(fields["L"]),
            points=int(fields["M"]),
            hbar=float(fields["hbar"]),
        )
    except ValueError as e:
        raise ConfigError(f"헤더 값 오류: {e}") from e


def read_grid_csv(path) -> GridSymbol:
    """CSV v1 읽기 (헤더, 행 수, 열 수, 인덱스 순서를 검증)"""
    with open(path, encoding="utf-8") as f:
        grid = _parse_header(f.readline())
    try:
        with warnings.catch_warnings():
            # 본문이 비면 loadtxt 가 경고만 낸다. 행 수 검사에서 걸린다
            warnings.simplefilter("ignore", UserWarning)
            table = np.loadtxt(path, delimiter=",", comments="#", ndmin=2, encoding="utf-8")
    except ValueError as e:
        raise ConfigError(f"CSV 본문 형식 오류: {e}") from e

    rows, columns = table.shape
    if rows != grid.size:
        raise ConfigError(f"행 수 {rows} != M^(2n) = {grid.size}")
    if columns != grid.dim + 2:
        raise ConfigError(f"열 개수 {columns} != {grid.dim + 2}")
    expected = np.indices(grid.shape).reshape(grid.dim, -1).T
    misplaced = np.flatnonzero((table[:, : grid.dim] != expected).any(axis=1))
    if misplaced.size:
        row = int(misplaced[0])
        ks = [int(k) for k in table[row, : grid.dim]]
        raise ConfigError(f"{row + 2}행: 인덱스 {ks}가 행 우선 순서가 아님")

    values = table[:, -2] + 1j * table[:, -1]
    logger.info(f"격자 심볼 읽음: {path} (n={grid.n}, M={grid.points})")
    return GridSymbol(grid, values.reshape(grid.shape))


__all__ = [
    "DEFAULT_DECAY_TOL",
    "GridSymbol",
    "PhaseGrid",
    "expression_evaluator",
    "read_grid_csv",
    "resample_linear",
    "sample",
    "sample_function",
    "spectral_derivative",
    "upsample_axis",
    "wavenumbers",
    "write_grid_csv",
]
