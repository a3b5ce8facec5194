"""Ω-심플렉틱 푸리에 변환, 이동, 팽창, 그리고 Ã_Ω 의 dense 구적

dense 경로는 검증 기준(oracle)이며 격자점 수가 DENSE_MAX_POINTS 이하일 때만 쓴다.
"""

import logging
from dataclasses import dataclass
from typing import Literal

import numpy as np

from ..config import DENSE_MAX_POINTS
from ..errors import (
    DecayError,
    GridMismatchError,
    GridSizeError,
    InterpolationRequiredError,
)
from ..parallel import chunk_ranges, map_ordered
from ..symbol.expr import Expr, evaluate, max_index
from ..symplectic import NCParams, OmegaMatrix, SeibergWittenMap, build_omega
from .grid import (
    DEFAULT_DECAY_TOL,
    GridSymbol,
    PhaseGrid,
    expression_evaluator,
    resample_linear,
    sample,
    sample_function,
    wavenumbers,
)

logger = logging.getLogger(__name__)

ROW_CHUNK = 256
ALIGN_TOL = 1e-9

Direction = Literal["forward", "inverse"]


def _require_dense(grid: PhaseGrid) -> None:
    if grid.size > DENSE_MAX_POINTS:
        raise GridSizeError(
            f"dense 모드 격자점 상한 초과: {grid.size} > {DENSE_MAX_POINTS} (M을 줄이세요)"
        )


def _require_hbar(grid: PhaseGrid, omega: OmegaMatrix) -> None:
    if grid.n != omega.n or not np.isclose(grid.hbar, omega.hbar):
        raise GridMismatchError(
            f"격자(n={grid.n}, ħ={grid.hbar})와 Ω(n={omega.n}, ħ={omega.hbar})가 맞지 않음"
        )


def _sft_constant(omega: OmegaMatrix, grid: PhaseGrid) -> float:
    """(2πħ)^{−n} |det Ω|^{−1/2} h^{2n}"""
    return (2 * np.pi * omega.hbar) ** (-omega.n) * abs(omega.det) ** -0.5 * grid.weight


def _sft_at(
    targets: np.ndarray, values: np.ndarray, grid: PhaseGrid, omega: OmegaMatrix
) -> np.ndarray:
    """격자 샘플 values의 F_Ω 를 임의의 점 targets (T, 2n) 에서 구적"""
    lattice = grid.flat_points()
    projected = lattice @ omega.inverse.T  # 행 u → Ω⁻¹u
    scale = _sft_constant(omega, grid)

    def block(bounds: tuple[int, int]) -> np.ndarray:
        start, stop = bounds
        phase = targets[start:stop] @ projected.T  # ω(w, u) = w·Ω⁻¹u
        return np.exp(-1j / omega.hbar * phase) @ values

    parts = map_ordered(block, chunk_ranges(len(targets), ROW_CHUNK))
    return scale * np.concatenate(parts)


def sft_omega_dense(
    a: GridSymbol, omega: OmegaMatrix, decay_tol: float = DEFAULT_DECAY_TOL
) -> GridSymbol:
    """F_Ω a(z) = (2πħ)^{−n}|det Ω|^{−1/2} ∫ e^{−(i/ħ)ω(z,z′)} a(z′)dz′ 의 격자 구적

    Raises:
        GridSizeError: 격자가 dense 모드 상한보다 클 때
        DecayError: a가 경계에서 감쇠하지 않을 때 (상수 포함)
    """
    grid = a.grid
    _require_dense(grid)
    _require_hbar(grid, omega)
    if a.is_constant:
        raise DecayError("상수 심볼의 F_Ω 는 델타 함수라 격자에서 표현할 수 없음")
    a.require_decay(decay_tol, "F_Ω 입력")
    result = _sft_at(grid.flat_points(), a.samples.ravel(), grid, omega)
    return a.with_samples(result.reshape(grid.shape))


def translate_omega(
    psi: GridSymbol,
    z0: np.ndarray,
    omega: OmegaMatrix,
    interpolate: bool = False,
    decay_tol: float = DEFAULT_DECAY_TOL,
) -> GridSymbol:
    """T̃_Ω(z0)Ψ(z) = e^{−(i/ħ)ω(z,z0)} Ψ(z − z0/2)

    z0/2 의 성분이 격자 간격의 정수배면 주기적 이동, 아니면 interpolate=True 일 때만
    스펙트럼 이동을 쓴다.
    """
    grid = psi.grid
    _require_hbar(grid, omega)
    z0 = np.asarray(z0, dtype=float)
    shift = z0 / 2 / grid.step
    rounded = np.round(shift)
    aligned = bool(np.all(np.abs(shift - rounded) <= ALIGN_TOL))
    if not aligned and not interpolate:
        raise InterpolationRequiredError(
            f"z0/2 = {z0 / 2} 가 격자 간격 {grid.step:g}의 정수배가 아님 (보간 모드 필요)"
        )

    if not z0.any():
        shifted = psi.samples
    else:
        psi.require_decay(decay_tol, "이동 입력")
        if aligned:
            shifted = np.roll(psi.samples, tuple(int(k) for k in rounded), axis=tuple(range(grid.dim)))
        else:
            shifted = _spectral_shift(psi.samples, grid, z0 / 2)

    direction = omega.inverse @ z0
    phase = sum(c * w for c, w in zip(grid.coordinates(), direction))
    return psi.with_samples(np.exp(-1j / omega.hbar * phase) * shifted)


def _spectral_shift(samples: np.ndarray, grid: PhaseGrid, offset: np.ndarray) -> np.ndarray:
    """Ψ(z − offset) (삼각 보간)"""
    spectrum = np.fft.fftn(samples)
    kappa = wavenumbers(grid)
    factor = np.ones(grid.shape, dtype=complex)
    for axis, d in enumerate(offset):
        shape = [1] * grid.dim
        shape[axis] = grid.points
        factor = factor * np.exp(-1j * kappa * d).reshape(shape)
    return np.fft.ifftn(spectrum * factor)


def compose_symbol(
    psi: "GridSymbol | Expr",
    matrix: np.ndarray,
    grid: PhaseGrid | None = None,
    interpolate: bool = False,
    decay_tol: float = DEFAULT_DECAY_TOL,
) -> GridSymbol:
    """f ↦ f∘A (행렬 계수 없이)

    표현식이나 source가 있는 심볼은 정확하게 평가하고, 샘플만 있는 심볼은
    interpolate=True 일 때 삼각 보간으로 재표본한다.
    """
    matrix = np.asarray(matrix, dtype=float)
    if isinstance(psi, Expr):
        if grid is None:
            raise GridMismatchError("표현식 입력에는 grid가 필요함")
        if max_index(psi) == 0:
            return GridSymbol.filled(grid, complex(evaluate(psi, [])))
        evaluator = expression_evaluator(psi)
    else:
        grid = psi.grid
        if psi.is_constant:
            return psi
        evaluator = psi.source
        if evaluator is None:
            if not interpolate:
                raise InterpolationRequiredError(
                    "샘플 기반 심볼의 선형 당김에는 보간 모드가 필요함"
                )
            psi.require_decay(decay_tol, "재표본 입력")
            logger.debug("샘플 기반 심볼을 LU 전단으로 재표본")
            return psi.with_samples(resample_linear(psi.samples, grid, matrix))

    if np.array_equal(matrix, np.eye(grid.dim)):
        return sample_function(grid, evaluator)

    def composed(z):
        mapped = [sum(w * c for w, c in zip(row, z) if w) for row in matrix]
        return evaluator(mapped)

    return sample_function(grid, composed)


def apply_ms(
    psi: "GridSymbol | Expr",
    s: SeibergWittenMap,
    direction: Direction = "forward",
    grid: PhaseGrid | None = None,
    interpolate: bool = False,
) -> GridSymbol:
    """M_sΨ(z) = √|det s| Ψ(sz), inverse는 M_{s⁻¹}

    Raises:
        InterpolationRequiredError: 샘플 기반 입력인데 interpolate=False 일 때
    """
    if direction == "forward":
        matrix, det = s.s, abs(s.det)
    elif direction == "inverse":
        matrix, det = s.inverse, 1 / abs(s.det)
    else:
        raise ValueError(f"알 수 없는 방향: {direction}")
    composed = compose_symbol(psi, matrix, grid, interpolate)
    factor = np.sqrt(det)
    source = composed.source
    scaled_source = None if source is None else (lambda z: factor * source(z))
    if composed.is_constant:
        return GridSymbol.filled(composed.grid, factor * composed.constant)
    return GridSymbol(composed.grid, factor * composed.samples, source=scaled_source)


# --- Ã_Ω 의 dense 커널 ---


@dataclass(frozen=True, eq=False)
class DenseOperator:
    """격자 위 (M^{2n} × M^{2n}) 행렬 연산자"""
    matrix: np.ndarray
    grid: PhaseGrid

    def apply(self, psi: GridSymbol) -> GridSymbol:
        self.grid.require_same(psi.grid)
        values = self.matrix @ psi.samples.ravel() * self.grid.weight
        return psi.with_samples(values.reshape(self.grid.shape))

    __call__ = apply


class _Kernel:
    """K(z,u) = (2/πħ)^n |det Ω|^{−1/2} F_Ω a[2(z−u)] e^{(2i/ħ)ω(z,u)}"""

    def __init__(self, a: GridSymbol, omega: OmegaMatrix, decay_tol: float):
        grid = a.grid
        self.grid = grid
        self.omega = omega
        m = grid.points
        # 2(z − u) = 2h·d, d ∈ [−(M−1), M−1]^{2n}
        offsets = np.arange(-(m - 1), m)
        mesh = np.meshgrid(*([offsets] * grid.dim), indexing="ij")
        targets = 2 * grid.step * np.stack([c.ravel() for c in mesh], axis=1)
        table = _sft_at(targets, a.samples.ravel(), grid, omega)
        # 격자 합은 |(Ω⁻ᵀw)_k| < πħ/h 에서만 F_Ω a 를 분해한다 (그 밖은 주기적 복제)
        level = np.abs(targets @ omega.inverse).max(axis=1) * grid.step / (np.pi * omega.hbar)
        band = level < 1.0
        margin = 2 * grid.step**2 * np.abs(omega.inverse).max() / (np.pi * omega.hbar)
        edge = band & (level >= level[band].max() - margin)
        ratio = _edge_ratio(table, band, edge)
        logger.debug(f"F_Ω a 대역 경계 비율 {ratio:.2e} (대역 내 {int(band.sum())}/{band.size})")
        if ratio > decay_tol:
            raise DecayError(f"F_Ω a 가 분해 가능한 대역 안에서 감쇠하지 않음 (비율 {ratio:.2e})")
        self.table = np.where(band, table, 0.0)
        self.prefactor = (2 / (np.pi * omega.hbar)) ** omega.n * abs(omega.det) ** -0.5
        self.indices = np.indices(grid.shape).reshape(grid.dim, -1).T
        self.lattice = grid.flat_points()
        self.projected = self.lattice @ omega.inverse.T

    def rows(self, bounds: tuple[int, int]) -> np.ndarray:
        start, stop = bounds
        m = self.grid.points
        width = 2 * m - 1
        d = self.indices[start:stop, None, :] - self.indices[None, :, :] + (m - 1)
        flat = np.zeros(d.shape[:2], dtype=np.int64)
        for axis in range(self.grid.dim):
            flat = flat * width + d[..., axis]
        phase = self.lattice[start:stop] @ self.projected.T
        return self.prefactor * self.table[flat] * np.exp(2j / self.omega.hbar * phase)


def _edge_ratio(table: np.ndarray, band: np.ndarray, edge: np.ndarray) -> float:
    """대역 가장자리의 최댓값 / 대역 안 최댓값"""
    magnitude = np.abs(table)
    peak = magnitude[band].max()
    if peak == 0:
        return 0.0
    return float(magnitude[edge].max() / peak)


def kernel_operator(
    a: Expr, grid: PhaseGrid, omega: OmegaMatrix, decay_tol: float = DEFAULT_DECAY_TOL
) -> DenseOperator:
    """Ã_Ω 의 커널을 행렬로 (작은 격자 전용)"""
    _require_dense(grid)
    _require_hbar(grid, omega)
    symbol = sample(a, grid)
    symbol.require_decay(decay_tol, "심볼 a")
    kernel = _Kernel(symbol, omega, decay_tol)
    matrix = np.concatenate(map_ordered(kernel.rows, chunk_ranges(grid.size, ROW_CHUNK)))
    return DenseOperator(matrix=matrix, grid=grid)


def apply_kernel(
    a: Expr, psi: GridSymbol, omega: OmegaMatrix, decay_tol: float = DEFAULT_DECAY_TOL
) -> GridSymbol:
    """Ω 행렬 수준의 Ã_Ω Ψ (손으로 만든 Ω = cJ 검증에도 사용)"""
    grid = psi.grid
    _require_dense(grid)
    _require_hbar(grid, omega)
    if max_index(a) == 0:
        # 상수 심볼 c 의 연산자는 c·항등
        return psi.with_samples(complex(evaluate(a, [])) * psi.samples)
    symbol = sample(a, grid)
    symbol.require_decay(decay_tol, "심볼 a")
    psi.require_decay(decay_tol, "Ψ")
    kernel = _Kernel(symbol, omega, decay_tol)
    vector = psi.samples.ravel()

    def block(bounds: tuple[int, int]) -> np.ndarray:
        return kernel.rows(bounds) @ vector

    values = np.concatenate(map_ordered(block, chunk_ranges(grid.size, ROW_CHUNK)))
    return psi.with_samples((values * grid.weight).reshape(grid.shape))


def apply_A_omega_dense(  # noqa: N802
    a: Expr, psi: GridSymbol, params: NCParams, decay_tol: float = DEFAULT_DECAY_TOL
) -> GridSymbol:
    """Ã_Ω Ψ 를 커널 K(z,u) 의 dense 구적으로 계산

    Args:
        a: 심볼 표현식 (a = 1 이면 해석적으로 항등)
        psi: 격자 위 Ψ
        params: 변형 파라미터

    Returns:
        GridSymbol: Ã_Ω Ψ
    """
    return apply_kernel(a, psi, build_omega(params), decay_tol)


__all__ = [
    "DenseOperator",
    "apply_A_omega_dense",
    "apply_kernel",
    "apply_ms",
    "compose_symbol",
    "kernel_operator",
    "sft_omega_dense",
    "translate_omega",
]
