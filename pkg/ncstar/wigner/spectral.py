"""Â′ 의 Weyl 행렬과 star-고윳값 문제 a ⋆_Ω Ψ = λΨ

Â′ 의 심볼은 a′(z) = a(sz) 이고 Ã_Ω 와 Â′ 의 고윳값은 같다. 고유함수는
Ψ = W_{s,φ}ψ 로 옮긴다.
"""

import json
import logging
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from ..errors import ParameterError, PolynomialError, SymbolError, TruncationError
from ..star.grid import DEFAULT_DECAY_TOL, GridSymbol, PhaseGrid
from ..star.moyal import star_grid_omega
from ..symbol.expr import Expr, compose_linear, evaluate, to_text
from ..symbol.poly import to_poly
from ..symplectic import NCParams, SeibergWittenMap
from .hermite import HermiteBasis, WaveFunction, wigner_pair_table
from .transform import w_s_phi

logger = logging.getLogger(__name__)

IMAG_TOL = 1e-10
SENTINEL_STEP = 4
NONPOLY_EXTRA_NODES = 8
NONPOLY_MIN_NODES = 24


def _symbol_degree(a: Expr, n: int) -> int | None:
    try:
        return to_poly(a, n).degree
    except PolynomialError:
        return None


def _gauss_hermite(count: int, hbar: float) -> tuple[np.ndarray, np.ndarray]:
    """가중치 e^{−x²/ħ} 를 노드 값에 흡수한 Gauss–Hermite 규칙"""
    t, w = np.polynomial.hermite.hermgauss(count)
    return np.sqrt(hbar) * t, np.sqrt(hbar) * w * np.exp(t**2)


def _quadrature(a: Expr, basis: HermiteBasis, grid: PhaseGrid | None):
    """(축 노드, 축 가중치, 방식: "lattice" | "gauss" | "exact")"""
    if grid is not None:
        if grid.n != basis.n or not np.isclose(grid.hbar, basis.hbar):
            raise ParameterError(f"격자(n={grid.n}, ħ={grid.hbar})와 기저가 맞지 않음")
        nodes = grid.axis
        weights = np.full(grid.points, grid.step)
    else:
        degree = _symbol_degree(a, basis.n)
        if degree is None:
            count = max(basis.K + NONPOLY_EXTRA_NODES, NONPOLY_MIN_NODES)
        else:
            count = basis.K + (degree + 1) // 2 + 1
        nodes, weights = _gauss_hermite(count, basis.hbar)
        return nodes, weights, "gauss" if degree is None else "exact"
    return nodes, weights, "lattice"


def _decay_guard(values: np.ndarray, factor: np.ndarray, n: int, tol: float) -> None:
    """경계 노드에서 |a′|·포락선이 최대값 대비 tol 이하인지

    factor는 (x_α, p_α) 평면의 포락선이다 (Gauss–Hermite는 e^{−|z|²/ħ},
    격자 구적은 Wigner 쌍 표의 최대 크기).
    """
    count = factor.shape[0]
    envelope = np.abs(values)
    on_edge = np.zeros(values.shape, dtype=bool)
    edge = np.zeros(count, dtype=bool)
    edge[[0, -1]] = True
    for alpha in range(n):
        shape = [1] * (2 * n)
        shape[alpha] = shape[n + alpha] = count
        envelope = envelope * factor.reshape(shape)
    for axis in range(2 * n):
        on_edge |= np.reshape(edge, [-1 if k == axis else 1 for k in range(2 * n)])
    peak = envelope.max()
    ratio = float(envelope[on_edge].max() / peak) if peak > 0 else 0.0
    logger.debug(f"Weyl 행렬 감쇠 비율 {ratio:.2e}")
    if ratio > tol:
        raise TruncationError(
            f"심볼이 구적 영역 경계에서 충분히 감쇠하지 않음 (비율 {ratio:.2e} > {tol:.0e}); "
            f"grid.half_width 또는 basis.K를 늘리세요"
        )


def weyl_matrix(
    a: Expr,
    s: SeibergWittenMap,
    basis: HermiteBasis,
    grid: PhaseGrid | None = None,
    decay_tol: float = DEFAULT_DECAY_TOL,
) -> np.ndarray:
    """m_jk = ⟨h_j, Â′h_k⟩ = ∫ a(sz) W(h_k, h_j)(z) dz

    기본은 Gauss–Hermite 텐서 구적이고 (다항식 심볼이면 정확), grid를 주면
    격자 구적을 쓴다. 행과 열은 기저의 평탄 인덱스 순서이다.

    Raises:
        TruncationError: 심볼이 구적 영역 경계에서 감쇠하지 않을 때
    """
    n = basis.n
    nodes, weights, mode = _quadrature(a, basis, grid)
    mesh = np.meshgrid(*([nodes] * (2 * n)), indexing="ij", sparse=True)
    values = np.broadcast_to(evaluate(compose_linear(a, s.s), mesh), (len(nodes),) * (2 * n))
    values = np.asarray(values, dtype=complex)

    x, p = np.meshgrid(nodes, nodes, indexing="ij")
    pairs = wigner_pair_table(basis.K, x, p, basis.hbar)
    # 다항식 심볼의 Gauss–Hermite 구적은 정확하므로 검사하지 않는다
    if mode == "lattice":
        _decay_guard(values, np.abs(pairs).max(axis=(0, 1)), n, decay_tol)
    elif mode == "gauss":
        _decay_guard(values, np.exp(-(x**2 + p**2) / basis.hbar), n, decay_tol)
    # table[k, j, x, p] = W(h_k, h_j)(x, p) · 구적 가중치
    table = pairs * np.outer(weights, weights)
    operands: list = [values, list(range(2 * n))]
    for alpha in range(n):
        operands += [table, [3 * n + alpha, 2 * n + alpha, alpha, n + alpha]]
    operands.append(list(range(2 * n, 4 * n)))
    matrix = np.einsum(*operands, optimize=True)
    size = basis.size
    logger.debug(f"Weyl 행렬 {size}×{size} ({len(nodes)} 노드/축)")
    return matrix.reshape(size, size)


@dataclass
class Spectrum:
    """star-고윳값 문제의 풀이"""
    eigenvalues: np.ndarray                 # 오름차순 실수
    eigenvectors: np.ndarray                # Hermite 계수, 열 단위
    residuals: list[float]
    converged: list[bool]
    params: NCParams
    s: SeibergWittenMap
    basis: HermiteBasis
    grid: PhaseGrid | None = None
    star_eigenfunctions: list[GridSymbol] | None = None
    warnings: list[str] = field(default_factory=list)

    @property
    def all_converged(self) -> bool:
        return all(self.converged)

    def to_dict(self) -> dict:
        grid = None
        if self.grid is not None:
            grid = {
                "n": self.grid.n,
                "M": self.grid.points,
                "L": self.grid.half_width,
                "hbar": self.grid.hbar,
            }
        return {
            "params": self.params.to_dict(),
            "s": self.s.s.tolist(),
            "eigenvalues": [float(v) for v in self.eigenvalues],
            "residuals": [float(r) for r in self.residuals],
            "converged": list(self.converged),
            "basis": {"K": self.basis.K, "n": self.basis.n, "hbar": self.basis.hbar},
            "grid": grid,
            "warnings": list(self.warnings),
        }

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, ensure_ascii=False)


def _require_real_polynomial(a: Expr, n: int) -> None:
    """다항식이 아니면 PolynomialError, 계수가 실수가 아니면 SymbolError"""
    poly = to_poly(a, n)
    if poly.max_imag() > IMAG_TOL:
        raise SymbolError(f"실수 심볼이 아님: {to_text(a)}")


def residual(
    a: Expr,
    big_psi: GridSymbol,
    eigenvalue: float,
    params: NCParams,
    s: SeibergWittenMap,
    decay_tol: float = DEFAULT_DECAY_TOL,
) -> float:
    """‖a⋆_ΩΨ − λΨ‖ / ‖Ψ‖ (격자 안쪽 절반에서의 구적 노름)"""
    grid = big_psi.grid
    product = star_grid_omega(a, big_psi, params, s, grid, decay_tol=decay_tol)
    inner = grid.interior
    defect = product.samples[inner] - eigenvalue * big_psi.samples[inner]
    norm = np.linalg.norm(big_psi.samples[inner])
    if norm == 0:
        raise ParameterError("Ψ 가 격자 안쪽에서 0")
    return float(np.linalg.norm(defect) / norm)


def _lowest(matrix: np.ndarray, count: int) -> tuple[np.ndarray, np.ndarray]:
    raw = np.linalg.eigvals(matrix)
    scale = max(1.0, float(np.abs(raw).max()))
    imag = float(np.abs(raw.imag).max())
    if imag > IMAG_TOL * scale:
        raise SymbolError(f"고윳값 허수부 {imag:.2e} > {IMAG_TOL:.0e}: 심볼이 실수가 아님")
    hermitian = (matrix + matrix.conj().T) / 2
    values, vectors = scipy.linalg.eigh(hermitian, subset_by_index=[0, count - 1])
    return values, vectors


def solve_stargen(
    a: Expr,
    params: NCParams,
    s: SeibergWittenMap,
    basis: HermiteBasis,
    grid: PhaseGrid,
    count: int,
    phi_index: int = 0,
    eigen_tol: float = 1e-8,
    residual_tol: float = 1e-4,
    decay_tol: float = DEFAULT_DECAY_TOL,
    with_eigenfunctions: bool = True,
) -> Spectrum:
    """실수 다항식 a 에 대해 a ⋆_Ω Ψ = λΨ 의 가장 낮은 count개 고유쌍

    Â′ 의 Weyl 행렬을 대각화하고 ψ_j 를 Ψ_j = W_{s,φ}ψ_j (φ = phi_index 번째
    Hermite 함수)로 옮긴 뒤 a⋆_Ω 잔차를 잰다. K를 4 늘렸을 때 고윳값 이동이
    10·eigen_tol 을 넘거나 잔차가 residual_tol 을 넘으면 수렴하지 않은 것으로 표시한다.

    Args:
        a: 실수 심볼
        params: 변형 파라미터 (격자 ħ와 같아야 함)
        s: SW 맵
        basis: Hermite 기저
        grid: Ψ_j 를 샘플링할 위상 공간 격자
        count: 고윳값 개수
        phi_index: 총 차수 순서로 센 창 함수 φ 의 번호

    Returns:
        Spectrum: 고윳값, 잔차, 수렴 여부와 경고
    """
    if count < 1 or count > basis.size:
        raise ParameterError(f"count={count} 는 1..{basis.size} 범위여야 함")
    _require_real_polynomial(a, basis.n)

    values, vectors = _lowest(weyl_matrix(a, s, basis, decay_tol=decay_tol), count)
    bigger = basis.resized(basis.K + SENTINEL_STEP)
    check = scipy.linalg.eigh(
        weyl_matrix(a, s, bigger, decay_tol=decay_tol), eigvals_only=True, subset_by_index=[0, count - 1]
    )
    shifts = np.abs(check - values)
    converged = [bool(shift <= 10 * eigen_tol) for shift in shifts]
    warnings = [
        f"λ_{j} = {values[j]:.10g}: K+{SENTINEL_STEP} 에서 {shifts[j]:.2e} 이동"
        for j in range(count)
        if not converged[j]
    ]

    residuals: list[float] = []
    functions: list[GridSymbol] | None = None
    if with_eigenfunctions:
        phi = basis.function(basis.ordered(phi_index + 1)[phi_index])
        functions = []
        for j in range(count):
            big_psi = w_s_phi(WaveFunction(basis, coefficients=vectors[:, j]), phi, s, grid)
            functions.append(big_psi)
            value = residual(a, big_psi, float(values[j]), params, s, decay_tol)
            residuals.append(value)
            if value > residual_tol:
                converged[j] = False
                warnings.append(f"λ_{j} = {values[j]:.10g}: 잔차 {value:.2e} > {residual_tol:.0e}")

    for message in warnings:
        logger.warning(message)
    logger.info(f"스펙트럼 {count}개 계산, 수렴 {sum(converged)}/{count}")
    return Spectrum(
        eigenvalues=values,
        eigenvectors=vectors,
        residuals=residuals,
        converged=converged,
        params=params,
        s=s,
        basis=basis,
        grid=grid,
        star_eigenfunctions=functions,
        warnings=warnings,
    )


def phase_space_spectrum(
    a: Expr,
    params: NCParams,
    s: SeibergWittenMap,
    basis: HermiteBasis,
    grid: PhaseGrid,
    count: int,
    decay_tol: float = DEFAULT_DECAY_TOL,
) -> np.ndarray:
    """range(W_{s,h₀}) 위 Ã_Ω 의 Galerkin 고윳값

    G_kl = ⟨Φ_k, a⋆_Ω Φ_l⟩, S_kl = ⟨Φ_k, Φ_l⟩, Φ_k = W_{s,h₀}h_k 로 일반화
    고윳값 문제 G v = λ S v 를 푼다.
    """
    if count < 1 or count > basis.size:
        raise ParameterError(f"count={count} 는 1..{basis.size} 범위여야 함")
    window = basis.function(0)
    family = [w_s_phi(basis.function(k), window, s, grid) for k in range(basis.size)]
    images = [star_grid_omega(a, phi_k, params, s, grid, decay_tol=decay_tol) for phi_k in family]
    galerkin = np.array([[f.inner(g) for g in images] for f in family])
    gram = np.array([[f.inner(g) for g in family] for f in family])
    galerkin = (galerkin + galerkin.conj().T) / 2
    gram = (gram + gram.conj().T) / 2
    return scipy.linalg.eigh(galerkin, gram, eigvals_only=True, subset_by_index=[0, count - 1])


__all__ = [
    "Spectrum",
    "phase_space_spectrum",
    "residual",
    "solve_stargen",
    "weyl_matrix",
]
