"""교차 Wigner 변환과 얽힘 연산자 W_{s,φ}

W(ψ,φ)(z) = (2πħ)^{−n} ∫ e^{−(i/ħ)p·y} ψ(x+½y) φ̄(x−½y) dy
W_{s,φ}ψ = M_s⁻¹[(2πħ)^{n/2} W(ψ,φ)]
"""

import logging
from functools import reduce

import numpy as np

from ..errors import GridMismatchError
from ..parallel import chunk_ranges, map_ordered
from ..star.grid import GridSymbol, PhaseGrid
from ..symplectic import SeibergWittenMap
from .hermite import HermiteBasis, WaveFunction, hermite_table, wigner_pair_table

logger = logging.getLogger(__name__)

POINT_CHUNK = 8192


def _check_compatible(basis: HermiteBasis, grid: PhaseGrid) -> None:
    if basis.n != grid.n or not np.isclose(basis.hbar, grid.hbar):
        raise GridMismatchError(
            f"기저(n={basis.n}, ħ={basis.hbar})와 격자(n={grid.n}, ħ={grid.hbar})가 맞지 않음"
        )


def _support(tensor: np.ndarray) -> tuple[int, ...]:
    """축별로 0이 아닌 계수가 있는 최대 인덱스 + 1"""
    nonzero = np.nonzero(tensor)
    if not nonzero[0].size:
        return (1,) * tensor.ndim
    return tuple(int(index.max()) + 1 for index in nonzero)


def _contract(left: np.ndarray, right: np.ndarray, tables: list[np.ndarray], out: list[int]) -> np.ndarray:
    """Σ_{j,k} left[j] right[k] Π_α tables_α[j_α, k_α, ...]"""
    n = left.ndim
    operands: list = [left, list(range(n)), right, list(range(n, 2 * n))]
    for alpha, table in enumerate(tables):
        operands += [table, [alpha, n + alpha] + [2 * n + k for k in range(table.ndim - 2)]]
    operands.append(out)
    return np.einsum(*operands, optimize=True)


def _fft_pair_table(rows: int, cols: int, grid: PhaseGrid, extent: float) -> np.ndarray:
    """1 자유도의 W(h_j, h_k)(x_a, p_l) 를 y-FFT로, 형상 (rows, cols, M, M)

    y 간격 Δ = πħ/L, 길이 qM 이면 p_l 은 FFT 주파수 q(l − M/2) 에 해당한다.
    """
    m, hbar = grid.points, grid.hbar
    delta = np.pi * hbar / grid.half_width
    q = max(1, int(np.ceil(4 * extent / (m * delta))))
    size = q * m
    y = (np.arange(size) - size // 2) * delta
    count = max(rows, cols)
    plus = hermite_table(count, grid.axis[:, None] + y[None, :] / 2, hbar)[:rows]
    minus = hermite_table(count, grid.axis[:, None] - y[None, :] / 2, hbar)[:cols]
    integrand = np.einsum("jxy,kxy->jkxy", plus, minus)
    spectrum = np.fft.fft(integrand, axis=-1)
    frequencies = q * (np.arange(m) - m // 2)
    sign = np.where(frequencies % 2 == 0, 1.0, -1.0)
    return spectrum[..., frequencies % size] * sign * delta / (2 * np.pi * hbar)


def cross_wigner(psi: WaveFunction, phi: WaveFunction, grid: PhaseGrid) -> GridSymbol:
    """격자 위 W(ψ, φ) (x 격자점마다 y 방향 FFT)

    ψ에 선형, φ에 켤레 선형이다.
    """
    basis = psi.basis
    _check_compatible(basis, grid)
    left = psi.coefficient_tensor()
    right = np.conj(phi.coefficient_tensor())
    rows, cols = _support(left), _support(right)
    left = left[tuple(slice(0, r) for r in rows)]
    right = right[tuple(slice(0, c) for c in cols)]
    tables = [
        _fft_pair_table(rows[alpha], cols[alpha], grid, basis.half_width) for alpha in range(grid.n)
    ]
    n = grid.n
    # table_α 축: (j_α, k_α, x_α, p_α)
    operands: list = [left, list(range(n)), right, list(range(n, 2 * n))]
    for alpha, table in enumerate(tables):
        operands += [table, [alpha, n + alpha, 2 * n + alpha, 3 * n + alpha]]
    operands.append(list(range(2 * n, 4 * n)))
    samples = np.einsum(*operands, optimize=True)
    return GridSymbol(grid, samples)


def _pair_values(left: np.ndarray, right: np.ndarray, points: np.ndarray, hbar: float) -> np.ndarray:
    """Σ left[j] right[k] W(h_j, h_k)(points) 의 정확한 값 (points: (P, 2n))"""
    n = left.ndim
    rows, cols = _support(left), _support(right)
    left = left[tuple(slice(0, r) for r in rows)]
    right = right[tuple(slice(0, c) for c in cols)]
    tables = []
    for alpha in range(n):
        count = max(rows[alpha], cols[alpha])
        table = wigner_pair_table(count, points[:, alpha], points[:, n + alpha], hbar)
        tables.append(table[: rows[alpha], : cols[alpha]])
    return _contract(left, right, tables, [2 * n])


def _intertwiner_scale(s: SeibergWittenMap, hbar: float) -> float:
    """(2πħ)^{n/2} |det s|^{−1/2}"""
    return (2 * np.pi * hbar) ** (s.n / 2) * abs(s.det) ** -0.5


def w_s_phi(
    psi: WaveFunction, phi: WaveFunction, s: SeibergWittenMap, grid: PhaseGrid
) -> GridSymbol:
    """W_{s,φ}ψ(z) = |det s|^{−1/2} (2πħ)^{n/2} W(ψ,φ)(s⁻¹z)

    s⁻¹z 에서 Wigner 쌍 점화식으로 정확하게 평가하며, 결과는 같은 평가 함수를
    source로 가진다.
    """
    _check_compatible(psi.basis, grid)
    left = psi.coefficient_tensor()
    right = np.conj(phi.coefficient_tensor())
    scale = _intertwiner_scale(s, grid.hbar)
    inverse = s.inverse

    def at_points(points: np.ndarray) -> np.ndarray:
        mapped = points @ inverse.T

        def block(bounds: tuple[int, int]) -> np.ndarray:
            start, stop = bounds
            return _pair_values(left, right, mapped[start:stop], grid.hbar)

        parts = map_ordered(block, chunk_ranges(len(points), POINT_CHUNK))
        return scale * np.concatenate(parts) if parts else np.zeros(0, dtype=complex)

    def evaluator(z):
        arrays = np.broadcast_arrays(*z)
        points = np.stack([a.ravel() for a in arrays], axis=1)
        return at_points(points).reshape(arrays[0].shape)

    samples = at_points(grid.flat_points()).reshape(grid.shape)
    return GridSymbol(grid, samples, source=evaluator)


def w_s_phi_adjoint(
    big_psi: GridSymbol, phi: WaveFunction, s: SeibergWittenMap, basis: HermiteBasis
) -> WaveFunction:
    """W_{s,φ}^∗Ψ: c_j = ⟨W_{s,φ}h_j, Ψ⟩ (격자 구적, 청크 순서대로 누적)"""
    grid = big_psi.grid
    _check_compatible(basis, grid)
    n = grid.n
    weights = phi.coefficient_tensor()
    cols = _support(weights)
    weights = weights[tuple(slice(0, c) for c in cols)]
    points = grid.flat_points() @ s.inverse.T
    values = big_psi.samples.ravel()
    scale = _intertwiner_scale(s, grid.hbar) * grid.weight

    def block(bounds: tuple[int, int]) -> np.ndarray:
        start, stop = bounds
        chunk = points[start:stop]
        tables = []
        for alpha in range(n):
            count = max(basis.K, cols[alpha])
            table = wigner_pair_table(count, chunk[:, alpha], chunk[:, n + alpha], grid.hbar)
            # conj W(h_j, h_k) = W(h_k, h_j)
            tables.append(np.conj(table[: basis.K, : cols[alpha]]))
        operands: list = [weights, list(range(n, 2 * n))]
        for alpha, table in enumerate(tables):
            operands += [table, [alpha, n + alpha, 2 * n]]
        operands += [values[start:stop], [2 * n], list(range(n))]
        return np.einsum(*operands, optimize=True)

    parts = map_ordered(block, chunk_ranges(grid.size, POINT_CHUNK))
    total = reduce(np.add, parts)
    return WaveFunction(basis, coefficients=scale * total.ravel())


def project_range(
    big_psi: GridSymbol, phi: WaveFunction, s: SeibergWittenMap, basis: HermiteBasis
) -> GridSymbol:
    """P_{s,φ}Ψ = W_{s,φ}W_{s,φ}^∗Ψ (range(W_{s,φ}) 위로의 직교 사영)"""
    coefficients = w_s_phi_adjoint(big_psi, phi, s, basis)
    return w_s_phi(coefficients, phi, s, big_psi.grid)


def ob_basis(
    s: SeibergWittenMap, basis: HermiteBasis, count: int, grid: PhaseGrid
) -> list[GridSymbol]:
    """Φ_{j,k} = W_{s,φ_j}φ_k (j, k < count), j 우선 순서

    φ_j 는 총 차수 순으로 정렬한 Hermite 함수이다.
    """
    indices = basis.ordered(count)
    if len(indices) < count:
        raise GridMismatchError(f"기저 함수가 {count}개보다 적음 (K^n = {basis.size})")
    functions = [basis.function(j) for j in indices]
    logger.debug(f"Φ 기저 {count * count}개 생성")
    return [w_s_phi(phi_k, phi_j, s, grid) for phi_j in functions for phi_k in functions]


__all__ = [
    "cross_wigner",
    "ob_basis",
    "project_range",
    "w_s_phi",
    "w_s_phi_adjoint",
]
