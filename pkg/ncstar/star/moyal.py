"""격자 위 Moyal 곱과 Seiberg–Witten 당김을 이용한 Ω-스타곱

Moyal 곱은 Weyl 심볼 → 연산자 커널 → 커널 곱 → Weyl 심볼 순서로 계산한다.
커널 규약: (a⋆b)(z) = (πħ)^{−2n} ∬ a(z′)b(z″) e^{−(2i/ħ)σ(z−z′, z−z″)} dz′dz″
(x⋆p = xp + iħ/2 와 같은 부호).
"""

import logging

import numpy as np

from ..errors import GridMismatchError, PolynomialError
from ..symbol.expr import Expr, evaluate, max_index
from ..symbol.poly import PolySymbol, to_poly
from ..symplectic import NCParams, SeibergWittenMap, check_admissible
from .bopp import BoppOperator, omega_fractions
from .grid import (
    DEFAULT_DECAY_TOL,
    GridSymbol,
    PhaseGrid,
    resample_linear,
    sample,
    spectral_derivative,
    upsample_axis,
)
from .transform import compose_symbol

logger = logging.getLogger(__name__)


def _weyl_to_kernel(samples: np.ndarray, grid: PhaseGrid) -> np.ndarray:
    """Weyl 심볼 a(x, p) → 커널 ρ(x_r, x_c), 형상 (M,)*n + (M,)*n

    ρ(x, y) = (2πħ)^{−n} ∫ a((x+y)/2, p) e^{(i/ħ)p·(x−y)} dp
    """
    n, m, h, hbar = grid.n, grid.points, grid.step, grid.hbar
    # 중점 (x_r + x_c)/2 는 간격 h/2 격자의 r+c 번째 점
    fine = samples
    for axis in range(n):
        fine = upsample_axis(fine, axis, 2)

    d = np.arange(-(m - 1), m)
    phase = np.exp(1j / hbar * np.outer(grid.axis, d * h))  # (k, d)
    phase[:, np.abs(d * h) > np.pi * hbar / h] = 0.0
    phase *= h / (2 * np.pi * hbar)
    r, c = np.meshgrid(np.arange(m), np.arange(m), indexing="ij")

    labels = [("x", k) for k in range(n)] + [("p", k) for k in range(n)]
    result = fine
    for alpha in range(n):
        order = [labels.index(("x", alpha)), labels.index(("p", alpha))]
        rest = [k for k in range(len(labels)) if k not in order]
        result = np.transpose(result, rest + order)
        labels = [labels[k] for k in rest] + [("r", alpha), ("c", alpha)]
        g = result @ phase  # (..., j, d)
        result = g[..., r + c, r - c + m - 1]
    target = [("r", k) for k in range(n)] + [("c", k) for k in range(n)]
    return np.transpose(result, [labels.index(t) for t in target])


def _kernel_to_weyl(kernel: np.ndarray, grid: PhaseGrid) -> np.ndarray:
    """커널 ρ(x_r, x_c) → Weyl 심볼

    a(x, p) = ∫ ρ(x + y/2, x − y/2) e^{−(i/ħ)p·y} dy, y = 2mh
    """
    n, m, h, hbar = grid.n, grid.points, grid.step, grid.hbar
    shifts = np.arange(-(m - 1), m)
    k = np.arange(m)[:, None]
    rows, cols = k + shifts, k - shifts
    valid = (rows >= 0) & (rows < m) & (cols >= 0) & (cols < m)
    rows, cols = np.clip(rows, 0, m - 1), np.clip(cols, 0, m - 1)
    phase = 2 * h * np.exp(-1j / hbar * np.outer(2 * shifts * h, grid.axis))  # (shift, l)

    labels = [("r", k) for k in range(n)] + [("c", k) for k in range(n)]
    result = kernel
    for alpha in range(n):
        order = [labels.index(("r", alpha)), labels.index(("c", alpha))]
        rest = [k for k in range(len(labels)) if k not in order]
        result = np.transpose(result, rest + order)
        labels = [labels[k] for k in rest] + [("x", alpha), ("p", alpha)]
        gathered = result[..., rows, cols] * valid  # (..., k, shift)
        result = gathered @ phase
    target = [("x", k) for k in range(n)] + [("p", k) for k in range(n)]
    return np.transpose(result, [labels.index(t) for t in target])


def moyal_star_fft(
    a: GridSymbol,
    b: GridSymbol,
    hbar: float | None = None,
    decay_tol: float = DEFAULT_DECAY_TOL,
) -> GridSymbol:
    """격자 위 Moyal 곱 a ⋆ b

    x 방향 FFT 영 채우기(2배)로 커널을 만들고 커널을 행렬 곱으로 합성한다.
    πħ/h ≥ 2L 이면 전체 상자에서 앨리어싱이 없다. 상수 심볼은 항등원으로
    해석적으로 처리한다.

    Raises:
        GridMismatchError: 격자나 ħ가 다를 때
        DecayError: 입력이 감쇠하지 않을 때
    """
    grid = a.grid
    grid.require_same(b.grid)
    if hbar is not None and not np.isclose(hbar, grid.hbar):
        raise GridMismatchError(f"ħ={hbar} 가 격자 ħ={grid.hbar} 와 다름")
    if a.is_constant and b.is_constant:
        return GridSymbol.filled(grid, a.constant * b.constant)
    if a.is_constant:
        return b.with_samples(a.constant * b.samples)
    if b.is_constant:
        return a.with_samples(b.constant * a.samples)
    a.require_decay(decay_tol, "왼쪽 인자")
    b.require_decay(decay_tol, "오른쪽 인자")

    if np.pi * grid.hbar / grid.step < 2 * grid.half_width:
        logger.debug("πħ/h < 2L: 커널 대각선에서 먼 항은 잘림")
    size = grid.points**grid.n
    left = _weyl_to_kernel(a.samples, grid).reshape(size, size)
    right = _weyl_to_kernel(b.samples, grid).reshape(size, size)
    product = (left @ right) * grid.step**grid.n
    samples = _kernel_to_weyl(product.reshape((grid.points,) * grid.dim), grid)
    return a.with_samples(samples)


# --- Ω-스타곱 ---


def _as_poly(e, n: int) -> PolySymbol | None:
    if not isinstance(e, Expr):
        return None
    try:
        return to_poly(e, n)
    except PolynomialError:
        return None


def _spectral_omega_powers(b: GridSymbol, params: NCParams):
    """(Ω∂)^γ b 를 스펙트럼 미분으로 (메모이제이션)"""
    rows = omega_fractions(params)
    grid = b.grid
    cache = {(0,) * grid.dim: b.samples}

    def power(gamma):
        if gamma in cache:
            return cache[gamma]
        alpha = next(k for k, g in enumerate(gamma) if g)
        lower = power(gamma[:alpha] + (gamma[alpha] - 1,) + gamma[alpha + 1 :])
        value = np.zeros(grid.shape, dtype=complex)
        for beta, weight in enumerate(rows[alpha]):
            if weight:
                value += float(weight) * spectral_derivative(lower, grid, beta)
        cache[gamma] = value
        return value

    return power


def _bopp_on_grid(
    operator: BoppOperator, other, grid: PhaseGrid, decay_tol: float
) -> GridSymbol:
    """다항식 심볼의 Bopp 연산자를 격자 위 다른 인자에 적용"""
    coordinates = grid.coordinates()
    if isinstance(other, Expr):
        image = operator.apply_expr(other)
        values = np.broadcast_to(image.evaluate(coordinates), grid.shape)
        return GridSymbol(grid, np.array(values, dtype=complex))
    other.require_decay(decay_tol, "Bopp 입력")
    power = _spectral_omega_powers(other, operator.params)
    values = np.zeros(grid.shape, dtype=complex)
    for gamma, coefficient in operator.expansion:
        values += np.broadcast_to(coefficient.evaluate(coordinates), grid.shape) * power(gamma)
    return GridSymbol(grid, values)


def bopp_image_on_grid(a: Expr, b: Expr, params: NCParams, grid: PhaseGrid) -> GridSymbol | None:
    """한쪽이 다항식이면 정확한 미분으로 만든 a ⋆_Ω b 의 격자 값, 아니면 None"""
    poly_a = _as_poly(a, params.n)
    if poly_a is not None:
        return _bopp_on_grid(BoppOperator.from_symbol(poly_a, params), b, grid, DEFAULT_DECAY_TOL)
    poly_b = _as_poly(b, params.n)
    if poly_b is not None:
        operator = BoppOperator.from_symbol(poly_b, params, side="right")
        return _bopp_on_grid(operator, a, grid, DEFAULT_DECAY_TOL)
    return None


def star_grid_omega(
    a: "Expr | GridSymbol",
    b: "Expr | GridSymbol",
    params: NCParams,
    s: SeibergWittenMap,
    grid: PhaseGrid,
    interpolate: bool = False,
    decay_tol: float = DEFAULT_DECAY_TOL,
) -> GridSymbol:
    """격자 위 a ⋆_Ω b

    경로 선택:
    - 상수 인자: 해석적 항등원
    - a가 다항식: 왼쪽 Bopp 연산자 (b가 표현식이면 정확한 미분, 샘플이면 스펙트럼 미분)
    - b가 다항식: 오른쪽 Bopp 연산자
    - 그 외: a′ = a∘s, b′ = b∘s 를 정확히 평가해 Moyal 곱을 구하고 s⁻¹ 로 되돌림

    Args:
        a, b: 표현식 또는 격자 심볼
        params: 변형 파라미터
        s: sJsᵀ = Ω 인 SW 맵
        grid: 결과 격자
        interpolate: 샘플만 있는 입력의 재표본 허용

    Returns:
        GridSymbol: a ⋆_Ω b 의 샘플
    """
    check_admissible(params)
    if not np.isclose(grid.hbar, params.hbar) or grid.n != params.n:
        raise GridMismatchError(f"격자 ħ={grid.hbar} 와 파라미터 ħ={params.hbar} 가 다름")
    for operand in (a, b):
        if isinstance(operand, GridSymbol):
            grid.require_same(operand.grid)

    left = sample(a, grid) if isinstance(a, Expr) and max_index(a) == 0 else a
    right = sample(b, grid) if isinstance(b, Expr) and max_index(b) == 0 else b
    if isinstance(left, GridSymbol) and left.is_constant:
        other = sample(right, grid) if isinstance(right, Expr) else right
        return moyal_star_fft(left, other)
    if isinstance(right, GridSymbol) and right.is_constant:
        other = sample(left, grid) if isinstance(left, Expr) else left
        return moyal_star_fft(other, right)

    poly_a = _as_poly(a, params.n)
    if poly_a is not None:
        logger.debug("왼쪽 Bopp 경로")
        return _bopp_on_grid(BoppOperator.from_symbol(poly_a, params), b, grid, decay_tol)
    poly_b = _as_poly(b, params.n)
    if poly_b is not None:
        logger.debug("오른쪽 Bopp 경로")
        operator = BoppOperator.from_symbol(poly_b, params, side="right")
        return _bopp_on_grid(operator, a, grid, decay_tol)

    logger.debug("SW 당김 경로")
    pulled_a = compose_symbol(a, s.s, grid, interpolate, decay_tol)
    pulled_b = compose_symbol(b, s.s, grid, interpolate, decay_tol)
    product = moyal_star_fft(pulled_a, pulled_b, decay_tol=decay_tol)
    if s.is_identity:
        return product
    product.require_decay(decay_tol, "당김 곱")
    return product.with_samples(resample_linear(product.samples, grid, s.inverse))


__all__ = ["bopp_image_on_grid", "moyal_star_fft", "star_grid_omega"]
