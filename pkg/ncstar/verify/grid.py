"""격자 경로 검사 (Moyal FFT, SW 당김, F_Ω, dense 구적)"""

import logging
import math
from typing import Iterator

import numpy as np

from ..config import RunConfig
from ..star.grid import PhaseGrid, sample, spectral_derivative
from ..star.moyal import bopp_image_on_grid, moyal_star_fft, star_grid_omega
from ..star.transform import apply_A_omega_dense, apply_ms, sft_omega_dense, translate_omega
from ..symbol.expr import ONE, Expr, Var
from ..symbol.parser import parse
from ..symplectic import (
    NCParams,
    OmegaMatrix,
    Schedule,
    SeibergWittenMap,
    build_omega,
    pair_matrix,
    solve_sw_map,
)
from ..wigner.transform import w_s_phi
from .base import Check, Suite
from .fixtures import compact_grid, damped, gaussian, pulled_gaussian, relative_sup

logger = logging.getLogger(__name__)

# n=1 자기쌍대 격자 (64² 점이 dense 상한과 같다)
DENSE_POINTS = 64
# n=2 에서 θ₁₂/ħ = 1 로 맞춘 격자 (8⁴ 점이 dense 상한과 같다)
NC_LATTICE_POINTS = 8
ROUNDOFF_TOL = 1e-10
SFT_TOL = 1e-8
# 보간 재표본이 두 번 들어가는 검사의 허용 배수
ASSOCIATIVITY_FACTOR = 10
# det = 1 전단 (n=1 에서 심플렉틱)
PULLBACK_SHEAR = ((1.0, 0.25), (0.0, 1.0))

# 교환자 극한: ħ 마다 πħ/h ≥ 2L 인 격자를 새로 잡는다
SLOPE_HBARS = (0.5, 0.25, 0.125, 0.0625)
SLOPE_HALF_WIDTH = 5.0
SLOPE_FLOOR = 0.9
SCHEDULE_ALPHA = 3.0
SCHEDULE_SLOPE_TOL = 0.05


class GridSuite(Suite):
    """격자 위 스타곱과 변환의 성질"""

    name = "grid"

    def checks(self, config: RunConfig) -> Iterator[Check]:
        params = config.params()
        s = config.sw_map()
        grid = config.phase_grid()
        n, hbar = params.n, params.hbar
        tol = config.tol(config.tolerances.grid)
        decay = config.tolerances.decay
        logger.debug(f"격자 L={grid.half_width:g}, M={grid.points}, SW 맵 det={s.det:.6g}")

        psi_expr = gaussian(n, hbar)
        psi = sample(psi_expr, grid)
        yield Check("sample_decay", psi.boundary_ratio(), decay)

        left = star_grid_omega(ONE, psi, params, s, grid, decay_tol=decay)
        right = star_grid_omega(psi, ONE, params, s, grid, decay_tol=decay)
        value = max(relative_sup(left.samples, psi.samples), relative_sup(right.samples, psi.samples))
        yield Check("unital_grid", value, ROUNDOFF_TOL)

        yield from self._moyal_checks(params, s, grid, tol, decay)
        yield from self._transform_checks(params, s, psi_expr, psi, grid)
        yield from self._dense_checks(hbar, tol, decay)
        yield from self._commutator_checks(decay)
        yield from self._wigner_checks(config, params, s, tol, decay)

    def _moyal_checks(
        self, params: NCParams, s: SeibergWittenMap, grid: PhaseGrid, tol: float, decay: float
    ):
        n, hbar = params.n, params.hbar
        commutative = NCParams(n=n, hbar=hbar)
        a = damped(Var("x", 1), n, hbar)
        b = damped(Var("p", 1), n, hbar)
        routed = star_grid_omega(a, b, commutative, SeibergWittenMap.identity(n), grid, decay_tol=decay)
        direct = moyal_star_fft(sample(a, grid), sample(b, grid), decay_tol=decay)
        yield Check.exact("moyal_reduction_grid", bool(np.array_equal(routed.samples, direct.samples)))

        # 스펙트럼 미분으로 적용한 Bopp 연산자 vs 정확한 미분
        poly = parse("x1*p1", n)
        other = gaussian(n, hbar)
        identity = SeibergWittenMap.identity(n)
        spectral = star_grid_omega(poly, sample(other, grid), params, identity, grid, decay_tol=decay)
        exact = bopp_image_on_grid(poly, other, params, grid)
        yield Check("bopp_spectral", relative_sup(spectral.samples, exact.samples), tol)

        # g = exp(−|s⁻¹z|²/ħ) 이면 g ⋆_Ω g = g/2 이므로 P ⋆ g = 2 (P ⋆ g) ⋆ g.
        # 왼쪽은 Bopp 경로, 오른쪽의 두 번째 곱은 SW 당김 + Moyal 경로
        g = pulled_gaussian(s, hbar)
        image = bopp_image_on_grid(poly, g, params, grid)
        pulled = star_grid_omega(image, g, params, s, grid, interpolate=True, decay_tol=decay)
        value = relative_sup(2 * pulled.samples, image.samples)
        yield Check("bopp_pullback_agreement", value, ASSOCIATIVITY_FACTOR * tol)

    def _transform_checks(self, params, s, psi_expr, psi, grid: PhaseGrid):
        norm = psi.norm()
        moved = apply_ms(psi_expr, s, grid=grid)
        yield Check("ms_unitarity", abs(moved.norm() - norm) / norm, ROUNDOFF_TOL)

        back = apply_ms(moved, s, "inverse")
        yield Check("ms_roundtrip", relative_sup(back.samples, psi.samples), ROUNDOFF_TOL)

        # z0/2 가 격자 간격 하나
        z0 = np.zeros(grid.dim)
        z0[0] = 2 * grid.step
        shifted = translate_omega(psi, z0, build_omega(params))
        yield Check("translate_unitarity", abs(shifted.norm() - norm) / norm, ROUNDOFF_TOL)

    def _dense_checks(self, hbar: float, tol: float, decay: float):
        lattice = PhaseGrid.symplectic(1, DENSE_POINTS, hbar)
        standard = OmegaMatrix.scaled_standard(1, 1.0, hbar)
        g = sample(gaussian(1, hbar), lattice)
        twice = sft_omega_dense(sft_omega_dense(g, standard, decay), standard, decay)
        yield Check("sft_involution", relative_sup(twice.samples, g.samples), SFT_TOL)

        # θ₁₂ = ħ, η = 0 이면 h²MΩ⁻¹/(2πħ) 가 행렬식 1 인 정수 행렬이라
        # 이산 F_Ω 도 정확한 대합이다. 중간 결과는 감쇠하지 않아도 된다
        nc = build_omega(NCParams.single_pair(theta=hbar, eta=0.0, hbar=hbar))
        nc_lattice = PhaseGrid.symplectic(2, NC_LATTICE_POINTS, hbar)
        g = sample(gaussian(2, hbar, width=0.5), nc_lattice)
        twice = sft_omega_dense(sft_omega_dense(g, nc, decay), nc, decay_tol=1.0)
        yield Check("sft_involution_nc", relative_sup(twice.samples, g.samples), SFT_TOL)

        flat = NCParams(n=1, hbar=hbar)
        a = damped(Var("x", 1), 1, hbar)
        target = gaussian(1, hbar)
        dense = apply_A_omega_dense(a, sample(target, lattice), flat, decay)
        routed = star_grid_omega(a, target, flat, SeibergWittenMap.identity(1), lattice, decay_tol=decay)
        yield Check("dense_path_equivalence", relative_sup(dense.samples, routed.samples), tol)

        # 항등원이 아닌 s: 당김과 LU 재표본이 dense 커널과 맞아야 한다
        sheared = SeibergWittenMap(s=np.array(PULLBACK_SHEAR))
        a = damped(Var("x", 1), 1, hbar, width=1.0)
        target = gaussian(1, hbar, width=1.0)
        dense = apply_A_omega_dense(a, sample(target, lattice), flat, decay)
        routed = star_grid_omega(a, target, flat, sheared, lattice, decay_tol=decay)
        yield Check("dense_pullback_sheared", relative_sup(dense.samples, routed.samples), tol)

    def _commutator_checks(self, decay: float):
        # 두 Gaussian 의 교환자: 결함은 ħ² 차수 (Moyal 3차 항)
        a = parse("exp(-(x1 - 1/2)^2 - p1^2)", 1)
        b = parse("exp(-x1^2 - (p1 - 1/2)^2)", 1)
        defects = [commutator_gap_grid(a, b, hbar, decay) for hbar in SLOPE_HBARS]
        logger.debug(f"격자 교환자 결함 {defects}")
        yield Check("commutator_slope_grid", SLOPE_FLOOR - log_slope(SLOPE_HBARS, defects), 0.0)

        # θ₁₂ = η₁₂ = ħ³: 이차식과의 교환자는 Bopp 경로에서 정확하고 결함은 ħ²
        shape = pair_matrix(2, 1.0)
        schedule = Schedule(SCHEDULE_ALPHA, 1.0, SCHEDULE_ALPHA, 1.0, shape, shape)
        a = gaussian(2, 1.0)
        b = parse("x1*x2 + p1*p2", 2)
        defects = [scheduled_gap(a, b, schedule, hbar, decay) for hbar in SLOPE_HBARS]
        slope = log_slope(SLOPE_HBARS, defects)
        yield Check("commutator_slope_schedule_grid", abs(slope - (SCHEDULE_ALPHA - 1)), SCHEDULE_SLOPE_TOL)

    def _wigner_checks(
        self, config: RunConfig, params: NCParams, s: SeibergWittenMap, tol: float, decay: float
    ):
        n, hbar = params.n, params.hbar
        grid = compact_grid(n, hbar, config.grid.points)
        basis = config.hermite_basis()
        first, second = (basis.function(j) for j in basis.ordered(2))

        big_phi = w_s_phi(second, first, s, grid)
        big_psi = w_s_phi(first, second, s, grid)
        product = star_grid_omega(big_phi, big_psi, params, s, grid, decay_tol=decay)
        # W(h₁,h₀) ⋆ W(h₀,h₁) = (2πħ)^{−n} W(h₁,h₁) 를 M_s⁻¹ 로 옮긴 관계
        factor = abs(s.det) ** -0.5 * (2 * np.pi * hbar) ** (-n / 2)
        expected = w_s_phi(second, second, s, grid).samples * factor
        yield Check("wigner_product_rule", relative_sup(product.samples, expected), tol)

        left = star_grid_omega(product, big_phi, params, s, grid, interpolate=True, decay_tol=decay)
        inner = star_grid_omega(big_psi, big_phi, params, s, grid, decay_tol=decay)
        right = star_grid_omega(big_phi, inner, params, s, grid, interpolate=True, decay_tol=decay)
        value = relative_sup(left.samples, right.samples)
        yield Check("grid_associativity", value, ASSOCIATIVITY_FACTOR * tol)


def log_slope(hbars, defects) -> float:
    """log 결함의 log ħ 에 대한 최소제곱 기울기"""
    return float(np.polyfit(np.log(hbars), np.log(defects), 1)[0])


def slope_grid(hbar: float, half_width: float = SLOPE_HALF_WIDTH) -> PhaseGrid:
    """n=1, 반폭 고정, πħ/h ≥ 2L 을 만족하는 가장 작은 2의 거듭제곱 M"""
    points = 2 ** math.ceil(math.log2(4 * half_width**2 / (np.pi * hbar)))
    return PhaseGrid(1, half_width, max(points, 8), hbar)


def commutator_gap_grid(a: Expr, b: Expr, hbar: float, decay_tol: float) -> float:
    """max |[a, b]⋆/(iħ) − {a, b}| (가환 n=1, SW 당김 + Moyal 경로)"""
    grid = slope_grid(hbar)
    params = NCParams(n=1, hbar=hbar)
    identity = SeibergWittenMap.identity(1)
    ab = star_grid_omega(a, b, params, identity, grid, decay_tol=decay_tol)
    ba = star_grid_omega(b, a, params, identity, grid, decay_tol=decay_tol)

    left, right = sample(a, grid).samples, sample(b, grid).samples
    bracket = spectral_derivative(left, grid, 0) * spectral_derivative(right, grid, 1)
    bracket = bracket - spectral_derivative(left, grid, 1) * spectral_derivative(right, grid, 0)
    return float(np.abs((ab.samples - ba.samples) / (1j * hbar) - bracket).max())


def scheduled_gap(a: Expr, b: Expr, schedule: Schedule, hbar: float, decay_tol: float) -> float:
    """스케줄 Ω(ħ) 와 가환 J 에서 잰 [a, b]⋆/(iħ) 의 최대 차이 (n=2, 8⁴ 격자)"""
    grid = PhaseGrid(2, 3.0, 8, hbar)

    def commutator(params: NCParams) -> np.ndarray:
        s = solve_sw_map(build_omega(params))
        ab = star_grid_omega(a, b, params, s, grid, decay_tol=decay_tol)
        ba = star_grid_omega(b, a, params, s, grid, decay_tol=decay_tol)
        return (ab.samples - ba.samples) / (1j * hbar)

    scheduled = NCParams.from_schedule(2, hbar, schedule)
    gap = commutator(scheduled) - commutator(NCParams(n=2, hbar=hbar))
    return float(np.abs(gap).max())
