import numpy as np
import pytest

from ncstar.errors import DecayError, GridSizeError, InterpolationRequiredError
from ncstar.star.grid import GridSymbol, PhaseGrid, sample
from ncstar.star.moyal import star_grid_omega
from ncstar.star.transform import (
    apply_A_omega_dense,
    apply_kernel,
    apply_ms,
    compose_symbol,
    kernel_operator,
    sft_omega_dense,
    translate_omega,
)
from ncstar.symbol.parser import parse
from ncstar.symplectic import NCParams, OmegaMatrix, SeibergWittenMap, build_omega

# exp(−|z|²/2ħ) 는 F_J 의 고정점 (ħ = 1)
INVARIANT = "exp(-x1^2/2 - p1^2/2)"
# det = 1 인 작은 전단 (LU 분해가 전단 두 개)
SHEAR = np.array([[1.0, 0.2], [0.2, 1.04]])


@pytest.fixture
def lattice():
    return PhaseGrid.symplectic(1, 64)


@pytest.fixture
def standard():
    return OmegaMatrix.scaled_standard(1, 1.0)


def test_sft_fixed_point(lattice, standard):
    g = sample(parse(INVARIANT, 1), lattice)
    transformed = sft_omega_dense(g, standard)
    assert np.abs(transformed.samples - g.samples).max() <= 1e-8


def test_sft_involution(lattice, standard):
    a = sample(parse("(x1 + 2*p1^2)*exp(-x1^2/2 - p1^2/2)", 1), lattice)
    twice = sft_omega_dense(sft_omega_dense(a, standard), standard)
    assert np.abs(twice.samples - a.samples).max() <= 1e-8 * np.abs(a.samples).max()


def test_sft_rejects_constant(lattice, standard):
    with pytest.raises(DecayError):
        sft_omega_dense(GridSymbol.filled(lattice, 1.0), standard)


def test_sft_grid_limit():
    grid = PhaseGrid(2, 6.0, 10)
    with pytest.raises(GridSizeError):
        sft_omega_dense(GridSymbol.filled(grid, 1.0), OmegaMatrix.scaled_standard(2, 1.0))


def test_translate_aligned_is_unitary(line_grid):
    psi = sample(parse("exp(-x1^2 - p1^2)", 1), line_grid)
    omega = build_omega(NCParams(n=1))
    z0 = np.array([2 * line_grid.step, -4 * line_grid.step])
    moved = translate_omega(psi, z0, omega)
    assert moved.norm() == pytest.approx(psi.norm(), rel=1e-12)
    # 격자 간격 정수배 이동이면 |Ψ| 는 그대로 밀린다
    assert np.allclose(np.abs(moved.samples), np.roll(np.abs(psi.samples), (1, -2), axis=(0, 1)))


def test_translate_requires_interpolation(line_grid):
    psi = sample(parse("exp(-x1^2 - p1^2)", 1), line_grid)
    omega = build_omega(NCParams(n=1))
    with pytest.raises(InterpolationRequiredError):
        translate_omega(psi, np.array([0.3, 0.0]), omega)


def test_translate_interpolated(line_grid):
    psi = sample(parse("exp(-x1^2 - p1^2)", 1), line_grid)
    omega = build_omega(NCParams(n=1))
    z0 = np.array([0.3, -0.2])
    moved = translate_omega(psi, z0, omega, interpolate=True)
    x, p = line_grid.coordinates()
    shifted = np.exp(-((x - 0.15) ** 2) - (p + 0.1) ** 2)
    w = omega.inverse @ z0
    expected = np.exp(-1j * (x * w[0] + p * w[1])) * shifted
    assert np.abs(moved.samples - expected).max() <= 1e-8


def test_translate_zero_is_identity(line_grid):
    psi = sample(parse("exp(-x1^2 - p1^2)", 1), line_grid)
    moved = translate_omega(psi, np.zeros(2), build_omega(NCParams(n=1)))
    assert np.array_equal(moved.samples, psi.samples)


def test_apply_ms_unitary_and_inverse(line_grid):
    s = SeibergWittenMap(s=SHEAR)
    e = parse("x1*exp(-x1^2 - p1^2)", 1)
    psi = sample(e, line_grid)
    moved = apply_ms(e, s, grid=line_grid)
    assert moved.norm() == pytest.approx(psi.norm(), rel=1e-10)
    back = apply_ms(moved, s, "inverse")
    assert np.abs(back.samples - psi.samples).max() <= 1e-12


def test_apply_ms_scales_by_det(line_grid):
    s = SeibergWittenMap(s=np.diag([2.0, 1.0]))
    moved = apply_ms(parse("exp(-x1^2 - p1^2)", 1), s, grid=line_grid)
    x, p = line_grid.coordinates()
    assert np.allclose(moved.samples, np.sqrt(2) * np.exp(-4 * x**2 - p**2))


def test_sample_only_symbol_needs_interpolation(line_grid):
    psi = sample(parse("exp(-x1^2 - p1^2)", 1), line_grid)
    bare = GridSymbol(line_grid, psi.samples)
    s = SeibergWittenMap(s=SHEAR)
    with pytest.raises(InterpolationRequiredError):
        apply_ms(bare, s)
    resampled = compose_symbol(bare, s.s, interpolate=True)
    exact = compose_symbol(psi, s.s)
    assert np.abs(resampled.samples - exact.samples).max() <= 1e-8


def test_kernel_operator_matches_apply_kernel():
    grid = PhaseGrid.symplectic(1, 32)
    omega = OmegaMatrix.scaled_standard(1, 1.0)
    a = parse("exp(-x1^2/2 - p1^2/2)", 1)
    psi = sample(parse("p1*exp(-x1^2/2 - p1^2/2)", 1), grid)
    operator = kernel_operator(a, grid, omega)
    assert np.allclose(operator(psi).samples, apply_kernel(a, psi, omega).samples, atol=1e-12)


def test_constant_symbol_kernel_is_identity(lattice, standard):
    psi = sample(parse(INVARIANT, 1), lattice)
    assert np.array_equal(apply_kernel(parse("2", 1), psi, standard).samples, 2 * psi.samples)


def test_dense_matches_grid_path(lattice):
    params = NCParams(n=1)
    a = parse("x1*exp(-x1^2/2 - p1^2/2)", 1)
    target = parse("exp(-x1^2/2 - p1^2/2)", 1)
    dense = apply_A_omega_dense(a, sample(target, lattice), params)
    routed = star_grid_omega(a, target, params, SeibergWittenMap.identity(1), lattice)
    scale = np.abs(routed.samples).max()
    assert np.abs(dense.samples - routed.samples).max() <= 1e-6 * scale


def test_sft_involution_noncommutative_lattice():
    # θ₁₂ = ħ, η = 0: h²MΩ⁻¹/(2πħ) 가 행렬식 1 인 정수 행렬
    grid = PhaseGrid.symplectic(2, 8)
    omega = build_omega(NCParams.single_pair(theta=1.0, eta=0.0))
    lattice_form = grid.step**2 * grid.points * omega.inverse / (2 * np.pi)
    assert np.allclose(lattice_form, np.round(lattice_form), atol=1e-12)
    assert round(np.linalg.det(lattice_form)) == 1

    a = sample(parse("(1 + x1*p2)*exp(-2*(x1^2 + p1^2 + x2^2 + p2^2))", 2), grid)
    once = sft_omega_dense(a, omega)
    twice = sft_omega_dense(once, omega, decay_tol=1.0)
    assert np.abs(twice.samples - a.samples).max() <= 1e-8 * np.abs(a.samples).max()


def test_dense_matches_sheared_pullback(lattice):
    # s = [[1, 1/4], [0, 1]] 도 sJsᵀ = J 이므로 같은 곱을 준다
    params = NCParams(n=1)
    sheared = SeibergWittenMap(s=np.array([[1.0, 0.25], [0.0, 1.0]]))
    a = parse("x1*exp(-x1^2 - p1^2)", 1)
    target = parse("exp(-x1^2 - p1^2)", 1)
    dense = apply_A_omega_dense(a, sample(target, lattice), params)
    routed = star_grid_omega(a, target, params, sheared, lattice)
    scale = np.abs(routed.samples).max()
    assert np.abs(dense.samples - routed.samples).max() <= 1e-6 * scale
