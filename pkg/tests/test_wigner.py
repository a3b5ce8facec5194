import numpy as np
import pytest

from ncstar.errors import ConfigError, GridMismatchError
from ncstar.star.grid import PhaseGrid, sample
from ncstar.symbol.parser import parse
from ncstar.symplectic import SeibergWittenMap
from ncstar.wigner.hermite import HermiteBasis, WaveFunction, hermite_eval, hermite_table, wigner_pair_table
from ncstar.wigner.transform import cross_wigner, ob_basis, project_range, w_s_phi, w_s_phi_adjoint

SHEAR = SeibergWittenMap(s=np.array([[1.0, 0.2], [0.2, 1.04]]))


@pytest.fixture
def compact():
    # 전단 s 아래에서도 K = 4 의 꼬리가 경계 안에서 사라지도록 L = 7
    return PhaseGrid(1, 7.0, 64, 1.0)


@pytest.fixture
def basis():
    return HermiteBasis(1, 4)


def test_hermite_orthonormal():
    x = np.linspace(-12, 12, 2401)
    table = hermite_table(5, x, 0.5)
    gram = table @ table.T * (x[1] - x[0])
    assert np.allclose(gram, np.eye(5), atol=1e-10)


def test_hermite_eval_is_tensor_product():
    value = hermite_eval((1, 2), (0.3, -0.4), 1.0)
    expected = hermite_table(2, 0.3, 1.0)[1] * hermite_table(3, -0.4, 1.0)[2]
    assert value == pytest.approx(expected)


def test_wigner_pair_ground_state():
    table = wigner_pair_table(2, np.array([0.0, 1.0]), np.array([0.0, 0.5]), 0.5)
    assert table[0, 0, 0] == pytest.approx(1 / (np.pi * 0.5))
    assert table[0, 0, 1] == pytest.approx(np.exp(-1.25 / 0.5) / (np.pi * 0.5))
    # W(h₁,h₀) = conj W(h₀,h₁)
    assert table[1, 0, 1] == pytest.approx(np.conj(table[0, 1, 1]))


def test_basis_auto_sizing():
    basis = HermiteBasis(2, 3, hbar=0.5)
    assert basis.size == 9
    assert basis.points % 2 == 0
    assert basis.gram_deviation() <= 1e-10
    assert basis.ordered(4) == [(0, 0), (0, 1), (1, 0), (0, 2)]
    assert basis.multi_index(basis.flat_index((2, 1))) == (2, 1)
    assert basis.resized(5).K == 5


def test_basis_rejects_coarse_grid():
    with pytest.raises(ConfigError):
        HermiteBasis(1, 4, half_width=2.0, points=16)
    with pytest.raises(ConfigError):
        HermiteBasis(1, 0)


def test_wave_function_representations(basis):
    with pytest.raises(ValueError):
        WaveFunction(basis)
    samples = hermite_table(2, basis.axis, basis.hbar)[1]
    psi = WaveFunction.from_samples(basis, samples)
    assert np.allclose(psi.to_coefficients(), [0, 1, 0, 0], atol=1e-10)
    assert psi.norm() == pytest.approx(1.0, abs=1e-10)
    assert np.allclose(basis.function(1).to_samples(), samples)


def test_cross_wigner_ground_state(line_grid):
    h0 = HermiteBasis(1, 2).function(0)
    w = cross_wigner(h0, h0, line_grid)
    x, p = line_grid.coordinates()
    assert np.abs(w.samples - np.exp(-(x**2) - p**2) / np.pi).max() <= 1e-8


def test_cross_wigner_matches_pair_table(line_grid):
    basis = HermiteBasis(1, 3)
    w = cross_wigner(basis.function(2), basis.function(1), line_grid)
    x, p = line_grid.coordinates(sparse=False)
    exact = wigner_pair_table(3, x, p, 1.0)[2, 1]
    assert np.abs(w.samples - exact).max() <= 1e-8


def test_intertwiner_is_isometric(basis, compact):
    big = w_s_phi(basis.function(0), basis.function(1), SeibergWittenMap.identity(1), compact)
    assert big.norm() == pytest.approx(1.0, rel=1e-8)
    sheared = w_s_phi(basis.function(0), basis.function(1), SHEAR, compact)
    assert sheared.norm() == pytest.approx(1.0, rel=1e-8)


def test_adjoint_recovers_coefficients(basis, compact, rng):
    coefficients = rng.standard_normal(4) + 1j * rng.standard_normal(4)
    psi = WaveFunction(basis, coefficients=coefficients)
    phi = basis.function(1)
    big = w_s_phi(psi, phi, SHEAR, compact)
    recovered = w_s_phi_adjoint(big, phi, SHEAR, basis)
    assert np.allclose(recovered.coefficients, coefficients, atol=1e-8)


def test_project_range(basis, compact):
    phi = basis.function(0)
    big = w_s_phi(basis.function(2), phi, SHEAR, compact)
    assert np.abs(project_range(big, phi, SHEAR, basis).samples - big.samples).max() <= 1e-8

    other = sample(parse("x1*exp(-x1^2/2 - p1^2)", 1), compact)
    once = project_range(other, phi, SHEAR, basis)
    twice = project_range(once, phi, SHEAR, basis)
    assert np.abs(twice.samples - once.samples).max() <= 1e-8


def test_ob_basis_orthonormal(compact):
    basis = HermiteBasis(1, 2)
    functions = ob_basis(SHEAR, basis, 2, compact)
    assert len(functions) == 4
    gram = np.array([[f.inner(g) for g in functions] for f in functions])
    assert np.allclose(gram, np.eye(4), atol=1e-8)


def test_ob_basis_needs_enough_functions(compact):
    with pytest.raises(GridMismatchError):
        ob_basis(SHEAR, HermiteBasis(1, 2), 3, compact)


def test_basis_grid_mismatch(basis):
    with pytest.raises(GridMismatchError):
        cross_wigner(basis.function(0), basis.function(0), PhaseGrid(1, 5.0, 32, 0.5))
