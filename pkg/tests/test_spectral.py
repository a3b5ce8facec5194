import json

import numpy as np
import pytest

from ncstar.errors import ParameterError, PolynomialError, TruncationError
from ncstar.star.grid import PhaseGrid
from ncstar.symbol.parser import parse
from ncstar.symplectic import NCParams, SeibergWittenMap, build_omega, random_symplectic, solve_sw_map
from ncstar.verify.spectral import quadratic_levels, symplectic_eigenvalues
from ncstar.wigner.hermite import HermiteBasis
from ncstar.wigner.spectral import phase_space_spectrum, solve_stargen, weyl_matrix

OSCILLATOR_1 = "(x1^2 + p1^2)/2"
OSCILLATOR_2 = "(x1^2 + p1^2 + x2^2 + p2^2)/2"


@pytest.fixture
def compact():
    return PhaseGrid(1, 7.0, 64, 1.0)


def test_weyl_matrix_oscillator_is_diagonal():
    basis = HermiteBasis(1, 6, hbar=0.5)
    matrix = weyl_matrix(parse(OSCILLATOR_1, 1), SeibergWittenMap.identity(1), basis)
    expected = np.diag(0.5 * (np.arange(6) + 0.5))
    assert np.allclose(matrix, expected, atol=1e-10)


def test_weyl_matrix_orientation():
    # ⟨h₀, p̂ h₁⟩ = −iħ⟨h₀, h₁′⟩ = −i√(ħ/2)
    basis = HermiteBasis(1, 3)
    matrix = weyl_matrix(parse("p1", 1), SeibergWittenMap.identity(1), basis)
    assert matrix[0, 1] == pytest.approx(-1j / np.sqrt(2))
    assert matrix[1, 0] == pytest.approx(1j / np.sqrt(2))


def test_weyl_matrix_lattice_quadrature(compact):
    basis = HermiteBasis(1, 4)
    a = parse(OSCILLATOR_1, 1)
    identity = SeibergWittenMap.identity(1)
    lattice = weyl_matrix(a, identity, basis, grid=compact)
    assert np.allclose(lattice, weyl_matrix(a, identity, basis), atol=1e-8)


def test_weyl_matrix_rejects_growing_symbol():
    with pytest.raises(TruncationError):
        weyl_matrix(parse("exp(x1^2)", 1), SeibergWittenMap.identity(1), HermiteBasis(1, 4))


def test_commutative_oscillator_spectrum():
    spectrum = solve_stargen(
        parse(OSCILLATOR_2, 2),
        NCParams(n=2),
        SeibergWittenMap.identity(2),
        HermiteBasis(2, 4),
        PhaseGrid(2, 5.0, 8),
        6,
        with_eigenfunctions=False,
    )
    assert np.allclose(spectrum.eigenvalues, [1, 2, 2, 3, 3, 3], atol=1e-10)
    assert spectrum.all_converged
    assert spectrum.residuals == []
    assert spectrum.star_eigenfunctions is None


def test_spectrum_with_eigenfunctions(compact):
    spectrum = solve_stargen(
        parse(OSCILLATOR_1, 1), NCParams(n=1), SeibergWittenMap.identity(1), HermiteBasis(1, 6), compact, 3
    )
    assert np.allclose(spectrum.eigenvalues, [0.5, 1.5, 2.5], atol=1e-10)
    assert max(spectrum.residuals) <= 1e-4
    assert spectrum.all_converged
    assert len(spectrum.star_eigenfunctions) == 3


def test_spectrum_is_s_invariant():
    a = parse(OSCILLATOR_1, 1)
    params = NCParams(n=1)
    basis = HermiteBasis(1, 16)
    grid = PhaseGrid(1, 5.0, 16)
    base = solve_stargen(a, params, SeibergWittenMap.identity(1), basis, grid, 3, with_eigenfunctions=False)
    other = SeibergWittenMap(s=random_symplectic(1, seed=0, scale=0.1))
    moved = solve_stargen(a, params, other, basis, grid, 3, with_eigenfunctions=False)
    assert np.allclose(moved.eigenvalues, base.eigenvalues, atol=1e-8)


def test_solve_stargen_rejects_bad_input():
    basis = HermiteBasis(1, 3)
    args = (NCParams(n=1), SeibergWittenMap.identity(1), basis, PhaseGrid(1, 5.0, 16))
    with pytest.raises(PolynomialError):
        solve_stargen(parse("exp(x1)", 1), *args, 1)
    for count in (0, 4):
        with pytest.raises(ParameterError):
            solve_stargen(parse(OSCILLATOR_1, 1), *args, count)


def test_spectrum_to_dict():
    spectrum = solve_stargen(
        parse(OSCILLATOR_1, 1),
        NCParams(n=1),
        SeibergWittenMap.identity(1),
        HermiteBasis(1, 4),
        PhaseGrid(1, 5.0, 16),
        2,
        with_eigenfunctions=False,
    )
    data = spectrum.to_dict()
    assert set(data) == {"params", "s", "eigenvalues", "residuals", "converged", "basis", "grid", "warnings"}
    assert data["grid"] == {"n": 1, "M": 16, "L": 5.0, "hbar": 1.0}
    assert json.loads(spectrum.to_json())["eigenvalues"] == pytest.approx([0.5, 1.5])


def test_phase_space_galerkin(compact):
    values = phase_space_spectrum(
        parse(OSCILLATOR_1, 1), NCParams(n=1), SeibergWittenMap.identity(1), HermiteBasis(1, 3), compact, 3
    )
    assert np.allclose(values, [0.5, 1.5, 2.5], atol=1e-6)


def test_symplectic_eigenvalues():
    assert np.allclose(symplectic_eigenvalues(np.eye(4)), [1.0, 1.0])
    assert np.allclose(symplectic_eigenvalues(np.diag([4.0, 1.0])), [2.0])
    assert np.allclose(quadratic_levels(np.array([1.0, 1.0]), 1.0, 6), [1, 2, 2, 3, 3, 3])


@pytest.mark.slow
def test_noncommutative_oscillator(nc_params):
    s = solve_sw_map(build_omega(nc_params))
    basis = HermiteBasis(2, 8)
    spectrum = solve_stargen(
        parse(OSCILLATOR_2, 2), nc_params, s, basis, PhaseGrid(2, 5.0, 8), 4, with_eigenfunctions=False
    )
    expected = quadratic_levels(symplectic_eigenvalues(s.s.T @ s.s), 1.0, 4)
    assert np.allclose(spectrum.eigenvalues, expected, atol=1e-6)
