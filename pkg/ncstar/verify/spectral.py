"""star-고윳값 문제와 얽힘 연산자 검사"""

import itertools
import logging
from typing import Iterator

import numpy as np
import scipy.linalg

from ..config import RunConfig
from ..star.moyal import star_grid_omega
from ..symplectic import NCParams, SeibergWittenMap, random_symplectic, standard_j
from ..wigner.hermite import HermiteBasis, WaveFunction
from ..wigner.spectral import phase_space_spectrum, solve_stargen, weyl_matrix
from ..wigner.transform import ob_basis, project_range, w_s_phi, w_s_phi_adjoint
from .base import Check, Suite
from .fixtures import compact_grid, compact_points, oscillator

logger = logging.getLogger(__name__)

SPECTRUM_COUNT = 6
EIGEN_TOL = 1e-6
INVARIANCE_TOL = 1e-8
SYMPLECTIC_SCALE = 0.1

GRAM_COUNT = 6
GRAM_TOL = 1e-6
ADJOINT_K = 6
ADJOINT_DEGREE = 4

GALERKIN_K = 3
GALERKIN_TOL = 1e-4
INTERTWINING_COUNT = 4
INTERTWINING_TOL = 1e-5


def symplectic_eigenvalues(matrix: np.ndarray) -> np.ndarray:
    """양의 정부호 대칭 행렬의 심플렉틱 고윳값 (오름차순, n개)

    J·M 의 고윳값은 ±iν_k 로 짝을 이룬다.
    """
    n = matrix.shape[0] // 2
    values = np.sort(np.abs(np.linalg.eigvals(standard_j(n) @ matrix)))
    return values[::2]


def quadratic_levels(nu: np.ndarray, hbar: float, count: int) -> np.ndarray:
    """½zᵀMz 의 Weyl 연산자 고윳값 ħΣν_k(j_k + ½) 중 가장 낮은 count개"""
    levels = [
        hbar * float(np.dot(nu, np.asarray(j) + 0.5))
        for j in itertools.product(range(count), repeat=len(nu))
    ]
    return np.sort(levels)[:count]


def _max_diff(values, reference) -> float:
    return float(np.abs(np.asarray(values) - np.asarray(reference)).max())


class SpectralSuite(Suite):
    """Hermite 기저 스펙트럼, 위상공간 고유함수, Φ 기저"""

    name = "spectral"

    def checks(self, config: RunConfig) -> Iterator[Check]:
        params = config.params()
        s = config.sw_map()
        basis = config.hermite_basis()
        grid = config.phase_grid()
        n, hbar = params.n, params.hbar
        a = oscillator(n)
        count = min(SPECTRUM_COUNT, basis.size)
        options = dict(
            eigen_tol=config.tolerances.eigen,
            residual_tol=config.tolerances.residual,
            decay_tol=config.tolerances.decay,
        )

        flat = solve_stargen(
            a, NCParams(n=n, hbar=hbar), SeibergWittenMap.identity(n), basis, grid, count,
            with_eigenfunctions=False, **options,
        )
        expected = [hbar * (sum(j) + n / 2) for j in basis.ordered(count)]
        yield Check("oscillator_commutative", _max_diff(flat.eigenvalues, expected), config.tol(EIGEN_TOL))

        spectrum = solve_stargen(a, params, s, basis, grid, count, **options)
        oracle = quadratic_levels(symplectic_eigenvalues(s.s.T @ s.s), hbar, count)
        logger.debug(f"심플렉틱 고윳값 기준 {oracle}")
        yield Check("oscillator_nc", _max_diff(spectrum.eigenvalues, oracle), config.tol(EIGEN_TOL))
        yield Check("oscillator_nc_residual", max(spectrum.residuals), config.tolerances.residual)

        # sS 도 SW 맵이다 (S 심플렉틱)
        other = SeibergWittenMap(s=s.s @ random_symplectic(n, config.seed, SYMPLECTIC_SCALE))
        moved = solve_stargen(a, params, other, basis, grid, count, with_eigenfunctions=False, **options)
        yield Check("s_invariance", _max_diff(moved.eigenvalues, spectrum.eigenvalues), INVARIANCE_TOL)

        shifted = solve_stargen(a, params, s, basis, grid, count, phi_index=1, **options)
        yield Check("phi_indifference", _max_diff(shifted.eigenvalues, spectrum.eigenvalues), INVARIANCE_TOL)
        yield Check("phi_indifference_residual", max(shifted.residuals), config.tolerances.residual)

        yield from self._basis_checks(config, s, basis)
        yield from self._galerkin_checks(config, a, params, s, basis)

    def _basis_checks(self, config: RunConfig, s: SeibergWittenMap, basis: HermiteBasis):
        grid = compact_grid(basis.n, basis.hbar, compact_points(basis.n))

        family = ob_basis(s, basis, min(GRAM_COUNT, basis.size), grid)
        samples = np.stack([phi.samples.ravel() for phi in family])
        gram = samples.conj() @ samples.T * grid.weight
        yield Check("ob_gram", float(np.abs(gram - np.eye(len(family))).max()), GRAM_TOL)

        small = basis.resized(ADJOINT_K)
        rng = np.random.default_rng(config.seed)
        coefficients = np.zeros(small.size, dtype=complex)
        for j in small.ordered(ADJOINT_DEGREE):
            coefficients[small.flat_index(j)] = rng.standard_normal() + 1j * rng.standard_normal()
        coefficients /= np.linalg.norm(coefficients)
        window = small.function(0)

        big_psi = w_s_phi(WaveFunction(small, coefficients=coefficients), window, s, grid)
        back = w_s_phi_adjoint(big_psi, window, s, small)
        value = max(abs(big_psi.norm() - 1.0), float(np.abs(back.coefficients - coefficients).max()))
        yield Check("adjoint_isometry", value, GRAM_TOL)

        projected = project_range(big_psi, window, s, small)
        yield Check("range_projection", projected.sup_diff(big_psi, interior=False), GRAM_TOL)

    def _galerkin_checks(
        self, config: RunConfig, a, params: NCParams, s: SeibergWittenMap, basis: HermiteBasis
    ):
        grid = config.phase_grid()
        decay = config.tolerances.decay

        small = basis.resized(GALERKIN_K)
        count = min(SPECTRUM_COUNT, small.size)
        galerkin = phase_space_spectrum(a, params, s, small, grid, count, decay)
        matrix = weyl_matrix(a, s, small, decay_tol=decay)
        reference = scipy.linalg.eigh(
            (matrix + matrix.conj().T) / 2, eigvals_only=True, subset_by_index=[0, count - 1]
        )
        yield Check("galerkin_equality", _max_diff(galerkin, reference), GALERKIN_TOL)

        # Ã_Ω W_{s,φ}ψ = W_{s,φ} Â′ψ
        matrix = weyl_matrix(a, s, basis, decay_tol=decay)
        window = basis.function(0)
        defects = []
        for j in basis.ordered(INTERTWINING_COUNT):
            flat = basis.flat_index(j)
            lifted = w_s_phi(basis.function(flat), window, s, grid)
            left = star_grid_omega(a, lifted, params, s, grid, decay_tol=decay)
            image = WaveFunction(basis, coefficients=matrix[:, flat])
            right = w_s_phi(image, window, s, grid)
            defects.append((left - right).norm() / right.norm())
        yield Check("intertwining", max(defects), INTERTWINING_TOL)
