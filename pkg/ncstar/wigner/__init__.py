"""Hermite 기저, Wigner 얽힘 연산자, star-고윳값 풀이"""

from .hermite import HermiteBasis, WaveFunction, hermite_eval, hermite_table, wigner_pair_table
from .spectral import Spectrum, phase_space_spectrum, residual, solve_stargen, weyl_matrix
from .transform import cross_wigner, ob_basis, project_range, w_s_phi, w_s_phi_adjoint

__all__ = [
    "HermiteBasis",
    "Spectrum",
    "WaveFunction",
    "cross_wigner",
    "hermite_eval",
    "hermite_table",
    "ob_basis",
    "phase_space_spectrum",
    "project_range",
    "residual",
    "solve_stargen",
    "w_s_phi",
    "w_s_phi_adjoint",
    "weyl_matrix",
    "wigner_pair_table",
]
