"""Ω-스타곱: 정확한 다항식 경로와 격자 경로"""

from .bopp import (
    BoppOperator,
    bopp_coordinate,
    commutator_defect,
    hamiltonian_field,
    poisson,
    poisson_omega,
    star_commutator,
    star_order,
    star_poly,
)
from .grid import GridSymbol, PhaseGrid, read_grid_csv, resample_linear, sample, write_grid_csv
from .moyal import moyal_star_fft, star_grid_omega
from .transform import apply_A_omega_dense, apply_ms, sft_omega_dense, translate_omega

__all__ = [
    "BoppOperator",
    "GridSymbol",
    "PhaseGrid",
    "apply_A_omega_dense",
    "apply_ms",
    "bopp_coordinate",
    "commutator_defect",
    "hamiltonian_field",
    "moyal_star_fft",
    "poisson",
    "poisson_omega",
    "read_grid_csv",
    "resample_linear",
    "sample",
    "sft_omega_dense",
    "star_commutator",
    "star_grid_omega",
    "star_order",
    "star_poly",
    "translate_omega",
    "write_grid_csv",
]
