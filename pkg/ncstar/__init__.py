"""ncstar - 비가환 위상공간의 Ω-스타곱과 star-고윳값 계산 도구"""

__version__ = "0.1.0"

from .config import RunConfig
from .errors import NcstarError
from .star.bopp import star_poly
from .star.moyal import moyal_star_fft, star_grid_omega
from .symbol.parser import parse
from .symplectic import NCParams, SeibergWittenMap, build_omega, solve_sw_map
from .wigner.spectral import Spectrum, solve_stargen

__all__ = [
    "NCParams",
    "NcstarError",
    "RunConfig",
    "SeibergWittenMap",
    "Spectrum",
    "build_omega",
    "moyal_star_fft",
    "parse",
    "solve_stargen",
    "solve_sw_map",
    "star_grid_omega",
    "star_poly",
]
