"""검사에 쓰는 심볼과 격자"""

from fractions import Fraction
from functools import reduce

import numpy as np

from ..star.grid import PhaseGrid
from ..symbol.expr import Exp, Expr, Var, add, compose_linear, literal, mul, power
from ..symplectic import SeibergWittenMap

# Wigner 함수 검사용 격자 반폭 (√ħ 단위)
COMPACT_HALF_WIDTH = 5.0
COMPACT_POINTS = 24
# n=1 이면 격자가 작아 더 촘촘하게 잡는다
COMPACT_POINTS_1D = 64


def norm_squared(n: int) -> Expr:
    """|z|² = Σ x_k² + p_k²"""
    terms = [power(Var(kind, k), 2) for k in range(1, n + 1) for kind in ("x", "p")]
    return reduce(add, terms)


def oscillator(n: int) -> Expr:
    """½|z|²"""
    return mul(literal(Fraction(1, 2)), norm_squared(n))


def gaussian(n: int, hbar: float, width: float = 2.0) -> Expr:
    """exp(−|z|²/(width·ħ))"""
    return Exp(mul(literal(-1.0 / (width * hbar)), norm_squared(n)))


def damped(factor: Expr, n: int, hbar: float, width: float = 2.0) -> Expr:
    return mul(factor, gaussian(n, hbar, width))


def compact_grid(n: int, hbar: float, points: int) -> PhaseGrid:
    """Wigner 함수에 맞춘 L = 5√ħ 격자"""
    return PhaseGrid(n, COMPACT_HALF_WIDTH * float(np.sqrt(hbar)), points, hbar)


def relative_sup(value: np.ndarray, reference: np.ndarray) -> float:
    scale = float(np.abs(reference).max())
    return float(np.abs(value - reference).max() / scale) if scale else float(np.abs(value).max())


def compact_points(n: int) -> int:
    return COMPACT_POINTS_1D if n == 1 else COMPACT_POINTS


def pulled_gaussian(s: SeibergWittenMap, hbar: float) -> Expr:
    """exp(−|s⁻¹z|²/ħ): s 로 당기면 순수 상태 Gaussian exp(−|z|²/ħ) 가 된다"""
    return compose_linear(gaussian(s.n, hbar, width=1.0), s.inverse)
