"""Ã_Ω 커널의 dense 구적 (작은 격자의 검증용)"""

from ..star.grid import DEFAULT_DECAY_TOL, PhaseGrid, sample
from ..star.transform import apply_A_omega_dense
from ..symbol.expr import Expr
from ..symplectic import NCParams, SeibergWittenMap
from .base import StarMethod, StarResult


class DenseMethod(StarMethod):
    """a ⋆_Ω b = Ã_Ω b 를 적분 커널로 직접 계산"""

    name = "dense"

    def __init__(self, decay_tol: float = DEFAULT_DECAY_TOL):
        self.decay_tol = decay_tol

    def compute(
        self, a: Expr, b: Expr, params: NCParams, s: SeibergWittenMap, grid: PhaseGrid
    ) -> StarResult:
        product = apply_A_omega_dense(a, sample(b, grid), params, self.decay_tol)
        return StarResult(
            method=self.name,
            samples=product,
            guards={"boundary_ratio": product.boundary_ratio()},
        )
