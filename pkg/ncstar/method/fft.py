"""격자 스펙트럼 경로 (FFT 미분 또는 커널 Moyal 곱)"""

import logging

from ..errors import PolynomialError
from ..star.grid import DEFAULT_DECAY_TOL, PhaseGrid, sample
from ..star.moyal import bopp_image_on_grid, star_grid_omega
from ..symbol.expr import Expr
from ..symbol.poly import to_poly
from ..symplectic import NCParams, SeibergWittenMap
from .base import StarMethod, StarResult

logger = logging.getLogger(__name__)


def _is_poly(e: Expr, n: int) -> bool:
    try:
        to_poly(e, n)
    except PolynomialError:
        return False
    return True


class FftMethod(StarMethod):
    """격자 샘플 위의 a ⋆_Ω b

    다항식 인자의 Bopp 연산자는 다른 인자의 샘플에 스펙트럼 미분으로 작용하고,
    둘 다 다항식이 아니면 SW 당김 후 커널 Moyal 곱을 쓴다. 한쪽이 다항식이면
    정확한 Bopp 상과의 안쪽 영역 sup 차이를 함께 보고한다.
    """

    name = "fft"

    def __init__(self, decay_tol: float = DEFAULT_DECAY_TOL, interpolate: bool = False):
        self.decay_tol = decay_tol
        self.interpolate = interpolate

    def compute(
        self, a: Expr, b: Expr, params: NCParams, s: SeibergWittenMap, grid: PhaseGrid
    ) -> StarResult:
        poly_a, poly_b = _is_poly(a, params.n), _is_poly(b, params.n)
        # 다항식 쪽은 표현식으로 두어 Bopp 연산자가 되게 하고 나머지는 샘플로 넘긴다
        left = a if poly_a else sample(a, grid)
        right = b if poly_b and not poly_a else sample(b, grid)
        product = star_grid_omega(
            left, right, params, s, grid, interpolate=self.interpolate, decay_tol=self.decay_tol
        )
        guards = {"boundary_ratio": product.boundary_ratio()}
        exact = bopp_image_on_grid(a, b, params, grid)
        if exact is not None:
            guards["sup_diff_bopp"] = product.sup_diff(exact)
            logger.info(f"정확한 Bopp 상과의 sup 차이 {guards['sup_diff_bopp']:.2e}")
        return StarResult(method=self.name, samples=product, guards=guards)
