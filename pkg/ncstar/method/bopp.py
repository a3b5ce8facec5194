"""정확한 Bopp 전개 (다항식 전용)"""

import logging

from ..errors import PolynomialError
from ..star.bopp import star_poly
from ..star.grid import PhaseGrid
from ..symbol.expr import Expr
from ..symbol.poly import to_poly
from ..symplectic import NCParams, SeibergWittenMap
from .base import StarMethod, StarResult

logger = logging.getLogger(__name__)


class BoppMethod(StarMethod):
    """a, b 가 모두 다항식일 때 Gaussian-유리수 계수로 정확하게 계산"""

    name = "bopp"

    @classmethod
    def can_handle(cls, a: Expr, b: Expr, params: NCParams) -> bool:
        try:
            to_poly(a, params.n)
            to_poly(b, params.n)
        except PolynomialError:
            return False
        return True

    def compute(
        self, a: Expr, b: Expr, params: NCParams, s: SeibergWittenMap, grid: PhaseGrid
    ) -> StarResult:
        product = star_poly(to_poly(a, params.n), to_poly(b, params.n), params)
        logger.info(f"Bopp 전개: 차수 {product.degree}, 항 {len(product.terms)}개")
        return StarResult(method=self.name, poly=product)
