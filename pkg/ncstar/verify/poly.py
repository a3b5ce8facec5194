"""정확한 다항식 스타곱 성질 검사"""

import itertools
import logging
import math
from fractions import Fraction
from typing import Iterator

import numpy as np

from ..config import RunConfig
from ..errors import ConsistencyError
from ..star.bopp import (
    commutator_defect,
    omega_fractions,
    poisson,
    poisson_omega,
    star_commutator,
    star_order,
    star_poly,
)
from ..symbol.parser import parse
from ..symbol.poly import PolySymbol, gaussian, rationalize
from ..symplectic import NCParams, Schedule, admissible, pair_matrix
from .base import Check, Suite

logger = logging.getLogger(__name__)

RANDOM_CASES = 20
UNITALITY_CASES = 200
ASSOCIATIVITY_CASES = 100
SLOPE_HBARS = (1e-1, 1e-2, 1e-3)
SLOPE_TOL = 0.05
SCHEDULE_ALPHA = 3.0
QUADRATIC_TOL = 1e-12


def random_poly(rng: np.random.Generator, nvars: int, degree: int, count: int = 4) -> PolySymbol:
    """유리 계수 다항식 (차수 ≤ degree, 항 count개 이하)"""
    terms = {}
    for _ in range(count):
        total = int(rng.integers(0, degree + 1))
        mono = [0] * nvars
        for position in rng.integers(0, nvars, size=total):
            mono[int(position)] += 1
        value = Fraction(int(rng.integers(-5, 6)), int(rng.integers(1, 4)))
        terms[tuple(mono)] = gaussian(value, Fraction(int(rng.integers(-2, 3)), 2))
    return PolySymbol(nvars, terms)


def random_monomial(rng: np.random.Generator, nvars: int, degree: int) -> PolySymbol:
    mono = [0] * nvars
    for position in rng.integers(0, nvars, size=int(rng.integers(1, degree + 1))):
        mono[int(position)] += 1
    return PolySymbol(nvars, {tuple(mono): gaussian(1)})


def moyal_reference(a: PolySymbol, b: PolySymbol, hbar: Fraction) -> PolySymbol:
    """Θ=N=0 Moyal 곱을 x/p 미분 쌍으로 직접 전개

    Σ_{β,γ} (iħ/2)^{|β|+|γ|} (−1)^{|γ|} / (β!γ!) ∂_x^β∂_p^γ a · ∂_p^β∂_x^γ b
    """
    n = a.n
    result = PolySymbol.zero(a.nvars)
    half = gaussian(0, hbar / 2)
    for order in range(a.degree + 1):
        for split in itertools.product(range(order + 1), repeat=2 * n):
            if sum(split) != order:
                continue
            beta, gamma = split[:n], split[n:]
            weight = Fraction((-1) ** sum(gamma), math.prod(math.factorial(k) for k in split))
            left = a.partial(tuple(beta) + tuple(gamma))
            right = b.partial(tuple(gamma) + tuple(beta))
            if left.is_zero or right.is_zero:
                continue
            result = result + (left * right).scale(half**order * gaussian(weight))
    return result


class PolySuite(Suite):
    """Bopp 전개 기반 정확 대수 검사"""

    name = "poly"

    def checks(self, config: RunConfig) -> Iterator[Check]:
        params = config.params()
        rng = np.random.default_rng(config.seed)
        nvars = 2 * params.n
        hbar = rationalize(params.hbar)
        one = PolySymbol.constant(nvars, 1)

        flag, margin = admissible(params)
        yield Check("admissible", 0.0 if flag else 1.0 + abs(margin), 0.0)

        rows = omega_fractions(params)
        mismatches = 0
        for alpha, beta in itertools.product(range(nvars), repeat=2):
            za = PolySymbol.variable(nvars, alpha)
            zb = PolySymbol.variable(nvars, beta)
            expected = PolySymbol.constant(nvars, gaussian(0, hbar * rows[alpha][beta]))
            mismatches += star_commutator(za, zb, params) != expected
        yield Check("ccr_table", float(mismatches), 0.0)

        failures = 0
        for _ in range(UNITALITY_CASES):
            a = random_poly(rng, nvars, 4)
            failures += star_poly(one, a, params) != a or star_poly(a, one, params) != a
        yield Check("unitality", float(failures), 0.0)

        failures = 0
        for _ in range(ASSOCIATIVITY_CASES):
            a, b, c = (random_monomial(rng, nvars, 3) for _ in range(3))
            left = star_poly(star_poly(a, b, params), c, params)
            right = star_poly(a, star_poly(b, c, params), params)
            failures += left != right
        yield Check("associativity", float(failures), 0.0)

        failures = 0
        for _ in range(RANDOM_CASES):
            a, b = random_poly(rng, nvars, 3), random_poly(rng, nvars, 3)
            failures += star_order(a, b, params, 0) != a * b
            bracket = poisson_omega(a, b, params)
            failures += star_order(a, b, params, 1) != bracket.scale(gaussian(0, hbar / 2))
        yield Check("leading_order", float(failures), 0.0)

        commutative = NCParams(n=params.n, hbar=params.hbar)
        failures = 0
        for _ in range(RANDOM_CASES // 2):
            a, b = random_poly(rng, nvars, 3), random_poly(rng, nvars, 3)
            failures += star_poly(a, b, commutative) != moyal_reference(a, b, hbar)
            failures += poisson_omega(a, b, commutative) != poisson(a, b)
        yield Check("moyal_reduction", float(failures), 0.0)

        try:
            for _ in range(RANDOM_CASES // 2):
                poisson_omega(random_poly(rng, nvars, 3), random_poly(rng, nvars, 3), params)
            routes_ok = True
        except ConsistencyError as e:
            logger.warning(f"{{a,b}}_Ω 경로 불일치: {e}")
            routes_ok = False
        yield Check.exact("poisson_omega_routes", routes_ok)

        probes = rng.uniform(-1.0, 1.0, size=(8, nvars))
        defects = commutator_defect(
            parse("x1^3", params.n), parse("p1^3", params.n), commutative, SLOPE_HBARS, probes
        )
        slope = float(np.polyfit(np.log(SLOPE_HBARS), np.log(defects), 1)[0])
        yield Check("commutator_slope", abs(slope - 2.0), SLOPE_TOL)

        # 이차식은 ħ 와 무관하게 결함 0 (기울기 0)
        defects = commutator_defect(
            parse("x1^2", params.n), parse("p1^2", params.n), commutative, SLOPE_HBARS, probes
        )
        yield Check("commutator_quadratic", max(defects), QUADRATIC_TOL)

        if params.n >= 2:
            scheduled = scheduled_pair(params.n, SCHEDULE_ALPHA)
            pair = parse("x1", params.n), parse("x2", params.n)
            defects = commutator_defect(*pair, scheduled, SLOPE_HBARS, probes)
            slope = float(np.polyfit(np.log(SLOPE_HBARS), np.log(defects), 1)[0])
            yield Check("commutator_slope_schedule", abs(slope - (SCHEDULE_ALPHA - 1)), SLOPE_TOL)


def scheduled_pair(n: int, alpha: float) -> NCParams:
    """θ₁₂(ħ) = η₁₂(ħ) = ħ^α 스케줄 (ħ = SLOPE_HBARS[0] 에서 시작)"""
    shape = pair_matrix(n, 1.0)
    schedule = Schedule(alpha, 1.0, alpha, 1.0, shape, shape)
    return NCParams.from_schedule(n, SLOPE_HBARS[0], schedule)
