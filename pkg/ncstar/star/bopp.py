"""Bopp 이동을 이용한 다항식 Ω-스타곱

a ⋆_Ω b = Σ_γ (1/γ!) (iħ/2)^{|γ|} ∂^γa · (Ω∂)^γ b

(Ω∂)_α = Σ_β Ω_{αβ}∂_β 는 서로 교환하므로 곱하는 순서는 상관없다.
"""

import itertools
import logging
from dataclasses import dataclass
from fractions import Fraction
from math import factorial
from typing import Sequence

import numpy as np

from ..errors import ConsistencyError, ParameterError
from ..symbol.expr import Expr, Var, add, differentiate, literal, mul
from ..symbol.poly import Monomial, PolySymbol, gaussian, rationalize, to_poly
from ..symplectic import NCParams, check_admissible, with_hbar

logger = logging.getLogger(__name__)

FLOAT_CONSISTENCY_TOL = 1e-12


def omega_fractions(params: NCParams) -> list[list[Fraction]]:
    """Ω 성분을 유리수로 (ħ, Θ, N은 십진 표현 그대로 유리화)"""
    n = params.n
    hbar = rationalize(params.hbar)
    rows = [[Fraction(0)] * (2 * n) for _ in range(2 * n)]
    for a in range(n):
        rows[a][n + a] = Fraction(1)
        rows[n + a][a] = Fraction(-1)
        for b in range(n):
            rows[a][b] = rationalize(params.theta[a, b]) / hbar
            rows[n + a][n + b] = rationalize(params.eta[a, b]) / hbar
    return rows


def _omega_derivative(p: PolySymbol, alpha: int, rows: list[list[Fraction]]) -> PolySymbol:
    """(Ω∂)_α p"""
    result = PolySymbol.zero(p.nvars, p.exact)
    for beta, weight in enumerate(rows[alpha]):
        if weight:
            result = result + p.derivative(beta).scale(weight)
    return result


class _OmegaPowers:
    """(Ω∂)^γ b 메모이제이션"""

    def __init__(self, b: PolySymbol, rows: list[list[Fraction]]):
        self.rows = rows
        self.cache: dict[Monomial, PolySymbol] = {(0,) * b.nvars: b}

    def __call__(self, gamma: Monomial) -> PolySymbol:
        if gamma in self.cache:
            return self.cache[gamma]
        alpha = next(k for k, g in enumerate(gamma) if g)
        lower = gamma[:alpha] + (gamma[alpha] - 1,) + gamma[alpha + 1 :]
        value = _omega_derivative(self(lower), alpha, self.rows)
        self.cache[gamma] = value
        return value


def _expansion_factor(gamma: Monomial, hbar: Fraction):
    """(iħ/2)^{|γ|} / γ! 를 가우스 유리수로"""
    denominator = 1
    for g in gamma:
        denominator *= factorial(g)
    return gaussian(0, hbar / 2) ** sum(gamma) * gaussian(Fraction(1, denominator))


@dataclass(frozen=True, eq=False)
class BoppOperator:
    """심볼 a의 Bopp 양자화 Ã_Ω (유한 미분 연산자)"""
    source: PolySymbol
    params: NCParams
    expansion: tuple[tuple[Monomial, PolySymbol], ...]  # (γ, (±iħ/2)^{|γ|}∂^γa/γ!)
    side: str = "left"   # "left": x ↦ a⋆x, "right": x ↦ x⋆a

    @classmethod
    def from_symbol(cls, a: PolySymbol, params: NCParams, side: str = "left") -> "BoppOperator":
        if a.nvars != 2 * params.n:
            raise ParameterError(f"심볼 변수 개수 {a.nvars} != 2n = {2 * params.n}")
        if side not in ("left", "right"):
            raise ValueError(f"알 수 없는 side: {side}")
        # x⋆a = Σ (−iħ/2)^{|γ|}/γ! ∂^γa · (Ω∂)^γ x
        hbar = rationalize(params.hbar) * (1 if side == "left" else -1)
        terms = []
        ranges = [range(e + 1) for e in a.max_exponents]
        for gamma in itertools.product(*ranges):
            derivative = a.partial(gamma)
            if derivative.is_zero:
                continue
            terms.append((gamma, derivative.scale(_expansion_factor(gamma, hbar))))
        return cls(source=a, params=params, expansion=tuple(terms), side=side)

    @property
    def order(self) -> int:
        return max((sum(g) for g, _ in self.expansion), default=0)

    def apply(self, b: PolySymbol, order: int | None = None) -> PolySymbol:
        """왼쪽이면 a⋆_Ω b, 오른쪽이면 b⋆_Ω a (order를 주면 |γ| = order 인 항만)"""
        powers = _OmegaPowers(b, omega_fractions(self.params))
        result = PolySymbol.zero(b.nvars, self.source.exact and b.exact)
        for gamma, coefficient in self.expansion:
            if order is not None and sum(gamma) != order:
                continue
            result = result + coefficient * powers(gamma)
        return result

    def apply_expr(self, e: Expr) -> "BoppImage":
        """비다항식 표현식에 대한 Ã_Ω e (정확한 미분의 유한 합)"""
        rows = omega_fractions(self.params)
        n = self.params.n
        cache: dict[Monomial, Expr] = {(0,) * (2 * n): e}

        def power(gamma: Monomial) -> Expr:
            if gamma in cache:
                return cache[gamma]
            alpha = next(k for k, g in enumerate(gamma) if g)
            lower = power(gamma[:alpha] + (gamma[alpha] - 1,) + gamma[alpha + 1 :])
            value: Expr = literal(0)
            for beta, weight in enumerate(rows[alpha]):
                if weight:
                    term = mul(literal(weight), differentiate(lower, Var.from_flat(beta, n)))
                    value = add(value, term)
            cache[gamma] = value
            return value

        parts = tuple((coefficient, power(gamma)) for gamma, coefficient in self.expansion)
        return BoppImage(parts)


@dataclass(frozen=True)
class BoppImage:
    """Σ 계수 다항식 · 미분된 표현식"""
    parts: tuple[tuple[PolySymbol, Expr], ...]

    def evaluate(self, z: Sequence) -> complex | np.ndarray:
        result = 0j
        for coefficient, derivative in self.parts:
            result = result + coefficient.evaluate(z) * derivative.evaluate(z)
        return result


def star_poly(a: PolySymbol, b: PolySymbol, params: NCParams) -> PolySymbol:
    """a ⋆_Ω b

    입력이 정확하면 결과도 정확(가우스 유리수)하고 전개는 |γ| = deg a 에서 끝난다.

    Args:
        a: 왼쪽 심볼
        b: 오른쪽 심볼
        params: 변형 파라미터 (허용 조건 확인)

    Returns:
        PolySymbol: a ⋆_Ω b
    """
    check_admissible(params)
    operator = BoppOperator.from_symbol(a, params)
    logger.debug(f"Bopp 전개 항 {len(operator.expansion)}개 (차수 {a.degree})")
    return operator.apply(b)


def star_order(a: PolySymbol, b: PolySymbol, params: NCParams, k: int) -> PolySymbol:
    """전개에서 |γ| = k 인 부분 (k=0 은 ab, k=1 은 (iħ/2){a,b}_Ω)"""
    check_admissible(params)
    return BoppOperator.from_symbol(a, params).apply(b, order=k)


def star_commutator(a: PolySymbol, b: PolySymbol, params: NCParams) -> PolySymbol:
    return star_poly(a, b, params) - star_poly(b, a, params)


def bopp_coordinate(alpha: int | Var, params: NCParams) -> BoppOperator:
    """z̃_α = z_α + ½iħ(Ω∂)_α (alpha는 0-based 위치 또는 Var)"""
    position = alpha.flat(params.n) if isinstance(alpha, Var) else int(alpha)
    coordinate = PolySymbol.variable(2 * params.n, position)
    return BoppOperator.from_symbol(coordinate, params)


def hamiltonian_field(a: PolySymbol, params: NCParams) -> tuple[PolySymbol, ...]:
    """X_{a,Ω} = Ω∂a"""
    rows = omega_fractions(params)
    return tuple(_omega_derivative(a, alpha, rows) for alpha in range(a.nvars))


def poisson(a: PolySymbol, b: PolySymbol) -> PolySymbol:
    """표준 Poisson 괄호 Σ_α (∂_{x_α}a ∂_{p_α}b − ∂_{p_α}a ∂_{x_α}b)"""
    n = a.nvars // 2
    result = PolySymbol.zero(a.nvars, a.exact and b.exact)
    for alpha in range(n):
        result = result + a.derivative(alpha) * b.derivative(n + alpha)
        result = result - a.derivative(n + alpha) * b.derivative(alpha)
    return result


def _poisson_omega_defining(a: PolySymbol, b: PolySymbol, params: NCParams) -> PolySymbol:
    # −ω(X_a, X_b) = −(Ω∂a)·∂b
    field = hamiltonian_field(a, params)
    result = PolySymbol.zero(a.nvars, a.exact and b.exact)
    for alpha, component in enumerate(field):
        result = result - component * b.derivative(alpha)
    return result


def _poisson_omega_explicit(a: PolySymbol, b: PolySymbol, params: NCParams) -> PolySymbol:
    # {a,b} − ħ⁻¹(Θ∂_x a·∂_x b + N∂_p a·∂_p b)
    n = params.n
    inverse_hbar = 1 / rationalize(params.hbar)
    correction = PolySymbol.zero(a.nvars, a.exact and b.exact)
    for offset, matrix in ((0, params.theta), (n, params.eta)):
        for beta in range(n):
            for alpha in range(n):
                weight = rationalize(matrix[beta, alpha])
                if weight:
                    term = a.derivative(offset + alpha) * b.derivative(offset + beta)
                    correction = correction + term.scale(weight)
    return poisson(a, b) - correction.scale(inverse_hbar)


def _max_coefficient(p: PolySymbol) -> float:
    return max((abs(complex(c)) for _, c in p.to_float().items()), default=0.0)


def poisson_omega(a: PolySymbol, b: PolySymbol, params: NCParams) -> PolySymbol:
    """Ω-Poisson 괄호 {a,b}_Ω

    정의식과 Θ/N 명시식 두 경로로 계산해 일치를 확인한다.

    Raises:
        ConsistencyError: 두 경로가 다를 때 (구현 버그)
    """
    check_admissible(params)
    defining = _poisson_omega_defining(a, b, params)
    explicit = _poisson_omega_explicit(a, b, params)
    if defining.exact and explicit.exact:
        agree = defining == explicit
    else:
        scale = max(1.0, _max_coefficient(defining))
        agree = _max_coefficient(defining - explicit) <= FLOAT_CONSISTENCY_TOL * scale
    if not agree:
        raise ConsistencyError("{a,b}_Ω 의 두 계산 경로가 일치하지 않음")
    return defining


def commutator_defect(
    a: Expr,
    b: Expr,
    params: NCParams,
    hbars: Sequence[float],
    probes: np.ndarray,
) -> list[float]:
    """ħ별 max_probe |(a⋆b − b⋆a)/(iħ) − {a,b}|

    Args:
        a, b: 다항식 표현식
        params: 스케줄이 있으면 ħ마다 Θ(ħ), N(ħ)를 다시 계산
        hbars: 감소하는 ħ 목록
        probes: (P, 2n) 평가 점

    Returns:
        list[float]: hbars와 같은 순서의 결함 값
    """
    if any(h2 >= h1 for h1, h2 in zip(hbars, hbars[1:])):
        raise ParameterError("hbars는 감소 수열이어야 함")
    pa, pb = to_poly(a, params.n), to_poly(b, params.n)
    bracket = poisson(pa, pb)
    z = np.asarray(probes, dtype=float).T
    defects = []
    for hbar in hbars:
        current = with_hbar(params, hbar)
        commutator = star_commutator(pa, pb, current)
        values = commutator.evaluate(z) / (1j * hbar) - bracket.evaluate(z)
        defects.append(float(np.max(np.abs(values))))
        logger.debug(f"ħ={hbar:g}: 교환자 결함 {defects[-1]:.3e}")
    return defects


__all__ = [
    "BoppImage",
    "BoppOperator",
    "bopp_coordinate",
    "commutator_defect",
    "hamiltonian_field",
    "omega_fractions",
    "poisson",
    "poisson_omega",
    "star_commutator",
    "star_order",
    "star_poly",
]
