"""다항식 심볼 PolySymbol

계수 도메인은 두 가지다.
- 정확: sympy의 가우스 유리수 QQ_I (iħ/2 같은 복소 계수도 정확하게 유지)
- 부동소수: Python complex
"""

import logging
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterator, Mapping, Sequence

import numpy as np
from sympy import QQ, QQ_I
from sympy.polys.domains.gaussiandomains import GaussianRational

from ..errors import PolynomialError
from .expr import BinOp, Expr, Neg, Num, Pow, Var, add, literal, mul, power

logger = logging.getLogger(__name__)

Monomial = tuple[int, ...]

GAUSSIAN_ZERO = QQ_I.zero
GAUSSIAN_ONE = QQ_I.one
GAUSSIAN_I = QQ_I.imag_unit


def rationalize(value) -> Fraction:
    """float은 repr의 십진 표현을 그대로 유리수로 (0.1 → 1/10)"""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, np.integer)):
        return Fraction(int(value))
    return Fraction(repr(float(value)))


def gaussian(re, im=0):
    """유리수 쌍을 QQ_I 원소로"""
    re, im = rationalize(re), rationalize(im)
    return QQ_I(QQ(re.numerator, re.denominator), QQ(im.numerator, im.denominator))


def _fraction(q) -> Fraction:
    return Fraction(int(q.numerator), int(q.denominator))


def gaussian_parts(c) -> tuple[Fraction, Fraction]:
    return _fraction(c.x), _fraction(c.y)


def gaussian_to_complex(c) -> complex:
    re, im = gaussian_parts(c)
    return complex(float(re), float(im))


def _is_zero(c, exact: bool) -> bool:
    return c == GAUSSIAN_ZERO if exact else c == 0


@dataclass(frozen=True, eq=False)
class PolySymbol:
    """다중지수 γ ∈ ℕ^{2n} → 계수 맵"""
    nvars: int                                   # 2n
    terms: Mapping[Monomial, object] = field(default_factory=dict)
    exact: bool = True

    def __post_init__(self) -> None:
        cleaned = {m: c for m, c in self.terms.items() if not _is_zero(c, self.exact)}
        object.__setattr__(self, "terms", cleaned)

    # --- 생성자 ---

    @classmethod
    def zero(cls, nvars: int, exact: bool = True) -> "PolySymbol":
        return cls(nvars, {}, exact)

    @classmethod
    def constant(cls, nvars: int, value, exact: bool = True) -> "PolySymbol":
        coeff = _coerce_scalar(value, exact)
        return cls(nvars, {(0,) * nvars: coeff}, exact)

    @classmethod
    def variable(cls, nvars: int, position: int, exact: bool = True) -> "PolySymbol":
        mono = tuple(1 if k == position else 0 for k in range(nvars))
        one = GAUSSIAN_ONE if exact else 1.0 + 0j
        return cls(nvars, {mono: one}, exact)

    # --- 기본 속성 ---

    @property
    def n(self) -> int:
        return self.nvars // 2

    @property
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=0)

    @property
    def max_exponents(self) -> Monomial:
        """변수별 최대 지수"""
        result = [0] * self.nvars
        for mono in self.terms:
            result = [max(r, e) for r, e in zip(result, mono)]
        return tuple(result)

    @property
    def is_constant(self) -> bool:
        return all(not any(m) for m in self.terms)

    def coefficient(self, mono: Monomial):
        zero = GAUSSIAN_ZERO if self.exact else 0j
        return self.terms.get(tuple(mono), zero)

    def items(self) -> Iterator[tuple[Monomial, object]]:
        """단항식 사전식 순서로 (결정적)"""
        for mono in sorted(self.terms):
            yield mono, self.terms[mono]

    # --- 도메인 변환 ---

    def to_float(self) -> "PolySymbol":
        if not self.exact:
            return self
        return PolySymbol(
            self.nvars,
            {m: gaussian_to_complex(c) for m, c in self.terms.items()},
            exact=False,
        )

    def _unify(self, other: "PolySymbol") -> tuple["PolySymbol", "PolySymbol"]:
        if other.nvars != self.nvars:
            raise ValueError(f"변수 개수 불일치: {self.nvars} != {other.nvars}")
        if self.exact and other.exact:
            return self, other
        return self.to_float(), other.to_float()

    # --- 산술 ---

    def __add__(self, other: "PolySymbol") -> "PolySymbol":
        a, b = self._unify(other)
        terms = dict(a.terms)
        for mono, c in b.terms.items():
            terms[mono] = terms[mono] + c if mono in terms else c
        return PolySymbol(self.nvars, terms, a.exact)

    def __neg__(self) -> "PolySymbol":
        return PolySymbol(self.nvars, {m: -c for m, c in self.terms.items()}, self.exact)

    def __sub__(self, other: "PolySymbol") -> "PolySymbol":
        return self + (-other)

    def __mul__(self, other) -> "PolySymbol":
        if not isinstance(other, PolySymbol):
            return self.scale(other)
        a, b = self._unify(other)
        terms: dict[Monomial, object] = {}
        for m1, c1 in a.terms.items():
            for m2, c2 in b.terms.items():
                mono = tuple(e1 + e2 for e1, e2 in zip(m1, m2))
                product = c1 * c2
                terms[mono] = terms[mono] + product if mono in terms else product
        return PolySymbol(self.nvars, terms, a.exact)

    def scale(self, value) -> "PolySymbol":
        """스칼라 곱 (정확 도메인에서 QQ_I 원소 또는 유리수면 정확 유지)"""
        exact = self.exact and _is_exact_scalar(value)
        base = self if exact else self.to_float()
        coeff = _coerce_scalar(value, exact)
        return PolySymbol(self.nvars, {m: c * coeff for m, c in base.terms.items()}, exact)

    def __pow__(self, k: int) -> "PolySymbol":
        result = PolySymbol.constant(self.nvars, 1, self.exact)
        for _ in range(k):
            result = result * self
        return result

    def derivative(self, position: int, order: int = 1) -> "PolySymbol":
        """∂^order / ∂z_position^order"""
        terms: dict[Monomial, object] = {}
        for mono, c in self.terms.items():
            e = mono[position]
            if e < order:
                continue
            factor = 1
            for k in range(order):
                factor *= e - k
            new = mono[:position] + (e - order,) + mono[position + 1 :]
            terms[new] = c * factor
        return PolySymbol(self.nvars, terms, self.exact)

    def partial(self, gamma: Sequence[int]) -> "PolySymbol":
        """∂^γ"""
        result = self
        for position, order in enumerate(gamma):
            if order:
                result = result.derivative(position, order)
        return result

    # --- 비교/평가 ---

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PolySymbol):
            return NotImplemented
        a, b = self._unify(other)
        return a.terms == b.terms

    def __hash__(self) -> int:
        return hash((self.nvars, frozenset(self.to_float().terms.items())))

    @cached_property
    def _float_terms(self) -> list[tuple[Monomial, complex]]:
        return [(m, complex(c)) for m, c in self.to_float().items()]

    def evaluate(self, z: Sequence):
        """z = (x1..xn, p1..pn) 에서 계산 (스칼라 또는 배열)"""
        result = 0j
        for mono, c in self._float_terms:
            value = c
            for position, e in enumerate(mono):
                if e:
                    value = value * z[position] ** e
            result = result + value
        return result

    def evaluate_exact(self, z: Sequence):
        """유리수 점에서의 정확한 값 (QQ_I)"""
        if not self.exact:
            raise ValueError("부동소수 다항식은 정확하게 평가할 수 없음")
        point = [gaussian(v) for v in z]
        result = GAUSSIAN_ZERO
        for mono, c in self.items():
            value = c
            for position, e in enumerate(mono):
                for _ in range(e):
                    value = value * point[position]
            result = result + value
        return result

    def max_imag(self) -> float:
        """계수 허수부의 최대 절댓값 (실수 심볼 확인용)"""
        return max((abs(complex(c).imag) for _, c in self._float_terms), default=0.0)

    def __repr__(self) -> str:
        return f"PolySymbol({poly_text(self)!r}, exact={self.exact})"


def _is_exact_scalar(value) -> bool:
    return isinstance(value, (int, np.integer, Fraction, GaussianRational))


def _coerce_scalar(value, exact: bool):
    if exact:
        if isinstance(value, (int, np.integer, Fraction)):
            return gaussian(value)
        if isinstance(value, GaussianRational):
            return value
        return gaussian(rationalize(complex(value).real), rationalize(complex(value).imag))
    if isinstance(value, GaussianRational):
        return gaussian_to_complex(value)
    return complex(value)


def monomial_text(mono: Monomial) -> str:
    """(2,0,1,0) → "x1^2*p1", 상수항은 "const" """
    n = len(mono) // 2
    parts = []
    for position, e in enumerate(mono):
        if not e:
            continue
        name = f"x{position + 1}" if position < n else f"p{position - n + 1}"
        parts.append(name if e == 1 else f"{name}^{e}")
    return "*".join(parts) if parts else "const"


def coefficient_text(c, exact: bool) -> str:
    if exact:
        re, im = gaussian_parts(c)
        if im == 0:
            return str(re)
        if re == 0:
            return f"{im}i"
        return f"({re} + {im}i)"
    c = complex(c)
    return f"{c.real:g}" if c.imag == 0 else f"({c.real:g} + {c.imag:g}i)"


def poly_text(p: PolySymbol) -> str:
    if p.is_zero:
        return "0"
    return " + ".join(
        f"{coefficient_text(c, p.exact)}*{monomial_text(m)}" for m, c in p.items()
    )


def poly_to_terms(p: PolySymbol) -> dict[str, dict]:
    """JSON용 항 목록 {"x1*x2": {"re": ..., "im": ...}, "const": ...}

    정확 도메인은 유리수를 문자열로 쓴다.
    """
    result: dict[str, dict] = {}
    for mono, c in p.items():
        if p.exact:
            re, im = gaussian_parts(c)
            result[monomial_text(mono)] = {"re": str(re), "im": str(im)}
        else:
            c = complex(c)
            result[monomial_text(mono)] = {"re": c.real, "im": c.imag}
    return result


def _poly_of(e: Expr, nvars: int, exact: bool) -> PolySymbol:
    n = nvars // 2
    if isinstance(e, Num):
        return PolySymbol.constant(nvars, e.value, exact=isinstance(e.value, Fraction))
    if isinstance(e, Var):
        return PolySymbol.variable(nvars, e.flat(n), exact)
    if isinstance(e, Neg):
        return -_poly_of(e.operand, nvars, exact)
    if isinstance(e, BinOp):
        left = _poly_of(e.left, nvars, exact)
        if e.op == "/":
            value = e.right.operand.value if isinstance(e.right, Neg) else e.right.value
            sign = -1 if isinstance(e.right, Neg) else 1
            if isinstance(value, Fraction):
                return left.scale(Fraction(sign) / value)
            return left.scale(sign / value)
        right = _poly_of(e.right, nvars, exact)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        return left * right
    if isinstance(e, Pow):
        return _poly_of(e.base, nvars, exact) ** e.exponent
    raise PolynomialError(f"다항식이 아닌 노드: {e}", node=e)


def to_poly(e: Expr, n: int) -> PolySymbol:
    """exp가 없는 표현식을 전개된 다항식으로 변환

    모든 리터럴이 유리수면 정확 도메인, 아니면 부동소수 도메인.
    """
    return _poly_of(e, 2 * n, exact=True)


def from_poly(p: PolySymbol) -> Expr:
    """다항식을 표현식으로 (정확 도메인의 실수 계수만 정확한 리터럴로 유지)"""
    n = p.n
    result: Expr = Num(Fraction(0))
    for mono, c in p.items():
        if p.exact:
            re, im = gaussian_parts(c)
            coeff = literal(re) if im == 0 else literal(complex(float(re), float(im)))
        else:
            c = complex(c)
            coeff = literal(c.real) if c.imag == 0 else literal(c)
        term: Expr = coeff
        for position, e in enumerate(mono):
            if e:
                term = mul(term, power(Var.from_flat(position, n), e))
        result = add(result, term)
    return result


__all__ = [
    "Monomial",
    "PolySymbol",
    "from_poly",
    "gaussian",
    "gaussian_parts",
    "gaussian_to_complex",
    "monomial_text",
    "poly_text",
    "poly_to_terms",
    "rationalize",
    "to_poly",
]
