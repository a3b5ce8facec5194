"""위상공간 심볼 AST

노드는 불변 dataclass이며 구조적 동등성(==)을 가진다. 리터럴은 파서가 만든
Fraction(정확)이나 compose_linear가 만든 float이다.
"""

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

Scalar = Fraction | float | complex

# 출력 우선순위 (클수록 강하게 결합)
_PREC_ADD = 1
_PREC_MUL = 2
_PREC_NEG = 3
_PREC_POW = 4
_PREC_ATOM = 5


class Expr:
    """심볼 표현식 베이스"""

    def evaluate(self, z: Sequence) -> complex | np.ndarray:
        return evaluate(self, z)

    def __str__(self) -> str:
        return to_text(self)


@dataclass(frozen=True)
class Num(Expr):
    value: Scalar


@dataclass(frozen=True)
class Var(Expr):
    kind: str   # "x" 또는 "p"
    index: int  # 1부터 시작

    def flat(self, n: int) -> int:
        """z = (x1..xn, p1..pn) 에서의 0-based 위치"""
        return self.index - 1 if self.kind == "x" else n + self.index - 1

    @classmethod
    def from_flat(cls, position: int, n: int) -> "Var":
        if position < n:
            return cls("x", position + 1)
        return cls("p", position - n + 1)


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # "+", "-", "*", "/"
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Exp(Expr):
    arg: Expr


ZERO = Num(Fraction(0))
ONE = Num(Fraction(1))


def _is_value(e: Expr, value: int) -> bool:
    return isinstance(e, Num) and e.value == value


def add(a: Expr, b: Expr) -> Expr:
    if _is_value(a, 0):
        return b
    if _is_value(b, 0):
        return a
    return BinOp("+", a, b)


def sub(a: Expr, b: Expr) -> Expr:
    if _is_value(b, 0):
        return a
    if _is_value(a, 0):
        return neg(b)
    return BinOp("-", a, b)


def mul(a: Expr, b: Expr) -> Expr:
    if _is_value(a, 0) or _is_value(b, 0):
        return ZERO
    if _is_value(a, 1):
        return b
    if _is_value(b, 1):
        return a
    return BinOp("*", a, b)


def neg(a: Expr) -> Expr:
    if _is_value(a, 0):
        return ZERO
    return Neg(a)


def power(base: Expr, k: int) -> Expr:
    if k == 0:
        return ONE
    if k == 1:
        return base
    return Pow(base, k)


def literal(value) -> Num:
    """정수/Fraction은 정확한 리터럴, 그 외는 float/complex"""
    if isinstance(value, Fraction):
        return Num(value)
    if isinstance(value, (int, np.integer)):
        return Num(Fraction(int(value)))
    if np.iscomplexobj(value):
        return Num(complex(value))
    return Num(float(value))


def _leaf_value(value: Scalar):
    if isinstance(value, Fraction):
        return float(value)
    return value


def evaluate(e: Expr, z: Sequence) -> complex | np.ndarray:
    """z = (x1..xn, p1..pn) 에서 e를 계산 (z 성분은 스칼라 또는 같은 형상의 배열)"""
    n = len(z) // 2
    if isinstance(e, Num):
        return _leaf_value(e.value)
    if isinstance(e, Var):
        return z[e.flat(n)]
    if isinstance(e, Neg):
        return -evaluate(e.operand, z)
    if isinstance(e, BinOp):
        left = evaluate(e.left, z)
        right = evaluate(e.right, z)
        if e.op == "+":
            return left + right
        if e.op == "-":
            return left - right
        if e.op == "*":
            return left * right
        return left / right
    if isinstance(e, Pow):
        return evaluate(e.base, z) ** e.exponent
    if isinstance(e, Exp):
        return np.exp(evaluate(e.arg, z))
    raise TypeError(f"알 수 없는 노드: {e!r}")


def _as_var(var: "Var | str") -> Var:
    if isinstance(var, Var):
        return var
    return Var(var[0], int(var[1:]))


def differentiate(e: Expr, var: "Var | str") -> Expr:
    """var에 대한 편미분 (지수함수는 연쇄 법칙)"""
    var = _as_var(var)
    if isinstance(e, Num):
        return ZERO
    if isinstance(e, Var):
        return ONE if e == var else ZERO
    if isinstance(e, Neg):
        return neg(differentiate(e.operand, var))
    if isinstance(e, BinOp):
        dl = differentiate(e.left, var)
        if e.op == "/":
            return ZERO if _is_value(dl, 0) else BinOp("/", dl, e.right)
        dr = differentiate(e.right, var)
        if e.op == "+":
            return add(dl, dr)
        if e.op == "-":
            return sub(dl, dr)
        return add(mul(dl, e.right), mul(e.left, dr))
    if isinstance(e, Pow):
        if e.exponent == 0:
            return ZERO
        inner = differentiate(e.base, var)
        if _is_value(inner, 0):
            return ZERO
        return mul(mul(literal(e.exponent), power(e.base, e.exponent - 1)), inner)
    if isinstance(e, Exp):
        return mul(e, differentiate(e.arg, var))
    raise TypeError(f"알 수 없는 노드: {e!r}")


def _linear_form(row: Sequence, n: int) -> Expr:
    result: Expr = ZERO
    for j, coeff in enumerate(row):
        if coeff == 0:
            continue
        var = Var.from_flat(j, n)
        if coeff == 1:
            term: Expr = var
        elif coeff == -1:
            term = Neg(var)
        else:
            term = BinOp("*", literal(coeff), var)
        result = term if _is_value(result, 0) else BinOp("+", result, term)
    return result


def compose_linear(e: Expr, m) -> Expr:
    """z ↦ e(m·z): 각 변수를 m의 행이 만드는 선형 결합으로 치환

    m의 성분이 정수/Fraction이면 결과 리터럴도 정확하다.
    """
    rows = [list(row) for row in m]
    n = len(rows) // 2
    forms = [_linear_form(row, n) for row in rows]

    def substitute(node: Expr) -> Expr:
        if isinstance(node, Num):
            return node
        if isinstance(node, Var):
            return forms[node.flat(n)]
        if isinstance(node, Neg):
            return Neg(substitute(node.operand))
        if isinstance(node, BinOp):
            return BinOp(node.op, substitute(node.left), substitute(node.right))
        if isinstance(node, Pow):
            return Pow(substitute(node.base), node.exponent)
        if isinstance(node, Exp):
            return Exp(substitute(node.arg))
        raise TypeError(f"알 수 없는 노드: {node!r}")

    return substitute(e)


def max_index(e: Expr) -> int:
    """표현식에 등장하는 가장 큰 변수 인덱스 (변수가 없으면 0)"""
    if isinstance(e, Var):
        return e.index
    if isinstance(e, Num):
        return 0
    if isinstance(e, Neg):
        return max_index(e.operand)
    if isinstance(e, BinOp):
        return max(max_index(e.left), max_index(e.right))
    if isinstance(e, Pow):
        return max_index(e.base)
    return max_index(e.arg)


def _format_number(value: Scalar) -> tuple[str, int]:
    if isinstance(value, Fraction):
        text = str(value)
        return (f"({text})", _PREC_ATOM) if value < 0 else (text, _PREC_ATOM)
    if isinstance(value, complex):
        return f"({value!r})", _PREC_ATOM  # 파싱 불가 (내부 전용)
    text = np.format_float_positional(value, trim="-")
    return (f"({text})", _PREC_ATOM) if value < 0 else (text, _PREC_ATOM)


def _render(e: Expr) -> tuple[str, int]:
    if isinstance(e, Num):
        return _format_number(e.value)
    if isinstance(e, Var):
        return f"{e.kind}{e.index}", _PREC_ATOM
    if isinstance(e, Exp):
        return f"exp({to_text(e.arg)})", _PREC_ATOM
    if isinstance(e, Pow):
        return f"{_wrap(e.base, _PREC_ATOM)}^{e.exponent}", _PREC_POW
    if isinstance(e, Neg):
        return f"-{_wrap(e.operand, _PREC_NEG)}", _PREC_NEG
    if e.op in "+-":
        left = _wrap(e.left, _PREC_ADD)
        right = _wrap(e.right, _PREC_ADD + 1)
        return f"{left} {e.op} {right}", _PREC_ADD
    left = _wrap(e.left, _PREC_MUL)
    right = _wrap(e.right, _PREC_MUL + 1)
    # "/" 양쪽 공백: 유리수 리터럴 "a/b" 와 구분
    separator = "*" if e.op == "*" else " / "
    return f"{left}{separator}{right}", _PREC_MUL


def _wrap(e: Expr, minimum: int) -> str:
    text, prec = _render(e)
    return text if prec >= minimum else f"({text})"


def to_text(e: Expr) -> str:
    """파서가 다시 읽을 수 있는 텍스트로 출력"""
    return _render(e)[0]
