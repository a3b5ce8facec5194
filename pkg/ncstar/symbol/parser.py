"""심볼 DSL 파서

문법 (EBNF):
    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := '-' factor | base ('^' uint)?
    base   := number | ident | '(' expr ')' | 'exp' '(' expr ')'
    ident  := ('x'|'p') uint
    number := 소수 또는 유리수 'a/b' (공백 없이)

우선순위는 ^ > 단항 − > * / > + − 이고 이항 연산은 왼쪽 결합이다.
"/"의 오른쪽은 0이 아닌 리터럴이어야 한다.
"^" 바로 뒤에서는 "a/b" 를 유리수로 읽지 않으므로 x1^2/2 는 (x1^2)/2 이다.
"""

import re
from dataclasses import dataclass
from fractions import Fraction

from ..errors import ParseError
from .expr import BinOp, Exp, Expr, Neg, Num, Pow, Var

_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>\d+(?:\.\d+)?(?:/\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)
_VAR_RE = re.compile(r"([xp])(\d+)")
# "^" 바로 뒤의 숫자는 유리수 리터럴로 읽지 않는다 (x1^2/2 = (x1^2)/2)
_EXPONENT_RE = re.compile(r"\s*(?P<number>\d+(?:\.\d+)?)")


@dataclass(frozen=True)
class Token:
    kind: str     # "number", "ident", "op", "end"
    text: str
    column: int   # 1-based


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        after_caret = bool(tokens) and tokens[-1].kind == "op" and tokens[-1].text == "^"
        match = (after_caret and _EXPONENT_RE.match(text, pos)) or _TOKEN_RE.match(text, pos)
        if match is None or match.end() == pos:
            column = pos + 1 + (len(text[pos:]) - len(text[pos:].lstrip()))
            raise ParseError(f"알 수 없는 문자 '{text[column - 1]}'", column)
        kind = match.lastgroup
        tokens.append(Token(kind, match.group(kind), match.start(kind) + 1))
        pos = match.end()
    tokens.append(Token("end", "", len(text) + 1))
    return tokens


def _number(token: Token) -> Fraction:
    numerator, _, denominator = token.text.partition("/")
    value = Fraction(numerator)
    if denominator:
        if int(denominator) == 0:
            raise ParseError("0으로 나누는 유리수 리터럴", token.column)
        value /= int(denominator)
    return value


class _Parser:
    def __init__(self, text: str, n: int):
        self.tokens = tokenize(text)
        self.pos = 0
        self.n = n

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        token = self.current
        if token.kind != "op" or token.text != text:
            found = token.text or "입력 끝"
            raise ParseError(f"'{text}'가 필요하지만 '{found}'를 만남", token.column)
        return self.advance()

    def is_op(self, *texts: str) -> bool:
        return self.current.kind == "op" and self.current.text in texts

    def parse(self) -> Expr:
        if self.current.kind == "end":
            raise ParseError("빈 표현식", 1)
        expr = self.expr()
        if self.current.kind != "end":
            raise ParseError(f"예상하지 못한 토큰 '{self.current.text}'", self.current.column)
        return expr

    def expr(self) -> Expr:
        node = self.term()
        while self.is_op("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Expr:
        node = self.factor()
        while self.is_op("*", "/"):
            token = self.advance()
            right = self.factor()
            if token.text == "/":
                _check_denominator(right, token)
            node = BinOp(token.text, node, right)
        return node

    def factor(self) -> Expr:
        if self.is_op("-"):
            self.advance()
            return Neg(self.factor())
        node = self.base()
        if self.is_op("^"):
            self.advance()
            token = self.current
            if token.kind != "number" or not token.text.isdigit():
                raise ParseError("지수는 음이 아닌 정수여야 함", token.column)
            self.advance()
            node = Pow(node, int(token.text))
        return node

    def base(self) -> Expr:
        token = self.current
        if token.kind == "number":
            self.advance()
            return Num(_number(token))
        if token.kind == "ident":
            self.advance()
            if token.text == "exp":
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Exp(arg)
            return self.variable(token)
        if self.is_op("("):
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        found = token.text or "입력 끝"
        raise ParseError(f"피연산자가 필요하지만 '{found}'를 만남", token.column)

    def variable(self, token: Token) -> Var:
        match = _VAR_RE.fullmatch(token.text)
        if match is None:
            raise ParseError(f"알 수 없는 식별자 '{token.text}'", token.column)
        index = int(match.group(2))
        if not 1 <= index <= self.n:
            raise ParseError(
                f"변수 인덱스 범위 초과: {token.text} (n={self.n})", token.column
            )
        return Var(match.group(1), index)


def _check_denominator(node: Expr, token: Token) -> None:
    literal = node.operand if isinstance(node, Neg) else node
    if not isinstance(literal, Num):
        raise ParseError("'/'의 오른쪽은 리터럴이어야 함", token.column)
    if literal.value == 0:
        raise ParseError("0으로 나눔", token.column)


def parse(text: str, n: int) -> Expr:
    """텍스트를 SymbolExpr로 파싱

    Args:
        text: 심볼 표현식 (예: "x1^2 + p1^2")
        n: 자유도 (변수 인덱스 상한)

    Returns:
        Expr: AST
    """
    return _Parser(text, n).parse()
