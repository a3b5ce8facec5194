"""위상공간 심볼 DSL: AST, 파서, 다항식"""

from .expr import (
    BinOp,
    Exp,
    Expr,
    Neg,
    Num,
    Pow,
    Var,
    compose_linear,
    differentiate,
    evaluate,
    max_index,
    to_text,
)
from .parser import parse
from .poly import PolySymbol, from_poly, poly_text, poly_to_terms, to_poly

__all__ = [
    "BinOp",
    "Exp",
    "Expr",
    "Neg",
    "Num",
    "PolySymbol",
    "Pow",
    "Var",
    "compose_linear",
    "differentiate",
    "evaluate",
    "from_poly",
    "max_index",
    "parse",
    "poly_text",
    "poly_to_terms",
    "to_poly",
    "to_text",
]
