"""char2forms: exact characteristic-2 form theory over function fields."""

from .gf2field import (
    FieldContext,
    Polynomial,
    RationalFunction,
    SquareDecomposition,
    NotASquare,
    ZeroDenominator,
    DivisionByZero,
    parse_element,
    format_element,
    rf_normalize,
    square_decompose,
    sqrt,
    try_sqrt,
)

__all__ = [
    "FieldContext",
    "Polynomial",
    "RationalFunction",
    "SquareDecomposition",
    "NotASquare",
    "ZeroDenominator",
    "DivisionByZero",
    "parse_element",
    "format_element",
    "rf_normalize",
    "square_decompose",
    "sqrt",
    "try_sqrt",
]
