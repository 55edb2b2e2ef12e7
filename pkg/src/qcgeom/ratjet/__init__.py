"""Exact arithmetic substrate: rationals, jets, expressions, jet linear algebra."""
from .expr import (
    DivisionByZeroAtPoint,
    Expression,
    ExpressionSyntaxError,
    UnknownSymbolError,
    evaluate_jet,
    evaluate_jets,
    parse_expression,
)
from .jet import Jet, JetDivisionError, JetError, OrderExhausted, is_zero, monomials, value_of
from .linalg import InconsistentSystem, SingularValuePart, inverse, solve_linear_jets
from .rational import Q, format_rational, to_rational

__all__ = [
    "Q",
    "to_rational",
    "format_rational",
    "Jet",
    "JetError",
    "JetDivisionError",
    "OrderExhausted",
    "monomials",
    "is_zero",
    "value_of",
    "Expression",
    "ExpressionSyntaxError",
    "UnknownSymbolError",
    "DivisionByZeroAtPoint",
    "parse_expression",
    "evaluate_jet",
    "evaluate_jets",
    "SingularValuePart",
    "InconsistentSystem",
    "solve_linear_jets",
    "inverse",
]
