"""Exact tame symbols and numerical Deligne-Beilinson pairings on circles."""

from .errors import (
    AmbiguousWindingError,
    DomainError,
    ExpressionSyntaxError,
    InadmissibleError,
    MismatchedGridError,
    OnContourError,
    PoleOrZeroError,
    ReciprocityError,
    ScenarioError,
    UnderSampledError,
)
from .gaussian import I, GaussianRational
from .parser import parse_rational, parse_scalar
from .rational import (
    INFINITY,
    Divisor,
    FactoredRational,
    divisor,
    evaluate,
    format_rational,
    residue,
    substitute_infinity,
    valuation,
)
from .symbols import residue_sum_check, tame_symbol, weil_product

__version__ = "0.1.0"

__all__ = [
    "AmbiguousWindingError",
    "Divisor",
    "DomainError",
    "ExpressionSyntaxError",
    "FactoredRational",
    "GaussianRational",
    "I",
    "INFINITY",
    "InadmissibleError",
    "MismatchedGridError",
    "OnContourError",
    "PoleOrZeroError",
    "ReciprocityError",
    "ScenarioError",
    "UnderSampledError",
    "divisor",
    "evaluate",
    "format_rational",
    "parse_rational",
    "parse_scalar",
    "residue",
    "residue_sum_check",
    "substitute_infinity",
    "tame_symbol",
    "valuation",
    "weil_product",
]
