"""Exact q-series workbench: truncated Laurent series, q-Pochhammer products,
certified summation, an identity catalog and partition counting."""

__version__ = "0.1.0"

from .errors import (BeyondOrder, CatalogCorrupt, DivergentProduct, EvaluationError, FormalDivergence,
                     NonIntegralExponent, NotInvertible, ParseError, PoleAtTerm, QBenchError,
                     UnboundVariable, ZeroFactorInDenominator)
from .series import Monomial, QSeries, render
from .dsl import evaluate, expand, parse

__all__ = [
    "__version__", "Monomial", "QSeries", "render", "evaluate", "expand", "parse",
    "QBenchError", "NotInvertible", "BeyondOrder", "ZeroFactorInDenominator", "DivergentProduct",
    "PoleAtTerm", "FormalDivergence", "NonIntegralExponent", "CatalogCorrupt", "ParseError",
    "UnboundVariable", "EvaluationError",
]
