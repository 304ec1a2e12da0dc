"""Exception hierarchy shared by every module of the workbench."""

from __future__ import annotations


class QBenchError(Exception):
    """Base class; ``kind`` is the stable machine-readable error name."""

    kind = "QBenchError"

    def __init__(self, message: str = "", **context):
        super().__init__(message or self.kind)
        self.context = context

    def to_dict(self) -> dict:
        out = {"kind": self.kind, "message": str(self)}
        out.update({k: _jsonable(v) for k, v in self.context.items()})
        return out


def _jsonable(v):
    if isinstance(v, (int, str, bool)) or v is None:
        return v
    if isinstance(v, (list, tuple)):
        return [_jsonable(x) for x in v]
    return str(v)


class NotInvertible(QBenchError):
    kind = "NotInvertible"


class BeyondOrder(QBenchError):
    kind = "BeyondOrder"


class ZeroFactorInDenominator(QBenchError):
    kind = "ZeroFactorInDenominator"


class DivergentProduct(QBenchError):
    kind = "DivergentProduct"


class PoleAtTerm(QBenchError):
    kind = "PoleAtTerm"


class FormalDivergence(QBenchError):
    kind = "FormalDivergence"


class NonIntegralExponent(QBenchError):
    kind = "NonIntegralExponent"


class CatalogCorrupt(QBenchError):
    kind = "CatalogCorrupt"


class ParseError(QBenchError):
    kind = "ParseError"

    def __init__(self, message: str, position: int, expected=(), line: int = 1, column: int = 1):
        super().__init__(message, position=position, line=line, column=column, expected=sorted(set(expected)))
        self.position = position
        self.line = line
        self.column = column
        self.expected = sorted(set(expected))


class UnboundVariable(QBenchError):
    kind = "UnboundVariable"


class EvaluationError(QBenchError):
    """DSL construct that is well-formed but cannot be evaluated (e.g. a
    division by a multi-term index-dependent expression)."""

    kind = "EvaluationError"
