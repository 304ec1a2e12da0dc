from .ast import render
from .compile import compile_expr, evaluate, expand, monomial
from .parser import parse, tokenize

__all__ = ["parse", "tokenize", "render", "compile_expr", "evaluate", "expand", "monomial"]
