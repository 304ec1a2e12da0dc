"""Expression tree for the q-series DSL and its canonical pretty-printer."""

from __future__ import annotations

from dataclasses import dataclass


class Node:
    __slots__ = ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Num(Node):
    value: int


@dataclass(frozen=True)
class Q(Node):
    pass


@dataclass(frozen=True)
class Inf(Node):
    pass


@dataclass(frozen=True)
class Var(Node):
    name: str
    index: Node | None = None


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Call(Node):
    fn: str
    args: tuple


@dataclass(frozen=True)
class QP(Node):
    args: tuple
    base: Node
    length: Node


@dataclass(frozen=True)
class Ellipsis_(Node):
    pass


@dataclass(frozen=True)
class Interval(Node):
    var: Var
    lo: Node
    hi: Node
    step: Node | None = None
    offset: Node | None = None


@dataclass(frozen=True)
class Chain(Node):
    """``a >= b >= ...``; items are Vars, bound expressions or Ellipsis_."""

    items: tuple
    lattice: bool = False
    pins: tuple = ()   # ((Var, Node), ...)


@dataclass(frozen=True)
class BigOp(Node):
    kind: str          # 'sum', 'add' or 'prod'
    range: Node        # Interval or Chain
    body: Node


PREC = {"+": 1, "-": 1, "*": 2, "/": 2, "^": 4}
NEG_PREC = 3


def _wrap(s: str, cond: bool) -> str:
    return f"({s})" if cond else s


def _atomic(n: Node) -> bool:
    return isinstance(n, (Num, Q, Inf, Var, QP, BigOp, Call))


def render(n: Node) -> str:
    if isinstance(n, Num):
        return str(n.value)
    if isinstance(n, Q):
        return "q"
    if isinstance(n, Inf):
        return "inf"
    if isinstance(n, Var):
        return n.name if n.index is None else f"{n.name}[{render(n.index)}]"
    if isinstance(n, Ellipsis_):
        return "..."
    if isinstance(n, Neg):
        inner = render(n.operand)
        return "-" + _wrap(inner, _prec(n.operand) < NEG_PREC)
    if isinstance(n, BinOp):
        p = PREC[n.op]
        if n.op == "^":
            left = _wrap(render(n.left), not _atomic(n.left))
            right = render(n.right)
            simple = isinstance(n.right, (Num, Var, Q)) or (
                isinstance(n.right, Neg) and isinstance(n.right.operand, (Num, Var)))
            return f"{left}^{right if simple else '(' + right + ')'}"
        left = _wrap(render(n.left), _prec(n.left) < p)
        right = _wrap(render(n.right), _prec(n.right) <= p and not isinstance(n.right, Neg))
        return f"{left} {n.op} {right}"
    if isinstance(n, Call):
        return f"{n.fn}({', '.join(render(a) for a in n.args)})"
    if isinstance(n, QP):
        args = ", ".join(render(a) for a in n.args)
        ln = n.length
        sub = render(ln) if isinstance(ln, (Num, Inf)) or (isinstance(ln, Var) and ln.index is None) else "{" + render(ln) + "}"
        return f"qp({args}; {render(n.base)})_{sub}"
    if isinstance(n, Interval):
        s = f"{render(n.var)} = {render(n.lo)}..{render(n.hi)}"
        if n.step is not None:
            s += f" step {render(n.step)}"
        if n.offset is not None:
            s += f" offset {render(n.offset)}"
        return s
    if isinstance(n, Chain):
        s = " >= ".join(render(x) for x in n.items)
        if n.lattice:
            s += ", lattice"
        if n.pins:
            s += "; " + ", ".join(f"{render(v)} = {render(e)}" for v, e in n.pins)
        return s
    if isinstance(n, BigOp):
        return f"{n.kind}({render(n.range)}) {{ {render(n.body)} }}"
    raise TypeError(f"cannot render {n!r}")


def _prec(n: Node) -> int:
    if isinstance(n, BinOp):
        return PREC[n.op]
    if isinstance(n, Neg):
        return NEG_PREC
    return 5
