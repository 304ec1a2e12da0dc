"""Tokenizer and recursive-descent parser; see grammar.md for the EBNF."""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError
from .ast import (BigOp, BinOp, Call, Chain, Ellipsis_, Inf, Interval, Neg, Node, Num, Q,
                  QP, Var)

KEYWORDS = {"qp", "sum", "add", "prod", "inf", "lattice", "step", "offset", "q", "binom"}

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<num>\d+)
  | (?P<name>[A-Za-z][A-Za-z0-9]*)
  | (?P<op>\.\.\.|\.\.|>=|<=|[-+*/^_(){}\[\],;=])
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str      # 'num', 'name', 'kw', 'op', 'eof'
    text: str
    pos: int


def tokenize(src: str) -> list[Token]:
    out = []
    i = 0
    while i < len(src):
        m = _TOKEN.match(src, i)
        if not m:
            raise _error(src, i, f"unexpected character {src[i]!r}", ())
        kind = m.lastgroup
        if kind != "ws":
            text = m.group()
            if kind == "name" and text in KEYWORDS:
                kind = "kw"
            out.append(Token(kind, text, i))
        i = m.end()
    out.append(Token("eof", "", len(src)))
    return out


def _error(src: str, pos: int, msg: str, expected) -> ParseError:
    line = src.count("\n", 0, pos) + 1
    col = pos - (src.rfind("\n", 0, pos) + 1) + 1
    return ParseError(f"{msg} at line {line}, column {col}", pos, expected, line, col)


class Parser:
    def __init__(self, src: str):
        self.src = src
        self.toks = tokenize(src)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def at(self, *texts: str) -> bool:
        return self.tok.kind in ("op", "kw") and self.tok.text in texts

    def fail(self, expected) -> ParseError:
        t = self.tok
        what = "end of input" if t.kind == "eof" else repr(t.text)
        return _error(self.src, t.pos, f"unexpected {what}; expected {' or '.join(sorted(expected))}", expected)

    def expect(self, text: str) -> Token:
        if not self.at(text):
            raise self.fail([text])
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    # expr := term (('+'|'-') term)*
    def expr(self) -> Node:
        n = self.term()
        while self.at("+", "-"):
            op = self.tok.text
            self.i += 1
            n = BinOp(op, n, self.term())
        return n

    def term(self) -> Node:
        n = self.unary()
        while self.at("*", "/"):
            op = self.tok.text
            self.i += 1
            n = BinOp(op, n, self.unary())
        return n

    def unary(self) -> Node:
        if self.accept("-"):
            return Neg(self.unary())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.accept("^"):
            return BinOp("^", base, self.exponent())
        return base

    def exponent(self) -> Node:
        if self.accept("-"):
            return Neg(self.exponent())
        return self.power()

    def group(self) -> Node:
        if self.accept("("):
            n = self.expr()
            self.expect(")")
            return n
        if self.accept("{"):
            n = self.expr()
            self.expect("}")
            return n
        raise self.fail(["(", "{"])

    def atom(self) -> Node:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(int(t.text))
        if t.kind == "name":
            return self.var()
        if t.kind == "kw":
            if t.text == "q":
                self.i += 1
                return Q()
            if t.text == "inf":
                self.i += 1
                return Inf()
            if t.text == "qp":
                return self.qp()
            if t.text in ("sum", "add", "prod"):
                return self.bigop()
            if t.text == "binom":
                self.i += 1
                self.expect("(")
                args = [self.expr()]
                while self.accept(","):
                    args.append(self.expr())
                self.expect(")")
                return Call("binom", tuple(args))
        if self.at("(", "{"):
            return self.group()
        raise self.fail(["number", "name", "q", "qp", "sum", "(", "-"])

    def var(self) -> Var:
        t = self.tok
        if t.kind != "name":
            raise self.fail(["name"])
        self.i += 1
        if self.accept("["):
            idx = self.expr()
            self.expect("]")
            return Var(t.text, idx)
        return Var(t.text)

    def qp(self) -> QP:
        self.expect("qp")
        self.expect("(")
        args = [self.expr()]
        while self.accept(","):
            args.append(self.expr())
        self.expect(";")
        base = self.expr()
        self.expect(")")
        self.expect("_")
        t = self.tok
        if t.kind == "num":
            self.i += 1
            length = Num(int(t.text))
        elif t.kind == "name":
            length = self.var()
        elif self.at("inf"):
            self.i += 1
            length = Inf()
        elif self.at("(", "{"):
            length = self.group()
        else:
            raise self.fail(["number", "name", "inf", "{"])
        return QP(tuple(args), base, length)

    def bigop(self) -> BigOp:
        kind = self.tok.text
        self.i += 1
        self.expect("(")
        rng = self.range()
        self.expect(")")
        self.expect("{")
        body = self.expr()
        self.expect("}")
        return BigOp(kind, rng, body)

    def range(self) -> Node:
        # interval: var = lo..hi [step s] [offset o]; otherwise a >= chain
        save = self.i
        if self.tok.kind == "name":
            v = self.var()
            if self.accept("="):
                lo = self.expr()
                self.expect("..")
                hi = self.expr()
                step = offset = None
                if self.accept("step"):
                    step = self.expr()
                if self.accept("offset"):
                    offset = self.expr()
                return Interval(v, lo, hi, step, offset)
            self.i = save
        items = [self.chain_item()]
        while self.accept(">="):
            items.append(self.chain_item())
        if len(items) < 2 and not self.at(","):
            raise self.fail(["=", ">="])
        lattice = False
        pins = []
        if self.accept(","):
            self.expect("lattice")
            lattice = True
        if self.accept(";"):
            while True:
                v = self.var()
                self.expect("=")
                pins.append((v, self.expr()))
                if not self.accept(","):
                    break
        return Chain(tuple(items), lattice, tuple(pins))

    def chain_item(self) -> Node:
        if self.accept("..."):
            return Ellipsis_()
        return self.expr()


def parse(src: str) -> Node:
    p = Parser(src)
    n = p.expr()
    if p.tok.kind != "eof":
        raise p.fail(["operator", "end of input"])
    return n
