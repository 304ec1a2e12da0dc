"""Compile DSL trees into engine specs.

Inside a ``sum`` body every value is a finite list of :class:`Term`
(product forms whose exponents are polynomials in the summation indices).
Outside sums, values are :class:`Expr` nodes that know how to expand
themselves to a requested order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

from ..errors import EvaluationError, NonIntegralExponent, UnboundVariable
from ..qfactorial import INFINITE, PochSpec, ProductSpec, product_eval
from ..series import Monomial, QSeries, _canon, render as render_series
from ..summation import (AffineForm, EngineConfig, PochFactor, QuadraticForm, RangeSpec, SumSpec,
                         Summand, eval_sum)
from .ast import (BigOp, BinOp, Call, Chain, Ellipsis_, Inf, Interval, Neg, Node, Num, Q, QP,
                  Var, render)
from .parser import parse


# -- polynomials in the summation indices ---------------------------------------

class Poly:
    """Polynomial over Q in index positions; keys are sorted tuples of positions."""

    __slots__ = ("terms",)

    def __init__(self, terms: Mapping | None = None):
        self.terms = {k: Fraction(v) for k, v in (terms or {}).items() if v}

    @classmethod
    def const(cls, c) -> "Poly":
        return cls({(): c})

    @classmethod
    def var(cls, j: int) -> "Poly":
        return cls({(j,): 1})

    def __add__(self, o: "Poly") -> "Poly":
        if o is INF_POLY:
            return o
        t = dict(self.terms)
        for k, v in o.terms.items():
            t[k] = t.get(k, 0) + v
        return Poly(t)

    def __neg__(self) -> "Poly":
        return Poly({k: -v for k, v in self.terms.items()})

    def __sub__(self, o: "Poly") -> "Poly":
        if o is INF_POLY:
            raise EvaluationError("cannot subtract an infinite length")
        return self + (-o)

    def __mul__(self, o: "Poly") -> "Poly":
        if o is INF_POLY:
            return o * self
        t: dict = {}
        for k1, v1 in self.terms.items():
            for k2, v2 in o.terms.items():
                k = tuple(sorted(k1 + k2))
                t[k] = t.get(k, 0) + v1 * v2
        return Poly(t)

    def degree(self) -> int:
        return max((len(k) for k in self.terms), default=0)

    def constant(self) -> Fraction:
        return self.terms.get((), Fraction(0))

    def is_constant(self) -> bool:
        return self.degree() == 0

    def int_value(self, what: str) -> int:
        if not self.is_constant():
            raise EvaluationError(f"{what} must not depend on a summation index")
        c = self.constant()
        if c.denominator != 1:
            raise NonIntegralExponent(f"{what} evaluates to non-integer {c}")
        return c.numerator

    def affine(self, dim: int, what: str) -> AffineForm:
        if self.degree() > 1:
            raise EvaluationError(f"{what} must be affine in the summation indices")
        vals = [self.constant()] + [self.terms.get((j,), Fraction(0)) for j in range(dim)]
        if any(v.denominator != 1 for v in vals):
            raise NonIntegralExponent(f"{what} has non-integer coefficients")
        return AffineForm(vals[0].numerator, tuple(v.numerator for v in vals[1:]))

    def quadratic(self, dim: int) -> QuadraticForm:
        if self.degree() > 2:
            raise EvaluationError("q-exponent has degree above 2 in the summation indices")
        quad = [[Fraction(0)] * dim for _ in range(dim)]
        lin = [Fraction(0)] * dim
        for k, v in self.terms.items():
            if len(k) == 2:
                i, j = k
                if i == j:
                    quad[i][i] += v
                else:
                    quad[i][j] += v / 2
                    quad[j][i] += v / 2
            elif len(k) == 1:
                lin[k[0]] += v
        return QuadraticForm(tuple(tuple(r) for r in quad), tuple(lin), self.constant())

    def __eq__(self, o) -> bool:
        return isinstance(o, Poly) and self.terms == o.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))


class _InfPoly(Poly):
    """Infinite length; absorbs finite shifts."""

    def __init__(self):
        super().__init__()

    def __add__(self, o):
        return self

    def __sub__(self, o):
        if o is self:
            raise EvaluationError("inf - inf is undefined")
        return self

    def __neg__(self):
        raise EvaluationError("negative infinite length")

    def __mul__(self, o):
        if o is self or (o.is_constant() and o.constant() > 0):
            return self
        raise EvaluationError("invalid multiple of an infinite length")

    def degree(self):
        raise EvaluationError("infinite value used where a finite one is required")

    def __eq__(self, o):
        return o is self

    def __hash__(self):
        return 0


INF_POLY = _InfPoly()


def _radd(a: Poly, b: Poly) -> Poly:
    return b + a if a is not INF_POLY and b is INF_POLY else a + b


# -- product-form terms -----------------------------------------------------------

@dataclass
class Factor:
    coeff: Fraction
    exp: Poly
    base: int
    length: Poly     # INF_POLY for infinite


@dataclass
class Term:
    """``coeff * q^qexp * prod_j bases[j]^k_j * prod numer / prod denom``."""

    coeff: Fraction = Fraction(1)
    qexp: Poly = field(default_factory=Poly)
    bases: dict = field(default_factory=dict)
    numer: list = field(default_factory=list)
    denom: list = field(default_factory=list)

    def is_monomial(self) -> bool:
        return not self.numer and not self.denom

    def index_free(self) -> bool:
        if self.bases or not self.qexp.is_constant():
            return False
        for f in self.numer + self.denom:
            if not f.exp.is_constant() or (f.length is not INF_POLY and not f.length.is_constant()):
                return False
        return True

    def __mul__(self, o: "Term") -> "Term":
        bases = dict(self.bases)
        for j, b in o.bases.items():
            bases[j] = bases.get(j, 1) * b
        bases = {j: b for j, b in bases.items() if b != 1}
        return Term(self.coeff * o.coeff, self.qexp + o.qexp, bases,
                    self.numer + o.numer, self.denom + o.denom)

    def inverse(self) -> "Term":
        if self.coeff == 0:
            raise EvaluationError("division by zero")
        return Term(1 / self.coeff, -self.qexp, {j: 1 / b for j, b in self.bases.items()},
                    list(self.denom), list(self.numer))


def _const_term(c) -> list:
    return [Term(Fraction(c))]


def _factor_binomial(ts: list) -> list:
    """``a + b`` of two monomials with equal bases becomes ``a * (1 - (-b/a))``."""
    if len(ts) != 2 or not all(t.is_monomial() for t in ts) or ts[0].bases != ts[1].bases:
        return ts
    a, b = ts
    if a.coeff == 0 or b.coeff == 0:
        return [t for t in ts if t.coeff != 0]
    f = Factor(-b.coeff / a.coeff, b.qexp - a.qexp, 1, Poly.const(1))
    return [Term(a.coeff, a.qexp, dict(a.bases), [f], [])]


def _simplify(ts: list) -> list:
    ts = [t for t in ts if t.coeff != 0]
    return _factor_binomial(ts)


# -- series-level expressions -----------------------------------------------------

class Expr:
    """Something that can expand itself exactly through a requested order."""

    def series(self, order: int, cfg: EngineConfig, certs: list) -> QSeries:
        raise NotImplementedError


@dataclass
class ProductAtom(Expr):
    spec: ProductSpec

    def series(self, order, cfg, certs):
        return product_eval(self.spec, order)


@dataclass
class SumAtom(Expr):
    spec: SumSpec
    source: str = ""

    def series(self, order, cfg, certs):
        s, cert = eval_sum(self.spec, order, cfg)
        certs.append({"sum": self.source, **cert.to_dict(), "order": order})
        return s


@dataclass
class LinComb(Expr):
    parts: list    # [(Fraction, Expr)]

    def series(self, order, cfg, certs):
        out = QSeries.zero(order)
        for c, e in self.parts:
            s = e.series(order, cfg, certs)
            out = out + (s.scale(c) if c != 1 else s)
        return out.truncate(order)


def _valuation_bound(s: QSeries) -> int:
    return s.vmin if not s.is_zero() else s.order + 1


@dataclass
class Mul(Expr):
    factors: list

    def series(self, order, cfg, certs):
        n = len(self.factors)
        vals = [0] * n
        for _ in range(6):
            local: list = []
            parts = []
            for i, f in enumerate(self.factors):
                others = sum(vals[:i]) + sum(vals[i + 1:])
                parts.append(f.series(order - others, cfg, local))
            out = parts[0]
            for p in parts[1:]:
                out = out * p
            if out.order >= order:
                certs.extend(local)
                return out.truncate(order)
            vals = [_valuation_bound(p) for p in parts]
        raise EvaluationError("could not reach the requested order in a product")


@dataclass
class Inv(Expr):
    inner: Expr

    def series(self, order, cfg, certs):
        v = 0
        for _ in range(6):
            local: list = []
            s = self.inner.series(order + 2 * v, cfg, local)
            if s.is_zero():
                v = max(v, 0) + (order + 1)
                continue
            out = s.invert()
            if out.order >= order:
                certs.extend(local)
                return out.truncate(order)
            v = s.valuation()
        raise EvaluationError("could not reach the requested order in a reciprocal")


# -- compiler ---------------------------------------------------------------------

@dataclass
class Scope:
    params: Mapping          # name -> Monomial
    ints: Mapping            # name -> int
    indices: dict            # name -> Poly (in sum bodies)
    dim: int = 0
    q_scale: int = 1         # evaluate with q replaced by q^q_scale

    def child(self, **kw) -> "Scope":
        d = dict(params=self.params, ints=self.ints, indices=self.indices, dim=self.dim,
                 q_scale=self.q_scale)
        d.update(kw)
        return Scope(**d)


def _name(v: Var, sc: Scope) -> str:
    if v.index is None:
        return v.name
    return f"{v.name}[{scalar(v.index, sc).int_value('index subscript')}]"


def scalar(n: Node, sc: Scope) -> Poly:
    """Integer-valued quantity: exponents, lengths, bounds."""
    if isinstance(n, Num):
        return Poly.const(n.value)
    if isinstance(n, Inf):
        return INF_POLY
    if isinstance(n, Var):
        name = _name(n, sc)
        if name in sc.indices:
            return sc.indices[name]
        if name in sc.ints:
            return Poly.const(sc.ints[name])
        if name in sc.params:
            m = sc.params[name]
            if m.exp == 0 and Fraction(m.coeff).denominator == 1:
                return Poly.const(m.coeff)
            raise EvaluationError(f"parameter {name} used where an integer is required")
        raise UnboundVariable(f"UnboundVariable {name}", name=name)
    if isinstance(n, Neg):
        return -scalar(n.operand, sc)
    if isinstance(n, BinOp):
        a = scalar(n.left, sc)
        if n.op == "^":
            e = scalar(n.right, sc).int_value("exponent of an index expression")
            if e < 0:
                raise EvaluationError("negative power of an index expression")
            out = Poly.const(1)
            for _ in range(e):
                out = out * a
            return out
        b = scalar(n.right, sc)
        if n.op == "+":
            return _radd(a, b)
        if n.op == "-":
            return a - b
        if n.op == "*":
            return a * b if b is not INF_POLY else b * a
        if n.op == "/":
            if not b.is_constant() or b.constant() == 0:
                raise EvaluationError("division by a non-constant or zero in an index expression")
            return a * Poly.const(1 / b.constant())
    if isinstance(n, Call) and n.fn == "binom":
        if len(n.args) != 2:
            raise EvaluationError("binom takes two arguments")
        x = scalar(n.args[0], sc)
        m = scalar(n.args[1], sc).int_value("binom lower argument")
        out = Poly.const(1)
        for j in range(m):
            out = out * (x - Poly.const(j))
        return out * Poly.const(Fraction(1, math.factorial(m)))
    if isinstance(n, BigOp) and n.kind in ("add", "prod"):
        acc = Poly.const(0 if n.kind == "add" else 1)
        for sub in _unroll(n, sc):
            v = scalar(n.body, sub)
            acc = acc + v if n.kind == "add" else acc * v
        return acc
    raise EvaluationError(f"not an integer-valued expression: {render(n)}")


def _unroll(n: BigOp, sc: Scope):
    r = n.range
    if not isinstance(r, Interval) or r.var.index is not None:
        raise EvaluationError(f"{n.kind} needs a finite range 'j = a..b'")
    lo = scalar(r.lo, sc).int_value("lower bound")
    hi = scalar(r.hi, sc).int_value("upper bound")
    step = scalar(r.step, sc).int_value("step") if r.step is not None else 1
    for j in range(lo, hi + 1, step):
        yield sc.child(ints={**sc.ints, r.var.name: j})


def _monomial_term(m: Monomial) -> list:
    return [Term(Fraction(m.coeff), Poly.const(m.exp))]


def terms(n: Node, sc: Scope):
    """Value of ``n`` as a list of Terms, or an Expr when it is series-valued."""
    if isinstance(n, Num):
        return _const_term(n.value)
    if isinstance(n, Q):
        return [Term(Fraction(1), Poly.const(sc.q_scale))]
    if isinstance(n, Inf):
        raise EvaluationError("inf is only allowed as a length or range bound")
    if isinstance(n, Var):
        name = _name(n, sc)
        if name in sc.indices:
            raise EvaluationError(f"summation index {name} used as a coefficient")
        if name in sc.ints:
            return _const_term(sc.ints[name])
        if name in sc.params:
            return _monomial_term(sc.params[name])
        raise UnboundVariable(f"UnboundVariable {name}", name=name)
    if isinstance(n, Neg):
        v = terms(n.operand, sc)
        if isinstance(v, Expr):
            return LinComb([(Fraction(-1), v)])
        return [Term(-t.coeff, t.qexp, t.bases, t.numer, t.denom) for t in v]
    if isinstance(n, BinOp):
        if n.op == "^":
            return _power(n, sc)
        a = terms(n.left, sc)
        b = terms(n.right, sc)
        if n.op in "+-":
            if n.op == "-":
                b = LinComb([(Fraction(-1), b)]) if isinstance(b, Expr) else \
                    [Term(-t.coeff, t.qexp, t.bases, t.numer, t.denom) for t in b]
            if isinstance(a, Expr) or isinstance(b, Expr):
                return LinComb([(Fraction(1), to_expr(a, sc)), (Fraction(1), to_expr(b, sc))])
            return _simplify(a + b)
        if n.op == "*":
            return _mul(a, b, sc)
        if n.op == "/":
            return _div(a, b, sc)
    if isinstance(n, QP):
        return _qp(n, sc)
    if isinstance(n, BigOp):
        if n.kind == "sum":
            if sc.dim:
                raise EvaluationError("nested infinite sums are not supported")
            return compile_sum(n, sc)
        if n.kind == "add":
            acc: object = []
            for sub in _unroll(n, sc):
                v = terms(n.body, sub)
                if isinstance(acc, Expr) or isinstance(v, Expr):
                    acc = LinComb([(Fraction(1), to_expr(acc, sc)), (Fraction(1), to_expr(v, sc))])
                else:
                    acc = acc + v
            return acc if isinstance(acc, Expr) else _simplify(acc)
        acc = [Term()]
        for sub in _unroll(n, sc):
            acc = _mul(acc, terms(n.body, sub), sc)
        return acc
    if isinstance(n, Call):
        raise EvaluationError(f"{n.fn}(...) is integer-valued; use it inside an exponent")
    raise EvaluationError(f"cannot evaluate {render(n)}")


def _mul(a, b, sc):
    if isinstance(a, Expr) or isinstance(b, Expr):
        return Mul([to_expr(a, sc), to_expr(b, sc)])
    return _simplify([x * y for x in a for y in b])


def _div(a, b, sc):
    if not isinstance(b, Expr):
        b = _simplify(b)
        if len(b) == 1:
            inv = [b[0].inverse()]
            return _mul(a, inv, sc)
        if sc.dim:
            raise EvaluationError("division by a sum of several index-dependent terms")
    return Mul([to_expr(a, sc), Inv(to_expr(b, sc))])


def _power(n: BinOp, sc: Scope):
    base = terms(n.left, sc)
    e = scalar(n.right, sc)
    if isinstance(base, Expr):
        k = e.int_value("power of a series")
        out: Expr = Mul([base] * abs(k)) if k else to_expr(_const_term(1), sc)
        return Inv(out) if k < 0 else out
    base = _simplify(base)
    if len(base) == 1 and base[0].is_monomial() and not base[0].bases and base[0].qexp.is_constant():
        t = base[0]
        qexp = e * t.qexp
        coeff, bases = _coeff_power(t.coeff, e, sc.dim)
        return [Term(coeff, qexp, bases)]
    k = e.int_value("power of a non-monomial")
    if k < 0:
        if len(base) != 1:
            if sc.dim:
                raise EvaluationError("negative power of a sum of several index-dependent terms")
            return Inv(Mul([to_expr(base, sc)] * (-k)))
        base = [base[0].inverse()]
        k = -k
    out = [Term()]
    for _ in range(k):
        out = _mul(out, base, sc)
    return out


def _coeff_power(c: Fraction, e: Poly, dim: int):
    if c == 1:
        return Fraction(1), {}
    if c == 0:
        raise EvaluationError("power of zero")
    if e.degree() > 1:
        if c == -1 and e.degree() == 2:
            # (-1)^(k^2) = (-1)^k; only pure squares are reduced
            lin = Poly({k: v for k, v in e.terms.items() if len(k) < 2})
            sq = {k: v for k, v in e.terms.items() if len(k) == 2}
            if all(k[0] == k[1] and v.denominator == 1 for k, v in sq.items()):
                e = lin + Poly({(k[0],): v for k, v in sq.items()})
            else:
                raise EvaluationError("sign with a non-affine exponent")
        else:
            raise EvaluationError("numeric base raised to a non-affine power of the indices")
    aff = e.affine(dim, "exponent of a numeric base")
    coeff = c ** aff.constant
    bases = {j: c ** a for j, a in enumerate(aff.coeffs) if a}
    return Fraction(coeff), bases


def _qp(n: QP, sc: Scope):
    bt = terms(n.base, sc)
    if isinstance(bt, Expr) or len(bt) != 1 or not bt[0].is_monomial() or bt[0].bases \
            or bt[0].coeff != 1 or not bt[0].qexp.is_constant():
        raise EvaluationError(f"Pochhammer base must be q^b with b >= 1, got {render(n.base)}")
    b = bt[0].qexp.int_value("Pochhammer base exponent")
    if b < 1:
        raise EvaluationError("Pochhammer base must be q^b with b >= 1")
    length = scalar(n.length, sc)
    fs = []
    for a in n.args:
        at = terms(a, sc)
        if isinstance(at, Expr):
            raise EvaluationError("Pochhammer argument must be a monomial")
        at = _simplify(at)
        if not at:
            continue   # (0; q)_n = 1
        if len(at) != 1 or not at[0].is_monomial() or at[0].bases:
            raise EvaluationError(f"Pochhammer argument must be a monomial, got {render(a)}")
        fs.append(Factor(at[0].coeff, at[0].qexp, b, length))
    return [Term(Fraction(1), Poly(), {}, fs, [])]


def to_expr(v, sc: Scope) -> Expr:
    if isinstance(v, Expr):
        return v
    parts = []
    for t in v:
        if not t.index_free():
            raise EvaluationError("summation index escapes its sum")
        parts.append((Fraction(1), ProductAtom(_product_spec(t))))
    if len(parts) == 1:
        return parts[0][1]
    return LinComb(parts)


def _poch_spec(f: Factor) -> PochSpec:
    ln = INFINITE if f.length is INF_POLY else f.length.int_value("Pochhammer length")
    return PochSpec(Monomial(_canon(f.coeff), f.exp.int_value("Pochhammer argument exponent")), f.base, ln)


def _product_spec(t: Term) -> ProductSpec:
    return ProductSpec(tuple(_poch_spec(f) for f in t.numer), tuple(_poch_spec(f) for f in t.denom),
                       Monomial(_canon(t.coeff), t.qexp.int_value("q-exponent")))


# -- sums -------------------------------------------------------------------------

def _bound(n: Node, sc: Scope):
    """Integer bound, or None for +-inf."""
    if isinstance(n, Inf) or (isinstance(n, Neg) and isinstance(n.operand, Inf)):
        return None
    return scalar(n, sc).int_value("summation bound")


def _chain_vars(items: tuple, sc: Scope) -> tuple[list, int | None, int | None]:
    """Expand ``k[a] >= ... >= k[b]`` and split off constant end bounds."""
    out: list = []
    for pos, it in enumerate(items):
        if isinstance(it, Ellipsis_):
            prev, nxt = items[pos - 1], items[pos + 1] if pos + 1 < len(items) else None
            if not (isinstance(prev, Var) and isinstance(nxt, Var) and prev.index is not None
                    and nxt.index is not None and prev.name == nxt.name):
                raise EvaluationError("'...' must sit between two subscripts of one name")
            a = scalar(prev.index, sc).int_value("subscript")
            b = scalar(nxt.index, sc).int_value("subscript")
            d = 1 if b >= a else -1
            out.extend(("var", f"{prev.name}[{j}]") for j in range(a + d, b, d))
        elif isinstance(it, Var) and _name(it, sc) not in sc.ints and _name(it, sc) not in sc.params:
            out.append(("var", _name(it, sc)))
        else:
            out.append(("bound", it))
    upper = lower = None
    if out and out[0][0] == "bound":
        upper = _bound(out.pop(0)[1], sc)
    if out and out[-1][0] == "bound":
        lower = _bound(out.pop()[1], sc)
    if any(k == "bound" for k, _ in out):
        raise EvaluationError("bounds may only appear at the ends of a chain")
    names = []
    for _, nm in out:
        if nm in names:
            # a chain like k[1] >= ... >= k[1] collapses to one index
            continue
        names.append(nm)
    return names, lower, upper


def compile_sum(n: BigOp, sc: Scope) -> Expr:
    r = n.range
    indices: dict = {}
    if isinstance(r, Interval):
        name = _name(r.var, sc)
        lo, hi = _bound(r.lo, sc), _bound(r.hi, sc)
        step = scalar(r.step, sc).int_value("step") if r.step is not None else 1
        offset = scalar(r.offset, sc).int_value("offset") if r.offset is not None else None
        if step < 1:
            raise EvaluationError("step must be positive")
        m = Poly.var(0)
        if lo is not None:
            indices[name] = Poly.const(lo) + Poly.const(step) * m
            rng = RangeSpec(1, 0, None if hi is None else (hi - lo) // step)
        elif hi is not None:
            indices[name] = Poly.const(hi) - Poly.const(step) * m
            rng = RangeSpec(1, 0, None)
        else:
            indices[name] = Poly.const(offset or 0) + Poly.const(step) * m
            rng = RangeSpec(1, None, None)
        if offset is not None and lo is not None:
            raise EvaluationError("offset only applies to a two-sided infinite range")
        if rng.upper is not None and rng.upper < 0:
            return ProductAtom(ProductSpec(prefactor=Monomial(0, 0)))
        dim = 1
        names = [name]
    else:
        names, lower, upper = _chain_vars(r.items, sc)
        if not names:
            raise EvaluationError("a chain needs at least one summation index")
        dim = len(names)
        for j, nm in enumerate(names):
            indices[nm] = Poly.var(j)
        rng = RangeSpec(dim, lower, upper)
        if upper is not None and lower is not None and upper < lower:
            return ProductAtom(ProductSpec(prefactor=Monomial(0, 0)))
    for v, e in getattr(r, "pins", ()):
        indices[_name(v, sc)] = scalar(e, sc)
    body_sc = sc.child(indices={**sc.indices, **indices}, dim=dim)
    body = terms(n.body, body_sc)
    if isinstance(body, Expr):
        raise EvaluationError("sum body must be a product of Pochhammers and monomials")
    summands = tuple(_summand(t, dim) for t in _simplify(body))
    return SumAtom(SumSpec(rng, summands, tuple(names)), render(n))


def _pfactor(f: Factor, dim: int) -> PochFactor:
    aff = f.exp.affine(dim, "Pochhammer argument exponent")
    length = None if f.length is INF_POLY else f.length.affine(dim, "Pochhammer length")
    return PochFactor(Monomial(_canon(f.coeff), aff.constant), AffineForm(0, aff.coeffs), f.base, length)


def _summand(t: Term, dim: int) -> Summand:
    bases = tuple(_canon(t.bases.get(j, Fraction(1))) for j in range(dim))
    return Summand(_canon(t.coeff), t.qexp.quadratic(dim),
                   tuple(_pfactor(f, dim) for f in t.numer),
                   tuple(_pfactor(f, dim) for f in t.denom), bases)


# -- entry points -----------------------------------------------------------------

def compile_expr(src, params: Mapping | None = None, ints: Mapping | None = None,
                 q_scale: int = 1) -> Expr:
    if q_scale < 1:
        raise EvaluationError("q_scale must be a positive integer")
    tree = parse(src) if isinstance(src, str) else src
    sc = Scope(dict(params or {}), dict(ints or {}), {}, q_scale=q_scale)
    return to_expr(terms(tree, sc), sc)


def evaluate(src, order: int, params: Mapping | None = None, ints: Mapping | None = None,
             cfg: EngineConfig | None = None, certs: list | None = None, q_scale: int = 1) -> QSeries:
    e = compile_expr(src, params, ints, q_scale)
    return e.series(order, cfg or EngineConfig(), certs if certs is not None else [])


def monomial(src: str, params: Mapping | None = None, ints: Mapping | None = None) -> Monomial:
    """Evaluate a parameter-free expression such as ``-q^2/3`` to a Monomial."""
    sc = Scope(dict(params or {}), dict(ints or {}), {})
    v = terms(parse(src), sc)
    if isinstance(v, Expr):
        raise EvaluationError(f"{src!r} is not a monomial")
    v = _simplify(v)
    if not v:
        return Monomial(0, 0)
    if len(v) != 1 or not v[0].is_monomial():
        raise EvaluationError(f"{src!r} is not a monomial")
    return Monomial(_canon(v[0].coeff), v[0].qexp.int_value("exponent"))


def expand(src: str, bindings: Mapping | None = None, order: int = 20,
           ints: Mapping | None = None, cfg: EngineConfig | None = None) -> tuple[QSeries, str]:
    s = evaluate(src, order, bindings, ints, cfg)
    return s, render_series(s, big_o=False)
