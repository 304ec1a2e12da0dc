"""q-shifted factorials, products of them, and the Jacobi triple product.

Every finite or infinite Pochhammer symbol is reduced to a *run*: a product
``prod_{j=0}^{count-1} (1 - c q^(start + b j))^sign``. The run records
enough to give its exact valuation and leading coefficient in O(1), and
expansion only visits factors whose exponent lies inside the working window.
A factor with negative exponent is rewritten as
``-c q^m (1 - c^-1 q^-m)`` so that expansion always sees a unit.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

from .errors import DivergentProduct, NotInvertible, ZeroFactorInDenominator
from .series import (Exact, Monomial, QSeries, _canon, div_binomial_inplace, exact,
                     mul_binomial_inplace)

INFINITE = math.inf


def _recip(c: Exact) -> Exact:
    if c == 1 or c == -1:
        return c
    return _canon(Fraction(1) / Fraction(c))


@dataclass(frozen=True)
class Run:
    """``prod_{j=0}^{count-1} (1 - coeff*q^(start+step*j))^sign``; count may be INFINITE."""

    coeff: Exact
    start: int
    step: int
    count: float | int
    sign: int = 1

    def _neg_count(self) -> int:
        """Number of factors with negative exponent."""
        if self.start >= 0:
            return 0
        first_nonneg = (-self.start + self.step - 1) // self.step
        return int(min(self.count, first_nonneg))

    def has_unit_zero(self) -> bool:
        """True when one factor has exponent 0; its value is then the constant 1 - coeff."""
        if self.start > 0 or (-self.start) % self.step:
            return False
        return (-self.start) // self.step < self.count

    def vanishes(self) -> bool:
        return self.coeff == 1 and self.has_unit_zero()

    def profile(self) -> tuple[Exact, int]:
        """(leading coefficient, valuation) of the *unsigned* product; assumes not vanishing."""
        J = self._neg_count()
        val = J * self.start + self.step * J * (J - 1) // 2
        lead = (-self.coeff) ** J if J else 1
        if self.has_unit_zero():
            lead = lead * (1 - self.coeff)
        return lead, val

    def units(self, window: int) -> Iterable[tuple[Exact, int]]:
        """Unit factors ``(1 - c q^m)``, ``m > 0``, with ``m < window``."""
        if window <= 1:
            return
        b = self.step
        lo = max(0, -((window - 1 + self.start) // b))
        hi_excl = (window - 1 - self.start) // b + 1
        if self.count != INFINITE:
            hi_excl = min(hi_excl, int(self.count))
        inv = None
        for j in range(lo, hi_excl):
            m = self.start + b * j
            if m > 0:
                yield self.coeff, m
            elif m < 0 and -m < window:
                if inv is None:
                    inv = _recip(self.coeff)
                yield inv, -m


def poch_run(arg: Monomial, base: int, length, sign: int = 1) -> Run | None:
    """Run representing ``(arg; q^base)_length ** sign``; None for the empty product."""
    if base < 1:
        raise DivergentProduct("Pochhammer base must be a positive power of q", base=base)
    if length == 0:
        return None
    if arg.coeff == 0:
        return None
    if length == INFINITE or length > 0:
        return Run(arg.coeff, arg.exp, base, length, sign)
    n = -int(length)
    return Run(arg.coeff, arg.exp - base * n, base, n, -sign)


@dataclass
class FactoredTerm:
    """``coeff * q^exp * prod(runs)`` kept in factored form."""

    coeff: Exact = 1
    exp: int = 0
    runs: list = field(default_factory=list)

    def mul_poch(self, arg: Monomial, base: int, length, sign: int = 1) -> None:
        run = poch_run(arg, base, length, sign)
        if run is not None:
            self.runs.append(run)

    def status(self) -> str:
        """'ok', 'zero' (a numerator factor vanishes) or 'pole' (a denominator factor vanishes)."""
        pole = any(r.sign < 0 and r.vanishes() for r in self.runs)
        if pole:
            return "pole"
        if self.coeff == 0 or any(r.sign > 0 and r.vanishes() for r in self.runs):
            return "zero"
        return "ok"

    def profile(self) -> tuple[Exact, int]:
        """(leading coefficient, valuation); only meaningful when status() == 'ok'."""
        lead = self.coeff
        val = self.exp
        for r in self.runs:
            c, v = r.profile()
            if r.sign > 0:
                lead = lead * c
                val += v
            else:
                lead = Fraction(lead) / c
                val -= v
        return _canon(lead), val

    def expand(self, order: int) -> QSeries:
        st = self.status()
        if st == "zero":
            return QSeries.zero(order)
        if st == "pole":
            raise NotInvertible("a denominator factor vanishes identically")
        lead, val = self.profile()
        window = order - val + 1
        if window <= 0:
            return QSeries.zero(order)
        buf = [lead] + [0] * (window - 1)
        for r in self.runs:
            op = mul_binomial_inplace if r.sign > 0 else div_binomial_inplace
            for c, m in r.units(window):
                op(buf, c, m)
        return QSeries(val, order, buf)


# -- public data types ------------------------------------------------------

@dataclass(frozen=True)
class PochSpec:
    """``(arg; q^base)_length``; length is an int (any sign) or INFINITE."""

    arg: Monomial
    base: int = 1
    length: float | int = INFINITE

    def __post_init__(self):
        if self.base < 1:
            raise ValueError("base exponent must be >= 1")


@dataclass(frozen=True)
class ProductSpec:
    """``prefactor * prod(numerator) / prod(denominator)``."""

    numerator: tuple = ()
    denominator: tuple = ()
    prefactor: Monomial = Monomial(1, 0)

    def factored(self) -> FactoredTerm:
        t = FactoredTerm(self.prefactor.coeff, self.prefactor.exp)
        for p in self.numerator:
            t.mul_poch(p.arg, p.base, p.length, +1)
        for p in self.denominator:
            t.mul_poch(p.arg, p.base, p.length, -1)
        return t


def compact(args: Sequence[Monomial], base: int = 1, length=INFINITE) -> tuple:
    """``(a_1, ..., a_m; q^base)_length`` as a tuple of PochSpecs."""
    return tuple(PochSpec(a, base, length) for a in args)


def poch_eval(p: PochSpec, order: int) -> QSeries:
    run = poch_run(p.arg, p.base, p.length)
    if run is None:
        return QSeries.one(order)
    t = FactoredTerm(runs=[run])
    if t.status() == "pole":
        raise ZeroFactorInDenominator(
            f"({p.arg}; q^{p.base})_{p.length} has a vanishing factor in its reciprocal product",
            arg=str(p.arg), base=p.base, length=p.length)
    return t.expand(order)


def product_eval(p: ProductSpec, order: int) -> QSeries:
    for spec in p.numerator:
        run = poch_run(spec.arg, spec.base, spec.length)
        if run is not None and run.sign < 0 and run.vanishes():
            raise ZeroFactorInDenominator(f"({spec.arg}; q^{spec.base})_{spec.length} is a pole",
                                          arg=str(spec.arg), length=spec.length)
    t = p.factored()
    if t.status() == "pole":
        raise NotInvertible("a denominator factor of the product vanishes identically")
    return t.expand(order)


def jtp_product(z: Monomial, base: int, order: int) -> QSeries:
    """``(q^b, z, q^b/z; q^b)_inf``."""
    if z.coeff == 0:
        raise ValueError("z must be nonzero")
    qb = Monomial(1, base)
    spec = ProductSpec(numerator=compact([qb, z, qb / z], base))
    return product_eval(spec, order)


def jtp_theta(z: Monomial, base: int, order: int) -> QSeries:
    """``sum_k q^(b*k(k-1)/2) (-z)^k`` summed over every k whose term lies in the window."""
    if z.coeff == 0:
        raise ValueError("z must be nonzero")
    if base < 1:
        raise DivergentProduct("theta base must be a positive power of q", base=base)
    c = -z.coeff
    e = z.exp

    def val(k):
        return base * k * (k - 1) // 2 + e * k

    terms: dict[int, Exact] = {}
    for direction in (1, -1):
        k = 0 if direction == 1 else -1
        while True:
            v = val(k)
            # past the vertex of the parabola and above the window: stop
            if v > order and val(k + direction) >= v:
                break
            if v <= order:
                terms[v] = terms.get(v, 0) + (c ** k if k >= 0 else Fraction(1) / Fraction(c) ** (-k))
            k += direction
    return QSeries.from_dict({k: _canon(v) for k, v in terms.items()}, order)
