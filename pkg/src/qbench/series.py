"""Truncated Laurent series in q with exact rational coefficients.

A :class:`QSeries` represents ``sum_{e=vmin}^{order} c_e q^e + O(q^(order+1))``.
Coefficients are Python ``int`` where integral and :class:`fractions.Fraction`
otherwise, so integer-coefficient work never touches ``Fraction``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence, Union

from .errors import BeyondOrder, NotInvertible

Exact = Union[int, Fraction]


def exact(x) -> Exact:
    """Coerce an int/Fraction/str into the canonical exact form."""
    if isinstance(x, bool):
        raise TypeError("bool is not a coefficient")
    if isinstance(x, int):
        return x
    if isinstance(x, Fraction):
        return x.numerator if x.denominator == 1 else x
    if isinstance(x, (Rational, str)):
        return exact(Fraction(x))
    raise TypeError(f"not an exact rational: {x!r}")


def _canon(x: Exact) -> Exact:
    if type(x) is Fraction and x.denominator == 1:
        return x.numerator
    return x


def format_rational(c: Exact) -> str:
    c = _canon(c)
    if isinstance(c, int):
        return str(c)
    return f"{c.numerator}/{c.denominator}"


@dataclass(frozen=True)
class Monomial:
    """``coeff * q^exp`` with exact ``coeff``."""

    coeff: Exact
    exp: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coeff", exact(self.coeff))
        if not isinstance(self.exp, int):
            raise TypeError("monomial exponent must be an integer")

    @classmethod
    def q(cls, e: int = 1) -> "Monomial":
        return cls(1, e)

    def is_zero(self) -> bool:
        return self.coeff == 0

    def __mul__(self, other):
        if isinstance(other, Monomial):
            return Monomial(self.coeff * other.coeff, self.exp + other.exp)
        return Monomial(self.coeff * exact(other), self.exp)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, Monomial):
            if other.coeff == 0:
                raise ZeroDivisionError("division by the zero monomial")
            return Monomial(Fraction(self.coeff) / other.coeff, self.exp - other.exp)
        return Monomial(Fraction(self.coeff) / exact(other), self.exp)

    def __neg__(self):
        return Monomial(-self.coeff, self.exp)

    def __pow__(self, n: int):
        if n < 0:
            if self.coeff == 0:
                raise ZeroDivisionError("negative power of the zero monomial")
            return Monomial(Fraction(1) / Fraction(self.coeff) ** (-n), self.exp * n)
        return Monomial(self.coeff ** n, self.exp * n)

    def __str__(self) -> str:
        c = format_rational(self.coeff)
        if self.exp == 0:
            return c
        qpart = "q" if self.exp == 1 else f"q^{self.exp}" if self.exp > 0 else f"q^({self.exp})"
        if self.coeff == 1:
            return qpart
        if self.coeff == -1:
            return "-" + qpart
        if isinstance(self.coeff, Fraction):
            c = f"({c})"
        return f"{c}*{qpart}"


class QSeries:
    """Immutable truncated Laurent series.

    ``coeffs[j]`` is the coefficient of ``q^(vmin + j)``; the window always
    ends at ``order``. Leading exact zeros are trimmed on construction, so a
    nonempty window starts at the true valuation.
    """

    __slots__ = ("vmin", "order", "coeffs")

    def __init__(self, vmin: int, order: int, coeffs: Iterable[Exact] = ()):
        cs = [_canon(c) for c in coeffs]
        if len(cs) != order - vmin + 1:
            if order < vmin - 1:
                raise ValueError("order must be at least vmin - 1")
            raise ValueError(f"expected {order - vmin + 1} coefficients, got {len(cs)}")
        start = 0
        while start < len(cs) and cs[start] == 0:
            start += 1
        self.vmin = vmin + start
        self.order = order
        self.coeffs = tuple(cs[start:])

    # -- construction -------------------------------------------------------
    @classmethod
    def zero(cls, order: int) -> "QSeries":
        return cls(order + 1, order, ())

    @classmethod
    def one(cls, order: int) -> "QSeries":
        return cls.from_monomial(Monomial(1, 0), order)

    @classmethod
    def from_monomial(cls, m: Monomial, order: int) -> "QSeries":
        if m.coeff == 0 or m.exp > order:
            return cls.zero(order)
        return cls(m.exp, order, [m.coeff] + [0] * (order - m.exp))

    @classmethod
    def from_dict(cls, terms: dict, order: int) -> "QSeries":
        """Series from ``{exponent: coeff}``; exponents above ``order`` are dropped."""
        keep = {e: c for e, c in terms.items() if e <= order and c != 0}
        if not keep:
            return cls.zero(order)
        lo = min(keep)
        return cls(lo, order, [keep.get(e, 0) for e in range(lo, order + 1)])

    @classmethod
    def from_list(cls, coeffs: Sequence[Exact], vmin: int = 0, order: int | None = None) -> "QSeries":
        if order is None:
            order = vmin + len(coeffs) - 1
        cs = list(coeffs[: order - vmin + 1])
        cs += [0] * (order - vmin + 1 - len(cs))
        return cls(vmin, order, cs)

    # -- queries ------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def valuation(self) -> int | None:
        """Exponent of the first nonzero coefficient, or None for zero-through-order."""
        return None if not self.coeffs else self.vmin

    def coeff(self, e: int) -> Exact:
        if e > self.order:
            raise BeyondOrder(f"coefficient of q^{e} requested but series is known only through q^{self.order}",
                              exponent=e, order=self.order)
        if e < self.vmin:
            return 0
        return self.coeffs[e - self.vmin]

    __getitem__ = coeff

    def to_dict(self) -> dict:
        return {self.vmin + j: c for j, c in enumerate(self.coeffs) if c != 0}

    def coefficient_list(self, lo: int, hi: int) -> list:
        return [self.coeff(e) for e in range(lo, hi + 1)]

    # -- arithmetic ---------------------------------------------------------
    def truncate(self, order: int) -> "QSeries":
        if order > self.order:
            raise BeyondOrder("cannot extend a series beyond its known order", order=self.order, requested=order)
        if order < self.vmin:
            return QSeries.zero(order)
        return QSeries(self.vmin, order, self.coeffs[: order - self.vmin + 1])

    def shift(self, e: int) -> "QSeries":
        """Multiply by ``q^e``."""
        return QSeries(self.vmin + e, self.order + e, self.coeffs)

    def scale(self, c) -> "QSeries":
        c = exact(c)
        if c == 0:
            return QSeries.zero(self.order)
        return QSeries(self.vmin, self.order, [c * x for x in self.coeffs])

    def __neg__(self) -> "QSeries":
        return QSeries(self.vmin, self.order, [-x for x in self.coeffs])

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.from_monomial(Monomial(exact(other), 0), self.order)
        order = min(self.order, other.order)
        lo = min(self.vmin, other.vmin)
        if lo > order:
            return QSeries.zero(order)
        out = [0] * (order - lo + 1)
        for src in (self, other):
            off = src.vmin - lo
            for j, c in enumerate(src.coeffs):
                if off + j >= len(out):
                    break
                out[off + j] += c
        return QSeries(lo, order, out)

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries.from_monomial(Monomial(exact(other), 0), self.order)
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def __mul__(self, other) -> "QSeries":
        if isinstance(other, Monomial):
            return self.scale(other.coeff).shift(other.exp)
        if not isinstance(other, QSeries):
            return self.scale(other)
        a, b = self, other
        order = min(a.order + b.vmin, b.order + a.vmin)
        lo = a.vmin + b.vmin
        if lo > order:
            return QSeries.zero(order)
        n = order - lo + 1
        out = [0] * n
        bc = b.coeffs
        for i, x in enumerate(a.coeffs):
            if i >= n:
                break
            if x == 0:
                continue
            lim = min(len(bc), n - i)
            for j in range(lim):
                y = bc[j]
                if y:
                    out[i + j] += x * y
        return QSeries(lo, order, out)

    __rmul__ = __mul__

    def invert(self) -> "QSeries":
        if not self.coeffs:
            raise NotInvertible("series is zero through its known order", order=self.order)
        v = self.vmin
        a = self.coeffs
        n = self.order - v + 1
        lead = a[0]
        inv_lead = _inverse(lead)
        out = [0] * n
        out[0] = inv_lead
        for e in range(1, n):
            s = 0
            for j in range(1, min(e, len(a) - 1) + 1):
                if a[j]:
                    s += a[j] * out[e - j]
            out[e] = _div(-s, lead, inv_lead)
        return QSeries(-v, self.order - 2 * v, out)

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return self * other.invert()
        if isinstance(other, Monomial):
            return self.scale(Fraction(1) / Fraction(other.coeff)).shift(-other.exp)
        return self.scale(Fraction(1) / Fraction(exact(other)))

    def __pow__(self, n: int) -> "QSeries":
        if n < 0:
            return self.invert() ** (-n)
        result = None
        base = self
        while n:
            if n & 1:
                result = base if result is None else result * base
            n >>= 1
            if n:
                base = base * base
        if result is None:
            return QSeries.one(self.order)
        return result

    # -- comparison ---------------------------------------------------------
    def first_mismatch(self, other: "QSeries", upto: int | None = None):
        """Smallest exponent on the common window where the coefficients differ."""
        hi = min(self.order, other.order)
        if upto is not None:
            hi = min(hi, upto)
        lo = min(self.vmin, other.vmin)
        for e in range(lo, hi + 1):
            if self.coeff(e) != other.coeff(e):
                return e
        return None

    def __eq__(self, other) -> bool:
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.order == other.order and self.first_mismatch(other) is None

    def __hash__(self):
        return hash((self.order, self.vmin, self.coeffs))

    def __repr__(self) -> str:
        return f"QSeries({self})"

    def __str__(self) -> str:
        return render(self)


def _inverse(c: Exact) -> Exact:
    if c == 1 or c == -1:
        return c
    return _canon(Fraction(1) / Fraction(c))


def _div(x: Exact, lead: Exact, inv_lead: Exact) -> Exact:
    if lead == 1:
        return x
    if lead == -1:
        return -x
    return _canon(x * inv_lead)


def render(s: QSeries, max_terms: int | None = None, big_o: bool = True) -> str:
    """Human-readable form, e.g. ``1 + q + 2q^4 + O(q^7)``."""
    parts = []
    for e, c in sorted(s.to_dict().items()):
        parts.append(_render_term(c, e))
    if max_terms is not None and len(parts) > max_terms:
        parts = parts[:max_terms] + ["..."]
    tail = f"O(q^{s.order + 1})"
    if not parts:
        return tail if big_o else "0"
    text = parts[0]
    for p in parts[1:]:
        text += " - " + p[1:] if p.startswith("-") else " + " + p
    return text + " + " + tail if big_o else text


def _render_term(c: Exact, e: int) -> str:
    if e == 0:
        return format_rational(c)
    qp = "q" if e == 1 else f"q^{e}" if e > 0 else f"q^({e})"
    if c == 1:
        return qp
    if c == -1:
        return "-" + qp
    cs = format_rational(c)
    if isinstance(c, Fraction):
        cs = cs if c > 0 else "-" + format_rational(-c)
        return f"{cs}*{qp}"
    return f"{cs}{qp}"


def series_from_monomial(m: Monomial, order: int) -> QSeries:
    return QSeries.from_monomial(m, order)


def series_add(a: QSeries, b: QSeries) -> QSeries:
    return a + b


def series_mul(a: QSeries, b: QSeries) -> QSeries:
    return a * b


def series_invert(a: QSeries) -> QSeries:
    return a.invert()


def series_coeff(a: QSeries, e: int) -> Exact:
    return a.coeff(e)


# -- in-place kernels used by the product code ------------------------------

def mul_binomial_inplace(buf: list, c: Exact, m: int) -> None:
    """buf <- buf * (1 - c q^m), truncated to len(buf); requires m > 0."""
    for e in range(len(buf) - 1, m - 1, -1):
        x = buf[e - m]
        if x:
            buf[e] -= c * x


def div_binomial_inplace(buf: list, c: Exact, m: int) -> None:
    """buf <- buf / (1 - c q^m), truncated to len(buf); requires m > 0."""
    for e in range(m, len(buf)):
        x = buf[e - m]
        if x:
            buf[e] += c * x
