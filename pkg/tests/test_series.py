from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

import oracle
from qbench.errors import BeyondOrder, NotInvertible
from qbench.series import Monomial, QSeries, exact, format_rational, render

ORDER = 12

coeffs = st.fractions(min_value=-5, max_value=5, max_denominator=6)


@st.composite
def series(draw, order=ORDER, lo=-3):
    vmin = draw(st.integers(lo, 4))
    cs = draw(st.lists(coeffs, min_size=order - vmin + 1, max_size=order - vmin + 1))
    return QSeries(vmin, order, cs)


@st.composite
def units(draw, order=ORDER):
    lead = draw(coeffs.filter(bool))
    rest = draw(st.lists(coeffs, min_size=order, max_size=order))
    return QSeries(0, order, [lead] + rest)


def test_canonical_coefficients():
    assert exact(Fraction(4, 2)) == 2 and type(exact(Fraction(4, 2))) is int
    assert exact("3/6") == Fraction(1, 2)
    with pytest.raises(TypeError):
        exact(True)
    with pytest.raises(TypeError):
        exact(0.5)


def test_leading_zeros_trimmed():
    s = QSeries(-2, 3, [0, 0, 1, 0, 2, 0])
    assert s.valuation == 0
    assert s.to_dict() == {0: 1, 2: 2}
    assert QSeries.zero(5).valuation is None


def test_coefficient_beyond_order():
    s = QSeries.one(4)
    assert s.coeff(-10) == 0
    with pytest.raises(BeyondOrder):
        s.coeff(5)
    with pytest.raises(BeyondOrder):
        s.truncate(6)


def test_zero_not_invertible():
    with pytest.raises(NotInvertible):
        QSeries.zero(5).invert()


def test_render():
    s = QSeries.from_dict({0: 1, 1: -1, 2: Fraction(-3, 2), 4: 2}, 5)
    assert render(s) == "1 - q - 3/2*q^2 + 2q^4 + O(q^6)"
    assert render(QSeries.zero(3)) == "O(q^4)"
    assert render(QSeries.from_dict({-2: 1}, 0), big_o=False) == "q^(-2)"
    assert format_rational(Fraction(-7, 3)) == "-7/3"


def test_monomial_arithmetic():
    a = Monomial(Fraction(2, 3), 4)
    b = Monomial(-3, -1)
    assert a * b == Monomial(-2, 3)
    assert a / b == Monomial(Fraction(-2, 9), 5)
    assert b ** -2 == Monomial(Fraction(1, 9), 2)


@given(series(), series())
def test_mul_matches_naive(a, b):
    got = a * b
    assert got.order == min(a.order + b.vmin, b.order + a.vmin)
    hi = got.order
    want = oracle.mul(oracle.as_dict(a, a.order), oracle.as_dict(b, b.order), hi)
    assert oracle.as_dict(got, hi) == oracle.window(want, -100, hi)


@given(series(), series(), series())
def test_ring_axioms(a, b, c):
    assert a + b == b + a
    assert (a + b) + c == a + (b + c)
    ab, ba = a * b, b * a
    assert ab == ba
    lhs = a * (b + c)
    rhs = a * b + a * c
    hi = min(lhs.order, rhs.order)
    assert lhs.truncate(hi) == rhs.truncate(hi)


@given(units())
def test_inverse(a):
    one = a * a.invert()
    assert one == QSeries.one(one.order)
    want = oracle.inverse_unit(oracle.as_dict(a, ORDER), ORDER)
    assert oracle.as_dict(a.invert(), ORDER) == want


@given(units(), st.integers(-3, 3))
def test_power_laws(a, n):
    assert a ** n * a ** (-n) == QSeries.one(ORDER)
    assert a ** 0 == QSeries.one(ORDER)


@given(series(), st.integers(-5, 5))
def test_shift_roundtrip(a, e):
    assert a.shift(e).shift(-e) == a


@settings(max_examples=30)
@given(series(lo=0))
def test_first_mismatch_detects_single_change(a):
    e = 7
    b = a + QSeries.from_monomial(Monomial(1, e), a.order)
    assert a.first_mismatch(b) == e
    assert a.first_mismatch(a) is None


def test_euler_product_via_inversion():
    # 1/(q;q)_inf counts partitions
    n = 30
    euler = QSeries.from_dict(oracle.euler_pentagonal(n), n)
    assert euler.invert().coefficient_list(0, n) == oracle.partition_numbers(n)
