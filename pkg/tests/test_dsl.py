from fractions import Fraction

import hypothesis.strategies as st
import pytest
from hypothesis import given, settings

import oracle
from qbench.dsl import evaluate, expand, monomial, parse, render, tokenize
from qbench.dsl.ast import QP, BigOp, Chain, Interval
from qbench.errors import EvaluationError, NonIntegralExponent, ParseError, UnboundVariable
from qbench.series import Monomial

RR_SUM = "sum(k=0..inf){ q^(k^2) / qp(q;q)_k }"


# -- generated source text -------------------------------------------------------

atoms = st.sampled_from(["q", "z", "a", "2", "17", "b[1]", "c[j+1]", "inf"])


def _compose(children):
    pair = st.tuples(children, children)
    return st.one_of(
        pair.map(lambda p: f"{p[0]} + {p[1]}"),
        pair.map(lambda p: f"{p[0]} - {p[1]}"),
        pair.map(lambda p: f"{p[0]}*{p[1]}"),
        pair.map(lambda p: f"{p[0]} / ({p[1]})"),
        children.map(lambda c: f"-{c}"),
        children.map(lambda c: f"({c})"),
        st.tuples(children, st.integers(-3, 3)).map(lambda p: f"({p[0]})^{p[1]}"),
        children.map(lambda c: f"q^({c})"),
        st.tuples(st.lists(children, min_size=1, max_size=3), st.integers(1, 4), children).map(
            lambda p: f"qp({', '.join(p[0])}; q^{p[1]})_{{{p[2]}}}"),
        children.map(lambda c: f"qp(a; q)_inf * {c}"),
        children.map(lambda c: f"sum(k = -inf..inf step 2){{ {c} }}"),
        children.map(lambda c: f"sum(k[1] >= ... >= k[r-1] >= 0, lattice; k[0] = inf){{ {c} }}"),
        children.map(lambda c: f"prod(j = 1..r){{ {c} }}"),
        children.map(lambda c: f"q^(binom(k, 2) + add(j = 1..3){{ {c} }})"),
    )


sources = st.recursive(atoms, _compose, max_leaves=8)


@settings(max_examples=300)
@given(sources)
def test_render_parse_fixpoint(src):
    tree = parse(src)
    text = render(tree)
    assert parse(text) == tree
    assert render(parse(text)) == text


# -- parsing ---------------------------------------------------------------------

def test_tokens():
    kinds = [(t.kind, t.text) for t in tokenize("qp(q;q^2)_inf")][:4]
    assert kinds == [("kw", "qp"), ("op", "("), ("kw", "q"), ("op", ";")]


def test_pochhammer_shapes():
    t = parse("qp(a, b; q^3)_{n+1}")
    assert isinstance(t, QP) and len(t.args) == 2
    assert render(t) == "qp(a, b; q^3)_{n + 1}"


def test_sum_shapes():
    t = parse(RR_SUM)
    assert isinstance(t, BigOp) and isinstance(t.range, Interval)
    c = parse("sum(k[1] >= k[2], lattice){ q^(k[1]^2) }").range
    assert isinstance(c, Chain) and c.lattice and len(c.items) == 2


@pytest.mark.parametrize("src, pos", [("qp(q;q)_", 8), ("q^", 2), ("sum(k = 0..){ q }", 11),
                                      ("qp(q, q)_3", 7), ("(q + 1", 6), ("q $ 2", 2)])
def test_parse_errors(src, pos):
    with pytest.raises(ParseError) as ei:
        parse(src)
    assert ei.value.position == pos
    assert ei.value.line == 1 and ei.value.column == pos + 1
    if src != "q $ 2":
        assert ei.value.expected


def test_parse_error_line_and_column():
    with pytest.raises(ParseError) as ei:
        parse("qp(q; q)_3 *\n  (q + )")
    assert (ei.value.line, ei.value.column) == (2, 8)


def test_single_item_chain_needs_lattice():
    with pytest.raises(ParseError):
        parse("sum(k[1]){ q }")


# -- evaluation ------------------------------------------------------------------

def test_finite_pochhammer():
    s = evaluate("qp(q;q)_3", 10)
    assert s.to_dict() == {0: 1, 1: -1, 2: -1, 4: 1, 5: 1, 6: -1}


def test_expand_rogers_ramanujan_order_6():
    _, text = expand(RR_SUM, order=6)
    assert text == "1 + q + q^2 + q^3 + 2q^4 + 2q^5 + 3q^6"


def test_unbound_variable():
    with pytest.raises(UnboundVariable) as ei:
        expand("qp(z; q)_inf", order=5)
    assert str(ei.value) == "UnboundVariable z"


def test_bindings_and_rationals():
    s, text = expand("1/(1 - z*q)", {"z": monomial("-1/2")}, order=3)
    assert text == "1 - 1/2*q + 1/4*q^2 - 1/8*q^3"
    assert s.coeff(3) == Fraction(-1, 8)


def test_monomial_literals():
    assert monomial("-q^2/3") == Monomial(Fraction(-1, 3), 2)
    assert monomial("2*q^-1") == Monomial(2, -1)
    with pytest.raises(EvaluationError):
        monomial("1 + q")


def test_bilateral_product_identity_difference_vanishes():
    # triple product with base q^5
    lhs = "sum(k = -inf..inf){ (-1)^k * q^(k*(5*k-3)/2) }"
    rhs = "qp(q, q^4, q^5; q^5)_inf"
    s = evaluate(f"{lhs} - {rhs}", 50)
    assert s.is_zero()


def test_non_integral_power_rejected():
    with pytest.raises(NonIntegralExponent):
        evaluate("q^(1/2)", 5)


def test_grid_integers_and_add():
    src = ("sum(k[1] >= ... >= k[r-1] >= 0; k[r] = 0){ q^(add(j = 1..r-1){k[j]^2})"
           " / prod(j = 1..r-1){qp(q; q)_{k[j]-k[j+1]}} }")
    n = 30
    s = evaluate(src, n, ints={"r": 3})
    assert s.coefficient_list(0, n) == oracle.restricted_partitions(n, lambda p: p % 7 not in (0, 3, 4))
