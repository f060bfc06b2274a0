"""Monomials, orders, sparse polynomial arithmetic, and expression clearing."""

import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from cni_prover.algebra_core import (
    Add,
    AlgebraError,
    Block,
    Const,
    Div,
    GrevLex,
    Lex,
    Monomial,
    PointRef,
    Polynomial,
    Pow,
    Sub,
    VarKind,
    VarTable,
    ZeroDenominatorError,
    block_elimination_order,
    content_and_primitive,
    expr_evaluate,
    expr_normalize,
    expr_substitute,
    normal_form,
    s_polynomial,
)

from support import Qi, I, make_table, random_polynomial


@pytest.fixture
def xyz():
    table = make_table("x", "y", "z")
    return table, Polynomial.variable(table, 0), Polynomial.variable(table, 1), Polynomial.variable(table, 2)


# ---------------------------------------------------------------------------
# Variable tables.


def test_table_registration_and_lookup():
    t = VarTable()
    x = t.add("x", VarKind.POINT)
    r = t.add("r", VarKind.SLACK)
    assert t.index("x") == x and t.name(r) == "r"
    assert t.kind(r) is VarKind.SLACK
    assert "x" in t and "q" not in t
    assert len(t) == 2


def test_table_rejects_duplicates_and_second_rabinowitsch():
    t = VarTable()
    t.add("x", VarKind.POINT)
    with pytest.raises(AlgebraError):
        t.add("x", VarKind.SLACK)
    t.add("u", VarKind.RABINOWITSCH)
    assert t.rabinowitsch == t.index("u")
    with pytest.raises(AlgebraError):
        t.add("u2", VarKind.RABINOWITSCH)


# ---------------------------------------------------------------------------
# Monomials and orders.


def test_monomial_product_divide_lcm():
    a = Monomial({0: 2, 1: 1})
    b = Monomial({1: 1, 2: 3})
    assert a * b == Monomial({0: 2, 1: 2, 2: 3})
    assert (a * b).divide(b) == a
    assert a.divide(b) is None
    assert a.lcm(b) == Monomial({0: 2, 1: 1, 2: 3})
    assert b.divides(a * b)
    assert Monomial().is_one


def test_lex_and_grevlex_classic_comparisons():
    lex = Lex((0, 1, 2))
    grv = GrevLex((0, 1, 2))
    x2 = Monomial({0: 2})
    xy = Monomial({0: 1, 1: 1})
    yz2 = Monomial({1: 1, 2: 2})
    # lex: x^2 > x*y regardless of degree
    assert lex.greater(x2, yz2)
    # grevlex: degree first, then the smaller trailing exponent wins
    assert grv.greater(yz2, x2)
    x2y = Monomial({0: 2, 1: 1})
    xz2 = Monomial({0: 1, 2: 2})
    assert grv.greater(x2y, xz2)
    assert not grv.greater(xy, xy)


def test_block_order_separates_eliminated_variables():
    order = block_elimination_order([0], [1, 2])
    assert isinstance(order, Block)
    # anything containing the eliminated variable beats anything without it
    assert order.greater(Monomial({0: 1}), Monomial({1: 5, 2: 5}))
    assert order.greater(Monomial({0: 1, 1: 1}), Monomial({2: 9}))
    assert not order.greater(Monomial({1: 1}), Monomial({0: 1}))


# ---------------------------------------------------------------------------
# Polynomial arithmetic.


def test_polynomial_square_expands(xyz):
    table, x, y, _ = xyz
    p = (x + y) ** 2
    assert p == x * x + x * y.scale(2) + y * y
    assert p.total_degree == 2
    assert p.degree_in(0) == 2


def test_subtraction_cancels_to_zero(xyz):
    table, x, y, _ = xyz
    p = x * y + y.scale(3)
    assert (p - p).is_zero
    assert Polynomial.zero(table).is_zero


def test_zero_coefficients_never_stored(xyz):
    table, x, y, _ = xyz
    p = x + y - x
    assert set(p.terms) == {Monomial({1: 1})}


def test_constant_helpers(xyz):
    table, x, _, _ = xyz
    c = Polynomial.constant(table, Fraction(5, 3))
    assert c.is_constant and c.constant_value() == Fraction(5, 3)
    with pytest.raises(AlgebraError):
        x.constant_value()


def test_substitute_partial_and_full(xyz):
    table, x, y, z = xyz
    p = x * y + z
    q = p.substitute({0: Fraction(2)})
    assert q == y.scale(2) + z
    assert p.substitute({0: 1, 1: 1, 2: 0}).constant_value() == 1


def test_evaluate_matches_substitute(xyz):
    table, x, y, z = xyz
    p = x * y * y - z.scale(7) + Polynomial.constant(table, 3)
    val = p.evaluate({0: Fraction(2), 1: Fraction(-1), 2: Fraction(1, 7)})
    assert val == 2 * 1 - 1 + 3


def test_evaluate_supports_gaussian_rationals(xyz):
    table, x, y, _ = xyz
    p = x * x + y
    assert p.evaluate({0: I, 1: Qi(1), 2: Qi(0)}) == Qi(0)


def test_leading_data_and_monic(xyz):
    table, x, y, _ = xyz
    order = GrevLex((0, 1, 2))
    p = y * y + x.scale(2)
    assert p.leading_monomial(order) == Monomial({1: 2})
    assert p.monic(order).leading_coefficient(order) == 1


def test_content_and_primitive(xyz):
    table, x, y, _ = xyz
    order = GrevLex((0, 1, 2))
    p = x.scale(Fraction(4, 3)) + y.scale(Fraction(2, 3))
    content, prim = content_and_primitive(p, order)
    assert content * prim.terms[Monomial({0: 1})] == Fraction(4, 3)
    coeffs = sorted(prim.terms.values())
    assert coeffs == [1, 2]
    # negative leading coefficient flips the content sign
    content2, prim2 = content_and_primitive(-p, order)
    assert prim2 == prim and content2 == -content


_small = st.integers(min_value=-4, max_value=4)


@st.composite
def polys(draw, table):
    terms = {}
    for _ in range(draw(st.integers(0, 4))):
        exps = {v: draw(st.integers(0, 2)) for v in range(3)}
        c = draw(_small)
        if c:
            terms[Monomial({v: e for v, e in exps.items() if e})] = Fraction(c)
    return Polynomial(table, terms)


_TBL = make_table("x", "y", "z")


@given(polys(_TBL), polys(_TBL), polys(_TBL))
@settings(max_examples=60, deadline=None)
def test_ring_axioms(p, q, r):
    assert p + q == q + p
    assert p * q == q * p
    assert (p + q) + r == p + (q + r)
    assert p * (q + r) == p * q + p * r
    assert (p * q) * r == p * (q * r)


@given(polys(_TBL), polys(_TBL), st.lists(_small, min_size=3, max_size=3))
@settings(max_examples=60, deadline=None)
def test_evaluation_is_a_homomorphism(p, q, vals):
    a = {i: Fraction(v) for i, v in enumerate(vals)}
    assert (p + q).evaluate(a) == p.evaluate(a) + q.evaluate(a)
    assert (p * q).evaluate(a) == p.evaluate(a) * q.evaluate(a)


# ---------------------------------------------------------------------------
# Division and S-polynomials.


def test_normal_form_divides_out_leading_terms(xyz):
    table, x, y, _ = xyz
    order = Lex((0, 1, 2))
    f = x * x * y + x * y * y + y * y
    g1 = x * y - Polynomial.constant(table, 1)
    g2 = y * y - Polynomial.constant(table, 1)
    r = normal_form(f, [g1, g2], order)
    # classic textbook division result
    assert r == x + y + Polynomial.constant(table, 1)


def test_normal_form_zero_divisor_rejected(xyz):
    table, x, _, _ = xyz
    with pytest.raises(AlgebraError):
        normal_form(x, [Polynomial.zero(table)], Lex((0, 1, 2)))


def test_s_polynomial_cancels_leading_terms(xyz):
    table, x, y, _ = xyz
    order = GrevLex((0, 1, 2))
    f = x * x + y
    g = x * y + x
    s = s_polynomial(f, g, order)
    lm = f.leading_monomial(order).lcm(g.leading_monomial(order))
    assert all(m != lm for m in s.terms)


# ---------------------------------------------------------------------------
# Expression trees and clearing.


def test_div_by_zero_constant_rejected():
    with pytest.raises(ZeroDenominatorError):
        Div(PointRef(0), Const(Fraction(0)))


def test_pow_negative_exponent_rejected():
    with pytest.raises(AlgebraError):
        Pow(PointRef(0), -1)


def test_expr_evaluate_over_gaussian_rationals():
    # (A - B) / (A - C) at A=0, B=i, C=1 equals -i/(-1) = i
    e = Div(Sub(PointRef(0), PointRef(1)), Sub(PointRef(0), PointRef(2)))
    v = expr_evaluate(e, {0: Qi(0), 1: I, 2: Qi(1)})
    assert v == I
    assert not v.is_real


def test_expr_substitute_replaces_points():
    e = Sub(PointRef(0), PointRef(1))
    out = expr_substitute(e, {1: Add(PointRef(2), Const(Fraction(1)))})
    assert out == Sub(PointRef(0), Add(PointRef(2), Const(Fraction(1))))


def test_expr_normalize_clears_nested_quotients():
    table = make_table("A", "B", "C")
    order = GrevLex((0, 1, 2))
    A, B, C = PointRef(0), PointRef(1), PointRef(2)
    e = Div(Sub(A, B), Sub(B, C))
    num, den, factors = expr_normalize(e, table, order)
    a = Polynomial.variable(table, 0)
    b = Polynomial.variable(table, 1)
    c = Polynomial.variable(table, 2)
    assert num == a - b
    assert den == b - c
    assert factors == [b - c]


def test_expr_normalize_registers_each_factor_once():
    table = make_table("A", "B", "C")
    order = GrevLex((0, 1, 2))
    A, B, C = PointRef(0), PointRef(1), PointRef(2)
    inner = Div(Sub(A, B), Sub(B, C))
    e = Div(inner, Div(Sub(B, C), Sub(A, C)))
    num, den, factors = expr_normalize(e, table, order)
    keys = {frozenset(f.terms.items()) for f in factors}
    assert len(keys) == len(factors)
    b_minus_c = Polynomial.variable(table, 1) - Polynomial.variable(table, 2)
    assert any(f == b_minus_c for f in factors)


def test_expr_normalize_folds_constant_denominators():
    table = make_table("A", "B")
    order = GrevLex((0, 1))
    e = Div(Add(PointRef(0), PointRef(1)), Const(Fraction(2)))
    num, den, factors = expr_normalize(e, table, order)
    assert factors == []
    assert den == Polynomial.constant(table, 1)
    assert num == (Polynomial.variable(table, 0) + Polynomial.variable(table, 1)).scale(Fraction(1, 2))


@given(st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3), st.integers(-3, 3))
@settings(max_examples=60, deadline=None)
def test_normalize_agrees_with_direct_evaluation(ar, ai, br, bi):
    # num/den must equal the expression wherever the denominator is nonzero
    table = make_table("A", "B")
    order = GrevLex((0, 1))
    A, B = PointRef(0), PointRef(1)
    e = Div(Add(A, Const(Fraction(1))), Sub(A, B))
    num, den, _ = expr_normalize(e, table, order)
    a, b = Qi(ar, ai), Qi(br, bi)
    assign = {0: a, 1: b}
    d = den.evaluate(assign)
    if d == Qi(0):
        return
    assert num.evaluate(assign) / d == expr_evaluate(e, assign)


def test_random_polynomial_helper_stays_in_bounds():
    rng = random.Random(7)
    table = make_table("x", "y")
    for _ in range(50):
        p = random_polynomial(rng, table, [0, 1], max_degree=3, max_terms=4)
        assert p.total_degree <= 3
        assert len(p.terms) <= 4
