from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from singforms.polyring import (
    Poly,
    PolyParseError,
    det,
    parse,
    poly_divexact,
    to_string,
)

XY = ["x", "y"]


def P(s, vs=XY):
    return parse(s, vs)


# ---- strategies -----------------------------------------------------------

coeffs = st.fractions(
    min_value=Fraction(-5), max_value=Fraction(5), max_denominator=3
)


@st.composite
def polys(draw, nvars=2, max_deg=3, max_terms=4):
    terms = {}
    for _ in range(draw(st.integers(0, max_terms))):
        mono = tuple(
            draw(st.integers(0, max_deg)) for _ in range(nvars)
        )
        c = draw(coeffs)
        if c:
            terms[mono] = c
    return Poly(terms, nvars)


# ---- parsing --------------------------------------------------------------

def test_parse_examples():
    p = P("x^2 + y^2")
    assert p.terms == {(2, 0): 1, (0, 2): 1}
    q = P("3/2*x*y - y")
    assert q.terms == {(1, 1): Fraction(3, 2), (0, 1): -1}
    f = parse("x1^2+x2^2+x3^2", ["x1", "x2", "x3"])
    assert f.degree() == 2 and len(f.terms) == 3


def test_parse_errors_carry_position():
    with pytest.raises(PolyParseError) as exc:
        P("x + ")
    assert exc.value.pos == 4
    with pytest.raises(PolyParseError, match="unknown variable"):
        P("x + z")
    with pytest.raises(PolyParseError, match="implicit multiplication"):
        P("2x")
    with pytest.raises(PolyParseError):
        P("x ^ y")


def test_parse_parentheses_and_rationals():
    assert P("(x + y)^2") == P("x^2 + 2*x*y + y^2")
    assert P("1/2") == Poly.const(Fraction(1, 2), 2)
    assert P("-x") == -Poly.variable(0, 2)


@given(polys())
@settings(max_examples=60, deadline=None)
def test_print_parse_round_trip(p):
    assert parse(to_string(p, XY), XY) == p


# ---- ring axioms ----------------------------------------------------------

@given(polys(), polys(), polys())
@settings(max_examples=40, deadline=None)
def test_distributive(p, q, r):
    assert (p + q) * r == p * r + q * r


@given(polys(), polys())
@settings(max_examples=40, deadline=None)
def test_commutative(p, q):
    assert p * q == q * p
    assert p + q == q + p


# ---- calculus -------------------------------------------------------------

def test_diff_examples():
    assert P("x^2 + y^2").diff(0) == P("2*x")
    assert P("x^2 - y^3").diff(1) == P("-3*y^2")
    assert Poly.const(5, 2).diff(1).is_zero()
    with pytest.raises(IndexError):
        P("x").diff(2)


@given(polys(), polys())
@settings(max_examples=40, deadline=None)
def test_leibniz(p, q):
    for i in range(2):
        assert (p * q).diff(i) == p.diff(i) * q + p * q.diff(i)


# ---- evaluation -----------------------------------------------------------

def test_eval_examples():
    assert P("x^2 + y^2").eval_at([1, 2]) == 5
    assert P("x").eval_at([0.3 + 0.4j, 0.0]) == 0.3 + 0.4j
    a1, a2 = 1, 2
    p = 2 * (a2 - a1) * P("x*y")
    assert p.eval_at([1e-3, 0.0]) == 0


@given(polys(), polys())
@settings(max_examples=30, deadline=None)
def test_eval_is_ring_homomorphism(p, q):
    pt = [0.37 - 0.21j, -0.55 + 0.13j]
    lhs = (p * q).eval_at(pt)
    rhs = p.eval_at(pt) * q.eval_at(pt)
    assert abs(lhs - rhs) <= 1e-12 * max(1.0, abs(lhs), abs(rhs))
    lhs2 = (p + q).eval_at(pt)
    rhs2 = p.eval_at(pt) + q.eval_at(pt)
    assert abs(lhs2 - rhs2) <= 1e-12 * max(1.0, abs(lhs2), abs(rhs2))


# ---- determinants ---------------------------------------------------------

def test_det_examples():
    x, y = Poly.variable(0, 2), Poly.variable(1, 2)
    one, zero = Poly.one(2), Poly.zero(2)
    assert det([[2 * x, 2 * y], [x, 2 * y]]) == 2 * x * y
    # bottom-right block of the extended matrix for the quadric, n=2
    a1, a2 = 1, 2
    m = det([[2 * x, 2 * y], [a1 * x, a2 * y]])
    assert m == 2 * (a2 - a1) * x * y
    assert det([[2 * x, -3 * y * y], [one, zero]]) == 3 * y * y


def test_det_alternating_and_multilinear():
    x, y = Poly.variable(0, 2), Poly.variable(1, 2)
    rows = [[x, y], [y * y, x + y]]
    assert det(rows) == -det([rows[1], rows[0]])
    assert det([rows[0], rows[0]]).is_zero()


def test_det_bareiss_matches_cofactor():
    import random

    rnd = random.Random(5)
    nv = 2

    def rpoly():
        terms = {}
        for _ in range(2):
            terms[(rnd.randint(0, 1), rnd.randint(0, 1))] = Fraction(
                rnd.randint(-3, 3)
            )
        return Poly(terms, nv)

    mat = [[rpoly() for _ in range(5)] for _ in range(5)]
    from singforms.polyring import _det_bareiss, _det_cofactor

    assert _det_bareiss(mat) == _det_cofactor(mat)


def test_divexact():
    x, y = Poly.variable(0, 2), Poly.variable(1, 2)
    p = (x + y) * (x * x - y)
    assert poly_divexact(p, x + y) == x * x - y
    with pytest.raises(ArithmeticError):
        poly_divexact(x * x + y, x + y)


def test_det_requires_square():
    x = Poly.variable(0, 1)
    with pytest.raises(ValueError):
        det([[x, x]])
