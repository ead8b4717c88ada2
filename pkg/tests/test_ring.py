import pytest
from hypothesis import assume, given, settings, strategies as st

from artifact.ring import (MultiSeries, VariableChange, divide_exact, invert_change, squarefree_decompose,
                           substitute, weierstrass_divide, weierstrass_prepare)
from helpers import GF2, GF5, QQ, bivar, poly


def test_order_and_initial_form():
    assert poly("Z^2 - X^3").order() == 2
    assert poly("X*Y + X^3").order() == 2
    assert poly("Z^2 + X*Y*Z + X^5").initial_form().terms == poly("Z^2").terms
    assert poly("Z^2 - X*Y").initial_form().terms == poly("Z^2 - X*Y").terms
    assert poly("X^3*Y^3 + Z^2").initial_form().terms == poly("Z^2").terms
    assert MultiSeries.zero(QQ, 3).order() == float("inf")


def test_arithmetic():
    assert (poly("X + Y") * poly("X - Y")).terms == poly("X^2 - Y^2").terms
    assert (poly("Z + X", GF2) ** 2).terms == poly("Z^2 + X^2", GF2).terms
    f = poly("Z^2 - X^2*Y")
    assert (f + MultiSeries.zero(QQ, 3)).terms == f.terms


def test_quadratic_substitution():
    X1, Y1, Z1 = (MultiSeries.var(QQ, 3, i) for i in range(3))
    out = substitute(poly("Z^2 - X^2*Y"), [X1, X1 * Y1, X1 * Z1])
    assert out.terms == poly("X^2*Z^2 - X^3*Y").terms
    f = poly("Y^2 - X^3")
    assert substitute(f, [X1, Y1, Z1]).terms == f.terms


def test_prepare_examples():
    u, P = weierstrass_prepare(poly("Z^2 - X^3"), 10)
    assert u.agrees(MultiSeries.const(QQ, 3, 1), 10)
    assert P.agrees(poly("Z^2 - X^3"), 10)
    u, P = weierstrass_prepare(poly("(1 + X)*(Z^2 - X^3)"), 6)
    assert u.agrees(poly("1 + X"), 6)
    assert P.agrees(poly("Z^2 - X^3"), 6)
    f = poly("Z^2 + X*Z^2 - X^3")
    u, P = weierstrass_prepare(f, 4)
    assert u.agrees(poly("1 + X"), 4)
    assert (u * P - f).agrees(MultiSeries.zero(QQ, 3), 4)


def test_divide_examples():
    q, r = weierstrass_divide(poly("Z^3"), poly("Z - X^2"), 8)
    assert q.agrees(poly("Z^2 + X^2*Z + X^4"), 8)
    assert r.agrees(poly("X^6"), 8)
    P = poly("Z - X^2")
    q, r = weierstrass_divide(P, P, 8)
    assert q.agrees(MultiSeries.const(QQ, 3, 1), 8) and r.agrees(MultiSeries.zero(QQ, 3), 8)
    q, r = weierstrass_divide(poly("X*Y"), P, 8)
    assert q.agrees(MultiSeries.zero(QQ, 3), 8) and r.agrees(poly("X*Y"), 8)


def test_divide_exact():
    h = bivar("X + Y^2")
    assert divide_exact(h, h * h * bivar("1 + Y")).terms == (h * bivar("1 + Y")).terms
    assert divide_exact(bivar("X"), bivar("Y")) is None
    assert divide_exact(h, MultiSeries.zero(QQ, 2)).terms == {}


def _product(parts, field):
    out = MultiSeries.const(field, 2, 1)
    for f, m in parts:
        out = out * f ** m
    return out


def test_squarefree_examples():
    parts = squarefree_decompose(bivar("X^3*Y^3"))
    assert sorted((f.to_str(("X", "Y")), m) for f, m in parts) == [("X", 3), ("Y", 3)]
    parts = squarefree_decompose(bivar("(Y^2 - X^3)^3"))
    assert len(parts) == 1 and parts[0][1] == 3
    parts = squarefree_decompose(bivar("X^2 + Y^2", GF2))
    assert [(f.terms, m) for f, m in parts] == [(bivar("X + Y", GF2).terms, 2)]


@settings(max_examples=30, deadline=None)
@given(st.lists(st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(-2, 2)), min_size=1, max_size=4),
       st.integers(1, 3))
def test_squarefree_reconstitutes(terms, m):
    f = MultiSeries(GF5, 2, {})
    for i, j, c in terms:
        f = f + MultiSeries.monomial(GF5, (i, j), c)
    f = f + MultiSeries.monomial(GF5, (1, 0), 1)
    assume(any(sum(e) for e in f.terms))
    target = f ** m
    parts = squarefree_decompose(target)
    prod = _product(parts, GF5)
    ratio = divide_exact(prod, target)
    assert ratio is not None and ratio.total_degree() == 0


def test_invert_change():
    ident = VariableChange.identity(QQ, 3)
    assert invert_change(ident).agrees(ident)
    X, Y, Z = (MultiSeries.var(QQ, 3, i) for i in range(3))
    shear = VariableChange((X, Y + X.scale(3), Z))
    inv = invert_change(shear)
    assert inv.images[1].terms == (Y - X.scale(3)).terms
    wild = VariableChange((X + Y * Y, Y + X * Z, Z + X ** 3))
    back = invert_change(wild, 8)
    comp = [substitute(im, back.images) for im in wild.images]
    for got, want in zip(comp, (X, Y, Z)):
        assert got.agrees(want, 8)


def test_to_str_roundtrip():
    from artifact.cli import parse_poly
    f = poly("Z^2 - (1/2)*X*Y + 3/4 - X^7")
    assert parse_poly(f.to_str(), QQ).terms == f.terms


def test_non_regular_divisor_rejected():
    with pytest.raises(ValueError):
        weierstrass_divide(poly("Z"), poly("X*Y"), 4)
