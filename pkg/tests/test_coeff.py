from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from artifact.coeff import DivisionByZero, FieldSpec
from helpers import GF7, QQ


def test_rational_add():
    assert QQ.add(Fraction(2, 3), Fraction(1, 6)) == Fraction(5, 6)


def test_gf7_inverse_and_product():
    assert GF7.inv(3) == 5
    assert GF7.mul(4, 5) == 6


def test_inverse_of_zero():
    with pytest.raises(DivisionByZero):
        GF7.inv(0)
    with pytest.raises(DivisionByZero):
        QQ.inv(Fraction(0))


def test_nth_roots():
    assert QQ.nth_root(Fraction(8, 27), 3) == Fraction(2, 3)
    assert QQ.nth_root(Fraction(2), 2) is None


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_frobenius_root_is_identity(p):
    F = FieldSpec(p)
    for a in F.elements():
        assert F.nth_root(a, p) == a
        assert F.pow(a, p) == a


def test_parse():
    assert FieldSpec.parse("QQ").p == 0
    assert FieldSpec.parse("GF:7").p == 7
    with pytest.raises(ValueError):
        FieldSpec.parse("GF:6")


def test_solve_and_inverse():
    rows = [[GF7.from_int(1), GF7.from_int(2)], [GF7.from_int(3), GF7.from_int(4)]]
    x = GF7.solve(rows, [GF7.from_int(5), GF7.from_int(6)])
    for row, rhs in zip(rows, (5, 6)):
        assert GF7.add(GF7.mul(row[0], x[0]), GF7.mul(row[1], x[1])) == rhs
    inv = GF7.mat_inverse(rows)
    assert GF7.add(GF7.mul(rows[0][0], inv[0][0]), GF7.mul(rows[0][1], inv[1][0])) == 1


@given(st.integers(-50, 50), st.integers(1, 50))
def test_rational_inverse_roundtrip(a, b):
    x = Fraction(a, b)
    if x:
        assert QQ.mul(x, QQ.inv(x)) == 1
