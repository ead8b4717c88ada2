from artifact.locus import (EXHAUSTIVE, ORIGIN, CurveIdeal, discover_locus, is_equimultiple, is_permitted,
                            normalize_smooth_curve, tangency_class)
from artifact.ring import MultiSeries
from artifact.surface import new_surface
from artifact.verify import random_surface
from helpers import GF2, GF5, GF7, QQ, bivar, surface


def C(g, h, field=QQ):
    return CurveIdeal(bivar(g, field), bivar(h, field))


def _ideals(L):
    return sorted(c.to_str() for c in L.curves)


def test_equimultiple_examples():
    S = surface("Z^2 - X^2*Y")
    assert is_equimultiple(S, C("0", "X")) is True
    assert is_equimultiple(S, C("0", "Y")) is False
    S = surface("Z^2 - (Y^2 - X^3)^3")
    assert is_equimultiple(S, C("0", "Y^2 - X^3")) is True


def test_permitted_examples():
    assert is_permitted(surface("Z^2 - X^2*Y"), C("0", "X")) is True
    assert not is_permitted(surface("Z^2 - (Y^2 - X^3)^3"), C("0", "Y^2 - X^3"))
    S = surface("Z^2")
    for h in ("X", "Y", "X + Y^2", "Y - X^3"):
        assert is_permitted(S, C("0", h)) is True


def test_normal_forms():
    P = normalize_smooth_curve(C("0", "Y + X^3 + Y^2*X"), 10)
    assert P.canonical_form == "transversal"
    h = P.h
    assert h.coeff((0, 1)) == 1 and all(e[1] == 0 for e in (h - bivar("Y")).terms)
    assert normalize_smooth_curve(C("0", "X + Y^2")).canonical_form == "tangent"
    assert normalize_smooth_curve(C("0", "X")).canonical_form == "divisor"


def test_tangency_classes():
    assert tangency_class(C("0", "X")) == "IsExceptionalDivisor"
    assert tangency_class(C("0", "X - Y^2")) == "Tangent"
    assert tangency_class(C("0", "Y")) == "Transversal"


def test_discover_examples():
    L = discover_locus(surface("Z^2 - X^3*Y^3", GF5), 2, 2)
    assert ORIGIN in L.elements and _ideals(L) == ["(Z, X)", "(Z, Y)"]
    assert L.completeness == EXHAUSTIVE
    L = discover_locus(surface("Z^2 - X^2*Y", GF5), 2, 2)
    assert _ideals(L) == ["(Z, X)"]
    L = discover_locus(surface("Z^2 - (Y^2 - X^3)^3", GF7), 3, 2)
    assert len(L.curves) == 1 and not L.curves[0].smooth
    assert L.permitted == []


def test_planted_curve_is_found():
    F = GF5
    X, Y, Z = (MultiSeries.var(F, 3, i) for i in range(3))
    h = X + Y * Y
    S = new_surface(Z ** 3 + (h ** 2).scale(2) * Z + (h ** 3) * (X + Y))
    L = discover_locus(S)
    assert any(c.h.terms == bivar("X + Y^2", F).terms for c in L.curves)


def test_generator_determinism_and_invariants():
    a = random_surface(GF5, 3, 6, 11)
    b = random_surface(GF5, 3, 6, 11)
    assert a.F.terms == b.F.terms
    for seed in range(1000):
        S = random_surface(GF2, 2, 6, seed)
        assert S.n == 2 and S.F.coeff((0, 0, 2)) == 1
        assert all(a.order() >= S.n - k for k, a in enumerate(S.a))
