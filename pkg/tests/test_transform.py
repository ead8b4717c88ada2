import pytest

from artifact.locus import ORIGIN, CurveIdeal, is_permitted
from artifact.ring import MultiSeries, VariableChange
from artifact.transform import (MONOIDAL, QUADRATIC, CenterNotPermitted, Direction, DirectionNotOnCone,
                                MultiplicityDropped, NotPassingThrough,
                                blowdown_construct, blowdown_residual, commuting_residual, enumerate_directions,
                                induced_change, monoidal_preimage, monoidal_transform, nu_map, quadratic_preimage,
                                quadratic_transform, strict_transform_curve)
from helpers import GF2, GF3, GF7, QQ, bivar, poly, surface


def C(g, h, field=QQ):
    return CurveIdeal(bivar(g, field), bivar(h, field))


def D3(field, *c):
    return Direction.make(field, c)


def test_quadratic_directions():
    dirs = [u.to_str() for u, _ in enumerate_directions(surface("Z^2 - X^2*Y", GF2), QUADRATIC)]
    assert sorted(dirs) == ["0:1:0", "1:0:0", "1:1:0"]
    dirs = enumerate_directions(surface("Z^2 - X*Y", GF3), QUADRATIC)
    assert len(dirs) == 4


def test_monoidal_directions():
    dirs = enumerate_directions(surface("Z^2 - X^5"), MONOIDAL)
    assert [u.to_str() for u, _ in dirs] == ["1:0:0"]


@pytest.mark.parametrize("field", [QQ, GF7])
def test_quadratic_examples(field):
    u = D3(field, 1, 0, 0)
    cases = [("Z^2 - X^2*Y", "Z^2 - X*Y"), ("Z^2 - X^3*Y^3", "Z^2 - X^4*Y^3"),
             ("Z^2 - (Y^2 - X^3)^3", "Z^2 - X^4*(Y^2 - X)^3")]
    for before, after in cases:
        S1, rec = quadratic_transform(surface(before, field), u)
        assert S1.F.terms == poly(after, field).terms
        assert S1.n == 2 and rec.kind == QUADRATIC


def test_direction_off_cone():
    with pytest.raises(DirectionNotOnCone):
        quadratic_transform(surface("Z^2 - X^2*Y"), D3(QQ, 0, 0, 1))


def test_monoidal_examples():
    zx = C("0", "X")
    u = Direction.make(QQ, (1, 0))
    S1, _ = monoidal_transform(surface("Z^2 - X^5"), zx, u)
    assert S1.F.terms == poly("Z^2 - X^3").terms
    S1, _ = monoidal_transform(surface("Z^2 - X^3*Y"), zx, u)
    assert S1.F.terms == poly("Z^2 - X*Y").terms
    out = monoidal_transform(surface("Z^2 - X^3"), zx, u)
    assert isinstance(out, MultiplicityDropped) and out.new_multiplicity == 1
    assert out.F1.terms == poly("Z^2 - X").terms


def test_monoidal_center_must_be_permitted():
    with pytest.raises(CenterNotPermitted):
        monoidal_transform(surface("Z^2 - X*Y"), C("0", "X"), Direction.make(QQ, (1, 0)))


def test_strict_transforms():
    _, rec = quadratic_transform(surface("Z^2 - X^3*Y^3"), D3(QQ, 1, 0, 0))
    assert strict_transform_curve(C("0", "Y"), rec).to_str() == "(Z, Y)"
    assert isinstance(strict_transform_curve(C("0", "X"), rec), NotPassingThrough)
    _, rec = quadratic_transform(surface("Z^2 - (Y^2 - X^3)^3"), D3(QQ, 1, 0, 0))
    Q1 = strict_transform_curve(C("0", "Y^2 - X^3"), rec)
    assert Q1.h.terms == bivar("X - Y^2").terms or Q1.h.terms == bivar("Y^2 - X").terms


def test_nu():
    assert nu_map(C("0", "X")).to_str() == "(Z, X)"
    assert nu_map(ORIGIN) is ORIGIN
    E = nu_map(C("X^2", "Y + X^3"))
    assert E.g.terms == bivar("X^2").terms and E.h.terms == bivar("Y + X^3").terms


def test_induced_change_examples():
    ident = VariableChange.identity(QQ, 3)
    u = D3(QQ, 1, 0, 0)
    up, psi = induced_change(ident, u)
    assert up.coords == u.coords and psi.agrees(ident)
    X, Y, Z = (MultiSeries.var(QQ, 3, i) for i in range(3))
    alpha = QQ.from_int(2)
    shear = VariableChange((X, Y + X.scale(alpha), Z))
    up, psi = induced_change(shear, D3(QQ, 1, alpha, 0))
    assert up.to_str() == "1:0:0" and psi.agrees(ident)
    phi = VariableChange((X + Y * Z, Y + X.scale(3) + X ** 2, Z - Y.scale(2) + X * Y))
    u = D3(QQ, 1, 1, 0)
    up, psi = induced_change(phi, u, 10)
    assert all(r.agrees(MultiSeries.zero(QQ, 3), 10) for r in commuting_residual(phi, u, up, psi, 10))


@pytest.mark.parametrize("lam", [2, 3])
def test_blowdown_monomial(lam):
    G = MultiSeries.var(QQ, 2, 1) ** lam
    H, u = blowdown_construct(G)
    assert H.terms == (G + MultiSeries.var(QQ, 2, 0) ** (lam + 1)).terms
    assert u.terms == {(0, 0): 1}


def test_blowdown_identity():
    G = bivar("Y^2 + Y^3")
    H, u = blowdown_construct(G, 12)
    assert blowdown_residual(G, H, u, 12).agrees(MultiSeries.zero(QQ, 2), 12)


def test_quadratic_preimage_type_ii():
    S = surface("Z^2 - (Y^2 - X^3)^3")
    _, rec = quadratic_transform(S, D3(QQ, 1, 0, 0))
    pre = quadratic_preimage(C("0", "X - Y^2"), rec)
    assert isinstance(pre, CurveIdeal)
    assert is_permitted(S, pre) is False and not pre.smooth
    assert pre.to_str() in ("(Z, X^3 - Y^2)", "(Z, Y^2 - X^3)")


def test_quadratic_preimage_transversal():
    S = surface("Z^2 - X^3*Y^3")
    _, rec = quadratic_transform(S, D3(QQ, 1, 0, 0))
    assert quadratic_preimage(C("0", "Y"), rec).to_str() == "(Z, Y)"
    assert isinstance(quadratic_preimage(C("0", "X"), rec), str)


def test_monoidal_preimage():
    S = surface("Z^2 - X^5")
    _, rec = monoidal_transform(S, C("0", "X"), Direction.make(QQ, (1, 0)))
    assert isinstance(monoidal_preimage(C("0", "X"), rec), str)
