from artifact.surface import cone_multiplicity_at, multiplicity, newton_set
from artifact.transform import Direction
from helpers import GF2, QQ, poly, surface


def test_plane_power_cone():
    S = surface("Z^2 - X^2*Y")
    assert S.n == 2 and S.cone.variant == "PlanePower"
    assert S.a[1].terms == {} and S.a[0].terms == {(2, 1): -1}


def test_not_plane_cone():
    assert surface("Z^2 - X*Y").cone.variant == "NotPlane"


def test_completing_the_square():
    S = surface("Z^2 + 2*X*Z + X^2 + Y^3")
    assert S.cone.variant == "PlanePower"
    assert S.F.terms == poly("Z^2 + Y^3").terms


def test_multiplicity():
    assert multiplicity(surface("Z^2 - X^2*Y")) == 2
    assert multiplicity(surface("Z^3 + X^3*Y^3")) == 3
    assert multiplicity(surface("Z")) == 1


def test_newton_sets():
    assert newton_set(surface("Z^2 - X^2*Y")) == {(0, 0, 2), (2, 1, 0)}
    assert newton_set(surface("Z^2 - X^3*Y^3")) == {(0, 0, 2), (3, 3, 0)}
    assert newton_set(surface("Z^5")) == {(0, 0, 5)}


def test_cone_multiplicity_at():
    assert cone_multiplicity_at(surface("Z^2 - X^5"), Direction.make(QQ, (1, 0, 0))) == 2
    assert cone_multiplicity_at(surface("Z^2 - X*Y"), Direction.make(QQ, (1, 0, 0))) == 1
    assert cone_multiplicity_at(surface("Z*(Z - X) + Y^5"), Direction.make(QQ, (0, 1, 0))) == 2


def test_characteristic_two_surface():
    S = surface("Z^2 + X^3*Y^3", GF2)
    assert S.n == 2 and S.cone.plane
