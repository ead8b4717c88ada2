from artifact.cli import parse_poly
from artifact.coeff import FieldSpec
from artifact.surface import new_surface

QQ = FieldSpec(0)
GF2, GF3, GF5, GF7 = (FieldSpec(p) for p in (2, 3, 5, 7))


def poly(text, field=QQ, variables=("X", "Y", "Z")):
    return parse_poly(text, field, variables)


def bivar(text, field=QQ):
    return parse_poly(text, field, ("X", "Y"))


def surface(text, field=QQ):
    return new_surface(parse_poly(text, field))
