"""Surfaces given by a Weierstrass equation F = Z^n + sum a_k(X,Y) Z^k."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from typing import Sequence

from .coeff import FieldSpec
from .ring import (DEFAULT_DEGREE, MultiSeries, RingError, VariableChange, ZeroSeries, substitute,
                   weierstrass_prepare)

REGULAR_SEARCH_HEIGHT = 5


class NoRegularDirectionFound(RingError):
    pass


@dataclass(frozen=True)
class TangentConeClass:
    """``plane`` is True iff the initial form is L^n; ``change`` makes it Z^n."""

    plane: bool
    linear_form: MultiSeries | None = None
    change: VariableChange | None = None

    @property
    def variant(self) -> str:
        return "PlanePower" if self.plane else "NotPlane"


@dataclass(frozen=True)
class Surface:
    field: FieldSpec
    n: int
    a: tuple
    F: MultiSeries
    cone: TangentConeClass
    changes: tuple = ()
    history: tuple = dc_field(default=(), compare=False)

    @property
    def prec(self):
        return self.F.prec

    @property
    def is_exact(self):
        return self.F.prec is None

    def __str__(self):
        return self.F.to_str()


def _pure_power_coeff(form: MultiSeries, var: int, n: int):
    e = [0, 0, 0]
    e[var] = n
    return form.coeff(e)


def _regularizing_change(f: MultiSeries):
    """X -> X + c1 Z, Y -> Y + c2 Z making the initial form contain Z^n, or None if not needed."""
    field = f.field
    form = f.initial_form()
    n = f.order()
    if _pure_power_coeff(form, 2, n):
        return None
    if field.is_finite:
        candidates = [(c1, c2) for c1 in field.elements() for c2 in field.elements()]
    else:
        h = REGULAR_SEARCH_HEIGHT
        vals = sorted(range(-h, h + 1), key=lambda v: (abs(v), v < 0))
        candidates = [(c1, c2) for c1 in vals for c2 in vals]
    for c1, c2 in candidates:
        value = substitute(form, [MultiSeries.const(field, 3, c1), MultiSeries.const(field, 3, c2),
                                  MultiSeries.const(field, 3, 1)], allow_units=True)
        if value.constant_term():
            X, Y, Z = (MultiSeries.var(field, 3, i) for i in range(3))
            return VariableChange((X + Z.scale(c1), Y + Z.scale(c2), Z))
    bound = "all field elements" if field.is_finite else f"integer height {REGULAR_SEARCH_HEIGHT}"
    raise NoRegularDirectionFound(f"no Z-regular linear change found ({bound})")


def classify_cone(form: MultiSeries, n: int) -> TangentConeClass:
    """Decide whether a homogeneous form with Z^n coefficient 1 equals (Z + cX + dY)^n."""
    field = form.field
    p = field.characteristic
    q = 1
    if p:
        while (n // q) % p == 0:
            q *= p
    nprime = n // q
    coeffs = []
    for var in (0, 1):
        e = [0, 0, n - q]
        e[var] = q
        v = field.div(form.coeff(e), field.from_int(nprime))
        root = field.nth_root(v, q)
        if root is None:
            return TangentConeClass(False)
        coeffs.append(root)
    X, Y, Z = (MultiSeries.var(field, 3, i) for i in range(3))
    L = Z + X.scale(coeffs[0]) + Y.scale(coeffs[1])
    if L ** n != form:
        return TangentConeClass(False)
    change = VariableChange((X, Y, Z - X.scale(coeffs[0]) - Y.scale(coeffs[1])))
    return TangentConeClass(True, L, change)


def new_surface(f: MultiSeries, D: int = DEFAULT_DEGREE, history: Sequence = ()) -> Surface:
    """Normalize ``f`` to a Weierstrass equation with the tangent cone normalized."""
    if f.arity != 3:
        raise ValueError("a surface equation needs three variables")
    if not f.terms:
        raise ZeroSeries("the zero series does not define a surface")
    n = f.order()
    changes = []
    reg = _regularizing_change(f)
    if reg is not None:
        f = reg.apply(f)
        changes.append(reg)
    _, P = weierstrass_prepare(f, D)
    cone = classify_cone(P.initial_form(), n)
    if cone.plane and cone.linear_form != MultiSeries.var(f.field, 3, 2):
        P = cone.change.apply(P)
        changes.append(cone.change)
    parts = P.split_last()
    zero = MultiSeries.zero(f.field, 2, P.prec)
    a = tuple(parts.get(k, zero) for k in range(n))
    return Surface(f.field, n, a, P, cone, tuple(changes), tuple(history))


def surface_from_coeffs(field: FieldSpec, a: Sequence[MultiSeries], D: int = DEFAULT_DEGREE) -> Surface:
    """Build Z^n + sum a_k Z^k from its bivariate coefficients."""
    n = len(a)
    F = MultiSeries.monomial(field, (0, 0, n))
    for k, ak in enumerate(a):
        F = F + ak.lift(k)
    return new_surface(F, D)


def multiplicity(S: Surface) -> int:
    return S.n


def newton_set(S: Surface) -> set:
    return set(S.F.terms)


def cone_multiplicity_at(S: Surface, u) -> int:
    """Multiplicity of the projective tangent cone at the point ``u``."""
    coords = getattr(u, "coords", u)
    field = S.field
    coords = [field(c) for c in coords]
    form = S.F.initial_form()
    i = next(k for k, c in enumerate(coords) if c)
    inv = field.inv(coords[i])
    coords = [field.mul(c, inv) for c in coords]
    images = []
    for k in range(3):
        if k == i:
            images.append(MultiSeries.const(field, 3, 1))
        else:
            images.append(MultiSeries.var(field, 3, k) + coords[k])
    local = substitute(form, images, allow_units=True)
    return int(local.order()) if local.terms else S.n


def is_plane_cone(S: Surface) -> bool:
    return S.cone.plane
