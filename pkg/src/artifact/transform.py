"""Quadratic and monoidal transforms, strict transforms of curves, and blowdowns.

Every transform works in one affine chart: the privileged coordinate of the
direction becomes the exceptional variable X1 and the exceptional divisor
is the curve (Z1, X1).
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from fractions import Fraction
from math import gcd as igcd
from typing import Sequence

from sympy import Poly, Rational, Symbol, resultant

from .coeff import FieldSpec
from .locus import ORIGIN, CurveIdeal, Origin, is_permitted, normalize_smooth_curve
from .ring import (DEFAULT_DEGREE, MultiSeries, NotInvertible, RingError, VariableChange, _minprec,
                   normalize_monic, remainder, substitute, weierstrass_divide)
from .surface import Surface, new_surface

QUADRATIC = "quadratic"
MONOIDAL = "monoidal"
DIRECTION_HEIGHT = 20


class DirectionNotOnCone(ValueError):
    pass


class CenterNotPermitted(ValueError):
    pass


class InternalLemmaViolation(AssertionError):
    """A NotPlane surface kept its multiplicity under a monoidal transform."""


@dataclass(frozen=True)
class Direction:
    """A projective point with its first nonzero coordinate scaled to 1."""

    field: FieldSpec
    coords: tuple
    privileged: int

    @classmethod
    def make(cls, field: FieldSpec, coords: Sequence) -> "Direction":
        vals = [field(c) for c in coords]
        if len(vals) == 2:
            vals = [vals[0], field.zero, vals[1]]
        if len(vals) != 3 or not any(vals):
            raise ValueError("a direction needs three coordinates, not all zero")
        i = next(k for k, v in enumerate(vals) if v)
        inv = field.inv(vals[i])
        return cls(field, tuple(field.mul(v, inv) for v in vals), i)

    @classmethod
    def parse(cls, text: str, field: FieldSpec) -> "Direction":
        parts = text.split(":")
        if len(parts) not in (2, 3):
            raise ValueError(f"direction {text!r} must look like a:b:c or a:c")
        return cls.make(field, [Fraction(p.strip()) for p in parts])

    def to_str(self) -> str:
        return ":".join(str(c) for c in self.coords)

    def __str__(self):
        return f"({self.to_str()})"


@dataclass(frozen=True)
class NotPassingThrough:
    """The strict transform misses the chart's origin."""

    reason: str

    def to_json(self) -> dict:
        return {"kind": "not_passing_through", "reason": self.reason}


@dataclass(frozen=True)
class TransformRecord:
    kind: str
    center: object
    direction: Direction
    hom: VariableChange
    base_hom: VariableChange
    n: int
    normalization: tuple = ()
    exceptional: str = "X1"

    @property
    def swapped(self) -> bool:
        """True when Y is the privileged variable, so nu exchanges X and Y."""
        return self.kind == QUADRATIC and self.direction.privileged == 1

    def to_json(self) -> dict:
        names = ("X1", "Y1", "Z1")
        return {"kind": self.kind, "center": self.center.to_str() if self.center is not ORIGIN else "M",
                "direction": self.direction.to_str(),
                "hom": {v: im.to_str(names) for v, im in zip("XYZ", self.hom.images)},
                "exceptional": f"(Z1, {self.exceptional})"}


@dataclass(frozen=True)
class MultiplicityDropped:
    new_multiplicity: int
    F1: MultiSeries
    record: TransformRecord

    def to_json(self) -> dict:
        return {"kind": "multiplicity_dropped", "new_multiplicity": int(self.new_multiplicity),
                "F1": self.F1.to_str(("X1", "Y1", "Z1")), "record": self.record.to_json()}


# directions


def _eval_form(form: MultiSeries, pt) -> object:
    f = form.field
    acc = f.zero
    for e, c in form.terms.items():
        t = c
        for v, k in zip(pt, e):
            if k:
                t = f.mul(t, f.pow(v, k))
        acc = f.add(acc, t)
    return acc


def _rational_roots(form: MultiSeries, a, b) -> list:
    """Rational c with form(a, b, c) = 0."""
    coeffs = {}
    for e, c in form.terms.items():
        coeffs[e[2]] = coeffs.get(e[2], 0) + c * Fraction(a) ** e[0] * Fraction(b) ** e[1]
    if not any(coeffs.values()):
        return None
    t = Symbol("t")
    top = max(coeffs)
    poly = Poly([coeffs.get(k, 0) for k in range(top, -1, -1)], t, domain="QQ")
    return sorted(Fraction(int(r.p), int(r.q)) for r in poly.ground_roots())


def _projective_candidates(field: FieldSpec, kind: str):
    if field.is_finite:
        els = list(field.elements())
        if kind == MONOIDAL:
            return [(1, 0, c) for c in els]
        return ([(1, b, c) for b in els for c in els] + [(0, 1, c) for c in els] + [(0, 0, 1)])
    return None


def enumerate_directions(S: Surface, kind: str = QUADRATIC, height: int = DIRECTION_HEIGHT,
                         extra: Sequence[Direction] = ()) -> list[tuple[Direction, int]]:
    """Points u of the exceptional line (monoidal) or plane (quadratic) with F(u) = 0."""
    from .surface import cone_multiplicity_at
    field = S.field
    form = S.F.initial_form()
    found: list[Direction] = []
    cands = _projective_candidates(field, kind)
    if cands is not None:
        for pt in cands:
            if not _eval_form(form, pt):
                found.append(Direction.make(field, pt))
    elif kind == MONOIDAL:
        for c in _rational_roots(form, 1, 0) or []:
            found.append(Direction.make(field, (1, 0, c)))
    else:
        pairs = [(1, Fraction(b, d)) for d in range(1, height + 1) for b in range(-height, height + 1)
                 if igcd(b, d) == 1] + [(0, 1)]
        for a, b in pairs:
            roots = _rational_roots(form, a, b)
            if roots is None:
                # the whole line through (a:b:0) and (0:0:1) is in the cone, keep c = 0 only
                roots = [Fraction(0)]
            for c in roots:
                found.append(Direction.make(field, (a, b, c)))
    for u in extra:
        if u not in found and not _eval_form(form, u.coords):
            if kind == MONOIDAL and u.coords[1]:
                continue
            found.append(u)
    return [(u, cone_multiplicity_at(S, u)) for u in found]


# the transforms


def _vars3(field):
    return [MultiSeries.var(field, 3, i) for i in range(3)]


def chart_images(field: FieldSpec, u: Direction, kind: str = QUADRATIC) -> list[MultiSeries]:
    """Images of X, Y, Z under the homomorphism of the chart privileged by ``u``."""
    X1, Y1, Z1 = _vars3(field)
    c = u.coords
    if kind == MONOIDAL:
        return [X1, Y1, X1 * (Z1 + c[2])]
    P = u.privileged
    others = [k for k in range(3) if k != P]
    images = [None, None, None]
    images[P] = X1
    images[others[0]] = X1 * (Y1 + c[others[0]])
    images[others[1]] = X1 * (Z1 + c[others[1]])
    return images


def _finish(S: Surface, u: Direction, kind: str, center, images, D: int):
    n = S.n
    G = substitute(S.F, images)
    F1 = G.divide_by_monomial((n, 0, 0))
    if F1 is None:
        raise CenterNotPermitted(f"the transform of F is not divisible by X1^{n}")
    base = VariableChange(tuple(images))
    if F1.order() < n:
        rec = TransformRecord(kind, center, u, base, base, n)
        return MultiplicityDropped(int(F1.order()), F1, rec)
    S1 = new_surface(F1, D)
    hom = list(images)
    for ch in S1.changes:
        hom = [substitute(im, ch.images) for im in hom]
    rec = TransformRecord(kind, center, u, VariableChange(tuple(hom)), base, n, S1.changes)
    check = substitute(S.F, hom).divide_by_monomial((n, 0, 0))
    if check is None or not check.agrees(S1.F):
        raise AssertionError("defining identity of the transform failed")
    return replace(S1, history=S.history + (rec,)), rec


def quadratic_transform(S: Surface, u: Direction, D: int = DEFAULT_DEGREE):
    """Blow up the origin and look at the chart point ``u``."""
    if _eval_form(S.F.initial_form(), u.coords):
        raise DirectionNotOnCone(f"{u} is not on the tangent cone")
    return _finish(S, u, QUADRATIC, ORIGIN, chart_images(S.field, u), D)


def is_center_zx(P: CurveIdeal) -> bool:
    field = P.field
    X = MultiSeries.var(field, 2, 0)
    return not P.g.terms and P.h.prec is None and normalize_monic(P.h) == X


def monoidal_transform(S: Surface, center: CurveIdeal, u: Direction, D: int = DEFAULT_DEGREE):
    """Blow up the permitted curve (Z, X) and look at the chart point (1:0:gamma)."""
    if not is_center_zx(center):
        raise CenterNotPermitted(f"center {center} is not normalized to (Z, X)")
    if is_permitted(S, center) is not True:
        raise CenterNotPermitted(f"{center} is not permitted")
    if u.coords[1] or u.privileged != 0 or _eval_form(S.F.initial_form(), u.coords):
        raise DirectionNotOnCone(f"{u} is not a point (1:0:c) of the cone")
    out = _finish(S, u, MONOIDAL, center, chart_images(S.field, u, MONOIDAL), D)
    if not S.cone.plane and not isinstance(out, MultiplicityDropped):
        raise InternalLemmaViolation(f"{S} has a non-plane cone but kept multiplicity {S.n}")
    return out


# curves


def _lift_z(g: MultiSeries) -> MultiSeries:
    """Z + g as a series in X, Y, Z."""
    return MultiSeries.var(g.field, 3, 2) + g.lift(0)


def _drop_z(f: MultiSeries) -> MultiSeries | None:
    if any(e[2] for e in f.terms):
        return None
    out = MultiSeries(f.field, 2, None, f.prec)
    out.terms = {e[:2]: c for e, c in f.terms.items()}
    return out


def _finish_curve(g1: MultiSeries, h1: MultiSeries, D: int):
    if not h1.terms and h1.prec is None:
        return NotPassingThrough("the image of h vanishes")
    if h1.constant_term():
        return NotPassingThrough("the image of h is a unit")
    if g1.constant_term():
        return NotPassingThrough("the image of Z + g is a unit")
    if h1.order() == 1:
        return normalize_smooth_curve(CurveIdeal(g1, h1), D)
    if h1.prec is None and g1.prec is None:
        h1 = normalize_monic(h1)
        g1 = remainder(g1, h1)
    return CurveIdeal(g1, h1, None, None, ("strict transform of a singular curve",))


def _monoidal_representative(Q: CurveIdeal, D: int):
    """g' congruent to g modulo h with X dividing g', or a NotPassingThrough."""
    field = Q.field
    g, h = Q.g, Q.h
    g0 = {e: c for e, c in g.terms.items() if e[0] == 0}
    h0 = {e: c for e, c in h.terms.items() if e[0] == 0}
    if not g0:
        return g
    if not h0:
        return NotPassingThrough("the curve lies in the plane X = 0")
    m = min(e[1] for e in h0)
    if min(e[1] for e in g0) < m:
        return NotPassingThrough("the curve meets the exceptional fiber away from this chart")
    prec = _minprec(_minprec(g.prec, h.prec), D)
    gs = MultiSeries(field, 2, {(0, e[1] - m): c for e, c in g0.items()}, None if prec is None else prec - m)
    hs = MultiSeries(field, 2, {(0, e[1] - m): c for e, c in h0.items()}, None if prec is None else prec - m)
    if prec is None and len(h0) == 1:
        s = gs.scale(field.inv(hs.constant_term()))
    else:
        s = (gs * hs.inverse(D)).with_prec(D)
    return g - s * h


def strict_transform_curve(Q, rec: TransformRecord, D: int = DEFAULT_DEGREE):
    """Strict transform of a curve under ``rec``, or NotPassingThrough."""
    if isinstance(Q, Origin):
        raise ValueError("the origin has no strict transform as a curve")
    field = Q.field
    g = Q.g
    if rec.kind == MONOIDAL:
        if is_center_zx(Q):
            return NotPassingThrough("the curve is the center")
        g = _monoidal_representative(Q, D)
        if isinstance(g, NotPassingThrough):
            return g
    hom = rec.hom.images
    zimg = substitute(_lift_z(g), hom).divide_by_monomial((1, 0, 0))
    himg = substitute(Q.h.lift(0), hom)
    e = int(Q.h.order()) if rec.kind == QUADRATIC else 0
    himg = himg.divide_by_monomial((e, 0, 0))
    if zimg is None or himg is None:
        raise AssertionError("strict transform division failed")
    Z1 = MultiSeries.var(field, 3, 2)
    g1 = _drop_z(zimg - Z1)
    h1 = _drop_z(himg)
    if g1 is None or h1 is None:
        raise AssertionError("unexpected Z1 dependence in a strict transform")
    return _finish_curve(g1, h1, D)


def nu_map(E, swap: bool = False):
    """Rename X, Y, Z to X1, Y1, Z1; with ``swap`` the privileged Y becomes X1."""
    if isinstance(E, (Origin, NotPassingThrough)) or not swap:
        return E
    g, h = E.g.permute((1, 0)), E.h.permute((1, 0))
    if h.order() == 1:
        return normalize_smooth_curve(CurveIdeal(g, h))
    return CurveIdeal(g, h, None, E.irreducible, E.notes)


# induced change of variables


def induced_change(phi: VariableChange, u: Direction, D: int = DEFAULT_DEGREE):
    """(u', psi) with psi(pi_u(v)) = pi_u'(phi(v)) for v in X, Y, Z.

    The three images of psi are forced by the chart formulas, so psi is
    unique; it is exact when phi is linear.
    """
    field = phi.field
    A = phi.linear_part()
    Ainv = field.mat_inverse(A)
    if Ainv is None:
        raise NotInvertible("phi has a singular linear part")
    up = Direction.make(field, [sum((field.mul(Ainv[i][j], u.coords[j]) for j in range(3)), field.zero)
                                for i in range(3)])
    targets = [substitute(im, chart_images(field, up)) for im in phi.images]
    P = u.privileged
    others = [k for k in range(3) if k != P]
    w = targets[P].divide_by_monomial((1, 0, 0))
    if w is None or not w.constant_term():
        raise AssertionError("the privileged image is not X1 times a unit")
    if len(w.terms) == 1 and w.prec is None:
        winv = MultiSeries.const(field, 3, field.inv(w.constant_term()))
    else:
        winv = w.inverse(D)
    psi = [targets[P]]
    for k in others:
        t = targets[k].divide_by_monomial((1, 0, 0))
        im = t * winv - u.coords[k]
        if im.prec is not None:
            im = im.with_prec(D)
        psi.append(im)
    if any(im.constant_term() for im in psi):
        raise AssertionError("induced change does not fix the origin")
    return up, VariableChange(tuple(psi))


def commuting_residual(phi: VariableChange, u: Direction, up: Direction, psi: VariableChange,
                       degree: int) -> list[MultiSeries]:
    """psi(pi_u(v)) - pi_u'(phi(v)) for each v, truncated at ``degree``."""
    field = phi.field
    left = [substitute(im, psi.images) for im in chart_images(field, u)]
    right = [substitute(im, chart_images(field, up)) for im in phi.images]
    return [(a - b).with_prec(degree) for a, b in zip(left, right)]


# blowdown


def _wmul(a: dict, b: dict, lam: int, wmax: int, field) -> dict:
    out = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            i, j = i1 + i2, j1 + j2
            if lam * i + j > wmax:
                continue
            out[(i, j)] = field.add(out.get((i, j), field.zero), field.mul(c1, c2))
    return {e: c for e, c in out.items() if c}


def _wadd(a: dict, b: dict, field) -> dict:
    out = dict(a)
    for e, c in b.items():
        v = field.add(out.get(e, field.zero), c)
        if v:
            out[e] = v
        else:
            out.pop(e, None)
    return out


def _univariate(G: MultiSeries) -> dict:
    if G.arity == 1:
        return {e[0]: c for e, c in G.terms.items()}
    if any(e[0] for e in G.terms):
        raise ValueError("G must be a series in Y alone")
    return {e[1]: c for e, c in G.terms.items()}


@dataclass(frozen=True)
class Blowdown:
    """H(X1, X1 Y1) / X1^lam = u (X1 + G(Y1)), with W = H(X1, X1 Y1) / (G_lam X1^lam)."""

    lam: int
    H: MultiSeries
    u: MultiSeries
    W: MultiSeries

    @property
    def exact(self) -> bool:
        return self.H.prec is None


def blowdown_data(G: MultiSeries, D: int = DEFAULT_DEGREE) -> Blowdown:
    field = G.field
    g = _univariate(G)
    if not g:
        raise ValueError("G must be nonzero")
    lam = min(g)
    if lam < 2:
        raise ValueError(f"ord(G) must be at least 2, got {lam}")
    glam = g[lam]
    if len(g) == 1 and G.prec is None:
        H = MultiSeries(field, 2, {(0, lam): glam, (lam + 1, 0): 1})
        W = MultiSeries(field, 2, {(0, lam): 1, (1, 0): field.inv(glam)})
        return Blowdown(lam, H, MultiSeries.const(field, 2, 1), W)
    # Weierstrass-prepare X + Y^lam e(Y) in Y, weighting X as lam and Y as 1
    wmax = lam * (D + lam + 1)
    e_ser = MultiSeries(field, 2, {(0, k - lam): c for k, c in g.items() if k - lam <= wmax})
    einv_ms = e_ser.inverse(wmax)
    einv = {e: c for e, c in einv_ms.terms.items()}
    cur = {(0, lam): field.one}
    Q, R = {}, {}
    while cur:
        hi = {(i, j - lam): c for (i, j), c in cur.items() if j >= lam}
        lo = {e: c for e, c in cur.items() if e[1] < lam}
        R = _wadd(R, lo, field)
        qe = _wmul(hi, einv, lam, wmax, field)
        Q = _wadd(Q, qe, field)
        cur = {(i + 1, j): field.neg(c) for (i, j), c in qe.items() if lam * (i + 1) + j <= wmax}
    Wt = {(0, lam): field.one}
    Wt = _wadd(Wt, {e: field.neg(c) for e, c in R.items()}, field)
    Ht = {(i + lam - j, j): field.mul(glam, c) for (i, j), c in Wt.items()}
    H = MultiSeries(field, 2, Ht, D + lam)
    W = MultiSeries(field, 2, Wt, D)
    u = MultiSeries(field, 2, {e: field.mul(glam, c) for e, c in Q.items()}, D)
    return Blowdown(lam, H, u, W)


def blowdown_construct(G: MultiSeries, D: int = DEFAULT_DEGREE) -> tuple[MultiSeries, MultiSeries]:
    """(H, u) with ord H = ord G = lam, H regular in Y of order lam, and

    H(X1, X1 Y1) / X1^lam = u(X1, Y1) (X1 + G(Y1)).
    """
    b = blowdown_data(G, D)
    return b.H, b.u


def blowdown_residual(G: MultiSeries, H: MultiSeries, u: MultiSeries, degree: int) -> MultiSeries:
    field = G.field
    X, Y = (MultiSeries.var(field, 2, i) for i in range(2))
    lam = int(H.order())
    lhs = substitute(H, [X, X * Y]).divide_by_monomial((lam, 0))
    G2 = G if G.arity == 2 else MultiSeries(field, 2, {(0, e[0]): c for e, c in G.terms.items()}, G.prec)
    return (lhs - u * (X + G2)).with_prec(degree)


# preimages under a transform


def _to_base_chart(C: CurveIdeal, rec: TransformRecord, D: int) -> CurveIdeal:
    """Undo the cone normalization applied after the transform."""
    g = C.g
    field = C.field
    Z1 = MultiSeries.var(field, 3, 2)
    zpart = _lift_z(g)
    for ch in reversed(rec.normalization):
        # normalizations are shears Z1 -> Z1 + l(X1, Y1); invert the linear part
        shift = ch.images[2] - Z1
        if any(e[2] for e in shift.terms) or ch.images[0] != MultiSeries.var(field, 3, 0) \
                or ch.images[1] != MultiSeries.var(field, 3, 1):
            raise AssertionError("unexpected normalization change")
        inv = [MultiSeries.var(field, 3, 0), MultiSeries.var(field, 3, 1), Z1 - shift]
        zpart = substitute(zpart, inv)
    g1 = _drop_z(zpart - Z1)
    return CurveIdeal(g1, C.h, None, C.irreducible, C.notes)


def _tpoly(f: MultiSeries, var: int) -> dict:
    return {e[var]: c for e, c in f.terms.items()}


def _tmul(a: dict, b: dict, field) -> dict:
    out = {}
    for i, x in a.items():
        for j, y in b.items():
            out[i + j] = field.add(out.get(i + j, field.zero), field.mul(x, y))
    return {k: v for k, v in out.items() if v}


def _implicit(pt: dict, ot: dict, field: FieldSpec) -> MultiSeries:
    """The polynomial h(x, y) vanishing on (x, y) = (pt(t), ot(t)), via a resultant."""
    t, x, y = Symbol("t"), Symbol("x"), Symbol("y")
    lift = (lambda c: int(c)) if field.is_finite else (lambda c: Rational(c.numerator, c.denominator))
    fp = x - sum(lift(c) * t ** k for k, c in pt.items())
    fo = y - sum(lift(c) * t ** k for k, c in ot.items())
    res = Poly(resultant(fp, fo, t), x, y)
    terms = {}
    for (i, j), c in res.terms():
        c = Rational(c)
        terms[(i, j)] = field(Fraction(int(c.p), int(c.q)))
    return MultiSeries(field, 2, terms)


def _parametric_preimage(a: MultiSeries, b: MultiSeries, gamma, pv: MultiSeries, ov: MultiSeries):
    """Exact preimage of the tangent curve (Z1 + a(Y1), X1 + b(Y1)), or None.

    On the curve Y1 = t, X1 = -b(t), so p = -b(t), o' = -t b(t) and
    Z = -b(t) (gamma - a(t)); h is the implicit equation of (p, o') and g
    solves g(p(t), o'(t)) = b(t) (gamma - a(t)) by linear algebra.
    """
    field = b.field
    bt = _tpoly(b, 1)
    pt = {k: field.neg(c) for k, c in bt.items()}
    ot = {k + 1: c for k, c in pt.items()}
    h = _implicit(pt, ot, field)
    if not h.terms or h.order() != min(bt):
        return None
    at = _tpoly(a, 1)
    ga = {k: field.neg(c) for k, c in at.items()}
    ga[0] = field.add(ga.get(0, field.zero), gamma)
    target = _tmul(bt, {k: c for k, c in ga.items() if c}, field)
    top = max(target, default=0)
    monos, cols = [], []
    lam = min(bt)
    for d in range(1, top // lam + 2):
        for j in range(d + 1):
            col = {0: field.one}
            for _ in range(d - j):
                col = _tmul(col, pt, field)
            for _ in range(j):
                col = _tmul(col, ot, field)
            if col and min(col) <= top:
                monos.append((d - j, j))
                cols.append(col)
    keys = sorted(set(target).union(*[set(c) for c in cols]))
    if not keys:
        g = MultiSeries.zero(field, 2)
    else:
        rows = [[c.get(k, field.zero) for c in cols] for k in keys]
        sol = field.solve(rows, [target.get(k, field.zero) for k in keys])
        if sol is None:
            return None
        g = MultiSeries.zero(field, 2)
        for (i, j), c in zip(monos, sol):
            if c:
                g = g + (pv ** i * ov ** j).scale(c)
    hh = normalize_monic(substitute(h, [pv, ov]))
    return CurveIdeal(remainder(g, hh), hh, None, True, () if lam > 2 else ("tangency order 2",))


def quadratic_preimage(C: CurveIdeal, rec: TransformRecord, D: int = DEFAULT_DEGREE):
    """A curve Q with strict transform C, or a string explaining why none was built."""
    field = C.field
    u = rec.direction
    P = u.privileged
    O = 1 - P
    beta, gamma = u.coords[O], u.coords[2]
    base = normalize_smooth_curve(_to_base_chart(C, rec, D), D) if C.smooth else None
    if base is None:
        return "singular after-curve"
    # in original variables: p is the privileged variable, o' = o - beta p
    Xv, Yv = (MultiSeries.var(field, 2, i) for i in range(2))
    pv = (Xv, Yv)[P]
    ov = (Xv, Yv)[O] - pv.scale(beta)
    if base.canonical_form == "transversal":
        a = base.g
        b = base.h - MultiSeries.var(field, 2, 1)
        a_p = substitute(a, [pv, MultiSeries.zero(field, 2)])
        b_p = substitute(b, [pv, MultiSeries.zero(field, 2)])
        g = pv * a_p - pv.scale(gamma)
        h = ov + pv * b_p
        return normalize_smooth_curve(CurveIdeal(g, h), D)
    if base.canonical_form == "divisor":
        return "the exceptional divisor has no preimage"
    # tangent: (Z1 + a(Y1), X1 + b(Y1)) with ord b >= 2
    b = base.h - MultiSeries.var(field, 2, 0)
    if base.is_exact:
        Q = _parametric_preimage(base.g, b, gamma, pv, ov)
        if Q is not None:
            return Q
    bd = blowdown_data(b, D)
    # W is monic in Y1; Euclidean division keeps every term below the precision of W
    _, r = weierstrass_divide(base.g.exact(), bd.W.exact(), D)
    if bd.W.prec is not None or base.g.prec is not None:
        r = r.with_prec(min(p for p in (bd.W.prec, base.g.prec) if p is not None))
    bad = [e for e in r.terms if e[1] > e[0] + 1]
    if bad:
        return f"the Z-part has monomials {sorted(bad)} outside the image of the transform"
    # X1^i Y1^j  ->  p^(i+1-j) o'^j
    g = MultiSeries.zero(field, 2, r.prec)
    for (i, j), c in r.terms.items():
        g = g + (pv ** (i + 1 - j) * ov ** j).scale(c)
    g = g - pv.scale(gamma)
    h = substitute(bd.H, [pv, ov])
    if h.prec is None and g.prec is None:
        h = normalize_monic(h)
        g = remainder(g, h)
    return CurveIdeal(g, h, None, True, () if bd.lam > 2 else ("tangency order 2",))


def monoidal_preimage(C: CurveIdeal, rec: TransformRecord, D: int = DEFAULT_DEGREE):
    """The curve (Z - gamma X + X g1(X, Y), h1(X, Y)) for an after-curve (Z1 + g1, h1)."""
    field = C.field
    base = _to_base_chart(C, rec, D)
    X = MultiSeries.var(field, 2, 0)
    gamma = rec.direction.coords[2]
    g = X * base.g - X.scale(gamma)
    h = base.h
    if h.order() == 1 and normalize_smooth_curve(base, D).canonical_form == "divisor":
        return "curves in the exceptional divisor have no preimage"
    if h.order() == 1:
        return normalize_smooth_curve(CurveIdeal(g, h), D)
    return CurveIdeal(g, h, None, C.irreducible, C.notes)
