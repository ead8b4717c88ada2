"""Equimultiple curves: membership, normal forms and bounded discovery.

A curve is an ideal (Z + g(X,Y), h(X,Y)).  It lies in the equimultiple
locus of F = Z^n + sum a_k Z^k exactly when, writing
F(X, Y, Z - g) = sum c_k Z^k, every h^(n-k) divides c_k.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from math import comb
from typing import Iterator, Sequence

from .coeff import FieldSpec
from .ring import (DEFAULT_DEGREE, MultiSeries, RingError, divide_exact, divides, factor_rational, gcd,
                   normalize_monic, remainder, squarefree_decompose, substitute, weierstrass_prepare)
from .surface import Surface

TRANSVERSAL = "transversal"
TANGENT = "tangent"
DIVISOR = "divisor"

EXHAUSTIVE = "ExhaustiveWithinBounds"
HEURISTIC = "HeuristicOnly"

# free parameters over Q are sampled from this set during the bounded search
Q_SAMPLE = (Fraction(0), Fraction(1), Fraction(-1))


class NotSmooth(RingError):
    pass


class PrecisionTooLow(RingError):
    pass


class Origin:
    """The maximal ideal M = (X, Y, Z)."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "Origin"

    def to_str(self, names=None):
        return "M"

    def to_json(self, names=None):
        return {"kind": "origin"}


ORIGIN = Origin()


@dataclass(frozen=True)
class CurveIdeal:
    """The ideal (Z + g, h); ``irreducible`` is None when not verified."""

    g: MultiSeries
    h: MultiSeries
    canonical_form: str | None = None
    irreducible: bool | None = True
    notes: tuple = dc_field(default=(), compare=False)

    def __post_init__(self):
        if not self.h.terms:
            raise ValueError("h must be nonzero")
        if self.h.constant_term() or self.g.constant_term():
            raise ValueError("the curve must pass through the origin")

    @property
    def field(self) -> FieldSpec:
        return self.h.field

    @property
    def smooth(self) -> bool:
        return self.h.order() == 1

    @property
    def is_exact(self) -> bool:
        return self.g.prec is None and self.h.prec is None

    def key(self):
        return (self.canonical_form or "", tuple(sorted(self.h.terms.items())),
                tuple(sorted(self.g.terms.items())))

    def to_str(self, names: Sequence[str] = ("X", "Y", "Z")) -> str:
        z = names[2]
        g = self.g.to_str(names[:2])
        zpart = z if g == "0" else (f"{z} - {g[1:]}" if g.startswith("-") and " " not in g
                                   else f"{z} + {g}")
        return f"({zpart}, {self.h.to_str(names[:2])})"

    def __str__(self):
        return self.to_str()

    def to_json(self, names: Sequence[str] = ("X", "Y", "Z")) -> dict:
        d = {"kind": "curve", "ideal": self.to_str(names), "g": self.g.to_str(names[:2]),
             "h": self.h.to_str(names[:2]), "smooth": self.smooth,
             "form": self.canonical_form, "irreducible": self.irreducible, "exact": self.is_exact}
        if self.notes:
            d["notes"] = list(self.notes)
        return d


def curve(g: MultiSeries, h: MultiSeries, **kw) -> CurveIdeal:
    return CurveIdeal(g, h, **kw)


# membership


def z_expansion(S: Surface, g: MultiSeries) -> list[MultiSeries]:
    """Coefficients c_0..c_{n-1} of F(X, Y, Z - g) in powers of Z."""
    field = S.field
    X, Y, Z = (MultiSeries.var(field, 3, i) for i in range(3))
    shifted = substitute(S.F, [X, Y, Z - g.lift(0)])
    parts = shifted.split_last()
    zero = MultiSeries.zero(field, 2, shifted.prec)
    return [parts.get(k, zero) for k in range(S.n)]


def is_equimultiple(S: Surface, P: CurveIdeal, strict: bool = False) -> bool | None:
    """True/False, or None when truncation leaves the answer undecided."""
    cs = z_expansion(S, P.g)
    unknown = False
    hp = MultiSeries.const(S.field, 2, 1)
    for k in range(S.n - 1, -1, -1):
        hp = hp * P.h
        if not cs[k].terms and cs[k].prec is None:
            continue
        verdict = divides(hp, cs[k])
        if verdict is False:
            return False
        if verdict is None:
            unknown = True
    if unknown:
        if strict:
            raise PrecisionTooLow("divisibility undecided at the working precision")
        return None
    return True


def is_permitted(S: Surface, P: CurveIdeal, strict: bool = False) -> bool | None:
    if not P.smooth:
        return False
    return is_equimultiple(S, P, strict)


# normal forms


def _solve_linear_var(h: MultiSeries, var: int, D: int):
    """Write h = unit * (V + b(W)) for V the variable ``var``; return b (order >= 1)."""
    other = 1 - var
    rest = h - MultiSeries.var(h.field, 2, var).scale(h.coeff(tuple(1 if i == var else 0 for i in range(2))))
    lin = h.coeff(tuple(1 if i == var else 0 for i in range(2)))
    if h.prec is None and all(e[var] == 0 for e in rest.terms):
        return rest.scale(h.field.inv(lin))
    order = (other, var)
    _, w = weierstrass_prepare(h.permute(order), D)
    # w = V + b(W) in permuted variables, with V last
    b = w - MultiSeries.var(h.field, 2, 1)
    return b.permute(order)


def normalize_smooth_curve(P: CurveIdeal, D: int = DEFAULT_DEGREE) -> CurveIdeal:
    """Rewrite a smooth curve as (Z + a(X), Y + b(X)), (Z + a(Y), X + b(Y)) or (Z + a(Y), X)."""
    if not P.smooth:
        raise NotSmooth(f"{P} is not smooth")
    field = P.field
    h = P.h
    X, Y = (MultiSeries.var(field, 2, i) for i in range(2))
    if h.coeff((0, 1)):
        b = _solve_linear_var(h, 1, D)
        a = substitute(P.g, [X.with_prec(b.prec), -b], allow_units=True) if b.terms else \
            substitute(P.g, [X, MultiSeries.zero(field, 2)], allow_units=True)
        return CurveIdeal(a, Y + b, TRANSVERSAL, True)
    b = _solve_linear_var(h, 0, D)
    if b.terms:
        a = substitute(P.g, [-b, Y.with_prec(b.prec)], allow_units=True)
        return CurveIdeal(a, X + b, TANGENT, True)
    a = substitute(P.g, [MultiSeries.zero(field, 2), Y], allow_units=True)
    return CurveIdeal(a, X.with_prec(b.prec) if b.prec is not None else X, DIVISOR, True)


def tangency_class(P: CurveIdeal) -> str:
    """``Transversal``, ``Tangent`` or ``IsExceptionalDivisor`` relative to X = 0."""
    if not P.smooth:
        raise NotSmooth(f"{P} is not smooth")
    form = P.canonical_form or normalize_smooth_curve(P).canonical_form
    return {TRANSVERSAL: "Transversal", TANGENT: "Tangent", DIVISOR: "IsExceptionalDivisor"}[form]


def same_curve(P: CurveIdeal, Q: CurveIdeal, D: int = DEFAULT_DEGREE) -> bool:
    """Equality of ideals, decided on normal forms (smooth) or reduced generators."""
    if P.smooth != Q.smooth:
        return False
    if P.smooth:
        a, b = normalize_smooth_curve(P, D), normalize_smooth_curve(Q, D)
        return (a.canonical_form == b.canonical_form and a.h.agrees(b.h, D) and a.g.agrees(b.g, D))
    if not (P.is_exact and Q.is_exact):
        return False
    hp, hq = normalize_monic(P.h), normalize_monic(Q.h)
    if hp != hq:
        return False
    return not remainder(P.g - Q.g, hp).terms


# bounded discovery


@dataclass(frozen=True)
class LocusResult:
    elements: tuple
    completeness: str
    bounds: tuple
    notes: tuple = ()

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __len__(self):
        return len(self.elements)

    @property
    def curves(self) -> list[CurveIdeal]:
        return [e for e in self.elements if isinstance(e, CurveIdeal)]

    @property
    def permitted(self) -> list[CurveIdeal]:
        return [c for c in self.curves if c.smooth]


class _Taylor:
    """Hasse derivatives D_Y^j D_Z^k F (j + k < n) as flat term lists."""

    def __init__(self, F: MultiSeries, n: int):
        self.field = F.field
        self.items = []
        for j in range(n):
            for k in range(n - j):
                H = F.hasse((0, j, k))
                terms = [(e[0], e[1], e[2], c) for e, c in H.terms.items()]
                self.items.append((terms, H.coeff((0, 1, 0)), H.coeff((0, 0, 1))))
        self.maxy = max((t[1] for terms, _, _ in self.items for t in terms), default=0)
        self.maxz = max((t[2] for terms, _, _ in self.items for t in terms), default=0)


def _mul_trunc(u, v, m, field):
    p = field.characteristic
    out = [0] * (m + 1)
    for i, x in enumerate(u):
        if not x or i > m:
            continue
        for j in range(min(len(v), m + 1 - i)):
            y = v[j]
            if y:
                out[i + j] += x * y
    if p:
        return [c % p for c in out]
    return out


def _powers(s, k, m, field):
    pw = [[1] + [0] * m]
    for _ in range(k):
        pw.append(_mul_trunc(pw[-1], s, m, field))
    return pw


def _coeff_at(tay: _Taylor, A, B, m):
    """[t^m] of every Taylor coefficient along (t, B(t), A(t))."""
    field = tay.field
    pa = _powers(A, tay.maxz, m, field)
    pb = _powers(B, tay.maxy, m, field)
    out = []
    for terms, _, _ in tay.items:
        acc = 0
        for i, j, k, c in terms:
            r = m - i
            if r < 0:
                continue
            u, v = pb[j], pa[k]
            s = 0
            for d in range(r + 1):
                if u[d] and v[r - d]:
                    s += u[d] * v[r - d]
            if s:
                acc += c * s
        out.append(acc % field.characteristic if field.characteristic else acc)
    return out


def _full_vanish(tay: _Taylor, A, B) -> bool:
    """Exact check that every Taylor coefficient vanishes identically along the curve."""
    field = tay.field
    degA = max((i for i, c in enumerate(A) if c), default=0)
    degB = max((i for i, c in enumerate(B) if c), default=0)
    for terms, _, _ in tay.items:
        top = max((i + j * max(degB, 1) + k * max(degA, 1) for i, j, k, _ in terms), default=0)
        pa = _powers(A, tay.maxz, top, field)
        pb = _powers(B, tay.maxy, top, field)
        acc = [0] * (top + 1)
        for i, j, k, c in terms:
            prod = _mul_trunc(pb[j], pa[k], top - i, field)
            for d, v in enumerate(prod):
                if v:
                    acc[i + d] += c * v
        p = field.characteristic
        if any((x % p if p else x) for x in acc):
            return False
    return True


def _affine_solutions(field: FieldSpec, rows, rhs, unknowns: int, sample):
    """All solutions in the field (or in ``sample`` for free directions over Q)."""
    if unknowns == 0:
        return [()] if not any(rhs) else []
    sol = field.solve(rows, rhs)
    if sol is None:
        return []
    # kernel of an (r x unknowns) matrix with unknowns <= 2
    nz = [r for r in rows if any(r)]
    if unknowns == 1:
        kernel = [] if nz else [(field.one,)]
    elif not nz:
        kernel = [(field.one, field.zero), (field.zero, field.one)]
    else:
        z, y = nz[0]
        v = (field.neg(y), z)
        rank2 = any(field.add(field.mul(r[0], v[0]), field.mul(r[1], v[1])) for r in nz)
        kernel = [] if rank2 else [v]
    values = list(field.elements()) if field.is_finite else list(sample)
    out = []

    def rec(i, cur):
        if i == len(kernel):
            out.append(tuple(cur))
            return
        for t in values:
            rec(i + 1, [field.add(c, field.mul(t, k)) for c, k in zip(cur, kernel[i])])

    rec(0, list(sol))
    seen, uniq = set(), []
    for s in out:
        if s not in seen:
            seen.add(s)
            uniq.append(s)
    return uniq


def _search_curves(F: MultiSeries, n: int, deg_a: int, deg_b: int, b_start: int):
    """Curves (Z - A(X), Y - B(X)) with deg A <= deg_a, b_start <= ord B, deg B <= deg_b."""
    field = F.field
    tay = _Taylor(F, n)
    L = max(deg_a, deg_b, 1)
    A = [field.zero] * (L + 1)
    B = [field.zero] * (L + 1)
    found = []

    def rec(m):
        if m > L:
            if _full_vanish(tay, A, B):
                found.append((list(A), list(B)))
            return
        consts = _coeff_at(tay, A, B, m)
        use_a = m <= deg_a
        use_b = b_start <= m <= deg_b
        rows = []
        for _, ly, lz in tay.items:
            r = []
            if use_a:
                r.append(lz)
            if use_b:
                r.append(ly)
            rows.append(r)
        rhs = [field.neg(c) for c in consts]
        for sol in _affine_solutions(field, rows, rhs, use_a + use_b, Q_SAMPLE):
            it = iter(sol)
            A[m] = next(it) if use_a else field.zero
            B[m] = next(it) if use_b else field.zero
            rec(m + 1)
        A[m] = field.zero
        B[m] = field.zero

    rec(1)
    return found


def _uni_to_bivariate(coeffs, field, var: int, sign: int = -1) -> MultiSeries:
    terms = {}
    for d, c in enumerate(coeffs):
        if c:
            e = (d, 0) if var == 0 else (0, d)
            terms[e] = field.neg(c) if sign < 0 else c
    return MultiSeries(field, 2, terms, clean=True)


def smooth_candidates(S: Surface, max_h_degree: int, max_g_degree: int) -> list[CurveIdeal]:
    """Permitted curves in normal form within the degree bounds, via the Taylor search."""
    field = S.field
    F = S.F
    X, Y = (MultiSeries.var(field, 2, i) for i in range(2))
    out = []
    for A, B in _search_curves(F, S.n, max_g_degree, max_h_degree, 1):
        a = _uni_to_bivariate(A, field, 0)
        b = _uni_to_bivariate(B, field, 0)
        out.append(CurveIdeal(a, Y + b, TRANSVERSAL, True))
    swapped = F.permute((1, 0, 2))
    for A, B in _search_curves(swapped, S.n, max_g_degree, max_h_degree, 2):
        a = _uni_to_bivariate(A, field, 1)
        b = _uni_to_bivariate(B, field, 1)
        out.append(CurveIdeal(a, X + b, TANGENT if b.terms else DIVISOR, True))
    return out


def witness_polynomials(S: Surface) -> list[MultiSeries]:
    """Polynomials in X, Y that every equimultiple h must divide, whatever g is."""
    field = S.field
    n = S.n
    p = field.characteristic
    q = 1
    if p:
        while (n // q) % p == 0:
            q *= p
    nprime = n // q
    a = S.a
    out = []
    for k in range(1, n + 1):
        if k % q:
            out.append(a[n - k])
        else:
            t = k // q
            lhs = a[n - k].scale(field.pow(field.from_int(nprime), t))
            rhs = (a[n - q] ** t).scale(field.from_int(comb(nprime, t)))
            out.append(lhs - rhs)
    return [w for w in out if w.terms]


def _is_line_power(form: MultiSeries) -> bool:
    """Is a bivariate homogeneous form a constant times a power of one linear form?"""
    field = form.field
    m = form.total_degree()
    p = field.characteristic
    for var in (1, 0):
        e = (0, m) if var == 1 else (m, 0)
        c = form.coeff(e)
        if not c:
            continue
        monic = form.scale(field.inv(c))
        q = 1
        if p:
            while (m // q) % p == 0:
                q *= p
        other = (q, m - q) if var == 1 else (m - q, q)
        s = field.nth_root(field.div(monic.coeff(other), field.from_int(m // q)), q)
        if s is None:
            return False
        X, Y = (MultiSeries.var(field, 2, i) for i in range(2))
        line = (Y + X.scale(s)) if var == 1 else (X + Y.scale(s))
        return line ** m == monic
    return False


def _solve_g(S: Surface, h: MultiSeries, max_g_degree: int) -> MultiSeries | None:
    """A g with (Z + g, h) compatible with F modulo h, or None."""
    field = S.field
    n = S.n
    p = field.characteristic
    q = 1
    if p:
        while (n // q) % p == 0:
            q *= p
    nprime = n // q
    w = S.a[n - q].scale(field.inv(field.from_int(nprime)))
    if q == 1:
        return remainder(w, h)
    # g(X^q, Y^q) = g^q is congruent to w modulo h: linear in the coefficients of g
    monos = [(i, d - i) for d in range(1, max_g_degree + 1) for i in range(d, -1, -1)]
    target = remainder(w, h)
    images = [remainder(MultiSeries.monomial(field, (i * q, j * q)), h) for i, j in monos]
    keys = sorted(set(target.terms).union(*[set(im.terms) for im in images]))
    rows = [[im.coeff(k) for im in images] for k in keys]
    rhs = [target.coeff(k) for k in keys]
    if not keys:
        return MultiSeries.zero(field, 2)
    sol = field.solve(rows, rhs)
    if sol is None:
        return None
    g = MultiSeries(field, 2, {m: c for m, c in zip(monos, sol) if c}, clean=True)
    return remainder(g, h)


def singular_candidates(S: Surface, max_h_degree: int, max_g_degree: int,
                        smooth_found: Sequence[CurveIdeal] = ()) -> tuple[list[CurveIdeal], list[str]]:
    field = S.field
    notes = []
    ws = witness_polynomials(S)
    if ws:
        W = ws[0]
        for w in ws[1:]:
            W = gcd(W, w)
    elif S.a[0].terms:
        # happens only when n is a power of p; fall back to the constant coefficient
        notes.append("witness polynomials vanish; singular candidates drawn from a_0")
        W = S.a[0]
    else:
        notes.append("witness polynomials and a_0 vanish; singular search skipped")
        return [], notes
    if not W.total_degree() > 0:
        return [], notes
    comps = []
    if field.is_finite:
        for f, _ in squarefree_decompose(W):
            # strip factors already known to be smooth curves
            for c in smooth_found:
                while c.h.prec is None and f.total_degree() > 0:
                    qt = divide_exact(c.h, f)
                    if qt is None:
                        break
                    f = qt
            comps.append((f, None))
    else:
        comps = [(f, True) for f, _ in factor_rational(W)]
    out = []
    for h, irreducible in comps:
        if not h.terms or h.constant_term() or h.order() < 2 or h.total_degree() > max_h_degree:
            continue
        if not _is_line_power(h.initial_form()):
            continue
        g = _solve_g(S, h, max_g_degree)
        if g is None or g.constant_term():
            continue
        P = CurveIdeal(g, h, None, irreducible,
                       () if irreducible else ("irreducibility unverified",))
        if is_equimultiple(S, P) is True:
            out.append(P)
    return out, notes


def discover_locus(S: Surface, max_h_degree: int = 4, max_g_degree: int = 3) -> LocusResult:
    """Origin plus every equimultiple curve found within the degree bounds."""
    if not S.is_exact:
        raise PrecisionTooLow("locus discovery needs an exact Weierstrass polynomial")
    field = S.field
    notes = []
    smooth = []
    for c in smooth_candidates(S, max_h_degree, max_g_degree):
        if is_equimultiple(S, c) is not True:
            notes.append(f"search candidate {c} failed re-verification")
            continue
        smooth.append(c)
    if not field.is_finite:
        for c in _factor_smooth_candidates(S, max_h_degree):
            if not any(same_curve(c, d) for d in smooth) and is_equimultiple(S, c) is True:
                smooth.append(c)
    singular, snotes = singular_candidates(S, max_h_degree, max_g_degree, smooth)
    notes.extend(snotes)
    completeness = EXHAUSTIVE if field.is_finite else HEURISTIC
    elems = (ORIGIN,) + tuple(smooth) + tuple(singular)
    return LocusResult(elems, completeness, (max_h_degree, max_g_degree), tuple(notes))


def _factor_smooth_candidates(S: Surface, max_h_degree: int) -> list[CurveIdeal]:
    """Over Q: smooth curves whose h is a factor of the witness gcd."""
    ws = witness_polynomials(S)
    if not ws:
        return []
    W = ws[0]
    for w in ws[1:]:
        W = gcd(W, w)
    if W.total_degree() <= 0:
        return []
    out = []
    for h, _ in factor_rational(W):
        if h.constant_term() or h.order() != 1 or h.total_degree() > max_h_degree:
            continue
        g = _solve_g(S, h, 1)
        if g is None:
            continue
        out.append(normalize_smooth_curve(CurveIdeal(g, h)))
    return out
