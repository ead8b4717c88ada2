"""Mechanical checks of the transform theorem on concrete surfaces.

Each check returns a :class:`TheoremReport` whose verdict is Pass, Fail
(with a witness) or Inconclusive (with a reason).  Mismatches are reported,
never repaired.
"""

from __future__ import annotations

import hashlib
import json
import random
from dataclasses import dataclass, field as dc_field
from typing import Iterator, Sequence

from .coeff import FieldSpec
from .locus import (ORIGIN, CurveIdeal, PrecisionTooLow, discover_locus, is_equimultiple, is_permitted,
                    normalize_smooth_curve, same_curve, tangency_class)
from .ring import DEFAULT_DEGREE, MultiSeries, substitute
from .surface import Surface, new_surface
from .transform import (MONOIDAL, QUADRATIC, Direction, MultiplicityDropped, NotPassingThrough,
                        TransformRecord, enumerate_directions, is_center_zx, monoidal_preimage,
                        monoidal_transform, nu_map, quadratic_preimage, quadratic_transform,
                        strict_transform_curve)

PASS, FAIL, INCONCLUSIVE = "Pass", "Fail", "Inconclusive"
DEFAULT_BOUNDS = (4, 3)
SCHEMA = "artifact-report/1"
AFTER_NAMES = ("X1", "Y1", "Z1")

TYPE_I, TYPE_II, TYPE_III = "type_i", "type_ii", "type_iii"
VIA_NU, VIA_STRICT, UNMATCHED = "via_nu", "via_strict", "unmatched"


def digest(S: Surface) -> str:
    return hashlib.sha256(f"{S.field}|{S.F.to_str()}".encode()).hexdigest()[:16]


def _elem_json(e, names=("X", "Y", "Z")):
    return e.to_json(names)


@dataclass
class TheoremReport:
    case: str
    field: FieldSpec
    surface: str
    surface_digest: str
    direction: str | None
    center: str | None = None
    transformed: str | None = None
    locus_before: list = dc_field(default_factory=list)
    locus_after: list = dc_field(default_factory=list)
    classification: list = dc_field(default_factory=list)
    verdict: str = PASS
    reason: str | None = None
    witness: dict | None = None
    branch: str | None = None
    bounds: tuple = DEFAULT_BOUNDS
    completeness: str | None = None
    notes: list = dc_field(default_factory=list)

    @property
    def non_vacuous(self) -> bool:
        """At least one curve beyond the origin after the transform."""
        return any(e.get("kind") == "curve" for e in self.locus_after)

    def fail(self, reason: str, witness: dict):
        self.verdict, self.reason, self.witness = FAIL, reason, witness

    def inconclusive(self, reason: str):
        if self.verdict == PASS:
            self.verdict, self.reason = INCONCLUSIVE, reason

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "case": self.case, "field": str(self.field), "surface": self.surface,
                "digest": self.surface_digest, "direction": self.direction, "center": self.center,
                "transformed": self.transformed, "locus_before": self.locus_before,
                "locus_after": self.locus_after, "classification": self.classification,
                "verdict": self.verdict, "reason": self.reason, "witness": self.witness,
                "branch": self.branch, "bounds": list(self.bounds), "completeness": self.completeness,
                "notes": list(self.notes)}

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=2)


# moving a smooth curve to (Z, X)


def normal_form_change(P: CurveIdeal, D: int = DEFAULT_DEGREE) -> tuple[MultiSeries, ...]:
    """Images of X, Y, Z in new variables X', Y', Z' taking P to (Z', X')."""
    field = P.field
    N = normalize_smooth_curve(P, D)
    X, Y, Z = (MultiSeries.var(field, 3, i) for i in range(3))
    if N.canonical_form == "transversal":
        a = N.g
        b = N.h - MultiSeries.var(field, 2, 1)
        # the curve is Z = -a(X), Y = -b(X); X' := Y + b(X), Y' := X
        Xn = Y
        return (Xn, X - substitute(b.lift(0), [Y, X, Z]), Z - substitute(a.lift(0), [Y, X, Z]))
    a = N.g
    b = N.h - MultiSeries.var(field, 2, 0)
    return (X - b.lift(0), Y, Z - a.lift(0))


def move_to_zx(S: Surface, P: CurveIdeal, D: int = DEFAULT_DEGREE) -> Surface:
    """The surface in coordinates where P is (Z, X)."""
    images = normal_form_change(P, D)
    return new_surface(substitute(S.F, list(images)), D)


def normal_form_oracle(S: Surface, P: CurveIdeal, D: int = DEFAULT_DEGREE) -> bool:
    """Is P permitted?  Decided on the Newton set after moving P to (Z, X)."""
    if not P.smooth:
        return False
    F = substitute(S.F, list(normal_form_change(P, D)))
    n = S.n
    bad = [e for e in F.terms if e[0] + e[2] < n]
    if bad:
        return False
    if F.prec is not None:
        raise PrecisionTooLow("the Newton set is truncated")
    return True


def zx_curve(field: FieldSpec) -> CurveIdeal:
    return CurveIdeal(MultiSeries.zero(field, 2), MultiSeries.var(field, 2, 0), "divisor", True)


def _is_exceptional(C: CurveIdeal) -> bool:
    return C.smooth and is_center_zx(C)


def _contains(items: Sequence[CurveIdeal], C: CurveIdeal) -> bool:
    return any(same_curve(C, d) for d in items)


# case (a): monoidal transforms


def check_case_a(S: Surface, P: CurveIdeal, u: Direction | None = None,
                 bounds: tuple = DEFAULT_BOUNDS, D: int = DEFAULT_DEGREE) -> TheoremReport:
    """Compare E0 before and after the blow-up of the permitted curve P."""
    field = S.field
    rep = TheoremReport("a", field, S.F.to_str(), digest(S), None, center=P.to_str(), bounds=tuple(bounds))
    if is_permitted(S, P) is not True:
        rep.inconclusive("hypothesis unmet: the center is not permitted")
        return rep
    S0 = S if is_center_zx(P) else move_to_zx(S, P, D)
    center = zx_curve(field)
    if u is None:
        dirs = enumerate_directions(S0, MONOIDAL)
        if not dirs:
            rep.inconclusive("no rational direction on the cone")
            return rep
        u = dirs[0][0]
    rep.direction = u.to_str()
    out = monoidal_transform(S0, center, u, D)
    if isinstance(out, MultiplicityDropped):
        rep.transformed = out.F1.to_str(AFTER_NAMES)
        rep.inconclusive(f"hypothesis unmet: multiplicity drops to {out.new_multiplicity}")
        return rep
    S1, rec = out
    rep.transformed = S1.F.to_str(AFTER_NAMES)
    before = discover_locus(S0, *bounds)
    after = discover_locus(S1, *bounds)
    rep.completeness = after.completeness
    rep.locus_before = [_elem_json(e) for e in before]
    rep.locus_after = [_elem_json(e, AFTER_NAMES) for e in after]
    rep.notes.extend(before.notes + after.notes)
    uncertified = False
    divisor_seen = False
    for C in after.permitted:
        entry = {"curve": C.to_str(AFTER_NAMES)}
        if tangency_class(C) == "IsExceptionalDivisor":
            # a permitted curve inside X1 = 0 is the reduced exceptional curve over P
            divisor_seen = True
            entry.update(type=VIA_NU, preimage=center.to_str(), literal_nu=_is_exceptional(C))
            rep.classification.append(entry)
            continue
        Q = monoidal_preimage(C, rec, D)
        if isinstance(Q, str):
            entry.update(type=UNMATCHED, reason=Q)
            rep.classification.append(entry)
            rep.fail("after-curve without a preimage", entry)
            continue
        ok = is_permitted(S0, Q)
        back = strict_transform_curve(Q, rec, D)
        entry["preimage"] = Q.to_str()
        if ok is False or isinstance(back, NotPassingThrough) or not same_curve(back, C):
            entry["type"] = UNMATCHED
            rep.classification.append(entry)
            rep.fail("preimage is not a permitted curve of S", entry)
            continue
        if ok is None:
            uncertified = True
        entry["type"] = VIA_NU
        entry["literal_nu"] = same_curve(nu_map(Q), C)
        rep.classification.append(entry)
    for Q in before.permitted:
        if _is_exceptional(Q):
            continue
        C = strict_transform_curve(Q, rec, D)
        if isinstance(C, NotPassingThrough) or not _contains(after.permitted, C):
            w = {"curve": Q.to_str(), "image": C.to_json() if isinstance(C, NotPassingThrough)
                 else C.to_str(AFTER_NAMES)}
            rep.fail("a permitted curve of S is lost after the transform", w)
    rep.branch = "E0(S1) = nu(E0(S))" if divisor_seen else "E0(S1) = nu(E0(S) - {P})"
    _finish_verdict(rep, field, uncertified)
    return rep


def _finish_verdict(rep: TheoremReport, field: FieldSpec, uncertified: bool):
    if rep.verdict == FAIL:
        return
    if uncertified:
        rep.inconclusive("some matches rest on truncated divisibility checks")


# case (b): quadratic transforms


def _classify_b2(C: CurveIdeal, S: Surface, rec: TransformRecord, D: int):
    """(entry, certified) for one permitted curve of the transformed surface."""
    entry = {"curve": C.to_str(AFTER_NAMES)}
    kind = tangency_class(C)
    if kind == "IsExceptionalDivisor":
        if _is_exceptional(C):
            entry["type"] = TYPE_I
            return entry, True
        entry.update(type=UNMATCHED, reason="a curve inside the exceptional divisor")
        return entry, True
    Q = quadratic_preimage(C, rec, D)
    if isinstance(Q, str):
        entry.update(type=UNMATCHED, reason=Q)
        return entry, True
    entry["preimage"] = Q.to_str()
    back = strict_transform_curve(Q, rec, D)
    if isinstance(back, NotPassingThrough) or not same_curve(back, C, D):
        entry.update(type=UNMATCHED, reason="strict transform of the preimage differs")
        return entry, True
    if kind == "Tangent":
        eq = is_equimultiple(S, Q)
        if eq is False or Q.smooth:
            entry.update(type=UNMATCHED, reason="preimage is not a singular equimultiple curve")
            return entry, True
        entry["type"] = TYPE_II
        if eq is None:
            entry["certified"] = "valuation transfer"
        return entry, eq is True
    eq = is_permitted(S, Q)
    if eq is False:
        entry.update(type=UNMATCHED, reason="preimage is not permitted")
        return entry, True
    nu_q = nu_map(Q, rec.swapped)
    if tangency_class(nu_q) != "Transversal" or tangency_class(C) != "Transversal":
        entry.update(type=UNMATCHED, reason="nu(Q) or its strict transform is not transversal")
        return entry, True
    entry["type"] = TYPE_III
    return entry, eq is True


def check_case_b(S: Surface, u: Direction, bounds: tuple = DEFAULT_BOUNDS, D: int = DEFAULT_DEGREE,
                 before=None) -> TheoremReport:
    """Compare E0 before and after the quadratic transform at ``u``."""
    field = S.field
    rep = TheoremReport("b2" if S.cone.plane else "b1", field, S.F.to_str(), digest(S), u.to_str(),
                        center="M", bounds=tuple(bounds))
    out = quadratic_transform(S, u, D)
    if isinstance(out, MultiplicityDropped):
        rep.transformed = out.F1.to_str(AFTER_NAMES)
        rep.inconclusive(f"hypothesis unmet: multiplicity drops to {out.new_multiplicity}")
        return rep
    S1, rec = out
    rep.transformed = S1.F.to_str(AFTER_NAMES)
    before = before if before is not None else discover_locus(S, *bounds)
    after = discover_locus(S1, *bounds)
    rep.completeness = after.completeness
    rep.locus_before = [_elem_json(e) for e in before]
    rep.locus_after = [_elem_json(e, AFTER_NAMES) for e in after]
    rep.notes.extend(before.notes + after.notes)
    uncertified = False
    images = []
    for Q in before.permitted:
        C = strict_transform_curve(Q, rec, D)
        if not isinstance(C, NotPassingThrough):
            images.append((Q, C))
    if rep.case == "b1":
        for C in after.permitted:
            entry = {"curve": C.to_str(AFTER_NAMES)}
            match = next((Q for Q, img in images if same_curve(img, C, D)), None)
            if match is None:
                entry["type"] = UNMATCHED
                rep.classification.append(entry)
                rep.fail("after-curve is not a strict transform of a permitted curve", entry)
            else:
                entry.update(type=VIA_STRICT, preimage=match.to_str())
                rep.classification.append(entry)
    else:
        types = set()
        for C in after.permitted:
            entry, certified = _classify_b2(C, S, rec, D)
            rep.classification.append(entry)
            types.add(entry["type"])
            uncertified |= not certified
            if entry["type"] == UNMATCHED:
                rep.fail("after-curve matches none of the types (i), (ii), (iii)", entry)
        if TYPE_II in types and TYPE_I not in types:
            rep.fail("a type (ii) curve without the exceptional divisor",
                     {"types": sorted(types)})
    for Q, C in images:
        if not _contains(after.permitted, C):
            rep.fail("the strict transform of a permitted curve is not permitted",
                     {"curve": Q.to_str(), "image": C.to_str(AFTER_NAMES)})
    _finish_verdict(rep, field, uncertified)
    return rep


# random surfaces


RECIPES = ("plane", "nonplane", "planted_zx", "planted_transversal", "planted_singular")


def _rand_coeff(rng: random.Random, field: FieldSpec, nonzero: bool = False):
    if field.is_finite:
        lo = 1 if nonzero else 0
        return rng.randrange(lo, field.p)
    while True:
        c = rng.randint(-3, 3)
        if c or not nonzero:
            return c


def _rand_poly(rng, field, lo: int, hi: int, density: float = 0.35) -> MultiSeries:
    terms = {}
    for d in range(lo, hi + 1):
        for i in range(d + 1):
            if rng.random() < density:
                terms[(i, d - i)] = _rand_coeff(rng, field)
    return MultiSeries(field, 2, terms)


def _rand_uni(rng, field, lo: int, hi: int, var: int) -> MultiSeries:
    terms = {}
    for d in range(lo, hi + 1):
        if rng.random() < 0.6:
            terms[(d, 0) if var == 0 else (0, d)] = _rand_coeff(rng, field)
    return MultiSeries(field, 2, terms)


def _assemble(field, n, a) -> MultiSeries:
    F = MultiSeries.monomial(field, (0, 0, n))
    for k, ak in enumerate(a):
        F = F + ak.lift(k)
    return F


def random_surface(field: FieldSpec, n: int, deg_bound: int, seed, recipe: str | None = None,
                   D: int = DEFAULT_DEGREE) -> Surface:
    """A seeded random Weierstrass surface; ``recipe`` defaults to a biased random choice."""
    if n < 2 or deg_bound < n:
        raise ValueError("need n >= 2 and deg_bound >= n")
    rng = random.Random(f"{field}|{n}|{deg_bound}|{seed}|{recipe}")
    if recipe is None:
        recipe = rng.choices(RECIPES, weights=(2, 2, 2, 3, 1))[0]
    pure = MultiSeries.monomial(field, (0, 0, n))
    # Z^n makes every curve in Z = 0 equimultiple; redraw it
    for _ in range(64):
        F = _draw(rng, field, n, deg_bound, recipe)
        if F != pure:
            break
    if rng.random() < 0.25:
        Xv, Yv, Zv = (MultiSeries.var(field, 3, i) for i in range(3))
        c, d = _rand_coeff(rng, field), _rand_coeff(rng, field)
        F = substitute(F, [Xv, Yv, Zv + Xv.scale(field(c)) + Yv.scale(field(d))])
    return new_surface(F, D)


def _draw(rng: random.Random, field: FieldSpec, n: int, deg_bound: int, recipe: str) -> MultiSeries:
    X, Y = (MultiSeries.var(field, 2, i) for i in range(2))
    if recipe == "plane":
        a = [_rand_poly(rng, field, n - k + 1, deg_bound - k) for k in range(n)]
        F = _assemble(field, n, a)
    elif recipe == "nonplane":
        a = [_rand_poly(rng, field, n - k, deg_bound - k) for k in range(n)]
        k = rng.randrange(n)
        e = rng.randrange(n - k + 1)
        a[k] = a[k] + MultiSeries.monomial(field, (e, n - k - e), _rand_coeff(rng, field, True))
        F = _assemble(field, n, a)
    elif recipe == "planted_zx":
        a = []
        for k in range(n):
            lo = rng.choice((0, 1, n - k))
            r = _rand_poly(rng, field, lo, max(lo, deg_bound - k - (n - k)))
            a.append(X ** (n - k) * r)
        F = _assemble(field, n, a)
    elif recipe == "planted_transversal":
        ga = _rand_uni(rng, field, 1, 2, 0)
        gb = _rand_uni(rng, field, 1, 2, 0)
        if rng.random() < 0.3:
            ga, gb = ga.permute((1, 0)), gb.permute((1, 0))
            line = X + gb
        else:
            line = Y + gb
        Zs = MultiSeries.var(field, 3, 2) + ga.lift(0)
        L = line.lift(0)
        F = Zs ** n
        for k in range(n):
            lo = rng.choice((0, 0, 1))
            r = _rand_poly(rng, field, lo, max(lo, 1), 0.5)
            F = F + (r.lift(0) * L ** (n - k) * Zs ** k)
    elif recipe == "planted_singular":
        lam = rng.choice((2, 3)) if n == 2 else 2
        c = _rand_coeff(rng, field, True)
        h = Y ** lam + (X ** (lam + 1)).scale(field(c))
        a = []
        for k in range(n):
            r = _rand_poly(rng, field, 0, 1, 0.5) if k < n - 1 or rng.random() < 0.5 else \
                MultiSeries.zero(field, 2)
            a.append(h ** (n - k) * r)
        F = _assemble(field, n, a)
    else:
        raise ValueError(f"unknown recipe {recipe!r}")
    return F


# fuzz drivers


def case_b_reports(S: Surface, bounds: tuple = DEFAULT_BOUNDS, D: int = DEFAULT_DEGREE) -> Iterator[TheoremReport]:
    """check_case_b at every multiplicity-preserving rational direction."""
    before = None
    for u, _ in enumerate_directions(S, QUADRATIC):
        out = quadratic_transform(S, u, D)
        if isinstance(out, MultiplicityDropped):
            continue
        if before is None:
            before = discover_locus(S, *bounds)
        yield check_case_b(S, u, bounds, D, before=before)


def fuzz_corpus(seed: int, count: int, primes: Sequence[int] = (2, 3, 5), ns: Sequence[int] = (2, 3, 4),
                deg_bound: int = 6) -> Iterator[Surface]:
    rng = random.Random(seed)
    for i in range(count):
        p = rng.choice(primes)
        n = rng.choice(ns)
        yield random_surface(FieldSpec(p), n, max(deg_bound, n), rng.randrange(1 << 30))


def case_a_corpus(seed: int, count: int, primes: Sequence[int] = (2, 3, 5), ns: Sequence[int] = (2, 3, 4),
                  deg_bound: int = 6) -> Iterator[Surface]:
    """Surfaces with (Z, X) permitted and a plane tangent cone."""
    rng = random.Random(seed)
    for _ in range(count):
        field = FieldSpec(rng.choice(primes))
        n = rng.choice(ns)
        X = MultiSeries.var(field, 2, 0)
        a = []
        survive = rng.random() < 0.5
        for k in range(n):
            if survive:
                # X^(2(n-k)) | a_k keeps (Z1, X1) permitted after the transform
                r = X ** (n - k) * _rand_poly(rng, field, 0, max(0, deg_bound - n - 1), 0.4)
            else:
                lo = rng.choice((1, 1, n - k))
                r = _rand_poly(rng, field, lo, max(lo, deg_bound - n), 0.4)
            a.append(X ** (n - k) * r)
        yield new_surface(_assemble(field, n, a))


def lemma_corpus(seed: int, count: int, primes: Sequence[int] = (2, 3, 5), ns: Sequence[int] = (2, 3, 4),
                 deg_bound: int = 6) -> Iterator[Surface]:
    """Surfaces with a non-plane cone and (Z, X) permitted."""
    rng = random.Random(seed)
    produced = 0
    while produced < count:
        field = FieldSpec(rng.choice(primes))
        n = rng.choice(ns)
        X = MultiSeries.var(field, 2, 0)
        a = []
        for k in range(n):
            r = _rand_poly(rng, field, 0, max(0, deg_bound - n), 0.4)
            a.append(X ** (n - k) * r)
        S = new_surface(_assemble(field, n, a))
        if S.n == n and not S.cone.plane:
            produced += 1
            yield S


def lemma_check(S: Surface, P: CurveIdeal | None = None, D: int = DEFAULT_DEGREE) -> list[int]:
    """Multiplicities after every monoidal transform along P (default (Z, X))."""
    P = P or zx_curve(S.field)
    S0 = S if is_center_zx(P) else move_to_zx(S, P, D)
    center = zx_curve(S.field)
    out = []
    for u, _ in enumerate_directions(S0, MONOIDAL):
        r = monoidal_transform(S0, center, u, D)
        out.append(r.new_multiplicity if isinstance(r, MultiplicityDropped) else r[0].n)
    return out
