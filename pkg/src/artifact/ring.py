"""Sparse polynomials and truncated power series in two or three variables.

A :class:`MultiSeries` is a map from exponent tuples to nonzero raw field
values plus a precision: ``prec is None`` means the stored terms are the
whole (polynomial) object, ``prec == D`` means every term of total degree
at most D is known and nothing above D is.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .coeff import FieldMismatch, FieldSpec

DEFAULT_DEGREE = 16
INFINITE = math.inf
VARNAMES = {2: ("X", "Y"), 3: ("X", "Y", "Z")}


class RingError(ValueError):
    pass


class ArityMismatch(RingError):
    pass


class ZeroSeries(RingError):
    pass


class OrderViolation(RingError):
    pass


class NotZRegular(RingError):
    pass


class NotDistinguished(RingError):
    pass


class NotInvertible(RingError):
    pass


class AtLeast(int):
    """Order of a series that is zero at its precision: the true order is >= this."""

    def __repr__(self):
        return f"AtLeast({int(self)})"


def _minprec(a, b):
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


class MultiSeries:
    __slots__ = ("field", "arity", "terms", "prec")

    def __init__(self, field: FieldSpec, arity: int, terms=None, prec: int | None = None,
                 *, clean: bool = False):
        if arity not in (1, 2, 3):
            raise ArityMismatch(f"arity must be 1, 2 or 3, got {arity}")
        self.field = field
        self.arity = arity
        self.prec = prec
        if terms is None:
            self.terms = {}
        elif clean and prec is None:
            self.terms = terms
        else:
            out = {}
            for e, c in terms.items():
                if len(e) != arity:
                    raise ArityMismatch(f"exponent {e} in arity {arity}")
                if prec is not None and sum(e) > prec:
                    continue
                c = c if clean else field(c)
                if c:
                    out[tuple(e)] = c
            self.terms = out

    # constructors

    @classmethod
    def zero(cls, field, arity, prec=None):
        return cls(field, arity, {}, prec, clean=True)

    @classmethod
    def const(cls, field, arity, c, prec=None):
        return cls(field, arity, {(0,) * arity: c}, prec)

    @classmethod
    def var(cls, field, arity, index, prec=None):
        e = [0] * arity
        e[index] = 1
        return cls(field, arity, {tuple(e): 1}, prec)

    @classmethod
    def monomial(cls, field, exps, c=1, prec=None):
        return cls(field, len(exps), {tuple(exps): c}, prec)

    def with_prec(self, prec):
        """Truncate to ``prec`` (only ever lowers precision)."""
        prec = _minprec(self.prec, prec)
        if prec == self.prec:
            return self
        return self._trunc(prec)

    def _trunc(self, prec):
        out = MultiSeries(self.field, self.arity, None, prec)
        out.terms = {e: c for e, c in self.terms.items() if sum(e) <= prec}
        return out

    def exact(self) -> "MultiSeries":
        """Reinterpret the stored terms as an exact polynomial."""
        out = MultiSeries(self.field, self.arity, None, None)
        out.terms = dict(self.terms)
        return out

    # predicates and basic queries

    @property
    def is_exact(self):
        return self.prec is None

    def is_zero(self):
        """True/False for exact series; for truncated ones, zero *at precision*."""
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, MultiSeries):
            return (self.field == other.field and self.arity == other.arity
                    and self.prec == other.prec and self.terms == other.terms)
        if isinstance(other, (int, Fraction)):
            return self == MultiSeries.const(self.field, self.arity, other, self.prec)
        return NotImplemented

    def __hash__(self):
        return hash((self.field, self.arity, self.prec, frozenset(self.terms.items())))

    def agrees(self, other: "MultiSeries", degree: int | None = None) -> bool:
        """Term-by-term equality through ``degree`` (default: the shared precision)."""
        d = _minprec(_minprec(self.prec, other.prec), degree)
        a = self.terms if d is None else {e: c for e, c in self.terms.items() if sum(e) <= d}
        b = other.terms if d is None else {e: c for e, c in other.terms.items() if sum(e) <= d}
        return a == b

    def order(self):
        if not self.terms:
            return INFINITE if self.prec is None else AtLeast(self.prec + 1)
        return min(sum(e) for e in self.terms)

    def total_degree(self):
        return max((sum(e) for e in self.terms), default=-1)

    def degree_in(self, var: int) -> int:
        return max((e[var] for e in self.terms), default=-1)

    def initial_form(self) -> "MultiSeries":
        if not self.terms:
            raise ZeroSeries("initial form of a zero series")
        d = self.order()
        return MultiSeries(self.field, self.arity, {e: c for e, c in self.terms.items() if sum(e) == d},
                           clean=True)

    def coeff(self, exps) -> int | Fraction:
        return self.terms.get(tuple(exps), self.field.zero)

    def constant_term(self):
        return self.terms.get((0,) * self.arity, self.field.zero)

    # arithmetic

    def _coerce(self, other):
        if isinstance(other, MultiSeries):
            if other.field != self.field:
                raise FieldMismatch(f"{other.field} vs {self.field}")
            if other.arity != self.arity:
                raise ArityMismatch(f"{other.arity} vs {self.arity}")
            return other
        if isinstance(other, (int, Fraction)):
            return MultiSeries.const(self.field, self.arity, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        f = self.field
        prec = _minprec(self.prec, other.prec)
        terms = dict(self.terms)
        for e, c in other.terms.items():
            v = f.add(terms.get(e, f.zero), c)
            if v:
                terms[e] = v
            else:
                terms.pop(e, None)
        out = MultiSeries(f, self.arity, None, prec)
        out.terms = terms if prec is None else {e: c for e, c in terms.items() if sum(e) <= prec}
        return out

    __radd__ = __add__

    def __neg__(self):
        f = self.field
        out = MultiSeries(f, self.arity, None, self.prec)
        out.terms = {e: f.neg(c) for e, c in self.terms.items()}
        return out

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other + (-self)

    def scale(self, c) -> "MultiSeries":
        f = self.field
        c = f(c)
        out = MultiSeries(f, self.arity, None, self.prec)
        out.terms = {e: f.mul(v, c) for e, v in self.terms.items()} if c else {}
        return out

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        f = self.field
        p = f.characteristic
        # a zero factor at precision D contributes only terms of degree > D + ord(other)
        prec = None
        if self.prec is not None:
            o = other.order()
            prec = self.prec + (o if o != INFINITE else 0)
        if other.prec is not None:
            o = self.order()
            prec = _minprec(prec, other.prec + (o if o != INFINITE else 0))
        terms: dict = {}
        get = terms.get
        n = self.arity
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = tuple(e1[i] + e2[i] for i in range(n)) if n != 2 else (e1[0] + e2[0], e1[1] + e2[1])
                if prec is not None and sum(e) > prec:
                    continue
                terms[e] = get(e, 0) + c1 * c2
        if p:
            terms = {e: c % p for e, c in terms.items() if c % p}
        else:
            terms = {e: c for e, c in terms.items() if c}
        out = MultiSeries(f, n, None, prec)
        out.terms = terms
        return out

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        result = MultiSeries.const(self.field, self.arity, 1)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    # structure

    def split_last(self) -> dict[int, "MultiSeries"]:
        """Coefficients with respect to the last variable, as series in the others."""
        parts: dict[int, dict] = {}
        for e, c in self.terms.items():
            parts.setdefault(e[-1], {})[e[:-1]] = c
        out = {}
        for k, t in parts.items():
            prec = None if self.prec is None else self.prec - k
            s = MultiSeries(self.field, self.arity - 1, None, prec)
            s.terms = t
            out[k] = s
        return out

    def lift(self, power: int = 0) -> "MultiSeries":
        """Embed into one more variable, multiplied by that variable to ``power``."""
        out = MultiSeries(self.field, self.arity + 1, None,
                          None if self.prec is None else self.prec + power)
        out.terms = {e + (power,): c for e, c in self.terms.items()}
        return out

    def permute(self, order: Sequence[int]) -> "MultiSeries":
        """Rename variables: new variable i is old variable ``order[i]``."""
        out = MultiSeries(self.field, self.arity, None, self.prec)
        out.terms = {tuple(e[j] for j in order): c for e, c in self.terms.items()}
        return out

    def hasse(self, orders: Sequence[int]) -> "MultiSeries":
        """Hasse derivative: exact in every characteristic."""
        f = self.field
        terms = {}
        for e, c in self.terms.items():
            if any(e[i] < orders[i] for i in range(self.arity)):
                continue
            m = 1
            for i in range(self.arity):
                m *= comb(e[i], orders[i])
            v = f.mul(c, f.from_int(m))
            if v:
                terms[tuple(e[i] - orders[i] for i in range(self.arity))] = v
        prec = None if self.prec is None else self.prec - sum(orders)
        out = MultiSeries(f, self.arity, None, prec)
        out.terms = terms
        return out

    def divide_by_monomial(self, exps) -> "MultiSeries | None":
        """Exact division by a monomial, or None if some term is not divisible."""
        terms = {}
        for e, c in self.terms.items():
            q = tuple(a - b for a, b in zip(e, exps))
            if min(q) < 0:
                return None
            terms[q] = c
        prec = None if self.prec is None else self.prec - sum(exps)
        out = MultiSeries(self.field, self.arity, None, prec)
        out.terms = terms
        return out

    def max_power_dividing(self, var: int) -> int:
        """Largest k with var^k dividing every stored term."""
        return min((e[var] for e in self.terms), default=0)

    def leading_term(self):
        """Lex-largest term (variables ordered X > Y > Z)."""
        e = max(self.terms)
        return e, self.terms[e]

    def inverse(self, prec: int) -> "MultiSeries":
        """Multiplicative inverse of a unit, truncated at ``prec``."""
        f = self.field
        c0 = self.constant_term()
        if not c0:
            raise NotInvertible("series without constant term is not a unit")
        prec = _minprec(self.prec, prec)
        inv0 = f.inv(c0)
        # x_{k+1} = x_k (2 - s x_k) doubles the number of correct degrees
        x = MultiSeries.const(f, self.arity, inv0, 0)
        d = 0
        while d < prec:
            d = min(2 * d + 1, prec)
            s = self.with_prec(d)
            x = x._trunc(d) if x.prec is not None and x.prec > d else MultiSeries(f, self.arity, x.terms, d)
            x = (x * (2 - s * x)).with_prec(d)
        return x.with_prec(prec)

    # printing

    def to_str(self, names: Sequence[str] | None = None) -> str:
        names = names or VARNAMES.get(self.arity, tuple(f"V{i}" for i in range(self.arity)))
        if not self.terms:
            s = "0"
        else:
            pieces = []
            for e in sorted(self.terms, key=lambda e: (-sum(e), tuple(-x for x in e))):
                c = self.terms[e]
                mono = "*".join(n if k == 1 else f"{n}^{k}" for n, k in zip(names, e) if k)
                neg = self.field.characteristic == 0 and c < 0
                a = -c if neg else c
                if mono:
                    body = mono if a == 1 else f"{_fmt(a)}*{mono}"
                else:
                    body = _fmt(a)
                pieces.append(("- " if neg else "+ ") + body)
            s = " ".join(pieces)
            s = s[2:] if s.startswith("+ ") else "-" + s[2:]
        if self.prec is not None:
            s += f" + O({self.prec + 1})"
        return s

    def __str__(self):
        return self.to_str()

    def __repr__(self):
        return f"MultiSeries({self.field}, {self.to_str()})"


def _fmt(c) -> str:
    if isinstance(c, Fraction):
        return str(c.numerator) if c.denominator == 1 else f"({c.numerator}/{c.denominator})"
    return str(c)


# named operations


def order(f: MultiSeries):
    return f.order()


def initial_form(f: MultiSeries) -> MultiSeries:
    return f.initial_form()


def arith(op: str, f: MultiSeries, g) -> MultiSeries:
    if op == "add":
        return f + g
    if op == "mul":
        return f * g
    if op == "scalar_mul":
        return f.scale(g)
    if op == "pow":
        return f ** g
    raise ValueError(f"unknown op {op!r}")


def substitute(f: MultiSeries, images: Sequence[MultiSeries], allow_units: bool = False) -> MultiSeries:
    """Compose: replace variable i of ``f`` by ``images[i]``.

    Images must have order >= 1 unless ``f`` is an exact polynomial and
    ``allow_units`` is set (plain polynomial evaluation).
    """
    if len(images) != f.arity:
        raise ArityMismatch(f"{len(images)} images for arity {f.arity}")
    arity = images[0].arity
    field = f.field
    if not allow_units or f.prec is not None:
        for im in images:
            if im.constant_term():
                raise OrderViolation("substitution image has a nonzero constant term")
    prec = f.prec
    for im in images:
        prec = _minprec(prec, im.prec)
    # a truncated image spoils nothing below its precision since every image has order >= 1
    powers: list[dict[int, MultiSeries]] = [dict() for _ in images]

    def power(i, k):
        cache = powers[i]
        if k not in cache:
            if k == 0:
                cache[k] = MultiSeries.const(field, arity, 1)
            elif k == 1:
                cache[k] = images[i].with_prec(prec)
            else:
                h = k // 2
                cache[k] = (power(i, h) * power(i, k - h)).with_prec(prec)
        return cache[k]

    acc: dict = {}
    p = field.characteristic
    for e, c in f.terms.items():
        term = None
        for i, k in enumerate(e):
            if k:
                term = power(i, k) if term is None else (term * power(i, k)).with_prec(prec)
        if term is None:
            term = MultiSeries.const(field, arity, 1)
        for te, tc in term.terms.items():
            if prec is not None and sum(te) > prec:
                continue
            acc[te] = acc.get(te, 0) + c * tc
    if p:
        acc = {e: v % p for e, v in acc.items() if v % p}
    else:
        acc = {e: v for e, v in acc.items() if v}
    out = MultiSeries(field, arity, None, prec)
    out.terms = acc
    return out


# Weierstrass preparation and division in the last variable


def _split_at(g: MultiSeries, n: int):
    """g = v^n * q + r with deg_v r < n (v the last variable)."""
    q, r = {}, {}
    for e, c in g.terms.items():
        if e[-1] >= n:
            q[e[:-1] + (e[-1] - n,)] = c
        else:
            r[e] = c
    qs = MultiSeries(g.field, g.arity, None, None if g.prec is None else g.prec - n)
    qs.terms = q
    rs = MultiSeries(g.field, g.arity, None, g.prec)
    rs.terms = r
    return qs, rs


def _regular_order(f: MultiSeries) -> int:
    """n such that f is v-regular of order n = ord(f) (v the last variable)."""
    if not f.terms:
        raise NotZRegular("zero series")
    n = f.order()
    pure = (0,) * (f.arity - 1) + (n,)
    if not f.coeff(pure):
        raise NotZRegular(f"initial form lacks the pure power of degree {n} in the last variable")
    return n


def _monic_poly_degree(P: MultiSeries):
    """Degree in the last variable if P is an exact polynomial monic in it, else None."""
    if P.prec is not None:
        return None
    parts = P.split_last()
    top = max(parts)
    lead = parts[top]
    if lead.terms == {(0,) * (P.arity - 1): P.field.one}:
        return top
    return None


def weierstrass_divide(g: MultiSeries, P: MultiSeries, D: int = DEFAULT_DEGREE):
    """Return (q, r) with g = q P + r and deg r < n in the last variable.

    ``P`` must be regular of order ``n = ord(P)`` in the last variable.
    When g is an exact polynomial and P is monic in the last variable this
    is Euclidean division and exact; otherwise the result is correct
    through total degree D (or the input precision, if lower).
    """
    mdeg = _monic_poly_degree(P)
    if g.prec is None and mdeg is not None:
        return _euclid(g, P, mdeg)
    n = _regular_order(P)
    prec = _minprec(_minprec(g.prec, P.prec), D)
    field = g.field
    Pv = P.with_prec(prec)
    e_part, p_part = _split_at(Pv, n)
    e_inv = e_part.inverse(prec)
    pe = (p_part * e_inv).with_prec(prec)
    Q = MultiSeries.zero(field, g.arity, prec)
    R = MultiSeries.zero(field, g.arity, prec)
    cur = g.with_prec(prec)
    for _ in range(prec + 2):
        if not cur.terms:
            break
        qi, ri = _split_at(cur, n)
        qi = qi.with_prec(prec)
        Q = Q + qi
        R = R + ri
        cur = -(qi * pe).with_prec(prec)
    Q = (Q * e_inv).with_prec(prec)
    return Q, R


def _euclid(g: MultiSeries, P: MultiSeries, n: int):
    field = g.field
    Pparts = P.split_last()
    rem = dict(g.terms)
    q = {}
    while True:
        top = max((e[-1] for e in rem), default=-1)
        if top < n:
            break
        lead = {e[:-1]: c for e, c in rem.items() if e[-1] == top}
        shift = top - n
        for e, c in lead.items():
            q[e + (shift,)] = field.add(q.get(e + (shift,), field.zero), c)
        for k, coef in Pparts.items():
            for e1, c1 in lead.items():
                for e2, c2 in coef.terms.items():
                    ee = tuple(a + b for a, b in zip(e1, e2)) + (k + shift,)
                    v = field.sub(rem.get(ee, field.zero), field.mul(c1, c2))
                    if v:
                        rem[ee] = v
                    else:
                        rem.pop(ee, None)
    Q = MultiSeries(field, g.arity, {e: c for e, c in q.items() if c}, clean=True)
    R = MultiSeries(field, g.arity, rem, clean=True)
    return Q, R


def weierstrass_prepare(f: MultiSeries, D: int = DEFAULT_DEGREE):
    """Return (unit, distinguished) with unit * distinguished = f through degree D."""
    n = _regular_order(f)
    mdeg = _monic_poly_degree(f)
    if mdeg == n:
        return MultiSeries.const(f.field, f.arity, 1), f
    # exact polynomial of degree n in the last variable with constant leading coefficient
    if f.prec is None and f.degree_in(f.arity - 1) == n:
        lead = f.split_last()[n]
        if len(lead.terms) == 1 and (0,) * (f.arity - 1) in lead.terms:
            c = lead.terms[(0,) * (f.arity - 1)]
            return MultiSeries.const(f.field, f.arity, c), f.scale(f.field.inv(c))
    prec = _minprec(f.prec, D)
    vn = MultiSeries.monomial(f.field, (0,) * (f.arity - 1) + (n,), 1, prec)
    q, r = weierstrass_divide(vn, f, prec)
    unit = q.inverse(prec)
    return unit, (vn - r).with_prec(prec)


# exact divisibility


def divide_exact(h: MultiSeries, a: MultiSeries) -> MultiSeries | None:
    """q with h*q == a for exact polynomials, or None if h does not divide a."""
    if h.prec is not None or a.prec is not None:
        raise RingError("divide_exact needs exact inputs; use divides() for truncated data")
    if not a.terms:
        return MultiSeries.zero(a.field, a.arity)
    if not h.terms:
        raise ZeroDivisionError("division by the zero series")
    f = a.field
    he, hc = h.leading_term()
    hinv = f.inv(hc)
    hterms = list(h.terms.items())
    rem = dict(a.terms)
    q = {}
    while rem:
        e = max(rem)
        c = rem[e]
        d = tuple(x - y for x, y in zip(e, he))
        if min(d) < 0:
            return None
        m = f.mul(c, hinv)
        q[d] = m
        for e2, c2 in hterms:
            ee = tuple(x + y for x, y in zip(d, e2))
            v = f.sub(rem.get(ee, f.zero), f.mul(m, c2))
            if v:
                rem[ee] = v
            else:
                rem.pop(ee, None)
    return MultiSeries(f, a.arity, q, clean=True)


def divides(h: MultiSeries, a: MultiSeries) -> bool | None:
    """Does h divide a in the power series ring?  None means unknown at precision.

    For exact inputs with ``h`` a polynomial vanishing at the origin this is
    exact polynomial division (valid whenever h is irreducible, which is
    how callers use it).  With truncated data a certified nonzero
    Weierstrass remainder gives False; otherwise the answer is None.
    """
    if not a.terms and a.prec is None:
        return True
    if h.prec is None and a.prec is None:
        return divide_exact(h, a) is not None
    if h.constant_term():
        return True
    m = h.order()
    for var in reversed(range(h.arity)):
        order = list(range(h.arity))
        order[var], order[-1] = order[-1], order[var]
        hp = h.permute(order)
        pure = (0,) * (h.arity - 1) + (m,)
        if not hp.coeff(pure):
            continue
        prec = _minprec(h.prec, a.prec)
        _, r = weierstrass_divide(a.permute(order), hp, prec)
        if r.terms:
            return False
        return None
    return None


# gcd and square-free decomposition (gcd arithmetic delegated to sympy)


def _to_sympy(f: MultiSeries):
    from sympy import Poly, symbols

    gens = symbols(" ".join(VARNAMES.get(f.arity, ("X", "Y", "Z"))[: f.arity]))
    if f.arity == 1:
        gens = (gens,)
    p = f.field.characteristic
    rep = {e: (int(c) if p else c) for e, c in f.terms.items()} or {(0,) * f.arity: 0}
    if p:
        return Poly.from_dict(rep, *gens, modulus=p)
    from sympy import QQ as SQQ

    return Poly.from_dict({e: SQQ(c.numerator, c.denominator) for e, c in rep.items()}, *gens, domain=SQQ)


def _from_sympy(poly, field: FieldSpec, arity: int) -> MultiSeries:
    terms = {}
    for e, c in poly.terms():
        if field.characteristic:
            terms[e] = int(c) % field.characteristic
        else:
            terms[e] = Fraction(int(c.numerator), int(c.denominator))
    return MultiSeries(field, arity, terms)


def gcd(f: MultiSeries, g: MultiSeries) -> MultiSeries:
    if not f.terms:
        return normalize_monic(g)
    if not g.terms:
        return normalize_monic(f)
    return normalize_monic(_from_sympy(_to_sympy(f).gcd(_to_sympy(g)), f.field, f.arity))


def normalize_monic(f: MultiSeries) -> MultiSeries:
    """Scale so the lex-leading coefficient (X before Y) is 1."""
    if not f.terms:
        return f
    _, c = f.leading_term()
    return f.scale(f.field.inv(c))


def _pth_root(f: MultiSeries) -> MultiSeries:
    p = f.field.characteristic
    return MultiSeries(f.field, f.arity, {tuple(x // p for x in e): f.field.nth_root(c, p)
                                          for e, c in f.terms.items()})


def _is_const(f: MultiSeries) -> bool:
    return all(sum(e) == 0 for e in f.terms)


def _sqf_core(f: MultiSeries) -> list[tuple[MultiSeries, int]]:
    """Musser's algorithm using all partial derivatives, plus p-th roots."""
    if _is_const(f):
        return []
    field = f.field
    partials = [f.hasse(tuple(1 if i == j else 0 for i in range(f.arity))) for j in range(f.arity)]
    if all(not d.terms for d in partials):
        return [(q, m * field.characteristic) for q, m in _sqf_core(_pth_root(f))]
    c = f
    for d in partials:
        c = gcd(c, d)
    w = divide_exact(c, f)
    out = []
    i = 1
    while not _is_const(w):
        y = gcd(w, c)
        z = divide_exact(y, w)
        if not _is_const(z):
            out.append((normalize_monic(z), i))
        i += 1
        w = y
        c = divide_exact(y, c)
    if not _is_const(c):
        out.extend((q, m * field.characteristic) for q, m in _sqf_core(_pth_root(c)))
    return out


def squarefree_decompose(a: MultiSeries) -> list[tuple[MultiSeries, int]]:
    """Square-free factors with multiplicities; content in X split off first.

    The product of ``factor**m`` equals ``a`` up to a nonzero constant.
    """
    if a.prec is not None:
        raise RingError("square-free decomposition needs an exact polynomial")
    if not a.terms:
        raise ZeroSeries("square-free decomposition of zero")
    if a.arity != 2:
        return _sqf_core(a)
    field = a.field
    # content with respect to Y: gcd of the Y-coefficients, a polynomial in X
    by_y: dict[int, dict] = {}
    for (i, j), c in a.terms.items():
        by_y.setdefault(j, {})[(i, 0)] = c
    content = None
    for t in by_y.values():
        s = MultiSeries(field, 2, t, clean=True)
        content = s if content is None else gcd(content, s)
    content = normalize_monic(content)
    prim = divide_exact(content, a)
    return _sqf_core(content) + _sqf_core(prim)


# variable changes


@dataclass(frozen=True)
class VariableChange:
    """An automorphism f -> f(images) of the formal power series ring."""

    images: tuple

    def __post_init__(self):
        object.__setattr__(self, "images", tuple(self.images))
        for im in self.images:
            if im.constant_term():
                raise OrderViolation("variable change image with a constant term")

    @classmethod
    def identity(cls, field, arity):
        return cls(tuple(MultiSeries.var(field, arity, i) for i in range(arity)))

    @property
    def field(self):
        return self.images[0].field

    @property
    def arity(self):
        return len(self.images)

    @property
    def prec(self):
        p = None
        for im in self.images:
            p = _minprec(p, im.prec)
        return p

    def linear_part(self):
        f = self.field
        n = self.arity
        return [[im.coeff(tuple(1 if k == j else 0 for k in range(n))) for j in range(n)]
                for im in self.images]

    def apply(self, f: MultiSeries) -> MultiSeries:
        return substitute(f, self.images)

    def is_invertible(self) -> bool:
        return self.field.mat_inverse(self.linear_part()) is not None

    def agrees(self, other: "VariableChange", degree: int | None = None) -> bool:
        return all(a.agrees(b, degree) for a, b in zip(self.images, other.images))


def compose_change(phi: VariableChange, psi: VariableChange) -> VariableChange:
    """The change ``f -> psi(phi(f))``: substitute psi into phi's images."""
    return VariableChange(tuple(substitute(im, psi.images) for im in phi.images))


def invert_change(phi: VariableChange, D: int = DEFAULT_DEGREE) -> VariableChange:
    """psi with compose_change(phi, psi) == identity through degree D."""
    field = phi.field
    n = phi.arity
    A = phi.linear_part()
    Ainv = field.mat_inverse(A)
    if Ainv is None:
        raise NotInvertible("singular linear part")
    prec = _minprec(phi.prec, D)
    xs = [MultiSeries.var(field, n, i) for i in range(n)]
    linear = [sum((xs[j].scale(A[i][j]) for j in range(n)), MultiSeries.zero(field, n)) for i in range(n)]
    nonlin = [(im - lin).with_prec(prec) for im, lin in zip(phi.images, linear)]
    exact = prec is None and all(not nl.terms for nl in nonlin)

    def apply_ainv(vec):
        return [sum((vec[j].scale(Ainv[i][j]) for j in range(n)), MultiSeries.zero(field, n, vec[0].prec))
                for i in range(n)]

    if exact:
        return VariableChange(tuple(apply_ainv(xs)))
    if prec is None:
        prec = D
    psi = [x.with_prec(prec) for x in apply_ainv([x.with_prec(prec) for x in xs])]
    # psi = A^-1 (id - N(psi)); each pass fixes one more degree
    for _ in range(prec):
        npsi = [substitute(nl, psi) for nl in nonlin]
        psi = apply_ainv([(x.with_prec(prec) - v) for x, v in zip(xs, npsi)])
    return VariableChange(tuple(p.with_prec(prec) for p in psi))


def remainder(a: MultiSeries, h: MultiSeries) -> MultiSeries:
    """Normal form of an exact polynomial ``a`` modulo ``h`` (lex division, X > Y > Z)."""
    if not h.terms:
        return a
    f = a.field
    he, hc = h.leading_term()
    hinv = f.inv(hc)
    hterms = list(h.terms.items())
    rem = dict(a.terms)
    out = {}
    while rem:
        e = max(rem)
        c = rem.pop(e)
        d = tuple(x - y for x, y in zip(e, he))
        if min(d) < 0:
            out[e] = c
            continue
        m = f.mul(c, hinv)
        for e2, c2 in hterms:
            ee = tuple(x + y for x, y in zip(d, e2))
            if ee == e:
                continue
            v = f.sub(rem.get(ee, f.zero), f.mul(m, c2))
            if v:
                rem[ee] = v
            else:
                rem.pop(ee, None)
    return MultiSeries(f, a.arity, out, clean=True)


def factor_rational(f: MultiSeries) -> list[tuple[MultiSeries, int]]:
    """Irreducible factors over Q (delegated to sympy), each made monic."""
    if f.field.characteristic:
        raise RingError("multivariate factorization is only available over Q")
    _, facs = _to_sympy(f).factor_list()
    return [(normalize_monic(_from_sympy(p, f.field, f.arity)), m) for p, m in facs]
