"""Exact coefficient arithmetic over Q and prime fields GF(p).

Series and polynomials store raw coefficient values for speed: a
``fractions.Fraction`` in characteristic 0 and a reduced ``int`` in
characteristic p.  :class:`FieldSpec` owns every operation on those raw
values; :class:`Scalar` is the public, self-describing wrapper.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd
from typing import Iterator, Sequence

from sympy import integer_nthroot, isprime


class FieldError(ValueError):
    """Base class for coefficient-level errors."""


class DivisionByZero(FieldError, ZeroDivisionError):
    pass


class FieldMismatch(FieldError):
    pass


@dataclass(frozen=True)
class FieldSpec:
    """Q when ``characteristic == 0``, otherwise GF(characteristic)."""

    characteristic: int

    def __post_init__(self):
        c = self.characteristic
        if not isinstance(c, int) or c < 0 or (c != 0 and not isprime(c)):
            raise FieldError(f"characteristic must be 0 or a prime, got {c!r}")

    @classmethod
    def parse(cls, text: str) -> "FieldSpec":
        """Parse ``QQ`` / ``Q`` or ``GF:p`` / ``GF(p)``."""
        t = text.strip().upper()
        if t in ("QQ", "Q"):
            return cls(0)
        for prefix in ("GF:", "GF(", "GF"):
            if t.startswith(prefix):
                body = t[len(prefix):].rstrip(")")
                try:
                    return cls(int(body))
                except ValueError:
                    break
        raise FieldError(f"unknown field {text!r}; expected QQ or GF:p")

    @property
    def p(self) -> int:
        return self.characteristic

    @property
    def is_finite(self) -> bool:
        return self.characteristic != 0

    def __str__(self):
        return "QQ" if self.characteristic == 0 else f"GF:{self.characteristic}"

    # raw value operations

    def __call__(self, v) -> int | Fraction:
        """Coerce an int, Fraction or ``"p/q"`` string into a raw value."""
        if isinstance(v, Scalar):
            self._check(v.field)
            return v.value
        if isinstance(v, str):
            v = Fraction(v)
        p = self.characteristic
        if p == 0:
            return Fraction(v)
        if isinstance(v, Fraction):
            if v.denominator % p == 0:
                raise DivisionByZero(f"{v} has no image in GF({p})")
            return v.numerator * pow(v.denominator, -1, p) % p
        return int(v) % p

    @property
    def zero(self):
        return Fraction(0) if self.characteristic == 0 else 0

    @property
    def one(self):
        return Fraction(1) if self.characteristic == 0 else 1

    def add(self, a, b):
        p = self.characteristic
        return a + b if p == 0 else (a + b) % p

    def sub(self, a, b):
        p = self.characteristic
        return a - b if p == 0 else (a - b) % p

    def neg(self, a):
        p = self.characteristic
        return -a if p == 0 else (-a) % p

    def mul(self, a, b):
        p = self.characteristic
        return a * b if p == 0 else (a * b) % p

    def inv(self, a):
        if not a:
            raise DivisionByZero("inverse of zero")
        p = self.characteristic
        return 1 / Fraction(a) if p == 0 else pow(a, -1, p)

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e: int):
        p = self.characteristic
        if e < 0:
            a, e = self.inv(a), -e
        return a ** e if p == 0 else pow(a, e, p)

    def from_int(self, k: int):
        p = self.characteristic
        return Fraction(k) if p == 0 else k % p

    def elements(self) -> Iterator:
        """All elements of GF(p), smallest representative first."""
        if self.characteristic == 0:
            raise FieldError("Q is not enumerable")
        return iter(range(self.characteristic))

    def nth_root(self, a, m: int):
        """An ``r`` with ``r**m == a`` in this field, or None if there is none."""
        if m < 1:
            raise ValueError("root index must be positive")
        p = self.characteristic
        if p == 0:
            a = Fraction(a)
            if a < 0 and m % 2 == 0:
                return None
            sign = -1 if a < 0 else 1
            num, exact_n = integer_nthroot(abs(a.numerator), m)
            den, exact_d = integer_nthroot(a.denominator, m)
            if not (exact_n and exact_d):
                return None
            return Fraction(sign * num, den)
        a %= p
        if a == 0:
            return 0
        # x -> x^m is a bijection when gcd(m, p-1) == 1; Frobenius is a special case
        if gcd(m, p - 1) == 1:
            return pow(a, pow(m, -1, p - 1), p)
        for r in range(1, p):
            if pow(r, m, p) == a:
                return r
        return None

    def repr_value(self, a) -> str:
        return str(a)

    def _check(self, other: "FieldSpec"):
        if other != self:
            raise FieldMismatch(f"{other} vs {self}")

    # small dense linear algebra over the field

    def solve(self, rows: Sequence[Sequence], rhs: Sequence):
        """One solution of ``rows @ x == rhs`` (free variables set to 0), or None."""
        ncols = len(rows[0]) if rows else 0
        aug = [list(r) + [b] for r, b in zip(rows, rhs)]
        pivots = []
        r = 0
        for c in range(ncols):
            piv = next((i for i in range(r, len(aug)) if aug[i][c]), None)
            if piv is None:
                continue
            aug[r], aug[piv] = aug[piv], aug[r]
            inv = self.inv(aug[r][c])
            aug[r] = [self.mul(v, inv) for v in aug[r]]
            for i in range(len(aug)):
                if i != r and aug[i][c]:
                    f = aug[i][c]
                    aug[i] = [self.sub(v, self.mul(f, w)) for v, w in zip(aug[i], aug[r])]
            pivots.append(c)
            r += 1
        if any(row[-1] for row in aug[r:]):
            return None
        x = [self.zero] * ncols
        for i, c in enumerate(pivots):
            x[c] = aug[i][-1]
        return x

    def mat_inverse(self, m: Sequence[Sequence]):
        """Inverse of a square matrix, or None when it is singular."""
        size = len(m)
        if self._rank(m) < size:
            return None
        cols = []
        for j in range(size):
            e = [self.one if i == j else self.zero for i in range(size)]
            x = self.solve(m, e)
            if x is None:
                return None
            cols.append(x)
        return [[cols[j][i] for j in range(size)] for i in range(size)]

    def _rank(self, m):
        rows = [list(r) for r in m]
        rank = 0
        for c in range(len(rows[0]) if rows else 0):
            piv = next((i for i in range(rank, len(rows)) if rows[i][c]), None)
            if piv is None:
                continue
            rows[rank], rows[piv] = rows[piv], rows[rank]
            for i in range(rank + 1, len(rows)):
                if rows[i][c]:
                    f = self.div(rows[i][c], rows[rank][c])
                    rows[i] = [self.sub(v, self.mul(f, w)) for v, w in zip(rows[i], rows[rank])]
            rank += 1
        return rank


QQ = FieldSpec(0)


def GF(p: int) -> FieldSpec:
    return FieldSpec(p)


@dataclass(frozen=True)
class Scalar:
    """An exact field element tagged with its field."""

    field: FieldSpec
    value: int | Fraction

    def __post_init__(self):
        object.__setattr__(self, "value", self.field(self.value))

    def _other(self, b):
        if isinstance(b, Scalar):
            self.field._check(b.field)
            return b.value
        return self.field(b)

    def __add__(self, b):
        return Scalar(self.field, self.field.add(self.value, self._other(b)))

    __radd__ = __add__

    def __sub__(self, b):
        return Scalar(self.field, self.field.sub(self.value, self._other(b)))

    def __rsub__(self, b):
        return Scalar(self.field, self.field.sub(self._other(b), self.value))

    def __mul__(self, b):
        return Scalar(self.field, self.field.mul(self.value, self._other(b)))

    __rmul__ = __mul__

    def __neg__(self):
        return Scalar(self.field, self.field.neg(self.value))

    def __truediv__(self, b):
        return Scalar(self.field, self.field.div(self.value, self._other(b)))

    def __pow__(self, e: int):
        return Scalar(self.field, self.field.pow(self.value, e))

    def inverse(self) -> "Scalar":
        return Scalar(self.field, self.field.inv(self.value))

    def __bool__(self):
        return bool(self.value)

    def __str__(self):
        return str(self.value)


def scalar_arith(op: str, a: Scalar, b: Scalar | None = None) -> Scalar:
    """Dispatch ``add``, ``mul``, ``neg`` or ``inv`` on scalars of one field."""
    if b is not None and a.field != b.field:
        raise FieldMismatch(f"{a.field} vs {b.field}")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    raise ValueError(f"unknown scalar op {op!r}")


def nth_root(a: Scalar, m: int) -> Scalar | None:
    r = a.field.nth_root(a.value, m)
    return None if r is None else Scalar(a.field, r)
