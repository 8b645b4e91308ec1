"""Exact arithmetic for series in q with rational exponents.

A QSeries is a finite collection of (exponent, coefficient) pairs with
arbitrary-precision rational coefficients.  Exponents are rationals whose
denominator must divide a per-series limit D, which is fixed when the series
is built; trying to insert a finer exponent raises, which catches formula
bugs early.  Truncation is an exclusive exponent bound: terms at or above it
are dropped, and arithmetic propagates the minimum of the operand bounds.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Union

Exponent = Union[Fraction, int]

__all__ = [
    "Exponent",
    "QSeries",
    "qs_add",
    "qs_mul",
    "qs_neg",
    "qs_scale",
    "qs_shift",
    "qs_pochhammer",
    "qs_qbinomial",
    "qs_flip",
    "qs_eval",
    "qs_to_json",
    "qs_from_json",
]


def _check_exponent(e: Fraction, denom: int) -> Fraction:
    if denom % e.denominator != 0:
        raise ValueError(
            f"exponent {e} has denominator {e.denominator}, "
            f"not a divisor of the series limit {denom}"
        )
    return e


def _min_trunc(a: Fraction | None, b: Fraction | None) -> Fraction | None:
    if a is None:
        return b
    if b is None:
        return a
    return min(a, b)


@dataclass(frozen=True)
class QSeries:
    """Immutable exact series in q.

    terms holds (exponent, coefficient) pairs sorted by exponent with no
    zero coefficients.  trunc, when set, is an exclusive upper bound on
    stored exponents.  denom is the exponent-denominator limit D.
    """

    terms: tuple[tuple[Fraction, Fraction], ...]
    denom: int = 1
    trunc: Fraction | None = None

    @staticmethod
    def from_terms(
        terms: Mapping[Exponent, object] | Iterable[tuple[Exponent, object]],
        denom: int = 1,
        trunc: Exponent | None = None,
    ) -> "QSeries":
        if isinstance(terms, Mapping):
            items = terms.items()
        else:
            items = terms
        tb = None if trunc is None else Fraction(trunc)
        acc: dict[Fraction, Fraction] = {}
        for e, c in items:
            ef = _check_exponent(Fraction(e), denom)
            acc[ef] = acc.get(ef, Fraction(0)) + Fraction(c)
        kept = tuple(
            sorted((e, c) for e, c in acc.items() if c != 0 and (tb is None or e < tb))
        )
        return QSeries(kept, denom, tb)

    @staticmethod
    def zero(denom: int = 1, trunc: Exponent | None = None) -> "QSeries":
        return QSeries.from_terms({}, denom, trunc)

    @staticmethod
    def one(denom: int = 1, trunc: Exponent | None = None) -> "QSeries":
        return QSeries.from_terms({Fraction(0): 1}, denom, trunc)

    @staticmethod
    def monomial(
        exponent: Exponent,
        coeff: object = 1,
        denom: int | None = None,
        trunc: Exponent | None = None,
    ) -> "QSeries":
        e = Fraction(exponent)
        d = e.denominator if denom is None else denom
        return QSeries.from_terms({e: coeff}, d, trunc)

    def coeff(self, exponent: Exponent) -> Fraction:
        e = Fraction(exponent)
        for ex, c in self.terms:
            if ex == e:
                return c
        return Fraction(0)

    def is_zero(self) -> bool:
        return not self.terms

    def min_exponent(self) -> Fraction:
        if not self.terms:
            raise ValueError("zero series has no minimal exponent")
        return self.terms[0][0]

    def with_trunc(self, trunc: Exponent | None) -> "QSeries":
        return QSeries.from_terms(self.terms, self.denom, trunc)

    def with_denom(self, denom: int) -> "QSeries":
        return QSeries.from_terms(self.terms, denom, self.trunc)

    def __add__(self, other: "QSeries") -> "QSeries":
        return qs_add(self, other)

    def __sub__(self, other: "QSeries") -> "QSeries":
        return qs_add(self, qs_neg(other))

    def __mul__(self, other: "QSeries") -> "QSeries":
        return qs_mul(self, other)

    def __neg__(self) -> "QSeries":
        return qs_neg(self)

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.terms:
            if e == 0:
                parts.append(str(c))
            elif c == 1:
                parts.append(f"q^({e})")
            else:
                parts.append(f"{c}*q^({e})")
        return " + ".join(parts).replace("+ -", "- ")


def qs_add(a: QSeries, b: QSeries) -> QSeries:
    """Termwise sum; denominator limits are merged via lcm."""
    denom = math.lcm(a.denom, b.denom)
    acc = dict(a.terms)
    for e, c in b.terms:
        acc[e] = acc.get(e, Fraction(0)) + c
    return QSeries.from_terms(acc, denom, _min_trunc(a.trunc, b.trunc))


def qs_neg(a: QSeries) -> QSeries:
    return QSeries(tuple((e, -c) for e, c in a.terms), a.denom, a.trunc)


def qs_scale(a: QSeries, factor: object) -> QSeries:
    f = Fraction(factor)
    if f == 0:
        return QSeries((), a.denom, a.trunc)
    return QSeries(tuple((e, c * f) for e, c in a.terms), a.denom, a.trunc)


def qs_shift(a: QSeries, offset: Exponent) -> QSeries:
    """Multiply by the monomial q^offset."""
    off = Fraction(offset)
    denom = math.lcm(a.denom, off.denominator)
    trunc = None if a.trunc is None else a.trunc + off
    return QSeries.from_terms(
        [(e + off, c) for e, c in a.terms], denom, trunc
    )


def qs_mul(a: QSeries, b: QSeries) -> QSeries:
    """Cauchy product, pruned against the merged truncation bound."""
    denom = math.lcm(a.denom, b.denom)
    trunc = _min_trunc(a.trunc, b.trunc)
    acc: dict[Fraction, Fraction] = {}
    for ea, ca in a.terms:
        for eb, cb in b.terms:
            e = ea + eb
            if trunc is not None and e >= trunc:
                continue
            acc[e] = acc.get(e, Fraction(0)) + ca * cb
    return QSeries.from_terms(acc, denom, trunc)


def qs_pochhammer(
    base_exp: Exponent, step_exp: Exponent, n: int, trunc: Exponent | None = None
) -> QSeries:
    """Finite product prod_{i=0}^{n-1} (1 - q^{base + i*step})."""
    if n < 0:
        raise ValueError("Pochhammer length must be nonnegative")
    base = Fraction(base_exp)
    step = Fraction(step_exp)
    denom = math.lcm(base.denominator, step.denominator)
    out = QSeries.one(denom, trunc)
    for i in range(n):
        factor = QSeries.from_terms(
            {Fraction(0): 1, base + i * step: -1}, denom, trunc
        )
        out = qs_mul(out, factor)
    return out


def qs_qbinomial(r: int, k: int, base: Exponent = 1) -> QSeries:
    """Gaussian binomial coefficient, a polynomial in q^base.

    Uses the Pascal-type recurrence so no polynomial division is needed;
    the base selects the q vs q^2 convention.
    """
    if not 0 <= k <= r:
        raise ValueError(f"need 0 <= k <= r, got r={r}, k={k}")
    b = Fraction(base)
    denom = b.denominator
    # row[j] holds the coefficient polynomial at column j
    row = [QSeries.one(denom)]
    for i in range(1, r + 1):
        new = [QSeries.one(denom)]
        for j in range(1, i):
            shifted = qs_shift(row[j], b * j)
            new.append(qs_add(row[j - 1], shifted))
        new.append(QSeries.one(denom))
        row = new
    return row[k]


def qs_flip(s: QSeries, offset: Exponent = 0) -> QSeries:
    """Apply q -> -q to the part of s past a monomial prefactor.

    Writing s = q^offset * sum a_n q^n with integer n, returns
    q^offset * sum a_n (-q)^n.  Non-integer residual exponents raise.
    """
    off = Fraction(offset)
    acc = {}
    for e, c in s.terms:
        res = e - off
        if res.denominator != 1:
            raise ValueError(
                f"exponent {e} minus offset {off} is not an integer"
            )
        acc[e] = c if res.numerator % 2 == 0 else -c
    return QSeries.from_terms(acc, s.denom, s.trunc)


def qs_eval(s: QSeries, z: complex, max_terms: int | None = None) -> complex:
    """Partial sum of s at q=z, rational powers via the principal branch."""
    total = 0 + 0j
    terms = s.terms if max_terms is None else s.terms[:max_terms]
    for e, c in terms:
        if z == 0:
            if e == 0:
                total += complex(c)
            elif e > 0:
                continue
            else:
                raise ZeroDivisionError("negative power of q at q=0")
            continue
        total += complex(c) * cmath.exp(complex(e) * cmath.log(z))
    return total


def qs_to_json(s: QSeries) -> dict:
    return {
        "denom": s.denom,
        "trunc": None if s.trunc is None else str(s.trunc),
        "terms": [[str(e), str(c)] for e, c in s.terms],
    }


def qs_from_json(obj: dict) -> QSeries:
    trunc = obj.get("trunc")
    return QSeries.from_terms(
        [(Fraction(e), Fraction(c)) for e, c in obj["terms"]],
        denom=int(obj["denom"]),
        trunc=None if trunc is None else Fraction(trunc),
    )
