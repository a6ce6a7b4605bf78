"""Exact truncated multivariate power series.

A :class:`TruncatedSeries` is a sparse map from monomials to coefficients,
truncated at total degree ``cap`` (``cap=None`` means an exact polynomial).
Monomials are tuples of ``(variable, exponent)`` pairs sorted by variable;
integer variables stand for the column weights ``x_i`` and strings for
auxiliary symbols such as ``q`` or ``t``.

Coefficients are normally :class:`fractions.Fraction`, but any numeric type
closed under ``+`` and ``*`` works; the sampler and the correlation oracle
use floats with a single grading variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

import numpy as np


def _vkey(v):
    return (0, v, "") if isinstance(v, int) else (1, 0, str(v))


def _mono_deg(m) -> int:
    return sum(e for _, e in m)


def _mono_mul(a: tuple, b: tuple) -> tuple:
    if not a:
        return b
    if not b:
        return a
    d = dict(a)
    for v, e in b:
        e2 = d.get(v, 0) + e
        if e2:
            d[v] = e2
        else:
            del d[v]
    return tuple(sorted(d.items(), key=lambda t: _vkey(t[0])))


def _var_name(v) -> str:
    return f"x[{v}]" if isinstance(v, int) else str(v)


def format_monomial(m: tuple) -> str:
    return "*".join(_var_name(v) + (f"^{e}" if e != 1 else "") for v, e in m)


class TruncatedSeries:
    __slots__ = ("terms", "cap")

    def __init__(self, terms: dict | None = None, cap: int | None = None):
        self.cap = cap
        self.terms = {}
        if terms:
            for m, c in terms.items():
                if c == 0:
                    continue
                if cap is not None and _mono_deg(m) > cap:
                    continue
                self.terms[m] = c

    # constructors -------------------------------------------------------
    @classmethod
    def const(cls, c, cap: int | None = None) -> "TruncatedSeries":
        return cls({(): c}, cap)

    @classmethod
    def one(cls, cap: int | None = None) -> "TruncatedSeries":
        return cls.const(Fraction(1), cap)

    @classmethod
    def var(cls, v, cap: int | None = None, coeff=Fraction(1), power: int = 1) -> "TruncatedSeries":
        return cls({((v, power),): coeff} if power else {(): coeff}, cap)

    # helpers ------------------------------------------------------------
    def _coerce(self, other) -> "TruncatedSeries":
        if isinstance(other, TruncatedSeries):
            if other.cap != self.cap:
                raise ValueError(f"degree cap mismatch: {self.cap} vs {other.cap}")
            return other
        return TruncatedSeries.const(other, self.cap)

    def copy(self) -> "TruncatedSeries":
        s = TruncatedSeries(cap=self.cap)
        s.terms = dict(self.terms)
        return s

    def is_zero(self) -> bool:
        return not self.terms

    def mindeg(self) -> int:
        """Smallest total degree present (``cap + 1`` for the zero series)."""
        if not self.terms:
            return (self.cap + 1) if self.cap is not None else 0
        return min(_mono_deg(m) for m in self.terms)

    def maxdeg(self) -> int:
        return max((_mono_deg(m) for m in self.terms), default=0)

    def variables(self) -> set:
        return {v for m in self.terms for v, _ in m}

    def coeff(self, monomial: Iterable = ()) -> object:
        m = tuple(sorted(dict(monomial).items(), key=lambda t: _vkey(t[0])))
        return self.terms.get(m, 0)

    def truncate(self, cap: int | None) -> "TruncatedSeries":
        return TruncatedSeries(self.terms, cap)

    # ring operations ----------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            c2 = out.get(m, 0) + c
            if c2 == 0:
                out.pop(m, None)
            else:
                out[m] = c2
        s = TruncatedSeries(cap=self.cap)
        s.terms = out
        return s

    __radd__ = __add__

    def __neg__(self):
        s = TruncatedSeries(cap=self.cap)
        s.terms = {m: -c for m, c in self.terms.items()}
        return s

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "TruncatedSeries":
        if c == 0:
            return TruncatedSeries(cap=self.cap)
        s = TruncatedSeries(cap=self.cap)
        s.terms = {m: v * c for m, v in self.terms.items()}
        return s

    def __mul__(self, other):
        if not isinstance(other, TruncatedSeries):
            return self.scale(other)
        other = self._coerce(other)
        cap = self.cap
        a, b = self.terms, other.terms
        if len(a) < len(b):
            a, b = b, a
        out: dict = {}
        bdeg = [(m, c, _mono_deg(m)) for m, c in b.items()]
        for m1, c1 in a.items():
            d1 = _mono_deg(m1)
            for m2, c2, d2 in bdeg:
                if cap is not None and d1 + d2 > cap:
                    continue
                m = _mono_mul(m1, m2)
                out[m] = out.get(m, 0) + c1 * c2
        s = TruncatedSeries(cap=cap)
        s.terms = {m: c for m, c in out.items() if c != 0}
        return s

    def __rmul__(self, other):
        return self.scale(other)

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        result = TruncatedSeries.one(self.cap)
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self) -> "TruncatedSeries":
        """Multiplicative inverse, requires an invertible constant term."""
        c0 = self.terms.get((), 0)
        if c0 == 0:
            raise ZeroDivisionError("series without constant term is not invertible")
        if self.cap is None:
            if len(self.terms) == 1:
                return TruncatedSeries.const(1 / c0 if not isinstance(c0, int) else Fraction(1, c0))
            raise ValueError("inverse of a non-constant polynomial needs a degree cap")
        inv0 = Fraction(1) / c0 if isinstance(c0, (int, Fraction)) else 1.0 / c0
        rest = (self.scale(inv0) - 1)  # nilpotent part
        # 1/(1+r) = sum (-r)^k, exact up to the cap since mindeg(r) >= 1
        acc = TruncatedSeries.one(self.cap)
        term = TruncatedSeries.one(self.cap)
        for _ in range(self.cap):
            term = term * (-rest)
            if term.is_zero():
                break
            acc = acc + term
        return acc.scale(inv0)

    def __eq__(self, other):
        if isinstance(other, TruncatedSeries):
            return self.cap == other.cap and self.terms == other.terms
        return self.terms == ({(): other} if other != 0 else {})

    def __hash__(self):
        return hash((self.cap, frozenset(self.terms.items())))

    def evaluate(self, values: dict):
        """Numeric value with ``values[var]`` substituted for every variable."""
        total = 0
        for m, c in self.terms.items():
            t = c
            for v, e in m:
                t = t * values[v] ** e
            total = total + t
        return total

    def sorted_terms(self) -> list:
        return sorted(self.terms.items(),
                      key=lambda t: (_mono_deg(t[0]), [(_vkey(v), -e) for v, e in t[0]]))

    def __str__(self) -> str:
        if not self.terms:
            return "0"
        pieces = []
        for m, c in self.sorted_terms():
            neg = c < 0
            a = -c if neg else c
            mono = format_monomial(m)
            if not mono:
                body = str(a)
            elif a == 1:
                body = mono
            else:
                body = f"{a}*{mono}"
            pieces.append(("- " if neg else "+ ") + body)
        text = " ".join(pieces)
        return text[2:] if text.startswith("+ ") else "-" + text[1:]

    def __repr__(self) -> str:
        return f"TruncatedSeries({self}, cap={self.cap})"


def expand_factor(sign: int, i, j, invert: bool, D: int | None) -> TruncatedSeries:
    """``(1 + sign*x_i*x_j)`` or its inverse, truncated at degree ``D``."""
    if sign not in (1, -1):
        raise ValueError("sign must be +1 or -1")
    pair = TruncatedSeries.var(i, D) * TruncatedSeries.var(j, D)
    if not invert:
        return TruncatedSeries.one(D) + pair.scale(sign)
    if D is None:
        raise ValueError("an inverted factor is an infinite series and needs a cap")
    out = TruncatedSeries.one(D)
    term = TruncatedSeries.one(D)
    for _ in range(D // 2 + 1):
        term = term * pair.scale(-sign)
        if term.is_zero():
            break
        out = out + term
    return out


@dataclass(frozen=True)
class QPower:
    """Substitution value ``coeff * q**exponent`` for :func:`specialize`."""

    exponent: int
    coeff: object = Fraction(1)
    symbol: str = "q"


def specialize(s: TruncatedSeries, assignment: dict, q_cap: int | None = None):
    """Substitute values for variables.

    Values may be numbers, :class:`QPower` markers or other series. Variables
    that are absent from ``assignment`` are kept. The result is a plain number
    when no variable survives, otherwise a series with cap ``q_cap`` (for
    q-specializations) or the input cap.
    """
    out: dict = {}
    has_series = False
    for m, c in s.terms.items():
        coeff = c
        kept = []
        qexp = {}
        for v, e in m:
            if v not in assignment:
                kept.append((v, e))
                continue
            val = assignment[v]
            if isinstance(val, QPower):
                qexp[val.symbol] = qexp.get(val.symbol, 0) + val.exponent * e
                coeff = coeff * val.coeff ** e
            elif isinstance(val, TruncatedSeries):
                has_series = True
                coeff = (val ** e) * coeff
            else:
                coeff = coeff * val ** e
        mono = tuple(sorted(kept + [(k, e) for k, e in qexp.items() if e],
                            key=lambda t: _vkey(t[0])))
        if isinstance(coeff, TruncatedSeries):
            for m2, c2 in coeff.terms.items():
                mm = _mono_mul(mono, m2)
                out[mm] = out.get(mm, 0) + c2
        elif coeff != 0:
            out[mono] = out.get(mono, 0) + coeff
    out = {m: c for m, c in out.items() if c != 0}
    if not has_series and all(m == () for m in out):
        return out.get((), Fraction(0))
    cap = q_cap if any(isinstance(v, QPower) for v in assignment.values()) else s.cap
    return TruncatedSeries(out, cap)


class LaurentSeries:
    """Numeric Laurent polynomial ``sum_j coeffs[j] * z**(offset + j)``.

    Used for coefficient extraction in the correlation kernel; products are
    clipped to the exponent window ``[lo, hi]`` when one is given.
    """

    __slots__ = ("offset", "coeffs")

    def __init__(self, offset: int, coeffs):
        self.offset = int(offset)
        self.coeffs = np.asarray(coeffs, dtype=float)

    @classmethod
    def one(cls) -> "LaurentSeries":
        return cls(0, [1.0])

    @property
    def lo(self) -> int:
        return self.offset

    @property
    def hi(self) -> int:
        return self.offset + len(self.coeffs) - 1

    def __getitem__(self, k: int) -> float:
        j = k - self.offset
        if 0 <= j < len(self.coeffs):
            return float(self.coeffs[j])
        return 0.0

    def mul(self, other: "LaurentSeries", lo: int | None = None, hi: int | None = None) -> "LaurentSeries":
        c = np.convolve(self.coeffs, other.coeffs)
        off = self.offset + other.offset
        return LaurentSeries(off, c).clip(lo, hi)

    def clip(self, lo: int | None, hi: int | None) -> "LaurentSeries":
        start = 0 if lo is None else max(0, lo - self.offset)
        stop = len(self.coeffs) if hi is None else max(start, min(len(self.coeffs), hi - self.offset + 1))
        return LaurentSeries(self.offset + start, self.coeffs[start:stop])
