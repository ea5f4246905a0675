"""Double-double arithmetic built from error-free transformations.

A value is the unevaluated sum ``hi + lo`` of two doubles with
``|lo| <= ulp(hi)/2``, giving roughly 106 bits of significand.  The
functions operating on ``(hi, lo)`` pairs accept floats or numpy arrays
alike; :class:`ExtendedReal` wraps a scalar pair with operator overloads.
"""
from __future__ import annotations

import math

import numpy as np

_SPLITTER = 134217729.0  # 2**27 + 1


def two_sum(a, b):
    s = a + b
    bb = s - a
    err = (a - (s - bb)) + (b - bb)
    return s, err


def quick_two_sum(a, b):
    # requires |a| >= |b|
    s = a + b
    err = b - (s - a)
    return s, err


def _split(a):
    t = _SPLITTER * a
    hi = t - (t - a)
    return hi, a - hi


def two_prod(a, b):
    p = a * b
    ah, al = _split(a)
    bh, bl = _split(b)
    err = ((ah * bh - p) + ah * bl + al * bh) + al * bl
    return p, err


def dd_add(ahi, alo, bhi, blo):
    s, e = two_sum(ahi, bhi)
    t, f = two_sum(alo, blo)
    e = e + t
    s, e = quick_two_sum(s, e)
    e = e + f
    return quick_two_sum(s, e)


def dd_neg(ahi, alo):
    return -ahi, -alo


def dd_sub(ahi, alo, bhi, blo):
    return dd_add(ahi, alo, -bhi, -blo)


def dd_mul(ahi, alo, bhi, blo):
    p, e = two_prod(ahi, bhi)
    e = e + (ahi * blo + alo * bhi)
    return quick_two_sum(p, e)


def dd_mul_d(ahi, alo, b):
    p, e = two_prod(ahi, b)
    e = e + alo * b
    return quick_two_sum(p, e)


def dd_div(ahi, alo, bhi, blo):
    q1 = ahi / bhi
    rhi, rlo = dd_sub(ahi, alo, *dd_mul_d(bhi, blo, q1))
    q2 = rhi / bhi
    rhi, rlo = dd_sub(rhi, rlo, *dd_mul_d(bhi, blo, q2))
    q3 = rhi / bhi
    qhi, qlo = quick_two_sum(q1, q2)
    return dd_add(qhi, qlo, q3, 0.0 * q3)


def dd_sqrt(ahi, alo):
    """Square root by one Newton correction of the double estimate."""
    x = np.sqrt(ahi)
    # guard the zero case so the correction term stays finite
    safe = np.where(x > 0, x, 1.0)
    shi, slo = two_prod(x, x)
    rhi, rlo = dd_sub(ahi, alo, shi, slo)
    corr = np.where(x > 0, rhi / (2.0 * safe), 0.0)
    out = quick_two_sum(x, corr)
    if np.ndim(ahi) == 0:
        return float(out[0]), float(out[1])
    return out


def dd_sum(hi, lo=None):
    """Sum an array of doubles (or of double-double pairs) to double-double.

    Uses a pairwise reduction so the cost is a handful of vector ops per
    halving rather than a Python loop over the elements.
    """
    hi = np.asarray(hi, dtype=float).ravel()
    lo = np.zeros_like(hi) if lo is None else np.asarray(lo, dtype=float).ravel()
    if hi.size == 0:
        return 0.0, 0.0
    while hi.size > 1:
        if hi.size % 2:
            hi = np.append(hi, 0.0)
            lo = np.append(lo, 0.0)
        hi, lo = dd_add(hi[0::2], lo[0::2], hi[1::2], lo[1::2])
    return float(hi[0]), float(lo[0])


def dd_dot(ahi, alo, bhi, blo):
    return dd_sum(*dd_mul(ahi, alo, bhi, blo))


class ExtendedReal:
    """Scalar double-double number.

    >>> x = ExtendedReal(1.0) + 1e-20
    >>> float(x - 1.0)
    1e-20
    """

    __slots__ = ("hi", "lo")

    def __init__(self, hi=0.0, lo=0.0):
        if isinstance(hi, ExtendedReal):
            hi, lo = hi.hi, hi.lo
        h, l = quick_two_sum(float(hi), float(lo)) if abs(hi) >= abs(lo) else two_sum(float(hi), float(lo))
        self.hi = h
        self.lo = l

    @staticmethod
    def _coerce(other):
        if isinstance(other, ExtendedReal):
            return other.hi, other.lo
        if isinstance(other, (int, float, np.floating, np.integer)):
            if isinstance(other, int) and abs(other) > 2**53:
                h = float(other)
                return h, float(other - int(h))
            return float(other), 0.0
        return None

    def _wrap(self, pair):
        out = ExtendedReal.__new__(ExtendedReal)
        out.hi, out.lo = float(pair[0]), float(pair[1])
        return out

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._wrap(dd_add(self.hi, self.lo, *o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._wrap(dd_sub(self.hi, self.lo, *o))

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._wrap(dd_sub(o[0], o[1], self.hi, self.lo))

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self._wrap(dd_mul(self.hi, self.lo, *o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o[0] == 0.0:
            raise ZeroDivisionError("double-double division by zero")
        return self._wrap(dd_div(self.hi, self.lo, *o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if self.hi == 0.0:
            raise ZeroDivisionError("double-double division by zero")
        return self._wrap(dd_div(o[0], o[1], self.hi, self.lo))

    def __neg__(self):
        return self._wrap((-self.hi, -self.lo))

    def __abs__(self):
        return -self if self.hi < 0 or (self.hi == 0 and self.lo < 0) else self

    def sqrt(self):
        if self.hi < 0:
            raise ValueError("square root of a negative number")
        return self._wrap(dd_sqrt(self.hi, self.lo))

    def __float__(self):
        return self.hi + self.lo

    def _cmp(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        d = dd_sub(self.hi, self.lo, *o)
        return (d[0] > 0 or (d[0] == 0 and d[1] > 0)) - (d[0] < 0 or (d[0] == 0 and d[1] < 0))

    def __eq__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c == 0

    def __lt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c < 0

    def __le__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c <= 0

    def __gt__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c > 0

    def __ge__(self, other):
        c = self._cmp(other)
        return c if c is NotImplemented else c >= 0

    def __hash__(self):
        return hash((self.hi, self.lo))

    def __repr__(self):
        return f"ExtendedReal({self.hi!r}, {self.lo!r})"


def as_fraction(x: ExtendedReal):
    """Exact rational value of a double-double (testing aid)."""
    from fractions import Fraction

    return Fraction(x.hi) + Fraction(x.lo)


def ulp(x: float) -> float:
    return math.ulp(x)
