"""Exact-real algorithms on interval names.

* :func:`interval_add` adds two reals given as interval-record streams.
* :func:`approx_leq_k` is the approximate comparison that may answer either
  way when ``y <= x <= y + 2^-k``.
* :func:`limit` turns a fast Cauchy sequence of complex rationals into
  interval names of its limit.
* :func:`series_partial` and :func:`series_sum` evaluate a power series
  ``sum a_j z^j`` with a rigorous geometric tail bound.

All arithmetic is exact (``fractions.Fraction``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, NamedTuple

from .errors import InvariantBreach, PrecisionError
from .names import (
    LazySeq, Stream, complete_records, encode_interval, interval_stream, read_intervals,
)
from .represent import DEFAULT_PROBE_LIMIT, InsufficientPrecision, rho_decode


class QComplex(NamedTuple):
    """Complex number with exact rational parts."""

    re: Fraction
    im: Fraction = Fraction(0)

    @classmethod
    def of(cls, z) -> "QComplex":
        if isinstance(z, QComplex):
            return z
        if isinstance(z, tuple):
            return cls(Fraction(z[0]), Fraction(z[1]))
        return cls(Fraction(z), Fraction(0))

    def __add__(self, other):
        other = QComplex.of(other)
        return QComplex(self.re + other.re, self.im + other.im)

    def __sub__(self, other):
        other = QComplex.of(other)
        return QComplex(self.re - other.re, self.im - other.im)

    def __mul__(self, other):
        other = QComplex.of(other)
        return QComplex(self.re * other.re - self.im * other.im,
                        self.re * other.im + self.im * other.re)

    def abs2(self) -> Fraction:
        return self.re * self.re + self.im * self.im

    def __str__(self):
        if self.im == 0:
            return str(self.re)
        return f"{self.re}{'+' if self.im >= 0 else '-'}{abs(self.im)}i"


# -- interval addition ----------------------------------------------------

def add_intervals(i, j) -> tuple:
    return i[0] + j[0], i[1] + j[1]


def interval_add_seq(xs: LazySeq, ys: LazySeq) -> LazySeq:
    """Componentwise sum of two interval sequences."""
    return LazySeq(add_intervals(i, j) for i, j in zip(xs, ys))


def interval_add(p, q) -> Stream:
    """Componentwise sum of two interval-record streams, as a record stream."""
    return interval_stream(add_intervals(i, j) for i, j in zip(read_intervals(p), read_intervals(q)))


def add_complete_records(u: str, v: str) -> str:
    """Records of ``I_n + J_n`` for every ``n`` complete in both prefixes.

    A total monotone word function whose stream extension is
    :func:`interval_add`.  Reading stops at the first malformed record, so
    extending a prefix never changes records already summed.
    """
    xs, ys = complete_records(u, strict=False), complete_records(v, strict=False)
    return "".join(encode_interval(*add_intervals(i, j)) for i, j in zip(xs, ys))


# -- approximate comparison ---------------------------------------------

def _decode_or_fail(p, d, budget):
    got = rho_decode(p, d, budget)
    if isinstance(got, InsufficientPrecision):
        raise PrecisionError(f"name did not reach width 2^-{d} within {budget} records")
    return got


def approx_leq_k(x, y, k: int, budget: int = DEFAULT_PROBE_LIMIT) -> str:
    """Approximate test ``x <= y`` with tolerance ``2^-k``.

    Answers ``"tt"`` whenever ``x < y`` and ``"ff"`` whenever
    ``x > y + 2^-k``; in between either answer is admissible.  Both names
    are decoded to width below ``2^-(k+2)`` and the answer is ``"tt"`` iff
    the upper end of ``x`` lies below the upper end of ``y`` plus
    ``2^-(k+1)``.
    """
    xl, xu = _decode_or_fail(x, k + 3, budget)
    yl, yu = _decode_or_fail(y, k + 3, budget)
    return "tt" if xu < yu + Fraction(1, 2 ** (k + 1)) else "ff"


# -- limits -----------------------------------------------------------------

def limit_intervals(b: LazySeq) -> tuple:
    """Interval sequences for the real and imaginary part of ``lim b_k``.

    Requires ``|b_k - s| <= 2^-k``; interval ``n`` is centred at ``b_{n+2}``
    with radius ``2^-(n+1)``, so it contains ``s`` and has width ``2^-n``.
    """
    def part(which):
        def interval(n):
            c = getattr(QComplex.of(b[n + 2]), which)
            r = Fraction(1, 2 ** (n + 1))
            return c - r, c + r
        return LazySeq.from_function(interval)
    return part("re"), part("im")


def limit(b: LazySeq) -> tuple:
    """Pair of interval-record streams naming the real and imaginary part of ``lim b_k``."""
    re, im = limit_intervals(b)
    return interval_stream(iter(re)), interval_stream(iter(im))


# -- power series -----------------------------------------------------------

@dataclass(frozen=True)
class PowerSeriesInput:
    """Data for summing ``sum_j a_j z^j``.

    ``coefficients(j)`` returns the exact rational ``a_j``; ``M`` is a Cauchy
    constant for ``r`` (``|a_j| <= M r^-j``) and ``|z| < r`` is required.
    """

    coefficients: Callable[[int], Fraction]
    r: Fraction
    M: Fraction
    z: QComplex

    def __post_init__(self):
        object.__setattr__(self, "r", Fraction(self.r))
        object.__setattr__(self, "M", Fraction(self.M))
        object.__setattr__(self, "z", QComplex.of(self.z))
        if self.r <= 0 or self.M < 0:
            raise InvariantBreach("need r > 0 and M >= 0")
        if not self.z.abs2() < self.r * self.r:
            raise InvariantBreach(f"|z| < r fails: |z|^2 = {self.z.abs2()}, r^2 = {self.r ** 2}")

    def coefficient(self, j: int) -> Fraction:
        a = Fraction(self.coefficients(j))
        if abs(a) * self.r ** j > self.M:
            raise InvariantBreach(f"Cauchy bound |a_j| <= M r^-j fails at j={j}: a_j = {a}")
        return a


def sqrt_upper(t: Fraction, bits: int) -> Fraction:
    """Rational upper bound of ``sqrt(t)`` within ``2^-bits``."""
    scale = 4 ** bits
    n = t.numerator * scale
    root = math.isqrt(n // t.denominator)
    if root * root * t.denominator != n:
        root += 1  # directed rounding upwards
    return Fraction(root, 2 ** bits)


def ratio_bound(inp: PowerSeriesInput, k: int) -> Fraction:
    """Rational ``c`` with ``|z|/r <= c < 1``."""
    t = inp.z.abs2() / (inp.r * inp.r)
    bits = k + 4
    while True:
        c = sqrt_upper(t, bits)
        if c < 1:
            return c
        bits *= 2


def terms_needed(M: Fraction, q: Fraction, k: int) -> int:
    """Least ``n`` with ``M q^n / (1 - q) < 2^-k``, by doubling then bisection."""
    eps = Fraction(1, 2 ** k)

    def ok(n):
        return M * q ** n / (1 - q) < eps

    if ok(0):
        return 0
    hi = 1
    while not ok(hi):
        hi *= 2
    lo = hi // 2  # ok(lo) is False
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if ok(mid):
            hi = mid
        else:
            lo = mid
    return hi


def partial_sum(inp: PowerSeriesInput, n: int) -> QComplex:
    """``s_n = sum_{j<n} a_j z^j`` computed exactly by Horner's rule."""
    acc = QComplex(Fraction(0))
    coeffs = [inp.coefficient(j) for j in range(n)]
    for a in reversed(coeffs):
        acc = acc * inp.z + a
    return acc


@dataclass(frozen=True)
class PartialSumReport:
    value: QComplex
    terms: int
    ratio: Fraction
    q: Fraction


def series_partial(inp: PowerSeriesInput, k: int, report: bool = False):
    """A complex rational ``b_k`` with ``|b_k - s| <= 2^-k``."""
    c = ratio_bound(inp, k)
    q = (c + 1) / 2
    n = terms_needed(inp.M, q, k)
    value = partial_sum(inp, n)
    return PartialSumReport(value, n, c, q) if report else value


def series_sequence(inp: PowerSeriesInput) -> LazySeq:
    """The sequence ``k -> series_partial(inp, k)``."""
    return LazySeq.from_function(lambda k: series_partial(inp, k))


def series_sum(inp: PowerSeriesInput) -> tuple:
    """Interval-record names of the real and imaginary part of the sum."""
    return limit(series_sequence(inp))


def geometric(j: int) -> Fraction:
    return Fraction(1)
