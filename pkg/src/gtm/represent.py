"""Multi-representations: naming relations between names and objects.

A :class:`MultiRepresentation` ``delta: Y => Z`` bundles

* ``encode(z)``: one chosen name of ``z``;
* ``member_at_precision(y, z, d)``: whether ``z`` is consistent with being
  named by ``y`` after inspecting ``y`` to precision ``d``.  Membership in
  a representation of an infinite object is only semidecidable, so the
  answer is :data:`CONSISTENT`, :data:`REFUTED`, or :data:`UNDECIDED` when
  the probe budget ran out before precision ``d`` was reached;
* ``approx_decode(y, d)``: an approximation of the named object.

The standard stack for real numbers is built from three layers: bit streams
name interval sequences (``sri_code``), interval sequences name reals
(``interval_real``), and their relational composition ``rho`` names reals by
bit streams.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable

from .errors import DecodeError, NotAName, RepresentationError
from .names import (
    LazySeq, Stream, beta_decode, beta_encode, decode_natural, decode_rational,
    encode_natural, encode_rational, interval_stream, iota_decode_stream, iota_encode,
    read_intervals,
)


class Membership(enum.Enum):
    CONSISTENT = "consistent"
    REFUTED = "refuted"
    UNDECIDED = "undecided"


CONSISTENT = Membership.CONSISTENT
REFUTED = Membership.REFUTED
UNDECIDED = Membership.UNDECIDED

DEFAULT_PROBE_LIMIT = 4096


@dataclass(frozen=True)
class InsufficientPrecision:
    """A name did not reach the requested precision within the probe budget."""

    probes: int
    best: tuple | None = None


@dataclass(frozen=True, eq=False)
class MultiRepresentation:
    name: str
    name_carrier: str
    object_carrier: str
    encode: Callable
    member: Callable  # (name, obj, d) -> Membership
    decode: Callable | None = None  # (name, d) -> approximation
    witnesses: Callable | None = None  # (name, d) -> iterable of named objects
    layers: tuple | None = None  # (outer, inner) for relational compositions

    def member_at_precision(self, y, z, d: int) -> Membership:
        return self.member(y, z, d)

    def approx_decode(self, y, d: int):
        if self.decode is None:
            raise RepresentationError(f"{self.name} has no decoder")
        return self.decode(y, d)

    def __repr__(self):
        return f"<rep {self.name}: {self.name_carrier} => {self.object_carrier}>"


# -- interval arithmetic on running intersections -------------------------

def running_intersection(intervals: Iterable, d: int, probe_limit: int = DEFAULT_PROBE_LIMIT):
    """Intersect intervals until the width is at most ``2**-d``.

    Returns ``(lo, hi)`` or :class:`InsufficientPrecision`; raises
    :class:`NotAName` when the intersection becomes empty.
    """
    eps = Fraction(1, 2 ** d) if d >= 0 else Fraction(2 ** -d)
    lo = hi = None
    n = 0
    for n, (a, b) in enumerate(itertools.islice(intervals, probe_limit)):
        lo = a if lo is None else max(lo, a)
        hi = b if hi is None else min(hi, b)
        if lo > hi:
            raise NotAName(f"empty running intersection at record #{n}", record=n)
        if hi - lo <= eps:
            return lo, hi
    return InsufficientPrecision(n + 1 if lo is not None else 0,
                                 None if lo is None else (lo, hi))


def _member_real(seq, x, d, probe_limit=DEFAULT_PROBE_LIMIT) -> Membership:
    x = Fraction(x)
    try:
        got = running_intersection(iter(seq), d, probe_limit)
    except (NotAName, DecodeError):
        return REFUTED
    if isinstance(got, InsufficientPrecision):
        if got.best is not None and not got.best[0] <= x <= got.best[1]:
            return REFUTED
        return UNDECIDED
    return CONSISTENT if got[0] <= x <= got[1] else REFUTED


# -- real numbers ---------------------------------------------------------

def rho_intervals(x, depth_schedule: Callable[[int], int] | None = None) -> LazySeq:
    """Interval sequence ``I_n = [x - 2^-s(n); x + 2^-s(n)]`` (``s`` defaults to ``n``)."""
    x = Fraction(x)
    s = depth_schedule or (lambda n: n)

    def interval(n):
        r = Fraction(1, 2 ** s(n))
        return x - r, x + r

    return LazySeq.from_function(interval)


def rho_encode(x, depth_schedule: Callable[[int], int] | None = None) -> Stream:
    """Bit-stream name of the rational ``x`` as a sequence of shrinking intervals."""
    return interval_stream(iter(rho_intervals(x, depth_schedule)))


def rho_decode(p, d: int, probe_limit: int = DEFAULT_PROBE_LIMIT):
    """Interval of width at most ``2**-d`` around the real named by ``p``.

    ``p`` is a bit stream or finite word of interval records.  Returns
    ``(lo, hi)`` or :class:`InsufficientPrecision`; raises :class:`NotAName`
    when two records are disjoint and :class:`DecodeError` on malformed
    records.
    """
    return running_intersection(read_intervals(p), d, probe_limit)


def _sri_member(p, seq, d):
    try:
        got = list(itertools.islice(read_intervals(p), d + 1))
    except DecodeError:
        return REFUTED
    want = seq.take(d + 1)
    return CONSISTENT if got == want else REFUTED


def _sri_witnesses(p, d):
    return [LazySeq(read_intervals(p))]


sri_code = MultiRepresentation(
    "sri-code", "stream", "sri",
    encode=lambda seq: interval_stream(iter(seq)),
    member=_sri_member,
    decode=lambda p, d: list(itertools.islice(read_intervals(p), d + 1)),
    witnesses=_sri_witnesses,
)

interval_real = MultiRepresentation(
    "interval-real", "sri", "real",
    encode=rho_intervals,
    member=_member_real,
    decode=lambda seq, d: running_intersection(iter(seq), d),
    witnesses=None,
)


# -- words and discrete sets ----------------------------------------------

def _beta_member(p, w, d):
    code = iota_encode(w)
    got = p.prefix(len(code) + d) if isinstance(p, Stream) else p[:len(code) + d]
    ok = got[:len(code)] == code and set(got[len(code):]) <= {"0"}
    return CONSISTENT if ok else REFUTED


def _beta_witnesses(p, d):
    try:
        return [next(iota_decode_stream(p, max_block=max(64, 4 * d)))]
    except (DecodeError, StopIteration):
        return []


def _beta_decode(p, d):
    return beta_decode(p)


beta = MultiRepresentation(
    "beta", "stream", "word",
    encode=beta_encode,
    member=_beta_member,
    decode=_beta_decode,
    witnesses=_beta_witnesses,
)


def _exact(decoder):
    def member(y, z, d):
        try:
            return CONSISTENT if decoder(y) == z else REFUTED
        except DecodeError:
            return REFUTED
    return member


nat_notation = MultiRepresentation(
    "nat", "word", "nat", encode=encode_natural, member=_exact(decode_natural),
    decode=lambda y, d: decode_natural(y), witnesses=lambda y, d: [decode_natural(y)])

rational_notation = MultiRepresentation(
    "rational", "word", "rat", encode=encode_rational, member=_exact(decode_rational),
    decode=lambda y, d: decode_rational(y), witnesses=lambda y, d: [decode_rational(y)])


def identity(carrier: str) -> MultiRepresentation:
    """The identity on a carrier; streams are compared on their first ``d`` symbols."""
    def member(y, z, d):
        if isinstance(y, Stream) and isinstance(z, Stream):
            return CONSISTENT if y.prefix(d) == z.prefix(d) else REFUTED
        return CONSISTENT if y == z else REFUTED

    def decode(y, d):
        return y.prefix(d) if isinstance(y, Stream) else y

    return MultiRepresentation(f"id[{carrier}]", carrier, carrier, encode=lambda z: z,
                               member=member, decode=decode, witnesses=lambda y, d: [y])


# -- relational composition -----------------------------------------------

def compose_rel(outer: MultiRepresentation, inner: MultiRepresentation) -> MultiRepresentation:
    """``outer (.) inner``: ``x`` names ``z`` iff some ``y`` in ``inner(x)`` has ``z`` in ``outer(y)``.

    Membership searches witnesses ``y`` among ``inner.witnesses(x, d)`` and
    requires both layers to be consistent at precision ``d``; use
    :func:`member_with_witness` to also get the witness.
    """
    if outer.name_carrier != inner.object_carrier:
        raise RepresentationError(
            f"cannot compose {outer.name} after {inner.name}: "
            f"{inner.object_carrier!r} != {outer.name_carrier!r}")
    if inner.witnesses is None:
        raise RepresentationError(f"{inner.name} cannot produce witnesses for composition")

    def member(x, z, d):
        return _composed_member(outer, inner, x, z, d)[0]

    def decode(x, d):
        for y in inner.witnesses(x, d):
            return outer.approx_decode(y, d)
        raise NotAName(f"{inner.name} names nothing")

    def witnesses(x, d):
        if outer.witnesses is None:
            raise RepresentationError(f"{outer.name} cannot produce witnesses")
        for y in inner.witnesses(x, d):
            yield from outer.witnesses(y, d)

    return MultiRepresentation(
        f"{outer.name}.{inner.name}", inner.name_carrier, outer.object_carrier,
        encode=lambda z: inner.encode(outer.encode(z)),
        member=member, decode=decode,
        witnesses=witnesses if outer.witnesses is not None else None,
        layers=(outer, inner),
    )


def _composed_member(outer, inner, x, z, d):
    best = REFUTED
    for y in inner.witnesses(x, d):
        a = inner.member_at_precision(x, y, d)
        if a is REFUTED:
            continue
        b = outer.member_at_precision(y, z, d)
        if a is CONSISTENT and b is CONSISTENT:
            return CONSISTENT, y
        if b is not REFUTED:
            best = UNDECIDED
    return best, None


def member_with_witness(rep: MultiRepresentation, x, z, d: int):
    """Membership in a composed representation together with the witness used."""
    parts = rep.layers
    if parts is None:
        return rep.member_at_precision(x, z, d), None
    return _composed_member(parts[0], parts[1], x, z, d)


rho = compose_rel(interval_real, sri_code)

REPRESENTATIONS = {
    "rho": rho,
    "beta": beta,
    "sri-code": sri_code,
    "interval-real": interval_real,
    "nat": nat_notation,
    "rational": rational_notation,
    "id.stream": identity("stream"),
    "id.word": identity("word"),
    "id.real": identity("real"),
}
