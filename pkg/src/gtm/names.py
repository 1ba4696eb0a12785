"""Finite words, memoized infinite streams and the bit-exact name formats.

Words are plain ``str`` objects whose characters are the symbols.  A
:class:`Stream` is an infinite symbol sequence produced on demand; every
symbol produced is cached so that repeated probes see the same prefix.

Name formats (all over the alphabet ``{0, 1}``)::

    natural n      binary, most significant bit first, "0" for zero
    integer z      sign word ("0" or "1") followed by |z| as a natural
    rational p/q   iota(sign) iota(bin |p|) iota(bin q)        (q > 0, reduced)
    interval [a;b] the three blocks of a followed by the three blocks of b
"""

from __future__ import annotations

import itertools
import math
import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Iterator, Sequence

from .errors import AlphabetError, DecodeError, NotAName, StreamExhausted

__all__ = [
    "Alphabet", "BINARY", "Stream", "LazySeq",
    "prefix_leq", "stream_prefix",
    "iota_encode", "iota_decode_stream", "beta_encode", "beta_decode",
    "encode_natural", "decode_natural", "encode_integer", "decode_integer",
    "encode_rational", "decode_rational", "encode_interval", "decode_interval",
    "interval_stream", "read_intervals", "complete_records",
]


@dataclass(frozen=True)
class Alphabet:
    symbols: tuple

    def __post_init__(self):
        symbols = tuple(self.symbols)
        object.__setattr__(self, "symbols", symbols)
        if not symbols:
            raise AlphabetError("an alphabet must be nonempty")
        if len(set(symbols)) != len(symbols):
            raise AlphabetError(f"duplicate symbols in {symbols!r}")
        if "0" not in symbols or "1" not in symbols:
            raise AlphabetError("an alphabet must contain the symbols '0' and '1'")

    def __contains__(self, symbol):
        return symbol in self.symbols

    def check(self, word: str) -> str:
        for i, a in enumerate(word):
            if a not in self.symbols:
                raise AlphabetError(f"symbol {a!r} at position {i} is not in {self.symbols!r}")
        return word


BINARY = Alphabet(("0", "1"))


def _minimal_period(v: str) -> str:
    n = len(v)
    for d in range(1, n + 1):
        if n % d == 0 and v[:d] * (n // d) == v:
            return v[:d]
    return v


def _normal_form(u: str, v: str) -> tuple:
    v = _minimal_period(v)
    while u and u[-1] == v[-1]:
        u = u[:-1]
        v = v[-1] + v[:-1]
    return u, v


class Stream:
    """An infinite symbol sequence produced lazily and cached.

    Build one with :meth:`periodic`, :meth:`from_function`, :meth:`from_chunks`
    or :meth:`from_blocks`.  ``s[i]`` and ``s.prefix(n)`` force production of
    the first ``i + 1`` resp. ``n`` symbols.
    """

    def __init__(self, chunks: Iterable[str], alphabet: Alphabet = BINARY, *, form=None):
        self.alphabet = alphabet
        self._source = iter(chunks)
        self._buf: list = []
        self._lock = threading.Lock()
        self._form = form

    # -- constructors ---------------------------------------------------
    @classmethod
    def periodic(cls, u: str, v: str, alphabet: Alphabet = BINARY) -> "Stream":
        """The eventually periodic stream ``u v v v ...``."""
        if not v:
            raise ValueError("the period of a stream must be nonempty")
        alphabet.check(u)
        alphabet.check(v)
        return cls(itertools.chain([u] if u else [], itertools.repeat(v)), alphabet,
                   form=_normal_form(u, v))

    @classmethod
    def from_function(cls, fn: Callable[[int], str], alphabet: Alphabet = BINARY) -> "Stream":
        return cls(map(fn, itertools.count()), alphabet)

    @classmethod
    def from_chunks(cls, chunks: Iterable[str], alphabet: Alphabet = BINARY) -> "Stream":
        return cls(chunks, alphabet)

    @classmethod
    def from_blocks(cls, blocks: Iterable[str], alphabet: Alphabet = BINARY) -> "Stream":
        """Concatenation of the iota-codes of ``blocks``."""
        return cls(map(iota_encode, blocks), alphabet)

    @classmethod
    def zeros(cls) -> "Stream":
        return cls.periodic("", "0")

    # -- probing --------------------------------------------------------
    def _extend(self, n: int) -> None:
        if len(self._buf) >= n:
            return
        with self._lock:
            while len(self._buf) < n:
                try:
                    chunk = next(self._source)
                except StopIteration:
                    raise StreamExhausted(
                        f"stream producer stopped after {len(self._buf)} symbols") from None
                for a in chunk:
                    if a not in self.alphabet:
                        raise AlphabetError(
                            f"stream produced {a!r} at position {len(self._buf)}")
                    self._buf.append(a)

    def prefix(self, n: int) -> str:
        if n < 0:
            raise ValueError("prefix length must be nonnegative")
        self._extend(n)
        return "".join(self._buf[:n])

    def __getitem__(self, i):
        if type(i) is int and 0 <= i < len(self._buf):
            return self._buf[i]
        if isinstance(i, slice):
            if i.stop is None or i.stop < 0 or (i.start or 0) < 0:
                raise IndexError("streams only support bounded slices")
            return self.prefix(i.stop)[i]
        if i < 0:
            raise IndexError("streams have no negative indices")
        self._extend(i + 1)
        return self._buf[i]

    def __iter__(self) -> Iterator[str]:
        for i in itertools.count():
            yield self[i]

    @property
    def cached(self) -> int:
        """Number of symbols produced so far."""
        return len(self._buf)

    # -- identity -------------------------------------------------------
    @property
    def periodic_form(self):
        """Normalized ``(u, v)`` for eventually periodic streams, else None."""
        return self._form

    def __eq__(self, other):
        if not isinstance(other, Stream):
            return NotImplemented
        if self._form is not None and other._form is not None:
            return self._form == other._form
        return self is other

    def __hash__(self):
        return hash(self._form) if self._form is not None else id(self)

    def __repr__(self):
        if self._form is not None:
            u, v = self._form
            return f"Stream({u}({v})^w)"
        shown = "".join(self._buf[:24])
        return f"Stream({shown}...)"


class LazySeq:
    """Memoized infinite sequence of arbitrary items, indexed from 0."""

    def __init__(self, items: Iterable):
        self._source = iter(items)
        self._buf: list = []
        self._lock = threading.Lock()

    @classmethod
    def from_function(cls, fn: Callable[[int], object]) -> "LazySeq":
        return cls(map(fn, itertools.count()))

    def __getitem__(self, n: int):
        if n < 0:
            raise IndexError("lazy sequences have no negative indices")
        if len(self._buf) <= n:
            with self._lock:
                while len(self._buf) <= n:
                    try:
                        self._buf.append(next(self._source))
                    except StopIteration:
                        raise StreamExhausted(
                            f"sequence producer stopped after {len(self._buf)} items") from None
        return self._buf[n]

    def take(self, n: int) -> list:
        if n > 0:
            self[n - 1]
        return self._buf[:n]

    def __iter__(self):
        for i in itertools.count():
            yield self[i]

    def __repr__(self):
        return f"LazySeq({self._buf[:3]!r}...)"


# -- prefix order -------------------------------------------------------

def prefix_leq(u: str, v, alphabet: Alphabet | None = None) -> bool:
    """Whether ``u`` is a prefix of the word or stream ``v``.

    For a stream exactly ``len(u)`` symbols are probed.
    """
    if isinstance(v, Stream):
        if alphabet is not None and alphabet != v.alphabet:
            raise AlphabetError("word and stream use different alphabets")
        v.alphabet.check(u)
        return v.prefix(len(u)) == u
    if alphabet is not None:
        alphabet.check(u)
        alphabet.check(v)
    return v.startswith(u)


def stream_prefix(q: Sequence[Stream], e: int) -> tuple:
    """The tuple of length-``e`` prefixes of the streams in ``q``."""
    if e < 0:
        raise ValueError("prefix length must be nonnegative")
    return tuple(s.prefix(e) for s in q)


# -- iota / beta --------------------------------------------------------

def iota_encode(w: str) -> str:
    """Self-delimiting code ``110 a1 0 a2 0 ... an 0 11`` of a binary word."""
    BINARY.check(w)
    return "110" + "".join(a + "0" for a in w) + "11"


def _symbol_at(p, i):
    if isinstance(p, Stream):
        return p[i]
    return p[i] if i < len(p) else None


def _decode_block(p, pos: int, max_len: int | None = None, partial: bool = False):
    """Decode one iota block starting at ``pos``; return ``(word, next_pos)``.

    Returns ``None`` when ``p`` is a finite word that ends exactly at ``pos``,
    or, with ``partial``, anywhere inside a block that could still be completed.
    """
    start = pos
    head = [_symbol_at(p, pos + j) for j in range(3)]
    if head[0] is None:
        return None
    if head != ["1", "1", "0"]:
        if partial and None in head and "110".startswith("".join(a for a in head if a)):
            return None
        raise DecodeError("an iota block must start with 110", start)
    pos += 3
    out = []
    while True:
        if max_len is not None and pos - start > max_len:
            raise DecodeError(f"no iota block end within {max_len} symbols", start)
        a, b = _symbol_at(p, pos), _symbol_at(p, pos + 1)
        if a is None or b is None:
            if partial:
                return None
            raise DecodeError("truncated iota block", start)
        if b == "0":
            out.append(a)
        elif a == "1" and b == "1":
            return "".join(out), pos + 2
        else:
            raise DecodeError(f"malformed symbol pair {a}{b} in iota block", pos)
        pos += 2


def iota_decode_stream(p, max_block: int | None = None) -> Iterator[str]:
    """Lazily decode a concatenation of iota blocks.

    ``p`` is a :class:`Stream` or a finite word; a finite word must end at a
    block boundary.  Only the symbols needed for each block are probed.
    """
    pos = 0
    while True:
        got = _decode_block(p, pos, max_block)
        if got is None:
            return
        word, pos = got
        yield word


def beta_encode(w: str) -> Stream:
    """The canonical name ``iota(w) 0^omega`` of a binary word."""
    return Stream.periodic(iota_encode(w), "0")


def beta_decode(p, max_len: int = 1 << 16) -> str:
    """Inverse of :func:`beta_encode` on the leading block of ``p``."""
    try:
        got = _decode_block(p, 0, max_len)
    except DecodeError as exc:
        raise NotAName(f"not a beta-name: {exc}", exc.offset) from None
    if got is None:
        raise NotAName("not a beta-name: empty input", 0)
    return got[0]


# -- numbers ------------------------------------------------------------

def encode_natural(n: int) -> str:
    if n < 0:
        raise ValueError("naturals are nonnegative")
    return format(n, "b")


def decode_natural(w: str) -> int:
    if not w or any(a not in "01" for a in w) or (len(w) > 1 and w[0] == "0"):
        raise DecodeError(f"{w!r} is not a natural number code")
    return int(w, 2)


def encode_integer(z: int) -> str:
    return ("1" if z < 0 else "0") + encode_natural(abs(z))


def decode_integer(w: str) -> int:
    if len(w) < 2 or w[0] not in "01":
        raise DecodeError(f"{w!r} is not an integer code")
    n = decode_natural(w[1:])
    if w[0] == "1" and n == 0:
        raise DecodeError("negative zero is not a canonical integer code")
    return -n if w[0] == "1" else n


def encode_rational(x) -> str:
    x = Fraction(x)
    return (iota_encode("1" if x < 0 else "0")
            + iota_encode(encode_natural(abs(x.numerator)))
            + iota_encode(encode_natural(x.denominator)))


def _rational_from_blocks(sign: str, num: str, den: str) -> Fraction:
    if sign not in ("0", "1"):
        raise DecodeError(f"bad rational sign block {sign!r}")
    p, q = decode_natural(num), decode_natural(den)
    if q == 0:
        raise DecodeError("rational with zero denominator")
    if math.gcd(p, q) != 1:
        raise DecodeError(f"rational {p}/{q} is not in lowest terms")
    if sign == "1" and p == 0:
        raise DecodeError("negative zero is not a canonical rational code")
    return Fraction(-p if sign == "1" else p, q)


def _take_blocks(blocks: Iterator[str], n: int, what: str) -> list:
    out = list(itertools.islice(blocks, n))
    if len(out) != n:
        raise DecodeError(f"incomplete {what} record")
    return out


def decode_rational(w: str) -> Fraction:
    blocks = iota_decode_stream(w)
    x = _rational_from_blocks(*_take_blocks(blocks, 3, "rational"))
    if next(blocks, None) is not None:
        raise DecodeError("trailing blocks after rational")
    return x


def encode_interval(a, b) -> str:
    a, b = Fraction(a), Fraction(b)
    if not a < b:
        raise ValueError(f"interval endpoints must satisfy a < b, got [{a}; {b}]")
    return encode_rational(a) + encode_rational(b)


def decode_interval(w: str) -> tuple:
    records = read_intervals(w)
    try:
        iv = next(records)
    except StopIteration:
        raise DecodeError("empty interval code") from None
    if next(records, None) is not None:
        raise DecodeError("trailing records after interval")
    return iv


def complete_records(u: str, strict: bool = True) -> list:
    """Interval records fully contained in the finite prefix ``u``.

    An incomplete trailing record is ignored.  Malformed input raises
    :class:`DecodeError`, or with ``strict=False`` ends the list.
    """
    out, blocks, pos = [], [], 0
    try:
        while True:
            got = _decode_block(u, pos, partial=True)
            if got is None:
                return out
            blocks.append(got[0])
            pos = got[1]
            if len(blocks) == 6:
                a = _rational_from_blocks(*blocks[:3])
                b = _rational_from_blocks(*blocks[3:])
                if not a < b:
                    raise DecodeError(f"interval record #{len(out)} has a >= b: [{a}; {b}]")
                out.append((a, b))
                blocks = []
    except DecodeError:
        if strict:
            raise
        return out


def interval_stream(intervals: Iterable) -> Stream:
    """Bit stream concatenating the records of an (infinite) interval sequence."""
    return Stream.from_chunks(encode_interval(a, b) for a, b in intervals)


def read_intervals(p) -> Iterator[tuple]:
    """Lazily parse interval records ``(a, b)`` from a stream or finite word."""
    blocks = iota_decode_stream(p)
    for index in itertools.count():
        six = list(itertools.islice(blocks, 6))
        if not six:
            return
        if len(six) != 6:
            raise DecodeError(f"incomplete interval record #{index}")
        a = _rational_from_blocks(*six[:3])
        b = _rational_from_blocks(*six[3:])
        if not a < b:
            raise DecodeError(f"interval record #{index} has a >= b: [{a}; {b}]")
        yield a, b
