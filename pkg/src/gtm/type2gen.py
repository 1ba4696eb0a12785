"""Generating word functions for stream functions.

A partial word function ``h`` (``None`` means undefined) generates

* ``T_*(h)``, a stream-to-word function, when ``h`` is monotone-constant:
  the value is ``h`` of any defined prefix tuple;
* ``T_omega(h)``, a stream-to-stream function, when ``h`` is monotone:
  the value is the supremum of the chain ``h(x^{<e})``.

Evaluation probes prefix tuples ``x^{<e}`` for ``e = 0, 1, 2, ...`` and is
bounded by an explicit probe limit; running out of probes yields a verdict
object instead of looping.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .errors import ClassViolation
from .names import BINARY, Stream, stream_prefix

MONOTONE = "monotone"
MONOTONE_CONSTANT = "monotone-constant"
UNCONSTRAINED = "unconstrained"
CLASSES = (MONOTONE, MONOTONE_CONSTANT, UNCONSTRAINED)


@dataclass(frozen=True, eq=False)
class WordFunction:
    """A partial function on word tuples with a declared monotonicity class."""

    arity: int
    fn: Callable[..., str | None]
    declared: str = UNCONSTRAINED
    name: str = ""

    def __post_init__(self):
        if self.declared not in CLASSES:
            raise ValueError(f"unknown word-function class {self.declared!r}")

    def __call__(self, *words: str) -> str | None:
        if len(words) != self.arity:
            raise TypeError(f"{self.name or 'word function'} takes {self.arity} "
                            f"arguments, got {len(words)}")
        return self.fn(*words)

    def __repr__(self):
        return f"WordFunction({self.name or self.fn.__name__}, arity={self.arity}, {self.declared})"


@dataclass(frozen=True)
class Violation:
    shorter: tuple
    longer: tuple
    value_shorter: str
    value_longer: str | None


@dataclass
class MonotonicityReport:
    checked_as: str
    samples: int
    violations: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class Diverged:
    """``T_*(h)(x)`` stayed undefined for every probed prefix."""

    probes: int


@dataclass(frozen=True)
class InsufficientOutput:
    """``T_omega(h)(x)`` produced fewer than ``demand`` symbols within the limit."""

    probes: int
    best: str


def _violates(cls: str, v: str, v2: str | None) -> bool:
    if v2 is None:
        return True
    if cls == MONOTONE_CONSTANT:
        return v != v2
    return not v2.startswith(v)


def check_monotone_on_samples(h: WordFunction, sample_budget: int, max_len: int,
                              seed: int, as_class: str | None = None,
                              alphabet=BINARY) -> MonotonicityReport:
    """Search for pairs ``y < y'`` that break the class of ``h``.

    Samples random tuples ``y`` of words of length at most ``max_len`` and
    random componentwise extensions ``y'``.  ``as_class`` defaults to the
    declared class; an unconstrained ``h`` is checked as monotone.
    """
    cls = as_class or (h.declared if h.declared != UNCONSTRAINED else MONOTONE)
    rng = random.Random(seed)
    symbols = alphabet.symbols
    report = MonotonicityReport(cls, sample_budget)

    def word(n):
        return "".join(rng.choice(symbols) for _ in range(n))

    for _ in range(sample_budget):
        y = tuple(word(rng.randint(0, max_len)) for _ in range(h.arity))
        y2 = tuple(w + word(rng.randint(0, max(0, max_len - len(w)) + 1)) for w in y)
        v = h(*y)
        if v is None:
            continue
        v2 = h(*y2)
        if _violates(cls, v, v2):
            report.violations.append(Violation(y, y2, v, v2))
    return report


def t_star(h: WordFunction, x: Sequence[Stream], probe_limit: int, recheck: int = 2):
    """Evaluate ``T_*(h)`` on the stream tuple ``x``.

    Returns the word ``h(x^{<e})`` for the first ``e <= probe_limit`` where
    ``h`` is defined, or :class:`Diverged`.  The value is rechecked on
    ``recheck`` further prefixes; a change raises :class:`ClassViolation`.
    """
    if h.declared != MONOTONE_CONSTANT:
        raise ClassViolation(f"T_* needs a monotone-constant function, {h!r} is {h.declared}")
    for e in range(probe_limit + 1):
        y = stream_prefix(x, e)
        w = h(*y)
        if w is None:
            continue
        for e2 in range(e + 1, e + 1 + recheck):
            y2 = stream_prefix(x, e2)
            w2 = h(*y2)
            if w2 != w:
                raise ClassViolation(
                    f"{h!r} is not constant on extensions: {w!r} at e={e}, {w2!r} at e={e2}",
                    witness=(y, y2))
        return w
    return Diverged(probe_limit + 1)


def t_omega(h: WordFunction, x: Sequence[Stream], demand: int, probe_limit: int):
    """Evaluate ``T_omega(h)`` on ``x`` until at least ``demand`` symbols are known.

    Returns the first chain element ``h(x^{<e})`` of length ``>= demand``, or
    :class:`InsufficientOutput`.  Every pair of consecutive defined values is
    checked to be prefix-ordered.
    """
    if h.declared != MONOTONE:
        raise ClassViolation(f"T_omega needs a monotone function, {h!r} is {h.declared}")
    if demand < 0:
        raise ValueError("demand must be nonnegative")
    last = None
    for e in range(probe_limit + 1):
        y = stream_prefix(x, e)
        w = h(*y)
        if last is not None:
            if w is None or not w.startswith(last[1]):
                raise ClassViolation(
                    f"{h!r} broke the prefix chain: {last[1]!r} at e={last[0]}, {w!r} at e={e}",
                    witness=(stream_prefix(x, last[0]), y))
        if w is None:
            continue
        last = (e, w)
        if len(w) >= demand:
            return w
    return InsufficientOutput(probe_limit + 1, "" if last is None else last[1])


def generated_stream(h: WordFunction, x: Sequence[Stream], probe_limit: int = 1 << 12) -> Stream:
    """The stream ``T_omega(h)(x)`` produced incrementally.

    Raises :class:`~gtm.errors.StreamExhausted` on access when ``h`` stops
    growing within ``probe_limit`` probes past the last produced symbol.
    """
    if h.declared != MONOTONE:
        raise ClassViolation(f"T_omega needs a monotone function, {h!r} is {h.declared}")

    def chunks():
        produced = ""
        e = 0
        while True:
            stalled = 0
            while True:
                w = h(*stream_prefix(x, e))
                e += 1
                if w is not None:
                    if not w.startswith(produced):
                        raise ClassViolation(f"{h!r} broke the prefix chain at e={e - 1}")
                    if len(w) > len(produced):
                        break
                stalled += 1
                if stalled > probe_limit:
                    return
            yield w[len(produced):]
            produced = w

    alphabet = x[0].alphabet if x else BINARY
    return Stream.from_chunks(chunks(), alphabet)
