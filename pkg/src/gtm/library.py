"""Builtin subroutines resolvable by name from machine source text.

Word functions come paired with an independent stream implementation so
that generated stream functions can be checked against a reference.
``GENERATORS`` maps stream-level subroutine ids to the word functions that
generate them.
"""

from __future__ import annotations

from fractions import Fraction

from .analysis import add_complete_records, interval_add, interval_add_seq
from .machine import MultiFunction, TestFunction
from .names import Stream
from .type2gen import MONOTONE, MONOTONE_CONSTANT, WordFunction


def _flip(a):
    return "1" if a == "0" else "0"


def _xor(a, b):
    return "0" if a == b else "1"


# word level
def w_neg(u):
    return "".join(map(_flip, u))


def w_dup(u):
    return "".join(a + a for a in u)


def w_tail(u):
    return u[1:] if u else None


def w_xor(u, v):
    return "".join(map(_xor, u, v))


def w_interleave(u, v):
    return "".join(a + b for a, b in zip(u, v))


def w_head(u):
    return u[0] if u else None


def w_bit(u):
    return u if u in ("0", "1") else None


WORD_FUNCTIONS = {
    "id": WordFunction(1, lambda u: u, MONOTONE, "id"),
    "neg": WordFunction(1, w_neg, MONOTONE, "neg"),
    "dup": WordFunction(1, w_dup, MONOTONE, "dup"),
    "tail": WordFunction(1, w_tail, MONOTONE, "tail"),
    "xor": WordFunction(2, w_xor, MONOTONE, "xor"),
    "interleave": WordFunction(2, w_interleave, MONOTONE, "interleave"),
    "add.words": WordFunction(2, add_complete_records, MONOTONE, "add.words"),
    "const.11": WordFunction(1, lambda u: "11", MONOTONE, "const.11"),
    "head": WordFunction(1, w_head, MONOTONE_CONSTANT, "head"),
}


# stream level, written directly rather than through generation
def s_neg(p):
    return Stream.from_function(lambda i: _flip(p[i]))


def s_dup(p):
    return Stream.from_function(lambda i: p[i // 2])


def s_tail(p):
    return Stream.from_function(lambda i: p[i + 1])


def s_xor(p, q):
    return Stream.from_function(lambda i: _xor(p[i], q[i]))


def s_interleave(p, q):
    return Stream.from_function(lambda i: (p, q)[i % 2][i // 2])


STREAM_FUNCTIONS = {
    "id": lambda p: p,
    "neg": s_neg,
    "dup": s_dup,
    "tail": s_tail,
    "xor": s_xor,
    "interleave": s_interleave,
    "add.words": interval_add,
}


def _identity(carrier):
    cls = MONOTONE if carrier == "word" else None
    return MultiFunction.single(lambda x: x, (carrier,), carrier, f"id.{carrier}", cls)


def _build():
    table = {}
    for carrier in ("word", "stream", "nat", "int", "rat", "real", "interval", "sri"):
        table[f"id.{carrier}"] = _identity(carrier)
    for name, h in WORD_FUNCTIONS.items():
        if name == "id":
            continue
        if h.declared == MONOTONE:
            table[name] = MultiFunction.from_word_function(h, name)
        else:
            table[name] = TestFunction.from_word_function(h, name)
    for name, f in STREAM_FUNCTIONS.items():
        if name in ("id", "add.words"):
            continue
        arity = WORD_FUNCTIONS[name].arity
        table[f"{name}.stream"] = MultiFunction.single(f, ("stream",) * arity, "stream",
                                                       f"{name}.stream")
    table["head.stream"] = TestFunction(("stream",), lambda p: p[0], "head.stream")
    table["bit"] = TestFunction(("word",), w_bit, "bit")
    table["never"] = TestFunction(("word",), lambda u: None, "never")
    table["coin"] = MultiFunction.choice(lambda: ["0", "1"], (), "word", "coin")
    table["plus"] = MultiFunction.single(lambda x, y: Fraction(x) + Fraction(y),
                                         ("real", "real"), "real", "plus")
    table["add.sri"] = MultiFunction.single(interval_add_seq, ("sri", "sri"), "sri", "add.sri")
    table["add.rho"] = MultiFunction.single(interval_add, ("stream", "stream"), "stream",
                                            "add.rho")
    return table


BUILTINS = _build()

GENERATORS = {
    "id.stream": WORD_FUNCTIONS["id"],
    "add.rho": WORD_FUNCTIONS["add.words"],
    "head.stream": WORD_FUNCTIONS["head"],
}
GENERATORS.update({f"{name}.stream": WORD_FUNCTIONS[name]
                   for name in ("neg", "dup", "tail", "xor", "interleave")})


def lookup(name: str):
    """A builtin subroutine by id; ``KeyError`` lists the known ids."""
    try:
        return BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown builtin {name!r}; known: {', '.join(sorted(BUILTINS))}") from None
