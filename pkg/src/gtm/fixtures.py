"""Sample machines in source form, and a random machine generator.

``SOURCES`` holds well-formed machines by name, ``MALFORMED`` holds sources
that must be rejected with at least one located diagnostic.
"""

from __future__ import annotations

import random

from .dsl import inferred_work_alphabet, parse
from .library import BUILTINS
from .machine import (
    Assign, BranchFn, BranchSym, Machine, MoveLeft, MoveRight, WriteSym,
)

SOURCES = {
    "coin": """
machine coin;
tapes 0:word;
labels l0 final lf;
l0: 0 := coin() -> lf;
""",
    "copy": """
machine copy;
tapes 0:word, 1:word;
inputs 1;
labels l0 final lf;
l0: 0 := id.word(1) -> lf;
""",
    "coin_loop": """
// the second outcome of the coin never halts
machine coin_loop;
tapes 0:word, 1:word;
labels l0 l1 l2 final lf;
l0: 0 := coin() -> l1;
l1: if bit(0) then lf else l2;
l2: right 1 -> l2;
""",
    "stuck": """
machine stuck;
tapes 0:word, 1:word;
inputs 1;
labels l0 final lf;
l0: if never(1) then lf else lf;
""",
    "spin": """
machine spin;
tapes 0:word;
labels l0 final lf;
l0: right 0 -> l0;
""",
    "real_adder": """
machine real_adder;
tapes 0:real, 1:real, 2:real;
inputs 2;
labels l0 final lf;
l0: 0 := plus(1, 2) -> lf;
""",
    "stream_adder": """
machine stream_adder;
tapes 0:stream, 1:stream, 2:stream;
inputs 2;
labels l0 final lf;
l0: 0 := add.rho(1, 2) -> lf;
""",
    "const11": """
machine const11;
tapes 0:word, 1:word;
inputs 1;
labels l0 final lf;
l0: 0 := const.11(1) -> lf;
""",
    # word machines with monotone subroutines
    "branch_dup": """
machine branch_dup;
tapes 0:word, 1:word;
inputs 1;
labels l0 a b final lf;
l0: if head(1) then a else b;
a: 0 := dup(1) -> lf;
b: 0 := neg(1) -> lf;
""",
    "xor_dup": """
machine xor_dup;
tapes 0:word, 1:word, 2:word, 3:word;
inputs 2;
labels l0 l1 final lf;
l0: 3 := xor(1, 2) -> l1;
l1: 0 := dup(3) -> lf;
""",
    "strip_zeros": """
// drop leading zeros, then double every symbol of the rest
machine strip_zeros;
tapes 0:word, 1:word, 2:word;
inputs 1;
labels l0 l1 l2 l3 l4 l5 out final lf;
l0: 2 := id.word(1) -> l1;
l1: if head(2) then l2 else l3;
l2: 2 := tail(2) -> l1;
l3: right 0 -> l4;
l4: write 0 '#' -> l5;
l5: left 0 -> out;
out: 0 := dup(2) -> lf;
""",
    # stream machines for splitting around neg.stream
    "w_apply": """
machine w_apply;
tapes 0:stream, 1:stream;
inputs 1;
labels l0 final lf;
l0: 0 := neg.stream(1) -> lf;
""",
    "w_post": """
machine w_post;
tapes 0:stream, 1:stream, 2:stream, 3:stream;
inputs 1;
labels l0 l1 l2 final lf;
l0: 2 := tail.stream(1) -> l1;
l1: 3 := neg.stream(2) -> l2;
l2: 0 := xor.stream(1, 3) -> lf;
""",
    "w_branch": """
machine w_branch;
tapes 0:stream, 1:stream, 2:stream;
inputs 1;
labels l0 a b c final lf;
l0: if head.stream(1) then a else b;
a: 2 := neg.stream(1) -> c;
b: 2 := dup.stream(1) -> c;
c: 0 := interleave.stream(1, 2) -> lf;
""",
    "w_none": """
machine w_none;
tapes 0:stream, 1:stream;
inputs 1;
labels l0 final lf;
l0: 0 := dup.stream(1) -> lf;
""",
}

MONOTONE_MACHINES = ("branch_dup", "xor_dup", "strip_zeros")
WEIHRAUCH_MACHINES = ("w_apply", "w_post", "w_branch")
ORACLE = "neg.stream"

MALFORMED = {
    "unknown_label": """
machine bad;
tapes 0:word;
labels l0 final lf;
l0: right 0 -> l9;
""",
    "not_total": """
machine bad;
tapes 0:word;
labels l0 l1 final lf;
l0: right 0 -> lf;
""",
    "final_statement": """
machine bad;
tapes 0:word;
labels l0 final lf;
l0: right 0 -> lf;
lf: right 0 -> lf;
""",
    "unknown_fn": """
machine bad;
tapes 0:word;
labels l0 final lf;
l0: 0 := nosuch() -> lf;
""",
    "arity": """
machine bad;
tapes 0:word, 1:word;
inputs 1;
labels l0 final lf;
l0: 0 := neg(1, 1) -> lf;
""",
    "tape_range": """
machine bad;
tapes 0:word;
labels l0 final lf;
l0: right 4 -> lf;
""",
    "gamma_overlap": """
machine bad;
tapes 0:word;
work '_' '0' blank '_';
labels l0 final lf;
l0: write 0 '0' -> lf;
""",
    "blank_missing": """
machine bad;
tapes 0:word;
work '#' blank '_';
labels l0 final lf;
l0: write 0 '#' -> lf;
""",
    "syntax": """
machine bad
tapes 0:word;
labels l0 final lf;
l0: jump -> lf;
""",
    "signature": """
machine bad;
tapes 0:word, 1:stream;
inputs 1;
labels l0 final lf;
l0: 0 := neg(1) -> lf;
""",
}


def load(name: str) -> Machine:
    return parse(SOURCES[name], source=f"<{name}>")


def corpus() -> dict:
    return {name: load(name) for name in SOURCES}


# -- random machines ----------------------------------------------------------

_UNARY = ("neg", "dup", "tail", "id.word")
_BINARY_FNS = ("xor", "interleave")
_TESTS = ("head", "bit", "never")
_SYMBOLS = ("#", "a", "b")


def random_machine(rng: random.Random, n_labels: int | None = None, n_tapes: int | None = None,
                   g_id: str = "neg", name: str = "rnd", custom_work: bool | None = None) -> Machine:
    """A well-formed word machine with random control flow.

    Every non-final label gets a random statement from all six forms; the
    function ``g_id`` appears with raised probability so that the
    single-use condition is sometimes met and sometimes violated.
    """
    n = n_labels if n_labels is not None else rng.randint(2, 8)
    L = (n_tapes if n_tapes is not None else rng.randint(2, 4)) - 1
    labels = tuple(f"l{i}" for i in range(n - 1)) + ("lf",)
    final = "lf"
    tapes = list(range(L + 1))

    def target():
        return rng.choice(labels)

    stm = {}
    for label in labels[:-1]:
        kind = rng.randrange(7)
        t = rng.choice(tapes)
        if kind == 0:
            stm[label] = MoveRight(t, target())
        elif kind == 1:
            stm[label] = MoveLeft(t, target())
        elif kind == 2:
            stm[label] = WriteSym(t, rng.choice(_SYMBOLS), target())
        elif kind == 3:
            stm[label] = BranchSym(t, rng.choice(_SYMBOLS), target(), target())
        elif kind == 4:
            stm[label] = BranchFn(rng.choice(_TESTS), (rng.choice(tapes),), target(), target())
        elif kind == 5 and rng.random() < 0.3:
            fn = rng.choice(_BINARY_FNS)
            stm[label] = Assign(t, fn, (rng.choice(tapes), rng.choice(tapes)), target())
        else:
            fn = g_id if rng.random() < 0.5 else rng.choice(_UNARY)
            stm[label] = Assign(t, fn, (rng.choice(tapes),), target())
    used = {s.fn for s in stm.values() if isinstance(s, (Assign, BranchFn))}
    subs = {fn: BUILTINS[fn] for fn in sorted(used)}
    work = inferred_work_alphabet(labels, stm)
    blank = "_"
    if custom_work if custom_work is not None else rng.random() < 0.3:
        blank = "~"
        work = (blank,) + tuple(a for a in _SYMBOLS)
    k = rng.randint(0, min(2, L))
    return Machine(name, labels, final, work, blank, k, ("word",) * (L + 1), stm, subs)
