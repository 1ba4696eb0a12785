"""Realization checking, machine lowering and stream-machine evaluation.

A name-level function ``f`` realizes an abstract function ``g`` via
representations ``(gamma_1, ..., gamma_n, gamma_0)`` when for every name
tuple ``x`` of some ``y`` in ``dom(g)``, ``f(x)`` is nonempty and every
``x0 in f(x)`` names some value in ``g(y)``.  Membership of infinite names is
decided only up to a precision ``d``, so checks report ``verified`` (at
``d``), ``refuted``, ``inconclusive`` or ``skipped`` (``y`` outside ``dom(g)``).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Iterable, Mapping, Sequence

from .errors import ClassViolation, LoweringError, PrecisionError
from .machine import (
    Accepted, Assign, BranchFn, Configuration, Machine, MultiFunction, Sym, TestFunction, run,
    enumerate_outcomes,
)
from .names import Stream, stream_prefix
from .represent import (
    CONSISTENT, UNDECIDED, InsufficientPrecision, MultiRepresentation,
)
from .type2gen import MONOTONE, MONOTONE_CONSTANT, InsufficientOutput, WordFunction

VERIFIED = "verified"
REFUTED_VERDICT = "refuted"
INCONCLUSIVE = "inconclusive"
SKIPPED = "skipped"


@dataclass(frozen=True)
class Verdict:
    status: str
    sample: int
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != REFUTED_VERDICT


# -- realization of functions -----------------------------------------------

def values_of(f, args: tuple, max_steps: int = 100_000) -> list | None:
    """The value set of a subroutine, plain callable or machine at ``args``.

    Returns ``None`` when it cannot be determined within the budget.
    """
    if isinstance(f, Machine):
        out = enumerate_outcomes(f, args, max_steps=max_steps)
        return out.function_value
    if isinstance(f, MultiFunction):
        if f.enumerate is not None:
            return list(f.enumerate(args))
        v = f.choose(args, 0)
        return [] if v is None else [v]
    if isinstance(f, TestFunction):
        v = f.evaluate(*args)
        return [] if v is None else [v]
    try:
        v = f(*args)
    except PrecisionError:
        return None
    if isinstance(v, (InsufficientOutput, InsufficientPrecision)):
        return None
    if v is None:
        return []
    return list(v) if isinstance(v, (list, set, frozenset)) else [v]


def _judge(x0, zs, rep_out: MultiRepresentation, d: int) -> str:
    seen_undecided = False
    for z in zs:
        m = rep_out.member_at_precision(x0, z, d)
        if m is CONSISTENT:
            return VERIFIED
        if m is UNDECIDED:
            seen_undecided = True
    return INCONCLUSIVE if seen_undecided else REFUTED_VERDICT


def check_realization(f, g, reps_in: Sequence[MultiRepresentation],
                      rep_out: MultiRepresentation, samples, d: int,
                      max_steps: int = 100_000) -> list:
    """Check that ``f`` realizes ``g`` on ``samples`` at precision ``d``.

    ``samples`` is a list of ``(names, objects)`` pairs where ``names[i]``
    names ``objects[i]`` under ``reps_in[i]``.  ``f`` and ``g`` may be
    subroutines, machines or plain callables (``None`` means undefined).
    """
    out = []
    for n, (x, y) in enumerate(samples):
        x, y = tuple(x), tuple(y)
        if len(x) != len(reps_in) or len(y) != len(reps_in):
            raise ValueError(f"sample {n} does not match {len(reps_in)} input representations")
        zs = values_of(g, y, max_steps)
        if zs is None:
            out.append(Verdict(INCONCLUSIVE, n, "abstract value undetermined within budget"))
            continue
        if not zs:
            out.append(Verdict(SKIPPED, n, "input outside the domain"))
            continue
        xs = values_of(f, x, max_steps)
        if xs is None:
            out.append(Verdict(INCONCLUSIVE, n, "name-level function did not finish"))
            continue
        if not xs:
            out.append(Verdict(REFUTED_VERDICT, n, "name-level function has no value"))
            continue
        status = VERIFIED
        for x0 in xs:
            got = _judge(x0, zs, rep_out, d)
            if got == REFUTED_VERDICT:
                status = got
                break
            if got == INCONCLUSIVE:
                status = got
        detail = "" if status == VERIFIED else f"expected one of {zs!r}"
        out.append(Verdict(status, n, detail))
    return out


# -- lowering ---------------------------------------------------------------

@dataclass(frozen=True)
class RealizerTable:
    """Name-level subroutines for each abstract one, and a representation per tape."""

    realizers: Mapping[str, object]
    reps: tuple

    def name_carriers(self) -> tuple:
        return tuple(r.name_carrier for r in self.reps)


def lower_machine(n: Machine, rt: RealizerTable, name: str | None = None) -> Machine:
    """Replace every subroutine of ``n`` by its realizer; keep the skeleton.

    Carriers become the name carriers of the tape representations.  Calls
    refer to a realizer by its own name when it has one, so the result can
    be rendered and parsed back against the builtin registry.
    """
    if len(rt.reps) != len(n.carriers):
        raise LoweringError(f"{n.name}: {len(n.carriers)} tapes but {len(rt.reps)} representations")
    for i, (rep, c) in enumerate(zip(rt.reps, n.carriers)):
        if rep.object_carrier != c:
            raise LoweringError(f"tape {i}: representation {rep.name} names "
                                f"{rep.object_carrier!r}, tape carries {c!r}")
    carriers = rt.name_carriers()
    subs, stm = {}, dict(n.stm)
    for label in n.labels:
        s = n.stm.get(label)
        if not isinstance(s, (Assign, BranchFn)):
            continue
        f = rt.realizers.get(s.fn)
        if f is None:
            raise LoweringError(f"no realizer for {s.fn!r} used at label {label!r}")
        want = tuple(carriers[t] for t in s.args)
        if isinstance(s, Assign):
            if not isinstance(f, MultiFunction):
                raise LoweringError(f"realizer for {s.fn!r} at {label!r} must be a multi-function")
            if tuple(f.inputs) != want or f.output != carriers[s.tape]:
                raise LoweringError(
                    f"realizer for {s.fn!r} at {label!r} has signature {tuple(f.inputs)} -> "
                    f"{f.output}, need {want} -> {carriers[s.tape]}")
        else:
            if not isinstance(f, TestFunction):
                raise LoweringError(f"realizer for {s.fn!r} at {label!r} must be a test")
            if tuple(f.inputs) != want:
                raise LoweringError(f"realizer for {s.fn!r} at {label!r} takes "
                                    f"{tuple(f.inputs)}, need {want}")
        fn = f.name or s.fn
        if subs.get(fn, f) is not f:
            raise LoweringError(f"two different realizers are named {fn!r}")
        subs[fn] = f
        stm[label] = replace(s, fn=fn)
    return replace(n, name=name or n.name, carriers=carriers, stm=stm, subroutines=subs)


def check_machine_realization_empirical(m: Machine, n: Machine, reps: Sequence,
                                        samples, d: int, max_steps: int = 100_000) -> list:
    """Check that ``f_m`` realizes ``f_n`` via ``reps = (gamma_0, ..., gamma_L)``.

    ``samples`` are ``(names, objects)`` pairs for the ``k`` input tapes.
    """
    reps = tuple(reps)
    return check_realization(m, n, reps[1:n.k + 1], reps[0], samples, d, max_steps)


# -- word machines for stream machines ----------------------------------------

def generate_word_machine(n: Machine, gen: Mapping[str, WordFunction],
                          name: str | None = None) -> Machine:
    """Word machine with the skeleton of the stream machine ``n``.

    Each assignment subroutine is replaced by a monotone generator and each
    test by a monotone-constant one.
    """
    bad = [c for c in n.carriers if c != "stream"]
    if bad:
        raise LoweringError(f"{n.name}: all tapes must carry streams, found {bad}")
    subs = {}
    for label in n.labels:
        s = n.stm.get(label)
        if not isinstance(s, (Assign, BranchFn)):
            continue
        h = gen.get(s.fn)
        if h is None:
            raise LoweringError(f"no generator for {s.fn!r} used at label {label!r}")
        if h.arity != len(s.args):
            raise LoweringError(f"generator for {s.fn!r} has arity {h.arity}, "
                                f"label {label!r} passes {len(s.args)}")
        if isinstance(s, Assign):
            if h.declared != MONOTONE:
                raise ClassViolation(f"generator for assignment {s.fn!r} must be monotone, "
                                     f"{h.name!r} is {h.declared}")
            subs[s.fn] = MultiFunction.from_word_function(h, s.fn)
        else:
            if h.declared != MONOTONE_CONSTANT:
                raise ClassViolation(f"generator for test {s.fn!r} must be monotone-constant, "
                                     f"{h.name!r} is {h.declared}")
            subs[s.fn] = TestFunction.from_word_function(h, s.fn)
    return replace(n, name=name or n.name, carriers=("word",) * len(n.carriers),
                   subroutines=subs)


def precision(c: Configuration) -> int | None:
    """Minimum length of the word-valued cells of ``c`` (None if there are none)."""
    lengths = [len(v) for t in c.tapes for v in t.cells.values() if isinstance(v, str)]
    return min(lengths) if lengths else None


def config_prefix(c: Configuration, c2: Configuration, blank: str = "_") -> bool:
    """Same label and heads, and every cell of ``c`` is a prefix of the one in ``c2``."""
    if c.label != c2.label or c.heads != c2.heads or len(c.tapes) != len(c2.tapes):
        return False
    for t, t2 in zip(c.tapes, c2.tapes):
        for j in set(t.cells) | set(t2.cells):
            a, b = t.cells.get(j, Sym(blank)), t2.cells.get(j, Sym(blank))
            if isinstance(a, str) and isinstance(b, str):
                if not b.startswith(a):
                    return False
            elif a != b:
                return False
    return True


@dataclass
class EvalResult:
    output: str
    precision_used: int
    chain: list = field(default_factory=list)


def doubling(limit: int) -> list:
    """Precision schedule ``1, 2, 4, ...`` ending exactly at ``limit``."""
    out, e = [], 1
    while e < limit:
        out.append(e)
        e *= 2
    return out + [limit]


def eval_stream_machine(m_words: Machine, q: Sequence[Stream], demand: int, limit: int,
                        max_steps: int = 100_000, check_configs: bool = False,
                        schedule: Iterable[int] | None = None):
    """Run ``m_words`` on ``q^{<e}`` for ``e = 1, 2, ...`` until the output has ``demand`` symbols.

    Accepted outputs must form a prefix chain; a break raises
    :class:`ClassViolation`.  With ``check_configs``, the configurations of
    consecutive accepting runs are compared step by step with
    :func:`config_prefix`.  ``schedule`` replaces ``1..limit`` by another
    increasing sequence of precisions, e.g. :func:`doubling`.  Returns
    :class:`EvalResult` or :class:`InsufficientPrecision`.
    """
    chain = []
    last = None
    for e in (range(1, limit + 1) if schedule is None else schedule):
        hist = [] if check_configs else None
        out = run(m_words, stream_prefix(q, e), max_steps=max_steps, history=hist)
        if not isinstance(out, Accepted):
            if last is not None:
                raise ClassViolation(f"{m_words.name}: accepted at e={last[0]} but not at e={e}")
            continue
        w = out.output
        if last is not None:
            if not w.startswith(last[1]):
                raise ClassViolation(f"{m_words.name}: output {w!r} at e={e} does not extend "
                                     f"{last[1]!r} at e={last[0]}")
            if check_configs and last[2] is not None:
                for n, (c, c2) in enumerate(zip(last[2], hist)):
                    if not config_prefix(c, c2, m_words.blank):
                        raise ClassViolation(f"{m_words.name}: configurations diverge at "
                                             f"step {n} between e={last[0]} and e={e}")
        chain.append(w)
        last = (e, w, hist)
        if len(w) >= demand:
            return EvalResult(w, e, chain)
    return InsufficientPrecision(limit, None if last is None else (last[1],))
