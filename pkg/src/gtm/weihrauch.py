"""Splitting a machine around an oracle function ``g``.

If every computation of ``M`` applies ``g`` at most once, ``M`` factors as
``f_M(p) = f_{M_G}(p, h(f_{M_H}(p)))`` for any realizer ``h`` of ``g``:
``M_H`` stops right before the call and outputs its argument, ``M_G``
reads the oracle answer from an extra input tape instead of calling ``g``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, replace
from typing import Callable, Sequence

from .errors import ReductionError
from .library import BUILTINS
from .machine import (
    Accepted, Assign, BranchFn, BranchSym, Machine, MoveLeft, MoveRight, WriteSym, run, successors,
)
from .names import Stream


@dataclass(frozen=True)
class MachineGraph:
    vertices: tuple
    edges: frozenset

    def out(self, label: str) -> list:
        return sorted(b for a, b in self.edges if a == label)


def build_graph(m: Machine) -> MachineGraph:
    """Labels with an edge ``l -> l'`` whenever ``Stm(l)`` can continue to ``l'``."""
    edges = {(label, nxt) for label, s in m.stm.items() for nxt in successors(s)}
    return MachineGraph(tuple(m.labels), frozenset(edges))


def g_labels(m: Machine, g_id: str) -> list:
    return [l for l in m.labels if isinstance(m.stm.get(l), Assign) and m.stm[l].fn == g_id]


@dataclass(frozen=True)
class SingleUse:
    ok: bool
    path: tuple = ()  # from the initial label through two g-labels, when violated


def _bfs(m: Machine, starts, parent):
    todo = deque(starts)
    while todo:
        a = todo.popleft()
        s = m.stm.get(a)
        if s is None:
            continue
        for b in successors(s):
            if b not in parent:
                parent[b] = a
                todo.append(b)


def _path(parent, target):
    out = [target]
    while parent[out[-1]] is not None:
        out.append(parent[out[-1]])
    return out[::-1]


def check_single_use(m: Machine, g_id: str) -> SingleUse:
    """Whether no path from the initial label visits two (possibly equal) ``g``-labels."""
    gs = set(g_labels(m, g_id))
    parent = {m.initial: None}
    _bfs(m, [m.initial], parent)
    for a in [l for l in m.labels if l in gs and l in parent]:
        # search from the successors of ``a``; ``a`` itself may be revisited
        inner = {}
        first = list(dict.fromkeys(successors(m.stm[a])))
        for b in first:
            inner.setdefault(b, None)
        _bfs(m, first, inner)
        hits = [l for l in m.labels if l in gs and l in inner]
        if hits:
            tail = _path(inner, hits[0])
            return SingleUse(False, tuple(_path(parent, a) + tail))
    return SingleUse(True)


def brute_force_single_use(m: Machine, g_id: str, max_len: int | None = None) -> bool:
    """Enumerate every path from the initial label of length up to ``max_len`` edges."""
    gs = set(g_labels(m, g_id))
    max_len = 2 * len(m.labels) if max_len is None else max_len
    stack = [(m.initial, 1 if m.initial in gs else 0, 0)]
    while stack:
        label, hits, n = stack.pop()
        if hits >= 2:
            return False
        if n >= max_len or label not in m.stm:
            continue
        for b in successors(m.stm[label]):
            stack.append((b, hits + (b in gs), n + 1))
    return True


def _require(m: Machine, g_id: str):
    if m.k != 1:
        raise ReductionError(f"{m.name}: splitting needs exactly one input tape, k={m.k}")
    use = check_single_use(m, g_id)
    if not use.ok:
        raise ReductionError(f"{m.name}: {g_id!r} may be used twice on path {' -> '.join(use.path)}")
    for l in g_labels(m, g_id):
        if len(m.stm[l].args) != 1:
            raise ReductionError(f"{g_id!r} at {l!r} must take exactly one argument")


def _identity_id(carrier: str) -> str:
    fn = f"id.{carrier}"
    if fn not in BUILTINS:
        raise ReductionError(f"no identity subroutine for carrier {carrier!r}")
    return fn


def split_H(m: Machine, g_id: str, name: str | None = None) -> Machine:
    """``M_H``: each ``i := g(i1) -> l'`` becomes ``0 := id(i1) -> l_f``."""
    _require(m, g_id)
    stm = dict(m.stm)
    subs = {k: v for k, v in m.subroutines.items() if k != g_id}
    for l in g_labels(m, g_id):
        s = m.stm[l]
        c = m.carriers[s.args[0]]
        if c != m.carriers[0]:
            raise ReductionError(f"argument of {g_id!r} at {l!r} has carrier {c!r}, "
                                 f"output tape carries {m.carriers[0]!r}")
        fn = _identity_id(c)
        stm[l] = Assign(0, fn, s.args, m.final)
        subs[fn] = BUILTINS[fn]
    return replace(m, name=name or f"{m.name}_H", stm=stm, subroutines=_used(stm, subs))


def _shift(t: int) -> int:
    return t + 1 if t >= 2 else t


def _retape(s):
    if isinstance(s, (MoveRight, MoveLeft, WriteSym, BranchSym)):
        return replace(s, tape=_shift(s.tape))
    if isinstance(s, Assign):
        return replace(s, tape=_shift(s.tape), args=tuple(map(_shift, s.args)))
    return replace(s, args=tuple(map(_shift, s.args)))


def split_G(m: Machine, g_id: str, name: str | None = None) -> Machine:
    """``M_G``: a second input tape carries the oracle answer.

    Input tapes must be ``1..k``, so the answer tape is tape 2 and the work
    tapes of ``m`` move up by one.  Each ``i := g(i1) -> l'`` becomes
    ``i := id(2) -> l'``; the head of tape 2 is never moved.
    """
    _require(m, g_id)
    gs = g_labels(m, g_id)
    f = m.subroutines.get(g_id)
    if f is not None:
        answer = f.output
    elif gs:
        answer = m.carriers[m.stm[gs[0]].tape]
    else:
        answer = m.carriers[1]
    for l in gs:
        if m.carriers[m.stm[l].tape] != answer:
            raise ReductionError(f"{g_id!r} at {l!r} writes to a tape not carrying {answer!r}")
    stm = {}
    subs = {k: v for k, v in m.subroutines.items() if k != g_id}
    for l, s in m.stm.items():
        if l in gs:
            fn = _identity_id(answer)
            stm[l] = Assign(_shift(s.tape), fn, (2,), s.next)
            subs[fn] = BUILTINS[fn]
        else:
            stm[l] = _retape(s)
    carriers = m.carriers[:2] + (answer,) + m.carriers[2:]
    return replace(m, name=name or f"{m.name}_G", k=2, carriers=carriers, stm=stm,
                   subroutines=_used(stm, subs))


def _used(stm, subs):
    names = {s.fn for s in stm.values() if isinstance(s, (Assign, BranchFn))}
    return {k: v for k, v in subs.items() if k in names}


def _symbols(x, d: int):
    if isinstance(x, Stream):
        return x.prefix(d)
    if isinstance(x, str):
        return x[:d]
    return x


@dataclass(frozen=True)
class ReductionVerdict:
    sample: int
    status: str  # verified | refuted | inconclusive
    left: object = None
    right: object = None


def verify_reduction(m: Machine, g_id: str, h: Callable, samples: Sequence, demand: int,
                     m_h: Machine | None = None, m_g: Machine | None = None,
                     max_steps: int = 100_000) -> list:
    """Compare ``f_M(p)`` with ``f_{M_G}(p, h(f_{M_H}(p)))`` on the first ``demand`` symbols."""
    m_h = m_h or split_H(m, g_id)
    m_g = m_g or split_G(m, g_id)
    out = []
    for n, p in enumerate(samples):
        left = run(m, (p,), max_steps=max_steps)
        mid = run(m_h, (p,), max_steps=max_steps)
        if not isinstance(left, Accepted) or not isinstance(mid, Accepted):
            out.append(ReductionVerdict(n, "inconclusive", left, mid))
            continue
        right = run(m_g, (p, h(mid.output)), max_steps=max_steps)
        if not isinstance(right, Accepted):
            out.append(ReductionVerdict(n, "refuted", _symbols(left.output, demand), right))
            continue
        a, b = _symbols(left.output, demand), _symbols(right.output, demand)
        out.append(ReductionVerdict(n, "verified" if a == b else "refuted", a, b))
    return out
