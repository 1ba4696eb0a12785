"""Generalized Turing machines: data model, small-step semantics, execution.

A machine has tapes ``0..L``; tape 0 is the output tape and tapes ``1..k``
are input tapes.  Each tape ``i`` has a carrier set (named by a string key
into :data:`CARRIERS`) and every cell holds either a carrier value or a
work-alphabet symbol.  Work symbols are wrapped in :class:`Sym` so they can
never be confused with carrier values such as words.

Statements are the six forms ``right``, ``left``, ``write``, symbol branch,
assignment ``i := f(i1..in)`` (``f`` may be multi-valued) and function branch
``if f(i1..in) then l' else l''`` (``f`` partial with values ``"0"``/``"1"``;
``"0"`` selects the ``then`` label).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Any, Callable, Iterable, Mapping, Sequence, Union

from .errors import KindError, MachineError, SubroutineError
from .names import LazySeq, Stream


# -- carriers -----------------------------------------------------------

def _is_int(v):
    return isinstance(v, int) and not isinstance(v, bool)


def _is_rational(v):
    return isinstance(v, Fraction) or _is_int(v)


def _is_interval(v):
    return (isinstance(v, tuple) and len(v) == 2
            and all(_is_rational(a) for a in v) and v[0] < v[1])


CARRIERS: dict = {
    "word": lambda v: isinstance(v, str),
    "stream": lambda v: isinstance(v, Stream),
    "nat": lambda v: _is_int(v) and v >= 0,
    "int": _is_int,
    "rat": _is_rational,
    # exact reals; rational samples stand in for arbitrary reals
    "real": _is_rational,
    "interval": _is_interval,
    "sri": lambda v: isinstance(v, LazySeq),
    "opaque": lambda v: v is not None and not isinstance(v, Sym),
}


def register_carrier(name: str, predicate: Callable[[Any], bool]) -> None:
    """Add a carrier set; ``predicate`` decides membership."""
    if name in CARRIERS and CARRIERS[name] is not predicate:
        raise ValueError(f"carrier {name!r} is already registered")
    CARRIERS[name] = predicate


def in_carrier(carrier: str, value) -> bool:
    if isinstance(value, Sym):
        return False
    try:
        return CARRIERS[carrier](value)
    except KeyError:
        raise MachineError(f"unknown carrier {carrier!r}") from None


@dataclass(frozen=True)
class Sym:
    """A work-alphabet symbol written on a tape."""

    char: str

    def __repr__(self):
        return f"Sym({self.char!r})"


# -- statements ---------------------------------------------------------

@dataclass(frozen=True)
class MoveRight:
    tape: int
    next: str


@dataclass(frozen=True)
class MoveLeft:
    tape: int
    next: str


@dataclass(frozen=True)
class WriteSym:
    tape: int
    symbol: str
    next: str


@dataclass(frozen=True)
class BranchSym:
    tape: int
    symbol: str
    then: str
    else_: str


@dataclass(frozen=True)
class Assign:
    tape: int
    fn: str
    args: tuple
    next: str


@dataclass(frozen=True)
class BranchFn:
    fn: str
    args: tuple
    then: str
    else_: str


Statement = Union[MoveRight, MoveLeft, WriteSym, BranchSym, Assign, BranchFn]

STATEMENT_KINDS = {
    MoveRight: "right", MoveLeft: "left", WriteSym: "write",
    BranchSym: "if-symbol", Assign: "assign", BranchFn: "if-function",
}


def successors(stmt: Statement) -> tuple:
    """Labels a statement can continue to (then before else)."""
    if isinstance(stmt, (BranchSym, BranchFn)):
        return (stmt.then, stmt.else_)
    return (stmt.next,)


def statement_tapes(stmt: Statement) -> tuple:
    if isinstance(stmt, Assign):
        return (stmt.tape,) + tuple(stmt.args)
    if isinstance(stmt, BranchFn):
        return tuple(stmt.args)
    return (stmt.tape,)


def relabel(stmt: Statement, mapping: Mapping[str, str]) -> Statement:
    if isinstance(stmt, (BranchSym, BranchFn)):
        return replace(stmt, then=mapping.get(stmt.then, stmt.then),
                       else_=mapping.get(stmt.else_, stmt.else_))
    return replace(stmt, next=mapping.get(stmt.next, stmt.next))


# -- subroutines --------------------------------------------------------

@dataclass(frozen=True, eq=False)
class MultiFunction:
    """A multi-function ``X_{i1} x ... x X_{in} => X_i``.

    ``choose(args, token)`` returns one admissible value or ``None`` when the
    value set is empty.  ``enumerate(args)``, when given, lists the whole
    (finite) value set and ``choose`` must pick from it.
    """

    inputs: tuple
    output: str
    choose: Callable[[tuple, int], Any]
    enumerate: Callable[[tuple], list] | None = None
    name: str = ""
    word_class: str | None = None

    @classmethod
    def single(cls, fn: Callable, inputs: Sequence[str], output: str, name: str = "",
               word_class: str | None = None) -> "MultiFunction":
        """Wrap a partial single-valued function (``None`` = undefined)."""
        def enum(args):
            v = fn(*args)
            return [] if v is None else [v]
        return cls(tuple(inputs), output, lambda args, token: fn(*args), enum, name, word_class)

    @classmethod
    def choice(cls, values: Callable[..., list], inputs: Sequence[str], output: str,
               name: str = "") -> "MultiFunction":
        """Multi-function given by a finite value set; token ``t`` selects item ``t mod n``."""
        def choose(args, token):
            vs = values(*args)
            return vs[token % len(vs)] if vs else None
        return cls(tuple(inputs), output, choose, lambda args: list(values(*args)), name)

    @classmethod
    def from_word_function(cls, h, name: str = "") -> "MultiFunction":
        return cls.single(h.fn, ("word",) * h.arity, "word", name or h.name, h.declared)

    def __repr__(self):
        return f"MultiFunction({self.name or '?'}: {' x '.join(self.inputs) or '()'} => {self.output})"


@dataclass(frozen=True, eq=False)
class TestFunction:
    """A partial test with values ``"0"`` (then) and ``"1"`` (else)."""

    __test__ = False  # not a pytest class

    inputs: tuple
    evaluate: Callable[..., str | None]
    name: str = ""
    word_class: str | None = None

    @classmethod
    def from_word_function(cls, h, name: str = "") -> "TestFunction":
        return cls(("word",) * h.arity, h.fn, name or h.name, h.declared)

    def __repr__(self):
        return f"TestFunction({self.name or '?'}: {' x '.join(self.inputs)} -> {{0,1}})"


Subroutine = Union[MultiFunction, TestFunction]


# -- machines and configurations ----------------------------------------

@dataclass(frozen=True)
class Machine:
    """A generalized Turing machine.

    ``labels[0]`` is the initial label; ``final`` must be one of ``labels``.
    ``carriers[i]`` names the carrier set of tape ``i``; ``L = len(carriers) - 1``.
    """

    name: str
    labels: tuple
    final: str
    work_alphabet: tuple
    blank: str
    k: int
    carriers: tuple
    stm: Mapping[str, Statement]
    subroutines: Mapping[str, Subroutine] = field(default_factory=dict)

    __hash__ = None

    @property
    def initial(self) -> str:
        return self.labels[0]

    @property
    def L(self) -> int:
        return len(self.carriers) - 1


@dataclass(frozen=True)
class Tape:
    cells: Mapping[int, Any]
    head: int = 0

    __hash__ = None


@dataclass(frozen=True)
class Configuration:
    label: str
    tapes: tuple

    __hash__ = None

    def cell(self, i: int, j: int, blank: str = "_"):
        return self.tapes[i].cells.get(j, Sym(blank))

    def scanned(self, i: int, blank: str = "_"):
        t = self.tapes[i]
        return t.cells.get(t.head, Sym(blank))

    @property
    def heads(self) -> tuple:
        return tuple(t.head for t in self.tapes)

    def with_label(self, label: str) -> "Configuration":
        return Configuration(label, self.tapes)

    def with_head(self, i: int, m: int) -> "Configuration":
        tapes = list(self.tapes)
        tapes[i] = Tape(self.tapes[i].cells, m)
        return Configuration(self.label, tuple(tapes))

    def with_cell(self, i: int, value, blank: str = "_") -> "Configuration":
        t = self.tapes[i]
        cells = dict(t.cells)
        if value == Sym(blank):
            cells.pop(t.head, None)
        else:
            cells[t.head] = value
        tapes = list(self.tapes)
        tapes[i] = Tape(cells, t.head)
        return Configuration(self.label, tuple(tapes))


def initial_configuration(m: Machine, inputs: Sequence) -> Configuration:
    """Label ``l0``, all heads at 0, input ``i`` in cell 0 of tape ``i``."""
    inputs = tuple(inputs)
    if len(inputs) != m.k:
        raise KindError(f"machine {m.name!r} takes {m.k} inputs, got {len(inputs)}")
    tapes = [Tape({})]
    for i, x in enumerate(inputs, start=1):
        if not in_carrier(m.carriers[i], x):
            raise KindError(f"input {i} = {x!r} is not in carrier {m.carriers[i]!r}")
        tapes.append(Tape({0: x}))
    tapes.extend(Tape({}) for _ in range(m.L - m.k))
    return Configuration(m.initial, tuple(tapes))


# -- step results and run outcomes ---------------------------------------

EMPTY_DOMAIN = "empty-domain"
TEST_UNDEFINED = "test-undefined"
ARGUMENT_KIND = "argument-kind"


@dataclass(frozen=True)
class Next:
    config: Configuration
    consumed: bool = False
    changed: tuple | None = None  # (tape, cell index) written by this step

    __hash__ = None


@dataclass(frozen=True)
class Final:
    pass


@dataclass(frozen=True)
class Blocked:
    reason: str
    detail: str = ""
    steps: int | None = None


@dataclass(frozen=True)
class Accepted:
    output: Any
    steps: int

    __hash__ = None


@dataclass(frozen=True)
class Rejected:
    """Reached the final label but output cell 0 is not in the output carrier."""

    steps: int
    content: Any = None

    __hash__ = None


@dataclass(frozen=True)
class BudgetExceeded:
    steps: int


def _subroutine(m: Machine, fn_id: str) -> Subroutine:
    try:
        return m.subroutines[fn_id]
    except KeyError:
        raise MachineError(f"machine {m.name!r} has no subroutine {fn_id!r}") from None


def _statement(m: Machine, label: str) -> Statement:
    try:
        return m.stm[label]
    except KeyError:
        raise MachineError(f"no statement for label {label!r} in {m.name!r}") from None


def _arguments(m: Machine, c: Configuration, args: Sequence[int]):
    values = []
    for a in args:
        x = c.scanned(a, m.blank)
        if isinstance(x, Sym):
            return None, f"tape {a} scans work symbol {x.char!r}"
        values.append(x)
    return tuple(values), ""


def _write_value(m: Machine, c: Configuration, stmt: Assign, value) -> Next:
    if not in_carrier(m.carriers[stmt.tape], value):
        raise SubroutineError(
            f"{stmt.fn} returned {value!r}, not in carrier {m.carriers[stmt.tape]!r} of tape {stmt.tape}")
    c2 = c.with_cell(stmt.tape, value, m.blank).with_label(stmt.next)
    return Next(c2, True, (stmt.tape, c.tapes[stmt.tape].head))


def step(m: Machine, c: Configuration, token: int = 0):
    """One step of the successor relation.

    Returns :class:`Next`, :class:`Final` (no successor: final label) or
    :class:`Blocked` (no successor: empty assignment, undefined test, or a
    work symbol where a carrier value is required).  ``token`` resolves the
    choice of a multi-valued assignment and is ignored by other statements.
    """
    if c.label == m.final:
        return Final()
    s = _statement(m, c.label)
    if isinstance(s, MoveRight):
        return Next(c.with_head(s.tape, c.tapes[s.tape].head + 1).with_label(s.next))
    if isinstance(s, MoveLeft):
        return Next(c.with_head(s.tape, c.tapes[s.tape].head - 1).with_label(s.next))
    if isinstance(s, WriteSym):
        return Next(c.with_cell(s.tape, Sym(s.symbol), m.blank).with_label(s.next),
                    False, (s.tape, c.tapes[s.tape].head))
    if isinstance(s, BranchSym):
        hit = c.scanned(s.tape, m.blank) == Sym(s.symbol)
        return Next(c.with_label(s.then if hit else s.else_))
    f = _subroutine(m, s.fn)
    args, why = _arguments(m, c, s.args)
    if args is None:
        return Blocked(ARGUMENT_KIND, why)
    if isinstance(s, Assign):
        value = f.choose(args, token)
        if value is None:
            return Blocked(EMPTY_DOMAIN, f"{s.fn} has no value at label {c.label!r}")
        return _write_value(m, c, s, value)
    verdict = f.evaluate(*args)
    if verdict == "0":
        return Next(c.with_label(s.then))
    if verdict == "1":
        return Next(c.with_label(s.else_))
    if verdict is None:
        return Blocked(TEST_UNDEFINED, f"{s.fn} undefined at label {c.label!r}")
    raise SubroutineError(f"test {s.fn} returned {verdict!r}, expected '0' or '1'")


def output_of(m: Machine, c: Configuration):
    """``Accepted``-style output content of a final configuration, or ``None``."""
    x = c.cell(0, 0, m.blank)
    return x if in_carrier(m.carriers[0], x) else None


def render_value(x, width: int = 24) -> str:
    if isinstance(x, Sym):
        return x.char
    if isinstance(x, Stream):
        return x.prefix(width) + "..."
    if isinstance(x, tuple) and len(x) == 2:
        return f"[{x[0]};{x[1]}]"
    if isinstance(x, LazySeq):
        return repr(x)
    return str(x)


def _trace_record(m, n, c, s, result, token):
    rec = {
        "step": n,
        "label": c.label,
        "kind": STATEMENT_KINDS[type(s)],
        "tape": s.tape if hasattr(s, "tape") else None,
        "heads": list(result.config.heads),
        "changed": None,
        "token": token if result.consumed else None,
    }
    if result.changed is not None:
        i, j = result.changed
        rec["changed"] = {"tape": i, "index": j,
                          "value": render_value(result.config.cell(i, j, m.blank))}
    return rec


def seed_tokens(seed: int):
    """Replayable choice tokens: ``seed`` itself, then 31-bit draws from ``random.Random(seed)``."""
    rng = random.Random(seed)
    yield seed
    while True:
        yield rng.getrandbits(31)


def run(m: Machine, inputs: Sequence, choices: Iterable[int] | None = None,
        max_steps: int = 100_000, trace: Callable[[dict], None] | None = None,
        history: list | None = None):
    """Execute one computation from the initial configuration.

    One token is taken from ``choices`` per assignment (0 once exhausted).
    Returns :class:`Accepted`, :class:`Rejected`, :class:`Blocked` or
    :class:`BudgetExceeded`.  ``trace`` receives one record per step;
    ``history`` collects every configuration visited.
    """
    tokens = iter(choices if choices is not None else ())
    c = initial_configuration(m, inputs)
    if history is not None:
        history.append(c)
    for n in itertools.count():
        if c.label == m.final:
            out = output_of(m, c)
            if out is None:
                return Rejected(n, c.cell(0, 0, m.blank))
            return Accepted(out, n)
        if n >= max_steps:
            return BudgetExceeded(n)
        s = _statement(m, c.label)
        token = next(tokens, 0) if isinstance(s, Assign) else 0
        result = step(m, c, token)
        if isinstance(result, Blocked):
            return Blocked(result.reason, result.detail, n)
        if trace is not None:
            trace(_trace_record(m, n, c, s, result, token))
        c = result.config
        if history is not None:
            history.append(c)


@dataclass
class Outcomes:
    """Result of exhaustive exploration of all computations on one input.

    ``all_maximal_accepting`` is True when every maximal computation accepts,
    False when some finite maximal computation does not, and None
    (inconclusive) when only budget-truncated paths prevent a decision.
    """

    values: list
    all_maximal_accepting: bool | None
    accepting_leaves: int = 0
    rejecting_leaves: int = 0
    truncated: int = 0

    @property
    def function_value(self):
        """The value set of ``f_M`` when decided, else None."""
        if self.all_maximal_accepting is None:
            return None
        return self.values if self.all_maximal_accepting else []


def enumerate_outcomes(m: Machine, inputs: Sequence, max_steps: int = 10_000,
                       max_branch: int = 64) -> Outcomes:
    """Explore the whole computation tree up to depth ``max_steps``."""
    values: list = []
    acc = rej = cut = 0
    stack = [(initial_configuration(m, inputs), 0)]
    while stack:
        c, depth = stack.pop()
        if c.label == m.final:
            out = output_of(m, c)
            if out is None:
                rej += 1
            else:
                acc += 1
                if out not in values:
                    values.append(out)
            continue
        if depth >= max_steps:
            cut += 1
            continue
        s = _statement(m, c.label)
        if isinstance(s, Assign):
            f = _subroutine(m, s.fn)
            if f.enumerate is None:
                raise MachineError(f"subroutine {s.fn} cannot enumerate its values")
            args, _ = _arguments(m, c, s.args)
            if args is None:
                rej += 1
                continue
            vs = f.enumerate(args)
            if len(vs) > max_branch:
                raise MachineError(f"{s.fn} has {len(vs)} values, more than max_branch={max_branch}")
            if not vs:
                rej += 1
            for v in reversed(vs):
                stack.append((_write_value(m, c, s, v).config, depth + 1))
            continue
        result = step(m, c)
        if isinstance(result, Blocked):
            rej += 1
        else:
            stack.append((result.config, depth + 1))
    verdict = False if rej else (None if cut else True)
    return Outcomes(values, verdict, acc, rej, cut)
