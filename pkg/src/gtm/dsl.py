"""Text format for machines: tokenizer, parser, validator and renderer.

Grammar (``[...]`` optional, ``{...}`` repeated)::

    machine   := "machine" IDENT [";"] header labels {stmt}
    header    := "tapes" NAT ":" CARRIER {"," NAT ":" CARRIER} ";"
                 ["inputs" NAT ";"]
                 ["work" SYMBOL {SYMBOL} "blank" SYMBOL ";"]
    labels    := "labels" {IDENT} ["final" IDENT] {IDENT} ";"
    stmt      := IDENT ":" body "->" IDENT [";"]
               | IDENT ":" "if" cond "then" IDENT "else" IDENT [";"]
    body      := "right" NAT | "left" NAT | "write" NAT SYMBOL
               | NAT ":=" FN "(" [NAT {"," NAT}] ")"
    cond      := NAT "is" SYMBOL | FN "(" [NAT {"," NAT}] ")"

The first declared label is initial.  The final label is the one after the
``final`` keyword, or the last declared label when the keyword is absent.
Without a ``work`` section the blank is ``'_'`` and the work alphabet is
the blank plus every symbol written or tested, in order of appearance.
``//`` starts a comment.  Function names are resolved against a registry;
the format never defines function bodies.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from typing import Mapping

from .errors import GTMError
from .machine import (
    CARRIERS, Assign, BranchFn, BranchSym, Machine, MoveLeft, MoveRight,
    MultiFunction, TestFunction, WriteSym, successors, statement_tapes,
)

DEFAULT_BLANK = "_"
KEYWORDS = {"machine", "tapes", "inputs", "work", "blank", "labels", "final",
            "right", "left", "write", "if", "then", "else", "is"}

ERROR, WARNING = "error", "warning"


@dataclass(frozen=True)
class Diagnostic:
    severity: str
    message: str
    code: str
    line: int | None = None
    column: int | None = None
    source: str = "<string>"
    label: str | None = None

    def __str__(self):
        where = self.source
        if self.line is not None:
            where += f":{self.line}:{self.column or 1}"
        return f"{where}: {self.severity}[{self.code}]: {self.message}"


class ParseError(GTMError):
    def __init__(self, diagnostics):
        self.diagnostics = list(diagnostics)
        super().__init__("\n".join(str(d) for d in self.diagnostics))


# -- tokenizer ----------------------------------------------------------

_TOKEN = re.compile(r"""
    (?P<ws>[ \t\r]+|//[^\n]*)
  | (?P<nl>\n)
  | (?P<sym>'[^'\s]+')
  | (?P<op>:=|->|[:;,()])
  | (?P<nat>\d+(?![A-Za-z_]))
  | (?P<ident>[A-Za-z_][A-Za-z0-9_.]*)
  | (?P<bare>[^\s'():;,]+)
""", re.VERBOSE)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, source: str = "<string>") -> list:
    tokens = []
    line, line_start, pos = 1, 0, 0
    while pos < len(text):
        mo = _TOKEN.match(text, pos)
        if mo is None:
            raise ParseError([Diagnostic(ERROR, f"unexpected character {text[pos]!r}",
                                         "syntax", line, pos - line_start + 1, source)])
        kind = mo.lastgroup
        if kind == "nl":
            line, line_start = line + 1, mo.end()
        elif kind != "ws":
            tok = mo.group()
            if kind == "sym":
                tok = tok[1:-1]
            tokens.append(Token(kind, tok, line, pos - line_start + 1))
        pos = mo.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


# -- parser -------------------------------------------------------------

class _Parser:
    def __init__(self, tokens, source):
        self.toks = tokens
        self.i = 0
        self.source = source

    @property
    def tok(self):
        return self.toks[self.i]

    def fail(self, message, tok=None, code="syntax"):
        tok = tok or self.tok
        raise ParseError([Diagnostic(ERROR, message, code, tok.line, tok.column, self.source)])

    def advance(self):
        tok = self.tok
        self.i += 1
        return tok

    def at(self, text):
        return self.tok.kind in ("ident", "op") and self.tok.text == text

    def expect(self, text):
        if not self.at(text):
            self.fail(f"expected {text!r}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def nat(self):
        if self.tok.kind != "nat":
            self.fail(f"expected a number, found {self.tok.text or 'end of input'!r}")
        return int(self.advance().text)

    def ident(self, what="identifier"):
        if self.tok.kind != "ident" or self.tok.text in KEYWORDS:
            self.fail(f"expected {what}, found {self.tok.text or 'end of input'!r}")
        return self.advance()

    def symbol(self):
        if self.tok.kind in ("sym", "ident", "nat", "bare") and self.tok.text not in KEYWORDS:
            return self.advance().text
        self.fail(f"expected a work symbol, found {self.tok.text or 'end of input'!r}")

    def optional(self, text):
        if self.at(text):
            self.advance()

    def args(self):
        self.expect("(")
        out = []
        if not self.at(")"):
            out.append(self.nat())
            while self.at(","):
                self.advance()
                out.append(self.nat())
        self.expect(")")
        return tuple(out)

    def machine(self):
        self.expect("machine")
        name = self.ident("machine name").text
        self.optional(";")
        carriers, k, work, blank = None, 0, None, DEFAULT_BLANK
        seen = {}
        while self.tok.text in ("tapes", "inputs", "work") and self.tok.kind == "ident":
            head = self.advance()
            if head.text in seen:
                self.fail(f"duplicate {head.text!r} section", head)
            seen[head.text] = head
            if head.text == "tapes":
                carriers = self.tapes()
            elif head.text == "inputs":
                k = self.nat()
            else:
                symbols = []
                while not self.at("blank"):
                    if self.tok.kind == "eof":
                        self.fail("expected 'blank'")
                    symbols.append(self.symbol())
                self.expect("blank")
                blank = self.symbol()
                work = tuple(symbols)
            self.expect(";")
        if carriers is None:
            self.fail("missing 'tapes' section")
        labels, final, label_tokens = self.labels()
        stm, lines = {}, {}
        while self.tok.kind != "eof":
            label_tok, stmt = self.statement()
            if label_tok.text in stm:
                self.fail(f"duplicate statement for label {label_tok.text!r}", label_tok, "duplicate")
            stm[label_tok.text] = stmt
            lines[label_tok.text] = label_tok
        return dict(name=name, carriers=carriers, k=k, work=work, blank=blank,
                    labels=labels, final=final, stm=stm, lines=lines,
                    label_tokens=label_tokens, sections=seen)

    def tapes(self):
        decl = {}
        while True:
            tok = self.tok
            i = self.nat()
            self.expect(":")
            carrier = self.ident("carrier name").text
            if i in decl:
                self.fail(f"tape {i} declared twice", tok)
            decl[i] = carrier
            if not self.at(","):
                break
            self.advance()
        if sorted(decl) != list(range(len(decl))):
            self.fail("tapes must be numbered 0, 1, ..., L without gaps")
        return tuple(decl[i] for i in range(len(decl)))

    def labels(self):
        self.expect("labels")
        labels, final, toks = [], None, {}
        while not self.at(";"):
            if self.at("final"):
                kw = self.advance()
                if final is not None:
                    self.fail("only one final label may be declared", kw)
                final = self.ident("final label").text
                labels.append(final)
                toks[final] = self.toks[self.i - 1]
                continue
            tok = self.ident("label")
            if tok.text in toks:
                self.fail(f"label {tok.text!r} declared twice", tok)
            labels.append(tok.text)
            toks[tok.text] = tok
        self.expect(";")
        if not labels:
            self.fail("at least one label must be declared")
        return tuple(labels), final or labels[-1], toks

    def statement(self):
        label = self.ident("statement label")
        self.expect(":")
        if self.at("if"):
            self.advance()
            if self.tok.kind == "nat":
                tape = self.nat()
                self.expect("is")
                sym = self.symbol()
                self.expect("then")
                then = self.advance_label()
                self.expect("else")
                stmt = BranchSym(tape, sym, then.text, self.advance_label().text)
            else:
                fn = self.ident("function name").text
                args = self.args()
                self.expect("then")
                then = self.advance_label()
                self.expect("else")
                stmt = BranchFn(fn, args, then.text, self.advance_label().text)
        else:
            if self.at("right") or self.at("left"):
                cls = MoveRight if self.advance().text == "right" else MoveLeft
                tape = self.nat()
                self.expect("->")
                stmt = cls(tape, self.advance_label().text)
            elif self.at("write"):
                self.advance()
                tape = self.nat()
                sym = self.symbol()
                self.expect("->")
                stmt = WriteSym(tape, sym, self.advance_label().text)
            else:
                tape = self.nat()
                self.expect(":=")
                fn = self.ident("function name").text
                args = self.args()
                self.expect("->")
                stmt = Assign(tape, fn, args, self.advance_label().text)
        self.optional(";")
        return label, stmt

    def advance_label(self):
        return self.ident("label")


def parse(text: str, registry: Mapping | None = None, source: str = "<string>") -> Machine:
    """Parse and validate a machine; raise :class:`ParseError` with diagnostics."""
    from .library import BUILTINS

    reg = dict(BUILTINS)
    reg.update(registry or {})
    parts = _Parser(tokenize(text, source), source).machine()
    diags = []
    used = {}
    labels = set(parts["labels"])
    for label, stmt in parts["stm"].items():
        tok = parts["lines"][label]
        where = dict(line=tok.line, column=tok.column, source=source)
        if label not in labels:
            diags.append(Diagnostic(ERROR, f"unknown label {label!r}", "unknown-label", **where))
        for nxt in successors(stmt):
            if nxt not in labels:
                diags.append(Diagnostic(ERROR, f"unknown label {nxt!r}", "unknown-label", **where))
        if isinstance(stmt, (Assign, BranchFn)):
            if stmt.fn in reg:
                used[stmt.fn] = reg[stmt.fn]
            else:
                diags.append(Diagnostic(ERROR, f"unknown function {stmt.fn!r}", "unknown-fn", **where))
    if diags:
        raise ParseError(diags)
    work = parts["work"]
    if work is None:
        work = inferred_work_alphabet(parts["labels"], parts["stm"])
    m = Machine(parts["name"], parts["labels"], parts["final"], work, parts["blank"],
                parts["k"], parts["carriers"], parts["stm"], used)
    problems = [d for d in validate(m) if d.severity == ERROR]
    if problems:
        raise ParseError([_locate(d, parts, source) for d in problems])
    return m


def inferred_work_alphabet(labels, stm, blank: str = DEFAULT_BLANK) -> tuple:
    """Blank followed by the symbols used in statements, first use first."""
    out = [blank]
    for label in labels:
        s = stm.get(label)
        if isinstance(s, (WriteSym, BranchSym)) and s.symbol not in out:
            out.append(s.symbol)
    return tuple(out)


def _locate(d: Diagnostic, parts, source) -> Diagnostic:
    """Attach a source position to a validator diagnostic."""
    tok = parts["lines"].get(d.label) or parts["label_tokens"].get(d.label)
    if tok is None:
        section = {"alphabet": "work", "blank": "work", "tapes": "tapes", "carrier": "tapes"}
        tok = parts["sections"].get(section.get(d.code, ""))
    line, column = (tok.line, tok.column) if tok is not None else (1, 1)
    return Diagnostic(d.severity, d.message, d.code, line, column, source, d.label)


# -- validation ---------------------------------------------------------

def _diag(severity, message, code, label=None):
    return Diagnostic(severity, message, code, label=label)


def _symbol_ok(a) -> bool:
    return isinstance(a, str) and a != "" and "'" not in a and not any(ch.isspace() for ch in a)


def validate(m: Machine) -> list:
    """Check the structural side conditions of a machine.

    Returns a list of diagnostics; errors for violated conditions and
    warnings for labels unreachable from the initial label.
    """
    out = []
    labels = set(m.labels)
    if not m.labels:
        return [_diag(ERROR, "a machine needs at least one label", "labels")]
    if len(labels) != len(m.labels):
        out.append(_diag(ERROR, "labels must be distinct", "labels"))
    if m.final not in labels:
        out.append(_diag(ERROR, f"final label {m.final!r} is not declared", "unknown-label"))
    gamma = set(m.work_alphabet)
    if gamma & {"0", "1"}:
        out.append(_diag(ERROR, "Σ∩Γ must be empty: work alphabet contains "
                         + ", ".join(sorted(gamma & {"0", "1"})), "alphabet"))
    if m.blank not in gamma:
        out.append(_diag(ERROR, f"blank {m.blank!r} is not in the work alphabet", "blank"))
    for a in m.work_alphabet:
        if not _symbol_ok(a):
            out.append(_diag(ERROR, f"bad work symbol {a!r}", "alphabet"))
    if not 0 <= m.k <= m.L:
        out.append(_diag(ERROR, f"need 0 <= k <= L, got k={m.k}, L={m.L}", "tapes"))
    for i, c in enumerate(m.carriers):
        if c not in CARRIERS:
            out.append(_diag(ERROR, f"tape {i} has unknown carrier {c!r}", "carrier"))
    for label in m.labels:
        if label != m.final and label not in m.stm:
            out.append(_diag(ERROR, f"Stm must be total: no statement for label {label!r}",
                             "totality", label))
    for label, s in m.stm.items():
        if label == m.final:
            out.append(_diag(ERROR, f"the final label {label!r} must not have a statement",
                             "final-statement", label))
        elif label not in labels:
            out.append(_diag(ERROR, f"unknown label {label!r}", "unknown-label", label))
        for nxt in successors(s):
            if nxt not in labels:
                out.append(_diag(ERROR, f"unknown label {nxt!r}", "unknown-label", label))
        for t in statement_tapes(s):
            if not 0 <= t <= m.L:
                out.append(_diag(ERROR, f"tape index {t} is out of range 0..{m.L}", "tape", label))
        if isinstance(s, (WriteSym, BranchSym)) and s.symbol not in gamma:
            out.append(_diag(ERROR, f"symbol {s.symbol!r} is not in the work alphabet",
                             "alphabet", label))
        if isinstance(s, (Assign, BranchFn)):
            out.extend(_check_call(m, label, s))
    reachable = _reachable(m)
    for label in m.labels:
        if label not in reachable:
            out.append(_diag(WARNING, f"label {label!r} is unreachable from {m.initial!r}",
                             "unreachable", label))
    return out


def _check_call(m, label, s):
    f = m.subroutines.get(s.fn)
    if f is None:
        return [_diag(ERROR, f"unknown function {s.fn!r}", "unknown-fn", label)]
    out = []
    if isinstance(s, Assign) and not isinstance(f, MultiFunction):
        out.append(_diag(ERROR, f"{s.fn!r} is a test, not a multi-function", "fn-kind", label))
        return out
    if isinstance(s, BranchFn) and not isinstance(f, TestFunction):
        out.append(_diag(ERROR, f"{s.fn!r} is not a {{0,1}}-valued test", "fn-kind", label))
        return out
    if len(f.inputs) != len(s.args):
        out.append(_diag(ERROR, f"arity mismatch: {s.fn!r} takes {len(f.inputs)} arguments, "
                         f"got {len(s.args)}", "arity", label))
        return out
    if all(0 <= t <= m.L for t in statement_tapes(s)):
        got = tuple(m.carriers[t] for t in s.args)
        if got != tuple(f.inputs):
            out.append(_diag(ERROR, f"signature mismatch: {s.fn!r} expects "
                             f"{tuple(f.inputs)}, tapes carry {got}", "signature", label))
        if isinstance(s, Assign) and f.output != m.carriers[s.tape]:
            out.append(_diag(ERROR, f"signature mismatch: {s.fn!r} returns {f.output!r}, "
                             f"tape {s.tape} carries {m.carriers[s.tape]!r}", "signature", label))
    return out


def _reachable(m: Machine) -> set:
    seen = {m.initial}
    todo = deque([m.initial])
    while todo:
        s = m.stm.get(todo.popleft())
        if s is None:
            continue
        for nxt in successors(s):
            if nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    return seen


# -- rendering ----------------------------------------------------------

def _sym(a: str) -> str:
    return f"'{a}'"


def render_statement(s) -> str:
    if isinstance(s, MoveRight):
        return f"right {s.tape} -> {s.next}"
    if isinstance(s, MoveLeft):
        return f"left {s.tape} -> {s.next}"
    if isinstance(s, WriteSym):
        return f"write {s.tape} {_sym(s.symbol)} -> {s.next}"
    if isinstance(s, BranchSym):
        return f"if {s.tape} is {_sym(s.symbol)} then {s.then} else {s.else_}"
    args = ", ".join(map(str, s.args))
    if isinstance(s, Assign):
        return f"{s.tape} := {s.fn}({args}) -> {s.next}"
    return f"if {s.fn}({args}) then {s.then} else {s.else_}"


def render(m: Machine) -> str:
    """Canonical source text; ``parse(render(m))`` reproduces ``m``."""
    lines = [f"machine {m.name};"]
    lines.append("tapes " + ", ".join(f"{i}:{c}" for i, c in enumerate(m.carriers)) + ";")
    lines.append(f"inputs {m.k};")
    if (m.blank != DEFAULT_BLANK
            or tuple(m.work_alphabet) != inferred_work_alphabet(m.labels, m.stm)):
        lines.append("work " + " ".join(map(_sym, m.work_alphabet))
                     + f" blank {_sym(m.blank)};")
    decl = " ".join(f"final {l}" if l == m.final else l for l in m.labels)
    lines.append(f"labels {decl};")
    for label in m.labels:
        if label in m.stm:
            lines.append(f"{label}: {render_statement(m.stm[label])};")
    return "\n".join(lines) + "\n"
