"""Command-line interface: ``gtm <command> ...``.

Exit status is 0 on success, 1 when a check finds a refutation or
violation, and 2 for usage, parse and input errors.  Every command accepts
``--format lines`` for one JSON object per output line.

Values on the command line are written as::

    rho:1/3      interval-record stream naming the rational 1/3
    beta:0110    the beta name of a binary word
    0110(01)     the eventually periodic stream 0110 01 01 ...
    abc          a word, or a number for numeric carriers
"""

from __future__ import annotations

import argparse
import configparser
import json
import random
import sys
from fractions import Fraction

from . import analysis, dsl, library, machine, names, realize, represent, weihrauch
from .errors import GTMError
from .fixtures import SOURCES

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class Out:
    """Writes either human-readable text or JSON lines."""

    def __init__(self, fmt: str, stream=None):
        self.fmt = fmt
        self.stream = stream or sys.stdout

    def emit(self, text: str, **record):
        if self.fmt == "lines":
            print(json.dumps(record or {"text": text}, sort_keys=True, default=str),
                  file=self.stream)
        else:
            print(text, file=self.stream)


# -- value syntax -------------------------------------------------------------

def parse_rational(text: str) -> Fraction:
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError):
        raise UsageError(f"not a rational number: {text!r}") from None


def parse_stream(text: str) -> names.Stream:
    if text.startswith("rho:"):
        return represent.rho_encode(parse_rational(text[4:]))
    if text.startswith("beta:"):
        return names.beta_encode(text[5:])
    if text.endswith(")") and "(" in text:
        u, v = text[:-1].split("(", 1)
        try:
            return names.Stream.periodic(u, v)
        except (ValueError, GTMError) as exc:
            raise UsageError(f"bad periodic stream {text!r}: {exc}") from None
    raise UsageError(f"cannot read {text!r} as a stream; use rho:Q, beta:W or U(V)")


def parse_value(text: str, carrier: str):
    """Read a command-line value for a tape with the given carrier."""
    if carrier == "stream":
        return parse_stream(text)
    if carrier == "sri":
        if not text.startswith("rho:"):
            raise UsageError("interval sequences are written rho:Q")
        return represent.rho_intervals(parse_rational(text[4:]))
    if carrier in ("rat", "real"):
        return parse_rational(text)
    if carrier in ("nat", "int"):
        try:
            return int(text)
        except ValueError:
            raise UsageError(f"not an integer: {text!r}") from None
    if carrier == "interval":
        a, _, b = text.partition(",")
        return parse_rational(a), parse_rational(b)
    if carrier == "word" and text.startswith("word:"):
        return text[5:]
    return text


def _int_at_least(low: int):
    def check(text: str) -> int:
        try:
            v = int(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"not an integer: {text!r}") from None
        if v < low:
            raise argparse.ArgumentTypeError(f"must be at least {low}, got {v}")
        return v
    return check


def fmt_interval(iv) -> str:
    return f"[{iv[0]}; {iv[1]}]"


# -- helpers ------------------------------------------------------------------

def load_machine(path: str, registry=None) -> machine.Machine:
    if path.startswith("fixture:"):
        key = path[8:]
        if key not in SOURCES:
            raise UsageError(f"unknown fixture {key!r}; known: {', '.join(sorted(SOURCES))}")
        return dsl.parse(SOURCES[key], registry, source=path)
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return dsl.parse(text, registry, source=path)


def read_config(path: str) -> configparser.ConfigParser:
    cfg = configparser.ConfigParser()
    cfg.optionxform = str  # keep fn ids as written
    try:
        with open(path, encoding="utf-8") as fh:
            cfg.read_file(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return cfg


def builtin(name: str):
    try:
        return library.lookup(name)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None


def representation(name: str):
    try:
        return represent.REPRESENTATIONS[name]
    except KeyError:
        raise UsageError(f"unknown representation {name!r}; known: "
                         f"{', '.join(sorted(represent.REPRESENTATIONS))}") from None


def show(x, width: int) -> str:
    return machine.render_value(x, width)


def inputs_for(m: machine.Machine, texts) -> tuple:
    texts = texts or []
    if len(texts) != m.k:
        raise UsageError(f"{m.name} takes {m.k} inputs, got {len(texts)}")
    return tuple(parse_value(t, m.carriers[i + 1]) for i, t in enumerate(texts))


# -- commands -----------------------------------------------------------------

def cmd_check(args, out: Out) -> int:
    try:
        m = load_machine(args.file)
    except dsl.ParseError as exc:
        if out.fmt != "lines":
            raise
        for d in exc.diagnostics:
            out.emit(str(d), severity=d.severity, code=d.code, line=d.line,
                     column=d.column, message=d.message)
        return EXIT_USAGE
    warnings = [d for d in dsl.validate(m) if d.severity == dsl.WARNING]
    for d in warnings:
        out.emit(f"{args.file}: warning[{d.code}]: {d.message}", severity=d.severity,
                 code=d.code, message=d.message, label=d.label)
    out.emit(f"{args.file}: ok ({len(m.labels)} labels, {m.L + 1} tapes)",
             status="ok", labels=len(m.labels), tapes=m.L + 1)
    return EXIT_OK


def cmd_fmt(args, out: Out) -> int:
    text = dsl.render(load_machine(args.file))
    if out.fmt == "lines":
        out.emit(text, source=text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def cmd_run(args, out: Out) -> int:
    m = load_machine(args.file)
    xs = inputs_for(m, args.inputs)
    if args.all:
        res = machine.enumerate_outcomes(m, xs, max_steps=args.max_steps)
        verdict = {True: "total", False: "not-total", None: "inconclusive"}[res.all_maximal_accepting]
        values = [show(v, args.show) for v in res.values]
        out.emit(f"outcomes {{{', '.join(values)}}} ({verdict})", outcomes=values,
                 all_maximal_accepting=res.all_maximal_accepting)
        return EXIT_OK

    def trace(rec):
        if out.fmt == "lines":
            out.emit("", **rec)
        else:
            changed = rec["changed"]
            extra = f" tape{changed['tape']}[{changed['index']}]={changed['value']}" if changed else ""
            out.emit(f"#{rec['step']} {rec['label']} {rec['kind']} heads={rec['heads']}{extra}")

    res = machine.run(m, xs, machine.seed_tokens(args.seed), args.max_steps,
                      trace if args.trace else None)
    if isinstance(res, machine.Accepted):
        out.emit(show(res.output, args.show), outcome="accepted",
                 output=show(res.output, args.show), steps=res.steps)
        return EXIT_OK
    if isinstance(res, machine.Blocked):
        out.emit(f"blocked ({res.reason}) after {res.steps} steps: {res.detail}",
                 outcome="blocked", reason=res.reason, steps=res.steps)
    elif isinstance(res, machine.Rejected):
        out.emit(f"rejected after {res.steps} steps: output cell holds {show(res.content, args.show)}",
                 outcome="rejected", steps=res.steps)
    else:
        out.emit(f"budget of {res.steps} steps exceeded", outcome="budget-exceeded",
                 steps=res.steps)
    return EXIT_FAIL


def _generators(path):
    gen = dict(library.GENERATORS)
    if path:
        cfg = read_config(path)
        if cfg.has_section("generators"):
            for fn, name in cfg.items("generators"):
                if name not in library.WORD_FUNCTIONS:
                    raise UsageError(f"unknown word function {name!r}")
                gen[fn] = library.WORD_FUNCTIONS[name]
    return gen


def cmd_eval(args, out: Out) -> int:
    n = load_machine(args.file)
    m = realize.generate_word_machine(n, _generators(args.generators))
    q = inputs_for(n, args.inputs)
    schedule = realize.doubling(args.limit) if args.schedule == "doubling" else None
    res = realize.eval_stream_machine(m, q, args.demand, args.limit, schedule=schedule)
    if isinstance(res, represent.InsufficientPrecision):
        out.emit(f"insufficient precision: fewer than {args.demand} symbols after "
                 f"{args.limit} input prefixes", status="insufficient-precision", limit=args.limit)
        return EXIT_FAIL
    word = res.output[:args.demand]
    out.emit(word, status="ok", output=word, precision=res.precision_used)
    if args.decode:
        records = names.complete_records(res.output, strict=False)
        iv = represent.running_intersection(iter(records), args.decode)
        if isinstance(iv, represent.InsufficientPrecision):
            out.emit(f"output records do not reach width 2^-{args.decode}",
                     status="insufficient-precision", records=iv.probes)
            return EXIT_FAIL
        out.emit(fmt_interval(iv), interval=[str(iv[0]), str(iv[1])])
    return EXIT_OK


def cmd_encode(args, out: Out) -> int:
    v = args.value
    if args.kind == "natural":
        w = names.encode_natural(int(v))
    elif args.kind == "integer":
        w = names.encode_integer(int(v))
    elif args.kind == "rational":
        w = names.encode_rational(parse_rational(v))
    elif args.kind == "interval":
        a, _, b = v.partition(",")
        w = names.encode_interval(parse_rational(a), parse_rational(b))
    elif args.kind == "word":
        w = names.iota_encode(v)
    else:
        w = "".join(names.encode_interval(*iv)
                    for iv in represent.rho_intervals(parse_rational(v)).take(args.records))
    out.emit(w, kind=args.kind, name=w)
    return EXIT_OK


def cmd_decode(args, out: Out) -> int:
    w = args.bits
    if args.kind == "natural":
        text = str(names.decode_natural(w))
    elif args.kind == "integer":
        text = str(names.decode_integer(w))
    elif args.kind == "rational":
        text = str(names.decode_rational(w))
    elif args.kind == "interval":
        text = fmt_interval(names.decode_interval(w))
    elif args.kind == "word":
        text = names.beta_decode(w)
    else:
        iv = represent.rho_decode(w, args.precision)
        if isinstance(iv, represent.InsufficientPrecision):
            best = "" if iv.best is None else f"; best {fmt_interval(iv.best)}"
            out.emit(f"insufficient precision after {iv.probes} records{best}",
                     status="insufficient-precision", records=iv.probes)
            return EXIT_FAIL
        text = fmt_interval(iv)
    out.emit(text, kind=args.kind, value=text)
    return EXIT_OK


def realizer_table(path: str, n: machine.Machine) -> realize.RealizerTable:
    cfg = read_config(path)
    if not cfg.has_section("realizers"):
        raise UsageError(f"{path}: missing [realizers] section")
    realizers = {fn: builtin(name) for fn, name in cfg.items("realizers")}
    reps = []
    section = cfg["representations"] if cfg.has_section("representations") else {}
    for i in range(n.L + 1):
        name = section.get(str(i), section.get("default", "rho"))
        reps.append(representation(name))
    return realize.RealizerTable(realizers, tuple(reps))


def cmd_lower(args, out: Out) -> int:
    n = load_machine(args.file)
    m = realize.lower_machine(n, realizer_table(args.realizers, n), args.name)
    text = dsl.render(m)
    if out.fmt == "lines":
        out.emit(text, source=text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _read_samples(path):
    rows = []
    try:
        with open(path, encoding="utf-8") as fh:
            for line in fh:
                line = line.split("#", 1)[0].strip()
                if line:
                    rows.append(tuple(parse_rational(t) for t in line.replace(",", " ").split()))
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return rows


def cmd_checkreal(args, out: Out) -> int:
    f, g = builtin(args.realizer), builtin(args.function)
    rows = _read_samples(args.samples)
    samples = [(tuple(represent.rho_encode(x) for x in row), row) for row in rows]
    arity = len(g.inputs)
    if len(getattr(f, "inputs", ())) != arity:
        raise UsageError(f"{args.realizer} and {args.function} take different numbers of arguments")
    bad = [i for i, row in enumerate(rows) if len(row) != arity]
    if bad:
        raise UsageError(f"sample line {bad[0] + 1} has the wrong number of values for {args.function}")
    verdicts = realize.check_realization(f, g, (represent.rho,) * arity, represent.rho,
                                         samples, args.precision)
    for v, row in zip(verdicts, rows):
        out.emit(f"{' '.join(map(str, row))}: {v.status}{' ' + v.detail if v.detail else ''}",
                 sample=v.sample, status=v.status)
    return EXIT_FAIL if any(v.status == realize.REFUTED_VERDICT for v in verdicts) else EXIT_OK


def _coefficients(spec: str):
    if spec == "geometric":
        return analysis.geometric
    coeffs = [c for row in _read_samples(spec) for c in row]

    def a(j):
        return coeffs[j] if j < len(coeffs) else Fraction(0)
    return a


def cmd_series(args, out: Out) -> int:
    re_, _, im_ = args.z.partition(",")
    z = analysis.QComplex(parse_rational(re_), parse_rational(im_ or "0"))
    inp = analysis.PowerSeriesInput(_coefficients(args.coeffs), parse_rational(args.r),
                                    parse_rational(args.M), z)
    rep = analysis.series_partial(inp, args.precision, report=True)
    p_re, p_im = analysis.series_sum(inp)
    iv_re = represent.rho_decode(p_re, args.precision)
    iv_im = represent.rho_decode(p_im, args.precision)
    out.emit(f"b_{args.precision} = {rep.value} ({rep.terms} terms, q = {rep.q})",
             value_re=str(rep.value.re), value_im=str(rep.value.im), terms=rep.terms,
             q=str(rep.q))
    out.emit(f"Re s in {fmt_interval(iv_re)}", part="re", interval=[str(iv_re[0]), str(iv_re[1])])
    out.emit(f"Im s in {fmt_interval(iv_im)}", part="im", interval=[str(iv_im[0]), str(iv_im[1])])
    return EXIT_OK


def cmd_real(args, out: Out) -> int:
    x, y = parse_stream(args.x), parse_stream(args.y)
    if args.op == "add":
        iv = represent.rho_decode(analysis.interval_add(x, y), args.precision)
        if isinstance(iv, represent.InsufficientPrecision):
            out.emit("insufficient precision", status="insufficient-precision")
            return EXIT_FAIL
        out.emit(fmt_interval(iv), interval=[str(iv[0]), str(iv[1])])
    else:
        answer = analysis.approx_leq_k(x, y, args.precision)
        out.emit(answer, answer=answer, k=args.precision)
    return EXIT_OK


def cmd_wsplit(args, out: Out) -> int:
    m = load_machine(args.file)
    use = weihrauch.check_single_use(m, args.oracle)
    if not use.ok:
        out.emit(f"{args.oracle} may be used twice: {' -> '.join(use.path)}",
                 status="violation", path=list(use.path))
        return EXIT_FAIL
    parts = {"H": weihrauch.split_H(m, args.oracle), "G": weihrauch.split_G(m, args.oracle)}
    for tag, part in parts.items():
        text = dsl.render(part)
        if args.out_dir:
            path = f"{args.out_dir.rstrip('/')}/{part.name}.gtm"
            with open(path, "w", encoding="utf-8") as fh:
                fh.write(text)
            out.emit(f"wrote {path}", part=tag, path=path)
        elif out.fmt == "lines":
            out.emit(text, part=tag, source=text)
        else:
            sys.stdout.write(f"// M_{tag}\n{text}")
    return EXIT_OK


def random_streams(n: int, seed: int) -> list:
    rng = random.Random(seed)
    out = []
    for _ in range(n):
        u = "".join(rng.choice("01") for _ in range(rng.randint(0, 12)))
        v = "".join(rng.choice("01") for _ in range(rng.randint(1, 9)))
        out.append(names.Stream.periodic(u, v))
    return out


def cmd_wverify(args, out: Out) -> int:
    m = load_machine(args.machine)
    f = builtin(args.oracle_impl)
    if not isinstance(f, machine.MultiFunction) or len(f.inputs) != 1:
        raise UsageError(f"{args.oracle_impl} must be a one-argument function")

    def h(p):
        return f.choose((p,), 0)

    verdicts = weihrauch.verify_reduction(m, args.oracle, h, random_streams(args.samples, args.seed),
                                          args.demand)
    for v in verdicts:
        out.emit(f"sample {v.sample}: {v.status}", sample=v.sample, status=v.status)
    refuted = sum(v.status == "refuted" for v in verdicts)
    out.emit(f"{len(verdicts) - refuted}/{len(verdicts)} samples agree on {args.demand} symbols",
             refuted=refuted, samples=len(verdicts))
    return EXIT_FAIL if refuted else EXIT_OK


EXAMPLES = ("addition", "coin", "series", "leq", "split")


def cmd_examples(args, out: Out) -> int:
    d = args.precision
    name = args.name
    if name == "addition":
        x, y = Fraction(1, 3), Fraction(1, 6)
        iv = represent.rho_decode(analysis.interval_add(represent.rho_encode(x),
                                                        represent.rho_encode(y)), d)
        out.emit(f"{x} + {y} in {fmt_interval(iv)} (width {iv[1] - iv[0]})",
                 interval=[str(iv[0]), str(iv[1])], width=str(iv[1] - iv[0]))
    elif name == "coin":
        m = dsl.parse(SOURCES["coin"])
        res = machine.enumerate_outcomes(m, ())
        out.emit(f"coin outcomes: {sorted(res.values)}", outcomes=sorted(res.values))
    elif name == "series":
        inp = analysis.PowerSeriesInput(analysis.geometric, Fraction(1, 2), 1, Fraction(1, 4))
        iv = represent.rho_decode(analysis.series_sum(inp)[0], d)
        out.emit(f"sum of (1/4)^j in {fmt_interval(iv)}", interval=[str(iv[0]), str(iv[1])])
    elif name == "leq":
        for x, y in ((0, 1), (2, 0), (0, 0)):
            a = analysis.approx_leq_k(represent.rho_encode(x), represent.rho_encode(y), d)
            out.emit(f"{x} <=_{d} {y}: {a}", x=x, y=y, answer=a)
    else:
        m = dsl.parse(SOURCES["w_post"])
        out.emit(dsl.render(weihrauch.split_H(m, "neg.stream")), part="H")
        out.emit(dsl.render(weihrauch.split_G(m, "neg.stream")), part="G")
    return EXIT_OK


# -- argument parsing ---------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "lines"), default="human",
                        help="output style (lines = one JSON object per line)")
    p = argparse.ArgumentParser(prog="gtm", description="generalized Turing machines")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("check", parents=[common], help="parse and validate a machine")
    s.add_argument("file")
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("fmt", parents=[common], help="print a machine in canonical form")
    s.add_argument("file")
    s.set_defaults(func=cmd_fmt)

    s = sub.add_parser("run", parents=[common], help="run a machine")
    s.add_argument("file")
    s.add_argument("--inputs", nargs="*", default=[])
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--max-steps", type=_int_at_least(1), default=100_000)
    s.add_argument("--trace", action="store_true")
    s.add_argument("--all", action="store_true", help="explore every computation")
    s.add_argument("--show", type=_int_at_least(0), default=64, help="stream symbols to print")
    s.set_defaults(func=cmd_run)

    s = sub.add_parser("eval", parents=[common], help="evaluate a stream machine via word machines")
    s.add_argument("file")
    s.add_argument("--inputs", nargs="*", default=[])
    s.add_argument("--demand", type=_int_at_least(0), required=True)
    s.add_argument("--limit", type=_int_at_least(1), default=4096)
    s.add_argument("--schedule", choices=("linear", "doubling"), default="linear",
                   help="input prefix lengths to try: 1,2,3,... or 1,2,4,...")
    s.add_argument("--generators", help="INI file with a [generators] section")
    s.add_argument("--decode", type=_int_at_least(0), metavar="D",
                   help="also decode the output as a real to width 2^-D")
    s.set_defaults(func=cmd_eval)

    kinds = ("natural", "integer", "rational", "interval", "real", "word")
    s = sub.add_parser("encode", parents=[common], help="encode a value as a name")
    s.add_argument("--kind", choices=kinds, required=True)
    s.add_argument("--records", type=_int_at_least(1), default=8, help="records of a real name")
    s.add_argument("value")
    s.set_defaults(func=cmd_encode)

    s = sub.add_parser("decode", parents=[common], help="decode a name")
    s.add_argument("--kind", choices=kinds, required=True)
    s.add_argument("--precision", type=_int_at_least(0), default=10)
    s.add_argument("bits")
    s.set_defaults(func=cmd_decode)

    s = sub.add_parser("lower", parents=[common], help="replace subroutines by realizers")
    s.add_argument("file")
    s.add_argument("--realizers", required=True, help="INI file: [realizers], [representations]")
    s.add_argument("--name")
    s.set_defaults(func=cmd_lower)

    s = sub.add_parser("checkreal", parents=[common], help="check a realizer on rational samples")
    s.add_argument("--samples", required=True, help="file with one sample (rationals) per line")
    s.add_argument("--realizer", default="add.rho")
    s.add_argument("--function", default="plus")
    s.add_argument("--precision", type=_int_at_least(0), default=50)
    s.set_defaults(func=cmd_checkreal)

    s = sub.add_parser("series", parents=[common], help="sum a power series")
    s.add_argument("--coeffs", default="geometric", help="'geometric' or a file of rationals")
    s.add_argument("--r", required=True)
    s.add_argument("--M", required=True)
    s.add_argument("--z", required=True, help="RE,IM")
    s.add_argument("--precision", type=_int_at_least(0), default=20)
    s.set_defaults(func=cmd_series)

    s = sub.add_parser("real", parents=[common], help="operations on real names")
    s.add_argument("op", choices=("add", "leq"))
    s.add_argument("x")
    s.add_argument("y")
    s.add_argument("--precision", type=_int_at_least(0), default=20)
    s.set_defaults(func=cmd_real)

    s = sub.add_parser("wsplit", parents=[common], help="split a machine around an oracle")
    s.add_argument("file")
    s.add_argument("--oracle", required=True)
    s.add_argument("--out-dir")
    s.set_defaults(func=cmd_wsplit)

    s = sub.add_parser("wverify", parents=[common], help="check the splitting identity")
    s.add_argument("--machine", required=True)
    s.add_argument("--oracle", required=True)
    s.add_argument("--oracle-impl", required=True)
    s.add_argument("--samples", type=_int_at_least(1), default=100)
    s.add_argument("--demand", type=_int_at_least(0), default=64)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_wverify)

    s = sub.add_parser("examples", parents=[common], help="run a built-in example")
    s.add_argument("name", choices=EXAMPLES)
    s.add_argument("--precision", type=_int_at_least(0), default=30)
    s.set_defaults(func=cmd_examples)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    out = Out(args.format)
    try:
        return args.func(args, out)
    except dsl.ParseError as exc:
        for d in exc.diagnostics:
            print(str(d), file=sys.stderr)
        return EXIT_USAGE
    except (UsageError, GTMError, ValueError) as exc:
        print(f"gtm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
