import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from gtm.errors import KindError, MachineError
from gtm.fixtures import MONOTONE_MACHINES, load, random_machine
from gtm.library import BUILTINS
from gtm.machine import (
    ARGUMENT_KIND, EMPTY_DOMAIN, TEST_UNDEFINED, Accepted, Assign, Blocked, BranchSym,
    BudgetExceeded, Final, Machine, MoveRight, MultiFunction, Next, Rejected, Sym, WriteSym,
    enumerate_outcomes, initial_configuration, run, seed_tokens, step,
)


def machine(stm, carriers=("word", "word"), k=1, labels=None, work=("_", "#"), subs=None):
    labels = labels or tuple(stm) + ("lf",)
    return Machine("t", labels, "lf", work, "_", k, carriers, stm, subs or {})


def test_initial_configuration_examples():
    m = load("copy")
    c = initial_configuration(m, ("ab",))
    assert c.label == "l0" and c.heads == (0, 0)
    assert c.tapes[1].cells == {0: "ab"}
    assert c.cell(0, 0) == Sym("_")
    coin = load("coin")
    assert all(not t.cells for t in initial_configuration(coin, ()).tapes)


def test_initial_configuration_kind_errors():
    m = machine({"l0": MoveRight(0, "lf")}, carriers=("word", "rat", "word"), k=2)
    with pytest.raises(KindError):
        initial_configuration(m, ("01", "01"))
    with pytest.raises(KindError):
        initial_configuration(m, (Fraction(1, 2),))
    assert initial_configuration(m, (Fraction(1, 2), "01")).tapes[1].cells[0] == Fraction(1, 2)


def test_step_examples():
    m = machine({"l0": MoveRight(0, "l1"), "l1": BranchSym(1, "#", "l2", "lf"),
                 "l2": WriteSym(1, "#", "lf")})
    c = initial_configuration(m, ("01",))
    nxt = step(m, c)
    assert isinstance(nxt, Next) and nxt.config.heads == (1, 0) and nxt.config.label == "l1"
    marked = c.with_cell(1, Sym("#")).with_label("l1")
    assert step(m, marked).config.label == "l2"
    assert step(m, c.with_label("l1")).config.label == "lf"
    assert isinstance(step(m, c.with_label("lf")), Final)


def test_step_coin_tokens():
    m = load("coin")
    c = initial_configuration(m, ())
    assert step(m, c, 0).config.cell(0, 0) == "0"
    assert step(m, c, 1).config.cell(0, 0) == "1"
    assert step(m, c, 7).config.cell(0, 0) == "1"


def test_step_blocked_reasons():
    empty = MultiFunction.choice(lambda u: [], ("word",), "word", "empty")
    m = machine({"l0": Assign(0, "empty", (1,), "lf")}, subs={"empty": empty})
    assert step(m, initial_configuration(m, ("1",))).reason == EMPTY_DOMAIN
    stuck = load("stuck")
    assert step(stuck, initial_configuration(stuck, ("1",))).reason == TEST_UNDEFINED
    m = machine({"l0": WriteSym(1, "#", "l1"), "l1": Assign(0, "neg", (1,), "lf")},
                subs={"neg": BUILTINS["neg"]})
    c = step(m, initial_configuration(m, ("1",))).config
    assert step(m, c).reason == ARGUMENT_KIND


def test_writing_blank_keeps_map_sparse():
    m = machine({"l0": WriteSym(1, "_", "lf")})
    c = step(m, initial_configuration(m, ("01",))).config
    assert c.tapes[1].cells == {}


def test_run_examples():
    assert run(load("copy"), ("abc",)) == Accepted("abc", 1)
    out = run(load("stuck"), ("0",))
    assert isinstance(out, Blocked) and out.reason == TEST_UNDEFINED and out.steps == 0
    assert run(load("spin"), (), max_steps=100) == BudgetExceeded(100)


def test_run_rejects_when_output_cell_is_work_symbol():
    m = machine({"l0": WriteSym(0, "#", "lf")})
    out = run(m, ("0",))
    assert isinstance(out, Rejected) and out.content == Sym("#")


def test_run_unknown_label_and_subroutine():
    with pytest.raises(MachineError):
        run(machine({"l0": MoveRight(0, "l9")}, labels=("l0", "l9", "lf")), ("0",))
    with pytest.raises(MachineError):
        run(machine({"l0": Assign(0, "nope", (1,), "lf")}), ("0",))


def test_enumerate_outcomes_examples():
    o = enumerate_outcomes(load("coin"), ())
    assert sorted(o.values) == ["0", "1"] and o.all_maximal_accepting is True
    assert sorted(o.function_value) == ["0", "1"]
    o = enumerate_outcomes(load("coin_loop"), (), max_steps=50)
    assert o.values == ["0"] and o.all_maximal_accepting is None and o.function_value is None
    o = enumerate_outcomes(load("copy"), ("ab",))
    assert o.values == ["ab"] and o.all_maximal_accepting is True
    o = enumerate_outcomes(load("stuck"), ("ab",))
    assert o.all_maximal_accepting is False and o.function_value == []


def test_enumerate_needs_enumerators():
    blind = MultiFunction(("word",), "word", lambda args, t: "0", None, "blind")
    m = machine({"l0": Assign(0, "blind", (1,), "lf")}, subs={"blind": blind})
    with pytest.raises(MachineError):
        enumerate_outcomes(m, ("0",))
    wide = MultiFunction.choice(lambda u: list("0123456789"), ("word",), "word", "wide")
    m = machine({"l0": Assign(0, "wide", (1,), "lf")}, subs={"wide": wide})
    with pytest.raises(MachineError):
        enumerate_outcomes(m, ("0",), max_branch=4)


def test_seed_tokens_are_replayable():
    a = [t for t, _ in zip(seed_tokens(42), range(20))]
    b = [t for t, _ in zip(seed_tokens(42), range(20))]
    assert a == b and a[0] == 42
    assert run(load("coin"), (), seed_tokens(0)).output == "0"
    assert run(load("coin"), (), seed_tokens(1)).output == "1"


def _random_inputs(rng, m):
    return tuple("".join(rng.choice("01") for _ in range(rng.randint(0, 6))) for _ in range(m.k))


def test_replay_determinism_on_random_machines():
    rng = random.Random(5)
    for _ in range(100):
        m = random_machine(rng)
        xs = _random_inputs(rng, m)
        t1, t2 = [], []
        r1 = run(m, xs, seed_tokens(3), max_steps=200, trace=t1.append)
        r2 = run(m, xs, seed_tokens(3), max_steps=200, trace=t2.append)
        assert r1 == r2 and t1 == t2


def test_single_valued_runs_ignore_the_oracle():
    rng = random.Random(6)
    for _ in range(100):
        m = random_machine(rng)
        xs = _random_inputs(rng, m)
        base = run(m, xs, max_steps=200)
        assert run(m, xs, seed_tokens(rng.randrange(1000)), max_steps=200) == base
        assert run(m, xs, iter(range(10**6)), max_steps=200) == base


def _diff(c, c2):
    heads = sum(t.head != t2.head for t, t2 in zip(c.tapes, c2.tapes))
    cells = 0
    for t, t2 in zip(c.tapes, c2.tapes):
        keys = set(t.cells) | set(t2.cells)
        cells += sum(t.cells.get(j) != t2.cells.get(j) for j in keys)
    return heads, cells


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**32))
def test_step_locality(seed):
    rng = random.Random(seed)
    m = random_machine(rng)
    hist = []
    run(m, _random_inputs(rng, m), seed_tokens(seed), max_steps=60, history=hist)
    for c, c2 in zip(hist, hist[1:]):
        heads, cells = _diff(c, c2)
        assert heads <= 1 and cells <= 1
        assert heads + cells <= 1


def _prefix_pair(rng, k, max_len=8):
    longer = tuple("".join(rng.choice("01") for _ in range(rng.randint(0, max_len))) for _ in range(k))
    shorter = tuple(w[:rng.randint(0, len(w))] for w in longer)
    return shorter, longer


@pytest.mark.parametrize("name", MONOTONE_MACHINES)
def test_word_machines_are_monotone(name):
    m = load(name)
    rng = random.Random(name)
    accepted = 0
    for _ in range(300):
        u, u2 = _prefix_pair(rng, m.k)
        r = run(m, u, max_steps=500)
        if not isinstance(r, Accepted):
            continue
        accepted += 1
        r2 = run(m, u2, max_steps=500)
        assert isinstance(r2, Accepted), (u, u2, r2)
        assert r2.output.startswith(r.output)
    assert accepted > 50


def test_strip_zeros_examples():
    m = load("strip_zeros")
    assert run(m, ("0010",)).output == "1100"
    assert isinstance(run(m, ("000",)), Blocked)
