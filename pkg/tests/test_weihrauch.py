import random
from dataclasses import replace

import pytest

from gtm.dsl import parse, render
from gtm.errors import ReductionError
from gtm.fixtures import ORACLE, WEIHRAUCH_MACHINES, load, random_machine
from gtm.library import BUILTINS, STREAM_FUNCTIONS
from gtm.machine import Assign, run
from gtm.names import Stream
from gtm.weihrauch import (
    brute_force_single_use, build_graph, check_single_use, g_labels, split_G, split_H,
    verify_reduction,
)


def neg(p):
    return STREAM_FUNCTIONS["neg"](p)


def streams(n, seed):
    rng = random.Random(seed)
    return [Stream.periodic("".join(rng.choice("01") for _ in range(rng.randint(0, 9))),
                            "".join(rng.choice("01") for _ in range(rng.randint(1, 6))))
            for _ in range(n)]


def words_machine(body, labels, tapes="0:word, 1:word", inputs=1):
    return parse(f"machine t; tapes {tapes}; inputs {inputs}; labels {labels}; {body}")


def test_graph_examples():
    m = parse("machine t; tapes 0:word; labels a b c final lf;"
              "a: right 0 -> b; b: left 0 -> c; c: write 0 '#' -> lf;")
    g = build_graph(m)
    assert g.edges == {("a", "b"), ("b", "c"), ("c", "lf")}
    assert g.out("lf") == []
    g = build_graph(load("branch_dup"))
    assert g.out("l0") == ["a", "b"]


def test_single_use_examples():
    assert check_single_use(load("w_apply"), ORACLE).ok
    loop = words_machine("l0: 0 := neg(1) -> l0;", "l0 final lf")
    use = check_single_use(loop, "neg")
    assert not use.ok and use.path == ("l0", "l0")
    seq = words_machine("l0: 0 := neg(1) -> l1; l1: 0 := neg(0) -> lf;", "l0 l1 final lf")
    use = check_single_use(seq, "neg")
    assert not use.ok and use.path == ("l0", "l1")
    branch = words_machine("l0: if head(1) then a else b; a: 0 := neg(1) -> lf; b: 0 := neg(1) -> lf;",
                           "l0 a b final lf")
    assert check_single_use(branch, "neg").ok


def test_unreachable_second_use_is_fine():
    m = words_machine("l0: 0 := neg(1) -> lf; dead: 0 := neg(1) -> l0;", "l0 dead final lf")
    assert check_single_use(m, "neg").ok and brute_force_single_use(m, "neg")


def test_violation_paths_are_real_paths():
    rng = random.Random(1)
    seen = 0
    for _ in range(300):
        m = random_machine(rng)
        use = check_single_use(m, "neg")
        if use.ok:
            continue
        seen += 1
        assert use.path[0] == m.initial
        assert sum(l in set(g_labels(m, "neg")) for l in use.path) >= 2
        edges = build_graph(m).edges
        assert all((a, b) in edges for a, b in zip(use.path, use.path[1:]))
    assert seen > 30


def test_single_use_matches_brute_force():
    rng = random.Random(2)
    verdicts = set()
    for _ in range(400):
        m = random_machine(rng, n_labels=rng.randint(2, 8))
        fast = check_single_use(m, "neg").ok
        assert fast == brute_force_single_use(m, "neg")
        verdicts.add(fast)
    assert verdicts == {True, False}


def test_split_apply_g_gives_identity_and_copy():
    m = load("w_apply")
    h, g = split_H(m, ORACLE), split_G(m, ORACLE)
    assert h.stm["l0"] == Assign(0, "id.stream", (1,), "lf")
    assert g.k == 2 and g.carriers == ("stream", "stream", "stream")
    assert g.stm["l0"] == Assign(0, "id.stream", (2,), "lf")
    p, q = streams(2, 0)
    assert run(h, (p,)).output == p
    assert run(g, (p, q)).output == q


def test_split_without_g_statements():
    m = load("w_none")
    h, g = split_H(m, ORACLE), split_G(m, ORACLE)
    assert replace(h, name=m.name) == m
    p, q = streams(2, 1)
    assert run(g, (p, q)).output.prefix(40) == run(m, (p,)).output.prefix(40)
    vs = verify_reduction(m, ORACLE, neg, streams(10, 2), 64)
    assert all(v.status == "verified" for v in vs)


def test_split_preserves_labels_and_edges():
    for name in WEIHRAUCH_MACHINES:
        m = load(name)
        h, g = split_H(m, ORACLE), split_G(m, ORACLE)
        assert build_graph(g) == build_graph(m)
        gs = set(g_labels(m, ORACLE))
        assert h.labels == m.labels
        assert {e for e in build_graph(h).edges if e[0] not in gs} == \
            {e for e in build_graph(m).edges if e[0] not in gs}
        assert all(h.stm[l].next == h.final for l in gs)
        assert parse(render(h)) == h and parse(render(g)) == g


def test_split_G_moves_work_tapes_up():
    g = split_G(load("w_post"), ORACLE)
    assert g.stm["l0"] == Assign(3, "tail.stream", (1,), "l1")
    assert g.stm["l1"] == Assign(4, "id.stream", (2,), "l2")
    assert g.stm["l2"] == Assign(0, "xor.stream", (1, 4), "lf")


def test_M_H_runs_m_when_g_is_not_reached():
    m = load("w_branch")
    h = split_H(m, ORACLE)
    zero_head = Stream.periodic("0", "1")
    assert run(h, (zero_head,)).output == zero_head  # argument of g
    one_head = Stream.periodic("1", "0")
    assert run(h, (one_head,)).output.prefix(30) == run(m, (one_head,)).output.prefix(30)


@pytest.mark.parametrize("name", WEIHRAUCH_MACHINES)
def test_decomposition_identity(name):
    vs = verify_reduction(load(name), ORACLE, neg, streams(40, name), 64)
    assert [v.status for v in vs] == ["verified"] * 40


def test_mutated_G_is_refuted():
    m = load("w_post")
    g = split_G(m, ORACLE)
    broken = replace(g, stm=dict(g.stm, l1=Assign(4, "id.stream", (1,), "l2")))
    vs = verify_reduction(m, ORACLE, neg, streams(20, 3), 64, m_g=broken)
    assert any(v.status == "refuted" for v in vs)


def test_split_requirements():
    twice = words_machine("l0: 0 := neg(1) -> l1; l1: 0 := neg(0) -> lf;", "l0 l1 final lf")
    with pytest.raises(ReductionError, match="l0 -> l1"):
        split_H(twice, "neg")
    two_inputs = load("xor_dup")
    with pytest.raises(ReductionError):
        split_G(two_inputs, "dup")
    mixed = parse("machine t; tapes 0:word, 1:stream; inputs 1; labels l0 final lf;"
                  "l0: if head.stream(1) then lf else lf;")
    assert split_H(mixed, "neg").stm == mixed.stm


def test_split_H_needs_matching_output_carrier():
    m = parse("machine t; tapes 0:word, 1:stream, 2:word; inputs 1; labels l0 final lf;"
              "l0: 2 := id.word(0) -> lf;", {})
    with pytest.raises(ReductionError):
        split_H(replace(m, stm={"l0": Assign(2, "neg.stream", (1,), "lf")},
                        subroutines={"neg.stream": BUILTINS["neg.stream"]}), "neg.stream")
