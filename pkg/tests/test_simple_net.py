import itertools
import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolcat.formula import And, LeafRef, Or, negate, parse_sequent
from boolcat.sampling import random_correct_net, random_formula
from boolcat.simple_net import (
    NetError,
    PruningBudgetError,
    SimpleNet,
    cut,
    equal,
    is_correct,
    leq,
    net_from_json,
    net_sum,
    net_to_json,
    prunings,
    surviving_leaves,
    validate,
    validate_net,
)

from . import fixtures as fx


def test_worked_examples_validate():
    assert validate_net(fx.exa1()) == []
    assert validate_net(fx.exa2()) == []


def test_missing_unit_link_is_reported():
    links = fx.EXA2_LINKS - {(LeafRef(3, "L"), LeafRef(3, "L"))}
    kinds = [v.kind for v in validate(fx.EXA2_SEQ, links)]
    assert kinds == ["unit"]


def test_positive_to_positive_link_is_ill_typed():
    links = fx.EXA1_LINKS | {(LeafRef(0, "R"), LeafRef(2, "R"))}
    assert [v.kind for v in validate(fx.EXA1_SEQ, links)] == ["ill-typed"]


def test_links_on_f_leaves_rejected():
    seq = parse_sequent("t | f")
    links = {(LeafRef(0, "L"), LeafRef(0, "L")), (LeafRef(0, "L"), LeafRef(0, "R"))}
    assert any(v.kind == "unit" for v in validate(seq, links))


def test_sixteen_prunings_on_first_example():
    assert len(list(prunings(fx.exa1()))) == 16


def test_conjunction_free_sequent_has_one_pruning():
    net = SimpleNet.build(parse_sequent("~a | a"), {(LeafRef(0, "L"), LeafRef(0, "R"))})
    ps = list(prunings(net))
    assert len(ps) == 1 and ps[0].links == net.links


def test_worked_examples_correct():
    assert is_correct(fx.exa1())
    assert is_correct(fx.exa2())


def test_crossed_prenet_incorrect():
    assert not is_correct(fx.bad())


def test_pruning_cap(monkeypatch):
    seq = parse_sequent("(a & a) & (a & a), ~a")
    net = SimpleNet(seq, frozenset())
    monkeypatch.setenv("BOOLCAT_PRUNING_CAP", "2")
    with pytest.raises(PruningBudgetError):
        is_correct(net)
    with pytest.raises(PruningBudgetError):
        list(prunings(net))


def _survivors_oracle(f, choices, i, path=""):
    if isinstance(f, And):
        pick = choices[(i, path)]
        return _survivors_oracle(f.left if pick == "L" else f.right, choices, i, path + pick)
    if isinstance(f, Or):
        return _survivors_oracle(f.left, choices, i, path + "L") | _survivors_oracle(
            f.right, choices, i, path + "R"
        )
    return {LeafRef(i, path)}


def test_survivors_match_recursive_oracle():
    rng = random.Random(11)
    for _ in range(200):
        seq = tuple(random_formula(rng, max_depth=3) for _ in range(2))
        net = random_correct_net(rng, seq) or SimpleNet.build(seq)
        for p in prunings(net):
            expected = set()
            for i, f in enumerate(seq):
                expected |= _survivors_oracle(f, p.choices, i)
            assert p.survivors == expected
            assert p.links == {l for l in net.links if l[0] in expected and l[1] in expected}


def test_fast_correctness_agrees_with_enumeration():
    rng = random.Random(5)
    for _ in range(200):
        seq = tuple(random_formula(rng, max_depth=2) for _ in range(rng.randint(1, 3)))
        net = random_correct_net(rng, seq, density=rng.random())
        if net is None:
            continue
        links = [l for l in net.links if l[0] != l[1]]
        sub = SimpleNet.build(seq, rng.sample(links, len(links) // 2))
        for n in (net, sub):
            assert is_correct(n) == all(p.links for p in prunings(n))


def test_correctness_monotone():
    rng = random.Random(3)
    for _ in range(100):
        seq = (random_formula(rng), random_formula(rng))
        net = random_correct_net(rng, seq)
        if net is None:
            continue
        assert is_correct(net)
        full = random_correct_net(rng, seq, density=1.0)
        assert leq(net, net_sum(net, full)) and is_correct(net_sum(net, full))


def test_equality():
    assert equal(fx.exa1(), fx.exa1())
    other = SimpleNet(fx.EXA1_SEQ, frozenset(fx.EXA1_LINKS - {(LeafRef(3, "L"), LeafRef(2, "R"))}))
    assert not equal(fx.exa1(), other)


def test_sum_laws():
    f = fx.exa1()
    assert net_sum(f, f) == f
    with pytest.raises(NetError):
        net_sum(fx.exa1(), fx.exa2())


def test_cut_reproduces_composite_of_examples():
    got = cut(fx.exa1(), 3, fx.exa2(), 0)
    assert got.sequent == fx.CUT12_SEQ
    assert got.links == fx.CUT12_LINKS
    assert is_correct(got)


def test_cut_requires_dual_formulas():
    with pytest.raises(NetError):
        cut(fx.exa1(), 0, fx.exa2(), 0)


def test_json_roundtrip():
    for net in (fx.exa1(), fx.exa2()):
        assert net_from_json(net_to_json(net)) == net
