import random

import pytest

from boolcat.extended_net import (
    AnchorBoundError,
    ExtendedNet,
    cut_extended,
    elimination_normal_forms,
    eliminate_anchor,
    equal_extended,
    ext_from_json,
    ext_to_json,
    find_nonconfluence_witness,
    from_simple,
    is_correct_extended,
    normalize,
    preceq_extended,
    validate_extended,
)
from boolcat.formula import LeafRef as R
from boolcat.simple_net import NetError, cut

from . import fixtures as fx


def test_both_extended_examples_validate_and_are_correct():
    for net in (fx.extnet_left(), fx.extnet_right()):
        assert validate_extended(net) == []
        assert is_correct_extended(net)


def test_anchor_with_single_out_link_is_invalid():
    links = dict(fx.extnet_left().counts)
    del links[("bb", R(3, "R"))]
    net = ExtendedNet.make(fx.EXA1_SEQ, {"bb": "b"}, links)
    assert any("out-degree" in v.message for v in validate_extended(net))


def test_unit_self_link_count_two_is_invalid():
    net = from_simple(fx.exa2())
    counts = net.counts
    counts[(R(3, "L"), R(3, "L"))] = 2
    bad = ExtendedNet.make(net.sequent, {}, counts)
    assert [v.kind for v in validate_extended(bad)] == ["unit"]


def test_anchored_delta_nabla_net_is_correct():
    assert validate_extended(fx.delta_nabla_anchored()) == []
    assert is_correct_extended(fx.delta_nabla_anchored())


def test_crossed_anchor_net_incorrect():
    # the crossed prenet, with the b-link routed through an anchor fed twice
    seq = fx.BAD_SEQ
    net = ExtendedNet.make(
        seq,
        {"k": "b"},
        {(R(0, "L"), "k"): 2, ("k", R(1, "R")): 2, (R(1, "L"), R(0, "R")): 1},
    )
    assert validate_extended(net) == []
    assert not is_correct_extended(net)


def test_first_cut_example_keeps_one_anchor():
    got = cut_extended(from_simple(fx.exa1()), 3, from_simple(fx.exa2()), 0)
    assert validate_extended(got) == []
    assert equal_extended(got, fx.cutreda_expected())


def test_second_cut_example_fans_out_four():
    got = cut_extended(fx.extnet_left(), 3, from_simple(fx.exa2()), 0)
    assert equal_extended(got, fx.cutredb_expected())
    (k, _), = got.anchors
    assert sum(1 for (s, _d), _c in got.links if s == k) == 4


def test_anchor_free_cut_agrees_with_simple_cut():
    got = cut_extended(from_simple(fx.exa1()), 3, from_simple(fx.exa2()), 0)
    simple = cut(fx.exa1(), 3, fx.exa2(), 0)
    reach = {p for p, _ in got.links if all(isinstance(x, R) for x in p)}
    assert reach <= simple.links


def test_eliminating_anchor_gives_direct_net():
    k = fx.delta_nabla_anchored().anchors[0][0]
    assert equal_extended(eliminate_anchor(fx.delta_nabla_anchored(), k), fx.delta_nabla_direct())
    with pytest.raises(NetError):
        eliminate_anchor(fx.delta_nabla_anchored(), "nope")


def test_two_delta_nabla_nets_differ():
    assert not equal_extended(fx.delta_nabla_anchored(), fx.delta_nabla_direct())


def test_equality_ignores_anchor_names():
    net = fx.extnet_right()
    renamed = ExtendedNet.make(
        net.sequent,
        {"x" + k: lab for k, lab in net.anchors},
        {tuple(("x" + n) if isinstance(n, str) else n for n in p): c for p, c in net.links},
    )
    assert equal_extended(net, renamed)
    assert equal_extended(net, normalize(net))


def test_preceq():
    assert preceq_extended(fx.delta_nabla_anchored(), fx.delta_nabla_direct())
    assert preceq_extended(fx.extnet_right(), fx.extnet_right())
    assert not preceq_extended(fx.delta_nabla_direct(), fx.delta_nabla_anchored())
    assert not preceq_extended(from_simple(fx.exa1()), fx.delta_nabla_direct())


def test_anchor_bound():
    with pytest.raises(AnchorBoundError):
        elimination_normal_forms(fx.extnet_right(), bound=2)


def test_elimination_order_matters_somewhere():
    found = find_nonconfluence_witness(random.Random(0))
    assert found is not None
    net, forms = found
    assert validate_extended(net) == []
    assert len(forms) >= 2
    assert not equal_extended(forms[0], forms[1])


def test_json_roundtrip():
    for net in (fx.extnet_left(), fx.extnet_right()):
        assert ext_from_json(ext_to_json(net)) == net
