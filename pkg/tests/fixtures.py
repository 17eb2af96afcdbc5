"""Worked example nets, written down leaf by leaf."""

from boolcat.formula import LeafRef as R
from boolcat.formula import parse_sequent
from boolcat.simple_net import SimpleNet

EXA1_SEQ = parse_sequent("~b & a, ~a & ~b, b & a, ~a & b")
EXA1_LINKS = {
    (R(0, "L"), R(3, "R")),
    (R(0, "L"), R(2, "L")),
    (R(1, "R"), R(3, "R")),
    (R(1, "L"), R(0, "R")),
    (R(1, "R"), R(2, "L")),
    (R(3, "L"), R(2, "R")),
}

EXA2_SEQ = parse_sequent("~b | a, ((~a & t) & ~a) & b, b | ((a & c) | f), t | ((~c & f) & b)")
EXA2_LINKS = {
    (R(1, "LLR"), R(1, "LLR")),
    (R(3, "L"), R(3, "L")),
    (R(1, "LLL"), R(0, "R")),
    (R(1, "LR"), R(0, "R")),
    (R(3, "RLL"), R(2, "RLR")),
    (R(0, "L"), R(1, "R")),
    (R(0, "L"), R(2, "L")),
    (R(0, "L"), R(3, "RR")),
}

BAD_SEQ = parse_sequent("~b & a, ~a & b")
BAD_LINKS = {(R(0, "L"), R(1, "R")), (R(1, "L"), R(0, "R"))}

# cut of the last formula of the first example against the first formula of the second
CUT12_SEQ = EXA1_SEQ[:3] + EXA2_SEQ[1:]
CUT12_LINKS = {
    (R(0, "L"), R(2, "L")),
    (R(1, "R"), R(2, "L")),
    (R(1, "L"), R(0, "R")),
    (R(3, "LLR"), R(3, "LLR")),
    (R(5, "L"), R(5, "L")),
    (R(3, "LLL"), R(2, "R")),
    (R(3, "LR"), R(2, "R")),
    (R(5, "RLL"), R(4, "RLR")),
    (R(0, "L"), R(3, "R")),
    (R(0, "L"), R(4, "L")),
    (R(0, "L"), R(5, "RR")),
    (R(1, "R"), R(3, "R")),
    (R(1, "R"), R(4, "L")),
    (R(1, "R"), R(5, "RR")),
}


def exa1() -> SimpleNet:
    return SimpleNet(EXA1_SEQ, frozenset(EXA1_LINKS))


def exa2() -> SimpleNet:
    return SimpleNet(EXA2_SEQ, frozenset(EXA2_LINKS))


def bad() -> SimpleNet:
    return SimpleNet(BAD_SEQ, frozenset(BAD_LINKS))


# ---- extended nets ---------------------------------------------------------

from boolcat.extended_net import ExtendedNet  # noqa: E402


def extnet_left() -> ExtendedNet:
    return ExtendedNet.make(
        EXA1_SEQ,
        {"bb": "b"},
        {
            (R(0, "L"), "bb"): 1,
            (R(1, "R"), "bb"): 1,
            ("bb", R(2, "L")): 1,
            ("bb", R(3, "R")): 1,
            (R(1, "L"), R(0, "R")): 1,
            (R(3, "L"), R(2, "R")): 1,
        },
    )


def extnet_right() -> ExtendedNet:
    return ExtendedNet.make(
        EXA1_SEQ,
        {"bb": "b", "bbb": "b", "aa": "a"},
        {
            (R(0, "L"), "bbb"): 1,
            (R(0, "L"), "bb"): 1,
            (R(1, "R"), "bb"): 1,
            ("bb", "bbb"): 3,
            ("bbb", R(2, "L")): 1,
            ("bbb", R(3, "R")): 1,
            (R(1, "L"), R(0, "R")): 3,
            (R(3, "L"), "aa"): 2,
            ("aa", R(2, "R")): 2,
        },
    )


def cutreda_expected() -> ExtendedNet:
    direct = {l: 1 for l in CUT12_LINKS if not (l[0] in (R(0, "L"), R(1, "R")) and l[1].i >= 3)}
    direct.update({(R(0, "L"), "k"): 1, (R(1, "R"), "k"): 1})
    direct.update({("k", d): 1 for d in (R(3, "R"), R(4, "L"), R(5, "RR"))})
    return ExtendedNet.make(CUT12_SEQ, {"k": "b"}, direct)


def cutredb_expected() -> ExtendedNet:
    links = {
        (R(1, "L"), R(0, "R")): 1,
        (R(3, "LLR"), R(3, "LLR")): 1,
        (R(5, "L"), R(5, "L")): 1,
        (R(3, "LLL"), R(2, "R")): 1,
        (R(3, "LR"), R(2, "R")): 1,
        (R(5, "RLL"), R(4, "RLR")): 1,
        (R(0, "L"), "k"): 1,
        (R(1, "R"), "k"): 1,
    }
    links.update({("k", d): 1 for d in (R(2, "L"), R(3, "R"), R(4, "L"), R(5, "RR"))})
    return ExtendedNet.make(CUT12_SEQ, {"k": "b"}, links)


DN_SEQ = parse_sequent("~a & ~a, a & a")


def delta_nabla_direct() -> ExtendedNet:
    return ExtendedNet.make(
        DN_SEQ, {}, {(R(0, s), R(1, d)): 1 for s in "LR" for d in "LR"}
    )


def delta_nabla_anchored() -> ExtendedNet:
    links = {(R(0, s), "k"): 1 for s in "LR"}
    links.update({("k", R(1, d)): 1 for d in "LR"})
    return ExtendedNet.make(DN_SEQ, {"k": "a"}, links)
