import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from boolcat.formula import (
    BOT,
    TOP,
    And,
    Atom,
    FormulaSyntaxError,
    LeafRef,
    NegAtom,
    Or,
    from_json,
    leaves,
    negate,
    parse_formula,
    parse_sequent,
    to_json,
    to_text,
)

from .strategies import formulas


def test_parse_negated_atom_conjunction():
    assert parse_formula("~b & a") == And(NegAtom("b"), Atom("a"))


def test_parse_units():
    assert parse_formula("t") == TOP
    assert parse_formula("f") == BOT


def test_precedence_and_left_association():
    a, b, c = Atom("a"), Atom("b"), Atom("c")
    assert parse_formula("a | b & c") == Or(a, And(b, c))
    assert parse_formula("a & b & c") == And(And(a, b), c)
    assert parse_formula("a | b | c") == Or(Or(a, b), c)


@pytest.mark.parametrize("text", ["~(a & b)", "~t", "a &", "(a | b", "a b", "A", "a $ b", ""])
def test_syntax_errors(text):
    with pytest.raises(FormulaSyntaxError):
        parse_formula(text)


def test_syntax_error_reports_position():
    with pytest.raises(FormulaSyntaxError) as info:
        parse_formula("a & ~(b)")
    assert info.value.pos == 5


def test_negate_conjunction_with_unit():
    assert negate(And(Atom("a"), TOP)) == Or(BOT, NegAtom("a"))


def test_negate_reverses_order():
    assert to_text(negate(parse_formula("(a|b)&~c"))) == "c | (~b & ~a)"


@given(formulas())
def test_negate_involution(f):
    assert negate(negate(f)) == f


@settings(max_examples=1000)
@given(formulas(max_depth=6))
def test_print_parse_roundtrip(f):
    text = to_text(f)
    assert parse_formula(text) == f
    assert to_text(parse_formula(text)) == text


@given(formulas())
def test_json_roundtrip(f):
    assert from_json(to_json(f)) == f


def test_leaves_of_first_worked_example():
    seq = parse_sequent("~b & a, ~a & ~b, b & a, ~a & b")
    labels = [lab for _, lab in leaves(seq)]
    assert labels == ["~b", "a", "~a", "~b", "b", "a", "~a", "b"]
    assert leaves(seq)[3][0] == LeafRef(1, "R")


def test_single_unit_sequent_has_one_leaf():
    assert leaves((TOP,)) == [(LeafRef(0, ""), "t")]


def _count(f):
    if isinstance(f, (And, Or)):
        return _count(f.left) + _count(f.right)
    return 1


@settings(max_examples=500)
@given(st.lists(formulas(), min_size=1, max_size=4))
def test_leaf_count_matches_recursive_count(seq):
    assert len(leaves(seq)) == sum(_count(f) for f in seq)
    refs = [r for r, _ in leaves(seq)]
    assert len(set(refs)) == len(refs)
