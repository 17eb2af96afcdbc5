import random

import pytest

from boolcat.extended_net import is_correct_extended
from boolcat.formula import BOT, TOP, And, Atom, NegAtom, Or, Var, negate, parse_formula
from boolcat.morphisms import (
    ARITY,
    DERIVED,
    SWITCH_VARIANTS,
    Fixed,
    Hom,
    MorphismTypeError,
    SexpError,
    TAnd,
    TOr,
    Transpose,
    canon,
    coh,
    comp,
    compose,
    elaborate,
    expr_to_sexp,
    expr_type,
    gen,
    hom_equal,
    hom_sum,
    ident,
    identity,
    inverse,
    parse_expr,
    plus,
    read_sexps,
    transpose,
)
from boolcat.sampling import random_chain, random_formula, random_hom
from boolcat.simple_net import is_correct

a, b, c = Atom("a"), Atom("b"), Atom("c")
A, B, C = Var("A"), Var("B"), Var("C")


def _correct(h: Hom) -> bool:
    return is_correct(h.net) if h.category == "snet" else is_correct_extended(h.net)


def _random_gen(rng, kind, variant="s"):
    params = tuple(random_formula(rng, ("a", "b"), 1) for _ in range(ARITY[kind]))
    return gen(kind, *params, variant=variant)


@pytest.mark.parametrize("cat", ["snet", "enet"])
def test_every_generator_is_correct_and_typed(cat):
    rng = random.Random(3)
    for kind in sorted(ARITY):
        variants = SWITCH_VARIANTS if kind == "switch" else ("s",)
        for v in variants:
            for _ in range(3):
                e = _random_gen(rng, kind, v)
                h = elaborate(e, cat)
                assert (h.source, h.target) == expr_type(e)
                assert _correct(h), (kind, v)


def test_derived_generators_have_documented_types():
    assert expr_type(gen("tensor_map", a, b, c, a))[1] == Or(a, Or(And(b, c), a))
    assert expr_type(gen("cotensor_map", a, b, c, a))[0] == And(And(a, Or(b, c)), a)
    assert expr_type(gen("codiag3", a)) == (Or(Or(a, a), a), a)
    assert expr_type(gen("projl", a, b)) == (And(a, b), a)
    assert expr_type(gen("coprojr", a, b)) == (b, Or(a, b))
    assert expr_type(gen("e1")) == (BOT, TOP)
    assert DERIVED <= set(ARITY)


@pytest.mark.parametrize("cat", ["snet", "enet"])
def test_identity_and_associativity_on_random_chains(cat):
    rng = random.Random(11)
    for _ in range(30):
        f, g, h = random_chain(rng, 3, cat, max_depth=2)
        assert hom_equal(compose(identity(f.target, cat), f), f)
        assert hom_equal(compose(f, identity(f.source, cat)), f)
        assert hom_equal(compose(h, compose(g, f)), compose(compose(h, g), f))


@pytest.mark.parametrize("cat", ["snet", "enet"])
def test_tensor_is_functorial(cat):
    rng = random.Random(5)
    for _ in range(15):
        f1, f2 = random_chain(rng, 2, cat, max_depth=1)
        g1, g2 = random_chain(rng, 2, cat, max_depth=1)
        for T in (TAnd, TOr):
            lhs = elaborate(T(comp(Fixed(f2), Fixed(f1)), comp(Fixed(g2), Fixed(g1))), cat)
            rhs = elaborate(comp(T(Fixed(f2), Fixed(g2)), T(Fixed(f1), Fixed(g1))), cat)
            assert hom_equal(lhs, rhs)


@pytest.mark.parametrize("cat", ["snet", "enet"])
def test_transpositions_round_trip(cat):
    rng = random.Random(8)
    done = 0
    while done < 20:
        s = And(random_formula(rng, ("a", "b"), 1), random_formula(rng, ("a", "b"), 1))
        t = Or(random_formula(rng, ("a", "b"), 1), random_formula(rng, ("a", "b"), 1))
        h = random_hom(rng, s, t, cat, atoms=("a", "b"), max_depth=1)
        if h is None:
            continue
        done += 1
        assert hom_equal(transpose(transpose(h, "curry"), "uncurry"), h)
        assert hom_equal(transpose(transpose(h, "uncurry"), "curry"), h)
        assert hom_equal(transpose(transpose(h, "dual"), "dual"), h)
        for d in ("curry", "uncurry", "dual"):
            assert _correct(transpose(h, d))


def test_transpose_commutes_with_sum():
    rng = random.Random(2)
    done = 0
    while done < 20:
        s = And(random_formula(rng, ("a", "b"), 1), random_formula(rng, ("a", "b"), 1))
        t = random_formula(rng, ("a", "b"), 2)
        f = random_hom(rng, s, t)
        g = random_hom(rng, s, t)
        if f is None or g is None:
            continue
        done += 1
        for d in ("curry", "dual"):
            assert hom_equal(transpose(hom_sum(f, g), d), hom_sum(transpose(f, d), transpose(g, d)))


def test_elaborated_sum_is_link_union_in_snet():
    rng = random.Random(4)
    done = 0
    while done < 20:
        s, t = random_formula(rng, ("a", "b"), 2), random_formula(rng, ("a", "b"), 2)
        f, g = random_hom(rng, s, t), random_hom(rng, s, t)
        if f is None or g is None:
            continue
        done += 1
        assert hom_equal(elaborate(plus(Fixed(f), Fixed(g))), hom_sum(f, g))


def test_sum_of_identities_differs_from_identity_in_enet():
    i = identity(a, "enet")
    assert not hom_equal(hom_sum(i, i), i)
    assert hom_equal(hom_sum(identity(a), identity(a)), identity(a))


@pytest.mark.parametrize("cat", ["snet", "enet"])
def test_e_maps_and_unit_projections_agree(cat):
    homs = [elaborate(e, cat) for e in (gen("e1"), gen("e2"), gen("proj", BOT), gen("coproj", TOP))]
    for h in homs[1:]:
        assert hom_equal(homs[0], h)


def test_coherence_isos():
    src = And(a, And(b, c))
    tgt = And(c, And(a, b))
    e = coh(src, tgt)
    assert expr_type(e) == (src, tgt)
    there = elaborate(e)
    back = elaborate(coh(tgt, src))
    assert hom_equal(compose(back, there), identity(src))
    assert hom_equal(elaborate(comp(inverse(e), e)), identity(src))
    assert coh(a, a) == ident(a)
    with pytest.raises(MorphismTypeError):
        coh(And(a, b), Or(a, b))


def test_coherence_keeps_repeated_blocks_in_order():
    e = elaborate(coh(And(a, And(a, b)), And(And(a, a), b)))
    assert hom_equal(e, elaborate(gen("assoc", a, a, b)))


def test_canonical_linear_maps():
    h = elaborate(canon(And(a, Or(b, c)), Or(And(a, b), c)))
    assert hom_equal(h, elaborate(gen("switch", a, b, c, variant="s_left")))
    assert expr_type(canon(And(A, B), Or(B, A))) == (And(A, B), Or(B, A))
    with pytest.raises(MorphismTypeError):
        canon(And(A, A), A)
    with pytest.raises(MorphismTypeError):
        canon(Or(A, B), And(A, B))


def test_sexp_round_trip_and_errors():
    text = "(comp (codiag a) (or (diag a) (id a)))"
    e = parse_expr(text)
    assert parse_expr(expr_to_sexp(e)) == e
    assert parse_expr("(switch_left a b c)") == gen("switch", a, b, c, variant="s_left")
    assert isinstance(parse_expr("(curry (id (and a b)))"), Transpose)
    with pytest.raises(SexpError) as err:
        read_sexps("(comp (id a)")
    assert err.value.pos == 0
    with pytest.raises(SexpError) as err:
        parse_expr("(comp (frob a))")
    assert err.value.pos == 7
    with pytest.raises(MorphismTypeError):
        elaborate(parse_expr("(comp (id a) (id b))"))


def test_objects_with_negation_parse():
    X = parse_formula("a & ~b")
    assert expr_type(parse_expr("(nid (and a ~b))")) == (TOP, Or(negate(X), X))
    assert negate(X) == Or(b, NegAtom("a"))
