"""Generator maps, morphism expressions and their elaboration into nets.

A morphism ``A -> B`` is a net on the two-formula sequent ``(~A, B)``.
Expressions are built from generators with composition, the two tensors
and transposition; :func:`elaborate` interprets them in the category of
simple nets (``"snet"``) or of extended nets (``"enet"``).

Structural generators are drawn as bundles: each source occurrence of a
subformula is linked to its counterpart in the target.  Composite maps
(mix, the projections, the tensor maps, ...) are expanded into
expressions over the primitive ones and elaborated, never drawn by hand.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Callable, Mapping, Sequence, Union

from . import extended_net as en
from . import simple_net as sn
from .formula import (
    BOT,
    TOP,
    And,
    Atom,
    Formula,
    LeafRef,
    Or,
    Var,
    and_nodes,
    formula_leaves,
    leaf_label,
    mirror,
    negate,
    parse_formula,
    subformula,
    substitute,
    to_text,
)

CATEGORIES = ("snet", "enet")


class MorphismTypeError(TypeError):
    """Ill-typed expression; carries the mismatched pair when there is one."""

    def __init__(self, message: str, pair: tuple | None = None):
        super().__init__(message)
        self.pair = pair


# --------------------------------------------------------------------------
# generators

SWITCH_VARIANTS = ("s", "s_left", "s_mid", "s_right")

ARITY = {
    "id": 1, "assoc": 3, "assoc_inv": 3, "twist": 2,
    "runit": 1, "runit_inv": 1, "lunit": 1, "lunit_inv": 1,
    "coassoc": 3, "coassoc_inv": 3, "cotwist": 2,
    "corunit": 1, "corunit_inv": 1, "colunit": 1, "colunit_inv": 1,
    "switch": 3, "tensor_map": 4, "cotensor_map": 4,
    "medial": 4, "medial3": 6, "comedial3": 6,
    "nullary_medial": 0, "nullary_comedial": 0,
    "diag": 1, "codiag": 1, "diag3": 1, "codiag3": 1,
    "proj": 1, "coproj": 1, "projl": 2, "projr": 2, "coprojl": 2, "coprojr": 2,
    "mix": 2, "nid": 1, "conid": 1, "e1": 0, "e2": 0,
}  # fmt: skip

DERIVED = {
    "tensor_map", "cotensor_map", "medial3", "comedial3", "diag3", "codiag3",
    "projl", "projr", "coprojl", "coprojr", "mix", "e1", "e2",
}  # fmt: skip


@dataclass(frozen=True)
class Generator:
    kind: str
    params: tuple = ()
    variant: str = "s"

    def __post_init__(self):
        if self.kind not in ARITY:
            raise MorphismTypeError(f"unknown generator {self.kind!r}")
        if len(self.params) != ARITY[self.kind]:
            raise MorphismTypeError(
                f"{self.kind} takes {ARITY[self.kind]} objects, got {len(self.params)}"
            )
        if self.kind == "switch" and self.variant not in SWITCH_VARIANTS:
            raise MorphismTypeError(f"unknown switch variant {self.variant!r}")

    @property
    def name(self) -> str:
        if self.kind == "switch":
            return {"s": "switch"}.get(self.variant, "switch_" + self.variant[2:])
        return self.kind


def _and(a, b):
    return And(a, b)


def _or(a, b):
    return Or(a, b)


# (source, target, bundle pairs).  A pair (p, q) links the source
# subformula at path p with the target subformula at path q.
def _shape(g: Generator) -> tuple[Formula, Formula, list[tuple[str, str]]]:
    P = g.params
    k = g.kind
    if k == "id":
        return P[0], P[0], [("", "")]
    if k in ("assoc", "coassoc"):
        op = _and if k == "assoc" else _or
        A, B, C = P
        return op(A, op(B, C)), op(op(A, B), C), [("L", "LL"), ("RL", "LR"), ("RR", "R")]
    if k in ("assoc_inv", "coassoc_inv"):
        s, t, pairs = _shape(Generator(k[:-4], P))
        return t, s, [(q, p) for p, q in pairs]
    if k in ("twist", "cotwist"):
        op = _and if k == "twist" else _or
        A, B = P
        return op(A, B), op(B, A), [("L", "R"), ("R", "L")]
    if k == "runit":
        return And(P[0], TOP), P[0], [("L", "")]
    if k == "lunit":
        return And(TOP, P[0]), P[0], [("R", "")]
    if k == "corunit":
        return Or(P[0], BOT), P[0], [("L", "")]
    if k == "colunit":
        return Or(BOT, P[0]), P[0], [("R", "")]
    if k in ("runit_inv", "lunit_inv", "corunit_inv", "colunit_inv"):
        s, t, pairs = _shape(Generator(k[:-4], P))
        return t, s, [(q, p) for p, q in pairs]
    if k == "switch":
        A, B, C = P
        if g.variant == "s":
            return And(Or(A, B), C), Or(A, And(B, C)), [("LL", "L"), ("LR", "RL"), ("R", "RR")]
        if g.variant == "s_left":
            return And(A, Or(B, C)), Or(And(A, B), C), [("L", "LL"), ("RL", "LR"), ("RR", "R")]
        if g.variant == "s_mid":
            return And(A, Or(B, C)), Or(B, And(A, C)), [("L", "RL"), ("RL", "L"), ("RR", "RR")]
        return And(Or(A, B), C), Or(And(A, C), B), [("LL", "LL"), ("LR", "R"), ("R", "LR")]
    if k == "medial":
        A, B, C, D = P
        return (
            Or(And(A, B), And(C, D)),
            And(Or(A, C), Or(B, D)),
            [("LL", "LL"), ("LR", "RL"), ("RL", "LR"), ("RR", "RR")],
        )
    if k == "nullary_medial":
        return Or(TOP, TOP), TOP, []
    if k == "nullary_comedial":
        return BOT, And(BOT, BOT), []
    if k == "diag":
        return P[0], And(P[0], P[0]), [("", "L"), ("", "R")]
    if k == "codiag":
        return Or(P[0], P[0]), P[0], [("L", ""), ("R", "")]
    if k == "proj":
        return P[0], TOP, []
    if k == "coproj":
        return BOT, P[0], []
    if k == "nid":
        return TOP, Or(negate(P[0]), P[0]), []
    if k == "conid":
        return And(P[0], negate(P[0])), BOT, []
    raise MorphismTypeError(f"{k} is not a primitive generator")


def expand(g: Generator) -> "Expr":
    """Defining expression of a composite generator."""
    P = g.params
    k = g.kind
    G = lambda kind, *ps, variant="s": Gen(Generator(kind, tuple(ps), variant))
    I = lambda A: G("id", A)
    if k == "projl":
        A, B = P
        return comp(G("runit", A), TAnd(I(A), G("proj", B)))
    if k == "projr":
        A, B = P
        return comp(G("lunit", B), TAnd(G("proj", A), I(B)))
    if k == "coprojl":
        A, B = P
        return comp(TOr(I(A), G("coproj", B)), G("corunit_inv", A))
    if k == "coprojr":
        A, B = P
        return comp(TOr(G("coproj", A), I(B)), G("colunit_inv", B))
    if k == "mix":
        A, B = P
        e = G("proj", BOT)
        return comp(
            TOr(G("runit", A), I(B)),
            TOr(TAnd(I(A), e), I(B)),
            G("switch", A, BOT, B, variant="s_left"),
            TAnd(I(A), G("colunit_inv", B)),
        )
    if k == "e1":
        return comp(
            G("runit", TOP),
            TAnd(G("colunit", TOP), G("corunit", TOP)),
            G("medial", BOT, TOP, TOP, BOT),
            TOr(G("runit_inv", BOT), G("lunit_inv", BOT)),
            G("colunit_inv", BOT),
        )
    if k == "e2":
        return comp(
            G("runit", TOP),
            TAnd(G("corunit", TOP), G("colunit", TOP)),
            G("medial", TOP, BOT, BOT, TOP),
            TOr(G("lunit_inv", BOT), G("runit_inv", BOT)),
            G("colunit_inv", BOT),
        )
    if k == "tensor_map":
        A, B, C, D = P
        return comp(TOr(I(A), G("switch", B, C, D, variant="s_left")), G("switch", A, B, Or(C, D)))
    if k == "cotensor_map":
        A, B, C, D = P
        return comp(
            G("switch", And(A, B), C, D), TAnd(G("switch", A, B, C, variant="s_left"), I(D))
        )
    if k == "medial3":
        A, B, C, D, E, F = P
        return comp(TAnd(G("medial", A, B, D, E), I(Or(C, F))), G("medial", And(A, B), C, And(D, E), F))
    if k == "comedial3":
        A, B, C, D, E, F = P
        return comp(G("medial", Or(A, C), Or(B, D), E, F), TOr(G("medial", A, B, C, D), I(And(E, F))))
    if k == "diag3":
        (A,) = P
        return comp(TAnd(G("diag", A), I(A)), G("diag", A))
    if k == "codiag3":
        (A,) = P
        return comp(G("codiag", A), TOr(G("codiag", A), I(A)))
    raise MorphismTypeError(f"{k} is primitive")


def generator_type(g: Generator) -> tuple[Formula, Formula]:
    if g.kind in DERIVED:
        return expr_type(expand(g))
    s, t, _ = _shape(g)
    return s, t


# --------------------------------------------------------------------------
# expressions


@dataclass(frozen=True)
class Gen:
    gen: Generator


@dataclass(frozen=True)
class Compose:
    later: "Expr"
    earlier: "Expr"


@dataclass(frozen=True)
class TAnd:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class TOr:
    left: "Expr"
    right: "Expr"


TRANSPOSE_DIRECTIONS = ("curry", "uncurry", "dual")


@dataclass(frozen=True)
class Transpose:
    direction: str
    expr: "Expr"


@dataclass(frozen=True)
class Arrow:
    """Free morphism variable with declared (schematic) type."""

    name: str
    source: Formula
    target: Formula


@dataclass(frozen=True)
class Fixed:
    """An already elaborated morphism used as a leaf of an expression."""

    hom: "Hom"


@dataclass(frozen=True)
class Canon:
    """Linear map matching each leaf of ``source`` with its unique twin in ``target``.

    This is the bundle drawn for composites of switches, twists and
    associativity whose exact factorisation is irrelevant in a net model.
    ``pairs`` records the matched paths, so substituting objects for
    variables keeps the matching.
    """

    source: Formula
    target: Formula
    pairs: tuple


Expr = Union[Gen, Compose, TAnd, TOr, Transpose, Arrow, Fixed, Canon]


def comp(*exprs: Expr) -> Expr:
    """``comp(h, g, f)`` is ``h . g . f`` (rightmost applied first)."""
    if not exprs:
        raise MorphismTypeError("empty composition")
    out = exprs[-1]
    for e in reversed(exprs[:-1]):
        out = Compose(e, out)
    return out


def gen(kind: str, *params: Formula, variant: str = "s") -> Gen:
    return Gen(Generator(kind, tuple(params), variant))


def ident(A: Formula) -> Gen:
    return gen("id", A)


def plus(f: Expr, g: Expr) -> Expr:
    """Convolution sum ``codiag . mix . (f & g) . diag``."""
    A, B = expr_type(f)
    return comp(gen("codiag", B), gen("mix", B, B), TAnd(f, g), gen("diag", A))


def _transpose_type(direction: str, s: Formula, t: Formula) -> tuple[Formula, Formula]:
    if direction == "curry":
        if not isinstance(s, And):
            raise MorphismTypeError(f"curry needs a conjunctive source, got {to_text(s)}")
        return s.left, Or(negate(s.right), t)
    if direction == "uncurry":
        if not isinstance(t, Or):
            raise MorphismTypeError(f"uncurry needs a disjunctive target, got {to_text(t)}")
        return And(s, negate(t.left)), t.right
    if direction == "dual":
        return negate(t), negate(s)
    raise MorphismTypeError(f"unknown transpose direction {direction!r}")


@lru_cache(maxsize=200_000)
def expr_type(e: Expr) -> tuple[Formula, Formula]:
    """Source and target, computed bottom-up."""
    if isinstance(e, Gen):
        return generator_type(e.gen)
    if isinstance(e, Compose):
        s1, t1 = expr_type(e.earlier)
        s2, t2 = expr_type(e.later)
        if t1 != s2:
            raise MorphismTypeError(
                f"cannot compose: {to_text(t1)} is not {to_text(s2)}", pair=(t1, s2)
            )
        return s1, t2
    if isinstance(e, (TAnd, TOr)):
        s1, t1 = expr_type(e.left)
        s2, t2 = expr_type(e.right)
        op = And if isinstance(e, TAnd) else Or
        return op(s1, s2), op(t1, t2)
    if isinstance(e, Transpose):
        return _transpose_type(e.direction, *expr_type(e.expr))
    if isinstance(e, Arrow):
        return e.source, e.target
    if isinstance(e, Fixed):
        return e.hom.source, e.hom.target
    if isinstance(e, Canon):
        return e.source, e.target
    raise MorphismTypeError(f"not an expression: {e!r}")


def map_objects(e: Expr, fn: Callable[[Formula], Formula]) -> Expr:
    if isinstance(e, Gen):
        g = e.gen
        return Gen(Generator(g.kind, tuple(fn(p) for p in g.params), g.variant))
    if isinstance(e, Compose):
        return Compose(map_objects(e.later, fn), map_objects(e.earlier, fn))
    if isinstance(e, TAnd):
        return TAnd(map_objects(e.left, fn), map_objects(e.right, fn))
    if isinstance(e, TOr):
        return TOr(map_objects(e.left, fn), map_objects(e.right, fn))
    if isinstance(e, Transpose):
        return Transpose(e.direction, map_objects(e.expr, fn))
    if isinstance(e, Arrow):
        return Arrow(e.name, fn(e.source), fn(e.target))
    if isinstance(e, Canon):
        return Canon(fn(e.source), fn(e.target), e.pairs)
    return e


def substitute_expr(e: Expr, binding: Mapping[str, Formula]) -> Expr:
    return map_objects(e, lambda f: substitute(f, binding))


def bind_arrows(e: Expr, arrows: Mapping[str, "Hom"]) -> Expr:
    if isinstance(e, Arrow):
        if e.name not in arrows:
            raise MorphismTypeError(f"unbound morphism variable {e.name}")
        hom = arrows[e.name]
        if (hom.source, hom.target) != (e.source, e.target):
            raise MorphismTypeError(
                f"{e.name} bound to a map of the wrong type", pair=(e.source, hom.source)
            )
        return Fixed(hom)
    if isinstance(e, Compose):
        return Compose(bind_arrows(e.later, arrows), bind_arrows(e.earlier, arrows))
    if isinstance(e, TAnd):
        return TAnd(bind_arrows(e.left, arrows), bind_arrows(e.right, arrows))
    if isinstance(e, TOr):
        return TOr(bind_arrows(e.left, arrows), bind_arrows(e.right, arrows))
    if isinstance(e, Transpose):
        return Transpose(e.direction, bind_arrows(e.expr, arrows))
    return e


def arrows_of(e: Expr) -> dict[str, Arrow]:
    out: dict = {}
    stack = [e]
    while stack:
        x = stack.pop()
        if isinstance(x, Arrow):
            out[x.name] = x
        elif isinstance(x, Compose):
            stack += [x.later, x.earlier]
        elif isinstance(x, (TAnd, TOr)):
            stack += [x.left, x.right]
        elif isinstance(x, Transpose):
            stack.append(x.expr)
    return out


# --------------------------------------------------------------------------
# coherence isomorphisms


def _blocks(F: Formula, op: type) -> list[Formula]:
    if isinstance(F, op):
        return _blocks(F.left, op) + _blocks(F.right, op)
    return [F]


def _ac_key(F: Formula):
    if isinstance(F, (And, Or)):
        op = type(F)
        return (op.__name__, tuple(sorted((_ac_key(b) for b in _blocks(F, op)), key=repr)))
    return ("leaf", F)


def _comb(blocks: Sequence[Formula], op: type) -> Formula:
    out = blocks[-1]
    for b in reversed(blocks[:-1]):
        out = op(b, out)
    return out


def _names(op: type) -> tuple[str, str, str]:
    return ("assoc", "assoc_inv", "twist") if op is And else ("coassoc", "coassoc_inv", "cotwist")


def _tensor(op: type, l: Expr, r: Expr) -> Expr:
    return TAnd(l, r) if op is And else TOr(l, r)


def _to_comb(F: Formula, op: type) -> tuple[Expr, Formula]:
    """Expression ``F -> comb`` re-associating ``F`` to a right comb."""
    if not isinstance(F, op):
        return ident(F), F
    L, R = F.left, F.right
    eR, CR = _to_comb(R, op)
    step = _tensor(op, ident(L), eR)
    if not isinstance(L, op):
        return step, op(L, CR)
    _, assoc_inv, _ = _names(op)
    a = gen(assoc_inv, L.left, L.right, CR)
    e2, C2 = _to_comb(op(L.left, op(L.right, CR)), op)
    return comp(e2, a, step), C2


def inverse(e: Expr) -> Expr:
    """Inverse of an expression built from structural isomorphisms."""
    if isinstance(e, Gen):
        g = e.gen
        k = g.kind
        if k == "id":
            return e
        if k in ("assoc", "coassoc", "runit", "lunit", "corunit", "colunit"):
            return Gen(Generator(k + "_inv", g.params))
        if k.endswith("_inv"):
            return Gen(Generator(k[:-4], g.params))
        if k in ("twist", "cotwist"):
            return gen(k, g.params[1], g.params[0])
        raise MorphismTypeError(f"{k} is not invertible")
    if isinstance(e, Compose):
        return Compose(inverse(e.earlier), inverse(e.later))
    if isinstance(e, TAnd):
        return TAnd(inverse(e.left), inverse(e.right))
    if isinstance(e, TOr):
        return TOr(inverse(e.left), inverse(e.right))
    raise MorphismTypeError("expression is not a structural isomorphism")


def _swap_at(blocks: list[Formula], p: int, op: type) -> Expr:
    """Exchange blocks ``p`` and ``p+1`` of a right comb."""
    assoc, assoc_inv, twist = _names(op)
    n = len(blocks)
    X, Y = blocks[p], blocks[p + 1]
    if p == n - 2:
        inner = gen(twist, X, Y)
    else:
        rest = _comb(blocks[p + 2 :], op)
        inner = comp(
            gen(assoc_inv, Y, X, rest),
            _tensor(op, gen(twist, X, Y), ident(rest)),
            gen(assoc, X, Y, rest),
        )
    for b in reversed(blocks[:p]):
        inner = _tensor(op, ident(b), inner)
    return inner


def coh(src: Formula, tgt: Formula) -> Expr:
    """Canonical iso built from associativity and symmetry.

    Both formulas are flattened along their top connective; blocks are matched
    left to right (first unused equivalent block), permuted by adjacent swaps,
    and matched blocks are related recursively.
    """
    if src == tgt:
        return ident(src)
    if _ac_key(src) != _ac_key(tgt):
        raise MorphismTypeError(
            f"no coherence iso from {to_text(src)} to {to_text(tgt)}", pair=(src, tgt)
        )
    op = type(src)
    sb, tb = _blocks(src, op), _blocks(tgt, op)
    used = [False] * len(sb)
    perm = []
    for t in tb:
        k = next(i for i, s in enumerate(sb) if not used[i] and _ac_key(s) == _ac_key(t))
        used[k] = True
        perm.append(k)
    steps: list[Expr] = []
    to_c, _ = _to_comb(src, op)
    steps.append(to_c)
    # bubble sort current order into perm order
    cur = list(range(len(sb)))
    rank = {k: n for n, k in enumerate(perm)}
    changed = True
    while changed:
        changed = False
        for p in range(len(cur) - 1):
            if rank[cur[p]] > rank[cur[p + 1]]:
                steps.append(_swap_at([sb[i] for i in cur], p, op))
                cur[p], cur[p + 1] = cur[p + 1], cur[p]
                changed = True
    inner = [coh(sb[k], t) for k, t in zip(perm, tb)]
    if any(not (isinstance(x, Gen) and x.gen.kind == "id") for x in inner):
        m = inner[-1]
        for x in reversed(inner[:-1]):
            m = _tensor(op, x, m)
        steps.append(m)
    from_c, _ = _to_comb(tgt, op)
    steps.append(inverse(from_c))
    return comp(*reversed(steps))


def canon(src: Formula, tgt: Formula) -> Canon:
    """Canonical linear map; every leaf label must occur once on each side."""
    def index(F):
        out: dict = {}
        for path, leaf in formula_leaves(F):
            if leaf_label(leaf) in ("t", "f"):
                continue
            out.setdefault(leaf, []).append(path)
        return out

    si, ti = index(src), index(tgt)
    if set(si) != set(ti) or any(len(v) != 1 for v in list(si.values()) + list(ti.values())):
        raise MorphismTypeError(
            f"no linear matching between {to_text(src)} and {to_text(tgt)}", pair=(src, tgt)
        )
    out = Canon(src, tgt, tuple(sorted((si[k][0], ti[k][0]) for k in si)))
    if not (_ground(src) and _ground(tgt)):
        # correctness survives substituting formulas for variables, so the
        # schematic shape is checked once here with a fresh atom per variable
        names = sorted({n.name for F in (src, tgt) for _, n in formula_leaves(F) if isinstance(n, Var)})
        fresh = {v: Atom(f"v{i}") for i, v in enumerate(names)}
        _canon_net(Canon(substitute(src, fresh), substitute(tgt, fresh), out.pairs), check=True)
    return out


# --------------------------------------------------------------------------
# homs and their operations


@dataclass(frozen=True)
class Hom:
    source: Formula
    target: Formula
    net: object  # SimpleNet or ExtendedNet on (~source, target)
    category: str = "snet"

    def __post_init__(self):
        if self.net.sequent != (negate(self.source), self.target):
            raise MorphismTypeError("net sequent does not match the declared type")


def _bundle_links(
    source: Formula, target: Formula, pairs: Sequence[tuple[str, str]]
) -> set[tuple[LeafRef, LeafRef]]:
    out = set()
    for p, q in pairs:
        X = subformula(source, p)
        if subformula(target, q) != X:
            raise MorphismTypeError("bundle ends do not match")
        for r, leaf in formula_leaves(X):
            lab = leaf_label(leaf)
            top = LeafRef(0, mirror(p + r))
            bottom = LeafRef(1, q + r)
            if lab in ("t", "f"):
                continue
            if lab.startswith("~"):
                out.add((bottom, top))
            else:
                out.add((top, bottom))
    return out


def _internal_bundle(F: Formula, i: int) -> set[tuple[LeafRef, LeafRef]]:
    """Links between the two halves of ``~X | X`` (or ``X | ~X``) at formula ``i``."""
    out = set()
    for r, leaf in formula_leaves(F.right):
        lab = leaf_label(leaf)
        if lab in ("t", "f"):
            continue
        right = LeafRef(i, "R" + r)
        left = LeafRef(i, "L" + mirror(r))
        out.add((left, right) if not lab.startswith("~") else (right, left))
    return out


@lru_cache(maxsize=50_000)
def _primitive_net(g: Generator) -> sn.SimpleNet:
    s, t, pairs = _shape(g)
    seq = (negate(s), t)
    links = _bundle_links(s, t, pairs)
    if g.kind == "nid":
        links = _internal_bundle(t, 1)
    elif g.kind == "conid":
        links = _internal_bundle(seq[0], 0)
    return sn.SimpleNet.build(seq, links)


def generator_net(g: Generator, cat: str = "snet") -> Hom:
    if any(not _ground(p) for p in g.params):
        raise MorphismTypeError("generator parameters must be concrete formulas")
    if g.kind in DERIVED:
        return elaborate(expand(g), cat)
    s, t, _ = _shape(g)
    net = _primitive_net(g)
    if cat == "enet":
        net = en.from_simple(net)
    return Hom(s, t, net, cat)


def _canon_net(e: Canon, check: bool) -> sn.SimpleNet:
    seq = (negate(e.source), e.target)
    net = sn.SimpleNet.build(seq, _bundle_links(e.source, e.target, e.pairs))
    if check and not sn.is_correct(net):
        raise MorphismTypeError(
            f"canonical map {to_text(e.source)} -> {to_text(e.target)} is not a correct net"
        )
    return net


def _canon_hom(e: Canon, cat: str) -> "Hom":
    if not (_ground(e.source) and _ground(e.target)):
        raise MorphismTypeError("canonical map needs concrete formulas")
    # instances of a checked schematic map may be too large for the pruning cap
    small = len(and_nodes((negate(e.source), e.target))) <= sn.pruning_cap()
    net = _canon_net(e, check=small)
    return Hom(e.source, e.target, net if cat == "snet" else en.from_simple(net), cat)


def _ground(f: Formula) -> bool:
    return not any(isinstance(n, Var) for _, n in formula_leaves(f))


def compose(g: Hom, f: Hom) -> Hom:
    """``g . f``: cut ``f``'s target against ``g``'s negated source."""
    if f.target != g.source:
        raise MorphismTypeError(
            f"cannot compose: {to_text(f.target)} is not {to_text(g.source)}",
            pair=(f.target, g.source),
        )
    if f.category != g.category:
        raise MorphismTypeError("cannot compose maps of different categories")
    if f.category == "snet":
        net = sn.cut(f.net, 1, g.net, 0)
    else:
        net = en.cut_extended(f.net, 1, g.net, 0)
    return Hom(f.source, g.target, net, f.category)


def tensor(f: Hom, g: Hom, conj: bool) -> Hom:
    if f.category == "snet":
        net = sn.juxtapose_and(f.net, g.net) if conj else sn.juxtapose_or(f.net, g.net)
    else:
        net = (en.juxtapose_and_extended if conj else en.juxtapose_or_extended)(f.net, g.net)
    op = And if conj else Or
    return Hom(op(f.source, g.source), op(f.target, g.target), net, f.category)


def _transpose_ref(direction: str, r: LeafRef) -> LeafRef:
    if direction == "curry":
        if r.i == 0:
            return LeafRef(1, r.path) if r.path[0] == "L" else LeafRef(0, r.path[1:])
        return LeafRef(1, "R" + r.path)
    if direction == "uncurry":
        if r.i == 1:
            return LeafRef(0, r.path) if r.path[0] == "L" else LeafRef(1, r.path[1:])
        return LeafRef(0, "R" + r.path)
    return LeafRef(1 - r.i, r.path)


def transpose(h: Hom, direction: str) -> Hom:
    """Rehouse the links of ``h`` under the leaf bijection of a transposition.

    ``curry``:   A & B -> C   becomes  A -> ~B | C
    ``uncurry``: A -> D | C   becomes  A & ~D -> C
    ``dual``:    A -> B       becomes  ~B -> ~A
    Link directions are unchanged.
    """
    s, t = _transpose_type(direction, h.source, h.target)
    seq = (negate(s), t)
    mv = lambda n: _transpose_ref(direction, n) if isinstance(n, LeafRef) else n
    if h.category == "snet":
        net = sn.SimpleNet(seq, frozenset((mv(a), mv(b)) for a, b in h.net.links))
    else:
        net = en.ExtendedNet.make(
            seq, h.net.anchor_labels, {(mv(a), mv(b)): c for (a, b), c in h.net.links}
        )
    return Hom(s, t, net, h.category)


def identity(A: Formula, cat: str = "snet") -> Hom:
    return generator_net(Generator("id", (A,)), cat)


def elaborate(e: Expr, cat: str = "snet") -> Hom:
    if cat not in CATEGORIES:
        raise ValueError(f"unknown category {cat!r}")
    expr_type(e)  # raises on ill-typed input before any net is built
    return _elaborate(e, cat)


@lru_cache(maxsize=200_000)
def _elaborate(e: Expr, cat: str) -> Hom:
    if isinstance(e, Gen):
        return generator_net(e.gen, cat)
    if isinstance(e, Compose):
        return compose(_elaborate(e.later, cat), _elaborate(e.earlier, cat))
    if isinstance(e, (TAnd, TOr)):
        return tensor(_elaborate(e.left, cat), _elaborate(e.right, cat), isinstance(e, TAnd))
    if isinstance(e, Transpose):
        return transpose(_elaborate(e.expr, cat), e.direction)
    if isinstance(e, Fixed):
        if e.hom.category != cat:
            raise MorphismTypeError("bound map lives in another category")
        return e.hom
    if isinstance(e, Arrow):
        raise MorphismTypeError(f"unbound morphism variable {e.name}")
    if isinstance(e, Canon):
        return _canon_hom(e, cat)
    raise MorphismTypeError(f"not an expression: {e!r}")


def hom_equal(f: Hom, g: Hom) -> bool:
    if (f.source, f.target) != (g.source, g.target):
        return False
    if f.category == "snet":
        return sn.equal(f.net, g.net)
    return en.equal_extended(f.net, g.net)


def hom_sum(f: Hom, g: Hom) -> Hom:
    """Sum of parallel maps; a linking union for simple nets, categorical otherwise."""
    if f.category == "snet":
        return Hom(f.source, f.target, sn.net_sum(f.net, g.net), "snet")
    return elaborate(plus(Fixed(f), Fixed(g)), f.category)


# --------------------------------------------------------------------------
# S-expressions


class SexpError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        super().__init__(message if pos is None else f"{message} at position {pos}")
        self.message = message
        self.pos = pos


_SEXP_TOKEN = re.compile(r'\s*(?:(;[^\n]*)|(\()|(\))|("(?:[^"\\]|\\.)*")|([^\s()";]+))')


@dataclass(frozen=True)
class Sym:
    name: str
    pos: int = 0


@dataclass(frozen=True)
class Str:
    text: str
    pos: int = 0


def read_sexps(text: str) -> list:
    """Parse all S-expressions in ``text`` into nested lists of Sym/Str."""
    pos = 0
    stack: list[list] = [[]]
    starts: list[int] = []
    while pos < len(text):
        m = _SEXP_TOKEN.match(text, pos)
        if not m or m.end() == pos:
            if text[pos:].strip() == "":
                break
            raise SexpError("unexpected character", pos)
        pos = m.end()
        if m.group(1):
            continue
        if m.group(2):
            stack.append([])
            starts.append(m.start(2))
        elif m.group(3):
            if len(stack) == 1:
                raise SexpError("unbalanced ')'", m.start(3))
            done = stack.pop()
            starts.pop()
            stack[-1].append(done)
        elif m.group(4):
            stack[-1].append(Str(m.group(4)[1:-1], m.start(4)))
        elif m.group(5):
            stack[-1].append(Sym(m.group(5), m.start(5)))
    if len(stack) != 1:
        raise SexpError("unbalanced '('", starts[-1] if starts else None)
    return stack[0]


def read_object(x) -> Formula:
    if isinstance(x, Str):
        return parse_formula(x.text, allow_vars=True)
    if isinstance(x, Sym):
        try:
            return parse_formula(x.name, allow_vars=True)
        except ValueError as exc:
            raise SexpError(f"bad object {x.name!r}", x.pos) from exc
    if isinstance(x, list) and x and isinstance(x[0], Sym):
        head = x[0].name
        if head in ("and", "or") and len(x) == 3:
            l, r = read_object(x[1]), read_object(x[2])
            return And(l, r) if head == "and" else Or(l, r)
        if head in ("neg", "not") and len(x) == 2:
            return negate(read_object(x[1]))
    raise SexpError(f"bad object {x!r}")


_GEN_NAMES = {k: (k, "s") for k in ARITY}
_GEN_NAMES.update(
    {
        "switch_left": ("switch", "s_left"),
        "switch_mid": ("switch", "s_mid"),
        "switch_right": ("switch", "s_right"),
    }
)


def read_expr(x, arrows: Mapping[str, Arrow] | None = None) -> Expr:
    """Morphism expression from a parsed S-expression.

    Forms: ``(gen OBJ...)``, ``(comp E...)``, ``(and E E)``, ``(or E E)``,
    ``(curry E)``, ``(uncurry E)``, ``(dual E)``, ``(coh OBJ OBJ)``,
    ``(canon OBJ OBJ)``,
    ``(inv E)``, ``(plus E E)``, ``@name`` for a declared morphism variable,
    and a bare object for its identity.
    """
    arrows = arrows or {}
    if isinstance(x, Sym) and x.name.startswith("@"):
        if x.name not in arrows:
            raise SexpError(f"undeclared morphism variable {x.name}", x.pos)
        return arrows[x.name]
    if isinstance(x, (Sym, Str)):
        return ident(read_object(x))
    if not x or not isinstance(x[0], Sym):
        raise SexpError(f"bad expression {x!r}")
    head, args = x[0].name, x[1:]
    sub = lambda y: read_expr(y, arrows)
    if head == "comp":
        return comp(*[sub(a) for a in args])
    if head in ("and", "or"):
        if len(args) != 2:
            raise SexpError(f"{head} takes two arguments", x[0].pos)
        l, r = sub(args[0]), sub(args[1])
        return TAnd(l, r) if head == "and" else TOr(l, r)
    if head in TRANSPOSE_DIRECTIONS:
        return Transpose(head, sub(args[0]))
    if head == "coh":
        return coh(read_object(args[0]), read_object(args[1]))
    if head == "canon":
        return canon(read_object(args[0]), read_object(args[1]))
    if head == "inv":
        return inverse(sub(args[0]))
    if head == "plus":
        return plus(sub(args[0]), sub(args[1]))
    if head in ("neg", "not"):
        return ident(read_object(x))
    if head in _GEN_NAMES:
        kind, variant = _GEN_NAMES[head]
        try:
            return Gen(Generator(kind, tuple(read_object(a) for a in args), variant))
        except MorphismTypeError as exc:
            raise SexpError(str(exc), x[0].pos) from exc
    raise SexpError(f"unknown form {head!r}", x[0].pos)


def parse_expr(text: str) -> Expr:
    forms = read_sexps(text)
    if len(forms) != 1:
        raise SexpError("expected exactly one expression")
    return read_expr(forms[0])


def _obj_sexp(f: Formula) -> str:
    if isinstance(f, (And, Or)):
        return f"({'and' if isinstance(f, And) else 'or'} {_obj_sexp(f.left)} {_obj_sexp(f.right)})"
    return leaf_label(f)


def expr_to_sexp(e: Expr) -> str:
    if isinstance(e, Gen):
        parts = [e.gen.name] + [_obj_sexp(p) for p in e.gen.params]
        return "(" + " ".join(parts) + ")"
    if isinstance(e, Compose):
        chain = []
        while isinstance(e, Compose):
            chain.append(e.later)
            e = e.earlier
        chain.append(e)
        return "(comp " + " ".join(expr_to_sexp(c) for c in chain) + ")"
    if isinstance(e, (TAnd, TOr)):
        head = "and" if isinstance(e, TAnd) else "or"
        return f"({head} {expr_to_sexp(e.left)} {expr_to_sexp(e.right)})"
    if isinstance(e, Transpose):
        return f"({e.direction} {expr_to_sexp(e.expr)})"
    if isinstance(e, Arrow):
        return e.name
    if isinstance(e, Canon):
        return f"(canon {_obj_sexp(e.source)} {_obj_sexp(e.target)})"
    return "<net>"
