"""Simple proof nets: a sequent together with a set of directed leaf links.

A link goes from a leaf labelled ``~a`` to a leaf labelled ``a``.  Leaves
labelled ``t`` carry a self-link and ``f`` leaves are never linked.  A net is
correct when every conjunctive pruning (one child chosen at each ``&`` node)
keeps at least one link.
"""

from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Mapping, Sequence

from .formula import (
    And,
    Formula,
    LeafRef,
    Or,
    and_nodes,
    formula_leaves,
    leaf_label,
    leaves,
    mirror,
    negate,
    subformula,
    to_json as formula_to_json,
    from_json as formula_from_json,
    to_text,
)

DEFAULT_PRUNING_CAP = 24

Link = tuple  # (LeafRef, LeafRef)


class PruningBudgetError(RuntimeError):
    """Raised when a sequent has more conjunctions than the pruning cap allows."""


class NetError(ValueError):
    """Malformed net or incompatible operands."""


@dataclass(frozen=True)
class Violation:
    kind: str
    message: str
    link: tuple | None = None
    leaf: LeafRef | None = None

    def __str__(self) -> str:
        return f"{self.kind}: {self.message}"


@dataclass(frozen=True)
class SimpleNet:
    sequent: tuple
    links: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "sequent", tuple(self.sequent))
        object.__setattr__(self, "links", frozenset(self.links))

    @classmethod
    def build(cls, sequent: Sequence[Formula], links: Iterable[Link] = ()) -> "SimpleNet":
        """Net with the given links plus all required ``t`` self-links."""
        return cls(tuple(sequent), frozenset(links) | unit_links(sequent))

    def sorted_links(self) -> list[Link]:
        return sorted(self.links)

    def __str__(self) -> str:
        seq = ", ".join(to_text(f) for f in self.sequent)
        links = ", ".join(f"{s}->{d}" for s, d in self.sorted_links())
        return f"[[{{{links}}} <| {seq}]]"


def unit_links(sequent: Sequence[Formula]) -> frozenset:
    return frozenset((ref, ref) for ref, lab in leaves(sequent) if lab == "t")


def pruning_cap() -> int:
    raw = os.environ.get("BOOLCAT_PRUNING_CAP")
    if raw:
        try:
            return int(raw)
        except ValueError:
            pass
    return DEFAULT_PRUNING_CAP


def label_map(sequent: Sequence[Formula]) -> dict[LeafRef, str]:
    return dict(leaves(sequent))


def link_ok(src_label: str, dst_label: str) -> bool:
    """Typing of a non-unit link: ``~a`` to ``a``."""
    return src_label.startswith("~") and src_label[1:] == dst_label


# --------------------------------------------------------------------------
# validation


def validate(sequent: Sequence[Formula], links: Iterable[Link]) -> list[Violation]:
    labels = label_map(sequent)
    links = set(links)
    out: list[Violation] = []
    for ref, lab in labels.items():
        if lab == "t" and (ref, ref) not in links:
            out.append(Violation("unit", f"t leaf without self-link at {ref}", leaf=ref))
    for link in sorted(links, key=lambda l: (str(l[0]), str(l[1]))):
        src, dst = link
        if src not in labels or dst not in labels:
            out.append(Violation("dangling", f"link {src}->{dst} leaves the sequent", link=link))
            continue
        ls, ld = labels[src], labels[dst]
        if "f" in (ls, ld):
            out.append(Violation("unit", f"link {src}->{dst} touches an f leaf", link=link))
        elif src == dst:
            if ls != "t":
                out.append(Violation("ill-typed", f"self-link on non-unit leaf {src}", link=link))
        elif "t" in (ls, ld):
            out.append(Violation("unit", f"link {src}->{dst} touches a t leaf", link=link))
        elif not link_ok(ls, ld):
            out.append(Violation("ill-typed", f"ill-typed link {src}({ls})->{dst}({ld})", link=link))
    return out


def validate_net(net: SimpleNet) -> list[Violation]:
    return validate(net.sequent, net.links)


# --------------------------------------------------------------------------
# prunings and correctness


@dataclass(frozen=True)
class Pruning:
    choices: Mapping[tuple[int, str], str]
    survivors: frozenset
    links: frozenset


def _check_cap(sequent: Sequence[Formula]) -> list[tuple[int, str]]:
    nodes = and_nodes(sequent)
    cap = pruning_cap()
    if len(nodes) > cap:
        raise PruningBudgetError(
            f"pruning budget exceeded: {len(nodes)} conjunctions, cap is {cap}"
        )
    return nodes


def surviving_leaves(sequent: Sequence[Formula], choices: Mapping[tuple[int, str], str]) -> frozenset:
    out = []
    for i, f in enumerate(sequent):
        stack = [("", f)]
        while stack:
            path, node = stack.pop()
            if isinstance(node, And):
                pick = choices[(i, path)]
                stack.append((path + pick, node.left if pick == "L" else node.right))
            elif isinstance(node, Or):
                stack.append((path + "R", node.right))
                stack.append((path + "L", node.left))
            else:
                out.append(LeafRef(i, path))
    return frozenset(out)


def prunings(net: SimpleNet) -> Iterator[Pruning]:
    """All ``2**n`` conjunctive prunings, ``n`` being the number of conjunctions."""
    nodes = _check_cap(net.sequent)
    for picks in itertools.product("LR", repeat=len(nodes)):
        choices = dict(zip(nodes, picks))
        alive = surviving_leaves(net.sequent, choices)
        kept = frozenset(l for l in net.links if l[0] in alive and l[1] in alive)
        yield Pruning(choices, alive, kept)


def _survivor_masks(f: Formula, index: Mapping[str, int], path: str = "") -> list[int]:
    if isinstance(f, And):
        return _survivor_masks(f.left, index, path + "L") + _survivor_masks(
            f.right, index, path + "R"
        )
    if isinstance(f, Or):
        lefts = _survivor_masks(f.left, index, path + "L")
        rights = _survivor_masks(f.right, index, path + "R")
        return [x | y for x in lefts for y in rights]
    return [1 << index[path]]


def count_linked_prunings(sequent: Sequence[Formula], pairs: Iterable[Link]) -> tuple[int, int]:
    """(number of prunings keeping some pair, total number of prunings)."""
    nodes = _check_cap(sequent)
    total = 2 ** len(nodes)
    linked = 0
    for p in prunings(SimpleNet(sequent, frozenset(pairs))):
        if p.links:
            linked += 1
    return linked, total


def relation_is_correct(sequent: Sequence[Formula], pairs: Iterable[Link]) -> bool:
    """True iff every pruning keeps at least one of ``pairs``.

    Survivor sets are computed per formula as bit masks; several choice maps
    can share a survivor set, so this is faster than iterating prunings.
    """
    _check_cap(sequent)
    bit: dict[LeafRef, int] = {}
    per_formula = []
    for i, f in enumerate(sequent):
        local = {}
        for path, _ in formula_leaves(f):
            ref = LeafRef(i, path)
            bit[ref] = len(bit)
            local[path] = bit[ref]
        per_formula.append(sorted(set(_survivor_masks(f, local))))
    masks = sorted({(1 << bit[s]) | (1 << bit[d]) for s, d in pairs})
    if not masks:
        return False

    def search(k: int, acc: int) -> bool:
        # look for a pruning that kills every pair; return True if none exists
        live = [m for m in masks if m & acc == m]
        if live:
            return True
        if k == len(per_formula):
            return False
        return all(search(k + 1, acc | s) for s in per_formula[k])

    # a pair survives iff both ends survive; prune branches where some pair already survives
    return search(0, 0)


def is_correct(net: SimpleNet) -> bool:
    return relation_is_correct(net.sequent, net.links)


# --------------------------------------------------------------------------
# equality, sum and order


def equal(f: SimpleNet, g: SimpleNet) -> bool:
    return f.sequent == g.sequent and f.links == g.links


def _same_sequent(f: SimpleNet, g: SimpleNet, what: str) -> None:
    if f.sequent != g.sequent:
        raise NetError(f"{what}: sequent mismatch")


def net_sum(f: SimpleNet, g: SimpleNet) -> SimpleNet:
    _same_sequent(f, g, "sum")
    return SimpleNet(f.sequent, f.links | g.links)


def leq(f: SimpleNet, g: SimpleNet) -> bool:
    _same_sequent(f, g, "leq")
    return f.links <= g.links


# --------------------------------------------------------------------------
# relocation helpers shared with the extended nets


def relocate_two_sided(ref: LeafRef, which: str) -> LeafRef:
    """Position of a leaf of one operand inside a juxtaposed two-formula net.

    ``which`` is ``"left"`` or ``"right"``.  The negated source of the left
    operand ends up on the right of the combined negated source, because
    negation reverses argument order.
    """
    if ref.i == 0:
        return LeafRef(0, ("R" if which == "left" else "L") + ref.path)
    return LeafRef(1, ("L" if which == "left" else "R") + ref.path)


def _juxtapose(f: SimpleNet, g: SimpleNet, conj: bool) -> SimpleNet:
    if len(f.sequent) != 2 or len(g.sequent) != 2:
        raise NetError("juxtaposition needs two-formula nets")
    src = negate(f.sequent[0]), negate(g.sequent[0])
    if conj:
        seq = (negate(And(*src)), And(f.sequent[1], g.sequent[1]))
    else:
        seq = (negate(Or(*src)), Or(f.sequent[1], g.sequent[1]))
    links = {
        (relocate_two_sided(s, "left"), relocate_two_sided(d, "left")) for s, d in f.links
    } | {(relocate_two_sided(s, "right"), relocate_two_sided(d, "right")) for s, d in g.links}
    return SimpleNet(seq, frozenset(links))


def juxtapose_and(f: SimpleNet, g: SimpleNet) -> SimpleNet:
    """Net of ``f & g`` from nets on ``(~A, B)`` and ``(~C, D)``."""
    return _juxtapose(f, g, conj=True)


def juxtapose_or(f: SimpleNet, g: SimpleNet) -> SimpleNet:
    return _juxtapose(f, g, conj=False)


# --------------------------------------------------------------------------
# cut by path composition


def cut_identification(f_formula: Formula, i: int, j: int) -> dict[LeafRef, LeafRef]:
    """Map each leaf of ``g``'s cut formula to the identified leaf of ``f``'s.

    ``f``'s cut formula sits at index ``i`` and ``g``'s (its negation) at
    index ``j``.  The identified leaf lives at the mirrored path.
    """
    return {LeafRef(j, mirror(p)): LeafRef(i, p) for p, _ in formula_leaves(f_formula)}


def cut_layout(
    f_seq: Sequence[Formula], i: int, g_seq: Sequence[Formula], j: int
) -> tuple[tuple, dict, dict]:
    """Result sequent and leaf renamings for cutting ``f_seq[i]`` against ``g_seq[j]``.

    The result lists ``f``'s remaining formulas followed by ``g``'s.
    """
    if g_seq[j] != negate(f_seq[i]):
        raise NetError(
            f"cut formulas do not match: {to_text(f_seq[i])} against {to_text(g_seq[j])}"
        )
    f_keep = [k for k in range(len(f_seq)) if k != i]
    g_keep = [k for k in range(len(g_seq)) if k != j]
    seq = tuple(f_seq[k] for k in f_keep) + tuple(g_seq[k] for k in g_keep)
    f_pos = {k: n for n, k in enumerate(f_keep)}
    g_pos = {k: len(f_keep) + n for n, k in enumerate(g_keep)}
    return seq, f_pos, g_pos


def cut(f: SimpleNet, i: int, g: SimpleNet, j: int) -> SimpleNet:
    """Cut formula ``i`` of ``f`` against formula ``j`` of ``g``.

    A link of the result exists iff there is a directed path between the two
    (non-cut) leaves in the stacked graph, passing only through cut leaves.
    """
    seq, f_pos, g_pos = cut_layout(f.sequent, i, g.sequent, j)
    ident = cut_identification(f.sequent[i], i, j)

    def node_f(r: LeafRef):
        return ("cut", r.path) if r.i == i else LeafRef(f_pos[r.i], r.path)

    def node_g(r: LeafRef):
        return ("cut", ident[r].path) if r.i == j else LeafRef(g_pos[r.i], r.path)

    succ: dict = {}
    for s, d in f.links:
        if s.i == i and s == d:
            continue
        succ.setdefault(node_f(s), set()).add(node_f(d))
    for s, d in g.links:
        if s.i == j and s == d:
            continue
        succ.setdefault(node_g(s), set()).add(node_g(d))

    out = set()
    for start in [n for n in succ if isinstance(n, LeafRef)]:
        seen = set()
        stack = list(succ[start])
        while stack:
            node = stack.pop()
            if node in seen:
                continue
            seen.add(node)
            if isinstance(node, LeafRef):
                out.add((start, node))
            else:
                stack.extend(succ.get(node, ()))
    return SimpleNet(seq, frozenset(out) | unit_links(seq))


# --------------------------------------------------------------------------
# JSON


def ref_to_json(r: LeafRef) -> dict:
    return {"i": r.i, "path": r.path}


def ref_from_json(obj) -> LeafRef:
    if not isinstance(obj, dict) or "i" not in obj:
        raise NetError(f"malformed leaf reference: {obj!r}")
    path = obj.get("path", "")
    if not isinstance(path, str) or set(path) - {"L", "R"}:
        raise NetError(f"malformed leaf path: {path!r}")
    return LeafRef(int(obj["i"]), path)


def net_to_json(net: SimpleNet) -> dict:
    return {
        "sequent": [formula_to_json(f) for f in net.sequent],
        "links": [{"src": ref_to_json(s), "dst": ref_to_json(d)} for s, d in net.sorted_links()],
    }


def net_from_json(obj) -> SimpleNet:
    if not isinstance(obj, dict) or "sequent" not in obj:
        raise NetError("net JSON needs a 'sequent' field")
    seq = tuple(formula_from_json(x) for x in obj["sequent"])
    links = frozenset(
        (ref_from_json(l["src"]), ref_from_json(l["dst"])) for l in obj.get("links", [])
    )
    return SimpleNet(seq, links)
