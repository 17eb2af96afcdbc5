"""Extended nets: links with multiplicities and atom-labelled anchors.

Nodes are leaves (:class:`LeafRef`) or anchors (strings).  Composition
stacks two nets, turns every pair of identified cut leaves into an anchor and
then removes anchors that cannot stay (degree rules) until a fixpoint.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence, Union

import networkx as nx
from networkx.algorithms.isomorphism import DiGraphMatcher

from .formula import And, Atom, Formula, LeafRef, NegAtom, Or, leaves, negate, to_text
from .formula import to_json as formula_to_json
from .formula import from_json as formula_from_json
from .simple_net import (
    NetError,
    SimpleNet,
    Violation,
    cut_identification,
    cut_layout,
    link_ok,
    ref_from_json,
    ref_to_json,
    relation_is_correct,
    relocate_two_sided,
)

Node = Union[LeafRef, str]

DEFAULT_ANCHOR_BOUND = 8


class AnchorBoundError(RuntimeError):
    pass


def _node_key(n: Node):
    return (0, n.i, n.path) if isinstance(n, LeafRef) else (1, 0, n)


@dataclass(frozen=True)
class ExtendedNet:
    sequent: tuple
    anchors: tuple = ()  # sorted (id, label) pairs
    links: tuple = ()  # sorted ((src, dst), count) pairs, counts positive

    @classmethod
    def make(
        cls,
        sequent: Sequence[Formula],
        anchors: Mapping[str, str] | None = None,
        links: Mapping[tuple, int] | Iterable = (),
    ) -> "ExtendedNet":
        if not isinstance(links, Mapping):
            counts: dict = {}
            for l in links:
                counts[l] = counts.get(l, 0) + 1
            links = counts
        anchors = dict(anchors or {})
        items = tuple(
            sorted(
                ((pair, int(c)) for pair, c in links.items() if c > 0),
                key=lambda x: (_node_key(x[0][0]), _node_key(x[0][1])),
            )
        )
        return cls(tuple(sequent), tuple(sorted(anchors.items())), items)

    @property
    def anchor_labels(self) -> dict[str, str]:
        return dict(self.anchors)

    @property
    def counts(self) -> dict[tuple, int]:
        return dict(self.links)

    def __str__(self) -> str:
        seq = ", ".join(to_text(f) for f in self.sequent)
        ks = ", ".join(f"{k}:{lab}" for k, lab in self.anchors)
        ls = ", ".join(f"{s}->{d}" + (f"x{c}" if c != 1 else "") for (s, d), c in self.links)
        return f"[[{{{ls}}} <| {seq} ; anchors {{{ks}}}]]"


def from_simple(net: SimpleNet) -> ExtendedNet:
    return ExtendedNet.make(net.sequent, {}, {l: 1 for l in net.links})


def to_simple(net: ExtendedNet) -> SimpleNet:
    """Forget multiplicities; only defined for anchor-free nets."""
    if net.anchors:
        raise NetError("net has anchors")
    return SimpleNet(net.sequent, frozenset(pair for pair, _ in net.links))


def _labels(sequent) -> dict[LeafRef, str]:
    return dict(leaves(sequent))


# --------------------------------------------------------------------------
# validation and correctness


def validate_extended(net: ExtendedNet) -> list[Violation]:
    labels = _labels(net.sequent)
    alabel = net.anchor_labels
    counts = net.counts
    out: list[Violation] = []

    def lab(n: Node) -> str | None:
        return labels.get(n) if isinstance(n, LeafRef) else alabel.get(n)

    for ref, l in labels.items():
        if l == "t" and counts.get((ref, ref), 0) != 1:
            out.append(Violation("unit", f"t leaf {ref} needs a self-link of count 1", leaf=ref))
    insum = {k: 0 for k in alabel}
    outsum = {k: 0 for k in alabel}
    for (s, d), c in net.links:
        if lab(s) is None or lab(d) is None:
            out.append(Violation("dangling", f"link {s}->{d} names an unknown node", link=(s, d)))
            continue
        if s == d:
            if not (isinstance(s, LeafRef) and labels[s] == "t"):
                out.append(Violation("self-link", f"self-link on {s}", link=(s, d)))
            continue
        if isinstance(s, LeafRef):
            ok = isinstance(d, LeafRef) and link_ok(labels[s], labels[d]) or (
                isinstance(d, str) and labels[s] == "~" + alabel[d]
            )
        else:
            ok = (isinstance(d, str) and alabel[d] == alabel[s]) or (
                isinstance(d, LeafRef) and labels[d] == alabel[s]
            )
        if not ok:
            out.append(Violation("ill-typed", f"ill-typed link {s}->{d}", link=(s, d)))
        if isinstance(s, str):
            outsum[s] += c
        if isinstance(d, str):
            insum[d] += c
    for k in sorted(alabel):
        if outsum[k] < 2:
            out.append(Violation("anchor", f"anchor {k} out-degree < 2"))
        if insum[k] < 2:
            out.append(Violation("anchor", f"anchor {k} in-degree < 2"))
    return out


def leaf_paths(net: ExtendedNet) -> set[tuple[LeafRef, LeafRef]]:
    """Leaf pairs joined by a directed path through anchors only."""
    succ: dict = {}
    for (s, d), c in net.links:
        if c > 0:
            succ.setdefault(s, set()).add(d)
    out = set()
    for start in [n for n in succ if isinstance(n, LeafRef)]:
        seen, stack = set(), list(succ[start])
        while stack:
            n = stack.pop()
            if n in seen:
                continue
            seen.add(n)
            if isinstance(n, LeafRef):
                out.add((start, n))
            else:
                stack.extend(succ.get(n, ()))
    return out


def is_correct_extended(net: ExtendedNet) -> bool:
    """Every pruning keeps a unit self-link or a leaf-to-leaf path (anchors always survive)."""
    return relation_is_correct(net.sequent, leaf_paths(net))


# --------------------------------------------------------------------------
# normalisation (the degree rules)


def _reduce(anchors: dict, counts: dict, t_leaves: Iterable[LeafRef]) -> None:
    """Apply the anchor rules in place until none applies."""
    while True:
        for k in anchors:
            counts.pop((k, k), None)
        outs: dict = {k: {} for k in anchors}
        ins: dict = {k: {} for k in anchors}
        for (s, d), c in counts.items():
            if c <= 0:
                continue
            if s in outs:
                outs[s][d] = c
            if d in ins:
                ins[d][s] = c
        fired = False
        for k in sorted(anchors, key=str):
            o, i = outs[k], ins[k]
            if sum(o.values()) == 0:
                for l in i:
                    del counts[(l, k)]
            elif sum(i.values()) == 0:
                for d in o:
                    del counts[(k, d)]
            elif sum(o.values()) == 1:
                (target,) = o
                del counts[(k, target)]
                for l, c in i.items():
                    del counts[(l, k)]
                    counts[(l, target)] = counts.get((l, target), 0) + c
            elif sum(i.values()) == 1:
                (source,) = i
                del counts[(source, k)]
                for d, c in o.items():
                    del counts[(k, d)]
                    counts[(source, d)] = counts.get((source, d), 0) + c
            else:
                continue
            del anchors[k]
            fired = True
            break
        if not fired:
            break
    for k in list(counts):
        if counts[k] <= 0:
            del counts[k]
    for t in t_leaves:
        counts[(t, t)] = 1


def _canonical(sequent, anchors: dict, counts: dict) -> ExtendedNet:
    """Rename anchors to k1, k2, ... in a deterministic order."""

    def sig(k):
        ins = sorted((str(s), c) for (s, d), c in counts.items() if d == k and isinstance(s, LeafRef))
        outs = sorted((str(d), c) for (s, d), c in counts.items() if s == k and isinstance(d, LeafRef))
        return (anchors[k], tuple(ins), tuple(outs), str(k))

    order = sorted(anchors, key=sig)
    rename = {k: f"k{n + 1}" for n, k in enumerate(order)}

    def r(n):
        return rename[n] if isinstance(n, str) else n

    return ExtendedNet.make(
        sequent,
        {rename[k]: anchors[k] for k in anchors},
        {(r(s), r(d)): c for (s, d), c in counts.items()},
    )


def _t_leaves(sequent) -> list[LeafRef]:
    return [r for r, l in leaves(sequent) if l == "t"]


def normalize(net: ExtendedNet, rename: bool = True) -> ExtendedNet:
    anchors = net.anchor_labels
    counts = net.counts
    _reduce(anchors, counts, _t_leaves(net.sequent))
    if rename:
        return _canonical(net.sequent, anchors, counts)
    return ExtendedNet.make(net.sequent, anchors, counts)


# --------------------------------------------------------------------------
# cut


def cut_extended(f: ExtendedNet, i: int, g: ExtendedNet, j: int) -> ExtendedNet:
    """Cut formula ``i`` of ``f`` against formula ``j`` of ``g``.

    Each identified pair of cut leaves becomes one node; atom pairs are
    anchors labelled by their atom, unit pairs are unlabelled and vanish
    under the degree rules.
    """
    seq, f_pos, g_pos = cut_layout(f.sequent, i, g.sequent, j)
    ident = cut_identification(f.sequent[i], i, j)
    anchors: dict = {}
    for path, lab in ((r.path, l) for r, l in leaves(f.sequent) if r.i == i):
        anchors[f"c{path}"] = lab.lstrip("~") if lab not in ("t", "f") else "?"
    for k, lab in f.anchors:
        anchors[f"f{k}"] = lab
    for k, lab in g.anchors:
        anchors[f"g{k}"] = lab

    def node_f(n):
        if isinstance(n, str):
            return f"f{n}"
        return f"c{n.path}" if n.i == i else LeafRef(f_pos[n.i], n.path)

    def node_g(n):
        if isinstance(n, str):
            return f"g{n}"
        return f"c{ident[n].path}" if n.i == j else LeafRef(g_pos[n.i], n.path)

    counts: dict = {}
    for (s, d), c in f.links:
        key = (node_f(s), node_f(d))
        counts[key] = counts.get(key, 0) + c
    for (s, d), c in g.links:
        key = (node_g(s), node_g(d))
        counts[key] = counts.get(key, 0) + c
    _reduce(anchors, counts, _t_leaves(seq))
    if any(lab == "?" for lab in anchors.values()):  # pragma: no cover - guarded by typing
        raise NetError("unit cut node survived normalisation")
    return _canonical(seq, anchors, counts)


def _juxtapose(f: ExtendedNet, g: ExtendedNet, conj: bool) -> ExtendedNet:
    if len(f.sequent) != 2 or len(g.sequent) != 2:
        raise NetError("juxtaposition needs two-formula nets")
    src = negate(f.sequent[0]), negate(g.sequent[0])
    if conj:
        seq = (negate(And(*src)), And(f.sequent[1], g.sequent[1]))
    else:
        seq = (negate(Or(*src)), Or(f.sequent[1], g.sequent[1]))
    anchors = {f"l{k}": lab for k, lab in f.anchors}
    anchors.update({f"r{k}": lab for k, lab in g.anchors})
    counts: dict = {}
    for net, side, tag in ((f, "left", "l"), (g, "right", "r")):
        def mv(n):
            return f"{tag}{n}" if isinstance(n, str) else relocate_two_sided(n, side)

        for (s, d), c in net.links:
            counts[(mv(s), mv(d))] = c
    return _canonical(seq, anchors, counts)


def juxtapose_and_extended(f: ExtendedNet, g: ExtendedNet) -> ExtendedNet:
    return _juxtapose(f, g, conj=True)


def juxtapose_or_extended(f: ExtendedNet, g: ExtendedNet) -> ExtendedNet:
    return _juxtapose(f, g, conj=False)


# --------------------------------------------------------------------------
# anchor elimination and the induced order


def eliminate_anchor(net: ExtendedNet, k: str) -> ExtendedNet:
    """Replace every path through ``k`` by a direct link weighted by the product."""
    anchors = net.anchor_labels
    if k not in anchors:
        raise NetError(f"unknown anchor {k!r}")
    counts = net.counts
    into = {s: c for (s, d), c in counts.items() if d == k}
    outof = {d: c for (s, d), c in counts.items() if s == k}
    for key in [key for key in counts if k in key]:
        del counts[key]
    for s, c1 in into.items():
        for d, c2 in outof.items():
            counts[(s, d)] = counts.get((s, d), 0) + c1 * c2
    del anchors[k]
    _reduce(anchors, counts, _t_leaves(net.sequent))
    return ExtendedNet.make(net.sequent, anchors, counts)


def _graph(net: ExtendedNet) -> nx.DiGraph:
    g = nx.DiGraph()
    for ref, _ in leaves(net.sequent):
        g.add_node(("leaf", ref), key=("leaf", ref.i, ref.path))
    for k, lab in net.anchors:
        g.add_node(("anchor", k), key=("anchor", lab))

    def node(n):
        return ("leaf", n) if isinstance(n, LeafRef) else ("anchor", n)

    for (s, d), c in net.links:
        g.add_edge(node(s), node(d), count=c)
    return g


def equal_extended(f: ExtendedNet, g: ExtendedNet) -> bool:
    """Equality up to a label-preserving bijection of anchors."""
    if f.sequent != g.sequent or len(f.anchors) != len(g.anchors):
        return False
    if sorted(l for _, l in f.anchors) != sorted(l for _, l in g.anchors):
        return False
    if not f.anchors:
        return f.links == g.links
    leafpart = lambda n: {p: c for p, c in n.links if all(isinstance(x, LeafRef) for x in p)}
    if leafpart(f) != leafpart(g):
        return False
    matcher = DiGraphMatcher(
        _graph(f),
        _graph(g),
        node_match=lambda a, b: a["key"] == b["key"],
        edge_match=lambda a, b: a["count"] == b["count"],
    )
    return matcher.is_isomorphic()


def _check_bound(net: ExtendedNet, bound: int) -> None:
    if len(net.anchors) > bound:
        raise AnchorBoundError(f"{len(net.anchors)} anchors exceed the bound {bound}")


def preceq_extended(f: ExtendedNet, g: ExtendedNet, bound: int = DEFAULT_ANCHOR_BOUND) -> bool:
    """True iff some sequence of anchor eliminations turns ``f`` into ``g``."""
    _check_bound(f, bound)
    if f.sequent != g.sequent:
        return False
    frontier = [f]
    seen = {f}
    while frontier:
        if any(equal_extended(x, g) for x in frontier):
            return True
        nxt = []
        for x in frontier:
            if len(x.anchors) <= len(g.anchors):
                continue
            for k, _ in x.anchors:
                y = eliminate_anchor(x, k)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return False


def elimination_normal_forms(
    net: ExtendedNet, bound: int = DEFAULT_ANCHOR_BOUND
) -> list[ExtendedNet]:
    """Distinct anchor-free nets reachable by eliminating anchors in every order."""
    _check_bound(net, bound)
    memo: dict = {}

    def go(x: ExtendedNet) -> frozenset:
        if not x.anchors:
            return frozenset([x])
        if x not in memo:
            acc: set = set()
            for k, _ in x.anchors:
                acc |= go(eliminate_anchor(x, k))
            memo[x] = frozenset(acc)
        return memo[x]

    return sorted(go(net), key=lambda n: str(n))


def find_nonconfluence_witness(
    rng, tries: int = 2000
) -> tuple[ExtendedNet, list[ExtendedNet]] | None:
    """Random search for a valid net whose elimination orders disagree."""
    seq = (
        Or(NegAtom("a"), NegAtom("a")),
        Or(Atom("a"), Atom("a")),
    )
    srcs = [LeafRef(0, "L"), LeafRef(0, "R")]
    dsts = [LeafRef(1, "L"), LeafRef(1, "R")]
    ks = ["k1", "k2"]
    for _ in range(tries):
        counts = {}
        for s in srcs:
            for k in ks:
                if rng.random() < 0.6:
                    counts[(s, k)] = rng.randint(1, 2)
        for k in ks:
            for d in dsts:
                if rng.random() < 0.6:
                    counts[(k, d)] = rng.randint(1, 2)
        counts[("k1", "k2")] = rng.randint(1, 2)
        if rng.random() < 0.7:
            counts[("k2", "k1")] = rng.randint(1, 2)
        net = ExtendedNet.make(seq, {"k1": "a", "k2": "a"}, counts)
        if validate_extended(net):
            continue
        forms = elimination_normal_forms(net)
        if len(forms) >= 2:
            return net, forms
    return None


# --------------------------------------------------------------------------
# JSON


def _node_to_json(n: Node):
    return n if isinstance(n, str) else ref_to_json(n)


def _node_from_json(obj) -> Node:
    return obj if isinstance(obj, str) else ref_from_json(obj)


def ext_to_json(net: ExtendedNet) -> dict:
    return {
        "sequent": [formula_to_json(f) for f in net.sequent],
        "anchors": [{"id": k, "label": lab} for k, lab in net.anchors],
        "links": [
            {"src": _node_to_json(s), "dst": _node_to_json(d), "count": c}
            for (s, d), c in net.links
        ],
    }


def ext_from_json(obj) -> ExtendedNet:
    if not isinstance(obj, dict) or "sequent" not in obj:
        raise NetError("net JSON needs a 'sequent' field")
    seq = tuple(formula_from_json(x) for x in obj["sequent"])
    anchors = {a["id"]: a["label"] for a in obj.get("anchors", [])}
    counts: dict = {}
    for l in obj.get("links", []):
        key = (_node_from_json(l["src"]), _node_from_json(l["dst"]))
        counts[key] = counts.get(key, 0) + int(l.get("count", 1))
    return ExtendedNet.make(seq, anchors, counts)
