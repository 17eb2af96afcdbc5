"""Graphviz DOT rendering of simple and extended nets.

The sequent is drawn as a forest (one tree per formula, roots on top) and
links are drawn as curved arcs between leaves.  Anchors become small filled
bullet nodes.
"""

from __future__ import annotations

from typing import Iterator

from .extended_net import ExtendedNet, from_simple
from .formula import And, Or, leaf_label
from .simple_net import SimpleNet

_CONNECTIVE = {And: "∧", Or: "∨"}


def _quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def _node_id(i: int, path: str) -> str:
    return _quote(f"f{i}:{path or 'root'}")


def _tree(i: int, f, path: str = "") -> Iterator[str]:
    me = _node_id(i, path)
    if isinstance(f, (And, Or)):
        yield f"    {me} [label={_quote(_CONNECTIVE[type(f)])}, shape=plaintext];"
        for side, child in (("L", f.left), ("R", f.right)):
            yield from _tree(i, child, path + side)
            yield f"    {me} -> {_node_id(i, path + side)} [dir=none];"
    else:
        yield f"    {me} [label={_quote(leaf_label(f))}, shape=plaintext];"


def _ref(n) -> str:
    return _quote(f"anchor:{n}") if isinstance(n, str) else _node_id(n.i, n.path)


def to_dot(net: SimpleNet | ExtendedNet, name: str = "net") -> str:
    ext = from_simple(net) if isinstance(net, SimpleNet) else net
    lines = [f"digraph {_quote(name)} {{", "  splines=curved;", "  node [fontname=Helvetica];"]
    for i, f in enumerate(ext.sequent):
        lines.append(f"  subgraph {_quote(f'cluster_{i}')} {{")
        lines.append("    style=invis;")
        lines.extend(_tree(i, f))
        lines.append("  }")
    for k, lab in ext.anchors:
        lines.append(
            f"  {_ref(k)} [shape=point, width=0.12, xlabel={_quote(f'{k}:{lab}')}];"
        )
    for (s, d), c in ext.links:
        attrs = ["color=blue", "constraint=false"]
        if c != 1:
            attrs.append(f"label={_quote(str(c))}")
        lines.append(f"  {_ref(s)} -> {_ref(d)} [{', '.join(attrs)}];")
    lines.append("}")
    return "\n".join(lines) + "\n"
