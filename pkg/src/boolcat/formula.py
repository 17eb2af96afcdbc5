"""Formulas in negation normal form, sequents and leaf addressing.

Formulas are immutable binary trees over atoms, negated atoms, the units
``t`` and ``f``, conjunction and disjunction.  A leaf inside a sequent is
addressed by a :class:`LeafRef`, i.e. the index of the formula plus the
``L``/``R`` path from the root of that formula.

Schematic object variables (:class:`Var`) are also formulas.  They are only
used by the equation catalog, where an equation is stated for arbitrary
objects ``A``, ``B`` and is later instantiated with concrete formulas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterator, Mapping, Sequence, Union

__all__ = [
    "Formula",
    "Atom",
    "NegAtom",
    "Top",
    "Bot",
    "And",
    "Or",
    "Var",
    "TOP",
    "BOT",
    "Sequent",
    "LeafRef",
    "FormulaSyntaxError",
    "parse_formula",
    "parse_sequent",
    "to_text",
    "negate",
    "leaves",
    "formula_leaves",
    "subformula",
    "and_nodes",
    "mirror",
    "atoms_of",
    "substitute",
    "is_ground",
    "to_json",
    "from_json",
    "depth",
]


@dataclass(frozen=True)
class Atom:
    name: str


@dataclass(frozen=True)
class NegAtom:
    name: str


@dataclass(frozen=True)
class Top:
    pass


@dataclass(frozen=True)
class Bot:
    pass


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Var:
    """Schematic object variable; ``negated`` marks an occurrence of its negation."""

    name: str
    negated: bool = False


Formula = Union[Atom, NegAtom, Top, Bot, And, Or, Var]
Sequent = tuple  # tuple[Formula, ...]

TOP = Top()
BOT = Bot()


@dataclass(frozen=True, order=True)
class LeafRef:
    """Position of a leaf: formula index in the sequent and root path."""

    i: int
    path: str = ""

    def __str__(self) -> str:
        return f"{self.i}:{self.path or '.'}"


# --------------------------------------------------------------------------
# negation and structure


def negate(f: Formula) -> Formula:
    """De Morgan negation.  Argument order is reversed at binary nodes."""
    if isinstance(f, Atom):
        return NegAtom(f.name)
    if isinstance(f, NegAtom):
        return Atom(f.name)
    if isinstance(f, Top):
        return BOT
    if isinstance(f, Bot):
        return TOP
    if isinstance(f, And):
        return Or(negate(f.right), negate(f.left))
    if isinstance(f, Or):
        return And(negate(f.right), negate(f.left))
    if isinstance(f, Var):
        return Var(f.name, not f.negated)
    raise TypeError(f"not a formula: {f!r}")


def mirror(path: str) -> str:
    """Path of the corresponding node after negation (L and R swapped)."""
    return path.translate(str.maketrans("LR", "RL"))


def subformula(f: Formula, path: str) -> Formula:
    node = f
    for step in path:
        if not isinstance(node, (And, Or)):
            raise KeyError(f"path {path!r} leaves the formula at a leaf")
        node = node.left if step == "L" else node.right
    return node


def leaf_label(f: Formula) -> str:
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, NegAtom):
        return "~" + f.name
    if isinstance(f, Top):
        return "t"
    if isinstance(f, Bot):
        return "f"
    if isinstance(f, Var):
        return ("~" if f.negated else "") + f.name
    raise TypeError(f"not a leaf: {f!r}")


def formula_leaves(f: Formula, prefix: str = "") -> Iterator[tuple[str, Formula]]:
    """Left-to-right (path, leaf) pairs of one formula."""
    stack = [(prefix, f)]
    while stack:
        path, node = stack.pop()
        if isinstance(node, (And, Or)):
            stack.append((path + "R", node.right))
            stack.append((path + "L", node.left))
        else:
            yield path, node


def leaves(seq: Sequence[Formula]) -> list[tuple[LeafRef, str]]:
    """All leaves of a sequent with their labels (``a``, ``~a``, ``t``, ``f``)."""
    out = []
    for i, f in enumerate(seq):
        for path, node in formula_leaves(f):
            out.append((LeafRef(i, path), leaf_label(node)))
    return out


def and_nodes(seq: Sequence[Formula]) -> list[tuple[int, str]]:
    """Addresses of all conjunction nodes, in preorder."""
    out = []
    for i, f in enumerate(seq):
        stack = [("", f)]
        while stack:
            path, node = stack.pop()
            if isinstance(node, (And, Or)):
                if isinstance(node, And):
                    out.append((i, path))
                stack.append((path + "R", node.right))
                stack.append((path + "L", node.left))
    return out


def atoms_of(f: Formula) -> set[str]:
    return {
        node.name for _, node in formula_leaves(f) if isinstance(node, (Atom, NegAtom))
    }


def depth(f: Formula) -> int:
    if isinstance(f, (And, Or)):
        return 1 + max(depth(f.left), depth(f.right))
    return 0


def is_ground(f: Formula) -> bool:
    return not any(isinstance(node, Var) for _, node in formula_leaves(f))


def substitute(f: Formula, binding: Mapping[str, Formula]) -> Formula:
    """Replace schematic variables by formulas (negated occurrences by negations)."""
    if isinstance(f, Var):
        if f.name not in binding:
            return f
        value = binding[f.name]
        return negate(value) if f.negated else value
    if isinstance(f, And):
        return And(substitute(f.left, binding), substitute(f.right, binding))
    if isinstance(f, Or):
        return Or(substitute(f.left, binding), substitute(f.right, binding))
    return f


# --------------------------------------------------------------------------
# concrete syntax
#
#   disj := conj ('|' conj)*        (left associative)
#   conj := unit ('&' unit)*        (left associative)
#   unit := '(' disj ')' | '~' ident | ident | 't' | 'f'


class FormulaSyntaxError(ValueError):
    def __init__(self, message: str, text: str, pos: int):
        super().__init__(f"{message} at position {pos}: {text!r}")
        self.text = text
        self.pos = pos


_TOKEN = re.compile(r"\s*(?:(?P<ident>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[&|~()]))")


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    toks = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            stripped = len(text[pos:]) - len(text[pos:].lstrip())
            raise FormulaSyntaxError("unexpected character", text, pos + stripped)
        kind = "ident" if m.group("ident") else "op"
        start = m.start(kind)
        toks.append((kind, m.group(kind), start))
        pos = m.end()
    return toks


class _Parser:
    def __init__(self, text: str, allow_vars: bool):
        self.text = text
        self.toks = _tokenize(text)
        self.k = 0
        self.allow_vars = allow_vars

    def peek(self) -> tuple[str, str, int] | None:
        return self.toks[self.k] if self.k < len(self.toks) else None

    def fail(self, message: str) -> FormulaSyntaxError:
        tok = self.peek()
        pos = tok[2] if tok else len(self.text)
        return FormulaSyntaxError(message, self.text, pos)

    def take(self, value: str) -> bool:
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == value:
            self.k += 1
            return True
        return False

    def disj(self) -> Formula:
        node = self.conj()
        while self.take("|"):
            node = Or(node, self.conj())
        return node

    def conj(self) -> Formula:
        node = self.unit()
        while self.take("&"):
            node = And(node, self.unit())
        return node

    def ident(self, negated: bool) -> Formula:
        tok = self.peek()
        if tok is None or tok[0] != "ident":
            raise self.fail("expected an atom")
        self.k += 1
        name = tok[1]
        if name[0].isupper():
            if not self.allow_vars:
                raise FormulaSyntaxError("atoms must be lowercase", self.text, tok[2])
            return Var(name, negated)
        if name in ("t", "f"):
            if negated:
                raise FormulaSyntaxError(
                    "negation applies to atoms only; use negate()", self.text, tok[2]
                )
            return TOP if name == "t" else BOT
        return NegAtom(name) if negated else Atom(name)

    def unit(self) -> Formula:
        if self.take("("):
            node = self.disj()
            if not self.take(")"):
                raise self.fail("expected ')'")
            return node
        if self.take("~"):
            tok = self.peek()
            if tok is None or tok[0] != "ident":
                raise self.fail("negation applies to atoms only; use negate()")
            return self.ident(negated=True)
        return self.ident(negated=False)

    def parse(self) -> Formula:
        if not self.toks:
            raise self.fail("empty formula")
        node = self.disj()
        if self.peek() is not None:
            raise self.fail("unexpected token")
        return node


def parse_formula(text: str, allow_vars: bool = False) -> Formula:
    """Parse ``text``; ``&`` binds tighter than ``|``, both associate to the left."""
    return _Parser(text, allow_vars).parse()


def parse_sequent(text: str, allow_vars: bool = False) -> tuple[Formula, ...]:
    """Comma separated formulas."""
    parts = _split_top_level(text)
    return tuple(parse_formula(p, allow_vars) for p in parts)


def _split_top_level(text: str) -> list[str]:
    parts, level, start = [], 0, 0
    for idx, ch in enumerate(text):
        if ch == "(":
            level += 1
        elif ch == ")":
            level -= 1
        elif ch == "," and level == 0:
            parts.append(text[start:idx])
            start = idx + 1
    parts.append(text[start:])
    return parts


def to_text(f: Formula) -> str:
    """Canonical text: every compound argument is parenthesised."""

    def arg(node: Formula) -> str:
        s = to_text(node)
        return f"({s})" if isinstance(node, (And, Or)) else s

    if isinstance(f, And):
        return f"{arg(f.left)} & {arg(f.right)}"
    if isinstance(f, Or):
        return f"{arg(f.left)} | {arg(f.right)}"
    return leaf_label(f)


# --------------------------------------------------------------------------
# JSON


def to_json(f: Formula):
    if isinstance(f, And):
        return ["and", to_json(f.left), to_json(f.right)]
    if isinstance(f, Or):
        return ["or", to_json(f.left), to_json(f.right)]
    return leaf_label(f)


def from_json(obj) -> Formula:
    if isinstance(obj, str):
        return parse_formula(obj, allow_vars=True)
    if isinstance(obj, list) and len(obj) == 3 and obj[0] in ("and", "or"):
        left, right = from_json(obj[1]), from_json(obj[2])
        return And(left, right) if obj[0] == "and" else Or(left, right)
    raise ValueError(f"malformed formula JSON: {obj!r}")
