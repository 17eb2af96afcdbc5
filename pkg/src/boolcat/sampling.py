"""Seeded random formulas and random correct nets."""

from __future__ import annotations

import random
from typing import Sequence

from .formula import BOT, TOP, And, Atom, Formula, LeafRef, NegAtom, Or, atoms_of, leaves, negate
from .simple_net import SimpleNet, link_ok, relation_is_correct, unit_links


def random_formula(
    rng: random.Random,
    atoms: Sequence[str] = ("a", "b", "c"),
    max_depth: int = 2,
    units: bool = True,
    leaf_bias: float = 0.3,
) -> Formula:
    if max_depth <= 0 or rng.random() < leaf_bias:
        pool = len(atoms) * 2 + (2 if units else 0)
        k = rng.randrange(pool)
        if k < len(atoms):
            return Atom(atoms[k])
        if k < 2 * len(atoms):
            return NegAtom(atoms[k - len(atoms)])
        return TOP if k == 2 * len(atoms) else BOT
    cls = And if rng.random() < 0.5 else Or
    return cls(
        random_formula(rng, atoms, max_depth - 1, units, leaf_bias),
        random_formula(rng, atoms, max_depth - 1, units, leaf_bias),
    )


def candidate_links(sequent: Sequence[Formula]) -> list[tuple[LeafRef, LeafRef]]:
    labs = leaves(sequent)
    return [
        (s, d)
        for s, ls in labs
        for d, ld in labs
        if s != d and link_ok(ls, ld)
    ]


def random_correct_net(
    rng: random.Random,
    sequent: Sequence[Formula],
    density: float = 0.3,
) -> SimpleNet | None:
    """A random correct net on ``sequent``, or ``None`` if none exists.

    Correctness is monotone in the linking, so the full linking decides
    existence; otherwise random links are added until the net is correct.
    """
    units = unit_links(sequent)
    cands = candidate_links(sequent)
    if not relation_is_correct(sequent, units | set(cands)):
        return None
    chosen = {c for c in cands if rng.random() < density}
    rest = [c for c in cands if c not in chosen]
    rng.shuffle(rest)
    batch = 1
    while not relation_is_correct(sequent, units | chosen):
        chosen.update(rest[:batch])
        rest = rest[batch:]
        batch *= 2
    return SimpleNet(tuple(sequent), frozenset(chosen) | units)


def random_hom_net(
    rng: random.Random, source: Formula, target: Formula, density: float = 0.3
) -> SimpleNet | None:
    return random_correct_net(rng, (negate(source), target), density)


def random_hom(
    rng: random.Random,
    source: Formula,
    target: Formula,
    category: str = "snet",
    atoms: Sequence[str] = ("a", "b", "c"),
    max_depth: int = 2,
    tries: int = 8,
):
    """A random correct map ``source -> target`` or ``None``.

    Extended maps are obtained by composing two random simple maps through a
    random middle object, so that anchors do occur.
    """
    from .extended_net import from_simple
    from .morphisms import Hom, compose

    direct = random_hom_net(rng, source, target)
    if direct is None:
        return None
    if category == "snet":
        return Hom(source, target, direct, "snet")
    common = sorted(atoms_of(source) & atoms_of(target)) or list(atoms)
    for _ in range(tries):
        middle = random_formula(rng, common, max_depth, units=False)
        first = random_hom_net(rng, source, middle, density=rng.choice((0.5, 1.0)))
        second = random_hom_net(rng, middle, target, density=rng.choice((0.5, 1.0)))
        if first is not None and second is not None:
            return compose(
                Hom(middle, target, from_simple(second), "enet"),
                Hom(source, middle, from_simple(first), "enet"),
            )
    return Hom(source, target, from_simple(direct), "enet")


def random_chain(
    rng: random.Random,
    length: int,
    category: str = "snet",
    atoms: Sequence[str] = ("a", "b", "c"),
    max_depth: int = 3,
    attempts: int = 500,
):
    """``length`` composable random correct maps, first map first."""
    for _ in range(attempts):
        objs = [random_formula(rng, atoms, max_depth) for _ in range(length + 1)]
        homs = []
        for s, t in zip(objs, objs[1:]):
            h = random_hom(rng, s, t, category, atoms, max_depth=min(max_depth, 2))
            if h is None:
                break
            homs.append(h)
        else:
            return homs
    raise RuntimeError("could not sample a composable chain")
