"""Executable equation catalog, checked by elaborating both sides into nets.

Each catalog entry is a schematic equation over object variables (and
possibly morphism variables).  Checking an entry means binding the
variables to concrete formulas (and random correct maps), elaborating
both sides in SNet or ENet and comparing the resulting nets.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from importlib import resources
from typing import Iterable, Mapping, Sequence

from . import simple_net as sn
from .extended_net import from_simple
from .formula import BOT, TOP, And, Atom, Formula, NegAtom, Or, Var, atoms_of, negate, to_text
from .morphisms import (
    Arrow,
    Compose,
    Expr,
    Fixed,
    Hom,
    MorphismTypeError,
    SexpError,
    Sym,
    TAnd,
    TOr,
    Transpose,
    bind_arrows,
    coh,
    comp,
    elaborate,
    expr_type,
    gen,
    hom_equal,
    ident,
    read_expr,
    read_object,
    read_sexps,
    substitute_expr,
)
from .sampling import candidate_links, random_formula, random_hom

LEVELS = (
    "monoidal", "star", "mix", "B1", "B2", "LK",
    "B3", "B4", "B5", "flat", "contractible", "collapse",
)  # fmt: skip
CLAUSES = ("vee-mult", "vee-unit", "wedge-counit", "wedge-comult")
EXPECTATIONS = ("holds", "fails", "na")
CATALOG_VERSION = 1


class CatalogError(ValueError):
    """A malformed or ill-typed catalog entry (as opposed to an unequal verdict)."""


@dataclass(frozen=True)
class Equation:
    id: str
    level: str
    params: tuple[str, ...]
    lhs: Expr | None
    rhs: Expr | None
    expected: Mapping[str, str]
    arrows: tuple[Arrow, ...] = ()
    relation: str = "eq"  # "eq", or "lk" for lhs ⪯ rhs
    when: tuple[tuple[str, str], ...] = ()
    witness: tuple[tuple[str, str], ...] = ()
    kind: str = "equation"  # or "unique-unit" / "unique-counit"
    note: str = ""

    def expect(self, cat: str) -> str:
        return self.expected.get(cat, "na")


@dataclass(frozen=True)
class Verdict:
    equation: str
    binding: tuple[tuple[str, str], ...]
    category: str
    observed: str  # "equal", "unequal" or "vacuous"
    witness: tuple[Hom, Hom] | None = None
    arrows: tuple[tuple[str, Hom], ...] = ()

    def __post_init__(self):
        if (self.observed == "unequal") != (self.witness is not None):
            raise ValueError("a witness is present exactly for unequal verdicts")


# --------------------------------------------------------------------------
# strength clauses


def clause_sides(h: Expr, clause: str) -> tuple[Expr, Expr]:
    """The two legs of one of the four preservation diagrams for ``h``."""
    X, Y = expr_type(h)
    if clause == "vee-mult":
        return comp(h, gen("codiag", X)), comp(gen("codiag", Y), TOr(h, h))
    if clause == "vee-unit":
        return comp(h, gen("coproj", X)), gen("coproj", Y)
    if clause == "wedge-counit":
        return comp(gen("proj", Y), h), gen("proj", X)
    if clause == "wedge-comult":
        return comp(gen("diag", Y), h), comp(TAnd(h, h), gen("diag", X))
    raise CatalogError(f"unknown clause {clause!r}")


def preserves(h: Hom, clause: str) -> bool:
    l, r = clause_sides(Fixed(h), clause)
    return hom_equal(elaborate(l, h.category), elaborate(r, h.category))


# --------------------------------------------------------------------------
# bridging implicit associativity and symmetry


def bridge(e: Expr) -> Expr:
    """Insert coherence isos wherever adjacent types agree only up to AC."""
    if isinstance(e, Compose):
        later, earlier = bridge(e.later), bridge(e.earlier)
        t, s = expr_type(earlier)[1], expr_type(later)[0]
        if t != s:
            return comp(later, coh(t, s), earlier)
        return Compose(later, earlier)
    if isinstance(e, TAnd):
        return TAnd(bridge(e.left), bridge(e.right))
    if isinstance(e, TOr):
        return TOr(bridge(e.left), bridge(e.right))
    if isinstance(e, Transpose):
        return Transpose(e.direction, bridge(e.expr))
    return e


def align(lhs: Expr, rhs: Expr) -> Expr:
    """``rhs`` wrapped in coherence isos so that it is parallel to ``lhs``."""
    ls, lt = expr_type(lhs)
    rs, rt = expr_type(rhs)
    out = rhs
    if rs != ls:
        out = comp(out, coh(ls, rs))
    if rt != lt:
        out = comp(coh(rt, lt), out)
    return out


# --------------------------------------------------------------------------
# catalog reading


def _field(form: list, name: str):
    for x in form[2:]:
        if isinstance(x, list) and x and isinstance(x[0], Sym) and x[0].name == name:
            return x[1:]
    return None


def _names(xs) -> list[str]:
    out = []
    for x in xs:
        if not isinstance(x, Sym):
            raise CatalogError(f"expected a name, got {x!r}")
        out.append(x.name)
    return out


def _expectations(xs) -> dict[str, str]:
    out = {}
    for x in xs or ():
        cat, verdict = _names(x)
        if verdict not in EXPECTATIONS:
            raise CatalogError(f"bad expectation {verdict!r}")
        out[cat] = verdict
    return out


def _build(form: list, note: str) -> list[Equation]:
    head = form[0].name
    eid = form[1].name
    where = f"entry {eid}"
    level = _names(_field(form, "level") or [Sym("?")])[0]
    if level not in LEVELS:
        raise CatalogError(f"{where}: unknown level {level!r}")
    params = tuple(_names(_field(form, "params") or []))
    arrows = {}
    for decl in _field(form, "arrows") or []:
        name, src, tgt = decl
        arrows[name.name] = Arrow(name.name, read_object(src), read_object(tgt))
    expected = _expectations(_field(form, "expect"))
    witness = tuple(
        (n.name, to_text(read_object(v))) for n, v in (_field(form, "witness") or [])
    )
    when = tuple((c.name, a.name) for c, a in (_field(form, "when") or []))
    common = dict(
        level=level, params=params, expected=expected, arrows=tuple(arrows.values()),
        witness=witness, when=when, note=note,
    )  # fmt: skip
    try:
        if head in ("unique-unit", "unique-counit"):
            return [Equation(eid, lhs=None, rhs=None, kind=head, **common)]
        if head == "strength":
            h = bridge(read_expr(_field(form, "map")[0], arrows))
            given = _field(form, "clauses")
            clauses = _names(given) if given else list(CLAUSES)
            if any(c not in CLAUSES for c in clauses):
                raise CatalogError(f"{where}: unknown clause in {clauses}")
            out = []
            for c in clauses:
                l, r = clause_sides(h, c)
                out.append(Equation(f"{eid}/{c}", lhs=l, rhs=r, **common))
            return out
        if head == "equation":
            relation = (_names(_field(form, "relation") or [Sym("eq")]))[0]
            lhs = bridge(read_expr(_field(form, "lhs")[0], arrows))
            rhs = align(lhs, bridge(read_expr(_field(form, "rhs")[0], arrows)))
            return [Equation(eid, lhs=lhs, rhs=rhs, relation=relation, **common)]
    except (MorphismTypeError, SexpError, TypeError) as exc:
        raise CatalogError(f"{where}: {exc}") from exc
    raise CatalogError(f"{where}: unknown entry kind {head!r}")


def parse_catalog(text: str) -> list[Equation]:
    """Read catalog text; ``#`` lines are notes attached to the next entry."""
    cleaned, notes, pending = [], {}, []
    for line in text.splitlines():
        stripped = line.strip()
        if stripped.startswith("#"):
            pending.append(stripped.lstrip("#").strip())
            cleaned.append("")
            continue
        if stripped.startswith("(") and pending:
            notes[len(cleaned)] = " ".join(pending)
            pending = []
        cleaned.append(line)
    body = "\n".join(cleaned)
    line_of = [0]
    for ln in cleaned:
        line_of.append(line_of[-1] + len(ln) + 1)
    forms = read_sexps(body)
    out: list[Equation] = []
    seen: set[str] = set()
    for form in forms:
        if not (isinstance(form, list) and form and isinstance(form[0], Sym)):
            raise CatalogError(f"bad catalog form {form!r}")
        if form[0].name == "catalog-version":
            if int(form[1].name) != CATALOG_VERSION:
                raise CatalogError(f"unsupported catalog version {form[1].name}")
            continue
        start = form[0].pos
        lineno = max(i for i, off in enumerate(line_of[:-1]) if off <= start)
        for eq in _build(form, notes.get(lineno, "")):
            if eq.id in seen:
                raise CatalogError(f"duplicate entry id {eq.id}")
            seen.add(eq.id)
            out.append(eq)
    return out


_CATALOG: list[Equation] | None = None


def load_catalog() -> list[Equation]:
    global _CATALOG
    if _CATALOG is None:
        text = resources.files("boolcat").joinpath("catalog/equations.sexp").read_text()
        _CATALOG = parse_catalog(text)
    return _CATALOG


def entries(level: str = "all") -> list[Equation]:
    if level != "all" and level not in LEVELS:
        raise ValueError(f"unknown level {level!r}; choose from {', '.join(LEVELS)} or all")
    return [e for e in load_catalog() if level in ("all", e.level)]


# --------------------------------------------------------------------------
# checking


def _binding_key(binding: Mapping[str, Formula]) -> tuple[tuple[str, str], ...]:
    return tuple((k, to_text(v)) for k, v in sorted(binding.items()))


def _sample_arrows(
    eq: Equation, binding: Mapping[str, Formula], cat: str, rng: random.Random
) -> dict[str, Hom] | None:
    atoms = sorted({a for f in binding.values() for a in atoms_of(f)}) or ["a"]
    out = {}
    for arr in eq.arrows:
        s, t = substitute_expr(arr, binding).source, substitute_expr(arr, binding).target
        h = random_hom(rng, s, t, cat, atoms=atoms, max_depth=1)
        if h is None:
            return None
        out[arr.name] = h
    return out


def _unique(eq: Equation, binding: Mapping[str, Formula], cat: str) -> Verdict:
    (A,) = (binding[p] for p in eq.params)
    unit = eq.kind == "unique-unit"
    seq = (TOP, A) if unit else (negate(A), TOP)
    cands = candidate_links(seq)
    key = _binding_key(binding)
    if len(cands) > 12:
        return Verdict(eq.id, key, cat, "vacuous")
    canonical = elaborate(gen("coproj" if unit else "proj", A), cat)
    idA = elaborate(ident(A), cat)
    for r in range(len(cands) + 1):
        for chosen in itertools.combinations(cands, r):
            net = sn.SimpleNet.build(seq, chosen)
            if not sn.is_correct(net):
                continue
            u = Hom(BOT, A, net, "snet") if unit else Hom(A, TOP, net, "snet")
            if cat == "enet":
                u = Hom(u.source, u.target, from_simple(net), "enet")
            if unit:
                laws = [
                    comp(gen("codiag", A), TOr(Fixed(u), ident(A)), gen("colunit_inv", A)),
                    comp(gen("codiag", A), TOr(ident(A), Fixed(u)), gen("corunit_inv", A)),
                ]
            else:
                laws = [
                    comp(gen("lunit", A), TAnd(Fixed(u), ident(A)), gen("diag", A)),
                    comp(gen("runit", A), TAnd(ident(A), Fixed(u)), gen("diag", A)),
                ]
            if all(hom_equal(elaborate(x, cat), idA) for x in laws):
                if not hom_equal(u, canonical):
                    return Verdict(eq.id, key, cat, "unequal", (u, canonical))
    return Verdict(eq.id, key, cat, "equal")


def check_equation(
    eq: Equation,
    binding: Mapping[str, Formula],
    cat: str = "snet",
    arrows: Mapping[str, Hom] | None = None,
    rng: random.Random | None = None,
) -> Verdict:
    """Model-check one entry at one binding.

    Morphism variables are taken from ``arrows`` or sampled with ``rng``;
    if no correct map of the required type exists, or a ``when``
    precondition fails, the verdict is ``vacuous``.
    """
    missing = [p for p in eq.params if p not in binding]
    if missing:
        raise ValueError(f"binding misses {', '.join(missing)}")
    key = _binding_key({p: binding[p] for p in eq.params})
    if eq.kind != "equation":
        return _unique(eq, binding, cat)
    if eq.arrows and arrows is None:
        arrows = _sample_arrows(eq, binding, cat, rng or random.Random(0))
        if arrows is None:
            return Verdict(eq.id, key, cat, "vacuous")
    arrows = dict(arrows or {})
    for clause, name in eq.when:
        if not preserves(arrows[name], clause):
            return Verdict(eq.id, key, cat, "vacuous", arrows=tuple(sorted(arrows.items())))
    try:
        lhs = elaborate(bind_arrows(substitute_expr(eq.lhs, binding), arrows), cat)
        rhs = elaborate(bind_arrows(substitute_expr(eq.rhs, binding), arrows), cat)
    except MorphismTypeError as exc:
        raise CatalogError(f"entry {eq.id} is ill-typed at {dict(key)}: {exc}") from exc
    if eq.relation == "lk":
        if cat != "snet":
            raise CatalogError(f"entry {eq.id}: the order is only defined for simple nets")
        ok = sn.leq(rhs.net, lhs.net)
    else:
        ok = hom_equal(lhs, rhs)
    arr = tuple(sorted(arrows.items()))
    if ok:
        return Verdict(eq.id, key, cat, "equal", arrows=arr)
    return Verdict(eq.id, key, cat, "unequal", (lhs, rhs), arrows=arr)


# --------------------------------------------------------------------------
# bindings


def formulas_up_to(depth: int, atoms: Sequence[str] = ("a", "b"), units: bool = True) -> list[Formula]:
    """Every formula of depth at most ``depth``, in a fixed order."""
    level = [Atom(a) for a in atoms] + [NegAtom(a) for a in atoms]
    if units:
        level += [TOP, BOT]
    out = list(level)
    for _ in range(depth):
        out = list(level) + [
            op(l, r) for op in (And, Or) for l in out for r in out
        ]
    return out


def random_binding(
    eq: Equation, rng: random.Random, atoms: Sequence[str], max_depth: int
) -> dict[str, Formula]:
    binding = {p: random_formula(rng, atoms, max_depth) for p in eq.params}
    # a morphism variable between two bare object variables often has no
    # inhabitant; reuse the source for the target half of the time
    for arr in eq.arrows:
        if isinstance(arr.source, Var) and isinstance(arr.target, Var) and rng.random() < 0.5:
            if not arr.source.negated and not arr.target.negated:
                binding[arr.target.name] = binding[arr.source.name]
    return binding


def sweep_bindings(
    params: Sequence[str], domain: Sequence[Formula], base: Sequence[Formula], cap: int,
    rng: random.Random,
) -> list[dict[str, Formula]]:
    """Exhaustive bindings when affordable, otherwise a covering sweep.

    With ``len(domain) ** k <= cap`` every assignment is returned.  Otherwise
    each parameter in turn ranges over the whole domain while the others
    cycle through ``base``, and a capped sample of the full ``base`` product
    is added.
    """
    k = len(params)
    if k == 0:
        return [{}]
    if len(domain) ** k <= cap:
        return [dict(zip(params, c)) for c in itertools.product(domain, repeat=k)]
    out = []
    for i, p in enumerate(params):
        for n, d in enumerate(domain):
            b = {q: base[(n + j) % len(base)] for j, q in enumerate(params)}
            b[p] = d
            out.append(b)
    total = len(base) ** k
    if total <= cap:
        out += [dict(zip(params, c)) for c in itertools.product(base, repeat=k)]
    else:
        for idx in sorted(rng.sample(range(total), cap)):
            c = []
            for _ in range(k):
                idx, r = divmod(idx, len(base))
                c.append(base[r])
            out.append(dict(zip(params, c)))
    return out


# --------------------------------------------------------------------------
# suite runs


@dataclass
class EntryReport:
    id: str
    level: str
    expected: str
    observed: str = "holds"
    checked: int = 0
    equal: int = 0
    unequal: int = 0
    vacuous: int = 0
    witness: Verdict | None = None

    @property
    def ok(self) -> bool:
        return self.observed == self.expected

    def to_json(self) -> dict:
        out = {
            "id": self.id,
            "level": self.level,
            "expected": self.expected,
            "observed": self.observed,
            "ok": self.ok,
            "checked": self.checked,
            "equal": self.equal,
            "unequal": self.unequal,
            "vacuous": self.vacuous,
        }
        if self.witness is not None:
            w = self.witness
            out["witness"] = {
                "binding": dict(w.binding),
                "lhs": _hom_json(w.witness[0]),
                "rhs": _hom_json(w.witness[1]),
            }
        return out


def _hom_json(h: Hom) -> dict:
    from .extended_net import ext_to_json

    net = sn.net_to_json(h.net) if h.category == "snet" else ext_to_json(h.net)
    return {"source": to_text(h.source), "target": to_text(h.target), "net": net}


@dataclass
class Report:
    level: str
    category: str
    seed: int
    bindings: int
    max_depth: int
    atoms: tuple[str, ...]
    sweep: bool
    entries: list[EntryReport] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.ok for e in self.entries)

    def to_json(self) -> dict:
        return {
            "catalog_version": CATALOG_VERSION,
            "level": self.level,
            "category": self.category,
            "seed": self.seed,
            "bindings": self.bindings,
            "max_depth": self.max_depth,
            "atoms": list(self.atoms),
            "sweep": self.sweep,
            "ok": self.ok,
            "entries": [e.to_json() for e in self.entries],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True)

    def table(self) -> str:
        width = max([len(e.id) for e in self.entries] + [5])
        lines = [f"{'entry':<{width}}  level         expected  observed  checked  unequal  vacuous"]
        for e in self.entries:
            mark = "" if e.ok else "  <-- UNEXPECTED"
            lines.append(
                f"{e.id:<{width}}  {e.level:<12}  {e.expected:<8}  {e.observed:<8}  "
                f"{e.checked:>7}  {e.unequal:>7}  {e.vacuous:>7}{mark}"
            )
        bad = sum(not e.ok for e in self.entries)
        lines.append(f"{len(self.entries)} entries, {bad} unexpected ({self.category})")
        return "\n".join(lines)


def run_entry(
    eq: Equation,
    cat: str,
    num_bindings: int = 25,
    max_depth: int = 2,
    atoms: Sequence[str] = ("a", "b"),
    seed: int = 0,
    sweep: bool = False,
    sweep_depth: int = 1,
    sweep_cap: int = 200,
    stop_on_failure: bool = False,
) -> EntryReport:
    rep = EntryReport(eq.id, eq.level, eq.expect(cat))
    rng = random.Random(f"{seed}:{eq.id}:{cat}")
    plan: list[dict[str, Formula]] = []
    if eq.witness:
        from .formula import parse_formula

        plan.append({k: parse_formula(v, allow_vars=True) for k, v in eq.witness})
    randoms = range(len(plan), len(plan) + num_bindings)
    for _ in range(num_bindings):
        plan.append(random_binding(eq, rng, atoms, max_depth))
    if sweep:
        domain = formulas_up_to(sweep_depth, atoms[:2])
        base = formulas_up_to(0, atoms[:2])
        plan += sweep_bindings(eq.params, domain, base, sweep_cap, rng)
    for n, binding in enumerate(plan):
        v = check_equation(eq, binding, cat, rng=rng)
        # random bindings that admit no map get a few fresh attempts
        tries = 0
        while v.observed == "vacuous" and eq.arrows and n in randoms and tries < 20:
            tries += 1
            binding = random_binding(eq, rng, atoms, max_depth)
            v = check_equation(eq, binding, cat, rng=rng)
        rep.checked += 1
        if v.observed == "equal":
            rep.equal += 1
        elif v.observed == "vacuous":
            rep.vacuous += 1
        else:
            rep.unequal += 1
            if rep.witness is None:
                rep.witness = v
            if stop_on_failure:
                break
    rep.observed = "fails" if rep.unequal else "holds"
    return rep


def run_suite(
    level: str = "all",
    cat: str = "snet",
    num_bindings: int = 25,
    max_depth: int = 2,
    atoms: Sequence[str] = ("a", "b"),
    seed: int = 0,
    sweep: bool = False,
    sweep_depth: int = 1,
    sweep_cap: int = 200,
    ids: Iterable[str] | None = None,
) -> Report:
    """Check every entry of ``level`` whose expectation in ``cat`` is not ``na``."""
    report = Report(level, cat, seed, num_bindings, max_depth, tuple(atoms), sweep)
    wanted = set(ids) if ids is not None else None
    for eq in entries(level):
        if eq.expect(cat) == "na":
            continue
        if wanted is not None and eq.id not in wanted:
            continue
        report.entries.append(
            run_entry(eq, cat, num_bindings, max_depth, atoms, seed, sweep, sweep_depth, sweep_cap)
        )
    return report
