"""Command-line front end.

Exit codes: 0 on success (or when every suite verdict is as expected), 1 when
a check fails or a suite verdict is unexpected, 2 on malformed input.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path

import click

from . import axiom_suite as ax
from . import extended_net as en
from . import simple_net as sn
from .dot import to_dot
from .formula import FormulaSyntaxError, from_json as formula_from_json, negate
from .morphisms import (
    TRANSPOSE_DIRECTIONS,
    Hom,
    MorphismTypeError,
    SexpError,
    elaborate,
    hom_sum,
    parse_expr,
    transpose,
)


class InputError(click.ClickException):
    exit_code = 2


def _line_col(text: str, pos: int) -> str:
    line = text.count("\n", 0, pos) + 1
    col = pos - (text.rfind("\n", 0, pos) + 1) + 1
    return f"{line}:{col}"


def _load_mexp(path: Path, extended: bool):
    text = path.read_text()
    try:
        hom = elaborate(parse_expr(text), "enet" if extended else "snet")
    except SexpError as exc:
        where = f"{path}:{_line_col(text, exc.pos)}" if exc.pos is not None else str(path)
        raise InputError(f"{where}: {exc.message}") from exc
    except (MorphismTypeError, FormulaSyntaxError) as exc:
        raise InputError(f"{path}: {exc}") from exc
    return hom.net


def _is_extended_json(obj: dict) -> bool:
    if obj.get("anchors"):
        return True
    for l in obj.get("links", []):
        if isinstance(l, dict) and ("count" in l or isinstance(l.get("src"), str)):
            return True
    return False


def load_net(path: str | Path, extended: bool = False):
    """Read a net file (``.bnet.json`` or ``.mexp``); promote to an extended net if asked."""
    path = Path(path)
    if not path.exists():
        raise InputError(f"{path}: no such file")
    if path.suffix == ".mexp":
        net = _load_mexp(path, extended)
    else:
        text = path.read_text()
        try:
            obj = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InputError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from exc
        if not isinstance(obj, dict) or not isinstance(obj.get("sequent"), list):
            raise InputError(f"{path}: expected an object with a 'sequent' list")
        for i, f in enumerate(obj["sequent"]):
            try:
                formula_from_json(f)
            except FormulaSyntaxError as exc:
                raise InputError(f"{path}: sequent[{i}]: {exc}") from exc
            except ValueError as exc:
                raise InputError(f"{path}: sequent[{i}]: {exc}") from exc
        try:
            if _is_extended_json(obj):
                net = en.ext_from_json(obj)
            else:
                net = sn.net_from_json(obj)
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"{path}: malformed links: {exc}") from exc
    if isinstance(net, sn.SimpleNet):
        bad = sn.validate_net(net)
    else:
        bad = en.validate_extended(net)
    if bad:
        raise InputError(f"{path}: " + "; ".join(str(v) for v in bad))
    if extended and isinstance(net, sn.SimpleNet):
        net = en.from_simple(net)
    return net


def net_json(net) -> str:
    obj = sn.net_to_json(net) if isinstance(net, sn.SimpleNet) else en.ext_to_json(net)
    return json.dumps(obj, indent=2) + "\n"


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        click.echo(text, nl=False)


def _as_hom(net, path) -> Hom:
    if len(net.sequent) != 2:
        raise InputError(f"{path}: a map needs a two-formula sequent")
    cat = "snet" if isinstance(net, sn.SimpleNet) else "enet"
    return Hom(negate(net.sequent[0]), net.sequent[1], net, cat)


def _pair(f, g, extended: bool):
    ext = extended or not (isinstance(f, sn.SimpleNet) and isinstance(g, sn.SimpleNet))
    if ext:
        f = en.from_simple(f) if isinstance(f, sn.SimpleNet) else f
        g = en.from_simple(g) if isinstance(g, sn.SimpleNet) else g
    return f, g, ext


def _guard(fn, *args):
    try:
        return fn(*args)
    except (sn.NetError, MorphismTypeError) as exc:
        raise InputError(str(exc)) from exc
    except sn.PruningBudgetError as exc:
        raise InputError(f"{exc} (raise BOOLCAT_PRUNING_CAP to allow more)") from exc


output_option = click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write to a file.")


@click.group(context_settings={"help_option_names": ["-h", "--help"]})
def cli():
    """Classical proof nets and their categories."""


@cli.command()
@click.argument("file", type=click.Path())
def check(file):
    """Validate a net and report correctness."""
    net = load_net(file)
    if isinstance(net, sn.SimpleNet):
        pairs, ok = net.links, _guard(sn.is_correct, net)
    else:
        pairs, ok = en.leaf_paths(net), _guard(en.is_correct_extended, net)
    linked, total = _guard(sn.count_linked_prunings, net.sequent, pairs)
    click.echo(f"{'correct' if ok else 'incorrect'} ({linked}/{total} prunings linked)")
    return 0 if ok else 1


@cli.command()
@click.argument("f", type=click.Path())
@click.argument("g", type=click.Path())
@click.option("--extended", is_flag=True, help="Compose as extended nets (anchors at the cut).")
@output_option
def compose(f, g, extended, output):
    """Cut the last formula of F against the first formula of G."""
    a, b, ext = _pair(load_net(f, extended), load_net(g, extended), extended)
    i = len(a.sequent) - 1
    out = _guard(en.cut_extended if ext else sn.cut, a, i, b, 0)
    _emit(net_json(out), output)
    return 0


@cli.command("transpose")
@click.argument("f", type=click.Path())
@click.option("--shape", type=click.Choice(TRANSPOSE_DIRECTIONS), required=True)
@output_option
def transpose_cmd(f, shape, output):
    """Move a formula across the arrow of a map ``[~A, B]``."""
    h = _as_hom(load_net(f), f)
    _emit(net_json(_guard(transpose, h, shape).net), output)
    return 0


@cli.command("sum")
@click.argument("f", type=click.Path())
@click.argument("g", type=click.Path())
@click.option("--extended", is_flag=True)
@output_option
def sum_cmd(f, g, extended, output):
    """Sum of two parallel nets."""
    a, b, ext = _pair(load_net(f, extended), load_net(g, extended), extended)
    if not ext:
        out = _guard(sn.net_sum, a, b)
    else:
        out = _guard(hom_sum, _as_hom(a, f), _as_hom(b, g)).net
    _emit(net_json(out), output)
    return 0


@cli.command()
@click.argument("f", type=click.Path())
@click.option("--anchor", "anchor", help="Anchor id to eliminate.")
@click.option("--all-orders", is_flag=True, help="Eliminate every anchor in every order.")
@click.option("--bound", type=click.IntRange(0), default=en.DEFAULT_ANCHOR_BOUND, show_default=True)
@output_option
def eliminate(f, anchor, all_orders, bound, output):
    """Eliminate anchors of an extended net."""
    if (anchor is None) == (not all_orders):
        raise click.UsageError("give exactly one of --anchor and --all-orders")
    net = load_net(f, extended=True)
    if anchor is not None:
        _emit(net_json(_guard(en.eliminate_anchor, net, anchor)), output)
        return 0
    try:
        forms = en.elimination_normal_forms(net, bound)
    except en.AnchorBoundError as exc:
        raise InputError(str(exc)) from exc
    click.echo(f"{len(forms)} distinct normal form{'s' if len(forms) != 1 else ''}")
    for n in forms:
        click.echo(f"  {n}")
    if output:
        Path(output).write_text(json.dumps([en.ext_to_json(n) for n in forms], indent=2) + "\n")
    return 0


@cli.command()
@click.argument("level", type=click.Choice(ax.LEVELS + ("all",)), metavar="LEVEL")
@click.option("--category", type=click.Choice(["snet", "enet"]), default="snet", show_default=True)
@click.option("--bindings", type=click.IntRange(0), default=25, show_default=True)
@click.option("--depth", type=click.IntRange(0), default=2, show_default=True)
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--sweep", is_flag=True, help="Add the small exhaustive sweep.")
@click.option("--format", "fmt", type=click.Choice(["table", "json"]), default="table")
@output_option
def suite(level, category, bindings, depth, seed, sweep, fmt, output):
    """Model-check the equation catalog at LEVEL."""
    try:
        report = ax.run_suite(
            level, category, num_bindings=bindings, max_depth=depth, seed=seed, sweep=sweep
        )
    except ax.CatalogError as exc:
        raise InputError(str(exc)) from exc
    text = report.dumps() + "\n" if fmt == "json" else report.table() + "\n"
    _emit(text, output)
    return 0 if report.ok else 1


@cli.command("export-dot")
@click.argument("f", type=click.Path())
@click.argument("out", type=click.Path(dir_okay=False))
def export_dot(f, out):
    """Write a Graphviz drawing of a net."""
    net = load_net(f)
    Path(out).write_text(to_dot(net, Path(f).name))
    return 0


def main(argv: list[str] | None = None) -> int:
    try:
        rv = cli.main(args=argv, prog_name="boolcat", standalone_mode=False)
    except click.exceptions.Exit as exc:
        return exc.exit_code
    except click.ClickException as exc:
        exc.show()
        return exc.exit_code
    except click.Abort:
        return 1
    return rv if isinstance(rv, int) else 0


if __name__ == "__main__":
    sys.exit(main())
