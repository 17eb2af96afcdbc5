"""Shared hypothesis strategies."""

from hypothesis import strategies as st

from boolcat.formula import BOT, TOP, And, Atom, NegAtom, Or


def formulas(atoms=("a", "b", "c"), max_depth=3, units=True):
    leaf_options = [st.sampled_from(atoms).map(Atom), st.sampled_from(atoms).map(NegAtom)]
    if units:
        leaf_options.append(st.sampled_from([TOP, BOT]))
    leaf = st.one_of(*leaf_options)

    def extend(children):
        return st.one_of(
            st.builds(And, children, children),
            st.builds(Or, children, children),
        )

    return st.recursive(leaf, extend, max_leaves=2 ** max_depth)
