"""Hypothesis strategies for small finite algebras."""

from hypothesis import strategies as st

from clonelab.algebra import Domain, Operation, Relation


@st.composite
def operations(draw, size=None, arity=None, max_size=3, max_arity=2):
    size = size or draw(st.integers(1, max_size))
    arity = arity or draw(st.integers(1, max_arity))
    table = draw(st.lists(st.integers(0, size - 1), min_size=size**arity, max_size=size**arity))
    return Operation(Domain(size), arity, tuple(table))


@st.composite
def relations(draw, size, arity):
    pts = [tuple(p) for p in Domain(size).tuples(arity)]
    chosen = draw(st.lists(st.sampled_from(pts), unique=True, max_size=len(pts)))
    return Relation(Domain(size), arity, frozenset(chosen))


@st.composite
def unary_families(draw, size):
    ops = draw(st.lists(operations(size=size, arity=1), min_size=1, max_size=6))
    return ops
