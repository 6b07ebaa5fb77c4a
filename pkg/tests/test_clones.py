import itertools
import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from clonelab.algebra import Domain, Operation, all_operations, make_constant, make_projection, preserves
from clonelab.clones import (
    check_quasigroup,
    constants,
    contains,
    divisions,
    find_quasigroup_ops,
    generate_clone,
    group_triple,
    is_constantive,
    is_latin_square,
)
from clonelab.errors import AlgebraError, IncompleteSaturation
from clonelab.galois import inv

from strategies import operations

B = Domain(2)
NEG = Operation(B, 1, (1, 0))
C0 = make_constant(B, 1, 0)
MIN2 = Operation.from_function(B, 2, min)


def tables(ops):
    return sorted(op.table for op in ops)


def test_projections_only():
    C = generate_clone([], 2, domain=B)
    assert C.count(1) == 1 and C.count(2) == 2
    assert C.complete[1] and C.complete[2]


def test_negation_and_constant_examples():
    assert tables(generate_clone([NEG], 1).members(1)) == [(0, 1), (1, 0)]
    assert tables(generate_clone([C0], 1).members(1)) == [(0, 0), (0, 1)]


def test_contains_examples():
    C = generate_clone([C0], 2)
    assert contains(C, make_projection(B, 1, 1))
    assert contains(C, make_projection(B, 2, 2))
    assert not contains(C, NEG)


def test_truncated_saturation_refuses():
    C = generate_clone([NEG], 1, budget=1)
    assert not C.complete[1]
    with pytest.raises(IncompleteSaturation):
        contains(C, C0)
    with pytest.raises(IncompleteSaturation):
        is_constantive(C)


def test_arity_out_of_range():
    C = generate_clone([NEG], 1)
    with pytest.raises(AlgebraError):
        C.members(2)


def test_generators_above_max_arity():
    # unary part of the clone of min: the projection only
    C = generate_clone([MIN2], 1)
    assert tables(C.members(1)) == [(0, 1)]


def test_is_constantive_examples():
    assert is_constantive(generate_clone(constants(3), 1))
    assert not is_constantive(generate_clone([], 1, domain=B))
    assert is_constantive(generate_clone(list(all_operations(B, 2)), 2))


def test_full_clone_sizes():
    C = generate_clone([Operation.from_function(B, 2, lambda x, y: 1 - (x & y))], 3)
    assert [C.count(n) for n in (1, 2, 3)] == [4, 16, 256]


def test_post_lattice_counts_on_small_generators():
    # clone of (x and y): the meet semilattice terms over n variables
    C = generate_clone([MIN2], 3)
    assert [C.count(n) for n in (1, 2, 3)] == [1, 3, 7]


@pytest.mark.parametrize("seed", range(6))
def test_saturation_matches_oracle(seed):
    rng = random.Random(seed)
    size = 2 if seed < 4 else 3
    n = 2 if size == 2 else 1
    gens = [Operation(size, a, tuple(rng.randrange(size) for _ in range(size**a))) for a in (1, 2)]
    C = generate_clone(gens, n)
    want = oracles.clone_part([(g.table, g.arity) for g in gens], n, size)
    assert set(op.table for op in C.members(n)) == want


@pytest.mark.parametrize("seed", range(3))
def test_shortcut_agrees_with_plain_saturation(seed):
    rng = random.Random(100 + seed)
    gens = constants(3) + [Operation(3, 2, tuple(rng.randrange(3) for _ in range(9)))]
    fast = generate_clone(gens, 2)
    slow = generate_clone(gens, 2, shortcut=False)
    assert set(fast.members(2)) == set(slow.members(2))


# ---------------------------------------------------------------------------
# quasigroups

@pytest.mark.parametrize("n", [3, 4, 5])
def test_group_triples_are_quasigroups(n):
    assert check_quasigroup(*group_triple(n))


def test_min_rejected_on_row_zero():
    for ldiv, rdiv in itertools.product(list(all_operations(B, 2)), repeat=2):
        res = check_quasigroup(MIN2, ldiv, rdiv)
        assert not res and res.x == 0


def test_quasigroup_needs_binary():
    with pytest.raises(AlgebraError):
        check_quasigroup(NEG, MIN2, MIN2)


def test_find_quasigroup_examples():
    found = find_quasigroup_ops(generate_clone(group_triple(3), 2))
    assert found is not None and check_quasigroup(*found)
    assert find_quasigroup_ops(generate_clone([], 2, domain=B)) is None
    webb = Operation.from_function(3, 2, lambda x, y: (max(x, y) + 1) % 3)
    full = generate_clone([webb], 2)
    assert full.count(2) == 3**9
    found = find_quasigroup_ops(full)
    assert found is not None and check_quasigroup(*found)


def test_divisions_are_forced():
    for dot in all_operations(3, 2):
        if is_latin_square(dot):
            ldiv, rdiv = divisions(dot)
            assert check_quasigroup(dot, ldiv, rdiv)


def test_quasigroup_triples_on_two_elements_exhaustive():
    ops = list(all_operations(B, 2))
    hits = [t for t in itertools.product(ops, repeat=3) if check_quasigroup(*t)]
    # exactly the two Latin squares on {0,1}, each with its forced divisions
    assert len(hits) == 2
    assert all(is_latin_square(t[0]) and (t[1], t[2]) == divisions(t[0]) for t in hits)


def test_cancellation_z3():
    dot, ldiv, _ = group_triple(3)
    unary = list(itertools.product(range(3), repeat=3))
    for r, s, f in itertools.product(unary, repeat=3):
        if all(ldiv(r[x], dot(s[x], f[x])) == f[x] for x in range(3)):
            assert r == s


# ---------------------------------------------------------------------------
# properties

@given(st.data())
def test_saturation_idempotent(data):
    size = data.draw(st.integers(1, 3))
    gens = data.draw(st.lists(operations(size=size), max_size=2))
    n = 1 if size == 3 else 2
    C = generate_clone(gens, n, domain=size)
    again = generate_clone(list(C.members(n)), n, domain=size)
    assert set(again.members(n)) == set(C.members(n))


@given(st.data())
def test_members_preserve_generator_invariants(data):
    size = data.draw(st.integers(1, 3))
    gens = data.draw(st.lists(operations(size=size), max_size=2))
    k = 1 if size == 3 else data.draw(st.integers(1, 2))
    C = generate_clone(gens, 2, domain=size)
    rels = inv(C, k).members
    for op in C.members(2)[:50]:
        assert all(preserves(op, r) for r in rels)


@given(st.data())
def test_found_quasigroup_is_latin(data):
    size = data.draw(st.integers(2, 3))
    gens = data.draw(st.lists(operations(size=size, arity=2), max_size=2))
    found = find_quasigroup_ops(generate_clone(gens, 2, domain=size))
    if found is not None:
        assert is_latin_square(found[0])
        assert check_quasigroup(*found)


@given(st.data())
def test_cancellation_any_quasigroup(data):
    size = data.draw(st.integers(2, 3))
    latin = [op for op in all_operations(size, 2) if is_latin_square(op)]
    dot = data.draw(st.sampled_from(latin))
    ldiv, _ = divisions(dot)
    r, s, f = (tuple(data.draw(st.lists(st.integers(0, size - 1), min_size=size, max_size=size))) for _ in range(3))
    if all(ldiv(r[x], dot(s[x], f[x])) == f[x] for x in range(size)):
        assert r == s
