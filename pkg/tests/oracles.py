"""Slow, direct reference implementations used to cross-check the library.

Everything here works on plain tuples (tables in lexicographic argument order,
last coordinate fastest) and shares no code with ``clonelab``.
"""

from __future__ import annotations

import itertools


def points(size, arity):
    return list(itertools.product(range(size), repeat=arity))


def apply(table, size, args):
    i = 0
    for a in args:
        i = i * size + a
    return table[i]


def preserves(table, arity, size, rel):
    for rows in itertools.product(rel, repeat=arity):
        image = tuple(apply(table, size, col) for col in zip(*rows))
        if image not in rel:
            return False
    return True


def all_tables(size, arity):
    return list(itertools.product(range(size), repeat=size**arity))


def pol(rels, m, size):
    return sorted(t for t in all_tables(size, m) if all(preserves(t, m, size, r) for r in rels))


def inv(ops, k, size):
    """ops: list of (table, arity). Returns all preserved k-ary relations as frozensets."""
    pts = points(size, k)
    out = []
    for mask in range(2 ** len(pts)):
        rel = frozenset(p for i, p in enumerate(pts) if mask >> i & 1)
        if all(preserves(t, a, size, rel) for t, a in ops):
            out.append(rel)
    return out


def lo_k(family, k, size, m):
    pts = points(size, m)
    fam = [tuple(t) for t in family]
    out = []
    for f in all_tables(size, m):
        ok = True
        for s in range(1, min(k, len(pts)) + 1):
            for S in itertools.combinations(range(len(pts)), s):
                if not any(all(g[i] == f[i] for i in S) for g in fam):
                    ok = False
                    break
            if not ok:
                break
        if ok and fam:
            out.append(f)
    return sorted(out)


def compose(head, head_arity, inner, size, n):
    """head(inner_1, ..., inner_r) where each inner is an n-ary table."""
    return tuple(
        apply(head, size, tuple(g[i] for g in inner)) for i in range(size**n)
    )


def clone_part(generators, n, size):
    """n-ary part of the generated clone: close projections and generators'
    compositions, also allowing n-ary members as heads."""
    pts = points(size, n)
    members = {tuple(p[j] for p in pts) for j in range(n)}
    heads = list(generators)
    while True:
        new = set()
        cur = sorted(members)
        for table, r in heads + [(t, n) for t in cur]:
            for inner in itertools.product(cur, repeat=r):
                h = compose(table, r, inner, size, n)
                if h not in members:
                    new.add(h)
        if not new:
            return members
        members |= new


def is_base(D_indices, family):
    fam = [tuple(t) for t in family]
    for f, g in itertools.combinations(fam, 2):
        if f != g and all(f[i] == g[i] for i in D_indices):
            return False
    return True


def minimal_base_size(family, n_points):
    for s in range(n_points + 1):
        for D in itertools.combinations(range(n_points), s):
            if is_base(D, family):
                return s
    return None
