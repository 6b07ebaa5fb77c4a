"""Pol-Inv and the local interpolation operators Lo_k on finite domains.

Two independent routes to the local closure are kept apart on purpose:
``lo_k_family`` interpolates on small subsets of A^m, while
``pol(inv(C, k), m)`` goes through the k-ary invariant relations.
``check_local_closure_routes`` compares them.
"""

from __future__ import annotations

import itertools
import math
import os
import random
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import Domain, Operation, Relation, TupleIndex, all_operations
from .clones import CloneRepr
from .errors import AlgebraError, CapExceeded


def default_cap() -> int:
    return int(os.environ.get("CLONELAB_CAP", 2**20))


@dataclass(frozen=True)
class FunctionFamily:
    domain: Domain
    arity: int
    members: tuple[Operation, ...] = ()
    sampled: bool = field(default=False, compare=False)

    def __post_init__(self):
        ops = set(self.members)
        for op in ops:
            if op.arity != self.arity or op.domain != self.domain:
                raise AlgebraError(
                    f"family of arity {self.arity} on size {self.domain.size} got {op!r}"
                )
        object.__setattr__(self, "members", tuple(sorted(ops, key=lambda o: o.table)))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, op):
        return op in set(self.members)

    def __le__(self, other: "FunctionFamily"):
        return set(self.members) <= set(other.members)

    @property
    def tables(self) -> tuple[tuple[int, ...], ...]:
        return tuple(op.table for op in self.members)


@dataclass(frozen=True)
class RelationFamily:
    domain: Domain
    members: tuple[Relation, ...] = ()
    sampled: bool = field(default=False, compare=False)

    def __post_init__(self):
        rels = set(self.members)
        for r in rels:
            if r.domain != self.domain:
                raise AlgebraError("relation family members must share the domain")
        object.__setattr__(self, "members", tuple(sorted(rels, key=Relation.sort_key)))

    def __len__(self):
        return len(self.members)

    def __iter__(self):
        return iter(self.members)

    def __contains__(self, rel):
        return rel in set(self.members)

    def __le__(self, other: "RelationFamily"):
        return set(self.members) <= set(other.members)


def family(ops: Iterable[Operation], domain=None, arity=None) -> FunctionFamily:
    ops = list(ops)
    if domain is None:
        if not ops:
            raise AlgebraError("an empty family needs an explicit domain and arity")
        domain = ops[0].domain
    if arity is None:
        if not ops:
            raise AlgebraError("an empty family needs an explicit domain and arity")
        arity = ops[0].arity
    domain = domain if isinstance(domain, Domain) else Domain(domain)
    return FunctionFamily(domain, arity, tuple(ops))


def _operations_of(C) -> tuple[Domain, list[Operation]]:
    if isinstance(C, CloneRepr):
        # a relation is invariant under a clone iff it is invariant under its generators
        return C.domain, list(C.generators)
    if isinstance(C, FunctionFamily):
        return C.domain, list(C.members)
    ops = list(C)
    if not ops:
        raise AlgebraError("cannot infer the domain of an empty operation list")
    return ops[0].domain, ops


def _lift(op: Operation, k: int) -> np.ndarray:
    """Componentwise action of ``op`` on A^k, as an array indexed by tuple codes."""
    size = op.domain.size
    idx = TupleIndex(size, k)
    points = np.array(list(idx), dtype=np.int64).reshape(size**k, k)
    table = np.array(op.table, dtype=np.int64)
    n = op.arity
    grids = np.meshgrid(*([np.arange(size**k)] * n), indexing="ij")
    out = np.zeros(grids[0].shape, dtype=np.int64)
    for i in range(k):
        code = np.zeros(grids[0].shape, dtype=np.int64)
        for g in grids:
            code = code * size + points[g, i]
        out = out * size + table[code]
    return out


def inv(C, k: int, cap: Optional[int] = None, domain=None) -> RelationFamily:
    """All k-ary relations preserved by every operation of C."""
    cap = default_cap() if cap is None else cap
    if isinstance(C, (CloneRepr, FunctionFamily)) or domain is None:
        dom, ops = _operations_of(C)
    else:
        dom, ops = (domain if isinstance(domain, Domain) else Domain(domain)), list(C)
    n_points = dom.size**k
    if n_points > max(cap, 1).bit_length() or 2**n_points > cap:
        raise CapExceeded(f"inv enumerates 2^{n_points} relations, cap is {cap}")
    lifts = [_lift(op, k) for op in ops]
    index = TupleIndex(dom.size, k)
    points = [index.decode(i) for i in range(n_points)]
    found = []
    for mask in range(2**n_points):
        member = np.array([(mask >> i) & 1 for i in range(n_points)], dtype=bool)
        elems = np.flatnonzero(member)
        ok = True
        for lift in lifts:
            sub = lift[np.ix_(*([elems] * lift.ndim))] if len(elems) else None
            if sub is not None and not member[sub].all():
                ok = False
                break
        if ok:
            found.append(Relation(dom, k, frozenset(points[i] for i in elems)))
    return RelationFamily(dom, tuple(found))


def _pol_constraints(rels: Sequence[Relation], m: int):
    size = rels[0].domain.size if rels else 1
    index = TupleIndex(size, m)
    cons = {}
    for rel in rels:
        rows = sorted(rel.tuples)
        allowed = rel.tuples
        for chosen in itertools.product(rows, repeat=m):
            key = tuple(index.encode(tuple(t[i] for t in chosen)) for i in range(rel.arity))
            cons.setdefault(key, set()).add(allowed)
    # bucket by the last index they mention, so each is checked once its variables are set
    buckets: dict[int, list] = {}
    for key, alloweds in cons.items():
        for allowed in alloweds:
            buckets.setdefault(max(key), []).append((key, allowed))
    return buckets


def pol(R, m: int, cap: Optional[int] = None, domain=None) -> FunctionFamily:
    """All m-ary operations preserving every relation in R.

    Backtracking over table entries in index order, so the result comes out in
    lexicographic table order.
    """
    cap = default_cap() if cap is None else cap
    rels = list(R.members if isinstance(R, RelationFamily) else R)
    if isinstance(R, RelationFamily):
        dom = R.domain
    elif domain is not None:
        dom = domain if isinstance(domain, Domain) else Domain(domain)
    elif rels:
        dom = rels[0].domain
    else:
        raise AlgebraError("pol of an empty relation list needs a domain")
    size, n_entries = dom.size, dom.size**m
    if size**n_entries > cap:
        raise CapExceeded(f"pol enumerates {size}^{n_entries} tables, cap is {cap}")
    buckets = _pol_constraints(rels, m)
    table = [0] * n_entries
    out = []

    def extend(pos):
        if pos == n_entries:
            out.append(Operation(dom, m, tuple(table)))
            return
        for v in range(size):
            table[pos] = v
            if all(tuple(table[i] for i in key) in allowed for key, allowed in buckets.get(pos, ())):
                extend(pos + 1)

    extend(0)
    return FunctionFamily(dom, m, tuple(out))


# ---------------------------------------------------------------------------
# interpolation route

@dataclass(frozen=True)
class Interpolation:
    """Outcome of a Lo_k membership test.

    ``subset`` is a violating set of points (encoded as tuples) when ``ok`` is
    false; ``method`` is "subsets" or "hitting-set".
    """

    ok: bool
    subset: Optional[tuple[tuple[int, ...], ...]] = None
    method: str = "subsets"

    def __bool__(self):
        return self.ok


def _n_subsets(n: int, k: int) -> int:
    return sum(math.comb(n, s) for s in range(min(k, n) + 1))


def lo_k_member(f: Operation, F: FunctionFamily, k: int, cap: Optional[int] = None) -> Interpolation:
    """Whether f can be interpolated by a member of F on every set of at most k points.

    The violating certificate is a smallest such set, lexicographically first
    among those of its size when subsets are enumerated directly.
    """
    if k < 1:
        raise AlgebraError("k must be at least 1")
    if f.arity != F.arity:
        raise AlgebraError(f"arity mismatch: f has {f.arity}, family has {F.arity}")
    if f.domain != F.domain:
        raise AlgebraError("domain mismatch")
    cap = default_cap() if cap is None else cap
    index = f.index
    n = len(index)
    if not F.members:
        return Interpolation(False, ())
    # g agrees with f on S iff S avoids the set where they differ
    differ = [frozenset(i for i in range(n) if g.table[i] != f.table[i]) for g in F.members]
    if any(not d for d in differ):
        return Interpolation(True)
    if _n_subsets(n, k) <= cap:
        for s in range(1, min(k, n) + 1):
            for S in itertools.combinations(range(n), s):
                hit = set(S)
                if all(d & hit for d in differ):
                    return Interpolation(False, tuple(index.decode(i) for i in S))
        return Interpolation(True)
    # f fails iff some <=k points meet every disagreement set: exact hitting-set search
    for s in range(1, min(k, n) + 1):
        S = _hitting_set(differ, s)
        if S is not None:
            return Interpolation(False, tuple(index.decode(i) for i in sorted(S)), "hitting-set")
    return Interpolation(True, method="hitting-set")


def _hitting_set(sets: Sequence[frozenset], budget: int, chosen=frozenset()):
    for d in sets:
        if not d & chosen:
            break
    else:
        return chosen
    if budget == 0:
        return None
    for x in sorted(d):
        got = _hitting_set(sets, budget - 1, chosen | {x})
        if got is not None:
            return got
    return None


def lo_k_family(
    F: FunctionFamily,
    k: int,
    cap: Optional[int] = None,
    sampled: bool = False,
    rng: Optional[random.Random] = None,
) -> FunctionFamily:
    """Lo_k F: every operation of F's arity interpolable by F on each <=k-set."""
    if k < 1:
        raise AlgebraError("k must be at least 1")
    cap = default_cap() if cap is None else cap
    dom, m = F.domain, F.arity
    size, n = dom.size, dom.size**m
    if not F.members:
        return FunctionFamily(dom, m, ())
    if size**n > cap:
        if not sampled:
            raise CapExceeded(f"Lo_k enumerates {size}^{n} tables, cap is {cap}")
        return _lo_k_sampled(F, k, cap, rng or random.Random(0))
    width = min(k, n)
    # restriction patterns of F on every set of `width` points (or fewer, near the start)
    patterns: dict[int, list] = {}
    for i in range(n):
        s = min(width, i + 1)
        entries = []
        for rest in itertools.combinations(range(i), s - 1):
            S = rest + (i,)
            entries.append((S, {tuple(g.table[j] for j in S) for g in F.members}))
        patterns[i] = entries
    table = [0] * n
    out = []

    def extend(pos):
        if pos == n:
            out.append(Operation(dom, m, tuple(table)))
            return
        for v in range(size):
            table[pos] = v
            if all(tuple(table[j] for j in S) in seen for S, seen in patterns[pos]):
                extend(pos + 1)

    extend(0)
    return FunctionFamily(dom, m, tuple(out))


def _lo_k_sampled(F, k, cap, rng):
    dom, m = F.domain, F.arity
    n = dom.size**m
    found = set(F.members)
    for _ in range(max(cap, 1)):
        cand = Operation(dom, m, tuple(rng.randrange(dom.size) for _ in range(n)))
        if lo_k_member(cand, F, k, cap=max(cap, 1)):
            found.add(cand)
    return FunctionFamily(dom, m, tuple(found), sampled=True)


# ---------------------------------------------------------------------------
# cross-checks

@dataclass(frozen=True)
class LocalClosureReport:
    equal: bool
    arity: int
    k: int
    interpolation_count: int
    preservation_count: int
    only_interpolation: tuple[Operation, ...] = ()
    only_preservation: tuple[Operation, ...] = ()

    def __bool__(self):
        return self.equal


def check_local_closure_routes(C: CloneRepr, m: int, k: int, cap: Optional[int] = None) -> LocalClosureReport:
    """Compare Lo_k(C^(m)) with the m-ary polymorphisms of the k-ary invariants of C."""
    by_interpolation = lo_k_family(C.family(m), k, cap=cap)
    by_preservation = pol(inv(C, k, cap=cap), m, cap=cap, domain=C.domain)
    a, b = set(by_interpolation.members), set(by_preservation.members)
    key = lambda o: o.table  # noqa: E731
    return LocalClosureReport(
        a == b,
        m,
        k,
        len(a),
        len(b),
        tuple(sorted(a - b, key=key)),
        tuple(sorted(b - a, key=key)),
    )


@dataclass(frozen=True)
class CompactnessReport:
    n: int
    bound: int
    sizes: tuple[int, ...]


def compactness_scan(F: FunctionFamily, cap: Optional[int] = None) -> CompactnessReport:
    """Least n >= 1 with Lo_n(F) = F; on a finite domain n <= size**m always."""
    bound = F.domain.size**F.arity
    target = set(F.members)
    sizes = []
    for n in range(1, bound + 1):
        got = lo_k_family(F, n, cap=cap)
        sizes.append(len(got))
        if set(got.members) == target:
            return CompactnessReport(n, bound, tuple(sizes))
    raise AssertionError("Lo_{size^m}(F) differs from F; interpolation code is broken")


def all_unary_monoids(size: int) -> list[FunctionFamily]:
    """Every submonoid of the full transformation monoid on ``size`` points.

    These are exactly the unary parts of clones on that domain.
    """
    from .clones import generate_clone

    dom = Domain(size)
    unary = list(all_operations(dom, 1))
    seen = {}
    for r in range(len(unary) + 1):
        for gens in itertools.combinations(unary, r):
            fam = generate_clone(gens, 1, domain=dom).family(1)
            seen.setdefault(fam.tables, fam)
    return [seen[t] for t in sorted(seen)]
