"""Clone generation by superposition, membership and quasigroup detection."""

from __future__ import annotations

import random
from dataclasses import dataclass, field
import itertools
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import Domain, Operation, make_constant, make_projection
from .errors import AlgebraError, IncompleteSaturation

DEFAULT_BUDGET = 50_000

# seen-bitmap is used while size**(size**n) stays below this
_BITMAP_LIMIT = 1 << 26


@dataclass(frozen=True)
class CloneRepr:
    domain: Domain
    generators: tuple[Operation, ...]
    max_arity: int
    budget: int
    members_by_arity: dict = field(hash=False, compare=False)
    complete: dict = field(hash=False, compare=False)

    def members(self, n: int) -> tuple[Operation, ...]:
        """n-ary members in saturation order; raises if saturation was cut short."""
        self._require(n)
        return self.members_by_arity[n]

    def _require(self, n: int):
        if n < 1 or n > self.max_arity:
            raise AlgebraError(f"arity {n} outside the saturated range 1..{self.max_arity}")
        if not self.complete[n]:
            raise IncompleteSaturation(
                f"saturation at arity {n} stopped at the budget of {self.budget} members"
            )

    def family(self, n: int):
        from .galois import FunctionFamily

        return FunctionFamily(self.domain, n, self.members(n))

    def count(self, n: int) -> int:
        return len(self.members_by_arity[n])


def _codes_for(size: int, width: int):
    if size**width < 2**62:
        return size ** np.arange(width - 1, -1, -1, dtype=np.int64)
    return None


class _ArityStore:
    """Deduplicating member store for one arity."""

    def __init__(self, size: int, width: int, budget: int):
        self.size = size
        self.width = width
        self.budget = budget
        self.rows = np.zeros((min(budget, 1024), width), dtype=np.int64)
        self.count = 0
        self.total = size**width if width < 64 else None
        self.weights = _codes_for(size, width)
        if self.weights is not None and self.total is not None and self.total <= _BITMAP_LIMIT:
            self.bitmap = np.zeros(self.total, dtype=bool)
            self.known = None
        else:
            self.bitmap = None
            self.known = set()
        self.overflow = False

    @property
    def full(self) -> bool:
        return self.total is not None and self.count == self.total

    def _keys(self, batch: np.ndarray):
        if self.weights is not None:
            return batch @ self.weights
        return [row.tobytes() for row in batch]

    def add(self, batch: np.ndarray) -> bool:
        """Insert unseen rows of ``batch`` in order; False once the budget is hit."""
        if len(batch) == 0:
            return True
        keys = self._keys(batch)
        if self.bitmap is not None:
            fresh = ~self.bitmap[keys]
            if not fresh.any():
                return True
            sub_keys = keys[fresh]
            _, first = np.unique(sub_keys, return_index=True)
            first.sort()
            new_rows = batch[fresh][first]
            new_keys = sub_keys[first]
        else:
            picked, new_keys = [], []
            for i, key in enumerate(keys if isinstance(keys, list) else keys.tolist()):
                if key not in self.known:
                    self.known.add(key)
                    picked.append(i)
                    new_keys.append(key)
            if not picked:
                return True
            new_rows = batch[picked]
        room = self.budget - self.count
        if len(new_rows) > room:
            new_rows = new_rows[:room]
            new_keys = new_keys[:room]
            self.overflow = True
        if self.bitmap is not None:
            self.bitmap[new_keys] = True
        self._append(new_rows)
        return not self.overflow

    def _append(self, new_rows):
        need = self.count + len(new_rows)
        if need > len(self.rows):
            grown = np.zeros((max(need, 2 * len(self.rows)), self.width), dtype=np.int64)
            grown[: self.count] = self.rows[: self.count]
            self.rows = grown
        self.rows[self.count : need] = new_rows
        self.count = need


def _apply(gen_table: np.ndarray, size: int, args: Sequence[np.ndarray]) -> np.ndarray:
    idx = args[0]
    for a in args[1:]:
        idx = idx * size + a
    return gen_table[idx]


def _essential_surjective(rows: np.ndarray, size: int, n: int) -> bool:
    """Whether some row (an n-ary table) hits every value and depends on >= 2 arguments."""
    for row in rows:
        if len(np.unique(row)) != size:
            continue
        arr = row.reshape((size,) * n)
        if sum(bool((np.diff(arr, axis=i) != 0).any()) for i in range(n)) >= 2:
            return True
    return False


def _saturate(domain: Domain, generators: Sequence[Operation], n: int, budget: int, unary_full=False):
    size = domain.size
    width = size**n
    store = _ArityStore(size, width, budget)
    proj = np.array([make_projection(domain, n, j).table for j in range(1, n + 1)], dtype=np.int64)
    if not store.add(proj):
        return store
    tables = [np.array(g.table, dtype=np.int64) for g in generators]
    # Slupecki: on >= 3 points, all unary operations plus one essential surjective
    # operation generate every operation
    shortcut = unary_full and size >= 3 and n >= 2 and store.total is not None
    if shortcut and any(
        g.arity >= 2 and _essential_surjective(t[None, :], size, g.arity) for g, t in zip(generators, tables)
    ):
        return _everything(store)
    lo = 0
    # breadth-first by composition depth; each round only uses tuples touching the
    # previous round's members
    while lo < store.count and not store.full:
        hi = store.count
        for gen, gt in zip(generators, tables):
            k = gen.arity
            if k == 1:
                ok = store.add(_apply(gt, size, [store.rows[lo:hi]]))
            else:
                ok = _apply_many(store, gt, size, k, lo, hi)
            if not ok or store.full:
                return store
        if shortcut and _essential_surjective(store.rows[hi : store.count], size, n):
            return _everything(store)
        lo = hi
    return store


def _everything(store: _ArityStore) -> _ArityStore:
    """Complete ``store`` to all operations of its arity, existing members first."""
    total = store.total
    if total > store.budget:
        # cannot hold them all; mark the arity as cut short
        store.overflow = True
        return store
    codes = np.arange(total, dtype=np.int64)
    digits = (codes[:, None] // store.weights[None, :]) % store.size
    store.add(digits)
    return store


_CHUNK = 1 << 22


def _apply_many(store: _ArityStore, gt, size, k, lo, hi) -> bool:
    """Apply a k-ary generator (k >= 2) to every member tuple touching the frontier.

    Heads (the first k-1 arguments) are processed in lexicographic order, in
    chunks, with the last argument vectorised.
    """
    rows = store.rows
    width = store.width

    def run(heads: np.ndarray, last: np.ndarray) -> Optional[bool]:
        if len(heads) == 0 or len(last) == 0:
            return None
        step = max(1, _CHUNK // (len(last) * width))
        for start in range(0, len(heads), step):
            h = heads[start : start + step]
            idx = np.zeros((len(h), 1, width), dtype=np.int64)
            for c in range(k - 1):
                idx = idx * size + rows[h[:, c]][:, None, :]
            idx = idx * size + last[None, :, :]
            if not store.add(gt[idx].reshape(-1, width)):
                return False
            if store.full:
                return True
        return None

    # heads with some coordinate in the frontier pair with every member,
    # heads entirely below the frontier only with frontier members
    for head in itertools.product(range(hi), repeat=k - 2):
        touches = any(i >= lo for i in head)
        prefix = np.array(head, dtype=np.int64).reshape(1, k - 2)
        firsts = np.arange(hi, dtype=np.int64)
        heads = np.hstack([np.repeat(prefix, hi, axis=0), firsts[:, None]])
        if touches:
            res = run(heads, rows[0:hi])
        else:
            old, new = heads[:lo], heads[lo:]
            # keep lexicographic order: old heads first, then frontier heads
            res = run(old, rows[lo:hi])
            if res is None:
                res = run(new, rows[0:hi])
        if res is not None:
            return res
    return True


def generate_clone(
    generators: Iterable[Operation],
    max_arity: int,
    budget: int = DEFAULT_BUDGET,
    domain: Optional[Domain] = None,
    shortcut: bool = True,
) -> CloneRepr:
    """Saturate the clone generated by ``generators`` at arities 1..max_arity.

    The n-ary part is computed as the closure of the n-ary projections under
    g_1, ..., g_k -> f(g_1, ..., g_k) for generators f, which yields exactly the
    n-ary members, so generators may have arity above ``max_arity``.

    With ``shortcut`` (the default) an arity is filled with every operation as
    soon as the clone provably contains them all; members then come after the
    saturated prefix in lexicographic order instead of composition order.
    """
    gens: list[Operation] = []
    for g in generators:
        if g not in gens:
            gens.append(g)
    if domain is None:
        if not gens:
            raise AlgebraError("a domain is required when there are no generators")
        domain = gens[0].domain
    elif not isinstance(domain, Domain):
        domain = Domain(domain)
    for g in gens:
        if g.domain != domain:
            raise AlgebraError("generators must share a domain")
    if max_arity < 1:
        raise AlgebraError("max_arity must be at least 1")
    members, complete = {}, {}
    for n in range(1, max_arity + 1):
        unary_full = n > 1 and complete[1] and len(members[1]) == domain.size**domain.size
        store = _saturate(domain, gens, n, budget, unary_full=shortcut and unary_full)
        rows = store.rows[: store.count]
        members[n] = tuple(Operation(domain, n, tuple(r)) for r in rows.tolist())
        complete[n] = not store.overflow
    return CloneRepr(domain, tuple(gens), max_arity, budget, members, complete)


def contains(clone: CloneRepr, f: Operation) -> bool:
    if f.domain != clone.domain:
        raise AlgebraError("operation and clone live on different domains")
    return f in set(clone.members(f.arity))


def is_constantive(clone: CloneRepr) -> bool:
    members = set(clone.members(1))
    return all(make_constant(clone.domain, 1, a) in members for a in clone.domain)


# ---------------------------------------------------------------------------
# quasigroups

@dataclass(frozen=True)
class QuasigroupCheck:
    ok: bool
    identity: Optional[str] = None
    x: Optional[int] = None
    y: Optional[int] = None

    def __bool__(self):
        return self.ok


QUASIGROUP_IDENTITIES = (
    "x\\(x*y)=y",
    "x*(x\\y)=y",
    "(x*y)/y=x",
    "(x/y)*y=x",
)


def check_quasigroup(dot: Operation, ldiv: Operation, rdiv: Operation) -> QuasigroupCheck:
    """Check the four quasigroup identities pointwise; the first failure is reported."""
    for op in (dot, ldiv, rdiv):
        if op.arity != 2:
            raise AlgebraError(f"quasigroup operations must be binary, got arity {op.arity}")
    if not dot.domain == ldiv.domain == rdiv.domain:
        raise AlgebraError("quasigroup operations must share a domain")
    s = dot.domain.size
    m, l, r = dot.table, ldiv.table, rdiv.table
    for x in range(s):
        for y in range(s):
            sides = (
                l[x * s + m[x * s + y]] == y,
                m[x * s + l[x * s + y]] == y,
                r[m[x * s + y] * s + y] == x,
                m[r[x * s + y] * s + y] == x,
            )
            for name, holds in zip(QUASIGROUP_IDENTITIES, sides):
                if not holds:
                    return QuasigroupCheck(False, name, x, y)
    return QuasigroupCheck(True)


def is_latin_square(op: Operation) -> bool:
    s = op.domain.size
    full = set(range(s))
    rows = [set(op.table[x * s : (x + 1) * s]) for x in range(s)]
    cols = [set(op.table[x * s + y] for x in range(s)) for y in range(s)]
    return all(r == full for r in rows) and all(c == full for c in cols)


def divisions(dot: Operation) -> tuple[Operation, Operation]:
    """The unique left and right divisions of a Latin-square operation."""
    s = dot.domain.size
    ldiv = [0] * (s * s)
    rdiv = [0] * (s * s)
    for x in range(s):
        for y in range(s):
            z = dot.table[x * s + y]
            ldiv[x * s + z] = y
            rdiv[z * s + y] = x
    return Operation(dot.domain, 2, ldiv), Operation(dot.domain, 2, rdiv)


def find_quasigroup_ops(clone: CloneRepr) -> Optional[tuple[Operation, Operation, Operation]]:
    """First (dot, ldiv, rdiv) among binary members in lexicographic table order.

    For a fixed dot the divisions are forced, so scanning dot in table order is
    the same as scanning triples in lexicographic order.
    """
    members = clone.members(2)
    present = set(members)
    for dot in sorted(members, key=lambda o: o.table):
        if not is_latin_square(dot):
            continue
        ldiv, rdiv = divisions(dot)
        if ldiv in present and rdiv in present:
            return dot, ldiv, rdiv
    return None


def group_triple(size: int) -> tuple[Operation, Operation, Operation]:
    """(x+y, y-x, x-y) modulo ``size``: the quasigroup operations of Z_size."""
    d = Domain(size)
    return (
        Operation.from_function(d, 2, lambda x, y: (x + y) % size),
        Operation.from_function(d, 2, lambda x, y: (y - x) % size),
        Operation.from_function(d, 2, lambda x, y: (x - y) % size),
    )


# ---------------------------------------------------------------------------
# random instances

def random_operation(rng: random.Random, domain, arity: int) -> Operation:
    domain = domain if isinstance(domain, Domain) else Domain(domain)
    return Operation(domain, arity, tuple(rng.randrange(domain.size) for _ in range(domain.size**arity)))


def random_generators(rng: random.Random, domain, max_ops: int = 2, arities=(1, 2)) -> list[Operation]:
    return [random_operation(rng, domain, rng.choice(arities)) for _ in range(rng.randint(0, max_ops))]


def constants(domain) -> list[Operation]:
    domain = domain if isinstance(domain, Domain) else Domain(domain)
    return [make_constant(domain, 1, a) for a in domain]
