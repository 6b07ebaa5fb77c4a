"""Operations and relations on a finite domain {0, ..., size-1}.

Operation tables are flat sequences indexed by argument tuples in
lexicographic order, last coordinate varying fastest, so that the table of
an n-ary operation on a domain of size s has length s**n.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .errors import AlgebraError, ParseError

DEFAULT_TABLE_CAP = 10**6


@dataclass(frozen=True, order=True)
class Domain:
    size: int

    def __post_init__(self):
        if not isinstance(self.size, int) or self.size < 1:
            raise AlgebraError(f"domain size must be a positive integer, got {self.size!r}")

    def __iter__(self) -> Iterator[int]:
        return iter(range(self.size))

    def __len__(self) -> int:
        return self.size

    def tuples(self, n: int) -> Iterator[tuple[int, ...]]:
        """All of A^n in the fixed table order."""
        return itertools.product(range(self.size), repeat=n)


@dataclass(frozen=True)
class TupleIndex:
    """Bijection between A^n and 0..size**n - 1 (last coordinate fastest)."""

    size: int
    arity: int

    def __len__(self) -> int:
        return self.size**self.arity

    def encode(self, t: Sequence[int]) -> int:
        if len(t) != self.arity:
            raise AlgebraError(f"expected a {self.arity}-tuple, got {tuple(t)!r}")
        idx = 0
        for x in t:
            if not 0 <= x < self.size:
                raise AlgebraError(f"entry {x!r} outside domain of size {self.size}")
            idx = idx * self.size + x
        return idx

    def decode(self, idx: int) -> tuple[int, ...]:
        if not 0 <= idx < len(self):
            raise AlgebraError(f"index {idx} outside 0..{len(self) - 1}")
        out = [0] * self.arity
        for pos in range(self.arity - 1, -1, -1):
            idx, out[pos] = divmod(idx, self.size)
        return tuple(out)

    def __iter__(self) -> Iterator[tuple[int, ...]]:
        return itertools.product(range(self.size), repeat=self.arity)


def _as_domain(domain) -> Domain:
    return domain if isinstance(domain, Domain) else Domain(domain)


@dataclass(frozen=True)
class Operation:
    domain: Domain
    arity: int
    table: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "domain", _as_domain(self.domain))
        object.__setattr__(self, "table", tuple(int(v) for v in self.table))
        if not isinstance(self.arity, int) or self.arity < 1:
            raise AlgebraError(f"arity must be a positive integer, got {self.arity!r}")
        size = self.domain.size
        if len(self.table) != size**self.arity:
            raise AlgebraError(
                f"table has {len(self.table)} entries, expected {size}^{self.arity} = {size**self.arity}"
            )
        bad = [v for v in self.table if not 0 <= v < size]
        if bad:
            raise AlgebraError(f"table entry {bad[0]} outside domain of size {size}")

    @classmethod
    def from_function(cls, domain, arity: int, fn: Callable[..., int]) -> "Operation":
        domain = _as_domain(domain)
        return cls(domain, arity, tuple(fn(*t) for t in domain.tuples(arity)))

    @property
    def size(self) -> int:
        return self.domain.size

    @property
    def index(self) -> TupleIndex:
        return TupleIndex(self.domain.size, self.arity)

    def __call__(self, *args: int) -> int:
        return evaluate(self, args)

    def restrict(self, points: Iterable[Sequence[int]]) -> tuple[int, ...]:
        """Values at the given points, in the order given."""
        index = self.index
        return tuple(self.table[index.encode(p)] for p in points)

    def __repr__(self):
        return f"Operation(size={self.domain.size}, arity={self.arity}, table={list(self.table)})"


@dataclass(frozen=True)
class Relation:
    domain: Domain
    arity: int
    tuples: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        object.__setattr__(self, "domain", _as_domain(self.domain))
        if not isinstance(self.arity, int) or self.arity < 1:
            raise AlgebraError(f"arity must be a positive integer, got {self.arity!r}")
        size = self.domain.size
        tuples = frozenset(tuple(int(x) for x in t) for t in self.tuples)
        for t in tuples:
            if len(t) != self.arity:
                raise AlgebraError(f"tuple {t} does not have length {self.arity}")
            if any(not 0 <= x < size for x in t):
                raise AlgebraError(f"tuple {t} has an entry outside domain of size {size}")
        object.__setattr__(self, "tuples", tuples)

    def __contains__(self, t) -> bool:
        return tuple(t) in self.tuples

    def __len__(self) -> int:
        return len(self.tuples)

    def __iter__(self):
        return iter(sorted(self.tuples))

    def sort_key(self):
        return (self.arity, len(self.tuples), sorted(self.tuples))


def evaluate(op: Operation, args: Sequence[int]) -> int:
    if len(args) != op.arity:
        raise AlgebraError(f"operation of arity {op.arity} applied to {len(args)} arguments")
    return op.table[op.index.encode(args)]


def preserves(op: Operation, rel: Relation) -> bool:
    """Whether applying ``op`` componentwise to tuples of ``rel`` stays in ``rel``."""
    if op.domain != rel.domain:
        raise AlgebraError(f"domain mismatch: {op.domain.size} vs {rel.domain.size}")
    rows = sorted(rel.tuples)
    table, size, k = op.table, op.domain.size, rel.arity
    for chosen in itertools.product(rows, repeat=op.arity):
        image = []
        for i in range(k):
            idx = 0
            for t in chosen:
                idx = idx * size + t[i]
            image.append(table[idx])
        if tuple(image) not in rel.tuples:
            return False
    return True


def make_projection(domain, arity: int, j: int) -> Operation:
    """The map (x_1, ..., x_n) -> x_j; ``j`` is 1-based."""
    if not 1 <= j <= arity:
        raise AlgebraError(f"projection coordinate {j} outside 1..{arity}")
    domain = _as_domain(domain)
    return Operation(domain, arity, tuple(t[j - 1] for t in domain.tuples(arity)))


def make_constant(domain, arity: int, value: int) -> Operation:
    domain = _as_domain(domain)
    if not 0 <= value < domain.size:
        raise AlgebraError(f"constant {value} outside domain of size {domain.size}")
    return Operation(domain, arity, (value,) * domain.size**arity)


def all_operations(domain, arity: int) -> Iterator[Operation]:
    """Every operation of the given arity, in lexicographic table order."""
    domain = _as_domain(domain)
    for table in itertools.product(range(domain.size), repeat=domain.size**arity):
        yield Operation(domain, arity, table)


def full_relation(domain, arity: int) -> Relation:
    domain = _as_domain(domain)
    return Relation(domain, arity, frozenset(domain.tuples(arity)))


def equality_relation(domain) -> Relation:
    domain = _as_domain(domain)
    return Relation(domain, 2, frozenset((a, a) for a in domain))


# ---------------------------------------------------------------------------
# text format

@dataclass
class Algebra:
    """A parsed algebra file: a domain with named operations and relations."""

    domain: Domain
    operations: dict[str, Operation] = field(default_factory=dict)
    relations: dict[str, Relation] = field(default_factory=dict)


_TUPLE_RE = re.compile(r"\(([^()]*)\)")
_NAME_RE = re.compile(r"^[A-Za-z_][\w.\-]*$")


def parse_algebra(text: str, max_table: int = DEFAULT_TABLE_CAP) -> Algebra:
    domain = None
    ops: dict[str, Operation] = {}
    rels: dict[str, Relation] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head = line.split()
        if head[0] == "domain":
            if domain is not None:
                raise ParseError("duplicate domain line", lineno)
            if len(head) != 2 or not head[1].isdigit() or int(head[1]) < 1:
                raise ParseError(f"expected 'domain <size>', got {line!r}", lineno)
            domain = Domain(int(head[1]))
            continue
        if head[0] not in ("op", "rel"):
            raise ParseError(f"unknown directive {head[0]!r}", lineno)
        if domain is None:
            raise ParseError("'domain' line must come first", lineno)
        if ":" not in line:
            raise ParseError("missing ':' separator", lineno)
        left, right = line.split(":", 1)
        parts = left.split()
        if len(parts) != 3:
            raise ParseError(f"expected '{head[0]} <name> <arity> :'", lineno)
        _, name, arity_s = parts
        if not _NAME_RE.match(name):
            raise ParseError(f"bad name {name!r}", lineno)
        if name in ops or name in rels:
            raise ParseError(f"duplicate name {name!r}", lineno)
        if not arity_s.isdigit() or int(arity_s) < 1:
            raise ParseError(f"arity must be a positive integer, got {arity_s!r}", lineno)
        arity = int(arity_s)
        if domain.size**arity > max_table:
            raise ParseError(
                f"{domain.size}^{arity} table entries exceeds the cap of {max_table}", lineno
            )
        if head[0] == "op":
            try:
                values = [int(v) for v in right.split()]
            except ValueError as exc:
                raise ParseError(f"non-integer table entry ({exc})", lineno) from None
            if len(values) != domain.size**arity:
                raise ParseError(
                    f"table length {len(values)} != {domain.size}^{arity} = {domain.size**arity}",
                    lineno,
                )
            try:
                ops[name] = Operation(domain, arity, tuple(values))
            except AlgebraError as exc:
                raise ParseError(str(exc), lineno) from None
        else:
            body = right.strip()
            tuples = []
            for m in _TUPLE_RE.finditer(body):
                inner = m.group(1).strip()
                try:
                    tuples.append(tuple(int(v) for v in inner.split(",") if v.strip() != ""))
                except ValueError:
                    raise ParseError(f"bad tuple ({inner})", lineno) from None
            if _TUPLE_RE.sub("", body).strip():
                raise ParseError(f"unparsable relation body {body!r}", lineno)
            try:
                rels[name] = Relation(domain, arity, frozenset(tuples))
            except AlgebraError as exc:
                raise ParseError(str(exc), lineno) from None
    if domain is None:
        raise ParseError("no 'domain' line")
    return Algebra(domain, ops, rels)


def format_operation(name: str, op: Operation) -> str:
    return f"op {name} {op.arity} : " + " ".join(map(str, op.table))


def format_relation(name: str, rel: Relation) -> str:
    body = " ".join("(" + ",".join(map(str, t)) + ")" for t in sorted(rel.tuples))
    return f"rel {name} {rel.arity} : {body}".rstrip()


def serialize_algebra(algebra: Algebra) -> str:
    lines = [f"domain {algebra.domain.size}"]
    lines += [format_operation(n, op) for n, op in algebra.operations.items()]
    lines += [format_relation(n, r) for n, r in algebra.relations.items()]
    return "\n".join(lines) + "\n"
