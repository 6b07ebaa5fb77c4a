"""Bases of equality for families of operations."""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Optional, Sequence

import numpy as np

from .algebra import Domain, Operation
from .clones import CloneRepr, is_constantive
from .errors import AlgebraError, PreconditionError
from .galois import FunctionFamily, lo_k_family

DEFAULT_SEARCH_CAP = 2**20


@dataclass(frozen=True)
class BaseSet:
    domain: Domain
    arity: int
    points: frozenset = frozenset()

    def __post_init__(self):
        if not isinstance(self.domain, Domain):
            object.__setattr__(self, "domain", Domain(self.domain))
        pts = frozenset(tuple(int(x) for x in p) for p in self.points)
        for p in pts:
            if len(p) != self.arity or any(not 0 <= x < self.domain.size for x in p):
                raise AlgebraError(f"point {p} is not in A^{self.arity} for size {self.domain.size}")
        object.__setattr__(self, "points", pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(sorted(self.points))


@dataclass(frozen=True)
class SeparationCertificate:
    """A pair of distinct operations and a point where they differ.

    ``agree_on`` is set when the pair violates a proposed base: the two
    operations coincide on all of it although they differ at ``witness``.
    """

    f: Operation
    g: Operation
    witness: tuple[int, ...]
    agree_on: Optional[BaseSet] = None

    def verify(self) -> bool:
        if self.f(*self.witness) == self.g(*self.witness):
            return False
        if self.agree_on is not None:
            return all(self.f(*p) == self.g(*p) for p in self.agree_on.points)
        return True


@dataclass(frozen=True)
class BaseCheck:
    ok: bool
    certificate: Optional[SeparationCertificate] = None

    def __bool__(self):
        return self.ok


def _first_difference(f: Operation, g: Operation) -> tuple[int, ...]:
    index = f.index
    for i, (a, b) in enumerate(zip(f.table, g.table)):
        if a != b:
            return index.decode(i)
    raise AlgebraError("operations are equal")


def is_base_of_equality(D: BaseSet, F: FunctionFamily) -> BaseCheck:
    """D is a base of equality for F iff restriction to D is injective on F."""
    if D.arity != F.arity:
        raise AlgebraError(f"base has arity {D.arity}, family has arity {F.arity}")
    if D.domain != F.domain:
        raise AlgebraError("base and family live on different domains")
    pts = sorted(D.points)
    seen: dict[tuple, Operation] = {}
    for g in F.members:
        key = g.restrict(pts)
        f = seen.get(key)
        if f is not None:
            return BaseCheck(False, SeparationCertificate(f, g, _first_difference(f, g), D))
        seen[key] = g
    return BaseCheck(True)


def separation_certificates(D: BaseSet, F: FunctionFamily) -> list[SeparationCertificate]:
    """For a base D, one separating point of D per pair of distinct members."""
    pts = sorted(D.points)
    out = []
    for f, g in itertools.combinations(F.members, 2):
        for p in pts:
            if f(*p) != g(*p):
                out.append(SeparationCertificate(f, g, p))
                break
        else:
            raise AlgebraError("D is not a base of equality for F")
    return out


@dataclass(frozen=True)
class BaseSearch:
    base: Optional[BaseSet]
    minimal: bool
    examined: int = 0

    def __bool__(self):
        return self.base is not None


def _distinct_rows(tbl: np.ndarray, cols: Sequence[int], size: int) -> int:
    if not cols:
        return 1 if len(tbl) else 0
    sub = tbl[:, list(cols)]
    if size ** len(cols) < 2**62:
        weights = size ** np.arange(len(cols) - 1, -1, -1, dtype=np.int64)
        return len(np.unique(sub @ weights))
    return len({row.tobytes() for row in sub})


def find_minimal_base(
    F: FunctionFamily,
    size_cap: Optional[int] = None,
    search_cap: int = DEFAULT_SEARCH_CAP,
) -> BaseSearch:
    """Smallest D (at most ``size_cap`` points) on which F's members all differ.

    Candidates of each size are tried in lexicographic order of encoded points,
    so the first hit is deterministic. Once more than ``search_cap`` candidates
    would be needed, a greedy base is returned with ``minimal=False``.
    """
    dom, m = F.domain, F.arity
    index = F.members[0].index if F.members else None
    n_points = dom.size**m
    size_cap = n_points if size_cap is None else min(size_cap, n_points)
    count = len(F.members)
    if count <= 1:
        return BaseSearch(BaseSet(dom, m), True)
    tbl = np.array([op.table for op in F.members], dtype=np.int64)
    examined = 0
    for s in range(1, size_cap + 1):
        if examined + math.comb(n_points, s) > search_cap:
            return _greedy_base(F, tbl, size_cap, examined)
        for cols in itertools.combinations(range(n_points), s):
            examined += 1
            if _distinct_rows(tbl, cols, dom.size) == count:
                return BaseSearch(BaseSet(dom, m, frozenset(index.decode(i) for i in cols)), True, examined)
    return BaseSearch(None, True, examined)


def _greedy_base(F, tbl, size_cap, examined) -> BaseSearch:
    dom, m = F.domain, F.arity
    index = F.members[0].index
    n_points = dom.size**m
    chosen: list[int] = []
    classes = 1
    while classes < len(F.members) and len(chosen) < size_cap:
        best, best_classes = None, classes
        for i in range(n_points):
            if i in chosen:
                continue
            c = _distinct_rows(tbl, chosen + [i], dom.size)
            examined += 1
            if c > best_classes:
                best, best_classes = i, c
        if best is None:
            break
        chosen.append(best)
        classes = best_classes
    if classes < len(F.members):
        return BaseSearch(None, False, examined)
    return BaseSearch(BaseSet(dom, m, frozenset(index.decode(i) for i in chosen)), False, examined)


# ---------------------------------------------------------------------------
# verifiers for base constructions

@dataclass(frozen=True)
class BaseInterpolationReport:
    equal: bool
    k: int
    family_size: int
    closure_size: int
    extra: tuple[Operation, ...] = ()

    def __bool__(self):
        return self.equal


def verify_base_interpolation(C: CloneRepr, n: int, D: BaseSet, cap=None) -> BaseInterpolationReport:
    """With D a base for C^(n) and k = |D| + 1, check C^(n) = Lo_k(C^(n))."""
    F = C.family(n)
    check = is_base_of_equality(D, F)
    if not check:
        raise PreconditionError(f"D is not a base of equality for C^({n}): {check.certificate}")
    k = len(D) + 1
    closure = lo_k_family(F, k, cap=cap)
    extra = tuple(op for op in closure.members if op not in F)
    return BaseInterpolationReport(not extra and len(closure) == len(F), k, len(F), len(closure), extra)


def project_base(D: BaseSet) -> BaseSet:
    """First-coordinate projection of D, as a set of 1-tuples."""
    if D.arity < 1:
        raise AlgebraError("projection needs arity >= 1")
    return BaseSet(D.domain, 1, frozenset((p[0],) for p in D.points))


def power_base(D: BaseSet, n: int) -> BaseSet:
    if D.arity != 1:
        raise AlgebraError(f"power_base expects a unary base, got arity {D.arity}")
    if n < 1:
        raise AlgebraError("n must be at least 1")
    values = sorted(p[0] for p in D.points)
    return BaseSet(D.domain, n, frozenset(itertools.product(values, repeat=n)))


@dataclass(frozen=True)
class BaseTransferCheck:
    ok: bool
    hypothesis_met: bool
    derived: BaseSet
    certificate: Optional[SeparationCertificate] = None

    def __bool__(self):
        return self.ok


def verify_project_base(C: CloneRepr, m: int, D: BaseSet) -> BaseTransferCheck:
    """If D is a base for C^(m), its first projection should be one for C^(1)."""
    if D.arity != m:
        raise AlgebraError(f"expected a base of arity {m}")
    hyp = bool(is_base_of_equality(D, C.family(m)))
    derived = project_base(D)
    check = is_base_of_equality(derived, C.family(1))
    return BaseTransferCheck(check.ok or not hyp, hyp, derived, check.certificate)


def verify_power_base(C: CloneRepr, D: BaseSet, n: int, strict: bool = True) -> BaseTransferCheck:
    """For constantive C and a unary base D, check D^n is a base for C^(n).

    The claim needs C constantive; with ``strict`` an unmet hypothesis raises,
    otherwise the check still runs and reports ``hypothesis_met=False``.
    """
    constantive = is_constantive(C)
    if strict and not constantive:
        raise PreconditionError("D^n is only claimed to be a base for constantive clones")
    unary_base = bool(is_base_of_equality(D, C.family(1)))
    if strict and not unary_base:
        raise PreconditionError("D is not a base of equality for C^(1)")
    derived = power_base(D, n)
    check = is_base_of_equality(derived, C.family(n))
    hyp = constantive and unary_base
    return BaseTransferCheck(check.ok or not hyp, hyp, derived, check.certificate)


# ---------------------------------------------------------------------------
# integral domains

@dataclass(frozen=True)
class PolynomialWitness:
    """g = prod (x - d) over D, a point y outside D and g(y) != 0.

    ``coefficients`` are in ascending degree.
    """

    coefficients: tuple[int, ...]
    y: int
    value: int

    def __call__(self, x: int) -> int:
        return poly_eval(self.coefficients, x)


def poly_eval(coefficients: Sequence[int], x: int) -> int:
    acc = 0
    for c in reversed(coefficients):
        acc = acc * x + c
    return acc


def integral_domain_witness(D: Iterable[int]) -> PolynomialWitness:
    """Zero and prod_{d in D}(x - d) agree on D but not at max(D) + 1."""
    coeffs = [1]
    for d in sorted(set(D)):
        # multiply by (x - d)
        shifted = [0] + coeffs
        scaled = [-d * c for c in coeffs] + [0]
        coeffs = [a + b for a, b in zip(shifted, scaled)]
    pts = set(D)
    y = max(pts) + 1 if pts else 1
    return PolynomialWitness(tuple(coeffs), y, poly_eval(coeffs, y))
