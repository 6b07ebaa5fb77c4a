"""The countable counterexample clone on the natural numbers, symbolically.

Its unary part is generated by the constants c_a and the step functions

    g_a(x) = x mod 2   for x < a
    g_a(x) = x         for x >= a

and its local closure adds exactly the parity function p(x) = x mod 2.
Since g_0 = g_1 = g_2 = id, step functions are only stored for a >= 3, which
makes symbolic equality coincide with equality of functions.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Optional, Sequence, Union

import numpy as np

from .errors import AlgebraError, DiagonalizationError


@dataclass(frozen=True)
class Const:
    value: int

    def __post_init__(self):
        if self.value < 0:
            raise AlgebraError("constants live in N_0")

    def __call__(self, x: int) -> int:
        return self.value

    def __str__(self):
        return f"c{self.value}"


@dataclass(frozen=True)
class GStep:
    threshold: int

    def __post_init__(self):
        if self.threshold < 3:
            raise AlgebraError("GStep(a) needs a >= 3; use g_step() to normalise small a")

    def __call__(self, x: int) -> int:
        return x % 2 if x < self.threshold else x

    def __str__(self):
        return f"g{self.threshold}"


@dataclass(frozen=True)
class Identity:
    def __call__(self, x: int) -> int:
        return x

    def __str__(self):
        return "id"


@dataclass(frozen=True)
class Parity:
    def __call__(self, x: int) -> int:
        return x % 2

    def __str__(self):
        return "p"


SymbolicUnary = Union[Const, GStep, Identity, Parity]

ID = Identity()
PARITY = Parity()


def g_step(a: int) -> SymbolicUnary:
    if a < 0:
        raise AlgebraError("step thresholds live in N_0")
    return ID if a <= 2 else GStep(a)


def parse_symbolic(text: str) -> SymbolicUnary:
    """Read ``c5``, ``g7``, ``id`` or ``p``."""
    t = text.strip().lower()
    if t in ("id", "identity"):
        return ID
    if t in ("p", "parity"):
        return PARITY
    if t[:1] in ("c", "g") and t[1:].isdigit():
        a = int(t[1:])
        return Const(a) if t[0] == "c" else g_step(a)
    raise AlgebraError(f"cannot read symbolic function {text!r}")


def eval_symbolic(f: SymbolicUnary, x: int) -> int:
    if x < 0:
        raise AlgebraError("arguments live in N_0")
    return f(x)


def compose_symbolic(f: SymbolicUnary, g: SymbolicUnary) -> SymbolicUnary:
    """Closed form of f after g, i.e. x -> f(g(x))."""
    if isinstance(f, Const):
        return f
    if isinstance(g, Const):
        return Const(f(g.value))
    if isinstance(f, Identity):
        return g
    if isinstance(g, Identity):
        return f
    if isinstance(f, GStep) and isinstance(g, GStep):
        return g_step(max(f.threshold, g.threshold))
    # remaining cases involve parity: p o g_a, g_a o p and p o p all equal p,
    # since p only takes the values 0 and 1, which every g_a fixes
    return PARITY


def lower_bound_disagreement(f: SymbolicUnary, g: SymbolicUnary) -> int:
    """A bound B such that distinct f, g differ somewhere in 0..B."""
    params = [h.value if isinstance(h, Const) else h.threshold if isinstance(h, GStep) else 0 for h in (f, g)]
    return max(params) + 3


def first_disagreement(f: SymbolicUnary, g: SymbolicUnary) -> Optional[int]:
    if f == g:
        return None
    for x in range(lower_bound_disagreement(f, g) + 1):
        if f(x) != g(x):
            return x
    raise AssertionError(f"{f} and {g} are distinct but agree on the scanned prefix")


def agree_on(f, g, points: Iterable[int]) -> bool:
    return all(f(x) == g(x) for x in points)


@dataclass(frozen=True)
class SymbolicOp:
    """The n-ary function (x_1, ..., x_n) -> core(x_j); ``coordinate`` is 1-based."""

    arity: int
    coordinate: int
    core: SymbolicUnary

    def __post_init__(self):
        if self.arity < 1 or not 1 <= self.coordinate <= self.arity:
            raise AlgebraError(f"coordinate {self.coordinate} outside 1..{self.arity}")

    def __call__(self, *xs: int) -> int:
        if len(xs) != self.arity:
            raise AlgebraError(f"expected {self.arity} arguments, got {len(xs)}")
        return self.core(xs[self.coordinate - 1])

    def __str__(self):
        return f"{self.core}(x{self.coordinate}/{self.arity})"


@dataclass(frozen=True)
class TableOp:
    """A finitely supported n-ary function given by a Python callable.

    Only meant for negative tests against the symbolic family.
    """

    arity: int
    fn: Callable[..., int] = field(compare=False)
    name: str = "table"

    def __call__(self, *xs):
        return self.fn(*xs)

    def __str__(self):
        return self.name


def membership_in_C(f) -> bool:
    core = f.core if isinstance(f, SymbolicOp) else f
    if isinstance(core, (Const, GStep, Identity)):
        return True
    if isinstance(core, Parity):
        return False
    raise AlgebraError(f"not a symbolic member candidate: {f!r}")


# ---------------------------------------------------------------------------
# local closure: parity is interpolated by step functions

def interpolate_parity(B: Iterable[int]) -> SymbolicUnary:
    """A member of C agreeing with parity on the finite set B.

    Only max(B) matters: g_{max(B)+1} agrees with parity below its threshold.
    The empty set gets the identity by convention.
    """
    B = list(B)
    if not B:
        return ID
    return GStep(max(max(B) + 1, 3))


@dataclass(frozen=True)
class ParityCertificate:
    k: int
    bound: int
    mode: str
    cases: int
    ok: bool
    failure: Optional[tuple[int, ...]] = None

    def __bool__(self):
        return self.ok


def loc_k_parity_certificate(k: int, bound: int = 32, mode: str = "exhaustive") -> ParityCertificate:
    """Check that parity is interpolable by C on every <=k-subset of 0..bound.

    ``exhaustive`` tries every such subset. ``max`` uses that the interpolant
    depends only on max(B): for each possible maximum a it checks agreement on
    all of 0..a, which covers every B with that maximum, whatever its size.
    """
    if k < 1:
        raise AlgebraError("k must be at least 1")
    if mode == "exhaustive":
        cases = 0
        for s in range(1, min(k, bound + 1) + 1):
            for B in itertools.combinations(range(bound + 1), s):
                cases += 1
                if not agree_on(interpolate_parity(B), PARITY, B):
                    return ParityCertificate(k, bound, mode, cases, False, B)
        return ParityCertificate(k, bound, mode, cases, True)
    if mode == "max":
        for a in range(bound + 1):
            prefix = range(a + 1)
            h = interpolate_parity((a,))
            # the interpolant for any B with max a is the one for {a}
            if not agree_on(h, PARITY, prefix):
                return ParityCertificate(k, bound, mode, a + 1, False, (a,))
        return ParityCertificate(k, bound, mode, bound + 1, True)
    raise AlgebraError(f"unknown mode {mode!r}")


@dataclass(frozen=True)
class SymbolicSeparation:
    """Two members of C that agree on D but differ at ``witness``."""

    f: SymbolicUnary
    g: SymbolicUnary
    witness: int
    D: frozenset

    def verify(self) -> bool:
        return (
            membership_in_C(self.f)
            and membership_in_C(self.g)
            and agree_on(self.f, self.g, self.D)
            and self.f(self.witness) != self.g(self.witness)
        )


def no_finite_base_witness(D: Iterable[int]) -> SymbolicSeparation:
    """Show the finite set D is not a base of equality for C^(1).

    With a = max(max(D) + 2, 3) (a = 3 for empty D), g_a and g_{a+1} both
    agree with parity on D and differ at a, where one returns a and the
    other a mod 2.
    """
    D = frozenset(D)
    a = max(max(D) + 2, 3) if D else 3
    cert = SymbolicSeparation(GStep(a), GStep(a + 1), a, D)
    if not cert.verify():
        raise AssertionError(f"separation certificate failed for D={sorted(D)}")
    return cert


@dataclass(frozen=True)
class RhoCheck:
    ok: bool
    arguments: Optional[tuple[tuple[int, ...], ...]] = None
    image: Optional[tuple[int, ...]] = None

    def __bool__(self):
        return self.ok


def rho_tuples(bound: int) -> np.ndarray:
    """All (a, b, c, d) over 0..bound with a = b or c = d."""
    r = np.arange(bound + 1)
    grid = np.stack(np.meshgrid(r, r, r, r, indexing="ij"), axis=-1).reshape(-1, 4)
    keep = (grid[:, 0] == grid[:, 1]) | (grid[:, 2] == grid[:, 3])
    return grid[keep]


def in_rho(t: Sequence[int]) -> bool:
    return t[0] == t[1] or t[2] == t[3]


def rho_preserves(f, bound: int) -> RhoCheck:
    """Brute-force check that f preserves rho on arguments from 0..bound.

    ``f`` is a SymbolicOp, a bare symbolic unary, or any callable with an
    ``arity`` attribute. For a SymbolicOp of arity above 2 only the selected
    coordinate influences the image, so its core is checked instead, which is
    exact.
    """
    if bound < 1:
        raise AlgebraError("bound must be at least 1")
    if not hasattr(f, "arity"):
        f = SymbolicOp(1, 1, f)
    n = f.arity
    if isinstance(f, SymbolicOp) and n > 2:
        core = rho_preserves(SymbolicOp(1, 1, f.core), bound)
        if core.ok:
            return core
        args = (core.arguments[0],) * n
        return RhoCheck(False, args, core.image)
    if n > 2:
        raise AlgebraError("brute-force rho check supports arity <= 2")
    R = rho_tuples(bound)
    vals = np.arange(bound + 1)
    if n == 1:
        table = np.array([f(int(x)) for x in vals], dtype=object)
        image = table[R]
        bad = ~((image[:, 0] == image[:, 1]) | (image[:, 2] == image[:, 3]))
        if bad.any():
            i = int(np.flatnonzero(bad)[0])
            return RhoCheck(False, (tuple(int(v) for v in R[i]),), tuple(image[i]))
        return RhoCheck(True)
    table = np.array([[f(int(x), int(y)) for y in vals] for x in vals], dtype=np.int64)
    for i, t in enumerate(R):
        image = table[t[None, :], R]  # shape (len(R), 4)
        bad = ~((image[:, 0] == image[:, 1]) | (image[:, 2] == image[:, 3]))
        if bad.any():
            j = int(np.flatnonzero(bad)[0])
            return RhoCheck(
                False,
                (tuple(int(v) for v in t), tuple(int(v) for v in R[j])),
                tuple(int(v) for v in image[j]),
            )
    return RhoCheck(True)


# ---------------------------------------------------------------------------
# the diagonal construction

DEFAULT_PARITY_INDEX = 1000


def default_enumeration(parity_index: int = DEFAULT_PARITY_INDEX) -> Iterator[SymbolicUnary]:
    """A repetition-free listing of M together with parity.

    Odd positions list the odd step functions g_3, g_5, g_7, ...; even
    positions sweep through c_0, id, c_1, g_4, c_2, g_6, ... Parity is
    inserted at position ``parity_index``.
    """

    def sweep():
        yield Const(0)
        yield ID
        for j in itertools.count(1):
            yield Const(j)
            yield GStep(2 * j + 2)

    def probes():
        for b in itertools.count(3, 2):
            yield GStep(b)

    s, p = sweep(), probes()
    pos = 0
    for i in itertools.count():
        if pos == parity_index:
            yield PARITY
            pos += 1
        yield next(s) if i % 2 == 0 else next(p)
        pos += 1


def agreement_length(f: SymbolicUnary) -> int:
    """L with f = p on 0..L-1 but not at L; -1 stands for parity itself."""
    if isinstance(f, Parity):
        return -1
    if isinstance(f, GStep):
        return f.threshold
    if isinstance(f, Identity):
        return 2
    return 0 if f.value != 0 else 1


def initial_choice(f0: SymbolicUnary) -> SymbolicUnary:
    """First member of C, in the order id, c_0, c_1, different from f0."""
    for cand in (ID, Const(0), Const(1)):
        if cand != f0:
            return cand
    raise AssertionError("unreachable")


def doubling_alternative(g: SymbolicUnary, n: int, f: SymbolicUnary) -> Optional[SymbolicUnary]:
    """A member h of C with h = g on 0..n and h != f, or None.

    Prefers a step function whose threshold is twice the larger of n + 1 and
    the point where f leaves parity, so the new prefix keeps agreeing with
    parity for a while; falls back to g itself.
    """
    reach = agreement_length(f)
    c = 2 * max(n + 1, reach if reach >= 0 else n + 1, 2)
    prefix = range(n + 1)
    for h in (GStep(c), GStep(c + 1), g, ID, Const(g(0))):
        if h != f and agree_on(h, g, prefix):
            return h
    return None


@dataclass(frozen=True)
class DiagonalStep:
    k: int
    n: int
    g: SymbolicUnary
    f: SymbolicUnary
    branch: str

    def line(self) -> str:
        return f"{self.k} {self.n} {self.g} {self.branch}"


@dataclass(frozen=True)
class DiagonalizationTrace:
    steps: tuple[DiagonalStep, ...]
    requested: int
    halted: Optional[str] = None

    @property
    def complete(self) -> bool:
        return self.halted is None and len(self.steps) == self.requested

    @property
    def n(self) -> list[int]:
        return [s.n for s in self.steps]

    @property
    def g(self) -> list[SymbolicUnary]:
        return [s.g for s in self.steps]

    def limit_prefix(self) -> tuple[int, ...]:
        """The limit function on 0..n_last; later g's never change it there."""
        if not self.steps:
            return ()
        last = self.steps[-1]
        return tuple(last.g(x) for x in range(last.n + 1))

    def limit_is_parity_prefix(self) -> bool:
        pre = self.limit_prefix()
        return bool(pre) and all(v == x % 2 for x, v in enumerate(pre))

    def violations(self) -> list[str]:
        out = []
        for s in self.steps:
            if agree_on(s.g, s.f, range(s.n + 1)):
                out.append(f"step {s.k}: g_k equals f_k on 0..{s.n}")
            if not membership_in_C(s.g):
                out.append(f"step {s.k}: g_k = {s.g} is not in C")
        for a, b in zip(self.steps, self.steps[1:]):
            if b.n <= a.n:
                out.append(f"step {b.k}: n_k did not increase ({a.n} -> {b.n})")
            if not agree_on(a.g, b.g, range(a.n + 1)):
                out.append(f"step {b.k}: g_k changed on 0..{a.n}")
        return out


def diagonalize(
    steps: int,
    enumeration: Optional[Iterable[SymbolicUnary]] = None,
    parity_index: int = DEFAULT_PARITY_INDEX,
    alternative=doubling_alternative,
) -> DiagonalizationTrace:
    """Run the diagonal construction against C for ``steps`` steps.

    Builds n_0 < n_1 < ... and members g_k of C with g_k != f_k on 0..n_k and
    g_{k+1} = g_k on 0..n_k. When f_{k+1} already differs from g_k on 0..n_k
    the previous g is kept and n grows by one; otherwise ``alternative``
    supplies h agreeing with g_k there. If no such h exists the trace records
    where the construction halted.
    """
    if steps < 1:
        raise AlgebraError("steps must be at least 1")
    fs = iter(default_enumeration(parity_index) if enumeration is None else enumeration)
    trace: list[DiagonalStep] = []

    def next_f(k):
        try:
            return next(fs)
        except StopIteration:
            raise DiagonalizationError(f"enumeration ended before index {k}") from None

    f0 = next_f(0)
    g = initial_choice(f0)
    n = first_disagreement(g, f0)
    trace.append(DiagonalStep(0, n, g, f0, "init"))
    halted = None
    for k in range(1, steps):
        f = next_f(k)
        if not agree_on(g, f, range(n + 1)):
            n += 1
            trace.append(DiagonalStep(k, n, g, f, "keep"))
            continue
        h = alternative(g, n, f)
        if h is None:
            halted = f"step {k}: every member of C agreeing with {g} on 0..{n} equals f_{k} = {f}"
            break
        if h == f or not membership_in_C(h) or not agree_on(h, g, range(n + 1)):
            raise DiagonalizationError(f"step {k}: alternative {h} breaks the construction")
        g, n = h, first_disagreement(h, f)
        trace.append(DiagonalStep(k, n, g, f, "alternative"))
    result = DiagonalizationTrace(tuple(trace), steps, halted)
    bad = result.violations()
    if bad:
        raise DiagonalizationError("; ".join(bad))
    return result
