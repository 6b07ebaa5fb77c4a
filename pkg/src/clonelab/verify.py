"""Batch verification of the acceptance criteria (used by ``clonelab verify-all``)."""

from __future__ import annotations

import itertools
import random
import time
from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from . import universe as U
from .algebra import Domain, Operation, all_operations
from .clones import (
    DEFAULT_BUDGET,
    check_quasigroup,
    constants,
    find_quasigroup_ops,
    generate_clone,
    group_triple,
    is_latin_square,
    random_generators,
)
from .equality import (
    find_minimal_base,
    integral_domain_witness,
    verify_base_interpolation,
    poly_eval,
    verify_power_base,
    verify_project_base,
)
from .errors import CapExceeded, IncompleteSaturation
from .galois import all_unary_monoids, compactness_scan, family, lo_k_family, check_local_closure_routes

# reference values on 0..5
VALUE_TABLE = {
    "c3": "333333",
    "c2": "222222",
    "c1": "111111",
    "c0": "000000",
    "p": "010101",
    "id": "012345",
    "g3": "010345",
    "g4": "010145",
    "g5": "010105",
}


@dataclass
class VerifyConfig:
    seed: int = 0
    cap: Optional[int] = None
    budget: Optional[int] = None
    mutate: bool = False
    prefix: int = 1000


@dataclass
class CriterionResult:
    number: int
    name: str
    ok: bool
    seconds: float
    limit: float
    detail: str = ""
    cap_exceeded: bool = False

    @property
    def passed(self) -> bool:
        return self.ok and self.seconds < self.limit

    def line(self) -> str:
        status = "PASS" if self.passed else ("CAP" if self.cap_exceeded else "FAIL")
        text = f"[{status}] {self.number:2d} {self.name} ({self.seconds:.2f}s < {self.limit:g}s)"
        return text + (f": {self.detail}" if self.detail else "")


def values_on(f, xs: np.ndarray) -> np.ndarray:
    """Vectorised evaluation of a symbolic unary on a non-negative integer array."""
    if isinstance(f, U.Const):
        return np.full_like(xs, f.value)
    if isinstance(f, U.Identity):
        return xs.copy()
    if isinstance(f, U.Parity):
        return xs % 2
    return np.where(xs < f.threshold, xs % 2, xs)


def _mutated_compose(f, g):
    if isinstance(f, U.GStep) and isinstance(g, U.GStep):
        return U.g_step(min(f.threshold, g.threshold))
    return U.compose_symbolic(f, g)


# ---------------------------------------------------------------------------

def c1_value_table(cfg):
    for name, row in VALUE_TABLE.items():
        got = "".join(str(U.eval_symbolic(U.parse_symbolic(name), x)) for x in range(6))
        if got != row:
            return False, f"{name}: expected {row}, got {got}"
    return True, f"{len(VALUE_TABLE)} rows reproduced"


def c2_step_composition(cfg):
    compose = _mutated_compose if cfg.mutate else U.compose_symbolic
    xs = np.arange(cfg.prefix + 1)
    for a in range(3, 51):
        ga = U.GStep(a)
        for b in range(3, 51):
            gb = U.GStep(b)
            got = compose(ga, gb)
            pointwise = values_on(ga, values_on(gb, xs))
            bad = np.flatnonzero(values_on(got, xs) != pointwise)
            if len(bad):
                return False, f"g{a} o g{b} rewritten to {got} differs at x={int(bad[0])}"
            if got != U.GStep(max(a, b)):
                return False, f"g{a} o g{b} gave {got}"
    return True, f"48x48 pairs checked on x <= {cfg.prefix}"


def c3_parity_local(cfg):
    cert = U.loc_k_parity_certificate(64, 64, mode="max")
    if not cert:
        return False, f"max mode failed at {cert.failure}"
    runs = 0
    for bound in range(1, 17):
        for k in range(1, 4):
            ex = U.loc_k_parity_certificate(k, bound, mode="exhaustive")
            mx = U.loc_k_parity_certificate(k, bound, mode="max")
            runs += 1
            if ex.ok != mx.ok or not ex.ok:
                return False, f"modes disagree or fail at N={bound}, k={k}"
            for s in range(1, k + 1):
                for B in itertools.combinations(range(bound + 1), s):
                    if U.interpolate_parity(B) != U.interpolate_parity((max(B),)):
                        return False, f"interpolant for {B} depends on more than max(B)"
    return True, f"max mode N=64 ({cert.cases} cases); {runs} exhaustive runs agree"


def c4_separation(cfg):
    if U.membership_in_C(U.PARITY):
        return False, "parity reported as a member of C"
    ok, detail = c3_parity_local(cfg)
    if not ok:
        return False, detail
    rng = random.Random(cfg.seed + 4)
    candidates = [frozenset(s) for r in range(14) for s in itertools.combinations(range(13), r)]
    for _ in range(200):
        size = rng.randint(0, 65)
        candidates.append(frozenset(rng.sample(range(65), size)))
    for D in candidates:
        if not U.no_finite_base_witness(D).verify():
            return False, f"no separating pair for D={sorted(D)}"
    return True, f"{len(candidates)} finite sets shown not to be bases"


def c5_diagonal(cfg):
    trace = U.diagonalize(50)
    if not trace.complete:
        return False, f"halted: {trace.halted}"
    bad = trace.violations()
    if bad:
        return False, bad[0]
    if not trace.limit_is_parity_prefix():
        return False, "limit prefix differs from parity"
    return True, f"n_49 = {trace.n[-1]}, limit = p on 0..{trace.n[-1]}"


def _random_clone(rng, size, max_arity, cfg, constantive=False):
    dom = Domain(size)
    gens = random_generators(rng, dom)
    if constantive:
        gens = constants(dom) + gens
    budget = DEFAULT_BUDGET if cfg.budget is None else cfg.budget
    return generate_clone(gens, max_arity, budget=budget, domain=dom)


def c6_local_closure_routes(cfg):
    rng = random.Random(cfg.seed + 6)
    for i in range(100):
        m = rng.choice((1, 2))
        size = 2 if m == 2 else rng.choice((2, 3))
        k = rng.choice((1, 2))
        C = _random_clone(rng, size, m, cfg)
        report = check_local_closure_routes(C, m, k, cap=cfg.cap)
        if not report:
            return False, f"clone #{i} (size {size}, m={m}, k={k}): routes differ"
    return True, "100 random clones, both routes agree"


def c7_base_interpolation(cfg):
    rng = random.Random(cfg.seed + 7)
    for i in range(50):
        size = rng.choice((2, 3))
        C = _random_clone(rng, size, 1, cfg)
        D = find_minimal_base(C.family(1)).base
        report = verify_base_interpolation(C, 1, D, cap=cfg.cap)
        if not report:
            return False, f"clone #{i}: Lo_{report.k} adds {len(report.extra)} functions"
    return True, "50 random clones satisfy C^(1) = Lo_{|D|+1}(C^(1))"


def c8_constantive(cfg):
    rng = random.Random(cfg.seed + 8)
    for i in range(100):
        size = rng.choice((2, 3))
        C = _random_clone(rng, size, 2, cfg, constantive=True)
        D = find_minimal_base(C.family(1)).base
        power = verify_power_base(C, D, 2)
        if not (power.ok and power.hypothesis_met):
            return False, f"clone #{i}: D^2 is not a base for C^(2)"
        for D2 in (power.derived, find_minimal_base(C.family(2)).base):
            proj = verify_project_base(C, 2, D2)
            if not (proj.ok and proj.hypothesis_met):
                return False, f"clone #{i}: projection of a C^(2) base fails for C^(1)"
    return True, "100 random constantive clones"


def c9_quasigroup(cfg):
    for n in (3, 4, 5):
        res = check_quasigroup(*group_triple(n))
        if not res:
            return False, f"Z_{n} triple rejected at {res.identity}"
    for n in (2, 3, 4):
        d = Domain(n)
        dot = Operation.from_function(d, 2, min)
        ops = [
            Operation.from_function(d, 2, min),
            Operation.from_function(d, 2, max),
            Operation.from_function(d, 2, lambda x, y: x),
            Operation.from_function(d, 2, lambda x, y: y),
            *group_triple(n)[1:],
        ]
        for ldiv, rdiv in itertools.product(ops, repeat=2):
            if check_quasigroup(dot, ldiv, rdiv):
                return False, f"min-based triple accepted on size {n}"
    d2 = Domain(2)
    min2 = Operation.from_function(d2, 2, min)
    for ldiv, rdiv in itertools.product(list(all_operations(d2, 2)), repeat=2):
        if check_quasigroup(min2, ldiv, rdiv):
            return False, "min on {0,1} accepted"
    dot, ldiv, rdiv = group_triple(3)
    s = 3
    unary = list(itertools.product(range(s), repeat=s))
    checks = 0
    for r, t, f in itertools.product(unary, repeat=3):
        checks += 1
        premise = all(
            ldiv.table[r[x] * s + dot.table[t[x] * s + f[x]]] == f[x] for x in range(s)
        )
        if premise and r != t:
            return False, f"cancellation fails for r={r}, s={t}, f={f}"
    found = find_quasigroup_ops(generate_clone(group_triple(3), 2))
    if found is None or not is_latin_square(found[0]) or not check_quasigroup(*found):
        return False, "find_quasigroup_ops missed the Z_3 triple"
    return True, f"group triples accepted, min triples rejected, {checks} cancellation cases"


def c10_finite_local(cfg):
    monoids = all_unary_monoids(2)
    for F in monoids:
        rep = compactness_scan(F, cap=cfg.cap)
        if rep.n > 2:
            return False, f"compactness n = {rep.n} > 2 for {F.tables}"
    rng = random.Random(cfg.seed + 10)
    for i in range(100):
        size = rng.choice((1, 2, 3))
        ops = list(all_operations(Domain(size), 1))
        chosen = [op for op in ops if rng.random() < 0.5]
        F = family(chosen, domain=size, arity=1)
        if set(lo_k_family(F, size, cap=cfg.cap).members) != set(F.members):
            return False, f"Lo_{size}(F) != F for family #{i}"
    return True, f"{len(monoids)} unary clone parts on {{0,1}}; 100 random families"


def c11_integral_domain(cfg):
    count = 0
    for r in range(7):
        for D in itertools.combinations(range(-5, 11), r):
            w = integral_domain_witness(D)
            count += 1
            if any(poly_eval(w.coefficients, d) != 0 for d in D):
                return False, f"g does not vanish on {D}"
            y = max(D) + 1 if D else 1
            if w.y != y or w.value == 0 or poly_eval(w.coefficients, y) != w.value:
                return False, f"g({y}) = 0 for D={D}"
    return True, f"{count} sets D"


CRITERIA: list[tuple[int, str, Callable, float]] = [
    (1, "value table of c_a, p, id, g_a", c1_value_table, 1),
    (2, "g_a o g_b = g_max(a,b)", c2_step_composition, 5),
    (3, "parity lies in the local closure", c3_parity_local, 10),
    (4, "C differs from Pol Inv C; no finite base", c4_separation, 10),
    (5, "diagonal construction, 50 steps", c5_diagonal, 5),
    (6, "Lo_k(C^(m)) = (Loc_k C)^(m)", c6_local_closure_routes, 60),
    (7, "C^(1) = Lo_{|D|+1}(C^(1))", c7_base_interpolation, 60),
    (8, "projection and power bases", c8_constantive, 60),
    (9, "quasigroup checks and cancellation", c9_quasigroup, 10),
    (10, "finite clones are locally closed", c10_finite_local, 30),
    (11, "integral-domain polynomial witness", c11_integral_domain, 5),
]


def run_criterion(number: int, cfg: Optional[VerifyConfig] = None) -> CriterionResult:
    cfg = cfg or VerifyConfig()
    _, name, fn, limit = next(c for c in CRITERIA if c[0] == number)
    start = time.perf_counter()
    try:
        ok, detail = fn(cfg)
        capped = False
    except (CapExceeded, IncompleteSaturation) as exc:
        ok, detail, capped = False, f"cap exceeded: {exc}", True
    return CriterionResult(number, name, ok, time.perf_counter() - start, limit, detail, capped)


def verify_all(cfg: Optional[VerifyConfig] = None) -> list[CriterionResult]:
    cfg = cfg or VerifyConfig()
    return [run_criterion(n, cfg) for n, *_ in CRITERIA]
