"""Command-line front end.

Every command prints line-oriented ``key: value`` records, starting with the
seed; ``--json`` prints the same records as one JSON object.

Exit codes: 0 success or true result, 1 property violation (certificate
printed), 2 usage or parse error, 3 cap or budget exhaustion.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
from pathlib import Path
from typing import Optional, Sequence

from . import universe as U
from .algebra import Algebra, Domain, Operation, parse_algebra
from .clones import DEFAULT_BUDGET, check_quasigroup, find_quasigroup_ops, generate_clone, is_latin_square
from .equality import (
    BaseSet,
    find_minimal_base,
    integral_domain_witness,
    is_base_of_equality,
)
from .errors import AlgebraError, CapExceeded, CloneLabError, IncompleteSaturation, PreconditionError
from .galois import FunctionFamily, RelationFamily, family, inv, lo_k_family, check_local_closure_routes, pol
from .verify import CRITERIA, VerifyConfig, run_criterion

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(CloneLabError):
    pass


class Records:
    """Ordered key/value output; keys are unique."""

    def __init__(self, seed: int):
        self.items: list[tuple[str, object]] = [("seed", seed)]

    def add(self, key: str, value) -> None:
        self.items.append((key, value))

    def render(self, as_json: bool) -> str:
        if as_json:
            return json.dumps(dict(self.items), sort_keys=False)
        return "\n".join(f"{k}: {_text(v)}" for k, v in self.items)


def _text(v) -> str:
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, (list, tuple)):
        return " ".join(map(str, v))
    return str(v)


def _tuple_str(t) -> str:
    return "(" + ",".join(map(str, t)) + ")"


def _tuples_str(ts) -> str:
    return "{" + ", ".join(_tuple_str(t) for t in ts) + "}"


def _table(op: Operation) -> str:
    return " ".join(map(str, op.table))


# ---------------------------------------------------------------------------
# input helpers

def _load(path: Optional[str]) -> Algebra:
    if not path:
        raise UsageError("--algebra PATH is required")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None
    return parse_algebra(text)


def _ops_family(alg: Algebra, arity: int, args) -> FunctionFamily:
    """The file's operations of the given arity, or the clone they generate."""
    if args.clone:
        C = generate_clone(list(alg.operations.values()), arity, budget=args.budget, domain=alg.domain)
        return C.family(arity)
    ops = [op for op in alg.operations.values() if op.arity == arity]
    return family(ops, domain=alg.domain, arity=arity)


def _parse_points(text: str, size: int, arity: int) -> frozenset:
    import re

    pts = []
    for body in re.findall(r"\(([^()]*)\)", text):
        pts.append(tuple(int(x) for x in body.split(",") if x.strip()))
    if not pts and text.strip() not in ("", "{}"):
        raise UsageError(f"cannot read points from {text!r}")
    return BaseSet(Domain(size), arity, frozenset(pts)).points


# ---------------------------------------------------------------------------
# finite-domain commands

def cmd_pol(args, out: Records) -> int:
    alg = _load(args.algebra)
    R = RelationFamily(alg.domain, tuple(alg.relations.values()))
    F = pol(R, args.arity, cap=args.cap, domain=alg.domain)
    out.add("arity", args.arity)
    out.add("relations", len(R.members))
    out.add("count", len(F))
    for i, op in enumerate(F.members):
        out.add(f"op[{i}]", _table(op))
    return EXIT_OK


def cmd_inv(args, out: Records) -> int:
    alg = _load(args.algebra)
    rels = inv(list(alg.operations.values()), args.k, cap=args.cap, domain=alg.domain)
    out.add("k", args.k)
    out.add("operations", len(alg.operations))
    out.add("count", len(rels.members))
    for i, rel in enumerate(rels.members):
        out.add(f"rel[{i}]", _tuples_str(sorted(rel.tuples)))
    return EXIT_OK


def cmd_loc(args, out: Records) -> int:
    alg = _load(args.algebra)
    F = _ops_family(alg, args.arity, args)
    G = lo_k_family(F, args.k, cap=args.cap, sampled=args.sampled, rng=random.Random(args.seed))
    out.add("arity", args.arity)
    out.add("k", args.k)
    out.add("family", len(F))
    out.add("count", len(G))
    out.add("sampled", G.sampled)
    out.add("closed", set(G.members) == set(F.members))
    for i, op in enumerate(G.members):
        out.add(f"op[{i}]", _table(op))
    return EXIT_OK


def cmd_clone_gen(args, out: Records) -> int:
    alg = _load(args.algebra)
    C = generate_clone(list(alg.operations.values()), args.arity, budget=args.budget, domain=alg.domain)
    for n in range(1, args.arity + 1):
        out.add(f"arity[{n}]", f"{len(C.members_by_arity[n])} complete={_text(C.complete[n])}")
    if not C.complete[args.arity]:
        out.add("error", f"budget {args.budget} exhausted at arity {args.arity}")
        code = EXIT_CAP
    else:
        code = EXIT_OK
    for i, op in enumerate(C.members_by_arity[args.arity]):
        out.add(f"op[{i}]", _table(op))
    return code


def cmd_base(args, out: Records) -> int:
    alg = _load(args.algebra)
    F = _ops_family(alg, args.arity, args)
    out.add("family", len(F))
    if args.action == "find":
        res = find_minimal_base(F, size_cap=args.size_cap)
        if res.base is None:
            out.add("base", "none within cap")
            return EXIT_CAP
        out.add("D", _tuples_str(res.base))
        out.add("size", len(res.base))
        out.add("minimal", res.minimal)
        return EXIT_OK
    D = BaseSet(alg.domain, args.arity, _parse_points(args.points or "", alg.domain.size, args.arity))
    check = is_base_of_equality(D, F)
    out.add("D", _tuples_str(D))
    out.add("base", check.ok)
    if not check.ok:
        cert = check.certificate
        out.add("f", _table(cert.f))
        out.add("g", _table(cert.g))
        out.add("witness", _tuple_str(cert.witness))
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_quasigroup(args, out: Records) -> int:
    alg = _load(args.algebra)
    if args.find:
        C = generate_clone(list(alg.operations.values()), 2, budget=args.budget, domain=alg.domain)
        triple = find_quasigroup_ops(C)
        if triple is None:
            out.add("found", False)
            return EXIT_VIOLATION
        out.add("found", True)
    else:
        if args.ops:
            names = args.ops.split(",")
            missing = [n for n in names if n not in alg.operations]
            if len(names) != 3 or missing:
                raise UsageError("--ops needs three operation names from the file")
            triple = tuple(alg.operations[n] for n in names)
        else:
            binary = [op for op in alg.operations.values() if op.arity == 2]
            if len(binary) < 3:
                raise UsageError("need three binary operations (or --find)")
            triple = tuple(binary[:3])
    for key, op in zip(("dot", "ldiv", "rdiv"), triple):
        out.add(key, _table(op))
    res = check_quasigroup(*triple)
    out.add("quasigroup", res.ok)
    out.add("latin", is_latin_square(triple[0]))
    if not res:
        out.add("identity", res.identity)
        out.add("witness", _tuple_str((res.x, res.y)))
        return EXIT_VIOLATION
    return EXIT_OK


def cmd_galois_check(args, out: Records) -> int:
    alg = _load(args.algebra)
    C = generate_clone(list(alg.operations.values()), args.arity, budget=args.budget, domain=alg.domain)
    report = check_local_closure_routes(C, args.arity, args.k, cap=args.cap)
    out.add("arity", args.arity)
    out.add("k", args.k)
    out.add("interpolation", report.interpolation_count)
    out.add("preservation", report.preservation_count)
    out.add("equal", report.equal)
    for i, op in enumerate(report.only_interpolation):
        out.add(f"only_interpolation[{i}]", _table(op))
    for i, op in enumerate(report.only_preservation):
        out.add(f"only_preservation[{i}]", _table(op))
    return EXIT_OK if report else EXIT_VIOLATION


def cmd_integral_domain(args, out: Records) -> int:
    w = integral_domain_witness(args.values)
    out.add("D", "{" + ", ".join(map(str, sorted(set(args.values)))) + "}")
    out.add("coefficients", list(w.coefficients))
    out.add("y", w.y)
    out.add("g(y)", w.value)
    return EXIT_OK if w.value != 0 else EXIT_VIOLATION


# ---------------------------------------------------------------------------
# symbolic commands on the natural numbers

def _sym(text: str):
    return U.parse_symbolic(text)


def cmd_universe(args, out: Records) -> int:
    action = args.action
    if action == "eval":
        f = _sym(args.f)
        for x in args.x:
            out.add(f"{f}({x})", U.eval_symbolic(f, x))
        return EXIT_OK
    if action == "compose":
        f, g = _sym(args.f), _sym(args.g)
        h = U.compose_symbolic(f, g)
        out.add("composite", h)
        bad = [x for x in range(args.prefix + 1) if h(x) != f(g(x))]
        out.add("pointwise", not bad)
        if bad:
            out.add("witness", bad[0])
            return EXIT_VIOLATION
        return EXIT_OK
    if action == "member":
        f = _sym(args.f)
        ok = U.membership_in_C(f)
        out.add("member", ok)
        return EXIT_OK if ok else EXIT_VIOLATION
    if action == "interpolate":
        h = U.interpolate_parity(args.points)
        out.add("interpolant", h)
        out.add("agrees", U.agree_on(h, U.PARITY, args.points))
        return EXIT_OK
    if action == "parity-local":
        cert = U.loc_k_parity_certificate(args.k, args.prefix, mode=args.mode)
        out.add("k", args.k)
        out.add("bound", args.prefix)
        out.add("mode", args.mode)
        out.add("cases", cert.cases)
        out.add("ok", cert.ok)
        if not cert:
            out.add("failure", _tuple_str(cert.failure))
            return EXIT_VIOLATION
        return EXIT_OK
    if action == "no-base":
        sep = U.no_finite_base_witness(args.points)
        out.add("D", "{" + ", ".join(map(str, sorted(sep.D))) + "}")
        out.add("f", sep.f)
        out.add("g", sep.g)
        out.add("witness", sep.witness)
        out.add("verified", sep.verify())
        return EXIT_OK
    if action == "rho":
        f = U.SymbolicOp(args.arity, args.coordinate, _sym(args.f))
        res = U.rho_preserves(f, args.prefix)
        out.add("function", f)
        out.add("preserves", res.ok)
        if not res:
            out.add("arguments", " ".join(_tuple_str(t) for t in res.arguments))
            out.add("image", _tuple_str(res.image))
            return EXIT_VIOLATION
        return EXIT_OK
    if action == "diagonalize":
        trace = U.diagonalize(args.steps, parity_index=args.parity_index)
        for s in trace.steps:
            out.add(f"step[{s.k}]", s.line())
        out.add("complete", trace.complete)
        if trace.halted:
            out.add("halted", trace.halted)
            return EXIT_VIOLATION
        out.add("limit", "".join(map(str, trace.limit_prefix())))
        out.add("limit_is_parity", trace.limit_is_parity_prefix())
        return EXIT_OK if trace.limit_is_parity_prefix() else EXIT_VIOLATION
    raise UsageError(f"unknown universe action {action!r}")


# ---------------------------------------------------------------------------

def cmd_verify_all(args, out: Records) -> int:
    cfg = VerifyConfig(
        seed=args.seed,
        cap=args.cap,
        budget=args.budget,
        mutate=args.inject_fault,
        prefix=args.prefix,
    )
    numbers = args.only or [c[0] for c in CRITERIA]
    results = [run_criterion(n, cfg) for n in numbers]
    for r in results:
        status = "pass" if r.passed else ("cap" if r.cap_exceeded else "fail")
        value = f"{status} {r.name}"
        if r.detail:
            value += f": {r.detail}"
        if args.timings:
            value += f" [{r.seconds:.2f}s < {r.limit:g}s]"
        out.add(f"criterion[{r.number}]", value)
    failed = [r for r in results if not r.passed]
    out.add("passed", f"{len(results) - len(failed)}/{len(results)}")
    if failed:
        out.add("first_failure", f"{failed[0].number}: {failed[0].detail}")
    if any(r.cap_exceeded for r in results):
        return EXIT_CAP
    return EXIT_VIOLATION if failed else EXIT_OK


# ---------------------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cap", type=int, default=None, help="enumeration cap (default $CLONELAB_CAP or 2^20)")
    common.add_argument("--budget", type=int, default=DEFAULT_BUDGET, help="per-arity clone member cap")
    common.add_argument("--json", action="store_true", help="print records as JSON")

    finite = _Parser(add_help=False)
    finite.add_argument("--algebra", metavar="PATH")
    finite.add_argument("--arity", type=int, default=1)
    finite.add_argument("--k", type=int, default=1)
    finite.add_argument("--clone", action="store_true", help="use the clone generated by the file's operations")

    p = _Parser(prog="clonelab", description="Clones, interpolation and bases of equality.")
    sub = p.add_subparsers(dest="command", parser_class=_Parser)

    sp = sub.add_parser("pol", parents=[common, finite], help="operations preserving the file's relations")
    sp.set_defaults(run=cmd_pol)
    sp = sub.add_parser("inv", parents=[common, finite], help="k-ary relations preserved by the file's operations")
    sp.set_defaults(run=cmd_inv)
    sp = sub.add_parser("loc", parents=[common, finite], help="Lo_k of the arity-m family")
    sp.add_argument("--sampled", action="store_true", help="sample tables when the cap is exceeded")
    sp.set_defaults(run=cmd_loc)
    sp = sub.add_parser("clone-gen", parents=[common, finite], help="saturate the generated clone")
    sp.set_defaults(run=cmd_clone_gen)
    sp = sub.add_parser("base", parents=[common, finite], help="find or check a base of equality")
    sp.add_argument("action", choices=("find", "check"))
    sp.add_argument("--points", help='points of D, e.g. "(0) (1)"')
    sp.add_argument("--size-cap", type=int, default=None)
    sp.set_defaults(run=cmd_base)
    sp = sub.add_parser("quasigroup", parents=[common, finite], help="check or find (dot, ldiv, rdiv)")
    sp.add_argument("--ops", help="comma-separated names of dot,ldiv,rdiv")
    sp.add_argument("--find", action="store_true", help="search the generated clone")
    sp.set_defaults(run=cmd_quasigroup)
    sp = sub.add_parser("galois-check", parents=[common, finite], help="compare both routes to (Loc_k C)^(m)")
    sp.set_defaults(run=cmd_galois_check)
    sp = sub.add_parser("integral-domain", parents=[common], help="polynomial witness for a finite D in Z")
    sp.add_argument("values", type=int, nargs="*")
    sp.set_defaults(run=cmd_integral_domain)

    up = sub.add_parser("universe", help="the symbolic clone on the natural numbers")
    usub = up.add_subparsers(dest="action", parser_class=_Parser)
    a = usub.add_parser("eval", parents=[common])
    a.add_argument("f")
    a.add_argument("x", type=int, nargs="+")
    a = usub.add_parser("compose", parents=[common])
    a.add_argument("f")
    a.add_argument("g")
    a.add_argument("--prefix", type=int, default=1000)
    a = usub.add_parser("member", parents=[common])
    a.add_argument("f")
    a = usub.add_parser("interpolate", parents=[common])
    a.add_argument("points", type=int, nargs="*")
    a = usub.add_parser("parity-local", parents=[common])
    a.add_argument("--k", type=int, default=3)
    a.add_argument("--prefix", type=int, default=16)
    a.add_argument("--mode", choices=("exhaustive", "max"), default="exhaustive")
    a = usub.add_parser("no-base", parents=[common])
    a.add_argument("points", type=int, nargs="*")
    a = usub.add_parser("rho", parents=[common])
    a.add_argument("f")
    a.add_argument("--arity", type=int, default=1)
    a.add_argument("--coordinate", type=int, default=1)
    a.add_argument("--prefix", type=int, default=8)
    a = usub.add_parser("diagonalize", parents=[common])
    a.add_argument("--steps", type=int, default=50)
    a.add_argument("--parity-index", type=int, default=U.DEFAULT_PARITY_INDEX)
    up.set_defaults(run=cmd_universe)

    sp = sub.add_parser("verify-all", parents=[common], help="run every acceptance criterion")
    sp.add_argument("--prefix", type=int, default=1000, help="pointwise range for the composition law")
    sp.add_argument("--only", type=int, action="append", choices=[c[0] for c in CRITERIA])
    sp.add_argument("--inject-fault", action="store_true", help="corrupt the g_a o g_b rewrite rule")
    sp.add_argument("--timings", action="store_true", help="append runtimes (output no longer reproducible)")
    sp.set_defaults(run=cmd_verify_all)
    return p


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except SystemExit as exc:  # --help
        return EXIT_OK if not exc.code else EXIT_USAGE
    if not getattr(args, "run", None) or (args.command == "universe" and not args.action):
        parser.print_usage(sys.stderr)
        return EXIT_USAGE
    out = Records(args.seed)
    out.add("command", args.command if args.command != "universe" else f"universe {args.action}")
    try:
        if getattr(args, "cap", None) is not None and args.cap < 0:
            raise UsageError("--cap must be non-negative")
        code = args.run(args, out)
    except (CapExceeded, IncompleteSaturation) as exc:
        out.add("error", str(exc))
        code = EXIT_CAP
    except (UsageError, AlgebraError, PreconditionError) as exc:
        print(out.render(args.json))
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(out.render(args.json))
    return code


if __name__ == "__main__":
    sys.exit(main())
