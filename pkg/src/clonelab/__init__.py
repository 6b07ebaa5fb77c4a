"""Clones on finite sets, local interpolation and bases of equality,
plus a symbolic clone on the natural numbers that is not locally closed."""

from .algebra import (
    Algebra,
    Domain,
    Operation,
    Relation,
    TupleIndex,
    all_operations,
    evaluate,
    make_constant,
    make_projection,
    parse_algebra,
    preserves,
    serialize_algebra,
)
from .clones import CloneRepr, check_quasigroup, contains, find_quasigroup_ops, generate_clone, is_constantive
from .equality import BaseSet, find_minimal_base, is_base_of_equality, verify_base_interpolation
from .errors import (
    AlgebraError,
    CapExceeded,
    CloneLabError,
    DiagonalizationError,
    IncompleteSaturation,
    ParseError,
    PreconditionError,
)
from .galois import FunctionFamily, RelationFamily, compactness_scan, inv, lo_k_family, lo_k_member, check_local_closure_routes, pol

__version__ = "0.1.0"

__all__ = [
    "Algebra",
    "AlgebraError",
    "BaseSet",
    "CapExceeded",
    "CloneLabError",
    "CloneRepr",
    "DiagonalizationError",
    "Domain",
    "FunctionFamily",
    "IncompleteSaturation",
    "Operation",
    "ParseError",
    "PreconditionError",
    "Relation",
    "RelationFamily",
    "TupleIndex",
    "all_operations",
    "check_local_closure_routes",
    "check_quasigroup",
    "compactness_scan",
    "contains",
    "evaluate",
    "find_minimal_base",
    "find_quasigroup_ops",
    "generate_clone",
    "inv",
    "is_base_of_equality",
    "is_constantive",
    "lo_k_family",
    "lo_k_member",
    "make_constant",
    "make_projection",
    "parse_algebra",
    "pol",
    "preserves",
    "serialize_algebra",
    "verify_base_interpolation",
]
