"""
Constructive hardness reductions.

- ``sat``: monotone 3-SAT to a pair differing at two firms
- ``swaps``: forbidden edge plus forced vertex to a pair differing by two swaps
- ``availability``: two forbidden edges to a reduced-availability pair
"""

from popmatch.reductions.availability import reduce_two_forbidden
from popmatch.reductions.cnf import CnfError, CnfFormula, parse_dimacs, read_dimacs
from popmatch.reductions.gadgets import GadgetPair, GadgetRole, PromiseViolationError
from popmatch.reductions.sat import GadgetError, UnsatisfyingAssignmentError, extract_assignment, reduce_sat, witness_matching
from popmatch.reductions.swaps import project, reduce_forbidden_edge_force_vert

__all__ = [
    "CnfError",
    "CnfFormula",
    "GadgetError",
    "GadgetPair",
    "GadgetRole",
    "PromiseViolationError",
    "UnsatisfyingAssignmentError",
    "extract_assignment",
    "parse_dimacs",
    "project",
    "read_dimacs",
    "reduce_forbidden_edge_force_vert",
    "reduce_sat",
    "reduce_two_forbidden",
    "witness_matching",
]
