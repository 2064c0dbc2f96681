"""
Monotone 3-SAT to a pair of instances that differ at two firms.

Every literal occurrence (clause j, position i) becomes a gadget of three workers
and three firms: ``a c d`` / ``b e f`` for positive occurrences and
``abar cbar dbar`` / ``bbar ebar fbar`` for negative ones. Nine global agents tie
the gadgets together: workers ``t1 t2 t3 w1 w2`` and firms ``s1 s2 v1 v2``.
Gadgets of X_k and its negation are linked through ``c``-``bbar`` edges. The
second instance only changes the lists of ``s1`` and ``v2``.

The formula is satisfiable iff the pair has a robust popular (equivalently robust
dominant) matching. ``witness_matching`` builds that matching from a satisfying
assignment and ``extract_assignment`` goes back.

Usage:
    pair = reduce_sat(parse_dimacs(text))
    matching = witness_matching(pair, {1: True, 2: False})
"""

import logging
from collections.abc import Mapping

from popmatch.core import Instance, InstanceFamily, Matching
from popmatch.reductions.cnf import CnfFormula
from popmatch.reductions.gadgets import GadgetPair, GadgetRole
from popmatch.verify import is_dominant, is_popular

logger = logging.getLogger(__name__)

GLOBAL_WORKERS = ("t1", "t2", "t3", "w1", "w2")
GLOBAL_FIRMS = ("s1", "s2", "v1", "v2")
POSITIVE_WORKERS, POSITIVE_FIRMS = ("a", "c", "d"), ("b", "e", "f")
NEGATIVE_WORKERS, NEGATIVE_FIRMS = ("abar", "cbar", "dbar"), ("bbar", "ebar", "fbar")


class UnsatisfyingAssignmentError(ValueError):
    """Raised when a witness is requested for an assignment that does not satisfy the formula."""

    pass


class GadgetError(RuntimeError):
    """Raised when a constructed witness fails its own popularity check."""

    pass


def _label(kind: str, j: int, i: int) -> str:
    return GadgetRole(kind, j, i).canonical_label


def _sort_key(label: str) -> tuple[int, int, str]:
    """Bracket order: clause, then position, then label; global agents first."""
    parts = label.split(".")
    if len(parts) != 3:
        return (0, 0, label)
    return (int(parts[1][1:]), int(parts[2][1:]), parts[0])


def _bracket(labels: list[str]) -> list[str]:
    return sorted(labels, key=_sort_key)


def _build_prefs(formula: CnfFormula) -> tuple[list[str], list[str], dict[str, list[str]], dict[str, list[str]]]:
    """Worker labels, firm labels, preferences in the first instance, and the lists the second one changes."""
    occurrences = [
        (j, i, literal) for j, clause in enumerate(formula.clauses, start=1) for i, literal in enumerate(clause, start=1)
    ]

    workers = list(GLOBAL_WORKERS)
    firms = list(GLOBAL_FIRMS)
    for j, i, literal in occurrences:
        worker_kinds, firm_kinds = (POSITIVE_WORKERS, POSITIVE_FIRMS) if literal > 0 else (NEGATIVE_WORKERS, NEGATIVE_FIRMS)
        workers += [_label(kind, j, i) for kind in worker_kinds]
        firms += [_label(kind, j, i) for kind in firm_kinds]

    def negations(literal: int, kind: str) -> list[str]:
        return _bracket([_label(kind, j2, i2) for j2, i2, other in occurrences if other == -literal])

    prefs: dict[str, list[str]] = {}
    for j, i, literal in occurrences:
        if literal > 0:
            a, b, c, d, e, f = (_label(kind, j, i) for kind in ("a", "b", "c", "d", "e", "f"))
            prefs[a] = [f, _label("b", j, i + 1), "v2"] if i < 3 else [f, "v1", "v2"]
            prefs[b] = [c, _label("a", j, i - 1), d] if i > 1 else [c, "t1", d]
            prefs[c] = [e, *negations(literal, "bbar"), b, "v2"]
            prefs[d] = [b, e, f, "v2"]
            prefs[e] = [d, c]
            prefs[f] = [d, a]
        else:
            a, b, c, d, e, f = (_label(kind, j, i) for kind in ("abar", "bbar", "cbar", "dbar", "ebar", "fbar"))
            if i < 3:
                prefs[a] = [f, _label("bbar", j, i + 1), _label("ebar", j, i + 1), "v2"]
            else:
                prefs[a] = [f, "v1", "v2"]
            above = _label("abar", j, i - 1) if i > 1 else "t1"
            prefs[b] = [above, c, *negations(literal, "c"), d]
            prefs[c] = [e, b, "v2"]
            prefs[d] = ["v2", b, f, e]
            prefs[e] = [above, d, c]
            prefs[f] = [a, d]

    first_firms = _bracket([label for label in firms if label.startswith(("b.", "bbar.", "ebar.")) and label.endswith(".i1")])
    third_workers = _bracket([label for label in workers if label.startswith(("a.", "abar.")) and label.endswith(".i3")])
    rest = _bracket([label for label in workers if label not in ("t2", "t3", "w1", "w2")])

    prefs["t1"] = ["s1", *first_firms, "v2"]
    prefs["t2"] = ["s2", "s1"]
    prefs["t3"] = ["s2"]
    prefs["w1"] = ["v2", "v1"]
    prefs["w2"] = ["v2"]
    prefs["s1"] = ["t2", "t1"]
    prefs["s2"] = ["t2", "t3"]
    prefs["v1"] = [*third_workers, "w1"]
    prefs["v2"] = ["w1", "w2", *rest]

    changed = {"s1": ["t1", "t2"], "v2": [*rest, "w2", "w1"]}
    return workers, firms, prefs, changed


def _roles(instance: Instance) -> dict[str, GadgetRole]:
    roles = {}
    for label in instance.workers + instance.firms:
        parts = label.split(".")
        roles[label] = GadgetRole(parts[0], int(parts[1][1:]), int(parts[2][1:])) if len(parts) == 3 else GadgetRole(label)
    return roles


def reduce_sat(formula: CnfFormula) -> GadgetPair:
    """
    Build the instance pair for a monotone 3-CNF formula.

    Args:
        formula: At least one clause, each of three literals of one sign

    Returns:
        GadgetPair whose instances share one graph and differ only at ``s1`` and ``v2``
    """
    workers, firms, prefs, changed = _build_prefs(formula)
    first = Instance.from_lists(workers, firms, prefs)
    second = Instance.from_lists(workers, firms, {**prefs, **changed})
    family = InstanceFamily.infer([first, second], ["A", "B"])
    logger.info(f"SAT gadget pair with {first.n_agents} agents and {len(first.edges)} edges")
    return GadgetPair(family, _roles(first), formula)


def _require_formula(pair: GadgetPair) -> CnfFormula:
    if pair.formula is None:
        msg = "Gadget pair does not come from a formula"
        raise ValueError(msg)
    return pair.formula


def witness_matching(pair: GadgetPair, assignment: Mapping[int, bool]) -> Matching:
    """
    The matching that is dominant in both instances for a satisfying assignment.

    It covers every agent except ``t3``. The result is checked with the structural
    verifier on both instances before it is returned.

    Raises:
        UnsatisfyingAssignmentError: If ``assignment`` does not satisfy the formula
        GadgetError: If the construction fails its own check
    """
    formula = _require_formula(pair)
    try:
        satisfied = formula.is_satisfied_by(assignment)
    except KeyError as e:
        msg = f"Assignment leaves variable {e.args[0]} undefined"
        raise UnsatisfyingAssignmentError(msg) from e
    if not satisfied:
        msg = "Assignment does not satisfy the formula"
        raise UnsatisfyingAssignmentError(msg)

    pairs = [("t1", "s1"), ("t2", "s2"), ("w1", "v1"), ("w2", "v2")]
    for j, clause in enumerate(formula.clauses, start=1):
        for i, literal in enumerate(clause, start=1):
            true_literal = assignment[abs(literal)] == (literal > 0)
            if literal > 0:
                a, b, c, d, e, f = (_label(kind, j, i) for kind in ("a", "b", "c", "d", "e", "f"))
                pairs += [(c, b), (d, e), (a, f)] if true_literal else [(d, b), (c, e), (a, f)]
            else:
                a, b, c, d, e, f = (_label(kind, j, i) for kind in ("abar", "bbar", "cbar", "dbar", "ebar", "fbar"))
                pairs += [(d, b), (c, e), (a, f)] if true_literal else [(c, b), (d, e), (a, f)]

    first = pair.first
    matching = Matching.of(first.edge_between(first.agent(w), first.agent(f)) for w, f in pairs)
    for instance in pair.family.instances:
        matching.validate(instance)
        if not is_popular(instance, matching) or not is_dominant(instance, matching):
            msg = "Witness matching is not dominant in both instances"
            raise GadgetError(msg)
    logger.info(f"Witness matching of size {len(matching)} verified in both instances")
    return matching


def extract_assignment(pair: GadgetPair, matching: Matching) -> dict[int, bool]:
    """
    Read a truth assignment off a robust matching of the pair.

    X_k is True iff some positive occurrence of X_k has its ``b`` and ``c`` agents matched together.
    """
    formula = _require_formula(pair)
    first = pair.first
    assignment = dict.fromkeys(range(1, formula.n_vars + 1), False)
    for j, clause in enumerate(formula.clauses, start=1):
        for i, literal in enumerate(clause, start=1):
            if literal < 0:
                continue
            edge = first.edge_between(first.agent(_label("c", j, i)), first.agent(_label("b", j, i)))
            if edge in matching:
                assignment[literal] = True
    return assignment
