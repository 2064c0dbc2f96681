"""
Mixed popularity: fractional matchings and the popularity polytope of complete instances.

A fractional matching μ puts weight μ(e) >= 0 on every edge. On a complete instance
the popularity polytope is the set of μ with

- Σ_{e ∋ x} μ(e) = 1 for every agent x on the smaller side (both sides when
  balanced) and <= 1 on the larger side,
- Δ(μ, χ_M) >= 0 for every matching M.

Δ(μ, χ_M) is linear in μ: every agent contributes the probability mass on partners
it prefers to M(x) minus the mass on partners it likes less, where staying
unmatched counts as worse than any partner. Constraints are generated against all
matchings, so this is bounded by ``POPMATCH_ORACLE_BOUND``.

Integral points of the polytope are exactly the popular matchings. A family can
have joint fractional points and still no robust popular matching.
"""

import logging
from collections.abc import Mapping
from dataclasses import dataclass
from fractions import Fraction

from popmatch.core import AgentId, Edge, Instance, InstanceFamily, Matching
from popmatch.lp import FeasibilityProblem
from popmatch.oracle import enumerate_matchings
from popmatch.solve import NotCompleteError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class FractionalMatching:
    """Nonnegative rational weight per edge; absent edges weigh 0."""

    weights: Mapping[Edge, Fraction]

    def __post_init__(self) -> None:
        if any(value < 0 for value in self.weights.values()):
            msg = "Fractional matching weights must be nonnegative"
            raise ValueError(msg)

    @classmethod
    def from_matching(cls, matching: Matching) -> "FractionalMatching":
        return cls({edge: Fraction(1) for edge in matching.pairs})

    @classmethod
    def uniform(cls, instance: Instance) -> "FractionalMatching":
        """1 / (larger side) on every edge of a complete instance."""
        if not instance.is_complete or not instance.max_side:
            msg = "The uniform point is only defined for nonempty complete instances"
            raise NotCompleteError(msg)
        share = Fraction(1, instance.max_side)
        return cls(dict.fromkeys(instance.edges, share))

    def __call__(self, edge: Edge) -> Fraction:
        return self.weights.get(edge, Fraction(0))

    @property
    def support(self) -> tuple[Edge, ...]:
        return tuple(sorted(edge for edge, value in self.weights.items() if value))

    def degree(self, agent: AgentId) -> Fraction:
        position = 0 if agent.is_worker else 1
        return sum((value for edge, value in self.weights.items() if edge[position] == agent.index), Fraction(0))

    @property
    def is_integral(self) -> bool:
        return all(value.denominator == 1 for value in self.weights.values())

    def as_matching(self) -> Matching | None:
        """The matching this point is the incidence vector of, if it is one."""
        if any(value not in (0, 1) for value in self.weights.values()):
            return None
        return Matching.of(self.support)


def _agent_coefficient(instance: Instance, matching: Matching, agent: AgentId, other: AgentId) -> int:
    current = matching.partner(agent)
    if current is None:
        return 1
    if current == other:
        return 1
    return 2 if instance.prefers(agent, other, current) else 0


def margin_coefficients(instance: Instance, matching: Matching) -> dict[Edge, int]:
    """
    Per-edge coefficients c with Δ(μ, χ_M) = Σ_e c(e)·μ(e) − 2|M|.

    Each endpoint adds 1 if it is unmatched in M or e is its M-edge, 2 if it
    prefers e to its M-partner, and 0 otherwise.
    """
    coefficients: dict[Edge, int] = {}
    for w, f in instance.edges:
        worker, firm = AgentId.worker(w), AgentId.firm(f)
        coefficients[(w, f)] = _agent_coefficient(instance, matching, worker, firm) + _agent_coefficient(
            instance, matching, firm, worker
        )
    return coefficients


def fractional_margin(instance: Instance, mu: FractionalMatching, matching: Matching) -> Fraction:
    """Expected popularity margin Δ(μ, χ_M) of the fractional matching against ``matching``."""
    coefficients = margin_coefficients(instance, matching)
    total = sum((coefficients[edge] * value for edge, value in mu.weights.items()), Fraction(0))
    return total - 2 * len(matching)


def _require_complete(instance: Instance) -> None:
    if not instance.is_complete:
        msg = "The popularity polytope is only implemented for complete instances"
        raise NotCompleteError(msg)


def _smaller_side_is_exact(instance: Instance, agent: AgentId) -> bool:
    if instance.n_workers == instance.n_firms:
        return True
    smaller_is_workers = instance.n_workers < instance.n_firms
    return agent.is_worker == smaller_is_workers


def degree_constraints(instance: Instance) -> tuple[list[tuple[list[int], int]], list[tuple[list[int], int]]]:
    """Equality and ``<=`` rows over ``instance.edges`` for the degree bounds."""
    equalities: list[tuple[list[int], int]] = []
    inequalities: list[tuple[list[int], int]] = []
    for agent in instance.agents:
        position = 0 if agent.is_worker else 1
        row = [1 if edge[position] == agent.index else 0 for edge in instance.edges]
        (equalities if _smaller_side_is_exact(instance, agent) else inequalities).append((row, 1))
    return equalities, inequalities


def popularity_constraints(instance: Instance, *, bound: int | None = None) -> list[tuple[list[int], int]]:
    """
    ``<=`` rows over ``instance.edges`` stating Δ(μ, χ_M) >= 0 for every matching M.

    Raises:
        BoundExceededError: Beyond ``POPMATCH_ORACLE_BOUND`` agents per side
    """
    rows = []
    for matching in enumerate_matchings(instance, bound=bound):
        coefficients = margin_coefficients(instance, matching)
        rows.append(([-coefficients[edge] for edge in instance.edges], -2 * len(matching)))
    return rows


def popularity_polytope_contains(instance: Instance, mu: FractionalMatching, *, bound: int | None = None) -> bool:
    """
    True iff ``mu`` lies in the popularity polytope of the complete ``instance``.

    Raises:
        NotCompleteError: If ``instance`` is not complete
    """
    _require_complete(instance)
    if any(not instance.has_edge(edge) for edge, value in mu.weights.items() if value):
        return False
    for agent in instance.agents:
        degree = mu.degree(agent)
        if degree > 1 or (_smaller_side_is_exact(instance, agent) and degree != 1):
            return False
    return all(fractional_margin(instance, mu, matching) >= 0 for matching in enumerate_matchings(instance, bound=bound))


def _require_complete_family(family: InstanceFamily) -> Instance:
    for instance in family.instances:
        _require_complete(instance)
    return family.first


def joint_polytope_feasible(family: InstanceFamily, *, bound: int | None = None) -> FractionalMatching | None:
    """
    A point in the popularity polytope of every instance of ``family``, if one exists.

    Args:
        family: Complete instances over the same agents
        bound: Overrides ``POPMATCH_ORACLE_BOUND`` for constraint generation

    Returns:
        An exact rational point, or None if the polytopes do not intersect

    Raises:
        NotCompleteError: If any instance is not complete
    """
    first = _require_complete_family(family)
    edges = first.edges
    problem = FeasibilityProblem(len(edges))
    equalities, inequalities = degree_constraints(first)
    for row, rhs in equalities:
        problem.add_equality(row, rhs)
    for row, rhs in inequalities:
        problem.add_inequality(row, rhs)
    for instance in family.instances:
        for row, rhs in popularity_constraints(instance, bound=bound):
            problem.add_inequality(row, rhs)
    logger.info(f"Joint polytope: {len(edges)} variables, {len(problem.equalities) + len(problem.inequalities)} constraints")
    point = problem.solve()
    if point is None:
        logger.info("Joint popularity polytope is empty")
        return None
    return FractionalMatching({edge: value for edge, value in zip(edges, point, strict=True) if value})


def integral_point_exists(family: InstanceFamily, *, bound: int | None = None) -> Matching | None:
    """
    The first matching (enumeration order) whose incidence vector lies in every polytope.

    Such a matching is exactly a robust popular matching of the family.

    Raises:
        NotCompleteError: If any instance is not complete
    """
    first = _require_complete_family(family)
    for matching in enumerate_matchings(first, bound=bound):
        point = FractionalMatching.from_matching(matching)
        if all(popularity_polytope_contains(instance, point, bound=bound) for instance in family.instances):
            logger.info(f"Integral point of size {len(matching)} found")
            return matching
    logger.info("Joint popularity polytope has no integral point")
    return None
