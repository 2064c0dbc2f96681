"""
Robust popular and dominant matchings across a family of instances.

When the instances share one graph and only a single agent x changes its
preferences, robustness collapses to a single-instance edge query. For an edge
e = {x, y}, the hybrid instance ranks above y every agent that x prefers to y in
*any* member of the family, and everything else below y. A matching containing e
is popular (dominant) in the hybrid iff it is popular (dominant) in every member.
So the algorithm is:

1. Compute a stable (dominant) matching of the first instance. If it leaves x
   unmatched it is robust and we are done.
2. Otherwise, for each edge at x in x's first-instance order, ask PopularEdge
   (DominantEdge) on the hybrid for that edge. The first hit is robust.
3. No hit means there is no robust matching.

Families where two or more agents change are rejected. That problem is NP-hard,
and ``naive_multi_hybrid`` shows why the hybrid argument breaks there.

Also here: the unpopular-agent fast path, the reduced-availability solver (complete
first instance) and robust strongly popular matchings.

Usage:
    family = read_family(["pair.pm"])
    matching = robust_matching(family, Mode.POPULAR)
"""

import logging
from collections.abc import Sequence
from dataclasses import dataclass
from fractions import Fraction

from django.db import models

from popmatch.core import AgentId, Edge, FamilyError, FamilyRelation, Instance, InstanceFamily, Matching
from popmatch.oracle import strong_set
from popmatch.solve import (
    NotCompleteError,
    WeightFunction,
    dominant_edge,
    dominant_matching,
    gale_shapley,
    max_weight_popular,
    popular_edge,
)
from popmatch.verify import Mode

logger = logging.getLogger(__name__)

STRATEGIES = ("auto", "hybrid", "unpopular", "reduced")


class UnsupportedFamilyError(FamilyError):
    """Raised for families outside the polynomial cases (e.g. several differing agents)."""

    pass


class FastPathReason(models.TextChoices):
    ROBUST = "robust", "All differing agents are unpopular; the matching is robust"
    INAPPLICABLE = "inapplicable", "Some differing agent is popular; the fast path does not apply"


@dataclass(frozen=True)
class HybridInstance:
    """The single instance that stands in for a whole family when asking about ``edge``."""

    base: Instance
    agent: AgentId
    edge: Edge
    order: tuple[int, ...]

    @property
    def instance(self) -> Instance:
        return self.base.with_order(self.agent, self.order)


@dataclass(frozen=True)
class FastPathOutcome:
    matching: Matching | None
    reason: FastPathReason


def _require_same_graph(family: InstanceFamily) -> None:
    if family.relation != FamilyRelation.SAME_GRAPH:
        msg = f"Operation needs instances over one graph, family is {family.relation.label.lower()}"
        raise FamilyError(msg)


def _single_differing_agent(family: InstanceFamily) -> AgentId | None:
    _require_same_graph(family)
    differing = family.differing_agents
    if len(differing) > 1:
        labels = ", ".join(family.first.label(agent) for agent in differing)
        msg = f"Only families where a single agent changes are supported; differing agents: {labels}"
        raise UnsupportedFamilyError(msg)
    return differing[0] if differing else None


def hybrid_order(orders: Sequence[Sequence[int]], partner: int) -> tuple[int, ...]:
    """
    Merge one agent's orders around ``partner``.

    Agents above ``partner`` in any order come first: the first order's ones in
    that order, then the ones only preferred later, in order of first appearance.
    ``partner`` follows, then everything else in the first order's order.
    """
    above: list[int] = []
    for order in orders:
        for other in order[: order.index(partner)]:
            if other not in above:
                above.append(other)
    below = [other for other in orders[0] if other != partner and other not in above]
    return (*above, partner, *below)


def hybrid_instance(family: InstanceFamily, edge: Edge, agent: AgentId | None = None) -> HybridInstance:
    """
    Build the hybrid instance of ``family`` for ``edge``.

    Args:
        family: Instances over one graph differing at (at most) one agent
        edge: An edge incident to the differing agent
        agent: The perturbed endpoint; defaults to the differing agent, or to the
            worker endpoint when no agent differs

    Raises:
        UnsupportedFamilyError: If more than one agent differs
        FamilyError: If the edge does not touch the perturbed agent
    """
    differing = _single_differing_agent(family)
    first = family.first
    if not first.has_edge(edge):
        msg = f"Edge {edge} is not in the family's graph"
        raise FamilyError(msg)
    if agent is None:
        agent = differing if differing is not None else AgentId.worker(edge[0])
    elif differing is not None and agent != differing:
        msg = f"{first.label(agent)} is not the differing agent {first.label(differing)}"
        raise FamilyError(msg)
    endpoint = edge[0] if agent.is_worker else edge[1]
    if endpoint != agent.index:
        msg = f"Edge {first.edge_label(edge)} is not incident to {first.label(agent)}"
        raise FamilyError(msg)
    partner = edge[1] if agent.is_worker else edge[0]
    order = hybrid_order([instance.order(agent) for instance in family.instances], partner)
    return HybridInstance(first, agent, edge, order)


def naive_multi_hybrid(family: InstanceFamily, edges: Sequence[Edge], agents: Sequence[AgentId]) -> Instance:
    """
    Apply the hybrid construction to several agents at once.

    This is not a solver: robustness does not transfer through this instance when
    two agents change, and it exists to reproduce that counterexample.
    """
    _require_same_graph(family)
    instance = family.first
    for edge, agent in zip(edges, agents, strict=True):
        partner = edge[1] if agent.is_worker else edge[0]
        order = hybrid_order([member.order(agent) for member in family.instances], partner)
        instance = instance.with_order(agent, order)
    return instance


def robust_matching(family: InstanceFamily, mode: Mode = Mode.POPULAR, *, bound: int | None = None) -> Matching | None:
    """
    A matching popular (``Mode.POPULAR``) or dominant (``Mode.DOMINANT``) in every instance.

    Args:
        family: Instances over one graph differing at a single agent
        mode: Popular or dominant
        bound: Overrides ``POPMATCH_SEARCH_BOUND`` for the edge queries

    Returns:
        The first robust matching found, or None if there is none

    Raises:
        UnsupportedFamilyError: If more than one agent differs
    """
    if mode not in (Mode.POPULAR, Mode.DOMINANT):
        msg = f"robust_matching supports popular and dominant modes, not {mode}"
        raise ValueError(msg)
    agent = _single_differing_agent(family)
    first = family.first
    start = gale_shapley(first) if mode == Mode.POPULAR else dominant_matching(first)
    if agent is None or not start.covers(agent):
        logger.info("Start matching leaves the perturbed agent unmatched; it is robust")
        return start

    query = popular_edge if mode == Mode.POPULAR else dominant_edge
    for partner in first.order(agent):
        edge = (agent.index, partner) if agent.is_worker else (partner, agent.index)
        hybrid = hybrid_instance(family, edge, agent)
        found = query(hybrid.instance, edge, bound=bound)
        if found is not None:
            logger.info(f"Hybrid for {first.edge_label(edge)} admits a {mode.label.lower()} matching")
            return found
    logger.info(f"No robust {mode.label.lower()} matching")
    return None


def unpopular_agents(instance: Instance, *, bound: int | None = None) -> frozenset[AgentId]:
    """
    Agents matched by no popular matching, found with one PopularEdge query per edge.

    Edges whose endpoints are both already known to be popular are skipped.
    """
    popular: set[AgentId] = set()
    for edge in instance.edges:
        worker, firm = AgentId.worker(edge[0]), AgentId.firm(edge[1])
        if worker in popular and firm in popular:
            continue
        found = popular_edge(instance, edge, bound=bound)
        if found is not None:
            popular |= found.covered
    return frozenset(instance.agents) - popular


def robust_via_unpopular(family: InstanceFamily, *, bound: int | None = None) -> FastPathOutcome:
    """
    If only unpopular agents of the first instance change, any popular matching of it is robust.

    Returns:
        FastPathOutcome with the stable matching of the first instance and reason ROBUST,
        or no matching and reason INAPPLICABLE (which says nothing about existence)
    """
    _require_same_graph(family)
    first = family.first
    unpopular = unpopular_agents(first, bound=bound)
    if all(agent in unpopular for agent in family.differing_agents):
        return FastPathOutcome(gale_shapley(first), FastPathReason.ROBUST)
    return FastPathOutcome(None, FastPathReason.INAPPLICABLE)


def robust_reduced_availability(family: InstanceFamily, *, bound: int | None = None) -> Matching | None:
    """
    Robust popular matching when later instances only lose edges of a complete first instance.

    Edges kept by every instance weigh 0, all others −1; a robust popular matching
    exists iff the heaviest popular matching of the first instance weighs 0.

    Raises:
        NotCompleteError: If the first instance is not complete
        FamilyError: If the instances change more than availability
    """
    first = family.first
    if not first.is_complete:
        msg = "The first instance must be complete"
        raise NotCompleteError(msg)
    if not family.availability_consistent():
        msg = "Instances must only differ in availability"
        raise FamilyError(msg)
    common = family.common_edges
    weights = WeightFunction.for_instance(first, {edge: 0 if edge in common else -1 for edge in first.edges})
    matching, weight = max_weight_popular(first, weights, bound=bound)
    if weight == Fraction(0):
        return matching
    return None


def robust_strongly_popular(family: InstanceFamily, *, bound: int | None = None) -> Matching | None:
    """
    The matching strongly popular in every instance, if any.

    Strongly popular matchings are unique, so this compares the one of each instance.
    """
    candidate: Matching | None = None
    for instance in family.instances:
        members = strong_set(instance, bound=bound)
        if not members:
            return None
        (member,) = members
        if candidate is not None and member != candidate:
            return None
        candidate = member
    return candidate


def robust(
    family: InstanceFamily,
    mode: Mode = Mode.POPULAR,
    strategy: str = "auto",
    *,
    bound: int | None = None,
) -> Matching | None:
    """
    Dispatch to a robust solver.

    ``auto`` picks reduced availability for families that only lose edges of a
    complete first instance, the unpopular fast path for popular matchings when
    several agents differ over one graph, and the hybrid algorithm otherwise.

    Raises:
        UnsupportedFamilyError: If the chosen strategy does not cover the family or mode
        ValueError: On an unknown strategy
    """
    if mode == Mode.STRONG:
        return robust_strongly_popular(family, bound=bound)
    if strategy == "auto":
        if family.relation == FamilyRelation.ALTERED_AVAILABILITY and family.first.is_complete:
            strategy = "reduced"
        elif family.relation == FamilyRelation.SAME_GRAPH and len(family.differing_agents) > 1 and mode == Mode.POPULAR:
            strategy = "unpopular"
        else:
            strategy = "hybrid"
        logger.info(f"auto strategy resolved to {strategy}")
    if strategy == "reduced":
        if mode != Mode.POPULAR:
            msg = "Reduced availability is only solved for popular matchings"
            raise UnsupportedFamilyError(msg)
        return robust_reduced_availability(family, bound=bound)
    if strategy == "unpopular":
        if mode == Mode.DOMINANT:
            msg = "The unpopular-agent fast path only covers popular matchings"
            raise UnsupportedFamilyError(msg)
        outcome = robust_via_unpopular(family, bound=bound)
        if outcome.reason == FastPathReason.INAPPLICABLE:
            msg = "Unpopular-agent fast path does not apply: a differing agent is popular"
            raise UnsupportedFamilyError(msg)
        return outcome.matching
    if strategy == "hybrid":
        return robust_matching(family, mode, bound=bound)
    msg = f"Unknown strategy {strategy!r}"
    raise ValueError(msg)
