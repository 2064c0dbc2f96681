"""
Votes, popularity margins and the structural popularity verifier.

Popularity is decided in polynomial time. Give every edge the weight it contributes to
Δ(M′, M) when M′ uses it, and drop the edges that can never help a rival (the
(+,+) edges). A maximum-weight matching in what remains is then the most popular
challenger of M. M is popular iff that challenger does not beat it. When it does,
the improving components of M ⊕ M′ are the alternating paths and cycles that
violate the structural characterization of popular matchings (cycle through a
(−,−) edge, path from an unmatched agent through a (−,−) edge, or path with two
(−,−) edges). They are returned as a certificate.

Usage:
    result = is_popular(instance, matching)
    if not result:
        print(result.certificate.violation, result.certificate.margin)
"""

import logging
from collections.abc import Iterable, Mapping
from dataclasses import dataclass
from functools import cached_property

import networkx as nx
from django.db import models

from popmatch.conf import get_bound
from popmatch.core import AgentId, Edge, Instance, Matching, Side, edge_agents, iter_matchings

logger = logging.getLogger(__name__)


class Mode(models.TextChoices):
    POPULAR = "popular", "Popular"
    DOMINANT = "dominant", "Dominant"
    STRONG = "strong", "Strongly popular"


class EdgeLabel(models.TextChoices):
    MINUS_MINUS = "--", "(−,−) both endpoints prefer the edge"
    PLUS_MINUS = "+-", "(+,−) exactly one endpoint prefers the edge"
    PLUS_PLUS = "++", "(+,+) neither endpoint prefers the edge"
    MATCHED = "00", "(0,0) matching edge"


class Violation(models.TextChoices):
    CYCLE = "cycle", "Alternating cycle through a (−,−) edge"
    UNMATCHED_PATH = "unmatched-path", "Alternating path from an unmatched agent through a (−,−) edge"
    DOUBLE_BLOCKING_PATH = "double-blocking-path", "Alternating path containing two (−,−) edges"


class InstanceTooLargeError(ValueError):
    """Raised when an exponential check is requested beyond its configured bound."""

    pass


# --- votes and margins ------------------------------------------------------------


def vote(instance: Instance, agent: AgentId, m1: Matching, m2: Matching) -> int:
    """+1 if ``agent`` prefers its partner in m1, −1 if it prefers m2, 0 if indifferent."""
    p1, p2 = m1.partner(agent), m2.partner(agent)
    if p1 == p2:
        return 0
    return 1 if instance.prefers(agent, p1, p2) else -1


def rank_vector(instance: Instance, matching: Matching) -> tuple[int, ...]:
    """
    Rank of every agent's partner (workers first), with ``n_agents`` standing for unmatched.

    Lower is better, so vote(x, m1, m2) = sign(r2[x] − r1[x]).
    """
    unmatched = instance.n_agents
    worker_rank, firm_rank = instance.rank_table(Side.WORKER), instance.rank_table(Side.FIRM)
    ranks = [unmatched] * instance.n_agents
    for w, f in matching.pairs:
        ranks[w] = worker_rank[w][f]
        ranks[instance.n_workers + f] = firm_rank[f][w]
    return tuple(ranks)


def popularity_margin(instance: Instance, m1: Matching, m2: Matching) -> int:
    """Δ(m1, m2): agents preferring m1 minus agents preferring m2."""
    r1, r2 = rank_vector(instance, m1), rank_vector(instance, m2)
    return sum((a < b) - (a > b) for a, b in zip(r1, r2, strict=True))


# --- labelled graph -------------------------------------------------------------


@dataclass(frozen=True)
class LabeledGraph:
    instance: Instance
    matching: Matching
    labels: Mapping[Edge, EdgeLabel]

    @cached_property
    def retained(self) -> tuple[Edge, ...]:
        """Edges of G_M: everything but (+,+) edges."""
        return tuple(edge for edge in self.instance.edges if self.labels[edge] != EdgeLabel.PLUS_PLUS)

    def label(self, edge: Edge) -> EdgeLabel:
        return self.labels[edge]

    def edges_labelled(self, label: EdgeLabel) -> tuple[Edge, ...]:
        return tuple(edge for edge in self.instance.edges if self.labels[edge] == label)

    def adjacency(self) -> dict[AgentId, list[AgentId]]:
        adjacent: dict[AgentId, list[AgentId]] = {agent: [] for agent in self.instance.agents}
        for edge in self.retained:
            worker, firm = edge_agents(edge)
            adjacent[worker].append(firm)
            adjacent[firm].append(worker)
        return adjacent


def _prefers_edge(instance: Instance, matching: Matching, agent: AgentId, other: AgentId) -> bool:
    return instance.prefers(agent, other, matching.partner(agent))


def label_graph(instance: Instance, matching: Matching) -> LabeledGraph:
    matching.validate(instance)
    labels = {}
    for edge in instance.edges:
        if edge in matching:
            labels[edge] = EdgeLabel.MATCHED
            continue
        worker, firm = edge_agents(edge)
        votes = _prefers_edge(instance, matching, worker, firm) + _prefers_edge(instance, matching, firm, worker)
        labels[edge] = (EdgeLabel.PLUS_PLUS, EdgeLabel.PLUS_MINUS, EdgeLabel.MINUS_MINUS)[votes]
    return LabeledGraph(instance, matching, labels)


def blocking_edges(instance: Instance, matching: Matching) -> tuple[Edge, ...]:
    return label_graph(instance, matching).edges_labelled(EdgeLabel.MINUS_MINUS)


def is_stable(instance: Instance, matching: Matching) -> bool:
    return not blocking_edges(instance, matching)


# --- popularity -----------------------------------------------------------------------


@dataclass(frozen=True)
class Certificate:
    """An alternating structure whose switch yields a strictly more popular matching."""

    violation: Violation
    # walk order along the path or cycle
    edges: tuple[Edge, ...]
    improved: Matching
    margin: int


@dataclass(frozen=True)
class PopularityResult:
    popular: bool
    certificate: Certificate | None = None

    def __bool__(self) -> bool:
        return self.popular


def _challenger_weight(instance: Instance, matching: Matching, edge: Edge) -> int:
    # contribution of `edge` to Δ(M′, M) when M′ uses it, with the −1 of every
    # M-matched endpoint moved into the constant term
    if edge in matching:
        return 2
    worker, firm = edge_agents(edge)
    weight = 0
    for agent, other in ((worker, firm), (firm, worker)):
        weight += 1 if _prefers_edge(instance, matching, agent, other) else -1
        weight += 1 if matching.covers(agent) else 0
    return weight


def most_popular_challenger(instance: Instance, matching: Matching) -> tuple[Matching, int]:
    """
    A matching M′ maximizing Δ(M′, M), together with that margin.

    Returns:
        (M′, Δ(M′, M)); the margin is 0 exactly when M is popular
    """
    graph = nx.Graph()
    graph.add_nodes_from(instance.agents)
    for edge in instance.edges:
        weight = _challenger_weight(instance, matching, edge)
        if weight > 0:
            graph.add_edge(*edge_agents(edge), weight=weight)
    best = nx.max_weight_matching(graph, maxcardinality=False, weight="weight")
    total = sum(graph.edges[u, v]["weight"] for u, v in best)
    challenger = Matching.of(instance.edge_between(u, v) for u, v in best)
    return challenger, total - 2 * len(matching)


def _edge_of(a: AgentId, b: AgentId) -> Edge:
    return (a.index, b.index) if a.is_worker else (b.index, a.index)


def _walk(edges: Iterable[Edge]) -> tuple[tuple[Edge, ...], tuple[AgentId, ...], bool]:
    """Order a path or cycle from its smallest end (or smallest vertex for cycles)."""
    graph = nx.Graph()
    graph.add_edges_from(edge_agents(edge) for edge in edges)
    ends = sorted(node for node, degree in graph.degree() if degree == 1)
    current = ends[0] if ends else min(graph.nodes)
    previous = None
    ordered, nodes = [], [current]
    for _ in range(graph.number_of_edges()):
        following = min(node for node in graph.neighbors(current) if node != previous)
        ordered.append(_edge_of(current, following))
        nodes.append(following)
        previous, current = current, following
    return tuple(ordered), tuple(nodes), not ends


def _classify(matching: Matching, nodes: tuple[AgentId, ...], is_cycle: bool) -> Violation:
    if is_cycle:
        return Violation.CYCLE
    if not matching.covers(nodes[0]) or not matching.covers(nodes[-1]):
        return Violation.UNMATCHED_PATH
    return Violation.DOUBLE_BLOCKING_PATH


def _certificate(instance: Instance, matching: Matching, challenger: Matching) -> Certificate:
    difference = nx.Graph()
    for edge in matching.pairs ^ challenger.pairs:
        difference.add_edge(*edge_agents(edge))
    found = []
    for component in nx.connected_components(difference):
        edges = tuple(sorted(_edge_of(u, v) for u, v in difference.subgraph(component).edges))
        improved = matching.symmetric_difference(edges)
        margin = popularity_margin(instance, improved, matching)
        if margin > 0:
            found.append((edges, improved, margin))
    edges, improved, margin = min(found, key=lambda item: item[0])
    walk, nodes, is_cycle = _walk(edges)
    return Certificate(_classify(matching, nodes, is_cycle), walk, improved, margin)


def is_popular(instance: Instance, matching: Matching) -> PopularityResult:
    """
    Decide whether ``matching`` is popular in ``instance``.

    Args:
        instance: The instance
        matching: A matching of the instance

    Returns:
        PopularityResult, truthy iff popular; a Certificate is attached otherwise

    Raises:
        MatchingError: If ``matching`` is not valid for ``instance``
    """
    matching.validate(instance)
    challenger, margin = most_popular_challenger(instance, matching)
    if margin <= 0:
        return PopularityResult(True)
    certificate = _certificate(instance, matching, challenger)
    logger.debug(f"not popular: {certificate.violation} with margin {certificate.margin}")
    return PopularityResult(False, certificate)


def has_augmenting_path(graph: LabeledGraph) -> bool:
    """True iff G_M admits an M-augmenting path, i.e. a larger matching inside G_M."""
    g = nx.Graph()
    workers = [agent for agent in graph.instance.agents if agent.is_worker]
    g.add_nodes_from(graph.instance.agents)
    g.add_edges_from(edge_agents(edge) for edge in graph.retained)
    maximum = nx.bipartite.hopcroft_karp_matching(g, top_nodes=workers)
    return len(maximum) // 2 > len(graph.matching)


def is_dominant(instance: Instance, matching: Matching, *, definitional: bool = False, bound: int | None = None) -> bool:
    """
    Decide whether ``matching`` is dominant: popular and more popular than every larger matching.

    Args:
        instance: The instance
        matching: A matching of the instance
        definitional: Compare against every larger matching instead of searching G_M for
            an augmenting path (exponential, limited by ``POPMATCH_ORACLE_BOUND``)
        bound: Overrides the agents-per-side bound of the definitional check
    """
    if not is_popular(instance, matching):
        return False
    if definitional:
        limit = get_bound("POPMATCH_ORACLE_BOUND", bound)
        if instance.max_side > limit:
            msg = f"Definitional dominance check limited to {limit} agents per side"
            raise InstanceTooLargeError(msg)
        logger.warning("Definitional dominance check requested; enumerating larger matchings")
        return all(
            popularity_margin(instance, matching, other) > 0
            for other in iter_matchings(instance, min_size=len(matching) + 1)
        )
    return not has_augmenting_path(label_graph(instance, matching))


def is_strongly_popular(instance: Instance, matching: Matching, *, bound: int | None = None) -> bool:
    """
    Decide whether ``matching`` beats every other matching.

    Raises:
        InstanceTooLargeError: Beyond ``POPMATCH_STRONG_BOUND`` agents per side
    """
    limit = get_bound("POPMATCH_STRONG_BOUND", bound)
    if instance.max_side > limit:
        msg = f"Strong popularity check limited to {limit} agents per side"
        raise InstanceTooLargeError(msg)
    if not is_popular(instance, matching):
        return False
    return all(popularity_margin(instance, matching, other) > 0 for other in iter_matchings(instance) if other != matching)


def check(instance: Instance, matching: Matching, mode: Mode, *, definitional: bool = False, bound: int | None = None) -> bool:
    """Dispatch to the verifier for ``mode``."""
    if mode == Mode.POPULAR:
        return bool(is_popular(instance, matching))
    if mode == Mode.DOMINANT:
        return is_dominant(instance, matching, definitional=definitional, bound=bound)
    return is_strongly_popular(instance, matching, bound=bound)
