"""
Single-instance solvers.

- gale_shapley: worker-proposing deferred acceptance (a stable, hence popular, matching)
- dominant_matching: two-level deferred acceptance (a maximum-size popular matching)
- popular_edge / dominant_edge: popular (dominant) matching containing a given edge
- max_weight_popular: heaviest popular matching of a complete instance

PopularEdge and DominantEdge go through an EdgeSolver chosen by ``get_edge_solver``.
The bundled backend is a certified search: it enumerates matchings containing the
edge, pruned by size and covered-agent facts, and accepts the first candidate the
polynomial verifier confirms.

Usage:
    stable = gale_shapley(instance)
    matching = popular_edge(instance, (0, 2))
"""

import logging
from abc import ABC, abstractmethod
from collections import deque
from collections.abc import Iterator, Mapping
from dataclasses import dataclass
from fractions import Fraction

from popmatch.conf import get_bound, get_setting
from popmatch.core import Edge, Instance, InstanceError, Matching, MatchingError, Side, iter_matchings
from popmatch.verify import InstanceTooLargeError, is_dominant, is_popular

logger = logging.getLogger(__name__)


class NotCompleteError(InstanceError):
    """Raised when an operation needs a complete instance (every worker adjacent to every firm)."""

    pass


class UnknownSolverError(ValueError):
    """Raised when ``POPMATCH_EDGE_SOLVER`` names no known backend."""

    pass


@dataclass(frozen=True)
class WeightFunction:
    """Rational weight on every edge of one instance."""

    weights: Mapping[Edge, Fraction]

    @classmethod
    def for_instance(cls, instance: Instance, weights: Mapping[Edge, Fraction | int]) -> "WeightFunction":
        """
        Raises:
            InstanceError: If the keys are not exactly the edges of ``instance``
        """
        if set(weights) != instance.edge_set:
            extra = sorted(set(weights) - instance.edge_set)
            missing = sorted(instance.edge_set - set(weights))
            msg = f"Weights must cover exactly the edges (missing {len(missing)}, extra {len(extra)})"
            raise InstanceError(msg)
        return cls({edge: Fraction(value) for edge, value in weights.items()})

    @classmethod
    def constant(cls, instance: Instance, value: Fraction | int = 0) -> "WeightFunction":
        return cls({edge: Fraction(value) for edge in instance.edges})

    def __call__(self, edge: Edge) -> Fraction:
        return self.weights[edge]

    def of(self, matching: Matching) -> Fraction:
        return sum((self.weights[edge] for edge in matching.pairs), Fraction(0))


def gale_shapley(instance: Instance) -> Matching:
    """
    Worker-proposing deferred acceptance.

    Free workers propose in index order down their lists; a firm holds its best
    proposal so far. The outcome is the worker-optimal stable matching.
    """
    next_choice = [0] * instance.n_workers
    holder: dict[int, int] = {}
    firm_rank = instance.rank_table(Side.FIRM)
    free = deque(range(instance.n_workers))
    while free:
        w = free.popleft()
        order = instance.worker_prefs[w]
        if next_choice[w] >= len(order):
            continue
        f = order[next_choice[w]]
        next_choice[w] += 1
        current = holder.get(f)
        if current is None:
            holder[f] = w
        elif firm_rank[f][w] < firm_rank[f][current]:
            holder[f] = w
            free.append(current)
        else:
            free.append(w)
    matching = Matching.of((w, f) for f, w in holder.items())
    logger.info(f"Stable matching of size {len(matching)}")
    return matching


def dominant_matching(instance: Instance) -> Matching:
    """
    Two-level deferred acceptance.

    Every worker first proposes down its list at level 0. A worker rejected by all
    its neighbours starts over at level 1. Firms rank proposals by level first
    (level 1 beats level 0) and by preference second. A worker rejected at level 1
    by everyone stays unmatched.
    """
    levels = [0] * instance.n_workers
    next_choice = [0] * instance.n_workers
    holder: dict[int, int] = {}
    firm_rank = instance.rank_table(Side.FIRM)
    free = deque(range(instance.n_workers))

    def key(f: int, w: int) -> tuple[int, int]:
        return levels[w], -firm_rank[f][w]

    while free:
        w = free.popleft()
        order = instance.worker_prefs[w]
        if next_choice[w] >= len(order):
            if levels[w] == 0 and order:
                levels[w], next_choice[w] = 1, 0
                free.append(w)
            continue
        f = order[next_choice[w]]
        next_choice[w] += 1
        current = holder.get(f)
        if current is None:
            holder[f] = w
        elif key(f, w) > key(f, current):
            holder[f] = w
            free.append(current)
        else:
            free.append(w)
    matching = Matching.of((w, f) for f, w in holder.items())
    promoted = sum(levels)
    logger.info(f"Dominant matching of size {len(matching)} ({promoted} workers promoted to level 1)")
    return matching


class EdgeSolver(ABC):
    """Backend for PopularEdge / DominantEdge queries."""

    @abstractmethod
    def popular_edge(self, instance: Instance, edge: Edge) -> Matching | None:
        """Return a popular matching containing ``edge``, or None if there is none."""
        pass

    @abstractmethod
    def dominant_edge(self, instance: Instance, edge: Edge) -> Matching | None:
        """Return a dominant matching containing ``edge``, or None if there is none."""
        pass


class CertifiedSearchSolver(EdgeSolver):
    """
    Exact search over matchings containing the edge, each accepted only after verification.

    Popular candidates must cover every agent the stable matching covers, and their
    size must lie between the stable and dominant sizes. Dominant candidates must
    cover exactly the agents that ``dominant_matching`` covers.
    """

    def __init__(self, bound: int | None = None) -> None:
        self.bound = get_bound("POPMATCH_SEARCH_BOUND", bound)

    def _check(self, instance: Instance, edge: Edge | None = None) -> None:
        if instance.max_side > self.bound:
            msg = f"Certified search limited to {self.bound} agents per side"
            raise InstanceTooLargeError(msg)
        if edge is not None and not instance.has_edge(edge):
            msg = f"Edge {edge} is not in the instance"
            raise MatchingError(msg)

    def popular_candidates(self, instance: Instance, edge: Edge | None = None) -> Iterator[Matching]:
        stable = gale_shapley(instance)
        dominant = dominant_matching(instance)
        return iter_matchings(
            instance,
            include=edge,
            require=stable.covered,
            min_size=len(stable),
            max_size=len(dominant),
        )

    def popular_edge(self, instance: Instance, edge: Edge) -> Matching | None:
        self._check(instance, edge)
        for candidate in self.popular_candidates(instance, edge):
            if is_popular(instance, candidate):
                logger.info(f"Popular matching found containing {instance.edge_label(edge)}")
                return candidate
        logger.info(f"No popular matching contains {instance.edge_label(edge)}")
        return None

    def dominant_edge(self, instance: Instance, edge: Edge) -> Matching | None:
        self._check(instance, edge)
        dominant = dominant_matching(instance)
        covered = dominant.covered
        uncovered = set(instance.agents) - covered
        for candidate in iter_matchings(
            instance,
            include=edge,
            require=covered,
            forbid=uncovered,
            min_size=len(dominant),
            max_size=len(dominant),
        ):
            if is_dominant(instance, candidate):
                logger.info(f"Dominant matching found containing {instance.edge_label(edge)}")
                return candidate
        logger.info(f"No dominant matching contains {instance.edge_label(edge)}")
        return None

    def popular_matchings(self, instance: Instance) -> Iterator[Matching]:
        self._check(instance)
        for candidate in self.popular_candidates(instance):
            if is_popular(instance, candidate):
                yield candidate


def get_edge_solver(bound: int | None = None) -> EdgeSolver:
    """
    Get the configured PopularEdge / DominantEdge backend.

    Returns:
        EdgeSolver: Backend named by ``POPMATCH_EDGE_SOLVER``

    Raises:
        UnknownSolverError: If the setting names no known backend
    """
    name = get_setting("POPMATCH_EDGE_SOLVER")
    if name == "certified-search":
        return CertifiedSearchSolver(bound)
    msg = f"Unknown edge solver {name!r}. Supported: certified-search"
    raise UnknownSolverError(msg)


def popular_edge(instance: Instance, edge: Edge, *, bound: int | None = None) -> Matching | None:
    return get_edge_solver(bound).popular_edge(instance, edge)


def dominant_edge(instance: Instance, edge: Edge, *, bound: int | None = None) -> Matching | None:
    return get_edge_solver(bound).dominant_edge(instance, edge)


def popular_matchings(instance: Instance, *, bound: int | None = None) -> Iterator[Matching]:
    """Stream every popular matching of ``instance`` in enumeration order."""
    return CertifiedSearchSolver(bound).popular_matchings(instance)


def max_weight_popular(instance: Instance, weights: WeightFunction, *, bound: int | None = None) -> tuple[Matching, Fraction]:
    """
    Heaviest popular matching of a complete instance.

    Args:
        instance: A complete instance
        weights: Weight of every edge
        bound: Overrides ``POPMATCH_SEARCH_BOUND``

    Returns:
        (matching, weight); ties go to the first matching in enumeration order

    Raises:
        NotCompleteError: If ``instance`` is not complete
    """
    if not instance.is_complete:
        msg = "Maximum weight popular matching needs a complete instance"
        raise NotCompleteError(msg)
    best: tuple[Matching, Fraction] | None = None
    for candidate in popular_matchings(instance, bound=bound):
        weight = weights.of(candidate)
        if best is None or weight > best[1]:
            best = (candidate, weight)
    if best is None:
        msg = "Search found no popular matching although a stable one always exists"
        raise RuntimeError(msg)
    logger.info(f"Maximum weight popular matching has weight {best[1]}")
    return best
