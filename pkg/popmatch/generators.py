"""
Seeded random instances and families for property tests and ``popmatch gen``.

Every generator takes a ``seed`` and draws from ``numpy.random.default_rng(seed)``,
so equal arguments give equal instances.
"""

import logging

import numpy as np

from popmatch.core import AgentId, FamilyRelation, Instance, InstanceFamily

logger = logging.getLogger(__name__)


def _labels(prefix: str, count: int) -> tuple[str, ...]:
    return tuple(f"{prefix}{i + 1}" for i in range(count))


def _instance_from_edges(n_workers: int, n_firms: int, edges: np.ndarray, rng: np.random.Generator) -> Instance:
    worker_prefs = tuple(tuple(int(f) for f in rng.permutation(np.flatnonzero(edges[w]))) for w in range(n_workers))
    firm_prefs = tuple(tuple(int(w) for w in rng.permutation(np.flatnonzero(edges[:, f]))) for f in range(n_firms))
    return Instance(_labels("w", n_workers), _labels("f", n_firms), worker_prefs, firm_prefs)


def random_instance(n_workers: int, n_firms: int | None = None, p: float = 1.0, *, seed: int = 0) -> Instance:
    """
    Random instance where each worker-firm pair is an edge with probability ``p``.

    Args:
        n_workers: Number of workers
        n_firms: Number of firms, defaults to ``n_workers``
        p: Edge probability; 1.0 gives a complete instance
        seed: Random seed

    Returns:
        Instance with uniformly random preference lists
    """
    n_firms = n_workers if n_firms is None else n_firms
    rng = np.random.default_rng(seed)
    edges = rng.random((n_workers, n_firms)) < p
    return _instance_from_edges(n_workers, n_firms, edges, rng)


def random_perturbed_pair(
    n_workers: int,
    n_firms: int | None = None,
    p: float = 1.0,
    *,
    seed: int = 0,
    swaps_only: bool = False,
) -> InstanceFamily:
    """
    Two instances over one graph in which exactly one agent's list differs.

    The agent is drawn among those with at least two neighbours. Its second list is
    a fresh random permutation, or a single adjacent swap when ``swaps_only``. When
    no agent has two neighbours both instances are equal.
    """
    n_firms = n_workers if n_firms is None else n_firms
    rng = np.random.default_rng(seed)
    edges = rng.random((n_workers, n_firms)) < p
    first = _instance_from_edges(n_workers, n_firms, edges, rng)
    candidates = [agent for agent in first.agents if len(first.order(agent)) >= 2]
    if not candidates:
        logger.debug("No agent with two neighbours; returning an unperturbed pair")
        return InstanceFamily((first, first), FamilyRelation.SAME_GRAPH, ("A", "B"))

    agent: AgentId = candidates[int(rng.integers(len(candidates)))]
    order = list(first.order(agent))
    if swaps_only:
        i = int(rng.integers(len(order) - 1))
        order[i], order[i + 1] = order[i + 1], order[i]
    else:
        while order == list(first.order(agent)):
            order = [int(x) for x in rng.permutation(order)]
    second = first.with_order(agent, order)
    return InstanceFamily((first, second), FamilyRelation.SAME_GRAPH, ("A", "B"))


def random_availability_family(n: int, k: int = 2, drop: float = 0.3, *, seed: int = 0) -> InstanceFamily:
    """
    A complete n×n first instance followed by ``k - 1`` copies that each lose random edges.

    Every edge is dropped independently with probability ``drop``; preferences over the
    kept neighbours keep their order, so the family only alters availability.
    """
    rng = np.random.default_rng(seed)
    first = random_instance(n, n, 1.0, seed=int(rng.integers(2**31)))
    instances = [first]
    for _ in range(k - 1):
        removed = [edge for edge in first.edges if rng.random() < drop]
        instances.append(first.without_edges(removed))
    names = tuple(f"I{i + 1}" for i in range(k))
    return InstanceFamily.infer(instances, names)
