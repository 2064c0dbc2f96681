"""
Forbidden edge plus forced vertex to a pair of instances that differ by two swaps.

The source is an instance with an edge e = {a, b} and an agent d such that a's
only neighbour is b, b has exactly one other neighbour c, and b and c rank each
other first. Four auxiliary agents are appended:

- ``l_a`` (opposite side of a) ranks a above ``r_a``; ``r_a`` only knows ``l_a``.
  a ranks b above ``l_a`` in the first instance and below it in the second.
- ``l_d`` (opposite side of d) is appended last to d's list; ``r_d`` only knows
  ``l_d``. ``l_d`` ranks d above ``r_d`` in the first instance and below it in the second.

The source has a popular matching avoiding e and covering d iff the pair has a
robust popular matching. ``project`` maps a matching of the pair back.
"""

import logging

from popmatch.core import AgentId, Edge, Instance, InstanceFamily, Matching, Side
from popmatch.reductions.gadgets import GadgetPair, GadgetRole, PromiseViolationError, fresh_label

logger = logging.getLogger(__name__)


def orient(source: Instance, edge: Edge) -> tuple[AgentId, AgentId]:
    """Return (a, b): the endpoint whose only neighbour is the other one first, workers preferred."""
    worker, firm = AgentId.worker(edge[0]), AgentId.firm(edge[1])
    if source.order(worker) == (firm.index,) or source.order(firm) != (worker.index,):
        return worker, firm
    return firm, worker


def check_promise(source: Instance, edge: Edge, vertex: AgentId) -> None:
    """
    Raises:
        PromiseViolationError: If ``edge`` and ``vertex`` do not meet the reduction's promise
    """
    if not source.has_edge(edge):
        msg = f"Edge {edge} is not in the source instance"
        raise PromiseViolationError(msg)
    if not 0 <= vertex.index < (source.n_workers if vertex.is_worker else source.n_firms):
        msg = "The forced vertex is not an agent of the source instance"
        raise PromiseViolationError(msg)
    a, b = orient(source, edge)
    if source.order(a) != (b.index,):
        msg = f"{source.label(a)} must have {source.label(b)} as its only neighbour"
        raise PromiseViolationError(msg)
    if len(source.order(b)) != 2:
        msg = f"{source.label(b)} must have exactly one neighbour besides {source.label(a)}"
        raise PromiseViolationError(msg)
    c = next(AgentId(a.side, x) for x in source.order(b) if x != a.index)
    if source.order(b)[0] != c.index or source.order(c)[0] != b.index:
        msg = f"{source.label(b)} and {source.label(c)} must rank each other first"
        raise PromiseViolationError(msg)
    if vertex == a:
        msg = "The forced vertex cannot be the endpoint whose only edge is forbidden"
        raise PromiseViolationError(msg)


def reduce_forbidden_edge_force_vert(source: Instance, edge: Edge, vertex: AgentId) -> GadgetPair:
    """
    Build the two-swap pair.

    The endpoint of the forbidden edge whose only neighbour is the other plays
    ``a``. Auxiliary agents get the labels ``l_a r_a l_d r_d``, primed if a source
    label is already taken, and are appended after the source agents so source
    indices carry over.

    Raises:
        PromiseViolationError: If the source violates the promise
    """
    check_promise(source, edge, vertex)
    a, b = orient(source, edge)
    taken = set(source.workers + source.firms)
    labels = {}
    for name in ("l_a", "r_a", "l_d", "r_d"):
        labels[name] = fresh_label(name, taken)
        taken.add(labels[name])

    workers, firms = list(source.workers), list(source.firms)

    def append(label: str, side: Side) -> AgentId:
        target = workers if side == Side.WORKER else firms
        target.append(label)
        return AgentId(side, len(target) - 1)

    l_a = append(labels["l_a"], a.side.other)
    r_a = append(labels["r_a"], a.side)
    l_d = append(labels["l_d"], vertex.side.other)
    r_d = append(labels["r_d"], vertex.side)

    prefs = {source.label(agent): [source.label(other) for other in source.prefs(agent)] for agent in source.agents}
    a_label, d_label = source.label(a), source.label(vertex)
    prefs[a_label] = [source.label(b), labels["l_a"]]
    prefs[d_label] = [*prefs[d_label], labels["l_d"]]
    prefs[labels["l_a"]] = [a_label, labels["r_a"]]
    prefs[labels["r_a"]] = [labels["l_a"]]
    prefs[labels["l_d"]] = [d_label, labels["r_d"]]
    prefs[labels["r_d"]] = [labels["l_d"]]

    changed = {
        a_label: list(reversed(prefs[a_label])),
        labels["l_d"]: list(reversed(prefs[labels["l_d"]])),
    }
    first = Instance.from_lists(workers, firms, prefs)
    second = Instance.from_lists(workers, firms, {**prefs, **changed})
    family = InstanceFamily.infer([first, second], ["A", "B"])

    roles = {label: GadgetRole("source") for label in source.workers + source.firms}
    roles.update({labels[name]: GadgetRole(name) for name in labels})
    logger.info(
        f"Two-swap pair: {first.label(l_a)}, {first.label(r_a)}, {first.label(l_d)}, {first.label(r_d)} added"
    )
    return GadgetPair(family, roles)


def project(source: Instance, matching: Matching) -> Matching:
    """Drop every pair that touches an auxiliary agent."""
    return Matching.of((w, f) for w, f in matching.pairs if w < source.n_workers and f < source.n_firms)
