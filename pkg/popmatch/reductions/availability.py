"""Two forbidden edges to a pair where the second instance loses exactly those edges."""

import logging

from popmatch.core import Edge, Instance, InstanceFamily
from popmatch.reductions.gadgets import GadgetPair, GadgetRole, PromiseViolationError

logger = logging.getLogger(__name__)


def reduce_two_forbidden(source: Instance, edge: Edge, other: Edge) -> GadgetPair:
    """
    Keep ``source`` as the first instance and drop both edges from the second.

    Preferences over the remaining neighbours are inherited, so the robust popular
    matchings of the pair are the popular matchings of ``source`` avoiding both edges.

    Raises:
        PromiseViolationError: If an edge is missing or the edges share an agent
    """
    for candidate in (edge, other):
        if not source.has_edge(candidate):
            msg = f"Edge {candidate} is not in the source instance"
            raise PromiseViolationError(msg)
    if edge[0] == other[0] or edge[1] == other[1]:
        msg = f"Edges {source.edge_label(edge)} and {source.edge_label(other)} must be disjoint"
        raise PromiseViolationError(msg)
    reduced = source.without_edges([edge, other])
    family = InstanceFamily.infer([source, reduced], ["A", "B"])
    logger.info(f"Removed {source.edge_label(edge)} and {source.edge_label(other)} from the second instance")
    roles = {label: GadgetRole("source") for label in source.workers + source.firms}
    return GadgetPair(family, roles)
