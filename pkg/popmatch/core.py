"""
Core types for two-sided matching instances with strict preferences.

An Instance is a bipartite graph of workers and firms in which every agent ranks
its neighbours strictly; the preference lists define the edge set. Agents are
addressed by AgentId (side + dense index in declaration order). Labels only
matter at the text boundary, see ``popmatch.formats``.

All types here are immutable and safe to share between threads.
"""

import logging
from collections.abc import Iterable, Iterator, Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from django.db import models

logger = logging.getLogger(__name__)

# (worker index, firm index)
Edge = tuple[int, int]

FORBIDDEN_LABEL_CHARS = frozenset(":#{},")


class Side(models.IntegerChoices):
    WORKER = 0, "Worker"
    FIRM = 1, "Firm"

    @property
    def other(self) -> "Side":
        return Side.FIRM if self == Side.WORKER else Side.WORKER


class FamilyRelation(models.TextChoices):
    SAME_GRAPH = "same-graph", "Same graph, perturbed preferences"
    ALTERED_AVAILABILITY = "altered-availability", "Altered availability"
    UNCHECKED = "unchecked", "Unchecked"


class InstanceError(ValueError):
    """Raised when an instance violates a structural invariant."""

    pass


class MatchingError(ValueError):
    """Raised when a set of pairs is not a matching of the instance."""

    pass


class FamilyError(ValueError):
    """Raised when an instance family does not satisfy a required relation."""

    pass


@dataclass(frozen=True, order=True)
class AgentId:
    side: Side
    index: int

    @property
    def is_worker(self) -> bool:
        return self.side == Side.WORKER

    @classmethod
    def worker(cls, index: int) -> "AgentId":
        return cls(Side.WORKER, index)

    @classmethod
    def firm(cls, index: int) -> "AgentId":
        return cls(Side.FIRM, index)


def edge_agents(edge: Edge) -> tuple[AgentId, AgentId]:
    return AgentId.worker(edge[0]), AgentId.firm(edge[1])


@dataclass(frozen=True)
class Instance:
    """
    A matching instance: labelled workers and firms with strict preference lists.

    ``worker_prefs[w]`` lists firm indices from most to least preferred, and
    ``firm_prefs[f]`` lists worker indices likewise. Omitted agents are
    non-neighbours. Lists must be mutually consistent: w lists f iff f lists w.
    """

    workers: tuple[str, ...]
    firms: tuple[str, ...]
    worker_prefs: tuple[tuple[int, ...], ...]
    firm_prefs: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        if len(self.worker_prefs) != len(self.workers) or len(self.firm_prefs) != len(self.firms):
            msg = "Every agent needs exactly one preference list"
            raise InstanceError(msg)

        labels = self.workers + self.firms
        for label in labels:
            if not label or any(ch.isspace() or ch in FORBIDDEN_LABEL_CHARS for ch in label):
                msg = f"Invalid agent label {label!r}"
                raise InstanceError(msg)
        if len(set(labels)) != len(labels):
            duplicates = sorted({label for label in labels if labels.count(label) > 1})
            msg = f"Duplicate agent labels: {', '.join(duplicates)}"
            raise InstanceError(msg)

        self._check_lists(self.workers, self.worker_prefs, len(self.firms))
        self._check_lists(self.firms, self.firm_prefs, len(self.workers))

        worker_edges = {(w, f) for w, prefs in enumerate(self.worker_prefs) for f in prefs}
        firm_edges = {(w, f) for f, prefs in enumerate(self.firm_prefs) for w in prefs}
        if worker_edges != firm_edges:
            w, f = min(worker_edges ^ firm_edges)
            msg = f"Preference lists of {self.workers[w]} and {self.firms[f]} disagree on their edge"
            raise InstanceError(msg)

    @staticmethod
    def _check_lists(owners: tuple[str, ...], prefs: tuple[tuple[int, ...], ...], n_other: int) -> None:
        for owner, order in zip(owners, prefs, strict=True):
            if len(set(order)) != len(order):
                msg = f"Preference list of {owner} repeats an agent"
                raise InstanceError(msg)
            if any(not 0 <= other < n_other for other in order):
                msg = f"Preference list of {owner} references an unknown agent"
                raise InstanceError(msg)

    @classmethod
    def from_lists(cls, workers: Sequence[str], firms: Sequence[str], prefs: Mapping[str, Sequence[str]]) -> "Instance":
        """
        Build an instance from labels.

        Args:
            workers: Worker labels in declaration order
            firms: Firm labels in declaration order
            prefs: Preference list per label, most preferred first; missing labels get empty lists

        Returns:
            The validated Instance

        Raises:
            InstanceError: On unknown labels, asymmetric lists or duplicates
        """
        worker_index = {label: i for i, label in enumerate(workers)}
        firm_index = {label: i for i, label in enumerate(firms)}
        for label in prefs:
            if label not in worker_index and label not in firm_index:
                msg = f"Preference list given for unknown agent {label}"
                raise InstanceError(msg)

        def resolve(owner: str, order: Sequence[str], index: Mapping[str, int]) -> tuple[int, ...]:
            try:
                return tuple(index[label] for label in order)
            except KeyError as e:
                msg = f"Preference list of {owner} names {e.args[0]}, which is not on the opposite side"
                raise InstanceError(msg) from e

        return cls(
            workers=tuple(workers),
            firms=tuple(firms),
            worker_prefs=tuple(resolve(w, prefs.get(w, ()), firm_index) for w in workers),
            firm_prefs=tuple(resolve(f, prefs.get(f, ()), worker_index) for f in firms),
        )

    # --- agents -------------------------------------------------------------

    @property
    def n_workers(self) -> int:
        return len(self.workers)

    @property
    def n_firms(self) -> int:
        return len(self.firms)

    @property
    def n_agents(self) -> int:
        return len(self.workers) + len(self.firms)

    @property
    def max_side(self) -> int:
        return max(len(self.workers), len(self.firms))

    @property
    def agents(self) -> tuple[AgentId, ...]:
        """All agents, workers first, each side in index order."""
        return tuple(AgentId.worker(w) for w in range(self.n_workers)) + tuple(
            AgentId.firm(f) for f in range(self.n_firms)
        )

    @cached_property
    def _label_index(self) -> dict[str, AgentId]:
        index = {label: AgentId.worker(i) for i, label in enumerate(self.workers)}
        index.update({label: AgentId.firm(i) for i, label in enumerate(self.firms)})
        return index

    def agent(self, label: str) -> AgentId:
        try:
            return self._label_index[label]
        except KeyError as e:
            msg = f"Unknown agent {label}"
            raise InstanceError(msg) from e

    def label(self, agent: AgentId) -> str:
        return self.workers[agent.index] if agent.is_worker else self.firms[agent.index]

    def order(self, agent: AgentId) -> tuple[int, ...]:
        """Preference list of an agent as opposite-side indices."""
        return self.worker_prefs[agent.index] if agent.is_worker else self.firm_prefs[agent.index]

    def prefs(self, agent: AgentId) -> tuple[AgentId, ...]:
        other = agent.side.other
        return tuple(AgentId(other, i) for i in self.order(agent))

    @cached_property
    def _worker_rank(self) -> tuple[dict[int, int], ...]:
        return tuple({f: r for r, f in enumerate(order)} for order in self.worker_prefs)

    @cached_property
    def _firm_rank(self) -> tuple[dict[int, int], ...]:
        return tuple({w: r for r, w in enumerate(order)} for order in self.firm_prefs)

    def rank_table(self, side: Side) -> tuple[dict[int, int], ...]:
        return self._worker_rank if side == Side.WORKER else self._firm_rank

    def rank(self, agent: AgentId, other: AgentId) -> int | None:
        """0-based position of ``other`` in the list of ``agent``, or None if not a neighbour."""
        return self.rank_table(agent.side)[agent.index].get(other.index)

    def prefers(self, agent: AgentId, first: AgentId | None, second: AgentId | None) -> bool:
        """True iff ``agent`` strictly prefers ``first`` to ``second`` (None meaning unmatched)."""
        if first is None:
            return False
        if second is None:
            return True
        table = self.rank_table(agent.side)[agent.index]
        return table[first.index] < table[second.index]

    # --- edges --------------------------------------------------------------

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted((w, f) for w, order in enumerate(self.worker_prefs) for f in order))

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    def has_edge(self, edge: Edge) -> bool:
        return edge in self.edge_set

    @property
    def is_complete(self) -> bool:
        return len(self.edges) == self.n_workers * self.n_firms

    def edge_between(self, a: AgentId, b: AgentId) -> Edge:
        if a.side == b.side:
            msg = f"{self.label(a)} and {self.label(b)} are on the same side"
            raise InstanceError(msg)
        return (a.index, b.index) if a.is_worker else (b.index, a.index)

    def edge_label(self, edge: Edge) -> str:
        return f"{self.workers[edge[0]]}-{self.firms[edge[1]]}"

    def neighbours(self, agent: AgentId) -> frozenset[int]:
        return frozenset(self.order(agent))

    # --- derived instances ---------------------------------------------------

    def with_order(self, agent: AgentId, order: Sequence[int]) -> "Instance":
        """
        Replace one agent's preference list, keeping its neighbour set.

        Raises:
            InstanceError: If ``order`` is not a permutation of the agent's neighbours
        """
        if sorted(order) != sorted(self.order(agent)):
            msg = f"New order for {self.label(agent)} must rank exactly its neighbours"
            raise InstanceError(msg)
        if agent.is_worker:
            prefs = list(self.worker_prefs)
            prefs[agent.index] = tuple(order)
            return Instance(self.workers, self.firms, tuple(prefs), self.firm_prefs)
        prefs = list(self.firm_prefs)
        prefs[agent.index] = tuple(order)
        return Instance(self.workers, self.firms, self.worker_prefs, tuple(prefs))

    def without_edges(self, edges: Iterable[Edge]) -> "Instance":
        """Remove edges; the remaining preferences keep their relative order."""
        removed = set(edges)
        return Instance(
            self.workers,
            self.firms,
            tuple(tuple(f for f in order if (w, f) not in removed) for w, order in enumerate(self.worker_prefs)),
            tuple(tuple(w for w in order if (w, f) not in removed) for f, order in enumerate(self.firm_prefs)),
        )


@dataclass(frozen=True)
class Matching:
    """
    A set of vertex-disjoint (worker, firm) pairs.

    Validity against a concrete instance (every pair is an edge) is checked with
    ``validate``; disjointness is enforced on construction.
    """

    pairs: frozenset[Edge] = frozenset()

    def __post_init__(self) -> None:
        workers = [w for w, _ in self.pairs]
        firms = [f for _, f in self.pairs]
        if len(set(workers)) != len(workers) or len(set(firms)) != len(firms):
            msg = "Pairs of a matching must be vertex-disjoint"
            raise MatchingError(msg)

    @classmethod
    def of(cls, pairs: Iterable[Edge] = ()) -> "Matching":
        return cls(frozenset(pairs))

    def __len__(self) -> int:
        return len(self.pairs)

    def __iter__(self) -> Iterator[Edge]:
        return iter(sorted(self.pairs))

    def __contains__(self, edge: object) -> bool:
        return edge in self.pairs

    @property
    def sort_key(self) -> tuple[Edge, ...]:
        return tuple(sorted(self.pairs))

    @cached_property
    def worker_partner(self) -> dict[int, int]:
        return dict(self.pairs)

    @cached_property
    def firm_partner(self) -> dict[int, int]:
        return {f: w for w, f in self.pairs}

    def partner(self, agent: AgentId) -> AgentId | None:
        if agent.is_worker:
            f = self.worker_partner.get(agent.index)
            return None if f is None else AgentId.firm(f)
        w = self.firm_partner.get(agent.index)
        return None if w is None else AgentId.worker(w)

    def covers(self, agent: AgentId) -> bool:
        return agent.index in (self.worker_partner if agent.is_worker else self.firm_partner)

    @cached_property
    def covered(self) -> frozenset[AgentId]:
        return frozenset(a for edge in self.pairs for a in edge_agents(edge))

    def add(self, edge: Edge) -> "Matching":
        """Return a new matching with ``edge`` inserted; rejects pairs sharing an agent."""
        if edge in self.pairs:
            return self
        if edge[0] in self.worker_partner or edge[1] in self.firm_partner:
            msg = f"Pair {edge} shares an agent with the matching"
            raise MatchingError(msg)
        return Matching(self.pairs | {edge})

    def symmetric_difference(self, edges: Iterable[Edge]) -> "Matching":
        return Matching(self.pairs.symmetric_difference(edges))

    def validate(self, instance: Instance) -> None:
        """
        Raises:
            MatchingError: If some pair is not an edge of ``instance``
        """
        for edge in sorted(self.pairs):
            if not (0 <= edge[0] < instance.n_workers and 0 <= edge[1] < instance.n_firms):
                msg = f"Pair {edge} references an agent outside the instance"
                raise MatchingError(msg)
            if not instance.has_edge(edge):
                msg = f"Pair {instance.edge_label(edge)} is not an edge of the instance"
                raise MatchingError(msg)

    def is_valid_for(self, instance: Instance) -> bool:
        try:
            self.validate(instance)
        except MatchingError:
            return False
        return True


def iter_matchings(
    instance: Instance,
    *,
    include: Edge | None = None,
    require: Iterable[AgentId] = (),
    forbid: Iterable[AgentId] = (),
    min_size: int = 0,
    max_size: int | None = None,
) -> Iterator[Matching]:
    """
    Stream every matching of ``instance`` meeting the given restrictions, once each.

    Workers are decided in index order; each worker is first left unmatched and
    then paired with its free neighbours in ascending firm index, which fixes a
    deterministic order. No size bound is enforced here.

    Args:
        instance: The instance
        include: An edge every returned matching must contain
        require: Agents that must be matched
        forbid: Agents that must stay unmatched
        min_size: Smallest matching size to report
        max_size: Largest matching size to report (None for unbounded)
    """
    required = frozenset(require)
    forbidden = frozenset(forbid)
    required_workers = {a.index for a in required if a.is_worker}
    required_firms = frozenset(a.index for a in required if not a.is_worker)
    forbidden_workers = {a.index for a in forbidden if a.is_worker}
    forbidden_firms = {a.index for a in forbidden if not a.is_worker}
    if required & forbidden:
        return
    if include is not None:
        if not instance.has_edge(include):
            msg = f"Edge {include} is not in the instance"
            raise MatchingError(msg)
        if include[0] in forbidden_workers or include[1] in forbidden_firms:
            return
    upper = instance.n_workers if max_size is None else max_size
    n = instance.n_workers
    used_firms: set[int] = set()
    if include is not None:
        used_firms.add(include[1])
    chosen: list[Edge] = []

    def walk(w: int) -> Iterator[Matching]:
        size = len(chosen)
        if size > upper or size + (n - w) < min_size:
            return
        if w == n:
            if required_firms <= used_firms:
                yield Matching(frozenset(chosen))
            return
        if include is not None and include[0] == w:
            chosen.append(include)
            yield from walk(w + 1)
            chosen.pop()
            return
        if w not in required_workers:
            yield from walk(w + 1)
        if w in forbidden_workers:
            return
        for f in sorted(instance.worker_prefs[w]):
            if f in used_firms or f in forbidden_firms:
                continue
            used_firms.add(f)
            chosen.append((w, f))
            yield from walk(w + 1)
            chosen.pop()
            used_firms.discard(f)

    yield from walk(0)


@dataclass(frozen=True)
class InstanceFamily:
    """
    An ordered collection of instances over the same agents.

    ``relation`` records what the instances have in common and is verified on
    construction; use ``infer`` to pick the strongest relation that holds.
    """

    instances: tuple[Instance, ...]
    relation: FamilyRelation = FamilyRelation.UNCHECKED
    names: tuple[str, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.instances:
            msg = "A family needs at least one instance"
            raise FamilyError(msg)
        first = self.instances[0]
        for other in self.instances[1:]:
            if other.workers != first.workers or other.firms != first.firms:
                msg = "All instances of a family must declare the same workers and firms"
                raise FamilyError(msg)
        if self.names and len(self.names) != len(self.instances):
            msg = "Family names must match the number of instances"
            raise FamilyError(msg)
        if self.relation == FamilyRelation.SAME_GRAPH and not self._same_graph():
            msg = "Instances do not share one graph"
            raise FamilyError(msg)
        if self.relation == FamilyRelation.ALTERED_AVAILABILITY and not self.availability_consistent():
            msg = "Instances disagree on preferences over common neighbours"
            raise FamilyError(msg)

    @classmethod
    def infer(cls, instances: Sequence[Instance], names: Sequence[str] = ()) -> "InstanceFamily":
        family = cls(tuple(instances), FamilyRelation.UNCHECKED, tuple(names))
        if family._same_graph():
            relation = FamilyRelation.SAME_GRAPH
        elif family.availability_consistent():
            relation = FamilyRelation.ALTERED_AVAILABILITY
        else:
            relation = FamilyRelation.UNCHECKED
        return cls(tuple(instances), relation, tuple(names))

    def _same_graph(self) -> bool:
        return all(other.edge_set == self.first.edge_set for other in self.instances[1:])

    def availability_consistent(self) -> bool:
        for a, b in combinations(self.instances, 2):
            for agent in a.agents:
                if not restrictions_agree(a.order(agent), b.order(agent)):
                    return False
        return True

    @property
    def first(self) -> Instance:
        return self.instances[0]

    def __len__(self) -> int:
        return len(self.instances)

    def __iter__(self) -> Iterator[Instance]:
        return iter(self.instances)

    def name(self, position: int) -> str:
        return self.names[position] if self.names else f"I{position + 1}"

    @cached_property
    def differing_agents(self) -> tuple[AgentId, ...]:
        """Agents whose preference list is not identical across all instances."""
        first = self.first
        return tuple(
            agent for agent in first.agents if any(other.order(agent) != first.order(agent) for other in self.instances[1:])
        )

    @cached_property
    def common_edges(self) -> frozenset[Edge]:
        edges = self.first.edge_set
        for other in self.instances[1:]:
            edges &= other.edge_set
        return edges


def restrictions_agree(first: Sequence[int], second: Sequence[int]) -> bool:
    """True iff both orders rank their common elements identically."""
    common = set(first) & set(second)
    return [x for x in first if x in common] == [x for x in second if x in common]


def kendall_distance(first: Sequence[int], second: Sequence[int]) -> int:
    """Number of discordant pairs between two orders of the same elements."""
    position = {x: i for i, x in enumerate(second)}
    return sum(1 for x, y in combinations(first, 2) if position[x] > position[y])


@dataclass(frozen=True)
class AgentChange:
    agent: AgentId
    # None when the neighbour sets differ
    swap_distance: int | None


@dataclass(frozen=True)
class PerturbationReport:
    """How the second instance of a pair evolves from the first."""

    changes: tuple[AgentChange, ...]
    added_edges: tuple[Edge, ...]
    removed_edges: tuple[Edge, ...]
    single_agent: bool
    swaps_only: bool
    reduced_availability: bool
    a_complete: bool

    @property
    def changed(self) -> tuple[AgentId, ...]:
        return tuple(change.agent for change in self.changes)


def diff_instances(a: Instance, b: Instance) -> PerturbationReport:
    """
    Compare two instances over the same agents.

    Raises:
        InstanceError: If the instances declare different workers or firms
    """
    if a.workers != b.workers or a.firms != b.firms:
        msg = "Instances declare different agents"
        raise InstanceError(msg)

    changes = []
    for agent in a.agents:
        before, after = a.order(agent), b.order(agent)
        if before == after:
            continue
        distance = kendall_distance(before, after) if set(before) == set(after) else None
        changes.append(AgentChange(agent, distance))

    added = tuple(sorted(b.edge_set - a.edge_set))
    removed = tuple(sorted(a.edge_set - b.edge_set))
    same_graph = not added and not removed
    agree = all(restrictions_agree(a.order(agent), b.order(agent)) for agent in a.agents)
    report = PerturbationReport(
        changes=tuple(changes),
        added_edges=added,
        removed_edges=removed,
        single_agent=len(changes) <= 1,
        swaps_only=same_graph and all(change.swap_distance == 1 for change in changes),
        reduced_availability=not added and agree,
        a_complete=a.is_complete,
    )
    logger.debug(f"diff: {len(changes)} changed agents, +{len(added)}/-{len(removed)} edges")
    return report
