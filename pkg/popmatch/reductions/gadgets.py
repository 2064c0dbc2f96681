"""Shared types for the hardness reductions."""

from collections.abc import Mapping
from dataclasses import dataclass, field

from popmatch.core import AgentId, Instance, InstanceFamily
from popmatch.reductions.cnf import CnfFormula


class PromiseViolationError(ValueError):
    """Raised when a source instance does not satisfy the promise a reduction relies on."""

    pass


@dataclass(frozen=True, order=True)
class GadgetRole:
    """
    Where a constructed agent comes from.

    ``kind`` is the gadget letter (``a``, ``bbar``, ``t1``, ``l_a``, ``source`` ...);
    ``clause`` and ``position`` are 1-based and only set for literal gadgets.
    """

    kind: str
    clause: int | None = None
    position: int | None = None

    @property
    def canonical_label(self) -> str:
        """The label the role gets unless it collides with a source label."""
        if self.clause is None:
            return self.kind
        return f"{self.kind}.j{self.clause}.i{self.position}"


@dataclass(frozen=True)
class GadgetPair:
    """Two instances produced by a reduction, the role of every agent label and the source formula, if any."""

    family: InstanceFamily
    roles: Mapping[str, GadgetRole] = field(default_factory=dict)
    formula: CnfFormula | None = None

    @property
    def first(self) -> Instance:
        return self.family.instances[0]

    @property
    def second(self) -> Instance:
        return self.family.instances[1]

    def agent(self, role: GadgetRole) -> AgentId:
        for label, candidate in self.roles.items():
            if candidate == role:
                return self.first.agent(label)
        msg = f"No agent has role {role.canonical_label}"
        raise KeyError(msg)

    def differing_labels(self) -> tuple[str, ...]:
        return tuple(self.first.label(agent) for agent in self.family.differing_agents)


def fresh_label(label: str, taken: set[str]) -> str:
    """``label`` with ``'`` appended until it is not in ``taken``."""
    while label in taken:
        label += "'"
    return label
