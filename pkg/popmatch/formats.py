"""
Line-oriented text formats for instances, families, matchings and weights.

Instance::

    workers: w1 w2 w3
    firms:   f1 f2 f3
    pref w1: f2 f1        # most preferred first; omitted agents are non-neighbours
    pref f1: w1 w3

Family: ``instance <name> { ... }`` blocks in one file (or several files in order).
Matching: one ``worker firm`` pair per line. Weights: ``worker firm value`` lines,
values as integers, decimals or ``p/q``. ``#`` starts a comment everywhere.
"""

import logging
from collections.abc import Iterable, Sequence
from fractions import Fraction
from pathlib import Path

from popmatch.core import Edge, Instance, InstanceError, InstanceFamily, Matching, MatchingError

logger = logging.getLogger(__name__)


class ParseError(InstanceError):
    """Raised on malformed input text; ``line`` is 1-based (0 when unknown)."""

    def __init__(self, message: str, line: int = 0) -> None:
        self.line = line
        super().__init__(f"line {line}: {message}" if line else message)


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    for number, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield number, line


def parse_instance(text: str, *, first_line: int = 1) -> Instance:
    """
    Parse an instance document.

    Args:
        text: Document text
        first_line: Line number of the first line of ``text`` (for error messages in families)

    Returns:
        The Instance

    Raises:
        ParseError: On syntax errors
        InstanceError: On structural violations such as asymmetric preference lists
    """
    workers: list[str] | None = None
    firms: list[str] | None = None
    prefs: dict[str, list[str]] = {}
    pref_lines: dict[str, int] = {}

    for number, line in _content_lines(text):
        number += first_line - 1
        head, sep, rest = line.partition(":")
        if not sep:
            msg = f"expected 'workers:', 'firms:' or 'pref <agent>:' but got {line!r}"
            raise ParseError(msg, number)
        head = head.strip()
        tokens = rest.split()
        if head == "workers":
            if workers is not None:
                raise ParseError("duplicate 'workers:' line", number)
            workers = tokens
        elif head == "firms":
            if firms is not None:
                raise ParseError("duplicate 'firms:' line", number)
            firms = tokens
        elif head.startswith("pref ") or head == "pref":
            owner = head[4:].strip()
            if not owner or len(owner.split()) != 1:
                raise ParseError("'pref' needs exactly one agent label", number)
            if owner in prefs:
                msg = f"duplicate preference list for {owner}"
                raise ParseError(msg, number)
            prefs[owner] = tokens
            pref_lines[owner] = number
        else:
            msg = f"unknown directive {head!r}"
            raise ParseError(msg, number)

    if workers is None or firms is None:
        raise ParseError("an instance needs both a 'workers:' and a 'firms:' line")
    known = set(workers) | set(firms)
    for owner, number in pref_lines.items():
        if owner not in known:
            msg = f"preference list for undeclared agent {owner}"
            raise ParseError(msg, number)
    return Instance.from_lists(workers, firms, prefs)


def serialize_instance(instance: Instance) -> str:
    """Canonical document: declaration lines, then one pref line per agent in AgentId order."""
    lines = [
        " ".join(["workers:", *instance.workers]),
        " ".join(["firms:", *instance.firms]),
    ]
    for agent in instance.agents:
        ranked = [instance.label(other) for other in instance.prefs(agent)]
        lines.append(" ".join([f"pref {instance.label(agent)}:", *ranked]))
    return "\n".join(lines) + "\n"


def parse_family(text: str) -> InstanceFamily:
    """
    Parse ``instance <name> { ... }`` blocks; a document without blocks is a one-instance family.

    Raises:
        ParseError: On unbalanced or malformed blocks
    """
    lines = text.splitlines()
    blocks: list[tuple[str, int, list[str]]] = []
    current: tuple[str, int, list[str]] | None = None
    saw_content_outside = False
    for number, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if current is None:
            if not line:
                continue
            if line.startswith("instance"):
                parts = line.split()
                if len(parts) != 3 or parts[0] != "instance" or parts[2] != "{":
                    raise ParseError("expected 'instance <name> {'", number)
                current = (parts[1], number + 1, [])
            else:
                saw_content_outside = True
        elif line == "}":
            blocks.append(current)
            current = None
        else:
            current[2].append(raw)
    if current is not None:
        msg = f"instance {current[0]} is not closed"
        raise ParseError(msg, len(lines))
    if not blocks:
        return InstanceFamily.infer([parse_instance(text)])
    if saw_content_outside:
        raise ParseError("content outside 'instance' blocks")
    names = [name for name, _, _ in blocks]
    if len(set(names)) != len(names):
        raise ParseError("duplicate instance names")
    instances = [parse_instance("\n".join(body), first_line=start) for _, start, body in blocks]
    return InstanceFamily.infer(instances, names)


def serialize_family(family: InstanceFamily) -> str:
    parts = []
    for position, instance in enumerate(family.instances):
        parts.append(f"instance {family.name(position)} {{\n{serialize_instance(instance)}}}\n")
    return "\n".join(parts)


def parse_matching(text: str, instance: Instance) -> Matching:
    """
    Parse ``worker firm`` lines into a matching valid for ``instance``.

    Raises:
        ParseError: On malformed lines or unknown agents
        MatchingError: If the pairs overlap or are not edges
    """
    matching = Matching()
    for number, line in _content_lines(text):
        tokens = line.split()
        if len(tokens) != 2:
            raise ParseError("expected 'worker firm'", number)
        matching = matching.add(_edge_from_labels(instance, tokens[0], tokens[1], number))
    matching.validate(instance)
    return matching


def serialize_matching(matching: Matching, instance: Instance) -> str:
    return "".join(f"{instance.workers[w]} {instance.firms[f]}\n" for w, f in matching)


def parse_edge(spec: str, instance: Instance) -> Edge:
    """Parse ``w1:f3`` (either order) into an edge of ``instance``."""
    parts = spec.split(":")
    if len(parts) != 2:
        msg = f"edge must look like 'worker:firm', got {spec!r}"
        raise ParseError(msg)
    edge = _edge_from_labels(instance, parts[0], parts[1])
    if not instance.has_edge(edge):
        msg = f"{instance.edge_label(edge)} is not an edge of the instance"
        raise MatchingError(msg)
    return edge


def _edge_from_labels(instance: Instance, first: str, second: str, line: int = 0) -> Edge:
    try:
        a, b = instance.agent(first), instance.agent(second)
        return instance.edge_between(a, b)
    except InstanceError as e:
        raise ParseError(str(e), line) from e


def parse_weights(text: str, instance: Instance) -> dict[Edge, Fraction]:
    """
    Parse ``worker firm value`` lines; every edge of ``instance`` needs exactly one value.

    Raises:
        ParseError: On malformed lines, unknown edges, duplicates or missing edges
    """
    weights: dict[Edge, Fraction] = {}
    for number, line in _content_lines(text):
        tokens = line.split()
        if len(tokens) != 3:
            raise ParseError("expected 'worker firm value'", number)
        edge = _edge_from_labels(instance, tokens[0], tokens[1], number)
        if not instance.has_edge(edge):
            msg = f"{instance.edge_label(edge)} is not an edge"
            raise ParseError(msg, number)
        if edge in weights:
            msg = f"duplicate weight for {instance.edge_label(edge)}"
            raise ParseError(msg, number)
        try:
            weights[edge] = Fraction(tokens[2])
        except (ValueError, ZeroDivisionError) as e:
            msg = f"invalid rational {tokens[2]!r}"
            raise ParseError(msg, number) from e
    missing = [instance.edge_label(edge) for edge in instance.edges if edge not in weights]
    if missing:
        msg = f"no weight for {', '.join(missing)}"
        raise ParseError(msg)
    return weights


def format_fraction(value: Fraction) -> str:
    return str(value.numerator) if value.denominator == 1 else f"{value.numerator}/{value.denominator}"


def serialize_fractional(values: dict[Edge, Fraction], instance: Instance) -> str:
    """``worker firm p/q`` lines in edge order, skipping zero entries."""
    return "".join(
        f"{instance.workers[w]} {instance.firms[f]} {format_fraction(values[(w, f)])}\n"
        for w, f in sorted(values)
        if values[(w, f)]
    )


# --- files ---------------------------------------------------------------------


def read_family(paths: Sequence[str | Path]) -> InstanceFamily:
    """
    Read one or more family files and concatenate their instances in order.

    A path may carry a ``:name`` suffix to pick one block of a multi-instance file.
    """
    instances: list[Instance] = []
    names: list[str] = []
    for spec in paths:
        family = _read_spec(str(spec))
        instances.extend(family.instances)
        names.extend(family.name(i) if family.names else Path(str(spec).split(":")[0]).stem for i in range(len(family)))
    if len(set(names)) != len(names):
        names = [f"I{i + 1}" for i in range(len(names))]
    return InstanceFamily.infer(instances, names)


def read_instance(spec: str | Path) -> Instance:
    """Read a single instance; ``file:name`` selects a block of a family file."""
    family = _read_spec(str(spec))
    if len(family) != 1:
        msg = f"{spec} holds {len(family)} instances; select one with '{spec}:<name>'"
        raise ParseError(msg)
    return family.first


def _read_spec(spec: str) -> InstanceFamily:
    path, _, block = spec.partition(":")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        msg = f"cannot read {path}: {e.strerror}"
        raise ParseError(msg) from e
    except UnicodeDecodeError as e:
        msg = f"{path} is not UTF-8 text"
        raise ParseError(msg) from e
    family = parse_family(text)
    if not block:
        return family
    if block not in family.names:
        msg = f"{path} has no instance named {block}"
        raise ParseError(msg)
    position = family.names.index(block)
    return InstanceFamily.infer([family.instances[position]], [block])
