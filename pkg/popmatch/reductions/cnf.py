"""
Monotone 3-CNF formulas and a DIMACS reader for them.

Every clause has exactly three literals and is either all positive or all
negative. Repeating a literal inside a clause is allowed, which is how shorter
clauses are padded to length three.
"""

import logging
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from pathlib import Path

logger = logging.getLogger(__name__)

Literal = int
Clause = tuple[Literal, Literal, Literal]


class CnfError(ValueError):
    """Raised on malformed DIMACS input or a formula that is not monotone 3-CNF."""

    def __init__(self, message: str, line: int = 0) -> None:
        super().__init__(f"line {line}: {message}" if line else message)
        self.line = line


@dataclass(frozen=True)
class CnfFormula:
    """
    Variables are 1..n; literal k means X_k and -k means its negation.
    """

    n_vars: int
    clauses: tuple[Clause, ...]

    def __post_init__(self) -> None:
        if not self.clauses:
            msg = "A formula needs at least one clause"
            raise CnfError(msg)
        for j, clause in enumerate(self.clauses, start=1):
            if len(clause) != 3:
                msg = f"Clause {j} has {len(clause)} literals, expected 3"
                raise CnfError(msg)
            if any(literal == 0 or abs(literal) > self.n_vars for literal in clause):
                msg = f"Clause {j} references a variable outside 1..{self.n_vars}"
                raise CnfError(msg)
            if len({literal > 0 for literal in clause}) != 1:
                msg = f"Clause {j} mixes positive and negative literals"
                raise CnfError(msg)

    @classmethod
    def of(cls, clauses: Sequence[Sequence[int]], n_vars: int | None = None) -> "CnfFormula":
        if n_vars is None:
            n_vars = max((abs(literal) for clause in clauses for literal in clause), default=0)
        return cls(n_vars, tuple(tuple(clause) for clause in clauses))  # type: ignore[misc]

    def is_positive(self, j: int) -> bool:
        """Whether clause ``j`` (0-based) is all positive."""
        return self.clauses[j][0] > 0

    def is_satisfied_by(self, assignment: Mapping[int, bool]) -> bool:
        """
        Raises:
            KeyError: If the assignment leaves a used variable undefined
        """
        return all(any(assignment[abs(literal)] == (literal > 0) for literal in clause) for clause in self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    """
    Parse a DIMACS CNF document holding a monotone 3-CNF formula.

    ``c`` lines are comments, the ``p cnf <vars> <clauses>`` header is required and
    every clause ends with 0. A clause may span lines.

    Raises:
        CnfError: On syntax errors, a count mismatch or a clause that is not monotone 3-CNF
    """
    n_vars: int | None = None
    n_clauses = 0
    clauses: list[tuple[int, ...]] = []
    pending: list[int] = []
    line_number = 0
    for line_number, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("c", "%")):
            continue
        if line.startswith("p"):
            fields = line.split()
            if len(fields) != 4 or fields[1] != "cnf":
                msg = f"bad header line {line!r}"
                raise CnfError(msg, line_number)
            try:
                n_vars, n_clauses = int(fields[2]), int(fields[3])
            except ValueError as e:
                msg = "invalid number of variables or clauses"
                raise CnfError(msg, line_number) from e
            continue
        if n_vars is None:
            raise CnfError("clause before the header", line_number)
        try:
            literals = [int(field) for field in line.split()]
        except ValueError as e:
            raise CnfError("non-integer field", line_number) from e
        for literal in literals:
            if literal == 0:
                if len(pending) != 3:
                    msg = f"clause has {len(pending)} literals, expected 3"
                    raise CnfError(msg, line_number)
                clauses.append(tuple(pending))
                pending = []
            elif abs(literal) > n_vars:
                msg = f"out-of-range literal {literal}"
                raise CnfError(msg, line_number)
            else:
                pending.append(literal)
    if pending:
        raise CnfError("last clause is not terminated by 0", line_number)
    if n_vars is None:
        raise CnfError("missing 'p cnf' header")
    if len(clauses) != n_clauses:
        msg = f"got {len(clauses)} clauses, header says {n_clauses}"
        raise CnfError(msg, line_number)
    formula = CnfFormula(n_vars, tuple(clauses))  # type: ignore[arg-type]
    logger.info(f"Read monotone formula with {n_vars} variables and {len(clauses)} clauses")
    return formula


def read_dimacs(path: str | Path) -> CnfFormula:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        msg = f"cannot read {path}: {e.strerror}"
        raise CnfError(msg) from e
    except UnicodeDecodeError as e:
        msg = f"{path} is not UTF-8 text"
        raise CnfError(msg) from e
    return parse_dimacs(text)


def serialize_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.n_vars} {len(formula.clauses)}"]
    lines += [" ".join(str(literal) for literal in clause) + " 0" for clause in formula.clauses]
    return "\n".join(lines) + "\n"
