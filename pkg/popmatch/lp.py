"""
Exact rational feasibility for small linear programs.

Phase one of the simplex method on a dense tableau of ``Fraction`` entries, with
Bland's rule for both the entering and the leaving variable so the search cannot
cycle. All variables are nonnegative. Constraints are either equalities or
``<=`` inequalities; slacks turn the latter into equalities, rows with a
negative right-hand side are negated, and one artificial variable per row gives
the starting basis. The system is feasible iff the artificial sum can be driven
to zero.

Usage:
    problem = FeasibilityProblem(2)
    problem.add_equality([1, 1], 1)
    problem.add_inequality([1, -1], 0)
    point = problem.solve()   # [0, 1] or another feasible point, or None
"""

import logging
from collections.abc import Sequence
from fractions import Fraction

logger = logging.getLogger(__name__)

Number = Fraction | int


class FeasibilityProblem:
    """A system ``A_eq x = b_eq``, ``A_le x <= b_le``, ``x >= 0`` over the rationals."""

    def __init__(self, num_vars: int) -> None:
        self.num_vars = num_vars
        self.equalities: list[tuple[list[Fraction], Fraction]] = []
        self.inequalities: list[tuple[list[Fraction], Fraction]] = []

    def _row(self, coefficients: Sequence[Number], rhs: Number) -> tuple[list[Fraction], Fraction]:
        if len(coefficients) != self.num_vars:
            msg = f"Constraint has {len(coefficients)} coefficients, expected {self.num_vars}"
            raise ValueError(msg)
        return [Fraction(c) for c in coefficients], Fraction(rhs)

    def add_equality(self, coefficients: Sequence[Number], rhs: Number) -> None:
        self.equalities.append(self._row(coefficients, rhs))

    def add_inequality(self, coefficients: Sequence[Number], rhs: Number) -> None:
        self.inequalities.append(self._row(coefficients, rhs))

    def solve(self) -> list[Fraction] | None:
        """Return a feasible point, or None if the system is infeasible."""
        return _Tableau(self).phase_one()


class _Tableau:
    def __init__(self, problem: FeasibilityProblem) -> None:
        n = problem.num_vars
        n_slack = len(problem.inequalities)
        rows = [(coeffs, rhs, None) for coeffs, rhs in problem.equalities]
        rows += [(coeffs, rhs, k) for k, (coeffs, rhs) in enumerate(problem.inequalities)]
        self.m = len(rows)
        self.n_real = n
        self.first_artificial = n + n_slack
        self.width = n + n_slack + self.m

        self.A: list[list[Fraction]] = []
        self.b: list[Fraction] = []
        for i, (coeffs, rhs, slack) in enumerate(rows):
            row = [Fraction(0)] * self.width
            row[:n] = coeffs
            if slack is not None:
                row[n + slack] = Fraction(1)
            if rhs < 0:
                row = [-v for v in row]
                rhs = -rhs
            row[self.first_artificial + i] = Fraction(1)
            self.A.append(row)
            self.b.append(rhs)
        self.basis = [self.first_artificial + i for i in range(self.m)]
        # reduced costs of "minimize the artificial sum"
        self.cost = [
            Fraction(0) if j >= self.first_artificial else -sum((row[j] for row in self.A), Fraction(0))
            for j in range(self.width)
        ]

    def pivot(self, r: int, j: int) -> None:
        piv = self.A[r][j]
        self.A[r] = [v / piv for v in self.A[r]]
        self.b[r] /= piv
        pivot_row = self.A[r]
        for k in range(self.m):
            factor = self.A[k][j]
            if k != r and factor:
                self.A[k] = [v - factor * p for v, p in zip(self.A[k], pivot_row, strict=True)]
                self.b[k] -= factor * self.b[r]
        factor = self.cost[j]
        if factor:
            self.cost = [v - factor * p for v, p in zip(self.cost, pivot_row, strict=True)]
        self.basis[r] = j

    def step(self) -> bool:
        entering = next((j for j in range(self.width) if self.cost[j] < 0), None)
        if entering is None:
            return False
        candidates = [(self.b[i] / self.A[i][entering], self.basis[i], i) for i in range(self.m) if self.A[i][entering] > 0]
        # the artificial sum is bounded below by zero, so some row always qualifies
        _, _, leaving = min(candidates)
        self.pivot(leaving, entering)
        return True

    def phase_one(self) -> list[Fraction] | None:
        pivots = 0
        while self.step():
            pivots += 1
        residual = sum((self.b[i] for i in range(self.m) if self.basis[i] >= self.first_artificial), Fraction(0))
        logger.debug(f"Phase one finished after {pivots} pivots, residual {residual}")
        if residual != 0:
            return None
        point = [Fraction(0)] * self.n_real
        for i, var in enumerate(self.basis):
            if var < self.n_real:
                point[var] = self.b[i]
        return point


def find_feasible_point(
    num_vars: int,
    equalities: Sequence[tuple[Sequence[Number], Number]] = (),
    inequalities: Sequence[tuple[Sequence[Number], Number]] = (),
) -> list[Fraction] | None:
    """
    Find a nonnegative rational point satisfying every constraint.

    Args:
        num_vars: Number of variables
        equalities: ``(coefficients, rhs)`` rows meaning ``coefficients . x == rhs``
        inequalities: ``(coefficients, rhs)`` rows meaning ``coefficients . x <= rhs``

    Returns:
        A feasible point, or None if there is none
    """
    problem = FeasibilityProblem(num_vars)
    for coefficients, rhs in equalities:
        problem.add_equality(coefficients, rhs)
    for coefficients, rhs in inequalities:
        problem.add_inequality(coefficients, rhs)
    return problem.solve()
