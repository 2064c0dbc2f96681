from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from popmatch.lp import FeasibilityProblem, find_feasible_point


def satisfies(point, equalities, inequalities):
    if any(value < 0 for value in point):
        return False
    dot = [sum(Fraction(c) * x for c, x in zip(row, point, strict=True)) for row, _ in equalities + inequalities]
    eq_ok = all(dot[i] == rhs for i, (_, rhs) in enumerate(equalities))
    le_ok = all(dot[len(equalities) + i] <= rhs for i, (_, rhs) in enumerate(inequalities))
    return eq_ok and le_ok


class FeasibilityTests(SimpleTestCase):
    def test_feasible_system(self):
        equalities = [([1, 1], 1)]
        inequalities = [([1, -1], 0)]
        point = find_feasible_point(2, equalities, inequalities)
        self.assertIsNotNone(point)
        self.assertTrue(satisfies(point, equalities, inequalities))

    def test_infeasible_system(self):
        self.assertIsNone(find_feasible_point(2, [([1, 1], 1)], [([1, 1], Fraction(1, 2))]))

    def test_no_constraints(self):
        self.assertEqual(find_feasible_point(3), [0, 0, 0])

    def test_negative_right_hand_side(self):
        inequalities = [([-1], -2), ([1], 3)]
        point = find_feasible_point(1, inequalities=inequalities)
        self.assertTrue(satisfies(point, [], inequalities))

    def test_nonnegativity_is_implicit(self):
        self.assertIsNone(find_feasible_point(1, [([1], -1)]))

    def test_coefficient_count_checked(self):
        problem = FeasibilityProblem(2)
        with self.assertRaises(ValueError):
            problem.add_equality([1], 1)

    def test_exact_rational_point(self):
        point = find_feasible_point(1, [([3], 1)])
        self.assertEqual(point, [Fraction(1, 3)])

    @given(st.data())
    def test_systems_feasible_by_construction(self, data):
        n = data.draw(st.integers(1, 4))
        witness = [Fraction(data.draw(st.integers(0, 3))) for _ in range(n)]
        coefficient_rows = st.lists(st.lists(st.integers(-3, 3), min_size=n, max_size=n), max_size=4)
        equalities = [(row, sum(c * x for c, x in zip(row, witness, strict=True))) for row in data.draw(coefficient_rows)]
        inequalities = [
            (row, sum(c * x for c, x in zip(row, witness, strict=True)) + data.draw(st.integers(0, 2)))
            for row in data.draw(coefficient_rows)
        ]
        point = find_feasible_point(n, equalities, inequalities)
        self.assertIsNotNone(point)
        self.assertTrue(satisfies(point, equalities, inequalities))
