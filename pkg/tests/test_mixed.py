from fractions import Fraction

from django.test import SimpleTestCase
from hypothesis import given

from popmatch.core import InstanceFamily, Matching, iter_matchings
from popmatch.mixed import (
    FractionalMatching,
    degree_constraints,
    fractional_margin,
    integral_point_exists,
    joint_polytope_feasible,
    popularity_polytope_contains,
)
from popmatch.oracle import popular_set, robust_set
from popmatch.samples import load_family, load_instance
from popmatch.solve import NotCompleteError, gale_shapley
from popmatch.verify import popularity_margin
from tests.strategies import instance_with_matching, instances, perturbed_pairs


class FractionalMatchingTests(SimpleTestCase):
    def test_negative_weights_rejected(self):
        with self.assertRaises(ValueError):
            FractionalMatching({(0, 0): Fraction(-1)})

    def test_uniform_needs_complete_instance(self):
        with self.assertRaises(NotCompleteError):
            FractionalMatching.uniform(load_instance("single_swap.pm", "A"))

    def test_matching_points(self):
        matching = Matching.of([(0, 0), (1, 1)])
        point = FractionalMatching.from_matching(matching)
        self.assertTrue(point.is_integral)
        self.assertEqual(point.as_matching(), matching)
        self.assertEqual(point((0, 1)), 0)

    def test_uniform_point(self):
        instance = load_instance("fractional_only.pm", "A")
        point = FractionalMatching.uniform(instance)
        self.assertFalse(point.is_integral)
        self.assertIsNone(point.as_matching())
        for agent in instance.agents:
            self.assertEqual(point.degree(agent), 1)


class MarginTests(SimpleTestCase):
    def test_uniform_point_ties_every_perfect_matching(self):
        instance = load_instance("fractional_only.pm", "A")
        point = FractionalMatching.uniform(instance)
        for matching in iter_matchings(instance, min_size=3):
            self.assertEqual(fractional_margin(instance, point, matching), 0)

    @given(instance_with_matching())
    def test_integral_points_give_popularity_margins(self, drawn):
        instance, matching = drawn
        stable = gale_shapley(instance)
        point = FractionalMatching.from_matching(matching)
        self.assertEqual(fractional_margin(instance, point, stable), popularity_margin(instance, matching, stable))


class PolytopeTests(SimpleTestCase):
    def setUp(self):
        self.family = load_family("fractional_only.pm")

    def test_uniform_point_in_both_polytopes(self):
        for instance in self.family.instances:
            self.assertTrue(popularity_polytope_contains(instance, FractionalMatching.uniform(instance)))

    def test_needs_complete_instance(self):
        with self.assertRaises(NotCompleteError):
            popularity_polytope_contains(load_instance("single_swap.pm", "A"), FractionalMatching({}))

    def test_degree_constraints_of_unbalanced_instance(self):
        instance = load_instance("fast_path.pm", "A")
        equalities, inequalities = degree_constraints(instance)
        self.assertEqual(len(equalities), 2)
        self.assertEqual(len(inequalities), 3)

    def test_joint_point_without_integral_point(self):
        point = joint_polytope_feasible(self.family)
        self.assertIsNotNone(point)
        self.assertIsNone(point.as_matching())
        for instance in self.family.instances:
            self.assertTrue(popularity_polytope_contains(instance, point))
        self.assertIsNone(integral_point_exists(self.family))

    def test_single_instance_integral_point(self):
        first = self.family.first
        self.assertEqual(integral_point_exists(InstanceFamily((first,))), Matching.of([(0, 0), (1, 1), (2, 2)]))

    def test_family_must_be_complete(self):
        with self.assertRaises(NotCompleteError):
            joint_polytope_feasible(load_family("single_swap.pm"))

    @given(instances(max_side=3, min_side=1, complete=True))
    def test_integral_points_are_popular_matchings(self, instance):
        popular = popular_set(instance)
        for matching in iter_matchings(instance):
            point = FractionalMatching.from_matching(matching)
            self.assertEqual(popularity_polytope_contains(instance, point), matching in popular)

    @given(perturbed_pairs(max_side=3, complete=True))
    def test_integral_point_is_a_robust_matching(self, family):
        found = integral_point_exists(family)
        expected = robust_set(family)
        if found is None:
            self.assertEqual(expected, frozenset())
        else:
            self.assertIn(found, expected)
            self.assertIsNotNone(joint_polytope_feasible(family))
