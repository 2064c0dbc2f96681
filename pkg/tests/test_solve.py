from fractions import Fraction

from django.test import SimpleTestCase, override_settings
from hypothesis import given
from hypothesis import strategies as st

from popmatch.core import InstanceError, MatchingError
from popmatch.oracle import dominant_set, popular_set, stable_set
from popmatch.samples import load_instance, load_matching
from popmatch.solve import (
    CertifiedSearchSolver,
    NotCompleteError,
    UnknownSolverError,
    WeightFunction,
    dominant_edge,
    dominant_matching,
    gale_shapley,
    get_edge_solver,
    max_weight_popular,
    popular_edge,
    popular_matchings,
)
from popmatch.verify import InstanceTooLargeError, is_dominant, is_popular
from tests.strategies import instances


class GaleShapleyTests(SimpleTestCase):
    def test_single_swap(self):
        a, b = load_instance("single_swap.pm", "A"), load_instance("single_swap.pm", "B")
        self.assertEqual(gale_shapley(a), load_matching("single_swap_m1.match", a))
        self.assertEqual(gale_shapley(b), load_matching("single_swap_m2.match", b))

    def test_size_gap(self):
        a, b = load_instance("size_gap.pm", "A"), load_instance("size_gap.pm", "B")
        m1 = load_matching("size_gap_m1.match", a)
        self.assertEqual(gale_shapley(a), m1)
        self.assertEqual(gale_shapley(b), m1)

    @given(instances())
    def test_result_is_a_stable_matching(self, instance):
        self.assertIn(gale_shapley(instance), stable_set(instance))


class DominantMatchingTests(SimpleTestCase):
    def test_size_gap(self):
        a = load_instance("size_gap.pm", "A")
        self.assertEqual(dominant_matching(a), load_matching("size_gap_m2.match", a))

    def test_single_swap(self):
        a = load_instance("single_swap.pm", "A")
        self.assertEqual(dominant_matching(a), load_matching("single_swap_m1.match", a))

    @given(instances())
    def test_result_is_dominant(self, instance):
        matching = dominant_matching(instance)
        self.assertTrue(is_dominant(instance, matching))
        self.assertIn(matching, dominant_set(instance))

    @given(instances())
    def test_result_has_maximum_popular_size(self, instance):
        largest = max(len(m) for m in popular_set(instance))
        self.assertEqual(len(dominant_matching(instance)), largest)


class EdgeQueryTests(SimpleTestCase):
    def test_popular_edge(self):
        a, b = load_instance("single_swap.pm", "A"), load_instance("single_swap.pm", "B")
        self.assertEqual(popular_edge(a, (0, 2)), load_matching("single_swap_m2.match", a))
        self.assertIsNone(popular_edge(b, (0, 0)))

    def test_dominant_edge(self):
        a = load_instance("single_swap.pm", "A")
        self.assertEqual(dominant_edge(a, (0, 0)), load_matching("single_swap_m1.match", a))
        self.assertIsNone(dominant_edge(load_instance("size_gap.pm", "B"), (2, 2)))

    def test_non_edge(self):
        with self.assertRaises(MatchingError):
            popular_edge(load_instance("single_swap.pm", "A"), (1, 1))

    def test_bound(self):
        with self.assertRaises(InstanceTooLargeError):
            popular_edge(load_instance("single_swap.pm", "A"), (0, 0), bound=3)

    @override_settings(POPMATCH_EDGE_SOLVER="lp")
    def test_unknown_solver(self):
        with self.assertRaises(UnknownSolverError):
            get_edge_solver()

    def test_default_solver(self):
        self.assertIsInstance(get_edge_solver(), CertifiedSearchSolver)

    @given(instances(max_side=3), st.data())
    def test_popular_edge_matches_oracle(self, instance, data):
        if not instance.edges:
            return
        edge = data.draw(st.sampled_from(instance.edges))
        found = popular_edge(instance, edge)
        expected = any(edge in m for m in popular_set(instance))
        self.assertEqual(found is not None, expected)
        if found is not None:
            self.assertIn(edge, found)
            self.assertTrue(is_popular(instance, found))

    @given(instances(max_side=3), st.data())
    def test_dominant_edge_matches_oracle(self, instance, data):
        if not instance.edges:
            return
        edge = data.draw(st.sampled_from(instance.edges))
        found = dominant_edge(instance, edge)
        expected = any(edge in m for m in dominant_set(instance))
        self.assertEqual(found is not None, expected)
        if found is not None:
            self.assertIn(edge, found)
            self.assertTrue(is_dominant(instance, found))

    @given(instances(max_side=3))
    def test_popular_matchings_stream_the_popular_set(self, instance):
        streamed = list(popular_matchings(instance))
        self.assertEqual(len(streamed), len(set(streamed)))
        self.assertEqual(set(streamed), popular_set(instance))


class MaxWeightTests(SimpleTestCase):
    def setUp(self):
        self.a = load_instance("fractional_only.pm", "A")

    def test_needs_complete_instance(self):
        instance = load_instance("single_swap.pm", "A")
        with self.assertRaises(NotCompleteError):
            max_weight_popular(instance, WeightFunction.constant(instance))

    def test_weights_must_cover_edges(self):
        with self.assertRaises(InstanceError):
            WeightFunction.for_instance(self.a, {(0, 0): 1})

    def test_picks_heaviest_popular_matching(self):
        weights = {edge: 0 for edge in self.a.edges}
        weights[(0, 1)] = 5
        matching, weight = max_weight_popular(self.a, WeightFunction.for_instance(self.a, weights))
        self.assertIn((0, 1), matching)
        self.assertEqual(weight, Fraction(5))

    @given(instances(max_side=3, min_side=1, complete=True), st.data())
    def test_weight_is_the_oracle_maximum(self, instance, data):
        raw = {edge: data.draw(st.integers(-3, 3)) for edge in instance.edges}
        weights = WeightFunction.for_instance(instance, raw)
        matching, weight = max_weight_popular(instance, weights)
        self.assertIn(matching, popular_set(instance))
        self.assertEqual(weight, max(weights.of(m) for m in popular_set(instance)))
