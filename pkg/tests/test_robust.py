from django.test import SimpleTestCase
from hypothesis import given

from popmatch.core import FamilyError, Instance, InstanceFamily
from popmatch.formats import read_instance
from popmatch.oracle import matching_set, robust_set
from popmatch.robust import (
    FastPathReason,
    UnsupportedFamilyError,
    hybrid_instance,
    hybrid_order,
    naive_multi_hybrid,
    robust,
    robust_matching,
    robust_reduced_availability,
    robust_strongly_popular,
    robust_via_unpopular,
    unpopular_agents,
)
from popmatch.samples import load_family, load_matching, sample_path
from popmatch.solve import NotCompleteError
from popmatch.verify import Mode, is_popular, popularity_margin
from tests.strategies import availability_families, perturbed_pairs


def top_choice_pair():
    return Instance.from_lists(
        ["w1", "w2"],
        ["f1", "f2"],
        {"w1": ["f1", "f2"], "w2": ["f2", "f1"], "f1": ["w1", "w2"], "f2": ["w2", "w1"]},
    )


class HybridTests(SimpleTestCase):
    def setUp(self):
        self.family = load_family("single_swap.pm")
        self.a, self.b = self.family.instances

    def test_merge_orders(self):
        self.assertEqual(hybrid_order([(1, 0, 2), (1, 2, 0)], 0), (1, 2, 0))
        self.assertEqual(hybrid_order([(1, 0, 2), (1, 2, 0)], 2), (1, 0, 2))
        self.assertEqual(hybrid_order([(1, 0, 2), (1, 2, 0)], 1), (1, 0, 2))

    def test_hybrid_instances(self):
        self.assertEqual(hybrid_instance(self.family, (0, 0)).instance, self.b)
        self.assertEqual(hybrid_instance(self.family, (0, 2)).instance, self.a)
        self.assertEqual(hybrid_instance(self.family, (0, 1)).instance, self.a)

    def test_edge_must_touch_the_differing_agent(self):
        with self.assertRaises(FamilyError):
            hybrid_instance(self.family, (1, 0))

    def test_edge_must_exist(self):
        with self.assertRaises(FamilyError):
            hybrid_instance(self.family, (0, 3))

    def test_other_agent_rejected(self):
        with self.assertRaises(FamilyError):
            hybrid_instance(self.family, (1, 0), self.a.agent("w2"))


class RobustMatchingTests(SimpleTestCase):
    def test_single_swap(self):
        family = load_family("single_swap.pm")
        m2 = load_matching("single_swap_m2.match", family.first)
        self.assertEqual(robust_matching(family, Mode.POPULAR), m2)
        self.assertEqual(robust_matching(family, Mode.DOMINANT), m2)

    def test_size_gap(self):
        family = load_family("size_gap.pm")
        self.assertEqual(robust_matching(family, Mode.POPULAR), load_matching("size_gap_m1.match", family.first))
        self.assertIsNone(robust_matching(family, Mode.DOMINANT))

    def test_two_differing_agents_rejected(self):
        with self.assertRaises(UnsupportedFamilyError):
            robust_matching(load_family("two_swaps.pm"))

    def test_strong_mode_is_not_a_hybrid_mode(self):
        with self.assertRaises(ValueError):
            robust_matching(load_family("single_swap.pm"), Mode.STRONG)

    def test_needs_one_graph(self):
        first = top_choice_pair()
        family = InstanceFamily.infer([first, first.without_edges([(0, 0)])])
        with self.assertRaises(FamilyError):
            robust_matching(family)

    @given(perturbed_pairs(max_side=3))
    def test_popular_matches_oracle(self, family):
        found = robust_matching(family, Mode.POPULAR)
        expected = robust_set(family, Mode.POPULAR)
        if found is None:
            self.assertEqual(expected, frozenset())
        else:
            self.assertIn(found, expected)

    @given(perturbed_pairs(max_side=3))
    def test_dominant_matches_oracle(self, family):
        found = robust_matching(family, Mode.DOMINANT)
        expected = robust_set(family, Mode.DOMINANT)
        if found is None:
            self.assertEqual(expected, frozenset())
        else:
            self.assertIn(found, expected)

    @given(perturbed_pairs(max_side=3))
    def test_hybrid_sets_match_robust_sets_at_each_edge(self, family):
        if not family.differing_agents:
            return
        (agent,) = family.differing_agents
        first = family.first
        for mode in (Mode.POPULAR, Mode.DOMINANT):
            robust_members = robust_set(family, mode)
            for partner in first.order(agent):
                edge = (agent.index, partner) if agent.is_worker else (partner, agent.index)
                hybrid = hybrid_instance(family, edge).instance
                in_hybrid = {m for m in matching_set(hybrid, mode) if edge in m}
                self.assertEqual(in_hybrid, {m for m in robust_members if edge in m})


class NaiveMultiHybridTests(SimpleTestCase):
    def test_counterexample(self):
        family = load_family("two_swaps.pm")
        a, b = family.instances
        m = load_matching("two_swaps_m.match", a)
        self.assertTrue(is_popular(a, m))
        self.assertTrue(is_popular(b, m))

        hybrid = naive_multi_hybrid(family, [(0, 0), (1, 3)], [a.agent("w1"), a.agent("w2")])
        self.assertEqual(hybrid, read_instance(sample_path("two_swaps_hybrid.pm")))
        challenger = load_matching("two_swaps_challenger.match", hybrid)
        self.assertEqual(popularity_margin(hybrid, challenger, m), 2)
        self.assertFalse(is_popular(hybrid, m))


class UnpopularAgentTests(SimpleTestCase):
    def test_size_gap(self):
        family = load_family("size_gap.pm")
        a, b = family.instances
        self.assertEqual(unpopular_agents(b), {b.agent("w3"), b.agent("f2")})
        self.assertEqual(unpopular_agents(a), frozenset())
        self.assertEqual(robust_via_unpopular(family).reason, FastPathReason.INAPPLICABLE)

    def test_fast_path(self):
        family = load_family("fast_path.pm")
        a = family.first
        self.assertEqual(unpopular_agents(a), {a.agent("w3")})
        outcome = robust_via_unpopular(family)
        self.assertEqual(outcome.reason, FastPathReason.ROBUST)
        self.assertEqual(outcome.matching.pairs, {(0, 0), (1, 1)})
        self.assertEqual(robust(family), outcome.matching)

    @given(perturbed_pairs(max_side=3))
    def test_robust_outcomes_are_robust(self, family):
        outcome = robust_via_unpopular(family)
        if outcome.reason == FastPathReason.ROBUST:
            self.assertIn(outcome.matching, robust_set(family))


class ReducedAvailabilityTests(SimpleTestCase):
    def test_losing_the_only_edge(self):
        first = Instance.from_lists(["w1"], ["f1"], {"w1": ["f1"], "f1": ["w1"]})
        family = InstanceFamily.infer([first, first.without_edges([(0, 0)])])
        self.assertIsNone(robust_reduced_availability(family))
        self.assertIsNone(robust(family))

    def test_losing_every_top_choice(self):
        first = top_choice_pair()
        family = InstanceFamily.infer([first, first.without_edges([(0, 0), (1, 1)])])
        self.assertIsNone(robust_reduced_availability(family))

    def test_identical_instances(self):
        first = top_choice_pair()
        matching = robust_reduced_availability(InstanceFamily.infer([first, first]))
        self.assertEqual(matching.pairs, {(0, 0), (1, 1)})

    def test_needs_complete_first_instance(self):
        first = top_choice_pair().without_edges([(0, 1)])
        with self.assertRaises(NotCompleteError):
            robust_reduced_availability(InstanceFamily.infer([first, first]))

    def test_needs_consistent_preferences(self):
        first = top_choice_pair()
        second = first.with_order(first.agent("w1"), (1, 0))
        with self.assertRaises(FamilyError):
            robust_reduced_availability(InstanceFamily.infer([first, second]))

    @given(availability_families(max_side=3))
    def test_matches_oracle(self, family):
        found = robust_reduced_availability(family)
        expected = robust_set(family)
        if found is None:
            self.assertEqual(expected, frozenset())
        else:
            self.assertIn(found, expected)


class StrongTests(SimpleTestCase):
    @given(perturbed_pairs(max_side=3))
    def test_matches_oracle(self, family):
        found = robust_strongly_popular(family)
        expected = robust_set(family, Mode.STRONG)
        self.assertEqual(expected, frozenset() if found is None else {found})


class DispatchTests(SimpleTestCase):
    def test_auto_uses_hybrid_for_single_agent(self):
        family = load_family("single_swap.pm")
        self.assertEqual(robust(family), load_matching("single_swap_m2.match", family.first))

    def test_auto_on_two_swaps(self):
        with self.assertRaises(UnsupportedFamilyError):
            robust(load_family("two_swaps.pm"))

    def test_reduced_needs_popular_mode(self):
        first = top_choice_pair()
        with self.assertRaises(UnsupportedFamilyError):
            robust(InstanceFamily.infer([first, first]), Mode.DOMINANT, "reduced")

    def test_unpopular_needs_popular_mode(self):
        with self.assertRaises(UnsupportedFamilyError):
            robust(load_family("fast_path.pm"), Mode.DOMINANT, "unpopular")

    def test_unknown_strategy(self):
        with self.assertRaises(ValueError):
            robust(load_family("single_swap.pm"), strategy="guess")
