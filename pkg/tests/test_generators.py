from django.test import SimpleTestCase
from hypothesis import given
from hypothesis import strategies as st

from popmatch.core import FamilyRelation, diff_instances
from popmatch.generators import random_availability_family, random_instance, random_perturbed_pair

sizes = st.integers(0, 5)
seeds = st.integers(0, 2**16)


class RandomInstanceTests(SimpleTestCase):
    def test_same_seed_same_instance(self):
        self.assertEqual(random_instance(4, 3, 0.5, seed=11), random_instance(4, 3, 0.5, seed=11))

    def test_labels(self):
        instance = random_instance(2, 3)
        self.assertEqual(instance.workers, ("w1", "w2"))
        self.assertEqual(instance.firms, ("f1", "f2", "f3"))

    def test_extreme_probabilities(self):
        self.assertTrue(random_instance(3, 4, 1.0, seed=2).is_complete)
        self.assertEqual(random_instance(3, 4, 0.0, seed=2).edges, ())

    @given(sizes, seeds)
    def test_square_default(self, n, seed):
        instance = random_instance(n, seed=seed)
        self.assertEqual(instance.n_firms, n)


class PerturbedPairTests(SimpleTestCase):
    @given(sizes, sizes, seeds, st.booleans())
    def test_at_most_one_agent_changes(self, n_workers, n_firms, seed, swaps_only):
        family = random_perturbed_pair(n_workers, n_firms, 0.7, seed=seed, swaps_only=swaps_only)
        self.assertEqual(family.relation, FamilyRelation.SAME_GRAPH)
        report = diff_instances(*family.instances)
        self.assertLessEqual(len(report.changes), 1)
        if swaps_only:
            self.assertTrue(report.swaps_only)

    def test_agent_with_two_neighbours_changes(self):
        family = random_perturbed_pair(3, 3, 1.0, seed=5)
        self.assertEqual(len(family.differing_agents), 1)


class AvailabilityFamilyTests(SimpleTestCase):
    @given(st.integers(1, 4), st.integers(1, 4), seeds)
    def test_only_availability_changes(self, n, k, seed):
        family = random_availability_family(n, k, 0.4, seed=seed)
        self.assertEqual(len(family), k)
        self.assertTrue(family.first.is_complete)
        self.assertTrue(family.availability_consistent())
        for instance in family.instances[1:]:
            self.assertTrue(diff_instances(family.first, instance).reduced_availability)
        self.assertIn(family.relation, (FamilyRelation.SAME_GRAPH, FamilyRelation.ALTERED_AVAILABILITY))

    def test_deterministic(self):
        first = random_availability_family(3, 3, 0.5, seed=9)
        second = random_availability_family(3, 3, 0.5, seed=9)
        self.assertEqual(first.instances, second.instances)
