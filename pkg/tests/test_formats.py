from fractions import Fraction
from pathlib import Path
from tempfile import TemporaryDirectory

from django.test import SimpleTestCase
from hypothesis import given

from popmatch.core import FamilyRelation, Matching, MatchingError
from popmatch.formats import (
    ParseError,
    format_fraction,
    parse_edge,
    parse_family,
    parse_instance,
    parse_matching,
    parse_weights,
    read_family,
    read_instance,
    serialize_family,
    serialize_fractional,
    serialize_instance,
    serialize_matching,
)
from popmatch.samples import load_family, load_instance, sample_path
from tests.strategies import instance_with_matching, instances, perturbed_pairs

TINY = """\
# a comment line
workers: w1 w2
firms:   f1
pref w1: f1     # only choice
pref f1: w2 w1
pref w2: f1
"""


class InstanceFormatTests(SimpleTestCase):
    def test_parse_with_comments(self):
        instance = parse_instance(TINY)
        self.assertEqual(instance.workers, ("w1", "w2"))
        self.assertEqual(instance.firm_prefs, ((1, 0),))

    def test_serialize_is_canonical(self):
        self.assertEqual(
            serialize_instance(parse_instance(TINY)),
            "workers: w1 w2\nfirms: f1\npref w1: f1\npref w2: f1\npref f1: w2 w1\n",
        )

    def test_missing_declarations(self):
        with self.assertRaises(ParseError):
            parse_instance("workers: w1\n")

    def test_unknown_directive_reports_line(self):
        with self.assertRaises(ParseError) as ctx:
            parse_instance("workers: w1\nfirms: f1\nrank w1: f1\n")
        self.assertEqual(ctx.exception.line, 3)

    def test_duplicate_pref_line(self):
        with self.assertRaises(ParseError):
            parse_instance("workers: w1\nfirms: f1\npref w1: f1\npref w1: f1\npref f1: w1\n")

    def test_undeclared_owner(self):
        with self.assertRaises(ParseError):
            parse_instance("workers: w1\nfirms: f1\npref w9: f1\n")

    @given(instances())
    def test_serialized_instances_parse_back(self, instance):
        self.assertEqual(parse_instance(serialize_instance(instance)), instance)


class FamilyFormatTests(SimpleTestCase):
    def test_blocks_keep_names(self):
        family = load_family("single_swap.pm")
        self.assertEqual(family.names, ("A", "B"))
        self.assertEqual(family.relation, FamilyRelation.SAME_GRAPH)

    def test_document_without_blocks_is_one_instance(self):
        family = parse_family(TINY)
        self.assertEqual(len(family), 1)

    def test_unclosed_block(self):
        with self.assertRaises(ParseError):
            parse_family("instance A {\nworkers: w1\nfirms: f1\n")

    def test_content_outside_blocks(self):
        with self.assertRaises(ParseError):
            parse_family("workers: w1\ninstance A {\nworkers: w1\nfirms: f1\n}\n")

    def test_duplicate_block_names(self):
        block = "instance A {\nworkers: w1\nfirms: f1\n}\n"
        with self.assertRaises(ParseError):
            parse_family(block + block)

    def test_errors_carry_file_line_numbers(self):
        with self.assertRaises(ParseError) as ctx:
            parse_family("instance A {\nworkers: w1\nfirms: f1\nbogus\n}\n")
        self.assertEqual(ctx.exception.line, 4)

    @given(perturbed_pairs())
    def test_serialized_families_parse_back(self, family):
        parsed = parse_family(serialize_family(family))
        self.assertEqual(parsed.instances, family.instances)
        self.assertEqual(parsed.names, family.names)


class FileTests(SimpleTestCase):
    def test_read_instance_selects_block(self):
        instance = read_instance(f"{sample_path('single_swap.pm')}:B")
        self.assertEqual(instance.worker_prefs[0], (1, 2, 0))

    def test_read_instance_needs_block_for_families(self):
        with self.assertRaises(ParseError):
            read_instance(sample_path("single_swap.pm"))

    def test_unknown_block(self):
        with self.assertRaises(ParseError):
            read_instance(f"{sample_path('single_swap.pm')}:C")

    def test_missing_file(self):
        with TemporaryDirectory() as tmp, self.assertRaises(ParseError):
            read_instance(Path(tmp) / "absent.pm")

    def test_non_utf8_file_is_a_parse_error(self):
        with TemporaryDirectory() as tmp:
            path = Path(tmp) / "latin1.pm"
            path.write_bytes("workers: w\xe9\n".encode("latin-1"))
            with self.assertRaises(ParseError) as ctx:
                read_instance(path)
        self.assertIn("not UTF-8", str(ctx.exception))

    def test_read_family_concatenates_files(self):
        with TemporaryDirectory() as tmp:
            first, second = Path(tmp) / "a.pm", Path(tmp) / "b.pm"
            first.write_text(serialize_instance(load_instance("single_swap.pm", "A")), encoding="utf-8")
            second.write_text(serialize_instance(load_instance("single_swap.pm", "B")), encoding="utf-8")
            family = read_family([first, second])
        self.assertEqual(family.names, ("a", "b"))
        self.assertEqual(family.relation, FamilyRelation.SAME_GRAPH)


class MatchingFormatTests(SimpleTestCase):
    def setUp(self):
        self.instance = load_instance("single_swap.pm", "A")

    def test_parse_matching(self):
        matching = parse_matching("w1 f1\nw2 f3\n", self.instance)
        self.assertEqual(matching, Matching.of([(0, 0), (1, 2)]))

    def test_pair_order_is_free(self):
        self.assertEqual(parse_matching("f1 w1\n", self.instance), Matching.of([(0, 0)]))

    def test_overlapping_pairs(self):
        with self.assertRaises(MatchingError):
            parse_matching("w1 f1\nw2 f1\n", self.instance)

    def test_non_edge(self):
        with self.assertRaises(MatchingError):
            parse_matching("w2 f2\n", self.instance)

    def test_two_workers_are_no_pair(self):
        with self.assertRaises(ParseError):
            parse_matching("w1 w2\n", self.instance)

    def test_parse_edge(self):
        self.assertEqual(parse_edge("w1:f3", self.instance), (0, 2))
        self.assertEqual(parse_edge("f3:w1", self.instance), (0, 2))
        with self.assertRaises(ParseError):
            parse_edge("w1-f3", self.instance)
        with self.assertRaises(MatchingError):
            parse_edge("w1:f4", self.instance)

    @given(instance_with_matching())
    def test_serialized_matchings_parse_back(self, drawn):
        instance, matching = drawn
        self.assertEqual(parse_matching(serialize_matching(matching, instance), instance), matching)


class WeightFormatTests(SimpleTestCase):
    def setUp(self):
        self.instance = parse_instance(TINY)

    def test_parse_weights(self):
        weights = parse_weights("w1 f1 1/2\nw2 f1 -3\n", self.instance)
        self.assertEqual(weights, {(0, 0): Fraction(1, 2), (1, 0): Fraction(-3)})

    def test_decimal_weights(self):
        self.assertEqual(parse_weights("w1 f1 0.25\nw2 f1 1\n", self.instance)[(0, 0)], Fraction(1, 4))

    def test_missing_edge(self):
        with self.assertRaises(ParseError):
            parse_weights("w1 f1 1\n", self.instance)

    def test_duplicate_edge(self):
        with self.assertRaises(ParseError):
            parse_weights("w1 f1 1\nw1 f1 2\nw2 f1 1\n", self.instance)

    def test_bad_value(self):
        with self.assertRaises(ParseError):
            parse_weights("w1 f1 x\nw2 f1 1\n", self.instance)
        with self.assertRaises(ParseError):
            parse_weights("w1 f1 1/0\nw2 f1 1\n", self.instance)

    def test_fractions(self):
        self.assertEqual(format_fraction(Fraction(3)), "3")
        self.assertEqual(format_fraction(Fraction(-2, 6)), "-1/3")
        self.assertEqual(
            serialize_fractional({(0, 0): Fraction(1, 3), (1, 0): Fraction(0)}, self.instance),
            "w1 f1 1/3\n",
        )
