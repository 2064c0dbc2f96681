"""
Build the instance pairs of the hardness reductions and write them as a family file.
Usage:
    popmatch reduce sat --cnf FILE
    popmatch reduce fefv --instance FILE --edge a:b --vertex d
    popmatch reduce two-forbidden --instance FILE --edges e1 e2
"""

import argparse

from api.serializers import GadgetPairSerializer
from popmatch.formats import parse_edge, serialize_family
from popmatch.management.base import PopmatchCommand
from popmatch.reductions import read_dimacs, reduce_forbidden_edge_force_vert, reduce_sat, reduce_two_forbidden


class Command(PopmatchCommand):
    help = "Construct a reduction's instance pair from a formula or a source instance"

    def add_arguments(self, parser):
        reductions = parser.add_subparsers(dest="reduction", required=True)

        sat = reductions.add_parser("sat", help="Monotone 3-SAT to a pair differing at two firms")
        sat.add_argument("--cnf", required=True, help="DIMACS CNF file of a monotone 3-CNF formula")

        fefv = reductions.add_parser("fefv", help="Forbidden edge and forced vertex to a pair differing by two swaps")
        fefv.add_argument("--instance", required=True, help="Source instance file")
        fefv.add_argument("--edge", required=True, help="Forbidden edge as a:b")
        fefv.add_argument("--vertex", required=True, help="Label of the forced vertex")

        forbidden = reductions.add_parser("two-forbidden", help="Two forbidden edges to a reduced-availability pair")
        forbidden.add_argument("--instance", required=True, help="Source instance file")
        forbidden.add_argument("--edges", required=True, nargs=2, metavar="EDGE", help="Two disjoint edges as w:f")

        for subparser in (sat, fefv, forbidden):
            subparser.add_argument("--json", action="store_true", default=argparse.SUPPRESS, help="Write a JSON summary")

    def handle(self, *args, **options):
        reduction = options["reduction"]
        if reduction == "sat":
            pair = reduce_sat(read_dimacs(options["cnf"]))
        elif reduction == "fefv":
            source = self.read_instance(options["instance"])
            edge = parse_edge(options["edge"], source)
            pair = reduce_forbidden_edge_force_vert(source, edge, source.agent(options["vertex"]))
        else:
            source = self.read_instance(options["instance"])
            first, second = (parse_edge(spec, source) for spec in options["edges"])
            pair = reduce_two_forbidden(source, first, second)

        if options["json"]:
            self.write_json(GadgetPairSerializer(pair).data)
            return
        self.stdout.write(serialize_family(pair.family), ending="")
