"""
Find a matching that is popular (dominant, strongly popular) in every instance of a family.
Usage: popmatch robust --instances FILE[,FILE...] [--mode popular|dominant|strong] [--strategy auto|hybrid|unpopular|reduced]
"""

from api.serializers import SolutionSerializer
from popmatch.management.base import PopmatchCommand
from popmatch.robust import STRATEGIES, robust
from popmatch.verify import Mode


class Command(PopmatchCommand):
    help = "Compute a robust matching; prints NO ROBUST MATCHING and exits 1 when there is none"

    def add_arguments(self, parser):
        parser.add_argument("--instances", required=True, help="Comma-separated family files (file:name selects a block)")
        parser.add_argument("--mode", choices=Mode.values, default=Mode.POPULAR, help="Robust property (default: popular)")
        parser.add_argument("--strategy", choices=STRATEGIES, default="auto", help="Solver (default: auto)")
        parser.add_argument("--bound", type=int, default=None, help="Agents-per-side bound for searches")

    def handle(self, *args, **options):
        family = self.read_family(options["instances"])
        mode = Mode(options["mode"])
        matching = robust(family, mode, options["strategy"], bound=options["bound"])

        if options["json"]:
            self.exit_code = 0 if matching is not None else 1
            data = {"algorithm": f"robust-{mode}", "matching": matching}
            self.write_json(SolutionSerializer(data, context={"instance": family.first}).data)
            return
        if matching is None:
            self.write_negative("NO ROBUST MATCHING")
            return
        self.write_matching(matching, family.first)
