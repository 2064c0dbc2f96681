"""
Run a single-instance solver and print the matching it finds.
Usage:
    popmatch solve --instance FILE --algo stable|dominant|popular-edge|dominant-edge|max-weight
        [--edge w1:f3] [--weights FILE]
"""

import logging

from api.serializers import SolutionSerializer
from popmatch.formats import format_fraction, parse_edge, parse_weights
from popmatch.management.base import InputError, PopmatchCommand
from popmatch.solve import WeightFunction, dominant_edge, dominant_matching, gale_shapley, max_weight_popular, popular_edge

logger = logging.getLogger(__name__)

ALGORITHMS = ("stable", "dominant", "popular-edge", "dominant-edge", "max-weight")


class Command(PopmatchCommand):
    help = "Compute a stable, dominant, edge-constrained or maximum-weight popular matching"

    def add_arguments(self, parser):
        parser.add_argument("--instance", required=True, help="Instance file")
        parser.add_argument("--algo", required=True, choices=ALGORITHMS, help="Solver to run")
        parser.add_argument("--edge", help="Required edge as worker:firm (popular-edge, dominant-edge)")
        parser.add_argument("--weights", help="Weights file with 'worker firm value' lines (max-weight)")
        parser.add_argument("--bound", type=int, default=None, help="Agents-per-side bound for the certified search")

    def handle(self, *args, **options):
        instance = self.read_instance(options["instance"])
        algo = options["algo"]
        weight = None

        if algo == "stable":
            matching = gale_shapley(instance)
        elif algo == "dominant":
            matching = dominant_matching(instance)
        elif algo in ("popular-edge", "dominant-edge"):
            if not options["edge"]:
                msg = f"--edge is required for {algo}"
                raise InputError(msg)
            edge = parse_edge(options["edge"], instance)
            query = popular_edge if algo == "popular-edge" else dominant_edge
            matching = query(instance, edge, bound=options["bound"])
        else:
            if not options["weights"]:
                raise InputError("--weights is required for max-weight")
            weights = WeightFunction.for_instance(instance, parse_weights(self.read_text(options["weights"]), instance))
            matching, weight = max_weight_popular(instance, weights, bound=options["bound"])

        if matching is None:
            self.exit_code = 1
        logger.info(f"{algo}: {'no matching' if matching is None else f'matching of size {len(matching)}'}")

        if options["json"]:
            data = {"algorithm": algo, "matching": matching, "weight": weight}
            self.write_json(SolutionSerializer(data, context={"instance": instance}).data)
            return
        if matching is None:
            self.write_negative("NO MATCHING")
            return
        if weight is not None:
            self.stdout.write(f"# weight {format_fraction(weight)}")
        self.write_matching(matching, instance)
