"""
Mixed popularity on complete families: joint popularity polytope and its integral points.
Usage: popmatch mixed --instances A,B --check feasible|integral
"""

from api.serializers import FractionalMatchingSerializer, SolutionSerializer
from popmatch.formats import serialize_fractional
from popmatch.management.base import PopmatchCommand
from popmatch.mixed import integral_point_exists, joint_polytope_feasible


class Command(PopmatchCommand):
    help = "Find a fractional point or an integral point common to the popularity polytopes of a family"

    def add_arguments(self, parser):
        parser.add_argument("--instances", required=True, help="Comma-separated family files of complete instances")
        parser.add_argument("--check", choices=("feasible", "integral"), default="feasible", help="What to look for")
        parser.add_argument("--bound", type=int, default=None, help="Agents-per-side bound for constraint generation")

    def handle(self, *args, **options):
        family = self.read_family(options["instances"])
        instance = family.first
        context = {"instance": instance}

        if options["check"] == "feasible":
            point = joint_polytope_feasible(family, bound=options["bound"])
            self.exit_code = 0 if point is not None else 1
            if options["json"]:
                data = {"feasible": point is not None, "point": None}
                if point is not None:
                    data["point"] = FractionalMatchingSerializer(point, context=context).data
                self.write_json(data)
            elif point is None:
                self.write_negative("INFEASIBLE")
            else:
                self.stdout.write(serialize_fractional(dict(point.weights), instance), ending="")
            return

        matching = integral_point_exists(family, bound=options["bound"])
        self.exit_code = 0 if matching is not None else 1
        if options["json"]:
            data = {"algorithm": "integral-point", "matching": matching}
            self.write_json(SolutionSerializer(data, context=context).data)
        elif matching is None:
            self.write_negative("NO INTEGRAL POINT")
        else:
            self.write_matching(matching, instance)
