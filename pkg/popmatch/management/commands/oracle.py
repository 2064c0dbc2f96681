"""
Exhaustive matching sets of small instances and families.
Usage:
    popmatch oracle --instance FILE --set popular|dominant|strong|stable
    popmatch oracle --instances A,B --robust popular|dominant|strong
"""

from api.serializers import MatchingSetSerializer
from popmatch.management.base import InputError, PopmatchCommand
from popmatch.oracle import matching_set, robust_set, stable_set
from popmatch.verify import Mode


class Command(PopmatchCommand):
    help = "Enumerate the popular, dominant, strongly popular, stable or robust set; exit 1 if it is empty"

    def add_arguments(self, parser):
        source = parser.add_mutually_exclusive_group(required=True)
        source.add_argument("--instance", help="Instance file")
        source.add_argument("--instances", help="Comma-separated family files")
        parser.add_argument("--set", choices=[*Mode.values, "stable"], help="Set to compute for --instance")
        parser.add_argument("--robust", choices=Mode.values, help="Robust set to compute for --instances")
        parser.add_argument(
            "--method",
            choices=("pairwise", "verifier"),
            default="pairwise",
            help="Popular set by pairwise margins or by the structural verifier",
        )
        parser.add_argument("--bound", type=int, default=None, help="Agents-per-side enumeration bound")

    def handle(self, *args, **options):
        bound = options["bound"]
        if options["instance"]:
            if options["robust"]:
                raise InputError("--robust needs --instances")
            instance = self.read_instance(options["instance"])
            kind = options["set"] or Mode.POPULAR
            if kind == "stable":
                members = stable_set(instance, bound=bound)
            else:
                members = matching_set(instance, Mode(kind), bound=bound, method=options["method"])
        else:
            if options["set"]:
                raise InputError("--set needs --instance")
            family = self.read_family(options["instances"])
            instance = family.first
            kind = Mode(options["robust"] or Mode.POPULAR)
            members = robust_set(family, kind, bound=bound)
            kind = f"robust-{kind}"

        matchings = sorted(members, key=lambda m: m.sort_key)
        self.exit_code = 0 if matchings else 1

        if options["json"]:
            data = {"kind": str(kind), "matchings": matchings}
            self.write_json(MatchingSetSerializer(data, context={"instance": instance}).data)
            return
        if not matchings:
            self.write_negative(f"NO {str(kind).upper()} MATCHING")
            return
        for position, matching in enumerate(matchings, start=1):
            if position > 1:
                self.stdout.write("")
            self.stdout.write(f"# {kind} {position} of {len(matchings)}, size {len(matching)}")
            self.write_matching(matching, instance)
