"""
Generate seeded random instances and families.
Usage: popmatch gen --workers N [--firms M] [-p 0.7] [--seed 3] [--kind instance|perturbed|availability]
"""

from api.serializers import FamilySerializer, InstanceSerializer
from popmatch.formats import serialize_family, serialize_instance
from popmatch.generators import random_availability_family, random_instance, random_perturbed_pair
from popmatch.management.base import InputError, PopmatchCommand

KINDS = ("instance", "perturbed", "availability")


class Command(PopmatchCommand):
    help = "Write a random instance, perturbed pair or reduced-availability family"

    def add_arguments(self, parser):
        parser.add_argument("--workers", type=int, required=True, help="Number of workers")
        parser.add_argument("--firms", type=int, default=None, help="Number of firms (default: same as workers)")
        parser.add_argument("-p", type=float, default=1.0, dest="p", help="Edge probability (default: 1.0)")
        parser.add_argument("--seed", type=int, default=0, help="Random seed (default: 0)")
        parser.add_argument("--kind", choices=KINDS, default="instance", help="What to generate")
        parser.add_argument("--swaps-only", action="store_true", help="Perturb by a single adjacent swap")
        parser.add_argument("--count", type=int, default=2, help="Instances in an availability family")
        parser.add_argument("--drop", type=float, default=0.3, help="Edge drop probability for availability families")

    def handle(self, *args, **options):
        workers, firms = options["workers"], options["firms"]
        if workers < 0 or (firms is not None and firms < 0):
            raise InputError("Agent counts must be nonnegative")
        for name in ("p", "drop"):
            if not 0.0 <= options[name] <= 1.0:
                msg = f"{name} must lie in [0, 1]"
                raise InputError(msg)
        seed = options["seed"]

        if options["kind"] == "instance":
            instance = random_instance(workers, firms, options["p"], seed=seed)
            if options["json"]:
                self.write_json(InstanceSerializer(instance).data)
            else:
                self.stdout.write(serialize_instance(instance), ending="")
            return
        if options["kind"] == "perturbed":
            family = random_perturbed_pair(workers, firms, options["p"], seed=seed, swaps_only=options["swaps_only"])
        else:
            if firms is not None and firms != workers:
                raise InputError("Availability families are square; omit --firms")
            if options["count"] < 1:
                raise InputError("--count must be at least 1")
            family = random_availability_family(workers, options["count"], options["drop"], seed=seed)

        if options["json"]:
            self.write_json(FamilySerializer(family).data)
        else:
            self.stdout.write(serialize_family(family), ending="")
