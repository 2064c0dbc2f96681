"""
Check whether a matching is popular, dominant or strongly popular in an instance.
Usage: popmatch verify --instance FILE --matching FILE [--mode popular|dominant|strong] [--certificate]
"""

from api.serializers import VerificationSerializer
from popmatch.management.base import PopmatchCommand
from popmatch.verify import Mode, check, is_popular


class Command(PopmatchCommand):
    help = "Verify a matching; exit 0 if the property holds, 1 if it fails"

    def add_arguments(self, parser):
        parser.add_argument("--instance", required=True, help="Instance file (file:name selects a family block)")
        parser.add_argument("--matching", required=True, help="Matching file, one 'worker firm' pair per line")
        parser.add_argument("--mode", choices=Mode.values, default=Mode.POPULAR, help="Property to check (default: popular)")
        parser.add_argument("--certificate", action="store_true", help="Print an improving structure when not popular")
        parser.add_argument(
            "--definitional",
            action="store_true",
            help="Check dominance against every larger matching instead of via augmenting paths",
        )
        parser.add_argument("--bound", type=int, default=None, help="Agents-per-side bound for exhaustive checks")

    def handle(self, *args, **options):
        instance = self.read_instance(options["instance"])
        matching = self.read_matching(options["matching"], instance)
        mode = Mode(options["mode"])

        holds = check(instance, matching, mode, definitional=options["definitional"], bound=options["bound"])
        certificate = None
        if not holds and (options["certificate"] or options["json"]):
            certificate = is_popular(instance, matching).certificate
        self.exit_code = 0 if holds else 1

        if options["json"]:
            data = {"mode": mode, "holds": holds, "matching": matching, "certificate": certificate}
            self.write_json(VerificationSerializer(data, context={"instance": instance}).data)
            return

        if holds:
            self.stdout.write(self.style.SUCCESS(f"{mode.label}: yes"))
        else:
            self.stdout.write(self.style.ERROR(f"{mode.label}: no"))
        if certificate is not None and options["certificate"]:
            self.stdout.write(f"violation: {certificate.violation}")
            self.stdout.write(f"margin: {certificate.margin}")
            self.stdout.write("edges: " + " ".join(instance.edge_label(edge) for edge in certificate.edges))
            self.stdout.write("improved:")
            self.write_matching(certificate.improved, instance)
