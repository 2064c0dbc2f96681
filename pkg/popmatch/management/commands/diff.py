"""
Describe how a second instance evolves from a first one, as JSON.
Usage: popmatch diff A B    (each argument is FILE or FILE:name)
"""

from api.serializers import PerturbationReportSerializer
from popmatch.core import diff_instances
from popmatch.management.base import PopmatchCommand


class Command(PopmatchCommand):
    help = "Report changed agents, swap distances, edge changes and perturbation flags"

    def add_arguments(self, parser):
        parser.add_argument("first", help="First instance (FILE or FILE:name)")
        parser.add_argument("second", help="Second instance (FILE or FILE:name)")

    def handle(self, *args, **options):
        first = self.read_instance(options["first"])
        second = self.read_instance(options["second"])
        report = diff_instances(first, second)
        # the report is structured data, so it is JSON with or without --json
        self.write_json(PerturbationReportSerializer(report, context={"instance": first}).data)
