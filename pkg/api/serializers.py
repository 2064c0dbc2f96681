"""
JSON shapes of every ``--json`` command output.

All serializers are read-only views over popmatch values. The instance that gives
agent indices their labels is passed as ``context["instance"]``.

Usage:
    data = MatchingSerializer(matching, context={"instance": instance}).data
    JSONRenderer().render(data)
"""

from rest_framework import serializers

from popmatch.core import Edge, Instance
from popmatch.formats import format_fraction


class InstanceContextMixin:
    """Label helpers for serializers that get the instance through their context."""

    context: dict

    @property
    def instance_context(self) -> Instance:
        return self.context["instance"]

    def edge(self, edge: Edge) -> list[str]:
        instance = self.instance_context
        return [instance.workers[edge[0]], instance.firms[edge[1]]]


class MatchingSerializer(InstanceContextMixin, serializers.Serializer):
    """A matching as ``[worker, firm]`` pairs in edge order."""

    size = serializers.SerializerMethodField()
    pairs = serializers.SerializerMethodField()

    def get_size(self, obj):
        return len(obj)

    def get_pairs(self, obj):
        return [self.edge(edge) for edge in obj]


class CertificateSerializer(InstanceContextMixin, serializers.Serializer):
    violation = serializers.CharField()
    margin = serializers.IntegerField()
    edges = serializers.SerializerMethodField()
    improved = serializers.SerializerMethodField()

    def get_edges(self, obj):
        return [self.edge(edge) for edge in obj.edges]

    def get_improved(self, obj):
        return MatchingSerializer(obj.improved, context=self.context).data


class VerificationSerializer(InstanceContextMixin, serializers.Serializer):
    """Verdict of ``popmatch verify``; ``certificate`` is only filled for non-popular matchings."""

    mode = serializers.CharField()
    holds = serializers.BooleanField()
    matching = serializers.SerializerMethodField()
    certificate = serializers.SerializerMethodField()

    def get_matching(self, obj):
        return MatchingSerializer(obj["matching"], context=self.context).data

    def get_certificate(self, obj):
        certificate = obj.get("certificate")
        if certificate is None:
            return None
        return CertificateSerializer(certificate, context=self.context).data


class SolutionSerializer(InstanceContextMixin, serializers.Serializer):
    """Result of a solver: a matching or ``null``, plus an optional weight."""

    algorithm = serializers.CharField()
    found = serializers.SerializerMethodField()
    matching = serializers.SerializerMethodField()
    weight = serializers.SerializerMethodField()

    def get_found(self, obj):
        return obj["matching"] is not None

    def get_matching(self, obj):
        if obj["matching"] is None:
            return None
        return MatchingSerializer(obj["matching"], context=self.context).data

    def get_weight(self, obj):
        weight = obj.get("weight")
        return None if weight is None else format_fraction(weight)


class MatchingSetSerializer(InstanceContextMixin, serializers.Serializer):
    kind = serializers.CharField()
    count = serializers.SerializerMethodField()
    matchings = serializers.SerializerMethodField()

    def get_count(self, obj):
        return len(obj["matchings"])

    def get_matchings(self, obj):
        return [MatchingSerializer(m, context=self.context).data for m in obj["matchings"]]


class PerturbationReportSerializer(InstanceContextMixin, serializers.Serializer):
    changed = serializers.SerializerMethodField()
    swap_distance = serializers.SerializerMethodField()
    added_edges = serializers.SerializerMethodField()
    removed_edges = serializers.SerializerMethodField()
    single_agent = serializers.BooleanField()
    swaps_only = serializers.BooleanField()
    reduced_availability = serializers.BooleanField()
    a_complete = serializers.BooleanField()

    def get_changed(self, obj):
        return [self.instance_context.label(agent) for agent in obj.changed]

    def get_swap_distance(self, obj):
        # null when the agent's neighbourhood changed
        return {self.instance_context.label(change.agent): change.swap_distance for change in obj.changes}

    def get_added_edges(self, obj):
        return [self.edge(edge) for edge in obj.added_edges]

    def get_removed_edges(self, obj):
        return [self.edge(edge) for edge in obj.removed_edges]


class FractionalMatchingSerializer(InstanceContextMixin, serializers.Serializer):
    """Nonzero entries of a fractional matching with exact ``p/q`` values."""

    integral = serializers.BooleanField(source="is_integral")
    entries = serializers.SerializerMethodField()

    def get_entries(self, obj):
        entries = []
        for edge in obj.support:
            worker, firm = self.edge(edge)
            entries.append({"worker": worker, "firm": firm, "value": format_fraction(obj(edge))})
        return entries


class GadgetPairSerializer(serializers.Serializer):
    """Summary of a reduction's output; the instances themselves are written as a family file."""

    workers = serializers.SerializerMethodField()
    firms = serializers.SerializerMethodField()
    edges = serializers.SerializerMethodField()
    relation = serializers.SerializerMethodField()
    differing = serializers.SerializerMethodField()
    roles = serializers.SerializerMethodField()

    def get_workers(self, obj):
        return obj.first.n_workers

    def get_firms(self, obj):
        return obj.first.n_firms

    def get_edges(self, obj):
        return [len(instance.edges) for instance in obj.family.instances]

    def get_relation(self, obj):
        return obj.family.relation.value

    def get_differing(self, obj):
        return list(obj.differing_labels())

    def get_roles(self, obj):
        return {label: role.kind for label, role in obj.roles.items()}


class InstanceSerializer(serializers.Serializer):
    """Both sides and every preference list, most preferred first."""

    workers = serializers.ListField(child=serializers.CharField())
    firms = serializers.ListField(child=serializers.CharField())
    prefs = serializers.SerializerMethodField()

    def get_prefs(self, obj):
        return {obj.label(agent): [obj.label(other) for other in obj.prefs(agent)] for agent in obj.agents}


class FamilySerializer(serializers.Serializer):
    relation = serializers.SerializerMethodField()
    instances = serializers.SerializerMethodField()

    def get_relation(self, obj):
        return obj.relation.value

    def get_instances(self, obj):
        return [{"name": obj.name(i), **InstanceSerializer(instance).data} for i, instance in enumerate(obj.instances)]
