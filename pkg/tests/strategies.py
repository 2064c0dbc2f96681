"""Hypothesis strategies for instances, matchings and families."""

from hypothesis import strategies as st

from popmatch.core import FamilyRelation, Instance, InstanceFamily, iter_matchings
from popmatch.reductions.cnf import CnfFormula


def labels(prefix, count):
    return tuple(f"{prefix}{i + 1}" for i in range(count))


def build(n_workers, n_firms, edges, draw):
    worker_prefs = tuple(
        tuple(draw(st.permutations(sorted(f for w2, f in edges if w2 == w)))) for w in range(n_workers)
    )
    firm_prefs = tuple(tuple(draw(st.permutations(sorted(w for w, f2 in edges if f2 == f)))) for f in range(n_firms))
    return Instance(labels("w", n_workers), labels("f", n_firms), worker_prefs, firm_prefs)


@st.composite
def instances(draw, max_side=4, min_side=0, complete=False):
    n_workers = draw(st.integers(min_side, max_side))
    n_firms = draw(st.integers(min_side, max_side))
    pairs = [(w, f) for w in range(n_workers) for f in range(n_firms)]
    if complete or not pairs:
        edges = set(pairs)
    else:
        edges = draw(st.sets(st.sampled_from(pairs)))
    return build(n_workers, n_firms, edges, draw)


@st.composite
def instance_with_matching(draw, max_side=4):
    instance = draw(instances(max_side=max_side))
    matching = draw(st.sampled_from(list(iter_matchings(instance))))
    return instance, matching


@st.composite
def perturbed_pairs(draw, max_side=4, complete=False):
    """Two instances over one graph where at most one agent reorders its list."""
    first = draw(instances(max_side=max_side, complete=complete))
    candidates = [agent for agent in first.agents if len(first.order(agent)) >= 2]
    if not candidates:
        return InstanceFamily((first, first), FamilyRelation.SAME_GRAPH, ("A", "B"))
    agent = draw(st.sampled_from(candidates))
    order = draw(st.permutations(first.order(agent)))
    return InstanceFamily.infer([first, first.with_order(agent, order)], ["A", "B"])


@st.composite
def availability_families(draw, max_side=4):
    """A complete first instance and a second one that loses some of its edges."""
    first = draw(instances(max_side=max_side, min_side=1, complete=True))
    removed = draw(st.sets(st.sampled_from(first.edges)))
    return InstanceFamily.infer([first, first.without_edges(removed)], ["A", "B"])


@st.composite
def forbidden_edge_sources(draw, max_side=3):
    """
    Sources for the two-swap reduction: w1 knows only f1, f1 knows w1 and w2 and
    ranks w2 first, w2 ranks f1 first. Returns (source, edge, forced vertex).
    """
    n_workers = draw(st.integers(2, max_side))
    n_firms = draw(st.integers(2, max_side))
    rest = [(w, f) for w in range(1, n_workers) for f in range(1, n_firms)]
    extra = draw(st.sets(st.sampled_from(rest))) if rest else set()

    worker_prefs = [(0,)]
    for w in range(1, n_workers):
        others = tuple(draw(st.permutations(sorted(f for w2, f in extra if w2 == w))))
        worker_prefs.append((0, *others) if w == 1 else others)
    firm_prefs = [(1, 0)]
    for f in range(1, n_firms):
        firm_prefs.append(tuple(draw(st.permutations(sorted(w for w, f2 in extra if f2 == f)))))
    source = Instance(labels("w", n_workers), labels("f", n_firms), tuple(worker_prefs), tuple(firm_prefs))
    vertex = draw(st.sampled_from(source.agents[1:]))
    return source, (0, 0), vertex


@st.composite
def monotone_formulas(draw, max_clauses=2, max_vars=4):
    n_vars = draw(st.integers(1, max_vars))
    n_clauses = draw(st.integers(1, max_clauses))
    clauses = []
    for _ in range(n_clauses):
        sign = draw(st.sampled_from((1, -1)))
        clauses.append(tuple(sign * draw(st.integers(1, n_vars)) for _ in range(3)))
    return CnfFormula.of(clauses, n_vars)
