"""
Exhaustive ground truth for small instances.

Every matching is enumerated and the popular, dominant and strongly popular sets
are computed straight from their definitions with pairwise popularity margins.
Nothing here relies on the structural verifier, which makes these sets the
reference the polynomial code is tested against. ``method="verifier"`` is also
offered for the popular set when pairwise tables get large.

Margins are computed as a vectorized table: with R[i] the partner-rank vector of
matching i, Δ(m_i, m_j) = Σ_x sign(R[j, x] − R[i, x]).
"""

import logging
from collections.abc import Iterator
from functools import lru_cache

import numpy as np

from popmatch.conf import get_bound
from popmatch.core import Instance, InstanceFamily, Matching, iter_matchings
from popmatch.verify import Mode, is_popular, is_stable, rank_vector

logger = logging.getLogger(__name__)


class BoundExceededError(ValueError):
    """Raised when an instance exceeds the enumeration bound (agents per side)."""

    pass


def check_bound(instance: Instance, bound: int | None = None) -> int:
    limit = get_bound("POPMATCH_ORACLE_BOUND", bound)
    if instance.max_side > limit:
        msg = f"Instance has {instance.max_side} agents on one side; the oracle is limited to {limit}"
        raise BoundExceededError(msg)
    return limit


def enumerate_matchings(instance: Instance, *, bound: int | None = None) -> Iterator[Matching]:
    """
    Stream every matching of ``instance`` exactly once, the empty matching included.

    Raises:
        BoundExceededError: Beyond ``POPMATCH_ORACLE_BOUND`` agents per side
    """
    check_bound(instance, bound)
    return iter_matchings(instance)


def count_matchings(instance: Instance) -> int:
    """Count matchings by dynamic programming over sets of used firms."""

    @lru_cache(maxsize=None)
    def count(w: int, used: int) -> int:
        if w == instance.n_workers:
            return 1
        total = count(w + 1, used)
        for f in instance.worker_prefs[w]:
            if not used & (1 << f):
                total += count(w + 1, used | (1 << f))
        return total

    return count(0, 0)


class MarginTable:
    """Pairwise margins between all matchings of one instance."""

    def __init__(self, instance: Instance, matchings: list[Matching]) -> None:
        self.instance = instance
        self.matchings = matchings
        self.ranks = np.array([rank_vector(instance, m) for m in matchings], dtype=np.int64).reshape(
            len(matchings), instance.n_agents
        )
        self.sizes = np.array([len(m) for m in matchings], dtype=np.int64)

    def margins(self, i: int) -> np.ndarray:
        """Δ(m_i, m_j) for every j."""
        return np.sign(self.ranks - self.ranks[i]).sum(axis=1)

    def is_popular(self, i: int) -> bool:
        return bool(self.margins(i).min() >= 0)

    def is_dominant(self, i: int) -> bool:
        margins = self.margins(i)
        if margins.min() < 0:
            return False
        larger = self.sizes > self.sizes[i]
        return bool((margins[larger] > 0).all())

    def is_strong(self, i: int) -> bool:
        margins = self.margins(i)
        others = np.arange(len(self.matchings)) != i
        return bool((margins[others] > 0).all())

    def select(self, mode: Mode) -> frozenset[Matching]:
        test = {Mode.POPULAR: self.is_popular, Mode.DOMINANT: self.is_dominant, Mode.STRONG: self.is_strong}[mode]
        return frozenset(m for i, m in enumerate(self.matchings) if test(i))


def _table(instance: Instance, bound: int | None) -> MarginTable:
    matchings = list(enumerate_matchings(instance, bound=bound))
    logger.debug(f"Oracle enumerated {len(matchings)} matchings")
    return MarginTable(instance, matchings)


def matching_set(instance: Instance, mode: Mode, *, bound: int | None = None, method: str = "pairwise") -> frozenset[Matching]:
    """
    The exact popular, dominant or strongly popular set of ``instance``.

    Args:
        instance: The instance
        mode: Which set
        bound: Overrides ``POPMATCH_ORACLE_BOUND``
        method: ``pairwise`` (definition) or ``verifier`` (popular set only, via the structural verifier)
    """
    if method == "verifier":
        if mode != Mode.POPULAR:
            msg = "The verifier method only computes popular sets"
            raise ValueError(msg)
        return frozenset(m for m in enumerate_matchings(instance, bound=bound) if is_popular(instance, m))
    if method != "pairwise":
        msg = f"Unknown oracle method {method!r}"
        raise ValueError(msg)
    return _table(instance, bound).select(mode)


def popular_set(instance: Instance, *, bound: int | None = None, method: str = "pairwise") -> frozenset[Matching]:
    return matching_set(instance, Mode.POPULAR, bound=bound, method=method)


def dominant_set(instance: Instance, *, bound: int | None = None) -> frozenset[Matching]:
    return matching_set(instance, Mode.DOMINANT, bound=bound)


def strong_set(instance: Instance, *, bound: int | None = None) -> frozenset[Matching]:
    return matching_set(instance, Mode.STRONG, bound=bound)


def stable_set(instance: Instance, *, bound: int | None = None) -> frozenset[Matching]:
    """All stable matchings, by direct blocking-edge checks."""
    return frozenset(m for m in enumerate_matchings(instance, bound=bound) if is_stable(instance, m))


def robust_set(family: InstanceFamily, mode: Mode = Mode.POPULAR, *, bound: int | None = None) -> frozenset[Matching]:
    """
    Matchings valid in every instance of ``family`` and in the ``mode`` set of each.

    Raises:
        BoundExceededError: If any instance exceeds the bound
    """
    # each per-instance set only holds matchings valid in that instance
    return frozenset.intersection(*(matching_set(instance, mode, bound=bound) for instance in family.instances))
