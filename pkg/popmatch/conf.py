"""
Access to popmatch settings with library-safe defaults.

The algorithms are usable without ``django.setup()``; in that case the documented
defaults apply. Inside the CLI or the test runner the values come from
``popmatch.settings`` (and therefore from ``.env``).
"""

from django.conf import settings

DEFAULTS: dict[str, int | str] = {
    "POPMATCH_ORACLE_BOUND": 8,
    "POPMATCH_SEARCH_BOUND": 12,
    "POPMATCH_STRONG_BOUND": 8,
    "POPMATCH_EDGE_SOLVER": "certified-search",
}


def get_setting(name: str) -> int | str:
    """
    Look up a popmatch setting.

    Args:
        name: Setting name, one of ``DEFAULTS``

    Returns:
        The configured value, or the default when Django is not configured
    """
    if settings.configured:
        return getattr(settings, name, DEFAULTS[name])
    return DEFAULTS[name]


def get_bound(name: str, bound: int | None = None) -> int:
    """Resolve an explicit bound, falling back to the named setting."""
    if bound is not None:
        return bound
    return int(get_setting(name))
