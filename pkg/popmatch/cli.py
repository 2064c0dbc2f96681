"""
The ``popmatch`` entry point.

Dispatches ``popmatch <command> ...`` to the management command of the same name,
so ``popmatch verify ...`` and ``python manage.py verify ...`` behave alike.
Returns 0 for a positive answer, 1 for a negative one and 2 for input or usage errors.
"""

import os
import sys
from collections.abc import Sequence

COMMANDS = {
    "verify": "check popularity, dominance or strong popularity of a matching",
    "solve": "stable, dominant, edge-constrained or maximum-weight popular matching",
    "robust": "matching popular or dominant in every instance of a family",
    "oracle": "exhaustive matching sets of small instances",
    "reduce": "instance pairs of the hardness reductions",
    "mixed": "joint popularity polytope of complete families",
    "diff": "how one instance evolves from another",
    "gen": "seeded random instances and families",
}


def usage() -> str:
    lines = ["usage: popmatch <command> [options]", "", "commands:"]
    lines += [f"  {name:<8} {summary}" for name, summary in COMMANDS.items()]
    lines += ["", "Run 'popmatch <command> --help' for the options of a command."]
    return "\n".join(lines) + "\n"


def main(argv: Sequence[str] | None = None) -> int:
    os.environ.setdefault("DJANGO_SETTINGS_MODULE", "popmatch.settings")
    import django
    from django.core.management import load_command_class

    django.setup()

    args = list(sys.argv[1:] if argv is None else argv)
    if not args:
        sys.stderr.write(usage())
        return 2
    if args[0] in ("-h", "--help", "help"):
        sys.stdout.write(usage())
        return 0
    name, rest = args[0], args[1:]
    if name not in COMMANDS:
        sys.stderr.write(f"popmatch: unknown command {name!r}\n\n{usage()}")
        return 2

    command = load_command_class("popmatch", name)
    try:
        command.run_from_argv(["popmatch", name, *rest])
    except SystemExit as e:
        if e.code is None:
            return 0
        return e.code if isinstance(e.code, int) else 2
    return 0


if __name__ == "__main__":
    sys.exit(main())
