"""
Shared plumbing for the popmatch management commands.

Every command writes its result to stdout, either in the text formats of
``popmatch.formats`` or, with ``--json``, as one JSON object rendered by DRF.
Exit status: 0 when the answer is yes, 1 when it is no, 2 on bad input.
"""

import logging
import sys
from collections.abc import Sequence
from pathlib import Path
from typing import Any

from django.core.management.base import BaseCommand, CommandError, CommandParser
from rest_framework.renderers import JSONRenderer

from popmatch.core import FamilyError, Instance, InstanceError, InstanceFamily, Matching, MatchingError
from popmatch.formats import parse_matching, read_family, read_instance, serialize_matching
from popmatch.oracle import BoundExceededError
from popmatch.reductions.cnf import CnfError
from popmatch.reductions.gadgets import PromiseViolationError
from popmatch.reductions.sat import UnsatisfyingAssignmentError
from popmatch.solve import UnknownSolverError
from popmatch.verify import InstanceTooLargeError

logger = logging.getLogger(__name__)

# errors caused by the input, reported with exit status 2
INPUT_ERRORS = (
    InstanceError,
    MatchingError,
    FamilyError,
    BoundExceededError,
    InstanceTooLargeError,
    CnfError,
    PromiseViolationError,
    UnsatisfyingAssignmentError,
    UnknownSolverError,
)


class InputError(CommandError):
    """Bad input or usage; the command exits with status 2."""

    def __init__(self, *args: Any, returncode: int = 2, **kwargs: Any) -> None:
        super().__init__(*args, returncode=returncode, **kwargs)


class PopmatchCommand(BaseCommand):
    """
    Base for commands that answer a yes/no question.

    ``handle`` sets ``exit_code`` to 1 for a negative answer. Domain exceptions
    become InputError so ``popmatch`` exits with status 2.
    """

    requires_system_checks: list[str] = []
    exit_code = 0

    def create_parser(self, prog_name: str, subcommand: str, **kwargs: Any) -> CommandParser:
        parser = super().create_parser(prog_name, subcommand, **kwargs)
        parser.add_argument("--json", action="store_true", help="Write a single JSON object instead of text")
        return parser

    def execute(self, *args: Any, **options: Any) -> str | None:
        self.exit_code = 0
        try:
            return super().execute(*args, **options)
        except CommandError:
            raise
        except INPUT_ERRORS as e:
            raise InputError(str(e)) from e
        except Exception as e:
            logger.error(f"{type(self).__module__.rsplit('.', 1)[-1]} failed: {e}", exc_info=True)
            msg = f"Unexpected failure: {e}"
            raise InputError(msg) from e

    def run_from_argv(self, argv: list[str]) -> None:
        super().run_from_argv(argv)
        if self.exit_code:
            sys.exit(self.exit_code)

    # --- input ---------------------------------------------------------------

    def read_text(self, path: str) -> str:
        try:
            return Path(path).read_text(encoding="utf-8")
        except OSError as e:
            msg = f"Cannot read {path}: {e.strerror}"
            raise InputError(msg) from e
        except UnicodeDecodeError as e:
            msg = f"{path} is not UTF-8 text"
            raise InputError(msg) from e

    def read_instance(self, spec: str) -> Instance:
        return read_instance(spec)

    def read_family(self, specs: str | Sequence[str]) -> InstanceFamily:
        """``specs`` is a comma-separated list or a sequence of ``file[:name]`` entries."""
        if isinstance(specs, str):
            specs = [spec for spec in specs.split(",") if spec]
        return read_family(specs)

    def read_matching(self, path: str, instance: Instance) -> Matching:
        return parse_matching(self.read_text(path), instance)

    # --- output --------------------------------------------------------------

    def write_json(self, data: Any) -> None:
        self.stdout.write(JSONRenderer().render(data).decode("utf-8"))

    def write_matching(self, matching: Matching, instance: Instance) -> None:
        self.stdout.write(serialize_matching(matching, instance), ending="")

    def write_negative(self, message: str) -> None:
        self.stdout.write(self.style.WARNING(message))
        self.exit_code = 1
