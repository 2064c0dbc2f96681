"""
Worked example files shipped with the package.

``.pm`` files hold instances or families, ``.match`` files matchings of the
instance they are named after, ``.cnf`` files monotone formulas in DIMACS form.

Usage:
    family = load_family("single_swap.pm")
    m2 = load_matching("single_swap_m2.match", family.first)
"""

from pathlib import Path

from popmatch.core import Instance, InstanceFamily, Matching
from popmatch.formats import parse_matching, read_family, read_instance
from popmatch.reductions.cnf import CnfFormula, read_dimacs

SAMPLES_DIR = Path(__file__).resolve().parent


def sample_path(name: str) -> Path:
    """
    Raises:
        FileNotFoundError: If no sample file has that name
    """
    path = SAMPLES_DIR / name
    if not path.is_file():
        msg = f"No sample named {name}"
        raise FileNotFoundError(msg)
    return path


def load_family(name: str) -> InstanceFamily:
    return read_family([sample_path(name)])


def load_instance(name: str, block: str | None = None) -> Instance:
    """One instance of a sample; ``block`` picks an ``instance <name> { }`` block."""
    path = sample_path(name)
    return read_instance(f"{path}:{block}" if block else path)


def load_matching(name: str, instance: Instance) -> Matching:
    return parse_matching(sample_path(name).read_text(encoding="utf-8"), instance)


def load_formula(name: str) -> CnfFormula:
    return read_dimacs(sample_path(name))
