"""Finite-index subgroups of Hecke groups from Hecke-Farey symbols.

Modules: ``ring`` (exact arithmetic in Z[2cos(pi/q)]), ``symbol`` (symbols,
side pairings), ``maps`` (polygon decomposition, darts), ``perm``
(permutation groups), ``analysis`` (normality, automorphisms, congruence)
and ``cli``.
"""

from importlib import resources

from .analysis import AnalysisOptions, AnalysisReport, analyze, report_json
from .maps import CombinatorialMap, build_map, decompose, invariants, maps_isomorphic
from .perm import Permutation, PermGroup, parse_cycles
from .ring import QuotientRing, get_ring
from .symbol import HeckeFareySymbol, PSL2Element, parse_hfs, serialize_hfs, validate_hfs

__version__ = "0.1.0"


def fixture_path(name: str = ""):
    """Path inside the bundled fixture directory."""
    return resources.files(__package__).joinpath("fixtures", name)


def load_fixture(name: str) -> HeckeFareySymbol:
    return parse_hfs(fixture_path(f"corpus/{name}.hfs").read_text())


__all__ = [
    "AnalysisOptions", "AnalysisReport", "analyze", "report_json",
    "CombinatorialMap", "build_map", "decompose", "invariants", "maps_isomorphic",
    "Permutation", "PermGroup", "parse_cycles",
    "QuotientRing", "get_ring",
    "HeckeFareySymbol", "PSL2Element", "parse_hfs", "serialize_hfs", "validate_hfs",
    "fixture_path", "load_fixture",
]
