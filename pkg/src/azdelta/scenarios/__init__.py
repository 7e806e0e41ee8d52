"""Bundled fixtures, the scenario file format and its checks."""

from .run import OPS, Record, compare, run_fixture, to_json, with_dependencies
from .schema import (
    DualGraph,
    Expectation,
    Family,
    Fixture,
    Computation,
    Projection,
    dump_fixture,
    dumps_fixture,
    list_fixtures,
    load_fixture,
    parse_fixture,
)
from .validate import ValidationReport, validate_fixture

__all__ = [
    "OPS",
    "DualGraph",
    "Expectation",
    "Family",
    "Fixture",
    "Computation",
    "Projection",
    "Record",
    "ValidationReport",
    "compare",
    "dump_fixture",
    "dumps_fixture",
    "list_fixtures",
    "load_fixture",
    "parse_fixture",
    "run_fixture",
    "to_json",
    "validate_fixture",
    "with_dependencies",
]
