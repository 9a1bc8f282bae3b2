"""Utilities: counter-based random streams and JSON persistence."""

from .persistence import canonical_json, fingerprint, read_json, to_jsonable, write_json_atomic
from .rng import CounterStream, counter_generator

__all__ = [
    "CounterStream",
    "canonical_json",
    "counter_generator",
    "fingerprint",
    "read_json",
    "to_jsonable",
    "write_json_atomic",
]
