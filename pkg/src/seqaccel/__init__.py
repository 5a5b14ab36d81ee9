"""Sequence transformations, table paths and divergent-series summation."""

from .paths import ApproximantRef, PathSpec, highest_order, walk
from .scalar import EXACT, MACHINE, Precision, mp, parse_number
from .transforms import KINDS, SequenceWindow, Status, TransformTable

__all__ = [
    "ApproximantRef",
    "EXACT",
    "KINDS",
    "MACHINE",
    "PathSpec",
    "Precision",
    "SequenceWindow",
    "Status",
    "TransformTable",
    "highest_order",
    "mp",
    "parse_number",
    "walk",
]
