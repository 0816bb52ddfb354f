"""Tetravex: puzzle model, solution counting, and a 1-in-3-SAT reduction."""
from .core import (
    LEFT, RIGHT, TOP, Boundary, Instance, Sentinel, Tile, Tiling, ValidationReport,
    parse_instance, parse_tiling, serialize_instance, serialize_tiling, validate_tiling,
)
from .solver import SolveResult, Status, brute_force_count, is_uniquely_solvable, solve

__all__ = [
    "LEFT", "RIGHT", "TOP", "Boundary", "Instance", "Sentinel", "Tile", "Tiling",
    "ValidationReport", "parse_instance", "parse_tiling", "serialize_instance",
    "serialize_tiling", "validate_tiling", "SolveResult", "Status", "brute_force_count",
    "is_uniquely_solvable", "solve",
]
