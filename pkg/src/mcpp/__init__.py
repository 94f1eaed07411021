"""Exact minimum convex partition of planar point sets by branch-and-price."""
from .config import SolverConfig
from .formats import ParseError, parse_instance, write_instance, write_solution
from .generate import generate_instance
from .geometry import DuplicatePoint, GeneralPositionViolation, GeometryError, PointSet
from .heuristics import Incumbent
from .oracle import brute_force_arrangement_faces, brute_force_optimum
from .polygons import ConvexPolygon
from .render import render_svg
from .search import SolveResult, solve
from .validity import is_valid_partition, upper_bound

__all__ = [
    "ConvexPolygon", "DuplicatePoint", "GeneralPositionViolation", "GeometryError", "Incumbent",
    "ParseError", "PointSet", "SolveResult", "SolverConfig", "brute_force_arrangement_faces",
    "brute_force_optimum", "generate_instance", "is_valid_partition", "parse_instance",
    "render_svg", "solve", "upper_bound", "write_instance", "write_solution",
]
