"""Exact linear programming and integer lattice algebra."""
from app.lattice.integer import (
    HnfResult,
    hnf,
    in_linear_hull,
    integer_kernel,
    lattice_contains,
    lattice_equal,
    nullspace,
    rational_rank,
    saturation_basis,
)
from app.lattice.simplex import LinearProgram, VertexSolution, degree_program, simplex_solve

__all__ = [
    "HnfResult",
    "LinearProgram",
    "VertexSolution",
    "degree_program",
    "hnf",
    "in_linear_hull",
    "integer_kernel",
    "lattice_contains",
    "lattice_equal",
    "nullspace",
    "rational_rank",
    "saturation_basis",
    "simplex_solve",
]
