"""
Pydantic schemas for command output.
Every command prints one of these models as JSON with stable key order.
"""
from fractions import Fraction
from typing import Any, Literal

from pydantic import BaseModel, ConfigDict, Field


class OutputModel(BaseModel):
    model_config = ConfigDict(populate_by_name=True)

    def to_json(self) -> str:
        return self.model_dump_json(by_alias=True, indent=2)


# ─────────────────────────────────────────────────────────────────
# info
# ─────────────────────────────────────────────────────────────────

class InfoResponse(OutputModel):
    """Summary of a graph file."""
    n: int = Field(..., description="Vertex count")
    m: int = Field(..., description="Edge count")
    matching_covered: bool = Field(..., alias="matchingCovered")
    uncovered_edges: list[int] = Field(default_factory=list, alias="uncoveredEdges")
    b: int | None = Field(default=None, description="Number of bricks")
    polytope_dim: int | None = Field(default=None, alias="polytopeDim")
    lattice_dim: int | None = Field(default=None, alias="latticeDim")


# ─────────────────────────────────────────────────────────────────
# decompose
# ─────────────────────────────────────────────────────────────────

class DecompositionNodeModel(OutputModel):
    """One node of a tight cut decomposition; vertices are 1-based."""
    kind: Literal["brick", "brace", "cut"]
    n: int
    m: int
    edges: list[int] = Field(..., description="Root edge ids of this node's edges")
    shore: list[int] | None = Field(default=None, description="Cut shore in this node's vertex ids")
    children: list["DecompositionNodeModel"] = Field(default_factory=list)


class DecomposeResponse(OutputModel):
    n: int
    m: int
    b: int
    braces: int
    tree: DecompositionNodeModel


# ─────────────────────────────────────────────────────────────────
# basis
# ─────────────────────────────────────────────────────────────────

class BasisResponse(OutputModel):
    """Lattice basis as lists of edge ids."""
    n: int
    m: int
    b: int = Field(..., description="Number of bricks of the matching covered core")
    lattice_dim: int = Field(..., alias="latticeDim")
    basis: list[list[int]] = Field(..., description="Perfect matchings as ascending edge ids")
    provenance: dict[str, Any] = Field(default_factory=dict)
    verified: bool | None = Field(default=None, description="Oracle verdict, null when not run or capped")


# ─────────────────────────────────────────────────────────────────
# verify
# ─────────────────────────────────────────────────────────────────

class CheckModel(OutputModel):
    name: str
    passed: bool
    witness: Any = None


class SuiteModel(OutputModel):
    suite: str
    passed: bool | None
    overflow: bool = False
    summary: dict[str, Any] = Field(default_factory=dict)
    checks: list[CheckModel] = Field(default_factory=list)


class VerifyResponse(OutputModel):
    n: int
    m: int
    passed: bool | None
    suites: list[SuiteModel]


class ErrorResponse(OutputModel):
    """Standard error response."""
    error: str = Field(..., description="Error type identifier")
    message: str = Field(..., description="Human-readable error message")
    details: dict[str, Any] | None = Field(default=None, description="Additional error details")


def to_plain(value: Any) -> Any:
    """Turn witnesses and details into JSON-ready values (fractions as strings, sets sorted)."""
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return [to_plain(v) for v in sorted(value)]
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    return value
