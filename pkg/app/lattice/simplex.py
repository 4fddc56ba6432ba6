"""
Exact two-phase simplex over the rationals.
Bland's rule throughout; variables may be non-negative or free.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Literal

from app.core.exceptions import InvariantViolation, PreconditionError
from app.graph.multigraph import MultiGraph

logger = logging.getLogger(__name__)

Status = Literal["optimal", "infeasible", "unbounded"]


@dataclass(frozen=True)
class LinearProgram:
    """
    min/max c·x subject to A x = b, x_j >= 0 unless j is free.

    `labels` names each variable (edge ids for matching programs).
    """

    rows: tuple[tuple[int, ...], ...]
    rhs: tuple[int, ...]
    objective: tuple[Fraction, ...]
    sense: Literal["min", "max"] = "min"
    free: frozenset[int] = field(default_factory=frozenset)
    labels: tuple[int, ...] = ()

    def __post_init__(self):
        n = len(self.objective)
        if any(len(row) != n for row in self.rows):
            raise PreconditionError("constraint rows and objective differ in length")
        if len(self.rows) != len(self.rhs):
            raise PreconditionError("one right-hand side per row is required")
        if any(not 0 <= j < n for j in self.free):
            raise PreconditionError("free variable index out of range")
        if not self.labels:
            object.__setattr__(self, "labels", tuple(range(n)))

    @property
    def num_vars(self) -> int:
        return len(self.objective)


@dataclass(frozen=True)
class VertexSolution:
    status: Status
    point: tuple[Fraction, ...] = ()
    objective: Fraction | None = None
    basis_columns: frozenset[int] = field(default_factory=frozenset)


def degree_program(
    g: MultiGraph,
    edge_ids: Iterable[int],
    objective: dict[int, int | Fraction],
    sense: Literal["min", "max"] = "min",
    free: Iterable[int] = (),
) -> LinearProgram:
    """
    Degree-constrained program over the edges `edge_ids` of g.

    One equality x(δ(v)) = 1 per vertex; variables are the edges, in ascending id.
    """
    ids = tuple(sorted(set(edge_ids)))
    column = {eid: j for j, eid in enumerate(ids)}
    rows = []
    for v in range(g.n):
        row = [0] * len(ids)
        for eid in g.incidence[v]:
            if eid in column:
                row[column[eid]] = 1
        rows.append(tuple(row))
    return LinearProgram(
        rows=tuple(rows),
        rhs=tuple(1 for _ in range(g.n)),
        objective=tuple(Fraction(objective.get(eid, 0)) for eid in ids),
        sense=sense,
        free=frozenset(column[e] for e in free if e in column),
        labels=ids,
    )


class _Tableau:
    """Dense tableau [A | I] with artificial columns kept as a basis inverse."""

    def __init__(self, lp: LinearProgram):
        self.n = lp.num_vars
        self.m = len(lp.rows)
        self.row_sign = [(-1 if r < 0 else 1) for r in lp.rhs]
        self.T = [
            [Fraction(s * a) for a in row] + [Fraction(1 if k == i else 0) for k in range(self.m)]
            for i, (row, s) in enumerate(zip(lp.rows, self.row_sign))
        ]
        self.b = [Fraction(s * r) for r, s in zip(lp.rhs, self.row_sign)]
        self.basis = [self.n + i for i in range(self.m)]
        self.flip = [1] * self.n
        self.free = lp.free

    def pivot(self, r: int, j: int) -> None:
        p = self.T[r][j]
        row = [x / p for x in self.T[r]]
        self.T[r] = row
        self.b[r] = self.b[r] / p
        for i in range(len(self.T)):
            if i == r:
                continue
            f = self.T[i][j]
            if f:
                self.T[i] = [x - f * y for x, y in zip(self.T[i], row)]
                self.b[i] -= f * self.b[r]
        self.basis[r] = j

    def negate_column(self, j: int) -> None:
        for row in self.T:
            row[j] = -row[j]
        self.flip[j] = -self.flip[j]

    def reduced_cost(self, cost: list[Fraction], j: int) -> Fraction:
        return cost[j] - sum(
            (cost[self.basis[i]] * self.T[i][j] for i in range(len(self.T))), Fraction(0)
        )

    def run(self, cost_of, allowed: int) -> Status:
        """Minimize; `cost_of(j)` gives the cost in current column orientation."""
        while True:
            cost = [cost_of(j) for j in range(self.n + self.m)]
            in_basis = set(self.basis)
            entering = None
            for j in range(allowed):
                if j in in_basis:
                    continue
                d = self.reduced_cost(cost, j)
                if j in self.free and d > 0:
                    self.negate_column(j)
                    entering = j
                    break
                if d < 0:
                    entering = j
                    break
            if entering is None:
                return "optimal"

            best = None
            for i in range(len(self.T)):
                a = self.T[i][entering]
                if a <= 0 or self.basis[i] in self.free:
                    continue
                key = (self.b[i] / a, self.basis[i])
                if best is None or key < best[0]:
                    best = (key, i)
            if best is None:
                return "unbounded"
            self.pivot(best[1], entering)


def simplex_solve(lp: LinearProgram) -> VertexSolution:
    """
    Solve `lp` exactly and return a basic optimal solution.

    Phase one drives artificials to zero and drops redundant rows; phase two
    optimizes. Before returning an optimum the dual certificate is checked.
    """
    tab = _Tableau(lp)
    n, m = tab.n, tab.m
    c = [(-x if lp.sense == "max" else x) for x in lp.objective]

    status = tab.run(lambda j: Fraction(1) if j >= n else Fraction(0), n)
    if status != "optimal" or sum((tab.b[i] for i in range(m) if tab.basis[i] >= n), Fraction(0)) != 0:
        return VertexSolution(status="infeasible")

    # drive zero-level artificials out of the basis, dropping redundant rows
    keep = []
    for i in range(len(tab.T)):
        if tab.basis[i] < n:
            keep.append(i)
            continue
        pivot_col = next((j for j in range(n) if tab.T[i][j] != 0), None)
        if pivot_col is not None:
            tab.pivot(i, pivot_col)
            keep.append(i)
    tab.T = [tab.T[i] for i in keep]
    tab.b = [tab.b[i] for i in keep]
    tab.basis = [tab.basis[i] for i in keep]

    status = tab.run(lambda j: tab.flip[j] * c[j] if j < n else Fraction(0), n)
    if status == "unbounded":
        return VertexSolution(status="unbounded")

    point = [Fraction(0)] * n
    for i, j in enumerate(tab.basis):
        point[j] = tab.b[i] * tab.flip[j]
    value = sum((c[j] * point[j] for j in range(n)), Fraction(0))

    _certify(lp, tab, c, point, value)
    objective = -value if lp.sense == "max" else value
    return VertexSolution(
        status="optimal",
        point=tuple(point),
        objective=objective,
        basis_columns=frozenset(lp.labels[j] for j in tab.basis),
    )


def _certify(lp: LinearProgram, tab: _Tableau, c: list[Fraction], point: list[Fraction], value: Fraction) -> None:
    """Primal feasibility, dual feasibility and equal objectives, all exact."""
    n, m = tab.n, tab.m
    for row, r in zip(lp.rows, lp.rhs):
        if sum((a * x for a, x in zip(row, point)), Fraction(0)) != r:
            raise InvariantViolation("simplex point violates an equality row")
    if any(point[j] < 0 for j in range(n) if j not in lp.free):
        raise InvariantViolation("simplex point violates a lower bound")

    cost_b = [tab.flip[j] * c[j] for j in tab.basis]
    dual = [
        sum((cost_b[i] * tab.T[i][n + k] for i in range(len(tab.T))), Fraction(0)) * tab.row_sign[k]
        for k in range(m)
    ]
    for j in range(n):
        d = c[j] - sum((dual[k] * lp.rows[k][j] for k in range(m)), Fraction(0))
        if j in lp.free and d != 0:
            raise InvariantViolation("dual certificate fails on a free variable", {"column": j})
        if j not in lp.free and d < 0:
            raise InvariantViolation("dual certificate has a negative reduced cost", {"column": j})
    if sum((dual[k] * lp.rhs[k] for k in range(m)), Fraction(0)) != value:
        raise InvariantViolation("primal and dual objectives differ")
