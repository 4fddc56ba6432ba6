"""
Integer lattice algebra: Hermite normal form, membership and exact rank.
"""
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from sympy import Matrix

from app.core.exceptions import InvariantViolation, PreconditionError

IntRow = tuple[int, ...]


@dataclass(frozen=True)
class HnfResult:
    """
    Row-style Hermite normal form H = U · A.

    Non-zero rows come first; `pivots` lists their pivot columns.
    `transform` is empty when it was not requested.
    """

    hermite_form: tuple[IntRow, ...]
    transform: tuple[IntRow, ...]
    rank: int
    pivots: tuple[int, ...]
    ncols: int

    @property
    def basis_rows(self) -> tuple[IntRow, ...]:
        return self.hermite_form[: self.rank]


def _as_int_rows(rows: Sequence[Sequence[int]], ncols: int | None) -> tuple[list[list[int]], int]:
    width = ncols if ncols is not None else (len(rows[0]) if rows else 0)
    out = []
    for row in rows:
        if len(row) != width:
            raise PreconditionError("rows have inconsistent length", {"expected": width, "got": len(row)})
        out.append([int(x) for x in row])
    return out, width


def hnf(rows: Sequence[Sequence[int]], ncols: int | None = None, with_transform: bool = True) -> HnfResult:
    """
    Hermite normal form by integer row operations.

    Pivots are positive, pivot columns strictly increase and entries above a
    pivot lie in [0, pivot). Two generating sets span the same lattice iff the
    non-zero parts of their forms are equal.

    Args:
        rows: Integer generators
        ncols: Ambient dimension, required when `rows` is empty
        with_transform: Also track the unimodular U (costly for many rows)
    """
    H, d = _as_int_rows(rows, ncols)
    k = len(H)
    U = [[1 if i == j else 0 for j in range(k)] for i in range(k)] if with_transform else []

    def sub(i: int, p: int, q: int) -> None:
        H[i] = [a - q * b for a, b in zip(H[i], H[p])]
        if U:
            U[i] = [a - q * b for a, b in zip(U[i], U[p])]

    def swap(i: int, p: int) -> None:
        H[i], H[p] = H[p], H[i]
        if U:
            U[i], U[p] = U[p], U[i]

    def negate(p: int) -> None:
        H[p] = [-a for a in H[p]]
        if U:
            U[p] = [-a for a in U[p]]

    pivots: list[int] = []
    p = 0
    for col in range(d):
        if p == k:
            break
        found = False
        while True:
            nonzero = [i for i in range(p, k) if H[i][col] != 0]
            if not nonzero:
                break
            found = True
            smallest = min(nonzero, key=lambda i: (abs(H[i][col]), i))
            if smallest != p:
                swap(smallest, p)
            clean = True
            for i in range(p + 1, k):
                if H[i][col]:
                    sub(i, p, H[i][col] // H[p][col])
                    if H[i][col]:
                        clean = False
            if clean:
                break
        if not found:
            continue
        if H[p][col] < 0:
            negate(p)
        for i in range(p):
            q = H[i][col] // H[p][col]
            if q:
                sub(i, p, q)
        pivots.append(col)
        p += 1

    if U:
        det = Matrix(U).det(method="bareiss")
        if det not in (1, -1):
            raise InvariantViolation("HNF transform is not unimodular", {"det": str(det)})

    return HnfResult(
        hermite_form=tuple(tuple(r) for r in H),
        transform=tuple(tuple(r) for r in U),
        rank=p,
        pivots=tuple(pivots),
        ncols=d,
    )


def lattice_contains(h: HnfResult, v: Sequence[int]) -> bool:
    """Whether v is an integral combination of the rows behind `h`."""
    if len(v) != h.ncols:
        raise PreconditionError("vector dimension does not match the lattice", {"expected": h.ncols, "got": len(v)})
    rest = [int(x) for x in v]
    for row, col in zip(h.basis_rows, h.pivots):
        if rest[col] % row[col]:
            return False
        q = rest[col] // row[col]
        if q:
            rest = [a - q * b for a, b in zip(rest, row)]
    return not any(rest)


def lattice_equal(a: Sequence[Sequence[int]], b: Sequence[Sequence[int]], ncols: int) -> bool:
    return (
        hnf(a, ncols, with_transform=False).basis_rows
        == hnf(b, ncols, with_transform=False).basis_rows
    )


def integer_kernel(rows: Sequence[Sequence[int]], ncols: int | None = None) -> tuple[IntRow, ...]:
    """Basis of {y ∈ ℤ^k : y · A = 0} from the rows of U beside zero rows of H."""
    result = hnf(rows, ncols)
    return result.transform[result.rank :]


def _integerize(vector: Sequence[int | Fraction]) -> list[int]:
    fractions = [Fraction(x) for x in vector]
    scale = lcm(*(f.denominator for f in fractions)) if fractions else 1
    return [int(f * scale) for f in fractions]


def rational_rank(vectors: Sequence[Sequence[int | Fraction]], ncols: int | None = None) -> int:
    """Rank over ℚ; rows are scaled to integers and reduced to echelon form."""
    if not vectors:
        return 0
    return hnf([_integerize(v) for v in vectors], ncols, with_transform=False).rank


def in_linear_hull(vectors: Sequence[Sequence[int | Fraction]], v: Sequence[int | Fraction]) -> bool:
    if not vectors:
        return not any(v)
    return rational_rank(list(vectors) + [v]) == rational_rank(vectors)


def nullspace(vectors: Sequence[Sequence[int]], ncols: int) -> tuple[IntRow, ...]:
    """Primitive integer vectors spanning {w : A w = 0} over ℚ."""
    if not vectors:
        return tuple(tuple(1 if i == j else 0 for j in range(ncols)) for i in range(ncols))
    basis = Matrix([list(v) for v in vectors]).nullspace()
    out = []
    for column in basis:
        scaled = _integerize([Fraction(int(x.p), int(x.q)) for x in column])
        out.append(tuple(scaled))
    return tuple(out)


def saturation_basis(vectors: Sequence[Sequence[int]], ncols: int) -> tuple[IntRow, ...]:
    """
    Integral basis of lin(vectors) ∩ ℤ^d.

    The hull is cut out by its rational orthogonal complement N; the integer
    points of the hull are the integer kernel of Nᵀ.
    """
    reduced = hnf(vectors, ncols, with_transform=False).basis_rows if vectors else ()
    normals = nullspace(reduced, ncols)
    if not normals:
        return hnf([[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)], ncols).basis_rows
    columns = [[normal[i] for normal in normals] for i in range(ncols)]
    kernel = integer_kernel(columns, len(normals))
    return hnf(kernel, ncols, with_transform=False).basis_rows if kernel else ()
