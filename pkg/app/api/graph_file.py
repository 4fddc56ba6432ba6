"""
Graph file format.
Header `n m`, then m lines `u v` with 1-based vertices; `#` starts a comment.
Edge ids follow the order of the edge lines.
"""
from pathlib import Path

from app.core.exceptions import GraphFormatError
from app.graph import MultiGraph


def _ints(text: str, lineno: int, expected: int) -> list[int]:
    fields = text.split()
    if len(fields) != expected:
        raise GraphFormatError(f"expected {expected} integers, got {len(fields)}", lineno)
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise GraphFormatError(f"not an integer in {text.strip()!r}", lineno) from None


def parse_graph(text: str) -> MultiGraph:
    """
    Parse the text of a graph file.

    Raises:
        GraphFormatError: With the offending line number
    """
    header: tuple[int, int] | None = None
    edges: list[tuple[int, int]] = []
    lineno = 0
    for lineno, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].strip()
        if not content:
            continue
        if header is None:
            n, m = _ints(content, lineno, 2)
            if n < 0 or m < 0:
                raise GraphFormatError("vertex and edge counts must be non-negative", lineno)
            header = (n, m)
            continue
        if len(edges) == header[1]:
            raise GraphFormatError(f"more than {header[1]} edge lines", lineno)
        u, v = _ints(content, lineno, 2)
        if not (1 <= u <= header[0] and 1 <= v <= header[0]):
            raise GraphFormatError(f"vertex out of range 1..{header[0]}", lineno)
        if u == v:
            raise GraphFormatError("self-loops are not allowed", lineno)
        edges.append((u - 1, v - 1))

    if header is None:
        raise GraphFormatError("missing header line", lineno or 1)
    if len(edges) != header[1]:
        raise GraphFormatError(f"expected {header[1]} edge lines, found {len(edges)}", lineno or 1)
    return MultiGraph(header[0], tuple(edges))


def read_graph(path: str | Path) -> MultiGraph:
    try:
        text = Path(path).read_text()
    except OSError as exc:
        raise GraphFormatError(f"cannot read {path}: {exc.strerror}") from exc
    return parse_graph(text)


def format_graph(g: MultiGraph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{a + 1} {b + 1}" for a, b in g.edges)
    return "\n".join(lines) + "\n"
