"""
decompose command.
Prints the tight cut decomposition tree: cuts as shore vertex lists, leaves as bricks or braces.
"""
import argparse

from app.api.graph_file import read_graph
from app.api.routes import add_common_arguments, emit
from app.api.schemas import DecomposeResponse, DecompositionNodeModel
from app.core.exceptions import EXIT_OK
from app.services.tight_cut_service import (
    DecompositionLeaf,
    DecompositionTree,
    iter_leaves,
    tight_cut_decomposition,
)


def register(subparsers) -> None:
    parser = subparsers.add_parser("decompose", help="Tight cut decomposition into bricks and braces")
    add_common_arguments(parser)
    parser.set_defaults(handler=run)


def tree_model(tree: DecompositionTree) -> DecompositionNodeModel:
    if isinstance(tree, DecompositionLeaf):
        return DecompositionNodeModel(
            kind=tree.kind, n=tree.graph.n, m=tree.graph.m, edges=list(tree.edge_map)
        )
    return DecompositionNodeModel(
        kind="cut",
        n=tree.graph.n,
        m=tree.graph.m,
        edges=list(tree.edge_map),
        shore=[v + 1 for v in sorted(tree.cut.shore)],
        children=[tree_model(child) for child in tree.children],
    )


def _render(node: DecompositionNodeModel, depth: int = 0) -> list[str]:
    pad = "  " * depth
    if node.kind == "cut":
        lines = [f"{pad}cut shore {{{' '.join(map(str, node.shore or []))}}} (n={node.n}, m={node.m})"]
        for child in node.children:
            lines += _render(child, depth + 1)
        return lines
    return [f"{pad}{node.kind} (n={node.n}, m={node.m}) edges {' '.join(map(str, node.edges))}"]


def build_decomposition(g) -> DecomposeResponse:
    tree = tight_cut_decomposition(g)
    kinds = [leaf.kind for leaf in iter_leaves(tree)]
    return DecomposeResponse(
        n=g.n, m=g.m, b=kinds.count("brick"), braces=kinds.count("brace"), tree=tree_model(tree)
    )


def run(args: argparse.Namespace) -> int:
    result = build_decomposition(read_graph(args.file))
    text = [f"bricks: {result.b}", f"braces: {result.braces}", *_render(result.tree)]
    emit(result, args.json, text)
    return EXIT_OK
