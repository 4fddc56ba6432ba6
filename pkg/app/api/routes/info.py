"""
info command.
Vertex and edge counts, matching covered status, brick count and dimensions.
"""
import argparse
import logging

from app.api.graph_file import read_graph
from app.api.routes import add_common_arguments, emit
from app.api.schemas import InfoResponse
from app.core.exceptions import EXIT_OK
from app.graph import has_perfect_matching, is_matching_covered, matching_covered_core
from app.services.tight_cut_service import brick_count, polytope_dimension

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("info", help="Summarize a graph and its lattice dimension")
    add_common_arguments(parser)
    parser.set_defaults(handler=run)


def build_info(g) -> InfoResponse:
    """
    Dimensions are taken on the matching covered core, so graphs with
    inadmissible edges still get a lattice dimension.
    """
    covered, uncovered = is_matching_covered(g)
    response = InfoResponse(n=g.n, m=g.m, matching_covered=covered, uncovered_edges=list(uncovered))
    if g.n == 0 or not has_perfect_matching(g):
        logger.info("Graph has no perfect matching; dimensions omitted")
        return response

    core = matching_covered_core(g).graph
    poly = polytope_dimension(core)
    response.b = brick_count(core)
    response.polytope_dim = poly
    response.lattice_dim = poly + 1
    return response


def run(args: argparse.Namespace) -> int:
    info = build_info(read_graph(args.file))
    text = [
        f"n: {info.n}",
        f"m: {info.m}",
        f"matching covered: {'yes' if info.matching_covered else 'no'}",
    ]
    if info.uncovered_edges:
        text.append(f"uncovered edges: {' '.join(map(str, info.uncovered_edges))}")
    if info.lattice_dim is not None:
        text += [
            f"bricks: {info.b}",
            f"polytope dimension: {info.polytope_dim}",
            f"lattice dimension: {info.lattice_dim}",
        ]
    emit(info, args.json, text)
    return EXIT_OK
