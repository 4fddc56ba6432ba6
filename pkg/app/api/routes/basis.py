"""
basis command.
Builds a lattice basis of perfect matchings and optionally checks it against the oracle.
"""
import argparse
import logging

from app.api.graph_file import read_graph
from app.api.routes import add_common_arguments, emit
from app.api.schemas import BasisResponse, to_plain
from app.core.exceptions import EXIT_OK, VerificationFailure
from app.graph import matching_covered_core
from app.services.basis_service import lattice_basis
from app.services.tight_cut_service import brick_count
from app.services.verify_service import check_basis

logger = logging.getLogger(__name__)


def register(subparsers) -> None:
    parser = subparsers.add_parser("basis", help="Lattice basis consisting of perfect matchings")
    add_common_arguments(parser)
    parser.add_argument("--verify", action="store_true", help="Check the basis against all perfect matchings")
    parser.add_argument(
        "--oracle-cap", type=int, default=None, help="Enumeration cap for --verify (default from settings)"
    )
    parser.set_defaults(handler=run)


def run(args: argparse.Namespace) -> int:
    """
    Raises:
        VerificationFailure: After printing the basis, when an oracle check fails
    """
    g = read_graph(args.file)
    basis = lattice_basis(g)
    core = matching_covered_core(g).graph

    verified = None
    failures = []
    if args.verify:
        report = check_basis(g, basis.matchings, cap=args.oracle_cap)
        verified = report.passed
        failures = report.failures()
        if verified is None:
            logger.warning("Perfect matching count exceeds the oracle cap; basis left unverified")

    result = BasisResponse(
        n=g.n,
        m=g.m,
        b=brick_count(core),
        lattice_dim=len(basis),
        basis=[list(m.edge_ids) for m in basis.matchings],
        provenance=to_plain(basis.provenance),
        verified=verified,
    )
    text = [f"lattice dimension: {result.lattice_dim}"]
    text += [f"M{i + 1}: {' '.join(map(str, edges))}" for i, edges in enumerate(result.basis)]
    if args.verify:
        text.append(f"verified: {'unknown' if verified is None else str(verified).lower()}")
    emit(result, args.json, text)

    if verified is False:
        raise VerificationFailure(
            "basis failed the oracle check",
            {"failures": [{"name": c.name, "witness": to_plain(c.witness)} for c in failures]},
        )
    return EXIT_OK
