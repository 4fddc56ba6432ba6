"""
verify command.
Runs the oracle suites on one graph and prints a combined report.
"""
import argparse
import logging
from typing import Callable

from app.api.graph_file import read_graph
from app.api.routes import add_common_arguments, emit
from app.api.schemas import CheckModel, SuiteModel, VerifyResponse, to_plain
from app.core.exceptions import EXIT_OK, VerificationFailure
from app.graph import Matching, MultiGraph
from app.services.basis_service import lattice_basis
from app.services.verify_service import (
    VerificationReport,
    check_basis,
    check_dim_formula_consistency,
    check_facet_characterizations,
    check_lovasz_doubling,
)

logger = logging.getLogger(__name__)

SUITE_CHOICES = ("all", "basis", "facets", "dims", "lovasz")


def register(subparsers) -> None:
    parser = subparsers.add_parser("verify", help="Run oracle checks on a graph")
    add_common_arguments(parser)
    parser.add_argument("--suite", choices=SUITE_CHOICES, default="all")
    parser.add_argument("--oracle-cap", type=int, default=None)
    # test hook: replace the last basis element with a copy of the first
    parser.add_argument("--corrupt-basis", action="store_true", help=argparse.SUPPRESS)
    parser.set_defaults(handler=run)


def corrupted(matchings: tuple[Matching, ...]) -> tuple[Matching, ...]:
    if len(matchings) < 2:
        return ()
    return matchings[:-1] + (matchings[0],)


def _basis_suite(g: MultiGraph, cap: int | None, corrupt: bool) -> VerificationReport:
    matchings = lattice_basis(g).matchings
    if corrupt:
        logger.warning("Verifying a deliberately corrupted basis")
        matchings = corrupted(matchings)
    return check_basis(g, matchings, cap=cap)


def run_suites(g: MultiGraph, suite: str, cap: int | None = None, corrupt: bool = False) -> VerifyResponse:
    runners: dict[str, Callable[[], VerificationReport]] = {
        "basis": lambda: _basis_suite(g, cap, corrupt),
        "facets": lambda: check_facet_characterizations(g, cap=cap),
        "dims": lambda: check_dim_formula_consistency(g, cap=cap),
        "lovasz": lambda: check_lovasz_doubling(g, cap=cap),
    }
    names = [name for name in runners if suite in ("all", name)]

    suites = []
    for name in names:
        logger.info(f"Running {name} suite")
        report = runners[name]()
        suites.append(
            SuiteModel(
                suite=name,
                passed=report.passed,
                overflow=report.overflow,
                summary=to_plain(report.graph_summary),
                checks=[CheckModel(name=c.name, passed=c.passed, witness=to_plain(c.witness)) for c in report.checks],
            )
        )

    verdicts = [s.passed for s in suites]
    if False in verdicts:
        passed = False
    elif None in verdicts:
        passed = None
    else:
        passed = True
    return VerifyResponse(n=g.n, m=g.m, passed=passed, suites=suites)


def run(args: argparse.Namespace) -> int:
    """
    Raises:
        VerificationFailure: After printing the report, when any check fails
    """
    g = read_graph(args.file)
    result = run_suites(g, args.suite, cap=args.oracle_cap, corrupt=args.corrupt_basis)

    text = []
    for suite in result.suites:
        status = "skipped (cap)" if suite.passed is None else ("pass" if suite.passed else "FAIL")
        text.append(f"{suite.suite}: {status}")
        text += [f"  {c.name}: {'pass' if c.passed else 'FAIL'}" for c in suite.checks]
    emit(result, args.json, text)

    if result.passed is False:
        failed = [
            {"suite": s.suite, "check": c.name, "witness": c.witness}
            for s in result.suites
            for c in s.checks
            if not c.passed
        ]
        raise VerificationFailure("oracle checks failed", {"failures": failed})
    return EXIT_OK
