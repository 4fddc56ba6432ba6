"""
Verification service.
Brute-force oracle checks for bases, dimension formulas, facet
characterizations and the doubling property of the perfect matching lattice.
"""
import logging
import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Sequence

from app.core.config import get_settings
from app.core.exceptions import EnumerationOverflowError
from app.graph import (
    Cut,
    Matching,
    MultiGraph,
    contractions,
    enumerate_perfect_matchings,
    is_matching_covered,
    is_separating_cut,
    matching_covered_core,
)
from app.lattice import hnf, lattice_contains, rational_rank, saturation_basis
from app.services.bvn_service import find_fractional_vertex
from app.services.tight_cut_service import (
    brick_count,
    brick_leaves,
    find_nontrivial_tight_cut,
    is_near_brick,
    is_petersen_graph,
    lattice_dimension,
    polytope_dimension,
)

logger = logging.getLogger(__name__)


@dataclass
class CheckResult:
    name: str
    passed: bool
    witness: Any = None


@dataclass
class VerificationReport:
    checks: list[CheckResult] = field(default_factory=list)
    graph_summary: dict[str, Any] = field(default_factory=dict)
    overflow: bool = False

    @property
    def passed(self) -> bool | None:
        """None when the oracle could not run."""
        if self.overflow:
            return None
        return all(c.passed for c in self.checks)

    def add(self, name: str, passed: bool, witness: Any = None) -> None:
        self.checks.append(CheckResult(name, passed, None if passed else witness))
        if not passed:
            logger.warning(f"Check {name} failed: {witness}")

    def failures(self) -> list[CheckResult]:
        return [c for c in self.checks if not c.passed]


def graph_summary(g: MultiGraph) -> dict[str, Any]:
    covered, uncovered = is_matching_covered(g)
    summary: dict[str, Any] = {"n": g.n, "m": g.m, "matching_covered": covered, "uncovered_edges": list(uncovered)}
    if covered:
        summary.update(
            b=brick_count(g),
            polytope_dim=polytope_dimension(g),
            lattice_dim=lattice_dimension(g),
        )
    return summary


def _vectors(g: MultiGraph, matchings: Sequence[Matching]) -> list[tuple[int, ...]]:
    return [m.incidence_vector(g.m) for m in matchings]


def _enumerate(g: MultiGraph, cap: int | None, report: VerificationReport) -> list[Matching] | None:
    cap = get_settings().oracle_cap if cap is None else cap
    try:
        return enumerate_perfect_matchings(g, cap)
    except EnumerationOverflowError as exc:
        logger.warning(f"Oracle skipped: {exc.message}")
        report.overflow = True
        report.graph_summary["cap"] = exc.cap
        return None


def _oracle_rank(g: MultiGraph, matchings: Sequence[Matching]) -> int:
    return rational_rank(_vectors(g, matchings), g.m)


def _has_petersen_brick(g: MultiGraph) -> bool:
    core = matching_covered_core(g)
    return any(
        is_petersen_graph(brick) for part in core.graph.components() for brick in brick_leaves(part.graph)
    )


# ─────────────────────────────────────────────────────────────────
# Basis check
# ─────────────────────────────────────────────────────────────────

def check_basis(g: MultiGraph, basis: Sequence[Matching], cap: int | None = None) -> VerificationReport:
    """
    Compare a basis against every perfect matching of g.

    Checks: each element is a perfect matching; rank, size and lattice
    dimension agree; the two HNFs coincide; every matching is an integral
    combination of the basis.
    """
    report = VerificationReport(graph_summary={"n": g.n, "m": g.m, "size": len(basis)})
    bad = [i for i, m in enumerate(basis) if not m.is_perfect_matching_of(g)]
    report.add("perfect-matchings", not bad, {"indices": bad})

    core = matching_covered_core(g).graph
    expected = lattice_dimension(core)
    rank = rational_rank(_vectors(g, basis), g.m) if basis else 0
    report.graph_summary["lattice_dim"] = expected
    report.add(
        "rank",
        rank == len(basis) == expected,
        {"rank": rank, "size": len(basis), "lattice_dim": expected},
    )

    matchings = _enumerate(g, cap, report)
    if matchings is None:
        return report

    basis_form = hnf(_vectors(g, basis), g.m, with_transform=False)
    full_form = hnf(_vectors(g, matchings), g.m, with_transform=False)
    report.add(
        "hnf-equal",
        basis_form.basis_rows == full_form.basis_rows,
        {"basis_hnf": [list(r) for r in basis_form.basis_rows], "oracle_hnf": [list(r) for r in full_form.basis_rows]},
    )
    missing = next((m for m in matchings if not lattice_contains(basis_form, m.incidence_vector(g.m))), None)
    report.add("integral-combinations", missing is None, {"matching": list(missing) if missing else None})
    return report


# ─────────────────────────────────────────────────────────────────
# Lovász doubling
# ─────────────────────────────────────────────────────────────────

def check_lovasz_doubling(
    g: MultiGraph,
    trials: int | None = None,
    bound: int | None = None,
    seed: int | None = None,
    cap: int | None = None,
) -> VerificationReport:
    """
    Integer points of the linear hull: their doubles lie in the lattice, and
    without a Petersen brick they lie in the lattice themselves.

    Samples are the saturation basis followed by seeded random combinations of it.
    """
    settings = get_settings()
    trials = settings.doubling_trials if trials is None else trials
    bound = settings.doubling_coefficient_bound if bound is None else bound
    seed = settings.doubling_seed if seed is None else seed

    report = VerificationReport(graph_summary={"n": g.n, "m": g.m})
    matchings = _enumerate(g, cap, report)
    if matchings is None:
        return report

    vectors = _vectors(g, matchings)
    lattice = hnf(vectors, g.m, with_transform=False)
    hull = saturation_basis(vectors, g.m)
    petersen = _has_petersen_brick(g)
    report.graph_summary.update(petersen_brick=petersen, hull_rank=len(hull))

    rng = random.Random(seed + 1000003 * g.n + g.m)
    samples = [list(v) for v in hull]
    for _ in range(trials):
        coefficients = [rng.randint(-bound, bound) for _ in hull]
        samples.append([sum(c * v[i] for c, v in zip(coefficients, hull)) for i in range(g.m)])

    not_doubled = next((x for x in samples if not lattice_contains(lattice, [2 * a for a in x])), None)
    report.add("doubling", not_doubled is None, {"point": not_doubled})

    outside = next((x for x in samples if not lattice_contains(lattice, x)), None)
    if petersen:
        report.add("petersen-gap", outside is not None, {"reason": "every sampled hull point is in the lattice"})
        report.graph_summary["gap_witness"] = outside
    else:
        report.add("saturated", outside is None, {"point": outside})
    return report


# ─────────────────────────────────────────────────────────────────
# Facet characterizations
# ─────────────────────────────────────────────────────────────────

def _is_c4(g: MultiGraph) -> bool:
    return g.n == 4 and g.m == 4 and all(g.degree(v) == 2 for v in range(g.n)) and len(g.parallel_classes()) == 4


def _edge_facet_oracle(g: MultiGraph, matchings: list[Matching], full_rank: int, e: int) -> bool:
    avoiding = [m for m in matchings if e not in m]
    return bool(avoiding) and _oracle_rank(g, avoiding) == full_rank - 1


def _without_edges(g: MultiGraph, removed: set[int]) -> MultiGraph:
    return g.edge_subgraph(set(range(g.m)) - removed).graph


def _single_ear(g: MultiGraph, e: int) -> bool:
    rest = _without_edges(g, {e})
    return is_matching_covered(rest)[0] and brick_count(rest) == 1


def _double_ear(g: MultiGraph, matchings: list[Matching], e: int) -> bool:
    partners = [f for f in range(g.m) if f != e and _without_edges(g, {e, f}).is_bipartite]
    if len(partners) != 1:
        return False
    f = partners[0]
    return all((e in m) == (f in m) for m in matchings)


def odd_cut_sample(g: MultiGraph, count: int, seed: int = 0) -> list[Cut]:
    """Seeded sample of nontrivial odd cuts, canonical and distinct."""
    cuts: list[Cut] = []
    seen: set[frozenset[int]] = set()
    for size in range(3, g.n // 2 + 1, 2):
        for shore in combinations(range(g.n), size):
            c = Cut.of(g, shore)
            if c.shore not in seen and not c.trivial:
                seen.add(c.shore)
                cuts.append(c)
    if len(cuts) <= count:
        return cuts
    return random.Random(seed + g.n + g.m).sample(cuts, count)


def _cut_facet_oracle(g: MultiGraph, matchings: list[Matching], full_rank: int, c: Cut) -> bool:
    """x(C) >= 1 defines a facet not equivalent to any x_e >= 0."""
    crossing_once = [m for m in matchings if m.crossings(c.edge_ids) == 1]
    if not crossing_once or _oracle_rank(g, crossing_once) != full_rank - 1:
        return False
    used = {e for m in crossing_once for e in m}
    return len(used) == g.m


def check_facet_characterizations(
    g: MultiGraph,
    cap: int | None = None,
    cut_samples: int | None = None,
) -> VerificationReport:
    """
    Oracle facet-ness against the combinatorial characterizations.

    Edges: braces other than C4 use "G - e is matching covered"; BvN bricks use
    the single-ear / double-ear conditions. Cuts: on near-bricks, "separating
    with two near-brick contractions".
    """
    cut_samples = get_settings().facet_cut_samples if cut_samples is None else cut_samples
    report = VerificationReport(graph_summary={"n": g.n, "m": g.m})
    if not is_matching_covered(g)[0]:
        report.graph_summary["skipped"] = "not matching covered"
        return report
    matchings = _enumerate(g, cap, report)
    if matchings is None:
        return report

    full_rank = _oracle_rank(g, matchings)
    tight = find_nontrivial_tight_cut(g)
    brace = g.is_bipartite and tight is None and not _is_c4(g)
    bvn_brick = not g.is_bipartite and tight is None and find_fractional_vertex(g) is None
    report.graph_summary.update(brace=brace, bvn_brick=bvn_brick)

    if brace or bvn_brick:
        mismatched = []
        for e in range(g.m):
            oracle = _edge_facet_oracle(g, matchings, full_rank, e)
            if brace:
                combinatorial = is_matching_covered(_without_edges(g, {e}))[0]
            else:
                combinatorial = _single_ear(g, e) or _double_ear(g, matchings, e)
            if oracle != combinatorial:
                mismatched.append({"edge": e, "oracle": oracle, "characterization": combinatorial})
        report.add("edge-facets", not mismatched, mismatched)

    if brick_count(g) == 1:
        mismatched = []
        for c in odd_cut_sample(g, cut_samples):
            oracle = _cut_facet_oracle(g, matchings, full_rank, c)
            combinatorial = is_separating_cut(g, c) and all(is_near_brick(p.graph) for p in contractions(g, c))
            if oracle != combinatorial:
                mismatched.append({"shore": sorted(c.shore), "oracle": oracle, "characterization": combinatorial})
        report.add("cut-facets", not mismatched, mismatched)
    return report


# ─────────────────────────────────────────────────────────────────
# Dimension formulas
# ─────────────────────────────────────────────────────────────────

def check_dim_formula_consistency(
    g: MultiGraph,
    cap: int | None = None,
    cut_samples: int | None = None,
) -> VerificationReport:
    """Oracle ranks against the brick-count formulas, globally and on separating-cut faces."""
    cut_samples = get_settings().facet_cut_samples if cut_samples is None else cut_samples
    report = VerificationReport(graph_summary={"n": g.n, "m": g.m})
    matchings = _enumerate(g, cap, report)
    if matchings is None:
        return report

    core = matching_covered_core(g).graph
    rank = _oracle_rank(g, matchings)
    first = matchings[0].incidence_vector(g.m)
    differences = [tuple(a - b for a, b in zip(v, first)) for v in _vectors(g, matchings[1:])]
    affine = rational_rank(differences, g.m)
    formula_poly = polytope_dimension(core)
    report.graph_summary.update(oracle_lattice_dim=rank, oracle_polytope_dim=affine, polytope_dim=formula_poly)
    report.add("lattice-dim", rank == formula_poly + 1, {"oracle": rank, "formula": formula_poly + 1})
    report.add("polytope-dim", affine == formula_poly, {"oracle": affine, "formula": formula_poly})

    if not is_matching_covered(g)[0]:
        return report
    mismatched = []
    for c in odd_cut_sample(g, cut_samples):
        if not is_separating_cut(g, c):
            continue
        parts = contractions(g, c)
        crossing_once = [m for m in matchings if m.crossings(c.edge_ids) == 1]
        oracle = _oracle_rank(g, crossing_once) - 1
        formula = polytope_dimension(parts[0].graph) + polytope_dimension(parts[1].graph) + 1 - len(c.edge_ids)
        if oracle != formula:
            mismatched.append({"shore": sorted(c.shore), "oracle": oracle, "formula": formula})
    report.add("face-dim", not mismatched, mismatched)
    return report
