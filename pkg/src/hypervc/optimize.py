"""Solvers for k-partite hypergraph vertex cover.

- exact LP relaxation (rational simplex), with independent feasibility check;
- exact minimum weighted cover by branch and bound;
- threshold rounding of fractional solutions (always feasible when the
  per-part thresholds sum to 1);
- greedy maximal-matching cover.

Every solved instance must satisfy vc/lp <= k/2; a violation falsifies the
implementation, not the bound.
"""

from __future__ import annotations

import itertools
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence

from .budget import BudgetExceeded, resolve_budget
from .hypergraph import (
    CoverCertificate,
    FractionalSolution,
    PartiteHypergraph,
)
from .rational import format_rational
from .simplex import solve_boxed_covering_lp

DEFAULT_NODE_BUDGET = 10_000_000
DEFAULT_GRID_BUDGET = 200_000


def solve_lp(h: PartiteHypergraph) -> tuple[FractionalSolution, int]:
    """Exact optimum of min Σ w_v x_v s.t. Σ_{v in e} x_v >= 1, 0 <= x <= 1.

    Returns the solution and the simplex pivot count.  Feasibility of the
    returned vector is re-verified independently of the solver.
    """
    vertices = sorted(h.vertex_set)
    index = {v: i for i, v in enumerate(vertices)}
    c = [h.weight(v) for v in vertices]
    rows = [[(index[v], Fraction(1)) for v in e] for e in h.edges]
    b = [Fraction(1)] * len(rows)
    res = solve_boxed_covering_lp(c, rows, b)
    sol = FractionalSolution.of(h, {v: res.x[index[v]] for v in vertices})
    problems = sol.violations(h)
    if problems:
        raise AssertionError(f"simplex returned an infeasible solution: {problems}")
    if sol.objective != res.objective:
        raise AssertionError("simplex objective disagrees with recomputation")
    return sol, res.pivots


@dataclass
class BranchStats:
    nodes: int = 0
    optimal: bool = True


def exact_min_vc(
    h: PartiteHypergraph,
    node_budget: Optional[int] = None,
) -> tuple[CoverCertificate, BranchStats]:
    """Provably optimal weighted vertex cover by branch and bound.

    Branches k ways on the vertices of an uncovered edge, excluding earlier
    siblings to avoid revisits; prunes with a disjoint-uncovered-edge lower
    bound.  Exceeding the node budget returns the best cover found with
    optimal=False, never a silently wrong answer.
    """
    limit = resolve_budget(node_budget if node_budget is not None else DEFAULT_NODE_BUDGET)
    stats = BranchStats()
    edges = [frozenset(e) for e in h.edges]
    all_vertices = sorted(h.vertex_set)

    # Incumbent: all vertices appearing in edges (always a cover).
    incumbent = frozenset(v for e in h.edges for v in e)
    best_weight = h.set_weight(incumbent)
    best_set = incumbent

    def lower_bound(uncovered: list[frozenset], excluded: frozenset) -> Fraction:
        # Greedy disjoint uncovered edges; each forces one vertex at its
        # cheapest admissible weight.
        bound = Fraction(0)
        used: set[str] = set()
        for e in uncovered:
            if used.isdisjoint(e):
                admissible = [h.weight(v) for v in e if v not in excluded]
                if admissible:
                    bound += min(admissible)
                used.update(e)
        return bound

    def recurse(chosen: frozenset, weight: Fraction, excluded: frozenset) -> None:
        nonlocal best_weight, best_set
        stats.nodes += 1
        if stats.nodes > limit:
            stats.optimal = False
            return
        uncovered = [e for e in edges if chosen.isdisjoint(e)]
        if not uncovered:
            if weight < best_weight or (
                weight == best_weight and sorted(chosen) < sorted(best_set)
            ):
                best_weight = weight
                best_set = chosen
            return
        if weight + lower_bound(uncovered, excluded) >= best_weight:
            return
        # Branch on the uncovered edge with the fewest admissible vertices,
        # ties by canonical edge order.
        branch_edge = None
        branch_opts: list[str] = []
        for e in h.edges:
            fe = frozenset(e)
            if not chosen.isdisjoint(fe):
                continue
            opts = [v for v in e if v not in excluded]
            if branch_edge is None or len(opts) < len(branch_opts):
                branch_edge, branch_opts = e, opts
                if len(opts) <= 1:
                    break
        if not branch_opts:
            return  # every vertex of some uncovered edge is excluded
        newly_excluded: set[str] = set()
        for v in branch_opts:
            recurse(
                chosen | {v},
                weight + h.weight(v),
                excluded | frozenset(newly_excluded),
            )
            newly_excluded.add(v)

    recurse(frozenset(), Fraction(0), frozenset())
    cert = CoverCertificate(vertex_set=best_set, weight=best_weight)
    if cert.check(h):
        raise AssertionError("branch and bound produced a non-cover")
    return cert, stats


def threshold_round(
    h: PartiteHypergraph,
    x: FractionalSolution,
    thetas: Sequence[Fraction],
) -> CoverCertificate:
    """Round a feasible x to the cover {v in part i : x_v >= θ_i}.

    Feasible for any positive θ with Σθ_i = 1: an uncovered edge would have
    every coordinate below its part threshold, so its value sum would be
    below 1.
    """
    if len(thetas) != h.k:
        raise ValueError(f"need {h.k} thresholds, got {len(thetas)}")
    thetas = [Fraction(t) for t in thetas]
    if any(t <= 0 for t in thetas):
        raise ValueError("thresholds must be positive")
    if sum(thetas) != 1:
        raise ValueError(f"thresholds must sum to 1, got {sum(thetas)}")
    chosen = {
        v
        for v in h.vertex_set
        if x.values.get(v, Fraction(0)) >= thetas[h.part_of[v]]
    }
    return CoverCertificate.of(h, chosen)


def uniform_thetas(k: int) -> list[Fraction]:
    return [Fraction(1, k)] * k


def best_threshold_round(
    h: PartiteHypergraph,
    x: FractionalSolution,
    grid_budget: Optional[int] = None,
) -> tuple[CoverCertificate, tuple[Fraction, ...]]:
    """Search per-part cut values over attained x values for the lightest cover.

    Candidate cuts per part are the distinct x values in that part plus 1;
    a tuple qualifies if every edge has some coordinate at or above its cut.
    Falls back to uniform θ = 1/k when the grid exceeds the budget.  The
    result never exceeds the uniform-θ cover weight.
    """
    limit = resolve_budget(grid_budget if grid_budget is not None else DEFAULT_GRID_BUDGET)
    candidates: list[list[Fraction]] = []
    for part in h.parts:
        vals = {x.values.get(v, Fraction(0)) for v in part} | {Fraction(1)}
        candidates.append(sorted(q for q in vals if q > 0))
    grid = 1
    for cand in candidates:
        grid *= max(len(cand), 1)

    uniform = threshold_round(h, x, uniform_thetas(h.k))
    best_cert, best_cuts = uniform, tuple(uniform_thetas(h.k))
    if grid > limit:
        return best_cert, best_cuts

    for cuts in itertools.product(*candidates):
        chosen = {
            v
            for v in h.vertex_set
            if x.values.get(v, Fraction(0)) >= cuts[h.part_of[v]]
        }
        ok, _ = h.is_cover(chosen)
        if not ok:
            continue
        w = h.set_weight(chosen)
        if w < best_cert.weight:
            best_cert = CoverCertificate(vertex_set=frozenset(chosen), weight=w)
            best_cuts = tuple(cuts)
    return best_cert, best_cuts


def greedy_matching_cover(h: PartiteHypergraph) -> CoverCertificate:
    """Cover from a maximal collection of disjoint hyperedges.

    For unit weights this is the classical k-approximation.  Warns on
    weighted instances, where no ratio guarantee applies.
    """
    if h.weights:
        warnings.warn(
            "greedy matching cover has its k-approximation guarantee only "
            "for unit weights",
            stacklevel=2,
        )
    used: set[str] = set()
    cover: set[str] = set()
    for e in h.edges:
        if used.isdisjoint(e):
            used.update(e)
            cover.update(e)
    return CoverCertificate.of(h, cover)


@dataclass(frozen=True)
class SolveReport:
    """Exact solver results and ratios for one instance."""

    instance_id: str
    k: int
    lp_value: Fraction
    lp_pivots: int
    vc_exact: Optional[Fraction] = None
    vc_optimal: bool = True
    nodes: int = 0
    rounded_weight: Optional[Fraction] = None
    greedy_weight: Optional[Fraction] = None

    def ratios(self) -> dict[str, Optional[Fraction]]:
        out: dict[str, Optional[Fraction]] = {"vc/lp": None, "rounded/lp": None}
        if self.lp_value > 0:
            if self.vc_exact is not None:
                out["vc/lp"] = self.vc_exact / self.lp_value
            if self.rounded_weight is not None:
                out["rounded/lp"] = self.rounded_weight / self.lp_value
        return out

    def to_obj(self) -> dict:
        ratios = self.ratios()

        def fmt(q: Optional[Fraction]) -> Optional[str]:
            return None if q is None else format_rational(q)

        return {
            "instance": self.instance_id,
            "k": self.k,
            "lp": format_rational(self.lp_value),
            "pivots": self.lp_pivots,
            "vc": fmt(self.vc_exact),
            "vcOptimal": self.vc_optimal,
            "nodes": self.nodes,
            "rounded": fmt(self.rounded_weight),
            "greedy": fmt(self.greedy_weight),
            "vcOverLp": fmt(ratios["vc/lp"]),
            "roundedOverLp": fmt(ratios["rounded/lp"]),
            "halfK": format_rational(Fraction(self.k, 2)),
        }


def solve_all(
    h: PartiteHypergraph,
    instance_id: str = "instance",
    modes: Sequence[str] = ("lp", "exact", "round", "greedy"),
    node_budget: Optional[int] = None,
) -> SolveReport:
    """Run the requested solvers and assemble a report.

    Asserts weak duality lp <= vc and the vc/lp <= k/2 bound whenever the
    exact solve completes.
    """
    problems = h.validate()
    if problems:
        raise ValueError(f"invalid instance: {problems[0]}")
    sol, pivots = solve_lp(h)
    report = SolveReport(
        instance_id=instance_id, k=h.k, lp_value=sol.objective, lp_pivots=pivots
    )
    vc_exact = None
    vc_optimal = True
    nodes = 0
    if "exact" in modes:
        cert, stats = exact_min_vc(h, node_budget=node_budget)
        vc_exact, vc_optimal, nodes = cert.weight, stats.optimal, stats.nodes
        if vc_optimal:
            if sol.objective > vc_exact:
                raise AssertionError("weak duality violated: lp > vc")
            if vc_exact > Fraction(h.k, 2) * sol.objective:
                raise AssertionError("vc/lp exceeded k/2; solver defect")
    rounded = None
    if "round" in modes:
        cert, _ = best_threshold_round(h, sol)
        rounded = cert.weight
    greedy = None
    if "greedy" in modes:
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            greedy = greedy_matching_cover(h).weight
    return SolveReport(
        instance_id=instance_id,
        k=h.k,
        lp_value=sol.objective,
        lp_pivots=pivots,
        vc_exact=vc_exact,
        vc_optimal=vc_optimal,
        nodes=nodes,
        rounded_weight=rounded,
        greedy_weight=greedy,
    )
