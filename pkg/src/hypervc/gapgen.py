"""Integrality-gap instance generator for the k-partite covering LP.

Each part i holds r weighted-value vertices x_{i1..ir} with fractional
value 2j/(rk) and rk+1 value-zero vertices y_{il}; hyperedges are exactly
the one-per-part tuples whose value sum reaches 1.  The fractional vector
has objective r+1 while every integral cover needs at least rk/2 vertices,
so the ratio approaches k/2 as r grows.

The y vertices of a part share a neighborhood, so the default "quotient"
instance keeps a single y per part carrying the multiplicity rk+1 as its
weight; the quotient has the same LP value and the same minimum cover as
the fully expanded unweighted instance.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Optional

from .budget import BudgetExceeded, resolve_budget
from .hypergraph import FractionalSolution, PartiteHypergraph
from .optimize import exact_min_vc, solve_lp
from .rational import format_rational

DEFAULT_EDGE_BUDGET = 2_000_000


@dataclass(frozen=True)
class AhkInstance:
    """Gap instance with its feasible fractional certificate."""

    r: int
    k: int
    quotient: bool
    hypergraph: PartiteHypergraph
    cert: FractionalSolution


def _x_id(i: int, j: int) -> str:
    return f"{i}/x:{j}"


def _y_id(i: int, l: int) -> str:
    return f"{i}/y:{l}"


def build_ahk(
    r: int,
    k: int,
    full: bool = False,
    edge_budget: Optional[int] = None,
) -> AhkInstance:
    """Build the gap instance for parameters (r, k).

    With full=False (default) each part carries one representative y vertex
    of weight rk+1; with full=True all rk+1 unit-weight y copies and the
    expanded edge set are materialized.
    """
    if r < 1:
        raise ValueError(f"r must be positive, got {r}")
    if k < 3:
        raise ValueError(f"k must be at least 3, got {k}")
    limit = resolve_budget(edge_budget if edge_budget is not None else DEFAULT_EDGE_BUDGET)

    y_count = (r * k + 1) if full else 1
    parts = []
    weights: dict[str, Fraction] = {}
    values: dict[str, Fraction] = {}
    for i in range(1, k + 1):
        part = [_x_id(i, j) for j in range(1, r + 1)]
        part += [_y_id(i, l) for l in range(1, y_count + 1)]
        parts.append(part)
        for j in range(1, r + 1):
            values[_x_id(i, j)] = Fraction(2 * j, r * k)
        for l in range(1, y_count + 1):
            values[_y_id(i, l)] = Fraction(0)
        if not full:
            weights[_y_id(i, 1)] = Fraction(r * k + 1)

    candidates = (r + y_count) ** k
    if candidates > limit:
        raise BudgetExceeded(f"{candidates} candidate tuples > budget {limit}")

    # Enumerate per-part choices j in [r] (an x vertex) or 0 (a y vertex);
    # expand y multiplicity afterwards.
    edges: list[list[str]] = []

    def grow(i: int, chosen: list[int], total: Fraction) -> None:
        if i > k:
            if total >= 1:
                tuples: list[list[str]] = [[]]
                for part_idx, j in enumerate(chosen, start=1):
                    if j > 0:
                        ids = [_x_id(part_idx, j)]
                    else:
                        ids = [_y_id(part_idx, l) for l in range(1, y_count + 1)]
                    tuples = [t + [v] for t in tuples for v in ids]
                edges.extend(tuples)
            return
        for j in range(0, r + 1):
            grow(i + 1, chosen + [j], total + (Fraction(2 * j, r * k) if j else 0))

    grow(1, [], Fraction(0))

    h = PartiteHypergraph.make(k=k, parts=parts, weights=weights, edges=edges)
    cert = FractionalSolution.of(h, values)
    problems = h.validate()
    if problems:
        raise AssertionError(f"generator produced an invalid instance: {problems[0]}")
    problems = cert.violations(h)
    if problems:
        raise AssertionError(f"fractional certificate infeasible: {problems[0]}")
    return AhkInstance(r=r, k=k, quotient=not full, hypergraph=h, cert=cert)


@dataclass(frozen=True)
class GapReport:
    r: int
    k: int
    lp_value: Fraction
    cert_value: Fraction
    vc_lower: int
    vc_exact: Optional[Fraction]
    vc_optimal: bool
    ratio: Optional[Fraction]
    gap_bound: Fraction

    def to_obj(self) -> dict:
        return {
            "r": self.r,
            "k": self.k,
            "lp": format_rational(self.lp_value),
            "certValue": format_rational(self.cert_value),
            "vcLower": self.vc_lower,
            "vc": None if self.vc_exact is None else format_rational(self.vc_exact),
            "vcOptimal": self.vc_optimal,
            "ratio": None if self.ratio is None else format_rational(self.ratio),
            "gapBound": format_rational(self.gap_bound),
        }


def verify_gap(
    inst: AhkInstance,
    exact: bool = True,
    node_budget: Optional[int] = None,
) -> GapReport:
    """Solve the LP, run the exact cover solver, and report the ratio.

    The construction's fractional certificate has value r+1, so the LP
    optimum is at most r+1 (it equals r+1 exactly when rk is even; for odd
    rk the scaled vector j/ceil(rk/2) is cheaper).  The exact cover must
    reach the combinatorial lower bound ceil(rk/2); the ratio against the
    certificate value is at least rk/(2(r+1)), and the ratio against the
    true optimum can only be larger.
    """
    r, k = inst.r, inst.k
    sol, _ = solve_lp(inst.hypergraph)
    if inst.cert.objective != r + 1:
        raise AssertionError(f"certificate value {inst.cert.objective} != r+1")
    if sol.objective > r + 1:
        raise AssertionError(f"LP optimum {sol.objective} above the certificate value")
    vc_lower = ceil(Fraction(r * k, 2))
    vc_exact: Optional[Fraction] = None
    vc_optimal = True
    if exact:
        cert, stats = exact_min_vc(inst.hypergraph, node_budget=node_budget)
        vc_exact, vc_optimal = cert.weight, stats.optimal
        if vc_optimal and vc_exact < vc_lower:
            raise AssertionError(
                f"exact cover {vc_exact} below the lower bound {vc_lower}"
            )
    numerator = vc_exact if (vc_exact is not None and vc_optimal) else Fraction(vc_lower)
    ratio = numerator / sol.objective
    return GapReport(
        r=r,
        k=k,
        lp_value=sol.objective,
        cert_value=inst.cert.objective,
        vc_lower=vc_lower,
        vc_exact=vc_exact,
        vc_optimal=vc_optimal,
        ratio=ratio,
        gap_bound=Fraction(r * k, 2 * (r + 1)),
    )
