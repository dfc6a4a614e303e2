"""Shared generators for randomized tests.

All randomness is seeded; helpers produce valid instances by construction
and are independent of the library's own generators.
"""

from __future__ import annotations

import itertools
import random
from fractions import Fraction

from hypervc.hypergraph import FractionalSolution, PartiteHypergraph


def random_hypergraph(
    rng: random.Random,
    k: int,
    max_per_part: int = 10,
    max_edges: int = 200,
    weighted: bool = False,
) -> PartiteHypergraph:
    """Random valid k-partite k-uniform instance with at least one edge."""
    parts = [
        [f"p{i}v{j}" for j in range(rng.randint(1, max_per_part))]
        for i in range(k)
    ]
    total_tuples = 1
    for p in parts:
        total_tuples *= len(p)
    n_edges = rng.randint(1, min(max_edges, total_tuples))
    edges = set()
    while len(edges) < n_edges:
        edges.add(tuple(rng.choice(p) for p in parts))
    weights = {}
    if weighted:
        for p in parts:
            for v in p:
                if rng.random() < 0.5:
                    weights[v] = Fraction(rng.randint(1, 20), rng.randint(1, 10))
    return PartiteHypergraph.make(k=k, parts=parts, weights=weights, edges=edges)


def random_feasible_x(
    rng: random.Random, h: PartiteHypergraph
) -> FractionalSolution:
    """Random point of the LP polytope: random values repaired edge by edge."""
    values = {
        v: Fraction(rng.randint(0, 8), 8) for v in h.vertex_set
    }
    for e in h.edges:
        s = sum(values[v] for v in e)
        if s < 1:
            v = rng.choice(list(e))
            values[v] = min(Fraction(1), values[v] + (1 - s))
    sol = FractionalSolution.of(h, values)
    assert not sol.violations(h)
    return sol


def reduction_edge_oracle(inst) -> set[frozenset]:
    """Independent re-enumeration of the reduction's hyperedges.

    Walks every one-vertex-per-part tuple of the built hypergraph and keeps
    it iff the membership rule holds: one block of a constraint's target
    variable, the remaining non-dummy blocks all of its source variable,
    the selected biases q summing to at least 1, and the projected mask
    intersection disjoint from the target mask.  This is deliberately a
    different loop structure from the generator.
    """
    h = inst.hypergraph
    params = inst.params
    csp = inst.csp

    def parse(v):
        part, _, rest = v.partition("/")
        if rest == "d":
            return int(part), None
        assert rest.startswith("H:")
        var, j, mask = rest[2:].rsplit(",", 2)
        return int(part), (var, int(j), int(mask))

    def is_edge(tup) -> bool:
        blocks = [info for _, info in map(parse, tup) if info is not None]
        for (x, y), pi in csp.constraints.items():
            y_blocks = [b for b in blocks if b[0] == y]
            x_blocks = [b for b in blocks if b[0] == x]
            if len(y_blocks) != 1 or len(x_blocks) != len(blocks) - 1:
                continue
            if not x_blocks:
                continue
            gate = sum((params.q(j) for _, j, _ in x_blocks), Fraction(0))
            if gate < 1:
                continue
            bits_x = csp.ranges[csp.layer_of[x]]
            inter = (1 << bits_x) - 1
            for _, _, m in x_blocks:
                inter &= m
            projected = 0
            a = 0
            while inter:
                if inter & 1:
                    projected |= 1 << pi[a]
                inter >>= 1
                a += 1
            if projected & y_blocks[0][2]:
                continue
            return True
        return False

    return {
        frozenset(tup)
        for tup in itertools.product(*h.parts)
        if is_edge(tup)
    }


def brute_force_min_vc(h: PartiteHypergraph) -> Fraction:
    """Exact minimum cover weight by subset enumeration (tiny instances)."""
    vertices = sorted(h.vertex_set)
    assert len(vertices) <= 16, "brute force oracle limited to 16 vertices"
    best = h.total_weight()
    for bits in range(1 << len(vertices)):
        combo = [v for i, v in enumerate(vertices) if (bits >> i) & 1]
        ok, _ = h.is_cover(combo)
        if ok:
            best = min(best, h.set_weight(combo))
    return best
