"""Biased-Long-Code reduction from a layered projection CSP to (k+1)-partite
(k+1)-uniform weighted vertex cover, with its completeness certificate and
the decoding pipeline that extracts a labeling from an independent set.

Per CSP variable x in layer l there are (k+1)·r Long-Code blocks: all
subsets of the layer's label range, one block per (part, bias) pair, with
vertex weight mu_{p_j}(subset) / (L·|X_l|·r·(k+1)).  Biases are
q_j = 2j/(rk) and p_j = 1 - q_j - eps.  Hyperedges connect blocks of
constrained variable pairs subject to a projected-intersection-empty
condition; k+1 dummy vertices of weight 2 each force maximum independent
sets to keep all dummies.
"""

from __future__ import annotations

import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Mapping, Optional, Sequence

from .budget import BudgetExceeded, resolve_budget
from .hypergraph import IndependentSetCertificate, PartiteHypergraph
from .pcp import LayeredCsp, satisfied_fraction
from .rational import format_rational, parse_rational
from .setfam import chernoff_t, measure_set, members_of, prefix_mask

DEFAULT_EDGE_BUDGET = 5_000_000


class NotInXPrimeError(ValueError):
    """The variable's significant-block count is below rk/2 + r."""


@dataclass(frozen=True)
class ReductionParams:
    """k >= 3 (the instance is (k+1)-partite), bias step count r, and eps."""

    k: int
    eps: Fraction
    r: int

    @classmethod
    def make(cls, k: int, eps: Fraction, r: Optional[int] = None) -> "ReductionParams":
        eps = Fraction(eps)
        if k < 3:
            raise ValueError(f"k must be at least 3, got {k}")
        if not (0 < eps < 1):
            raise ValueError(f"eps must lie in (0,1), got {eps}")
        if r is None:
            r = default_r(eps)
        if r < 1:
            raise ValueError(f"r must be positive, got {r}")
        params = cls(k=k, eps=eps, r=r)
        for j in range(1, r + 1):
            if not (0 < params.p(j) < 1):
                raise ValueError(
                    f"bias p_{j} = {params.p(j)} outside (0,1); "
                    "eps must stay below 1 - 2/k"
                )
        return params

    def q(self, j: int) -> Fraction:
        return Fraction(2 * j, self.r * self.k)

    def p(self, j: int) -> Fraction:
        return 1 - self.q(j) - self.eps

    def to_obj(self) -> dict:
        return {"k": self.k, "eps": format_rational(self.eps), "r": self.r}

    @classmethod
    def from_obj(cls, obj: dict) -> "ReductionParams":
        return cls.make(k=obj["k"], eps=parse_rational(obj["eps"]), r=obj["r"])


def default_r(eps: Fraction) -> int:
    """Documented default r = ceil(10 / eps^2); usually far too large for
    desk scale, so callers normally override it."""
    eps = Fraction(eps)
    inv = 10 / (eps * eps)
    return int(inv) if inv.denominator == 1 else int(inv) + 1


def dummy_id(i: int) -> str:
    return f"{i}/d"


def block_vertex_id(i: int, var: str, j: int, mask: int) -> str:
    return f"{i}/H:{var},{j},{mask}"


# Labels are 0-based in the CSP; subsets use bit a for label a.
def project_mask(pi: Sequence[int], mask: int) -> int:
    """Image of a label subset under a projection table, as a bitmask."""
    out = 0
    a = 0
    while mask:
        if mask & 1:
            out |= 1 << pi[a]
        mask >>= 1
        a += 1
    return out


@dataclass(frozen=True)
class ReductionInstance:
    params: ReductionParams
    csp: LayeredCsp
    hypergraph: PartiteHypergraph

    @cached_property
    def variables(self) -> tuple[str, ...]:
        return tuple(x for layer in self.csp.layers for x in layer)

    def domain_bits(self, var: str) -> int:
        return self.csp.ranges[self.csp.layer_of[var]]

    def block_masks(self, var: str) -> range:
        return range(1 << self.domain_bits(var))

    def block_vertices(self, var: str, i: int, j: int) -> list[str]:
        return [block_vertex_id(i, var, j, m) for m in self.block_masks(var)]

    def dummies(self) -> list[str]:
        return [dummy_id(i) for i in range(1, self.params.k + 2)]

    def block_weight_scale(self, var: str) -> Fraction:
        l = self.csp.layer_of[var]
        return Fraction(
            1,
            len(self.csp.layers)
            * len(self.csp.layers[l])
            * self.params.r
            * (self.params.k + 1),
        )

    def block_measure(self, iset: frozenset[str], var: str, i: int, j: int) -> Fraction:
        """Exact mu_{p_j} of the independent set's trace on one block."""
        n = self.domain_bits(var)
        p = self.params.p(j)
        total = Fraction(0)
        for m in self.block_masks(var):
            if block_vertex_id(i, var, j, m) in iset:
                total += measure_set(m, n, p)
        return total

    def to_obj(self) -> dict:
        return {
            "params": self.params.to_obj(),
            "csp": self.csp.to_obj(),
            "hypergraph": self.hypergraph.to_obj(),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "ReductionInstance":
        params = ReductionParams.from_obj(obj["params"])
        csp = LayeredCsp.from_obj(obj["csp"])
        inst = build_reduction(csp, params)
        given = PartiteHypergraph.from_obj(obj["hypergraph"])
        if given.serialize() != inst.hypergraph.serialize():
            raise ValueError("hypergraph does not match a rebuild from params+csp")
        return inst

    def serialize(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(",", ":"))


def build_reduction(
    csp: LayeredCsp,
    params: ReductionParams,
    edge_budget: Optional[int] = None,
) -> ReductionInstance:
    """Construct the (k+1)-partite hypergraph for a layered CSP.

    Edge enumeration collapses the permutation quantifier: an edge is fixed
    by the part carrying the constraint's target variable, a bias index
    there, and per remaining part a bias index in [r] (Long-Code vertex) or
    0 (dummy), gated by sum of the selected q's reaching 1.
    """
    problems = csp.validate()
    if problems:
        raise ValueError(f"invalid CSP: {problems[0]}")
    limit = resolve_budget(edge_budget if edge_budget is not None else DEFAULT_EDGE_BUDGET)
    k, r = params.k, params.r
    kp1 = k + 1
    L = len(csp.layers)

    parts: list[list[str]] = [[dummy_id(i)] for i in range(1, kp1 + 1)]
    weights: dict[str, Fraction] = {dummy_id(i): Fraction(2) for i in range(1, kp1 + 1)}
    for l, layer in enumerate(csp.layers):
        bits = csp.ranges[l]
        scale = Fraction(1, L * len(layer) * r * kp1)
        for x in layer:
            for i in range(1, kp1 + 1):
                for j in range(1, r + 1):
                    p = params.p(j)
                    for m in range(1 << bits):
                        vid = block_vertex_id(i, x, j, m)
                        parts[i - 1].append(vid)
                        weights[vid] = measure_set(m, bits, p) * scale

    edges: list[tuple[str, ...]] = []
    work = 0
    for (x, y), pi in sorted(csp.constraints.items()):
        bits_x = csp.ranges[csp.layer_of[x]]
        bits_y = csp.ranges[csp.layer_of[y]]
        for part_y in range(1, kp1 + 1):
            x_parts = [i for i in range(1, kp1 + 1) if i != part_y]
            for j_y in range(1, r + 1):
                for js in itertools.product(range(0, r + 1), repeat=k):
                    gate = sum(
                        (params.q(j) for j in js if j != 0), Fraction(0)
                    )
                    if gate < 1:
                        continue
                    nonzero = [
                        (part, j) for part, j in zip(x_parts, js) if j != 0
                    ]
                    tuples = (1 << bits_x) ** len(nonzero) * (1 << bits_y)
                    work += tuples
                    if work > limit:
                        raise BudgetExceeded(
                            f"edge enumeration exceeds budget {limit}"
                        )
                    for x_masks in itertools.product(
                        range(1 << bits_x), repeat=len(nonzero)
                    ):
                        inter = prefix_mask(bits_x)
                        for m in x_masks:
                            inter &= m
                        projected = project_mask(pi, inter)
                        for u in range(1 << bits_y):
                            if projected & u:
                                continue
                            edge = [
                                dummy_id(part)
                                for part, j in zip(x_parts, js)
                                if j == 0
                            ]
                            edge += [
                                block_vertex_id(part, x, j, m)
                                for (part, j), m in zip(nonzero, x_masks)
                            ]
                            edge.append(block_vertex_id(part_y, y, j_y, u))
                            edges.append(tuple(edge))

    h = PartiteHypergraph.make(k=kp1, parts=parts, weights=weights, edges=edges)
    problems = h.validate()
    if problems:
        raise AssertionError(f"reduction produced an invalid hypergraph: {problems[0]}")
    return ReductionInstance(params=params, csp=csp, hypergraph=h)


def completeness_certificate(
    inst: ReductionInstance, labeling: Mapping[str, int]
) -> IndependentSetCertificate:
    """Independent set for a fully satisfying labeling: the dummies plus, in
    every block, all subsets containing the variable's label.

    Its non-dummy weight is exactly 1 - (1/k)(1 + 1/r) - eps.
    """
    csp, params = inst.csp, inst.params
    for x in inst.variables:
        if x not in labeling:
            raise ValueError(f"labeling misses variable {x!r}")
        if not (0 <= labeling[x] < inst.domain_bits(x)):
            raise ValueError(f"label {labeling[x]} out of range for {x!r}")
    for (x, y), pi in csp.constraints.items():
        if pi[labeling[x]] != labeling[y]:
            raise ValueError(f"labeling does not satisfy the constraint ({x!r},{y!r})")
    members: set[str] = set(inst.dummies())
    for x in inst.variables:
        bit = 1 << labeling[x]
        for i in range(1, params.k + 2):
            for j in range(1, params.r + 1):
                for m in inst.block_masks(x):
                    if m & bit:
                        members.add(block_vertex_id(i, x, j, m))
    return IndependentSetCertificate.of(inst.hypergraph, members)


def completeness_weight(params: ReductionParams) -> Fraction:
    """Closed-form non-dummy weight of the completeness certificate."""
    k, r = params.k, params.r
    return 1 - Fraction(1, k) * (1 + Fraction(1, r)) - params.eps


def significant_blocks(
    inst: ReductionInstance, iset: Iterable[str], x: str
) -> dict[tuple[int, int], Fraction]:
    """Blocks (part, bias) of x whose trace measure reaches eps/2."""
    iset = frozenset(iset)
    threshold = inst.params.eps / 2
    out: dict[tuple[int, int], Fraction] = {}
    for i in range(1, inst.params.k + 2):
        for j in range(1, inst.params.r + 1):
            mu = inst.block_measure(iset, x, i, j)
            if mu >= threshold:
                out[(i, j)] = mu
    return out


def significance_bound(params: ReductionParams) -> Fraction:
    """Minimum significant-block count for pipeline membership: rk/2 + r."""
    return Fraction(params.r * params.k, 2) + params.r


def good_sequence(
    inst: ReductionInstance, iset: Iterable[str], x: str
) -> tuple[int, ...]:
    """Per part, the largest significant bias index (0 if none).

    The sequence total is at least rk/2 + r.  Raises NotInXPrimeError when
    the variable's significant count misses the bound.
    """
    sig = significant_blocks(inst, iset, x)
    if len(sig) < significance_bound(inst.params):
        raise NotInXPrimeError(
            f"{x!r}: {len(sig)} significant blocks < {significance_bound(inst.params)}"
        )
    seq = []
    for i in range(1, inst.params.k + 2):
        js = [j for (ii, j) in sig if ii == i]
        seq.append(max(js) if js else 0)
    total = sum(seq)
    if total < significance_bound(inst.params):
        raise AssertionError("good-sequence total below its guaranteed bound")
    return tuple(seq)


@dataclass(frozen=True)
class DecodeReport:
    """Outcome of decoding an independent set on one layer pair."""

    layer_pair: tuple[int, int]
    seed: int
    t: int
    labels: dict[str, int]
    b_sets: dict[str, tuple[int, ...]]
    i0_choices: dict[str, int]
    empty_b: tuple[str, ...]
    not_in_x_prime: tuple[str, ...]
    satisfied_fraction: object  # Fraction or the no-constraints marker

    def to_obj(self) -> dict:
        frac = self.satisfied_fraction
        return {
            "layerPair": list(self.layer_pair),
            "seed": self.seed,
            "t": self.t,
            "labels": {x: a for x, a in sorted(self.labels.items())},
            "bSets": {x: list(b) for x, b in sorted(self.b_sets.items())},
            "i0": {x: i for x, i in sorted(self.i0_choices.items())},
            "emptyB": list(self.empty_b),
            "notInXPrime": list(self.not_in_x_prime),
            "satisfiedFraction": (
                frac if isinstance(frac, str) else format_rational(frac)
            ),
        }


def witness_vertices(
    inst: ReductionInstance,
    iset: frozenset[str],
    x: str,
    seq: Sequence[int],
    i0: int,
    t: int,
) -> Optional[tuple[int, ...]]:
    """Exhaustive search for block vertices whose intersection has size < t.

    One vertex per part i != i0 with seq[i-1] != 0, drawn from the
    independent set's trace on block (i, seq[i-1]); deterministic order,
    first qualifying tuple wins.  None when no tuple qualifies.
    """
    positions = [
        (i, seq[i - 1])
        for i in range(1, inst.params.k + 2)
        if i != i0 and seq[i - 1] != 0
    ]
    pools: list[list[int]] = []
    for i, j in positions:
        pool = sorted(
            m
            for m in inst.block_masks(x)
            if block_vertex_id(i, x, j, m) in iset
        )
        pools.append(pool)
    full = prefix_mask(inst.domain_bits(x))
    for masks in itertools.product(*pools):
        inter = full
        for m in masks:
            inter &= m
            if inter.bit_count() < t:
                break
        if inter.bit_count() < t:
            return masks if masks else ()
    # Empty positions: the intersection is the whole domain.
    if not positions and full.bit_count() < t:
        return ()
    return None


def decode_labeling(
    inst: ReductionInstance,
    iset: Iterable[str],
    seed: int,
    layer_pair: tuple[int, int],
) -> DecodeReport:
    """Decode an independent set into a labeling of two layers.

    For each pipeline variable x of the earlier layer: pick its good
    sequence, a random part index i0, witness vertices with intersection
    B(x) of size below t = chernoff-threshold(eps/2, eps), and a random
    label from B(x).  Later-layer variables take the label hit by the most
    projected B(x) sets, ties toward the smaller label.  All randomness
    comes from one seeded generator consumed in canonical variable order.
    """
    iset = frozenset(iset)
    ok, witness = inst.hypergraph.is_independent(iset)
    if not ok:
        raise ValueError(f"set is not independent; edge {witness} contained")
    la, lb = layer_pair
    if not 0 <= la < lb < len(inst.csp.layers):
        raise ValueError(f"bad layer pair {layer_pair}")
    t = chernoff_t(inst.params.eps / 2, inst.params.eps)
    rng = random.Random(seed)
    labels: dict[str, int] = {}
    b_sets: dict[str, tuple[int, ...]] = {}
    i0_choices: dict[str, int] = {}
    empty_b: list[str] = []
    skipped: list[str] = []

    for x in sorted(inst.csp.layers[la]):
        try:
            seq = good_sequence(inst, iset, x)
        except NotInXPrimeError:
            skipped.append(x)
            continue
        i0 = rng.randrange(1, inst.params.k + 2)
        i0_choices[x] = i0
        masks = witness_vertices(inst, iset, x, seq, i0, t)
        if masks is None:
            # The structural guarantee says this cannot happen when the
            # measure preconditions hold; surface it loudly.
            raise AssertionError(f"no witness tuple with intersection below t for {x!r}")
        inter = prefix_mask(inst.domain_bits(x))
        for m in masks:
            inter &= m
        b = members_of(inter)
        b_sets[x] = b
        if not b:
            empty_b.append(x)
            continue
        # Labels are 0-based; members_of is 1-based bit positions.
        labels[x] = rng.choice(sorted(b)) - 1

    for y in sorted(inst.csp.layers[lb]):
        try:
            good_sequence(inst, iset, y)
        except NotInXPrimeError:
            skipped.append(y)
            continue
        neighbors = [
            x
            for x in inst.csp.neighbors_in_layer(y, la)
            if x in b_sets and b_sets[x]
        ]
        counts = [0] * inst.domain_bits(y)
        for x in neighbors:
            pi = inst.csp.constraints[(x, y)]
            b_mask = 0
            for e in b_sets[x]:
                b_mask |= 1 << (e - 1)
            proj = project_mask(pi, b_mask)
            for a in members_of(proj):
                counts[a - 1] += 1
        best_a = max(range(len(counts)), key=lambda a: (counts[a], -a))
        labels[y] = best_a

    frac = satisfied_fraction(inst.csp, labels, la, lb)
    return DecodeReport(
        layer_pair=(la, lb),
        seed=seed,
        t=t,
        labels=labels,
        b_sets=b_sets,
        i0_choices=i0_choices,
        empty_b=tuple(empty_b),
        not_in_x_prime=tuple(skipped),
        satisfied_fraction=frac,
    )
