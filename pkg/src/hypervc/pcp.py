"""Layered label-cover instances: projection constraints between layers.

Variables live in L layers; a constraint between x in an earlier layer and
y in a later layer is a total projection table from x's label range onto
y's.  Toy generators (optionally with a planted consistent labeling) stand
in for the asymptotic existence results; exhaustive two-layer optimization
serves as the exact oracle.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import ceil
from typing import Iterable, Mapping, Optional, Sequence

from .budget import BudgetExceeded, resolve_budget

DEFAULT_LABELING_BUDGET = 2_000_000

NO_CONSTRAINTS = "no-constraints"


@dataclass(frozen=True)
class LayeredCsp:
    """Immutable layered projection CSP.

    layers[l] lists variable names; ranges[l] is the label count of layer l
    (labels are 0..R-1); constraints maps (x, y) with layer(x) < layer(y)
    to the projection table applied to x's label.
    """

    layers: tuple[tuple[str, ...], ...]
    ranges: tuple[int, ...]
    constraints: Mapping[tuple[str, str], tuple[int, ...]]
    soundness_param: Optional[Fraction] = None

    @cached_property
    def layer_of(self) -> Mapping[str, int]:
        out: dict[str, int] = {}
        for l, layer in enumerate(self.layers):
            for x in layer:
                out[x] = l
        return out

    def validate(self) -> list[str]:
        problems = []
        if len(self.ranges) != len(self.layers):
            problems.append("one label range per layer required")
        seen: set[str] = set()
        for layer in self.layers:
            for x in layer:
                if x in seen:
                    problems.append(f"variable {x!r} occurs twice")
                seen.add(x)
        for (x, y), pi in self.constraints.items():
            if x not in seen or y not in seen:
                problems.append(f"constraint ({x!r},{y!r}) uses unknown variable")
                continue
            lx, ly = self.layer_of[x], self.layer_of[y]
            if lx >= ly:
                problems.append(f"constraint ({x!r},{y!r}) not from earlier to later layer")
                continue
            if len(pi) != self.ranges[lx]:
                problems.append(f"projection for ({x!r},{y!r}) not total on the source range")
            if any(not (0 <= a < self.ranges[ly]) for a in pi):
                problems.append(f"projection for ({x!r},{y!r}) maps outside the target range")
        return problems

    def constraints_between(self, l: int, lp: int) -> list[tuple[str, str]]:
        if not 0 <= l < lp < len(self.layers):
            raise ValueError(f"need 0 <= l < l' < L, got {l}, {lp}")
        lof = self.layer_of
        return sorted(
            (x, y)
            for (x, y) in self.constraints
            if lof[x] == l and lof[y] == lp
        )

    def neighbors_in_layer(self, y: str, l: int) -> list[str]:
        """Variables of layer l constrained with y."""
        return sorted(x for (x, yy) in self.constraints if yy == y and self.layer_of[x] == l)

    def to_obj(self) -> dict:
        return {
            "layers": [list(layer) for layer in self.layers],
            "ranges": list(self.ranges),
            "constraints": [
                {"x": x, "y": y, "pi": list(pi)}
                for (x, y), pi in sorted(self.constraints.items())
            ],
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "LayeredCsp":
        constraints = {
            (c["x"], c["y"]): tuple(c["pi"]) for c in obj["constraints"]
        }
        return cls(
            layers=tuple(tuple(layer) for layer in obj["layers"]),
            ranges=tuple(obj["ranges"]),
            constraints=constraints,
        )

    def serialize(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(",", ":"))


Labeling = Mapping[str, int]


def satisfied_fraction(
    csp: LayeredCsp, labeling: Labeling, l: int, lp: int
) -> Fraction | str:
    """Fraction of the constraints between layers l and l' that the labeling
    satisfies; the NO_CONSTRAINTS marker when the pair carries none.

    Unlabeled endpoints count as unsatisfied.
    """
    pairs = csp.constraints_between(l, lp)
    if not pairs:
        return NO_CONSTRAINTS
    good = 0
    for x, y in pairs:
        ax, ay = labeling.get(x), labeling.get(y)
        if ax is None or ay is None:
            continue
        if csp.constraints[(x, y)][ax] == ay:
            good += 1
    return Fraction(good, len(pairs))


def best_labeling(
    csp: LayeredCsp,
    l: int,
    lp: int,
    budget: Optional[int] = None,
) -> tuple[dict[str, int], Fraction | str]:
    """Exhaustive optimum over labelings of two layers.

    Ties break toward the lexicographically smallest label vector in the
    canonical variable order, so results are deterministic.
    """
    pairs = csp.constraints_between(l, lp)
    if not pairs:
        return {}, NO_CONSTRAINTS
    limit = resolve_budget(budget if budget is not None else DEFAULT_LABELING_BUDGET)
    variables = sorted(csp.layers[l]) + sorted(csp.layers[lp])
    total = 1
    for x in variables:
        total *= csp.ranges[csp.layer_of[x]]
        if total > limit:
            raise BudgetExceeded(f"labeling space exceeds budget {limit}")

    best: Optional[dict[str, int]] = None
    best_frac = Fraction(-1)

    def assign(idx: int, labeling: dict[str, int]) -> None:
        nonlocal best, best_frac
        if idx == len(variables):
            frac = satisfied_fraction(csp, labeling, l, lp)
            if frac > best_frac:
                best, best_frac = dict(labeling), frac
            return
        x = variables[idx]
        for a in range(csp.ranges[csp.layer_of[x]]):
            labeling[x] = a
            assign(idx + 1, labeling)
        del labeling[x]

    assign(0, {})
    assert best is not None
    return best, best_frac


@dataclass(frozen=True)
class DensityWitness:
    layer_a: int
    layer_b: int
    fraction: Fraction


DENSITY_FAIL = "weak-density-fail"


def weak_density_check(
    csp: LayeredCsp,
    delta: Fraction,
    layer_idxs: Sequence[int],
    subsets: Sequence[Iterable[str]],
):
    """Look for a layer pair whose chosen subsets carry a δ²/4 constraint share.

    Requires m >= ceil(2/δ) layers and |S_i| >= δ|X_{l_i}|.  Returns a
    DensityWitness or the DENSITY_FAIL marker if no pair qualifies.
    """
    delta = Fraction(delta)
    if delta <= 0:
        raise ValueError("delta must be positive")
    m = len(layer_idxs)
    if m < ceil(2 / delta):
        raise ValueError(f"need at least ceil(2/delta) = {ceil(2 / delta)} layers, got {m}")
    if len(subsets) != m:
        raise ValueError("one variable subset per chosen layer required")
    if sorted(layer_idxs) != list(layer_idxs) or len(set(layer_idxs)) != m:
        raise ValueError("layer indices must be strictly increasing")
    subs = []
    for l, s in zip(layer_idxs, subsets):
        ss = frozenset(s)
        if not ss <= set(csp.layers[l]):
            raise ValueError(f"subset for layer {l} contains foreign variables")
        if len(ss) * 1 < delta * len(csp.layers[l]):
            raise ValueError(f"subset for layer {l} smaller than delta fraction")
        subs.append(ss)
    threshold = delta * delta / 4
    for a in range(m):
        for b in range(a + 1, m):
            la, lb = layer_idxs[a], layer_idxs[b]
            pairs = csp.constraints_between(la, lb)
            if not pairs:
                continue
            inside = sum(1 for (x, y) in pairs if x in subs[a] and y in subs[b])
            if Fraction(inside, len(pairs)) >= threshold:
                return DensityWitness(
                    layer_a=la, layer_b=lb, fraction=Fraction(inside, len(pairs))
                )
    return DENSITY_FAIL


@dataclass(frozen=True)
class ToySpec:
    """Parameters for the seeded toy-instance generator."""

    layer_count: int
    vars_per_layer: int
    range_sizes: Sequence[int]
    constraint_density: Fraction = Fraction(1)
    planted: bool = True
    seed: int = 0


def make_toy_layered_csp(spec: ToySpec) -> tuple[LayeredCsp, Optional[dict[str, int]]]:
    """Deterministic-from-seed toy instance; planted instances hide a fully
    consistent labeling (returned alongside)."""
    if len(spec.range_sizes) != spec.layer_count:
        raise ValueError("one range size per layer required")
    rng = random.Random(spec.seed)
    layers = tuple(
        tuple(f"l{l}v{i}" for i in range(spec.vars_per_layer))
        for l in range(spec.layer_count)
    )
    ranges = tuple(int(r) for r in spec.range_sizes)
    hidden: Optional[dict[str, int]] = None
    if spec.planted:
        hidden = {
            x: rng.randrange(ranges[l])
            for l, layer in enumerate(layers)
            for x in layer
        }
    density = Fraction(spec.constraint_density)
    constraints: dict[tuple[str, str], tuple[int, ...]] = {}
    for l in range(spec.layer_count):
        for lp in range(l + 1, spec.layer_count):
            for x in layers[l]:
                for y in layers[lp]:
                    if rng.random() >= density:
                        continue
                    pi = [rng.randrange(ranges[lp]) for _ in range(ranges[l])]
                    if hidden is not None:
                        pi[hidden[x]] = hidden[y]
                    constraints[(x, y)] = tuple(pi)
    csp = LayeredCsp(layers=layers, ranges=ranges, constraints=constraints)
    problems = csp.validate()
    if problems:
        raise AssertionError(f"generator produced an invalid instance: {problems[0]}")
    return csp, hidden
