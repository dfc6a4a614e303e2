"""Biased measures, shifting, and cross-intersecting structure on set families.

Sets over a ground set [n] are int bitmasks: element e corresponds to bit
e-1.  All measures are exact rationals.  Exhaustive checks run at desk
scale only and are budget-capped.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import mpmath

from .budget import BudgetExceeded, resolve_budget

CROSS_PRODUCT_BUDGET = 1_000_000
DISJOINT_EXHAUSTIVE_LIMIT = 25


def mask_of(members: Iterable[int], n: int) -> int:
    m = 0
    for e in members:
        if not 1 <= e <= n:
            raise ValueError(f"element {e} outside ground set [{n}]")
        m |= 1 << (e - 1)
    return m


def members_of(mask: int) -> tuple[int, ...]:
    out = []
    e = 1
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def prefix_mask(m: int) -> int:
    """Bitmask of the prefix [m] = {1, ..., m}."""
    return (1 << m) - 1


@dataclass(frozen=True)
class SetFamily:
    """A collection of distinct subsets of [n], stored as bitmasks."""

    n: int
    sets: frozenset[int]

    @classmethod
    def of(cls, n: int, sets: Iterable[Iterable[int]]) -> "SetFamily":
        return cls(n=n, sets=frozenset(mask_of(s, n) for s in sets))

    @classmethod
    def of_masks(cls, n: int, masks: Iterable[int]) -> "SetFamily":
        masks = frozenset(masks)
        full = prefix_mask(n)
        for m in masks:
            if m & ~full:
                raise ValueError(f"mask {m:#x} outside ground set [{n}]")
        return cls(n=n, sets=masks)

    def __len__(self) -> int:
        return len(self.sets)

    def sorted_masks(self) -> list[int]:
        return sorted(self.sets)

    def to_obj(self) -> dict:
        return {
            "n": self.n,
            "sets": sorted(sorted(members_of(m)) for m in self.sets),
        }

    @classmethod
    def from_obj(cls, obj: dict) -> "SetFamily":
        return cls.of(obj["n"], obj["sets"])

    def serialize(self) -> str:
        return json.dumps(self.to_obj(), sort_keys=True, separators=(",", ":"))


# -- biased measure ------------------------------------------------------


def _check_bias(p: Fraction) -> Fraction:
    p = Fraction(p)
    if not (0 < p < 1):
        raise ValueError(f"bias must lie in (0,1), got {p}")
    return p


def measure_set(mask: int, n: int, p: Fraction) -> Fraction:
    """Product-measure weight p^|F| (1-p)^(n-|F|) of a single subset."""
    p = _check_bias(p)
    size = mask.bit_count()
    return p**size * (1 - p) ** (n - size)


def measure_family(fam: SetFamily, p: Fraction) -> Fraction:
    p = _check_bias(p)
    return sum((measure_set(m, fam.n, p) for m in fam.sets), Fraction(0))


# -- shifting ------------------------------------------------------------


def shift_once(fam: SetFamily, i: int, j: int) -> SetFamily:
    """Apply the (i,j)-shift to every member of the family.

    A set containing j but not i is replaced by the set with j swapped for i,
    unless that set is already present; family size and the multiset of set
    sizes are preserved.
    """
    if not (1 <= i < j <= fam.n):
        raise ValueError(f"need 1 <= i < j <= n, got i={i}, j={j}, n={fam.n}")
    bi, bj = 1 << (i - 1), 1 << (j - 1)
    out = set()
    for m in fam.sets:
        if (m & bj) and not (m & bi):
            shifted = (m | bi) & ~bj
            out.add(m if shifted in fam.sets else shifted)
        else:
            out.add(m)
    return SetFamily(n=fam.n, sets=frozenset(out))


def left_shift(fam: SetFamily) -> SetFamily:
    """Repeat (i,j)-shifts in lexicographic sweeps until a fixpoint.

    Terminates: the total of all elements over all sets strictly decreases
    whenever a sweep changes anything.
    """
    cur = fam
    changed = True
    while changed:
        changed = False
        for i in range(1, fam.n):
            for j in range(i + 1, fam.n + 1):
                nxt = shift_once(cur, i, j)
                if nxt.sets != cur.sets:
                    cur = nxt
                    changed = True
    return cur


def is_left_shifted(fam: SetFamily) -> bool:
    for i in range(1, fam.n):
        for j in range(i + 1, fam.n + 1):
            if shift_once(fam, i, j).sets != fam.sets:
                return False
    return True


# -- cross-intersection --------------------------------------------------


def is_cross_intersecting(
    fams: Sequence[SetFamily],
    t: int,
    budget: Optional[int] = None,
) -> tuple[bool, Optional[tuple[int, ...]]]:
    """Exhaustively test the k-wise t-cross-intersecting property.

    Returns (True, None) or (False, witness) where the witness is a tuple of
    one mask per family whose intersection has fewer than t elements.
    """
    if not fams:
        raise ValueError("need at least one family")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    n = fams[0].n
    if any(f.n != n for f in fams):
        raise ValueError("families must share a ground set")
    limit = resolve_budget(budget if budget is not None else CROSS_PRODUCT_BUDGET)
    total = 1
    for f in fams:
        total *= max(len(f), 1)
    if total > limit:
        raise BudgetExceeded(f"product of family sizes {total} > budget {limit}")
    full = prefix_mask(n)
    sorted_fams = [f.sorted_masks() for f in fams]
    for choice in itertools.product(*sorted_fams):
        inter = full
        for m in choice:
            inter &= m
        if inter.bit_count() < t:
            return False, tuple(choice)
    return True, None


# -- prefix density ------------------------------------------------------


def has_dense_prefix(
    mask: int,
    n: int,
    q: Fraction,
    t: int,
    *,
    strict: bool = True,
    min_r: int = 0,
) -> Optional[int]:
    """Smallest r in [min_r, n-t] with |F ∩ [t+r]| >(=) (1-q)(t+r), else None.

    The strict form is the structural-lemma conclusion; the non-strict form
    is the Chernoff-bound hypothesis.
    """
    for r in range(min_r, n - t + 1):
        m = t + r
        inter = (mask & prefix_mask(m)).bit_count()
        lhs = Fraction(inter)
        rhs = (1 - Fraction(q)) * m
        if (lhs > rhs) if strict else (lhs >= rhs):
            return r
    return None


@dataclass(frozen=True)
class AllDense:
    """Every set in the family has a dense prefix; r per mask recorded."""

    r_by_mask: dict


@dataclass(frozen=True)
class CounterexampleSet:
    """A member set with no dense prefix at any admissible r."""

    mask: int


def prefix_density_witness(
    fam: SetFamily,
    q: Fraction,
    t: int,
    *,
    strict: bool = True,
    min_r: int = 0,
):
    """Check the dense-prefix conclusion for every set in a left-shifted family."""
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if not (0 < Fraction(q) < 1):
        raise ValueError(f"q must lie in (0,1), got {q}")
    if not is_left_shifted(fam):
        raise ValueError("family is not left-shifted")
    r_by_mask = {}
    for m in fam.sorted_masks():
        r = has_dense_prefix(m, fam.n, q, t, strict=strict, min_r=min_r)
        if r is None:
            return CounterexampleSet(mask=m)
        r_by_mask[m] = r
    return AllDense(r_by_mask=r_by_mask)


def violates_density_everywhere(mask: int, n: int, q: Fraction, t: int) -> bool:
    """True iff |F ∩ [t+r]| <= (1-q)(t+r) for every r in [0, n-t]."""
    return has_dense_prefix(mask, n, q, t, strict=False, min_r=0) is None


# -- balls and bins ------------------------------------------------------


@dataclass(frozen=True)
class ProcedureBlocked:
    """The rearrangement procedure could not fill a bin; signals a bad input."""

    step: int


@dataclass(frozen=True)
class BallsAndBinsWitness:
    """Per-family sets G_i refuting t-cross-intersection constructively."""

    masks: tuple[int, ...]
    intersection: int


def balls_and_bins_witness(
    fams: Sequence[SetFamily],
    qs: Sequence[Fraction],
    t: int,
    violators: Optional[Sequence[int]] = None,
):
    """Run the ball-rearrangement procedure on density-violating sets.

    Each family must supply (or contain) a set F_i with
    |F_i ∩ [t+r]| <= (1-q_i)(t+r) for all r >= 0.  The procedure produces
    G_i in fams[i] with |∩ G_i| <= t-1.  A ProcedureBlocked return means the
    preconditions did not actually hold.
    """
    if len(fams) != len(qs):
        raise ValueError("one bias q per family required")
    if t < 1:
        raise ValueError(f"t must be >= 1, got {t}")
    if sum(Fraction(q) for q in qs) < 1:
        raise ValueError("sum of the q_i must be at least 1")
    n = fams[0].n
    if any(f.n != n for f in fams):
        raise ValueError("families must share a ground set")
    for f in fams:
        if not is_left_shifted(f):
            raise ValueError("families must be left-shifted")
    if violators is None:
        violators = []
        for f, q in zip(fams, qs):
            found = None
            for m in f.sorted_masks():
                if violates_density_everywhere(m, n, q, t):
                    found = m
                    break
            if found is None:
                raise ValueError(
                    "a family has no density-violating set; precondition unmet"
                )
            violators.append(found)
    else:
        for f, q, m in zip(fams, qs, violators):
            if m not in f.sets:
                raise ValueError("supplied violator not a member of its family")
            if not violates_density_everywhere(m, n, q, t):
                raise ValueError("supplied set does not violate prefix density")

    k = len(fams)
    # bins[b] = set of colors present in bin b+1 (bin labels are 1-based).
    bins: list[set[int]] = [set() for _ in range(n)]
    for color, fmask in enumerate(violators):
        for x in range(1, n + 1):
            if not (fmask >> (x - 1)) & 1:
                bins[x - 1].add(color)

    for r in range(0, n - t + 1):
        target = t + r
        if bins[target - 1]:
            continue
        moved = False
        for b in range(1, t):  # bins 1 .. t-1
            if bins[b - 1]:
                color = min(bins[b - 1])
                bins[b - 1].remove(color)
                bins[target - 1].add(color)
                moved = True
                break
        if moved:
            continue
        for b in range(t, target):  # bins t .. t+r-1
            if len(bins[b - 1]) >= 2:
                color = min(bins[b - 1])
                bins[b - 1].remove(color)
                bins[target - 1].add(color)
                moved = True
                break
        if not moved:
            return ProcedureBlocked(step=r)

    gs = []
    for color in range(k):
        g = 0
        for b in range(1, n + 1):
            if color not in bins[b - 1]:
                g |= 1 << (b - 1)
        gs.append(g)
    inter = prefix_mask(n)
    for g in gs:
        inter &= g
    return BallsAndBinsWitness(masks=tuple(gs), intersection=inter)


# -- Chernoff threshold --------------------------------------------------


def _chernoff_bound(t: int, delta: Fraction) -> mpmath.mpf:
    d2 = mpmath.mpf(delta.numerator) / delta.denominator
    return mpmath.e ** (-2 * t * d2**2) * (1 + 1 / (2 * d2**2))


def chernoff_t(eps: Fraction, delta: Fraction) -> int:
    """Smallest t >= 1 with e^(-2 t δ²)(1 + 1/(2δ²)) < eps.

    Evaluated at high precision and confirmed at t and t-1.
    """
    eps, delta = Fraction(eps), Fraction(delta)
    if eps <= 0 or delta <= 0:
        raise ValueError("eps and delta must be positive")
    with mpmath.workdps(60):
        eps_mp = mpmath.mpf(eps.numerator) / eps.denominator
        d = mpmath.mpf(delta.numerator) / delta.denominator
        threshold = (mpmath.log(1 / eps_mp) + mpmath.log(1 + 1 / (2 * d**2))) / (
            2 * d**2
        )
        t = max(1, int(mpmath.floor(threshold)) + 1)
        while t > 1 and _chernoff_bound(t - 1, delta) < eps_mp:
            t -= 1
        while _chernoff_bound(t, delta) >= eps_mp:
            t += 1
        return t


def small_measure_index(
    fams: Sequence[SetFamily],
    qs: Sequence[Fraction],
    delta: Fraction,
    t: int,
    *,
    check_cross: bool = True,
) -> tuple[int, Fraction]:
    """Index j minimizing μ_{1-q_j-δ}(fams[j]), with its exact measure.

    For t at least the Chernoff threshold, a cross-intersecting collection
    is guaranteed to have some family of measure below eps.
    """
    if len(fams) != len(qs):
        raise ValueError("one bias q per family required")
    delta = Fraction(delta)
    if sum(Fraction(q) for q in qs) < 1:
        raise ValueError("sum of the q_i must be at least 1")
    for q in qs:
        if not (0 < 1 - Fraction(q) - delta < 1):
            raise ValueError(f"bias 1-q-delta out of (0,1) for q={q}, delta={delta}")
    if check_cross:
        ok, witness = is_cross_intersecting(fams, t)
        if not ok:
            raise ValueError(f"families are not {len(fams)}-wise {t}-cross-intersecting: {witness}")
    best_j, best_mu = 0, None
    for j, (f, q) in enumerate(zip(fams, qs)):
        mu = measure_family(f, 1 - Fraction(q) - delta)
        if best_mu is None or mu < best_mu:
            best_j, best_mu = j, mu
    return best_j, best_mu


# -- disjointness / popular element --------------------------------------


def max_disjoint_count(sets: Sequence[frozenset]) -> int:
    """Maximum number of pairwise disjoint sets, by exhaustive branching."""
    best = 0
    m = len(sets)

    def rec(idx: int, chosen: list[frozenset]) -> None:
        nonlocal best
        best = max(best, len(chosen))
        if idx == m or len(chosen) + (m - idx) <= best:
            return
        s = sets[idx]
        if all(s.isdisjoint(c) for c in chosen):
            chosen.append(s)
            rec(idx + 1, chosen)
            chosen.pop()
        rec(idx + 1, chosen)

    rec(0, [])
    return best


def popular_element(
    sets: Sequence[Iterable],
    t_max: int,
    d_max: Optional[int] = None,
) -> tuple[object, int]:
    """Element occurring in at least N/(T D) of N sets of size <= T.

    With at most D pairwise disjoint sets in the collection, such an element
    exists; D is computed exhaustively for small collections when not given.
    Ties break toward the smallest element.
    """
    fsets = [frozenset(s) for s in sets]
    if not fsets:
        raise ValueError("empty collection")
    if t_max < 1:
        raise ValueError("T must be at least 1")
    for s in fsets:
        if len(s) > t_max:
            raise ValueError(f"a set of size {len(s)} exceeds the bound T={t_max}")
        if not s:
            raise ValueError("empty sets not admitted")
    if d_max is None:
        if len(fsets) > DISJOINT_EXHAUSTIVE_LIMIT:
            raise ValueError(
                f"collection of {len(fsets)} sets too large to compute D exhaustively;"
                " supply d_max"
            )
        d_max = max_disjoint_count(fsets)
    counts: dict = {}
    for s in fsets:
        for e in s:
            counts[e] = counts.get(e, 0) + 1
    element, count = min(
        counts.items(), key=lambda kv: (-kv[1], kv[0])
    )
    n_sets = len(fsets)
    if count * t_max * d_max < n_sets:
        raise AssertionError(
            f"popular-element bound failed: {count} < {n_sets}/({t_max}*{d_max})"
        )
    return element, count
