import math
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from hypervc.budget import BudgetExceeded
from hypervc.setfam import (
    AllDense,
    BallsAndBinsWitness,
    CounterexampleSet,
    ProcedureBlocked,
    SetFamily,
    balls_and_bins_witness,
    chernoff_t,
    has_dense_prefix,
    is_cross_intersecting,
    is_left_shifted,
    left_shift,
    mask_of,
    max_disjoint_count,
    measure_family,
    measure_set,
    members_of,
    popular_element,
    prefix_density_witness,
    prefix_mask,
    shift_once,
    small_measure_index,
    violates_density_everywhere,
)


def fam(n, *sets):
    return SetFamily.of(n, sets)


# -- masks ---------------------------------------------------------------


def test_mask_round_trip():
    assert mask_of([1, 3], 4) == 0b101
    assert members_of(0b101) == (1, 3)
    assert members_of(0) == ()
    assert prefix_mask(3) == 0b111
    with pytest.raises(ValueError, match="outside"):
        mask_of([5], 4)
    with pytest.raises(ValueError, match="outside"):
        SetFamily.of_masks(2, [0b100])


def test_family_serialization():
    f = fam(3, [2, 3], [1])
    obj = f.to_obj()
    assert obj == {"n": 3, "sets": [[1], [2, 3]]}
    assert SetFamily.from_obj(obj) == f
    assert len(f) == 2


# -- biased measure ------------------------------------------------------


def test_measure_set_pinned():
    # |F| = 2 over [3] at p = 3/10: (3/10)^2 * (7/10) = 63/1000.
    assert measure_set(mask_of([1, 2], 3), 3, Fraction(3, 10)) == Fraction(63, 1000)


def test_measure_upset_of_singleton():
    # The upset of {1} in [2] has measure exactly p.
    up = fam(2, [1], [1, 2])
    assert measure_family(up, Fraction(1, 3)) == Fraction(1, 3)


def test_measure_of_power_set_is_one():
    rng = random.Random(2)
    for n in (1, 3, 5):
        full = SetFamily.of_masks(n, range(1 << n))
        for _ in range(3):
            p = Fraction(rng.randint(1, 9), 10)
            assert measure_family(full, p) == 1


def test_measure_rejects_bad_bias():
    with pytest.raises(ValueError, match="bias"):
        measure_family(fam(2, [1]), Fraction(0))
    with pytest.raises(ValueError, match="bias"):
        measure_set(0, 2, Fraction(1))


# -- shifting ------------------------------------------------------------


def test_shift_once_pinned():
    assert shift_once(fam(3, [2, 3]), 1, 3).sets == fam(3, [1, 2]).sets
    # Shift target occupied: {1,3} blocks the shift of nothing; {2} moves to {1}.
    shifted = left_shift(fam(3, [2], [2, 3]))
    assert shifted.sets == fam(3, [1], [1, 2]).sets


def test_shift_once_collision_keeps_original():
    f = fam(2, [1], [2])
    shifted = shift_once(f, 1, 2)
    # {2} would shift to {1}, which is present, so {2} stays.
    assert shifted.sets == f.sets


def test_shift_once_validates_indices():
    with pytest.raises(ValueError, match="i < j"):
        shift_once(fam(3, [1]), 2, 2)
    with pytest.raises(ValueError, match="i < j"):
        shift_once(fam(3, [1]), 1, 4)


@settings(max_examples=60, deadline=None)
@given(st.integers(min_value=0, max_value=10**9))
def test_shift_preserves_count_sizes_and_measure(seed):
    rng = random.Random(seed)
    n = rng.randint(2, 8)
    f = SetFamily.of_masks(
        n, {rng.randrange(1 << n) for _ in range(rng.randint(1, 12))}
    )
    i = rng.randint(1, n - 1)
    j = rng.randint(i + 1, n)
    g = shift_once(f, i, j)
    assert len(g) == len(f)
    assert sorted(m.bit_count() for m in g.sets) == sorted(
        m.bit_count() for m in f.sets
    )
    p = Fraction(rng.randint(1, 9), 10)
    assert measure_family(g, p) == measure_family(f, p)


def test_left_shift_reaches_fixpoint():
    rng = random.Random(8)
    for _ in range(30):
        n = rng.randint(2, 7)
        f = SetFamily.of_masks(
            n, {rng.randrange(1 << n) for _ in range(rng.randint(1, 10))}
        )
        g = left_shift(f)
        assert is_left_shifted(g)
        assert len(g) == len(f)
        assert left_shift(g).sets == g.sets


# -- cross-intersection --------------------------------------------------


def test_cross_intersecting_basic():
    f1 = fam(4, [1, 2], [1, 3])
    f2 = fam(4, [1, 4], [1, 2, 3])
    ok, witness = is_cross_intersecting([f1, f2], 1)
    assert ok and witness is None
    f3 = fam(4, [4])
    ok, witness = is_cross_intersecting([f1, f3], 1)
    assert not ok
    a, b = witness
    assert a in f1.sets and b in f3.sets and a & b == 0


def test_cross_intersecting_t2():
    f = fam(4, [1, 2, 3])
    ok, _ = is_cross_intersecting([f, f], 2)
    assert ok
    g = fam(4, [1, 2], [1, 3])
    ok, witness = is_cross_intersecting([g, g], 2)
    assert not ok
    assert (witness[0] & witness[1]).bit_count() < 2


def test_cross_intersecting_validation_and_budget():
    with pytest.raises(ValueError, match="at least one"):
        is_cross_intersecting([], 1)
    with pytest.raises(ValueError, match="t must"):
        is_cross_intersecting([fam(2, [1])], 0)
    with pytest.raises(ValueError, match="ground set"):
        is_cross_intersecting([fam(2, [1]), fam(3, [1])], 1)
    big = SetFamily.of_masks(10, range(1, 1 << 10))
    with pytest.raises(BudgetExceeded):
        is_cross_intersecting([big, big], 1, budget=1000)


# -- prefix density ------------------------------------------------------


def test_has_dense_prefix():
    # F = {1,2} over [4], q = 1/2, t = 1: |F ∩ [1]| = 1 > 1/2.
    assert has_dense_prefix(mask_of([1, 2], 4), 4, Fraction(1, 2), 1) == 0
    # F = {3,4}: prefixes [1],[2] are empty; [3] has 1 <= 3/2; [4] has 2 = 2.
    assert has_dense_prefix(mask_of([3, 4], 4), 4, Fraction(1, 2), 1) is None
    assert (
        has_dense_prefix(mask_of([3, 4], 4), 4, Fraction(1, 2), 1, strict=False)
        == 3
    )
    assert violates_density_everywhere(mask_of([4], 4), 4, Fraction(1, 2), 1)


def test_prefix_density_witness():
    dense = fam(3, [1], [1, 2])
    res = prefix_density_witness(dense, Fraction(1, 2), 1)
    assert isinstance(res, AllDense)
    assert res.r_by_mask == {mask_of([1], 3): 0, mask_of([1, 2], 3): 0}
    sparse = left_shift(fam(4, []))
    res = prefix_density_witness(sparse, Fraction(1, 2), 1)
    assert isinstance(res, CounterexampleSet) and res.mask == 0
    with pytest.raises(ValueError, match="left-shifted"):
        prefix_density_witness(fam(3, [2]), Fraction(1, 2), 1)
    with pytest.raises(ValueError, match="q must"):
        prefix_density_witness(dense, Fraction(1), 1)
    with pytest.raises(ValueError, match="t must"):
        prefix_density_witness(dense, Fraction(1, 2), 0)


# -- balls and bins ------------------------------------------------------


def power_family(n, m):
    """All subsets of [m] inside ground set [n]; left-shifted by construction."""
    return SetFamily.of_masks(n, range(1 << m))


def test_balls_and_bins_produces_witness():
    t = 2
    n = 6
    qs = [Fraction(1, 2), Fraction(1, 2)]
    fams = [power_family(n, 1), power_family(n, 1)]
    res = balls_and_bins_witness(fams, qs, t)
    assert isinstance(res, BallsAndBinsWitness)
    assert res.intersection.bit_count() <= t - 1
    for g, f in zip(res.masks, fams):
        assert g in f.sets


def test_balls_and_bins_validation():
    f = power_family(4, 1)
    with pytest.raises(ValueError, match="one bias"):
        balls_and_bins_witness([f], [Fraction(1, 2), Fraction(1, 2)], 1)
    with pytest.raises(ValueError, match="at least 1"):
        balls_and_bins_witness([f, f], [Fraction(1, 4), Fraction(1, 4)], 1)
    with pytest.raises(ValueError, match="left-shifted"):
        balls_and_bins_witness(
            [fam(4, [2]), f], [Fraction(1, 2), Fraction(1, 2)], 1
        )
    dense = fam(4, [1])
    with pytest.raises(ValueError, match="no density-violating set"):
        balls_and_bins_witness(
            [dense, f], [Fraction(1, 2), Fraction(1, 2)], 1
        )
    with pytest.raises(ValueError, match="not a member"):
        balls_and_bins_witness(
            [f, f], [Fraction(1, 2), Fraction(1, 2)], 1,
            violators=[mask_of([4], 4), 0],
        )
    with pytest.raises(ValueError, match="does not violate"):
        balls_and_bins_witness(
            [dense.__class__.of(4, [[1]]), f],
            [Fraction(1, 2), Fraction(1, 2)], 1,
            violators=[mask_of([1], 4), 0],
        )


# -- Chernoff threshold --------------------------------------------------


def test_chernoff_t_pinned_example():
    assert chernoff_t(Fraction(1, 2), Fraction(1, 10)) == 232


def test_chernoff_t_is_least_such_t():
    # Independent recomputation of the defining inequality in floats.
    for eps, delta in [
        (Fraction(1, 2), Fraction(1, 10)),
        (Fraction(1, 2), Fraction(1, 2)),
        (Fraction(1, 4), Fraction(1, 3)),
        (Fraction(9, 10), Fraction(1, 4)),
    ]:
        t = chernoff_t(eps, delta)
        d = float(delta)
        bound = lambda tt: math.exp(-2 * tt * d * d) * (1 + 1 / (2 * d * d))
        assert bound(t) < float(eps)
        if t > 1:
            assert bound(t - 1) >= float(eps)


def test_chernoff_t_monotone_and_validated():
    assert chernoff_t(Fraction(1, 4), Fraction(1, 10)) >= chernoff_t(
        Fraction(1, 2), Fraction(1, 10)
    )
    with pytest.raises(ValueError):
        chernoff_t(Fraction(0), Fraction(1, 2))
    with pytest.raises(ValueError):
        chernoff_t(Fraction(1, 2), Fraction(-1))


def test_small_measure_index():
    f1 = fam(3, [1], [1, 2])
    f2 = fam(3, [1], [1, 2], [1, 3], [1, 2, 3])
    qs = [Fraction(1, 2), Fraction(1, 2)]
    j, mu = small_measure_index([f1, f2], qs, Fraction(1, 4), t=1)
    # Biases are 1 - 1/2 - 1/4 = 1/4 for both; f1 is the smaller family.
    assert j == 0
    assert mu == measure_family(f1, Fraction(1, 4))
    with pytest.raises(ValueError, match="not .*cross-intersecting"):
        small_measure_index(
            [fam(3, [1]), fam(3, [2])], qs, Fraction(1, 4), t=1
        )


# -- popular element -----------------------------------------------------


def test_max_disjoint_count():
    assert max_disjoint_count([frozenset({1}), frozenset({2}), frozenset({1, 2})]) == 2
    assert max_disjoint_count([frozenset({1, 2}), frozenset({2, 3}), frozenset({1, 3})]) == 1
    assert max_disjoint_count([]) == 0


def test_popular_element_pinned():
    sets = [{1, 2}, {1, 3}, {1, 4}, {2, 3}]
    elem, count = popular_element(sets, t_max=2)
    assert elem == 1 and count == 3
    # Bound check: N=4, T=2, D=2 (e.g. {1,4},{2,3}) -> count must reach 1.
    assert count * 2 * max_disjoint_count([frozenset(s) for s in sets]) >= len(sets)


def test_popular_element_ties_and_errors():
    elem, count = popular_element([{2, 5}, {2, 5}], t_max=2)
    assert elem == 2 and count == 2
    with pytest.raises(ValueError, match="empty collection"):
        popular_element([], 1)
    with pytest.raises(ValueError, match="empty sets"):
        popular_element([{1}, set()], 1)
    with pytest.raises(ValueError, match="exceeds the bound"):
        popular_element([{1, 2, 3}], t_max=2)
    with pytest.raises(ValueError, match="supply d_max"):
        popular_element([{i} for i in range(30)], t_max=1)


def test_popular_element_bound_holds_randomly():
    rng = random.Random(99)
    for _ in range(50):
        t_max = rng.randint(1, 4)
        n_sets = rng.randint(1, 15)
        sets = [
            set(rng.sample(range(1, 10), rng.randint(1, t_max)))
            for _ in range(n_sets)
        ]
        elem, count = popular_element(sets, t_max)
        d = max_disjoint_count([frozenset(s) for s in sets])
        assert count * t_max * d >= n_sets
        assert sum(1 for s in sets if elem in s) == count
