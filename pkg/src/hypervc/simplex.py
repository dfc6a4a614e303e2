"""Exact rational two-phase primal simplex for covering LPs.

Solves  min c·x  subject to  A x >= b,  0 <= x <= 1,  in exact rational
arithmetic on a dense tableau.  Bland's rule guarantees termination;
Dantzig's rule is used while the objective makes progress, with a switch
to Bland's after a stall, so typical runs stay fast.

When every row coefficient is at least its row's right-hand side and all
costs are nonnegative, the upper bounds are redundant: clamping any
coordinate above 1 down to 1 keeps every constraint satisfied (that
coordinate alone covers the row) and cannot increase the objective.  In
that common covering case the n upper-bound rows are dropped from the
tableau, which removes most degeneracy.

gmpy2.mpq is used for tableau arithmetic when available (it is a drop-in
for Fraction and considerably faster); results are returned as Fractions.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

try:  # pragma: no cover - environment probe
    from gmpy2 import mpq as _Q
except ImportError:  # pragma: no cover
    _Q = Fraction

_STALL_LIMIT = 30


class SimplexError(RuntimeError):
    pass


@dataclass(frozen=True)
class LpResult:
    objective: Fraction
    x: tuple[Fraction, ...]
    pivots: int


def _dual_simplex_covering(
    c: Sequence[Fraction],
    rows: Sequence[Sequence[tuple[int, Fraction]]],
    b: Sequence[Fraction],
) -> LpResult:
    """Minimize c·x over A x >= b, x >= 0, for nonnegative c.

    The all-surplus basis (x = 0) is dual feasible since every reduced cost
    is just c_j >= 0, so the dual simplex needs no artificial phase and
    typically finishes in about m pivots.
    """
    n = len(c)
    m = len(rows)
    zero, one = _Q(0), _Q(1)
    # Columns: x (n) | surplus (m) | rhs.  Row i encodes -A_i x + s_i = -b_i.
    ncols = n + m + 1
    rhs_col = ncols - 1
    tab: list[list] = []
    basis: list[int] = []
    for i, row in enumerate(rows):
        r = [zero] * ncols
        for j, coef in row:
            r[j] = -_Q(coef.numerator, coef.denominator)
        r[n + i] = one
        bi = b[i]
        r[rhs_col] = -_Q(bi.numerator, bi.denominator)
        tab.append(r)
        basis.append(n + i)
    obj = [zero] * ncols
    for j in range(n):
        cj = c[j]
        obj[j] = _Q(cj.numerator, cj.denominator)

    pivots = 0
    stall = 0
    use_bland = False
    last = obj[rhs_col]
    while True:
        pr = -1
        if use_bland:
            best_basis = None
            for ri in range(m):
                if tab[ri][rhs_col] < zero and (
                    best_basis is None or basis[ri] < best_basis
                ):
                    best_basis = basis[ri]
                    pr = ri
        else:
            worst = zero
            for ri in range(m):
                v = tab[ri][rhs_col]
                if v < worst:
                    worst = v
                    pr = ri
        if pr < 0:
            break  # primal feasible: optimal
        prow = tab[pr]
        pc = -1
        best_ratio = None
        for j in range(n + m):
            a = prow[j]
            if a < zero:
                ratio = obj[j] / (-a)
                if best_ratio is None or ratio < best_ratio:
                    best_ratio = ratio
                    pc = j
        if pc < 0:
            raise SimplexError("covering LP infeasible; a row cannot be satisfied")
        pivots += 1
        inv = one / prow[pc]
        if inv != one:
            tab[pr] = prow = [v * inv for v in prow]
        for ri in range(m + 1):
            row = tab[ri] if ri < m else obj
            if row is prow:
                continue
            f = row[pc]
            if f != zero:
                for cj in range(ncols):
                    if prow[cj] != zero:
                        row[cj] -= f * prow[cj]
        basis[pr] = pc
        cur = obj[rhs_col]
        if use_bland:
            if cur != last:
                use_bland = False
                stall = 0
        else:
            stall = stall + 1 if cur == last else 0
            if stall > _STALL_LIMIT:
                use_bland = True
        last = cur

    x = [Fraction(0)] * n
    for ri in range(m):
        if basis[ri] < n:
            v = tab[ri][rhs_col]
            x[basis[ri]] = Fraction(v.numerator, v.denominator)
    value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
    return LpResult(objective=Fraction(value), x=tuple(x), pivots=pivots)


def solve_boxed_covering_lp(
    c: Sequence[Fraction],
    rows: Sequence[Sequence[tuple[int, Fraction]]],
    b: Sequence[Fraction],
) -> LpResult:
    """Minimize c·x over A x >= b, 0 <= x <= 1.

    `rows` gives each constraint as sparse (column, coefficient) pairs.
    x = 1 is assumed feasible (true for covering constraints with b <= row
    sums), so the LP always has an optimum.
    """
    n = len(c)
    m = len(rows)
    if len(b) != m:
        raise ValueError("b length must match the number of rows")
    if n == 0:
        return LpResult(objective=Fraction(0), x=(), pivots=0)

    box_redundant = all(ci >= 0 for ci in c) and all(
        all(coef >= bi for _, coef in row) for row, bi in zip(rows, b)
    )
    if box_redundant:
        res = _dual_simplex_covering(c, rows, b)
        # Clamp coordinates above 1 (possible only at zero cost); each row
        # coefficient covers its right-hand side alone, so feasibility in
        # the box is preserved and the objective cannot increase.
        x = [min(xi, Fraction(1)) for xi in res.x]
        value = sum((ci * xi for ci, xi in zip(c, x)), Fraction(0))
        return LpResult(objective=Fraction(value), x=tuple(x), pivots=res.pivots)

    zero, one = _Q(0), _Q(1)
    # Columns: x (n) | surplus (m) | upper slack (n) | artificial (m) | rhs.
    nbox = n
    ncols = n + m + nbox + m + 1
    rhs_col = ncols - 1
    art0 = n + m + nbox

    tab: list[list] = []
    basis: list[int] = []
    for i, row in enumerate(rows):
        r = [zero] * ncols
        for j, coef in row:
            r[j] = _Q(coef.numerator, coef.denominator)
        r[n + i] = -one
        r[art0 + i] = one
        bi = b[i]
        r[rhs_col] = _Q(bi.numerator, bi.denominator)
        tab.append(r)
        basis.append(art0 + i)
    for j in range(nbox):
        r = [zero] * ncols
        r[j] = one
        r[n + m + j] = one
        r[rhs_col] = one
        tab.append(r)
        basis.append(n + m + j)
    nrows = len(tab)

    pivots = 0

    def pivot(pr: int, pc: int) -> None:
        nonlocal pivots
        pivots += 1
        prow = tab[pr]
        inv = one / prow[pc]
        if inv != one:
            tab[pr] = prow = [v * inv for v in prow]
        for ri in range(nrows + 1):
            if ri == pr:
                continue
            row = tab[ri] if ri < nrows else obj
            f = row[pc]
            if f != zero:
                for cj in range(ncols):
                    if prow[cj] != zero:
                        row[cj] -= f * prow[cj]
        basis[pr] = pc

    def run(eligible_limit: int) -> None:
        stall = 0
        use_bland = False
        last = obj[rhs_col]
        while True:
            pc = -1
            if use_bland:
                for j in range(eligible_limit):
                    if obj[j] < zero:
                        pc = j
                        break
            else:
                best = zero
                for j in range(eligible_limit):
                    if obj[j] < best:
                        best = obj[j]
                        pc = j
            if pc < 0:
                return
            pr = -1
            best_ratio = None
            for ri in range(nrows):
                a = tab[ri][pc]
                if a > zero:
                    ratio = tab[ri][rhs_col] / a
                    if (
                        best_ratio is None
                        or ratio < best_ratio
                        or (ratio == best_ratio and basis[ri] < basis[pr])
                    ):
                        best_ratio = ratio
                        pr = ri
            if pr < 0:
                raise SimplexError("unbounded covering LP; inputs are inconsistent")
            pivot(pr, pc)
            cur = obj[rhs_col]
            if use_bland:
                # Bland's rule is only needed to escape a degenerate vertex;
                # drop back to Dantzig once the objective moves again.
                if cur != last:
                    use_bland = False
                    stall = 0
            else:
                stall = stall + 1 if cur == last else 0
                if stall > _STALL_LIMIT:
                    use_bland = True
            last = cur

    # Phase 1: minimize the artificial sum.
    obj = [zero] * ncols
    for j in range(m):
        obj[art0 + j] = one
    for i in range(m):  # make reduced costs of the basic artificials zero
        for cj in range(ncols):
            obj[cj] -= tab[i][cj]
    run(art0)
    if -obj[rhs_col] != zero:
        raise SimplexError("phase 1 ended with positive infeasibility")

    # Drive any degenerate artificials out of the basis.
    for ri in range(nrows):
        if basis[ri] >= art0:
            for cj in range(art0):
                if tab[ri][cj] != zero:
                    pivot(ri, cj)
                    break

    # Phase 2 with the true objective.
    obj = [zero] * ncols
    for j in range(n):
        cj = c[j]
        obj[j] = _Q(cj.numerator, cj.denominator)
    for ri in range(nrows):
        bj = basis[ri]
        if bj < n:
            f = obj[bj]
            if f != zero:
                for cj in range(ncols):
                    if tab[ri][cj] != zero:
                        obj[cj] -= f * tab[ri][cj]
    run(art0)

    x = [Fraction(0)] * n
    for ri in range(nrows):
        if basis[ri] < n:
            v = tab[ri][rhs_col]
            x[basis[ri]] = Fraction(v.numerator, v.denominator)
    value = -obj[rhs_col]
    return LpResult(
        objective=Fraction(value.numerator, value.denominator),
        x=tuple(x),
        pivots=pivots,
    )
