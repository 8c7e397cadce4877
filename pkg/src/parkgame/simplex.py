"""Two-phase primal simplex over exact rationals.

The tableau is kept in condensed form: one row per basic variable, one column
per nonbasic variable, so a pivot costs ``rows * columns`` regardless of how
many slacks exist.  Row ``i`` reads ``x_B[i] = rhs[i] - sum_j T[i][j] x_N[j]``
and the objective row has the same shape.  Bland's rule (lowest variable index
on entering and on ratio ties) rules out cycling.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import List, Optional, Sequence, Tuple

from .errors import LPInfeasible, LPUnbounded

Row = Tuple[Tuple[Fraction, ...], Fraction]


@dataclass
class LinearProgramExact:
    """Minimise ``objective . x`` subject to ``A_eq x = b_eq`` and ``A_ub x <= b_ub``.

    ``free[j]`` marks variables without a sign constraint; the rest are ``>= 0``.
    ``row_labels`` is free-form bookkeeping for the inequality rows.
    """

    names: List[str]
    objective: List[Fraction]
    eq_rows: List[Row] = field(default_factory=list)
    ub_rows: List[Row] = field(default_factory=list)
    free: Optional[List[bool]] = None
    row_labels: Optional[list] = None

    def __post_init__(self):
        nvar = len(self.names)
        if self.free is None:
            self.free = [False] * nvar
        if len(self.objective) != nvar or len(self.free) != nvar:
            raise ValueError("objective/free length does not match variable count")
        for coeffs, _ in self.eq_rows + self.ub_rows:
            if len(coeffs) != nvar:
                raise ValueError("constraint row has the wrong length")

    @property
    def num_vars(self) -> int:
        return len(self.names)


class _Tableau:
    def __init__(self, rows, rhs, basis, nonbasic):
        self.rows = rows          # list of lists, one per basic variable
        self.rhs = rhs
        self.basis = basis        # variable index of each row
        self.nonbasic = nonbasic  # variable index of each column
        self.obj: List[Fraction] = []
        self.obj_rhs = Fraction(0)

    def pivot(self, r: int, c: int) -> None:
        row = self.rows[r]
        p = row[c]
        inv = 1 / p
        new_row = [x * inv for x in row]
        new_row[c] = inv
        new_rhs = self.rhs[r] * inv
        for i, other in enumerate(self.rows):
            if i == r:
                continue
            f = other[c]
            if f == 0:
                continue
            for j, x in enumerate(new_row):
                if x:
                    other[j] -= f * x
            other[c] = -f * inv
            self.rhs[i] -= f * new_rhs
        f = self.obj[c]
        if f != 0:
            for j, x in enumerate(new_row):
                if x:
                    self.obj[j] -= f * x
            self.obj[c] = -f * inv
            self.obj_rhs -= f * new_rhs
        self.rows[r] = new_row
        self.rhs[r] = new_rhs
        self.basis[r], self.nonbasic[c] = self.nonbasic[c], self.basis[r]

    def run(self) -> None:
        """Minimise the current objective row (entering columns have obj > 0)."""
        while True:
            best = None
            for j, d in enumerate(self.obj):
                if d > 0 and (best is None or self.nonbasic[j] < self.nonbasic[best]):
                    best = j
            if best is None:
                return
            c = best
            leave = None
            leave_ratio = None
            for i, row in enumerate(self.rows):
                a = row[c]
                if a > 0:
                    ratio = self.rhs[i] / a
                    if (leave is None or ratio < leave_ratio
                            or (ratio == leave_ratio and self.basis[i] < self.basis[leave])):
                        leave, leave_ratio = i, ratio
            if leave is None:
                raise LPUnbounded("objective is unbounded below")
            self.pivot(leave, c)


def solve_lp_exact(lp: LinearProgramExact) -> Tuple[Fraction, Tuple[Fraction, ...]]:
    """Return the optimal objective value and an optimal vertex.

    Raises :class:`LPInfeasible` or :class:`LPUnbounded`.
    """
    # column layout: split free variables into (plus, minus)
    cols: List[Tuple[int, int]] = []  # (original var, sign)
    for v in range(lp.num_vars):
        cols.append((v, 1))
        if lp.free[v]:
            cols.append((v, -1))
    nstruct = len(cols)

    def expand(coeffs: Sequence[Fraction]) -> List[Fraction]:
        return [Fraction(coeffs[v]) * sign for v, sign in cols]

    rows, rhs, basis = [], [], []
    next_var = nstruct
    artificial = set()
    pending_art = []
    for coeffs, b in lp.ub_rows:
        row, b = expand(coeffs), Fraction(b)
        if b >= 0:
            rows.append(row)
            rhs.append(b)
            basis.append(next_var)
            next_var += 1
        else:
            # -a.x - s = -b with s >= 0 nonbasic; needs an artificial
            slack = next_var
            next_var += 1
            pending_art.append(([-x for x in row], -b, slack))
    for coeffs, b in lp.eq_rows:
        row, b = expand(coeffs), Fraction(b)
        if b < 0:
            row, b = [-x for x in row], -b
        pending_art.append((row, b, None))

    extra_cols: List[int] = []  # nonbasic slacks of flipped rows
    for row, b, slack in pending_art:
        if slack is not None:
            extra_cols.append(slack)
    nonbasic = list(range(nstruct)) + extra_cols
    # widen earlier rows for the extra slack columns
    rows = [r + [Fraction(0)] * len(extra_cols) for r in rows]
    for row, b, slack in pending_art:
        full = row + [Fraction(0)] * len(extra_cols)
        if slack is not None:
            # x_art = b - (row.x - slack): slack enters with coefficient -1
            full[nstruct + extra_cols.index(slack)] = Fraction(-1)
        rows.append(full)
        rhs.append(b)
        basis.append(next_var)
        artificial.add(next_var)
        next_var += 1

    tab = _Tableau(rows, rhs, basis, nonbasic)

    if artificial:
        ncols = len(nonbasic)
        tab.obj = [Fraction(0)] * ncols
        tab.obj_rhs = Fraction(0)
        for i, v in enumerate(tab.basis):
            if v in artificial:
                tab.obj_rhs += tab.rhs[i]
                for j in range(ncols):
                    tab.obj[j] += tab.rows[i][j]
        tab.run()
        if tab.obj_rhs != 0:
            raise LPInfeasible("no point satisfies the constraints")
        _expel_artificials(tab, artificial)

    # phase 2 objective: w = sum c_j x_j written as rhs - sum obj_j x_N_j
    cost = {}
    for k, (v, sign) in enumerate(cols):
        c = Fraction(lp.objective[v]) * sign
        if c:
            cost[k] = c
    ncols = len(tab.nonbasic)
    tab.obj = [-cost.get(var, Fraction(0)) for var in tab.nonbasic]
    tab.obj_rhs = Fraction(0)
    for i, var in enumerate(tab.basis):
        cb = cost.get(var)
        if cb:
            tab.obj_rhs += cb * tab.rhs[i]
            row = tab.rows[i]
            for j in range(ncols):
                if row[j]:
                    tab.obj[j] += cb * row[j]
    tab.run()

    value = [Fraction(0)] * nstruct
    for i, var in enumerate(tab.basis):
        if var < nstruct:
            value[var] = tab.rhs[i]
    point = [Fraction(0)] * lp.num_vars
    for k, (v, sign) in enumerate(cols):
        point[v] += sign * value[k]
    objective = sum((Fraction(c) * x for c, x in zip(lp.objective, point)), Fraction(0))
    assert objective == tab.obj_rhs
    return objective, tuple(point)


def _expel_artificials(tab: _Tableau, artificial: set) -> None:
    """Pivot zero-level artificials out of the basis and drop their columns."""
    i = 0
    while i < len(tab.rows):
        if tab.basis[i] in artificial:
            row = tab.rows[i]
            col = None
            for j, var in enumerate(tab.nonbasic):
                if var not in artificial and row[j] != 0:
                    if col is None or var < tab.nonbasic[col]:
                        col = j
            if col is None:
                # redundant equality: drop the row
                del tab.rows[i], tab.rhs[i], tab.basis[i]
                continue
            tab.pivot(i, col)
        i += 1
    keep = [j for j, var in enumerate(tab.nonbasic) if var not in artificial]
    tab.rows = [[row[j] for j in keep] for row in tab.rows]
    tab.nonbasic = [tab.nonbasic[j] for j in keep]
    tab.obj = [tab.obj[j] for j in keep]
