"""Least core of parking games via an exact LP over all coalitions.

The program is

    minimise z  s.t.  Σ_i φ_i = c([n]),  Σ_{i∈S} φ_i - z <= c(S)  for every S ⊆ [n],

with the empty and grand coalitions included, which forces ``z >= 0``.  The
core is nonempty exactly when the optimum is 0.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

from .errors import LPInfeasible, check_cap
from .game import GameView, coalition_mask, coalition_members
from .shapley import Allocation, shapley
from .simplex import LinearProgramExact, solve_lp_exact

LEAST_CORE_CAP = 2**16


@dataclass(frozen=True)
class LeastCoreResult:
    z_star: Fraction
    allocation: Allocation
    tight_coalitions: Tuple[frozenset, ...]


@dataclass(frozen=True)
class GapReport:
    shapley: Allocation
    z_star: Fraction
    max_violation: Fraction
    argmax: Tuple[frozenset, ...]

    @property
    def shapley_in_least_core(self) -> bool:
        return self.max_violation <= 0


def _game(game_or_profile) -> GameView:
    if isinstance(game_or_profile, GameView):
        return game_or_profile
    return GameView(game_or_profile)


def build_least_core_lp(game: GameView, only=None, fix_z: Optional[Fraction] = None
                        ) -> LinearProgramExact:
    """Variables ``phi_1..phi_n, z`` (all free); one row per coalition mask, ascending.

    ``only`` restricts the inequality rows to the given masks and ``fix_z``
    pins ``z`` with an extra equality; both exist for certificate checks.
    """
    n = game.n
    check_cap(1 << n, LEAST_CORE_CAP, f"least-core LP with n={n}")
    names = [f"phi_{i}" for i in range(1, n + 1)] + ["z"]
    objective = [Fraction(0)] * n + [Fraction(1)]
    eq_rows = [(tuple([Fraction(1)] * n + [Fraction(0)]), Fraction(game.characteristic(game.grand)))]
    if fix_z is not None:
        eq_rows.append((tuple([Fraction(0)] * n + [Fraction(1)]), Fraction(fix_z)))
    masks = range(1 << n) if only is None else sorted(only)
    ub_rows, labels = [], []
    for mask in masks:
        coeffs = [Fraction((mask >> i) & 1) for i in range(n)] + [Fraction(-1)]
        ub_rows.append((tuple(coeffs), Fraction(game.characteristic(mask))))
        labels.append(mask)
    return LinearProgramExact(names, objective, eq_rows, ub_rows,
                              free=[True] * (n + 1), row_labels=labels)


def excess(game: GameView, allocation, mask: int) -> Fraction:
    """``Σ_{i∈S} φ_i - c(S)``."""
    paid = sum((Fraction(allocation[i - 1]) for i in coalition_members(mask)), Fraction(0))
    return paid - game.characteristic(mask)


def least_core(profile) -> LeastCoreResult:
    game = _game(profile)
    lp = build_least_core_lp(game)
    z_star, point = solve_lp_exact(lp)
    allocation = tuple(point[:game.n])
    assert point[game.n] == z_star
    tight = tuple(frozenset(coalition_members(mask)) for mask in range(1 << game.n)
                  if excess(game, allocation, mask) == z_star)
    return LeastCoreResult(z_star, allocation, tight)


def certify_least_core(profile, result: LeastCoreResult,
                       epsilon: Fraction = Fraction(1, 2**20)) -> bool:
    """Check optimality of ``result`` by constraint satisfaction plus infeasibility below it.

    The allocation must meet every coalition constraint at ``z*``, and the
    tight constraints alone must admit no allocation at ``z* - epsilon``.
    """
    game = _game(profile)
    if sum(result.allocation) != game.characteristic(game.grand):
        return False
    for mask in range(1 << game.n):
        if excess(game, result.allocation, mask) > result.z_star:
            return False
    tight = [coalition_mask(S) for S in result.tight_coalitions]
    lp = build_least_core_lp(game, only=tight, fix_z=result.z_star - epsilon)
    try:
        solve_lp_exact(lp)
    except LPInfeasible:
        return True
    return False


def core_is_empty(profile) -> bool:
    return least_core(profile).z_star > 0


def shapley_least_core_gap(profile) -> GapReport:
    """How far the Shapley allocation overshoots the least-core constraints.

    A positive ``max_violation`` shows the Shapley value is not a least-core
    allocation; ``argmax`` lists the coalitions attaining it, by ascending mask.
    """
    game = _game(profile)
    phi = shapley(game.profile)
    z_star = least_core(game).z_star
    worst = None
    argmax = []
    for mask in range(1 << game.n):
        v = excess(game, phi, mask) - z_star
        if worst is None or v > worst:
            worst, argmax = v, [mask]
        elif v == worst:
            argmax.append(mask)
    return GapReport(phi, z_star, worst, tuple(frozenset(coalition_members(m)) for m in argmax))
