"""Characteristic function of a parking game and structural checks.

Coalitions are handled as bitmasks (bit ``i-1`` set for car ``i``); every
public entry point also accepts any iterable of 1-based car indices.
"""

from __future__ import annotations

from typing import Iterable, Optional, Tuple, Union

from .errors import NotAParkingFunction, check_cap
from .parking import PreferenceProfile, park_sequence, simulate_park

CoalitionLike = Union[int, Iterable[int]]

SUPERMODULAR_CAP = 2**12


def coalition_mask(cars: CoalitionLike, n: Optional[int] = None) -> int:
    if isinstance(cars, int):
        mask = cars
        if mask < 0 or (n is not None and mask >> n):
            raise ValueError(f"coalition mask {mask} outside [n]")
        return mask
    mask = 0
    for c in cars:
        if c < 1 or (n is not None and c > n):
            raise ValueError(f"car {c} outside [1, {n}]")
        mask |= 1 << (c - 1)
    return mask


def coalition_members(mask: int) -> Tuple[int, ...]:
    cars = []
    i = 1
    while mask:
        if mask & 1:
            cars.append(i)
        mask >>= 1
        i += 1
    return tuple(cars)


class GameView:
    """Parking game ``c(S) = d((a_i : i in S))`` of a parking function.

    Sub-profiles are parked on the full street of ``m`` spots.  Values are
    memoised per coalition mask; a race can only store the same integer twice.
    """

    def __init__(self, profile: PreferenceProfile):
        outcome = simulate_park(profile)
        if not outcome.parked:
            raise NotAParkingFunction(profile.prefs, outcome.failed_car)
        self.profile = profile
        self.n = profile.n
        self.m = profile.m
        self._cache = {0: 0}

    @classmethod
    def of(cls, prefs: Iterable[int], m: int = 0) -> "GameView":
        return cls(PreferenceProfile(tuple(prefs), m))

    @property
    def grand(self) -> int:
        return (1 << self.n) - 1

    def characteristic(self, coalition: CoalitionLike, use_cache: bool = True) -> int:
        mask = coalition_mask(coalition, self.n)
        if use_cache:
            hit = self._cache.get(mask)
            if hit is not None:
                return hit
        value = self._evaluate(mask)
        if use_cache:
            self._cache[mask] = value
        return value

    __call__ = characteristic

    def _evaluate(self, mask: int) -> int:
        prefs = [self.profile.prefs[c - 1] for c in coalition_members(mask)]
        spots, failed = park_sequence(prefs, self.m)
        # sub-tuples of a parking function always park
        assert spots is not None, (self.profile.prefs, mask)
        return sum(spots) - sum(prefs)

    def marginal_cost(self, coalition: CoalitionLike, car: int) -> int:
        mask = coalition_mask(coalition, self.n)
        if not 1 <= car <= self.n:
            raise ValueError(f"car {car} outside [1, {self.n}]")
        bit = 1 << (car - 1)
        if mask & bit:
            raise ValueError(f"car {car} already belongs to the coalition")
        return self.characteristic(mask | bit) - self.characteristic(mask)


SupermodularWitness = Tuple[int, frozenset, frozenset]


def check_supermodular(game: GameView, all_pairs: bool = False
                       ) -> Tuple[bool, Optional[SupermodularWitness]]:
    """Check ``c(S+i) - c(S) <= c(T+i) - c(T)`` for ``S ⊆ T ⊆ [n] - {i}``.

    By default only covers ``T = S + {j}`` are compared.  That suffices: any
    ``S ⊆ T`` is joined by a chain of covers, and the inequality composes along
    the chain.  ``all_pairs=True`` compares every pair instead.

    Returns ``(True, None)`` or ``(False, (i, S, T))`` for the first violation.
    """
    n = game.n
    check_cap(1 << n, SUPERMODULAR_CAP, f"supermodularity check with n={n}")
    full = game.grand
    for i in range(1, n + 1):
        bit = 1 << (i - 1)
        rest = full & ~bit
        # enumerate S ⊆ rest
        s = rest
        while True:
            mc_s = game.marginal_cost(s, i)
            if all_pairs:
                free = rest & ~s
                extra = free
                while extra:
                    t = s | extra
                    if mc_s > game.marginal_cost(t, i):
                        return False, (i, frozenset(coalition_members(s)),
                                       frozenset(coalition_members(t)))
                    extra = (extra - 1) & free
            else:
                free = rest & ~s
                while free:
                    j = free & -free
                    free ^= j
                    t = s | j
                    if mc_s > game.marginal_cost(t, i):
                        return False, (i, frozenset(coalition_members(s)),
                                       frozenset(coalition_members(t)))
            if s == 0:
                break
            s = (s - 1) & rest
    return True, None


def is_modular(game: GameView) -> bool:
    """True iff all preferences are distinct (a permutation of [n] when m == n).

    Distinct preferences mean nobody is ever displaced, so every ``c(S)`` is 0;
    two equal preferences give ``c({i, j}) = 1 > c({i}) + c({j})``.
    """
    prefs = game.profile.prefs
    return len(set(prefs)) == len(prefs)
