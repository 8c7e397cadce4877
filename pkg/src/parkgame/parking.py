"""Parking process, parking-function tests, rearrangement and enumeration.

Spots, cars and preferences are 1-based throughout.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterator, Optional, Sequence, Tuple

from .errors import NotAParkingFunction, check_cap

ENUMERATION_CAP = 10**7


@dataclass(frozen=True)
class PreferenceProfile:
    """Preferences ``prefs[i-1]`` of cars ``i = 1..n`` on a street of ``m`` spots."""

    prefs: Tuple[int, ...]
    m: int = 0  # 0 means "same as n"

    def __post_init__(self):
        prefs = tuple(int(a) for a in self.prefs)
        object.__setattr__(self, "prefs", prefs)
        if not prefs:
            raise ValueError("a preference profile needs at least one car")
        if self.m == 0:
            object.__setattr__(self, "m", len(prefs))
        if self.m < len(prefs):
            raise ValueError(f"m={self.m} is smaller than n={len(prefs)}")
        for i, a in enumerate(prefs, 1):
            if not 1 <= a <= self.m:
                raise ValueError(f"preference a_{i}={a} outside [1, {self.m}]")

    @property
    def n(self) -> int:
        return len(self.prefs)

    def __len__(self) -> int:
        return len(self.prefs)

    def __iter__(self):
        return iter(self.prefs)

    def __getitem__(self, car: int) -> int:
        """Preference of car ``car`` (1-based)."""
        if not 1 <= car <= len(self.prefs):
            raise IndexError(f"car {car} out of range 1..{len(self.prefs)}")
        return self.prefs[car - 1]


@dataclass(frozen=True)
class ArrivalOrder:
    """Permutation ``pi``: car ``j`` arrives at position ``positions[j-1]``."""

    positions: Tuple[int, ...]

    def __post_init__(self):
        pos = tuple(int(p) for p in self.positions)
        object.__setattr__(self, "positions", pos)
        if sorted(pos) != list(range(1, len(pos) + 1)):
            raise ValueError(f"not a permutation of 1..{len(pos)}: {pos}")

    @classmethod
    def identity(cls, n: int) -> "ArrivalOrder":
        return cls(tuple(range(1, n + 1)))

    @classmethod
    def from_sequence(cls, cars: Sequence[int]) -> "ArrivalOrder":
        """Build the order in which ``cars[0]`` arrives first, ``cars[1]`` second, ..."""
        pos = [0] * len(cars)
        for k, car in enumerate(cars, 1):
            pos[car - 1] = k
        return cls(tuple(pos))

    def __len__(self) -> int:
        return len(self.positions)

    def __call__(self, car: int) -> int:
        return self.positions[car - 1]

    def inverse(self) -> "ArrivalOrder":
        return ArrivalOrder(self.sequence())

    def sequence(self) -> Tuple[int, ...]:
        """Cars listed in arrival order, i.e. ``(pi^-1(1), ..., pi^-1(n))``."""
        seq = [0] * len(self.positions)
        for car, k in enumerate(self.positions, 1):
            seq[k - 1] = car
        return tuple(seq)


@dataclass(frozen=True)
class ParkingOutcome:
    prefs: Tuple[int, ...]
    spots: Optional[Tuple[int, ...]] = None
    failed_car: Optional[int] = None

    @property
    def parked(self) -> bool:
        return self.spots is not None

    @property
    def displacements(self) -> Tuple[int, ...]:
        if self.spots is None:
            raise NotAParkingFunction(self.prefs, self.failed_car)
        return tuple(p - a for p, a in zip(self.spots, self.prefs))

    @property
    def total_displacement(self) -> int:
        return sum(self.displacements)

    @property
    def occupied(self) -> frozenset:
        if self.spots is None:
            raise NotAParkingFunction(self.prefs, self.failed_car)
        return frozenset(self.spots)


@dataclass(frozen=True)
class RankMap:
    """Bijection ``r`` from original car index to index in the sorted profile."""

    ranks: Tuple[int, ...]

    def __call__(self, car: int) -> int:
        return self.ranks[car - 1]

    def __len__(self) -> int:
        return len(self.ranks)

    def image(self, cars) -> frozenset:
        return frozenset(self.ranks[c - 1] for c in cars)


def park_sequence(prefs: Sequence[int], m: int) -> Tuple[Optional[list], Optional[int]]:
    """Park cars in the given order on ``m`` spots.

    Returns ``(spots, None)`` on success or ``(None, k)`` where ``k`` is the
    1-based position in ``prefs`` of the first car that falls off the street.
    """
    # nxt[x] points towards the least free spot >= x; m + 1 is the sentinel
    nxt = list(range(m + 2))
    spots = []
    for k, a in enumerate(prefs, 1):
        x = a
        while nxt[x] != x:
            nxt[x] = nxt[nxt[x]]
            x = nxt[x]
        if x > m:
            return None, k
        spots.append(x)
        nxt[x] = x + 1
    return spots, None


def simulate_park(profile: PreferenceProfile,
                  order: Optional[ArrivalOrder] = None) -> ParkingOutcome:
    """Run the parking process with cars arriving in ``order`` (identity if omitted)."""
    if order is None:
        seq = range(1, profile.n + 1)
    else:
        if len(order) != profile.n:
            raise ValueError("arrival order and profile have different sizes")
        seq = order.sequence()
    seq = list(seq)
    spots_in_order, failed_at = park_sequence([profile.prefs[c - 1] for c in seq], profile.m)
    if spots_in_order is None:
        return ParkingOutcome(profile.prefs, failed_car=seq[failed_at - 1])
    spots = [0] * profile.n
    for car, p in zip(seq, spots_in_order):
        spots[car - 1] = p
    return ParkingOutcome(profile.prefs, spots=tuple(spots))


def is_parking_function(profile: PreferenceProfile) -> bool:
    return simulate_park(profile).parked


def total_displacement(profile: PreferenceProfile) -> int:
    outcome = simulate_park(profile)
    if not outcome.parked:
        raise NotAParkingFunction(profile.prefs, outcome.failed_car)
    return outcome.total_displacement


def satisfies_sorted_criterion(prefs: Sequence[int]) -> bool:
    """``a'_i <= i`` for the sorted copy; characterises PF_n when ``m == n``."""
    return all(a <= i for i, a in enumerate(sorted(prefs), 1))


def sorted_rearrangement(profile: PreferenceProfile) -> Tuple[PreferenceProfile, RankMap]:
    """Weakly increasing copy of the profile and the stable rank map."""
    order = sorted(range(profile.n), key=lambda i: (profile.prefs[i], i))
    ranks = [0] * profile.n
    for rank, i in enumerate(order, 1):
        ranks[i] = rank
    sorted_prefs = tuple(profile.prefs[i] for i in order)
    return PreferenceProfile(sorted_prefs, profile.m), RankMap(tuple(ranks))


def apply_permutation(profile: PreferenceProfile, order: ArrivalOrder) -> PreferenceProfile:
    """``(a_{pi^-1(1)}, ..., a_{pi^-1(n)})``."""
    if len(order) != profile.n:
        raise ValueError("arrival order and profile have different sizes")
    return PreferenceProfile(tuple(profile.prefs[c - 1] for c in order.sequence()), profile.m)


def count_parking_functions(n: int, m: Optional[int] = None) -> int:
    """``|PF_{n,m}| = (m+1)^(n-1) (m+1-n)``."""
    m = n if m is None else m
    _check_nm(n, m)
    return (m + 1) ** (n - 1) * (m + 1 - n)


def count_increasing_parking_functions(n: int, m: Optional[int] = None) -> int:
    """Number of weakly increasing (n, m)-parking functions (Catalan when m == n)."""
    m = n if m is None else m
    _check_nm(n, m)
    return (m - n + 1) * comb(m + n, n) // (m + 1)


def catalan(n: int) -> int:
    return comb(2 * n, n) // (n + 1)


def enumerate_parking_functions(n: int, m: Optional[int] = None,
                                weakly_increasing_only: bool = False) -> Iterator[PreferenceProfile]:
    """Yield every member of PF_{n,m} (or its weakly increasing part) in lexicographic order.

    A prefix is extended only while, for every spot ``x``, at most ``m - x + 1``
    of its entries are ``>= x``.  That condition on the full tuple is exactly
    membership, and any prefix meeting it can be completed with 1s, so the
    search never dead-ends.
    """
    m = n if m is None else m
    _check_nm(n, m)
    total = (count_increasing_parking_functions(n, m) if weakly_increasing_only
             else count_parking_functions(n, m))
    check_cap(total, ENUMERATION_CAP, f"enumerating PF_{{{n},{m}}}")

    # at_least[x] = number of prefix entries >= x
    at_least = [0] * (m + 2)
    prefix: list = []

    def fits(v: int) -> bool:
        return all(at_least[x] + 1 <= m - x + 1 for x in range(1, v + 1))

    def rec() -> Iterator[PreferenceProfile]:
        if len(prefix) == n:
            yield PreferenceProfile(tuple(prefix), m)
            return
        lo = prefix[-1] if (weakly_increasing_only and prefix) else 1
        for v in range(lo, m + 1):
            if not fits(v):
                # fits() is monotone in v: larger values only add constraints
                break
            for x in range(1, v + 1):
                at_least[x] += 1
            prefix.append(v)
            yield from rec()
            prefix.pop()
            for x in range(1, v + 1):
                at_least[x] -= 1

    return rec()


def _check_nm(n: int, m: int) -> None:
    if n < 1 or m < n:
        raise ValueError(f"need 1 <= n <= m, got n={n}, m={m}")


def random_parking_function(n: int, rng) -> PreferenceProfile:
    """Uniform sample from PF_n by rejection over ``[n]^n``.

    About ``e / (n + 1)`` of the candidates are accepted.
    """
    if n < 1:
        raise ValueError("n must be positive")
    while True:
        prefs = [rng.randint(1, n) for _ in range(n)]
        if satisfies_sorted_criterion(prefs):
            return PreferenceProfile(tuple(prefs), n)
