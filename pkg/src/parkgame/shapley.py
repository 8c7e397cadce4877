"""Shapley value of parking games.

The polynomial algorithm charges car ``j`` (rank ``i`` in the sorted profile
``α'``) the expected displacement it suffers when it arrives, summing over the
occupied block ``s..t`` it lands on::

    φ_j = 1/n! Σ_{s<=a'_i} Σ_{a'_i<=t<m} (t - a'_i + 1) Q(β, s, t, t-s+1) R(β, s, t)

    R(β, s, t) = Σ_λ Σ_γ C(Λ_t, λ) Q(β, 1, s-2, γ) (t-s+1+λ+γ)! (n-t+s-λ-γ-2)!

with ``β = α'`` minus entry ``i``.  ``Q(β, s, t, k)`` counts the ``k``-subsets
of ``β`` whose cars fill part of spots ``s..t`` without spilling past ``t``;
it is computed with a memoised recursion on the smallest preference.

Two exponential oracles (over permutations and over subsets) live here too.
"""

from __future__ import annotations

import itertools
import sys
from bisect import bisect_left, bisect_right
from fractions import Fraction
from math import comb
from typing import Dict, Iterator, NamedTuple, Optional, Sequence, Tuple

from .errors import NotAParkingFunction, check_cap
from .exact import factorial
from .game import GameView
from .parking import PreferenceProfile, park_sequence, simulate_park, sorted_rearrangement

Allocation = Tuple[Fraction, ...]

PERM_CAP = factorial(9)
SUBSET_CAP = 2**20
Q_BRUTE_CAP = 2**20


# ---------------------------------------------------------------------------
# small tuple statistics

def lambda_count(beta: Sequence[int], t: int) -> int:
    """Number of entries ``>= t + 2``."""
    return sum(1 for b in beta if b >= t + 2)


def gamma_count(beta: Sequence[int], s: int) -> int:
    """Number of entries ``<= s - 2``."""
    return sum(1 for b in beta if b <= s - 2)


def raise_min(beta: Sequence[int]) -> Tuple[int, ...]:
    """Copy of ``beta`` with every occurrence of its minimum increased by one."""
    if not beta:
        raise ValueError("raise_min of an empty tuple")
    low = min(beta)
    return tuple(b + 1 if b == low else b for b in beta)


def _check_increasing(beta: Sequence[int]) -> None:
    if any(x > y for x, y in zip(beta, beta[1:])):
        raise ValueError(f"tuple is not weakly increasing: {tuple(beta)}")


# ---------------------------------------------------------------------------
# segment counts

class SegmentCounter:
    """Memoised ``Q(base, s, t, k)`` for one weakly increasing ``base``.

    The recursion only ever produces tuples of the form
    ``(max(b, f) for b in base[p:])`` where the floor ``f`` is either absent or
    equal to the current segment start ``s`` (selecting the first car at spot
    ``s`` raises every entry equal to ``s`` and moves the start to ``s + 1``).
    So a state is ``(p, raised, s, t, k)`` and the memo never hashes tuples.
    Runs of "first entry below s" and "first entry above s" steps are taken in
    one jump; they cannot branch.
    """

    def __init__(self, base: Sequence[int]):
        base = tuple(base)
        _check_increasing(base)
        if base and base[0] < 1:
            raise ValueError("preferences must be positive")
        self.base = base
        self._memo: Dict[tuple, int] = {}

    def __len__(self) -> int:
        return len(self._memo)

    def count(self, s: int, t: int, k: int) -> int:
        if k < 0:
            raise ValueError("k must be nonnegative")
        depth = 2 * len(self.base) + 64
        if sys.getrecursionlimit() < depth:
            sys.setrecursionlimit(depth)
        return self._q(0, False, s, t, k)

    def _q(self, p: int, raised: bool, s: int, t: int, k: int) -> int:
        if k == 0:
            return 1
        base = self.base
        if k > t - s + 1 or k > len(base) - p:
            return 0
        first = base[p]
        if raised and first < s:
            first = s
        if first < s:
            return self._q(bisect_left(base, s, p), False, s, t, k)
        if first > s:
            return self._q(p, False, first, t, k)
        key = (p, raised, s, t, k)
        hit = self._memo.get(key)
        if hit is not None:
            return hit
        value = self._q(p + 1, True, s + 1, t, k - 1) + self._q(p + 1, raised, s, t, k)
        self._memo[key] = value
        return value


class QMemo:
    """Cache of :class:`SegmentCounter` objects keyed by tuple content."""

    def __init__(self):
        self._counters: Dict[Tuple[int, ...], SegmentCounter] = {}

    def counter(self, beta: Sequence[int]) -> SegmentCounter:
        beta = tuple(beta)
        c = self._counters.get(beta)
        if c is None:
            c = self._counters[beta] = SegmentCounter(beta)
        return c

    def __len__(self) -> int:
        return sum(len(c) for c in self._counters.values())


def count_Q(beta: Sequence[int], s: int, t: int, k: int, memo: Optional[QMemo] = None) -> int:
    """Number of ``k``-subsets of ``beta`` that park inside spots ``s..t``."""
    if memo is None:
        memo = QMemo()
    return memo.counter(beta).count(s, t, k)


def count_Q_unmemoized(beta: Sequence[int], s: int, t: int, k: int) -> int:
    """The same recursion on explicit tuples, one step at a time, no cache.

    Exponential in the worst case; kept as a transparent reference.
    """
    beta = tuple(beta)
    _check_increasing(beta)

    def q(beta, s, k):
        if k == 0:
            return 1
        if k > t - s + 1 or k > len(beta):
            return 0
        b1 = beta[0]
        if b1 < s:
            return q(beta[1:], s, k)
        if b1 > s:
            return q(beta, s + 1, k)
        return q(raise_min(beta)[1:], s + 1, k - 1) + q(beta[1:], s, k)

    return q(beta, s, k)


def count_Q_bruteforce(beta: Sequence[int], s: int, t: int, k: int) -> int:
    """Enumerate index subsets, shift preferences by ``s - 1`` and park them.

    A subset counts when every selected car prefers a spot in ``s..t`` and
    none falls off the end of the ``t - s + 1`` spot street.
    """
    beta = tuple(beta)
    check_cap(1 << len(beta), Q_BRUTE_CAP, f"brute-force Q over {len(beta)} entries")
    if k < 0:
        raise ValueError("k must be nonnegative")
    length = t - s + 1
    total = 0
    for idx in itertools.combinations(range(len(beta)), k):
        shifted = [beta[i] - (s - 1) for i in idx]
        if any(b < 1 or b > length for b in shifted):
            continue
        spots, _ = park_sequence(shifted, length)
        if spots is not None:
            total += 1
    return total


# ---------------------------------------------------------------------------
# the formula

def segment_weight_R(beta: Sequence[int], s: int, t: int, n: int,
                     memo: Optional[QMemo] = None) -> int:
    """Arrival-order weight of block ``s..t`` for the car removed from ``beta``.

    ``n`` is the number of cars including the removed one.  Terms whose left
    segment count vanishes are skipped before their factorials are formed.
    """
    if memo is None:
        memo = QMemo()
    counter = memo.counter(beta)
    lam_max = lambda_count(beta, t)
    gam_max = gamma_count(beta, s)
    total = 0
    for gam in range(gam_max + 1):
        left = counter.count(1, s - 2, gam)
        if left == 0:
            continue
        for lam in range(lam_max + 1):
            before = t - s + 1 + lam + gam
            after = n - t + s - lam - gam - 2
            assert before >= 0 and after >= 0, (beta, s, t, lam, gam)
            total += comb(lam_max, lam) * left * factorial(before) * factorial(after)
    return total


class Term(NamedTuple):
    s: int
    t: int
    displacement: int
    q_block: int
    weight: int

    @property
    def value(self) -> int:
        return self.displacement * self.q_block * self.weight


class ShapleyEngine:
    """Polynomial-time Shapley shares for one parking function.

    Shares depend only on a car's preference, so numerators are computed once
    per distinct value.  :meth:`numerator` regroups the double sum: with
    ``F(x) = x! (n-1-x)!`` it evaluates

        Σ_s Σ_t (t-a+1) Q_block(s, t) Σ_γ L_s[γ] G(Λ_t, t-s+1+γ),
        G(Λ, y) = Σ_λ C(Λ, λ) F(y + λ),

    which is the same sum as :meth:`numerator_literal`.  ``Λ_t`` is the same
    with or without the removed car (its preference is ``<= t``), and so is
    the left vector ``L_s[γ] = Q(·, 1, s-2, γ)`` (only entries ``<= s-2`` can
    be selected and the removed car prefers a spot ``>= s``); both are shared
    across cars.
    """

    def __init__(self, profile: PreferenceProfile):
        outcome = simulate_park(profile)
        if not outcome.parked:
            raise NotAParkingFunction(profile.prefs, outcome.failed_car)
        self.profile = profile
        self.n = profile.n
        self.m = profile.m
        sorted_profile, self.ranks = sorted_rearrangement(profile)
        self.sorted_prefs = sorted_profile.prefs
        assert self.sorted_prefs[-1] <= self.m
        self.memo = QMemo()
        self._left: Dict[int, Tuple[int, ...]] = {}
        self._g: Dict[Tuple[int, int], int] = {}
        self._numerators: Dict[int, int] = {}

    def reduced(self, value: int) -> Tuple[int, ...]:
        """Sorted profile with one entry equal to ``value`` removed."""
        sp = self.sorted_prefs
        i = bisect_left(sp, value)
        if i == len(sp) or sp[i] != value:
            raise ValueError(f"no car prefers spot {value}")
        return sp[:i] + sp[i + 1:]

    def _lambda(self, t: int) -> int:
        return len(self.sorted_prefs) - bisect_left(self.sorted_prefs, t + 2)

    def _left_counts(self, s: int) -> Tuple[int, ...]:
        vec = self._left.get(s)
        if vec is None:
            counter = self.memo.counter(self.sorted_prefs)
            gam_max = min(bisect_right(self.sorted_prefs, s - 2), max(s - 2, 0))
            vec = tuple(counter.count(1, s - 2, g) for g in range(gam_max + 1))
            self._left[s] = vec
        return vec

    def _orders(self, before: int) -> int:
        after = self.n - 1 - before
        assert before >= 0 and after >= 0, (self.profile.prefs, before)
        return factorial(before) * factorial(after)

    def _g_weight(self, lam_max: int, y: int) -> int:
        key = (lam_max, y)
        g = self._g.get(key)
        if g is None:
            g = sum(comb(lam_max, lam) * self._orders(y + lam) for lam in range(lam_max + 1))
            self._g[key] = g
        return g

    def numerator(self, value: int) -> int:
        """``n!`` times the share of any car preferring spot ``value``."""
        hit = self._numerators.get(value)
        if hit is not None:
            return hit
        beta = self.reduced(value)
        block = self.memo.counter(beta)
        total = 0
        for t in range(value, self.m):
            lam_max = self._lambda(t)
            upto_t = bisect_right(beta, t)
            for s in range(1, value + 1):
                # filling s..t needs at least t-s+1 preferences inside it
                if upto_t - bisect_left(beta, s) < t - s + 1:
                    continue
                q_block = block.count(s, t, t - s + 1)
                if q_block == 0:
                    continue
                left = self._left_counts(s)
                inner = 0
                for gam, q_left in enumerate(left):
                    if q_left:
                        inner += q_left * self._g_weight(lam_max, t - s + 1 + gam)
                total += (t - value + 1) * q_block * inner
        self._numerators[value] = total
        return total

    def terms(self, car: int) -> Iterator[Term]:
        """Nonzero ``(s, t)`` terms of the sum for ``car`` with the weight R spelled out."""
        value = self.profile[car]
        beta = self.reduced(value)
        for s in range(1, value + 1):
            for t in range(value, self.m):
                q_block = count_Q(beta, s, t, t - s + 1, self.memo)
                if q_block == 0:
                    continue
                weight = segment_weight_R(beta, s, t, self.n, self.memo)
                yield Term(s, t, t - value + 1, q_block, weight)

    def numerator_literal(self, car: int) -> int:
        return sum(term.value for term in self.terms(car))

    def share(self, car: int) -> Fraction:
        return Fraction(self.numerator(self.profile[car]), factorial(self.n))

    def shares(self) -> Allocation:
        return tuple(self.share(j) for j in range(1, self.n + 1))


def shapley_car(profile: PreferenceProfile, car: int) -> Fraction:
    return ShapleyEngine(profile).share(car)


def shapley(profile: PreferenceProfile) -> Allocation:
    """Exact Shapley value of the parking game of ``profile``."""
    return ShapleyEngine(profile).shares()


# ---------------------------------------------------------------------------
# oracles

def shapley_bruteforce_perm(profile: PreferenceProfile) -> Allocation:
    """Average marginal cost over all ``n!`` arrival orders."""
    n = profile.n
    check_cap(factorial(n), PERM_CAP, f"permutation brute force with n={n}")
    game = GameView(profile)
    sums = [0] * n
    for seq in itertools.permutations(range(n)):
        mask = 0
        before = 0
        for i in seq:
            mask |= 1 << i
            after = game.characteristic(mask)
            sums[i] += after - before
            before = after
    total = factorial(n)
    return tuple(Fraction(x, total) for x in sums)


def shapley_bruteforce_subset(profile: PreferenceProfile) -> Allocation:
    """``Σ_S |S|! (n-|S|-1)! (c(S+i) - c(S)) / n!`` over all subsets."""
    n = profile.n
    check_cap(1 << n, SUBSET_CAP, f"subset brute force with n={n}")
    game = GameView(profile)
    weight = [factorial(k) * factorial(n - k - 1) for k in range(n)]
    values = [game.characteristic(mask) for mask in range(1 << n)]
    sums = [0] * n
    for mask in range(1 << n):
        size = bin(mask).count("1")
        if size == n:
            continue
        base = values[mask]
        for i in range(n):
            bit = 1 << i
            if not mask & bit:
                sums[i] += weight[size] * (values[mask | bit] - base)
    total = factorial(n)
    return tuple(Fraction(x, total) for x in sums)
