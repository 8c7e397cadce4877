import itertools
import random

import pytest

from conftest import all_pf
from parkgame.errors import NotAParkingFunction, ResourceLimit
from parkgame.game import (GameView, check_supermodular, coalition_mask, coalition_members,
                           is_modular)
from parkgame.parking import (PreferenceProfile, random_parking_function, sorted_rearrangement,
                              total_displacement)

# every value stated for (1, 1, 2) in the not-least-core counterexample
VALUES_112 = {(): 0, (1,): 0, (2,): 0, (3,): 0, (1, 3): 0, (2, 3): 0, (1, 2): 1, (1, 2, 3): 2}


def test_stated_values_112():
    g = GameView.of((1, 1, 2))
    for S, v in VALUES_112.items():
        assert g.characteristic(S) == v


def test_marginal_cost_examples():
    g = GameView.of((1, 1, 2))
    assert g.marginal_cost({1, 2}, 3) == 1
    assert g.marginal_cost({2}, 1) == 1
    for i in range(1, 4):
        assert g.marginal_cost(set(), i) == 0
    with pytest.raises(ValueError):
        g.marginal_cost({1, 2}, 2)


def test_masks():
    assert coalition_mask({1, 3}) == 0b101
    assert coalition_members(0b101) == (1, 3)
    assert coalition_mask(5, 3) == 5
    with pytest.raises(ValueError):
        coalition_mask({4}, 3)


def test_requires_parking_function():
    with pytest.raises(NotAParkingFunction):
        GameView.of((2, 2))


def test_empty_and_grand():
    for n in range(1, 6):
        for p in all_pf(n):
            g = GameView(p)
            assert g.characteristic(0) == 0
            assert g.characteristic(g.grand) == total_displacement(p)


def test_cache_agrees_with_fresh_evaluation(rng):
    for _ in range(20):
        g = GameView(random_parking_function(7, rng))
        for mask in range(1 << 7):
            cached = g.characteristic(mask)
            assert cached == g.characteristic(mask)
            assert cached == g.characteristic(mask, use_cache=False)
            assert cached >= 0


def test_rearrangement_remark():
    for n in range(1, 6):
        for p in all_pf(n):
            sp, r = sorted_rearrangement(p)
            g, gs = GameView(p), GameView(sp)
            for mask in range(1 << n):
                cars = coalition_members(mask)
                assert g.characteristic(cars) == gs.characteristic(r.image(cars))


def _monotone_marginals(g):
    n = g.n
    for i in range(1, n + 1):
        others = [c for c in range(1, n + 1) if c != i]
        subsets = [frozenset(c) for k in range(n) for c in itertools.combinations(others, k)]
        for S in subsets:
            for T in subsets:
                if S <= T:
                    assert g.marginal_cost(S, i) <= g.marginal_cost(T, i)


def test_monotone_marginals_exhaustive():
    for n in range(1, 6):
        for p in all_pf(n):
            _monotone_marginals(GameView(p))


def test_monotone_marginals_random_chains(rng):
    for _ in range(30):
        n = rng.randint(6, 10)
        g = GameView(random_parking_function(n, rng))
        for _ in range(20):
            i = rng.randint(1, n)
            chain = [c for c in range(1, n + 1) if c != i]
            rng.shuffle(chain)
            prev = 0
            for k in range(len(chain) + 1):
                mc = g.marginal_cost(chain[:k], i)
                assert mc >= prev
                prev = mc


@pytest.mark.parametrize("prefs", [(1, 1, 2), (1, 2, 3), (1, 4, 3, 3, 1, 2, 7)])
def test_supermodular_examples(prefs):
    assert check_supermodular(GameView.of(prefs)) == (True, None)


def test_supermodular_random_pf8():
    rng = random.Random(8)
    for _ in range(100):
        g = GameView(random_parking_function(8, rng))
        assert check_supermodular(g)[0]


def test_cover_and_full_checks_agree():
    for n in range(1, 5):
        for p in all_pf(n):
            g = GameView(p)
            assert check_supermodular(g) == check_supermodular(g, all_pairs=True) == (True, None)


class _Submodular(GameView):
    """A deliberately non-supermodular game to exercise the witness path."""

    def _evaluate(self, mask):
        return min(bin(mask).count("1"), 1)


def test_witness_reported():
    g = _Submodular(PreferenceProfile((1, 2, 3)))
    for all_pairs in (False, True):
        ok, (i, S, T) = check_supermodular(g, all_pairs=all_pairs)
        assert not ok
        assert S <= T and i not in T
        assert g.marginal_cost(S, i) > g.marginal_cost(T, i)


def test_supermodular_cap():
    g = GameView(PreferenceProfile(tuple(range(1, 14))))
    with pytest.raises(ResourceLimit):
        check_supermodular(g)


def test_is_modular():
    assert is_modular(GameView.of((2, 1, 3)))
    assert not is_modular(GameView.of((1, 1, 2)))
    for n in range(1, 6):
        for perm in itertools.permutations(range(1, n + 1)):
            g = GameView.of(perm)
            assert is_modular(g)
            assert all(g.characteristic(mask) == 0 for mask in range(1 << n))
        for p in all_pf(n):
            g = GameView(p)
            zero = all(g.characteristic(mask) == 0 for mask in range(1 << n))
            assert is_modular(g) == zero == (sorted(p.prefs) == list(range(1, n + 1)))
