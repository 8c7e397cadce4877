import itertools
import random
from collections import Counter
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import all_pf
from parkgame.errors import NotAParkingFunction, ResourceLimit
from parkgame.exact import factorial
from parkgame.parking import (PreferenceProfile, park_sequence, random_parking_function,
                              total_displacement)
from parkgame.shapley import (QMemo, ShapleyEngine, count_Q, count_Q_bruteforce,
                              count_Q_unmemoized, gamma_count, lambda_count, raise_min,
                              segment_weight_R, shapley, shapley_bruteforce_perm,
                              shapley_bruteforce_subset, shapley_car)

P = PreferenceProfile
EXAMPLE_1 = P((1, 4, 3, 3, 1, 2, 7))
EXAMPLE_1_SHARES = (F(47, 30), F(17, 30), F(67, 60), F(67, 60), F(47, 30), F(16, 15), F(0))


# --- tuple statistics --------------------------------------------------------

def test_lambda_count():
    assert lambda_count((1, 1, 2, 3, 3, 7), 4) == 1
    assert lambda_count((), 4) == 0
    assert lambda_count((5, 6, 7), 3) == 3


def test_gamma_count():
    assert gamma_count((1, 1, 2, 3, 3, 7), 2) == 0
    assert gamma_count((1, 1, 2, 3, 3, 7), 4) == 3
    assert gamma_count((1, 2, 3), 1) == 0


def test_raise_min():
    assert raise_min((3, 3, 4, 4, 5)) == (4, 4, 4, 4, 5)
    assert raise_min((1,)) == (2,)
    assert raise_min((2, 5)) == (3, 5)
    with pytest.raises(ValueError):
        raise_min(())


# --- segment counts ----------------------------------------------------------

def test_q_examples():
    assert count_Q((1, 2, 5), 2, 4, 0) == 1
    assert count_Q((), 3, 1, 0) == 1
    assert count_Q((1, 1), 1, 2, 2) == count_Q_bruteforce((1, 1), 1, 2, 2) == 1
    assert count_Q((3, 3), 1, 3, 2) == count_Q_bruteforce((3, 3), 1, 3, 2) == 0
    # Example 2: cars 3, 4, 5 must fill spots 2..4
    assert count_Q((1, 1, 2, 3, 3, 7), 2, 4, 3) == 1


def test_q_brute_edge_cases():
    assert count_Q_bruteforce((1, 2), 1, 2, 3) == 0
    assert count_Q_bruteforce((4, 5), 3, 1, 0) == 1
    assert count_Q_bruteforce((4, 5), 3, 1, 1) == 0
    with pytest.raises(ResourceLimit):
        count_Q_bruteforce(tuple(range(1, 22)), 1, 21, 3)


def _prefixes_of_increasing(n):
    seen = set()
    for p in all_pf(n, n, True):
        for k in range(n + 1):
            seen.add(p.prefs[:k])
    return sorted(seen)


def test_q_exhaustive_against_brute_and_literal_recursion():
    for beta in _prefixes_of_increasing(5):
        memo = QMemo()
        for s in range(1, 7):
            for t in range(0, 7):
                for k in range(0, 6):
                    brute = count_Q_bruteforce(beta, s, t, k)
                    assert count_Q(beta, s, t, k, memo) == brute, (beta, s, t, k)
                    assert count_Q_unmemoized(beta, s, t, k) == brute


increasing_tuples = st.lists(st.integers(1, 9), max_size=9).map(lambda xs: tuple(sorted(xs)))


@settings(max_examples=300)
@given(increasing_tuples, st.integers(1, 10), st.integers(0, 10), st.integers(0, 9))
def test_q_random_against_brute(beta, s, t, k):
    assert count_Q(beta, s, t, k) == count_Q_bruteforce(beta, s, t, k)


def test_q_adversarial_min_above_start():
    # smallest preference beyond the segment start
    for beta in [(3, 3), (3, 4), (4, 4, 4), (2, 5, 5, 6), (5, 6, 6, 7, 9)]:
        for s in range(1, beta[0]):
            for t in range(s, 10):
                for k in range(len(beta) + 1):
                    assert count_Q(beta, s, t, k) == count_Q_bruteforce(beta, s, t, k)


def test_q_queries_arising_from_profiles_n6():
    for p in all_pf(6, 6, True):
        engine = ShapleyEngine(p)
        for value in set(p.prefs):
            beta = engine.reduced(value)
            for s in range(1, value + 1):
                for g in range(6):
                    assert count_Q(beta, 1, s - 2, g) == count_Q_bruteforce(beta, 1, s - 2, g)
                for t in range(value, 6):
                    k = t - s + 1
                    assert count_Q(beta, s, t, k) == count_Q_bruteforce(beta, s, t, k)


def test_shared_memo_matches_fresh():
    rng = random.Random(3)
    memo = QMemo()
    for _ in range(300):
        beta = tuple(sorted(rng.randint(1, 8) for _ in range(rng.randint(0, 8))))
        s, t, k = rng.randint(1, 8), rng.randint(0, 8), rng.randint(0, 8)
        assert count_Q(beta, s, t, k, memo) == count_Q(beta, s, t, k) \
            == count_Q_unmemoized(beta, s, t, k)


# --- the weight R and individual terms -------------------------------------

def test_example_2_term():
    beta = (1, 1, 2, 3, 3, 7)  # rank 6 removed from (1, 1, 2, 3, 3, 4, 7)
    assert segment_weight_R(beta, 2, 4, 7) == 3 * 2 * 3 * 2 + 24 * 2 == 84
    terms = {(t.s, t.t): t for t in ShapleyEngine(EXAMPLE_1).terms(2)}
    term = terms[(2, 4)]
    assert (term.displacement, term.q_block, term.weight, term.value) == (1, 1, 84, 84)


def test_r_at_s_equal_1_uses_gamma_zero_only():
    beta = (1, 1, 2, 3, 3, 7)
    lam = lambda_count(beta, 4)
    expected = sum(factorial(4 + l) * factorial(7 - 4 - l - 1) * (1 if l == 0 else lam)
                   for l in range(lam + 1))
    assert segment_weight_R(beta, 1, 4, 7) == expected


def _block_counts(sorted_prefs, car):
    """Arrival orders, tallied by the occupied block ``(s, t)`` that ``car`` lands on."""
    n = len(sorted_prefs)
    a = sorted_prefs[car - 1]
    tally = Counter()
    for seq in itertools.permutations(range(1, n + 1)):
        before = seq[:seq.index(car)]
        spots, _ = park_sequence([sorted_prefs[c - 1] for c in before], n)
        occupied = set(spots)
        if a not in occupied:
            continue
        s = a
        while s - 1 in occupied:
            s -= 1
        t = a
        while t + 1 in occupied:
            t += 1
        tally[(s, t)] += 1
    return tally


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
def test_terms_match_permutation_decomposition(n):
    for p in all_pf(n, n, True):
        engine = ShapleyEngine(p)
        for car in range(1, n + 1):
            terms = {(t.s, t.t): t.q_block * t.weight for t in engine.terms(car)}
            assert terms == dict(_block_counts(p.prefs, car))
            assert all(v >= 1 for v in terms.values())


def test_terms_match_permutation_decomposition_random_n6():
    rng = random.Random(6)
    for _ in range(6):
        p = P(tuple(sorted(random_parking_function(6, rng).prefs)))
        engine = ShapleyEngine(p)
        car = rng.randint(1, 6)
        terms = {(t.s, t.t): t.q_block * t.weight for t in engine.terms(car)}
        assert terms == dict(_block_counts(p.prefs, car))


def test_literal_and_regrouped_numerators_agree():
    for n in range(1, 7):
        for p in all_pf(n, n, True):
            engine = ShapleyEngine(p)
            for car in range(1, n + 1):
                assert engine.numerator(p[car]) == engine.numerator_literal(car)
    rng = random.Random(11)
    for _ in range(40):
        p = random_parking_function(rng.randint(7, 14), rng)
        engine = ShapleyEngine(p)
        for car in range(1, p.n + 1):
            assert engine.numerator(p[car]) == engine.numerator_literal(car)


# --- Shapley values ----------------------------------------------------------

def test_example_1():
    assert shapley(EXAMPLE_1) == EXAMPLE_1_SHARES
    assert shapley_car(EXAMPLE_1, 1) == F(47, 30)
    assert shapley_car(EXAMPLE_1, 7) == 0
    assert shapley_car(EXAMPLE_1, 3) == F(67, 60)
    numerators = [ShapleyEngine(EXAMPLE_1).numerator(a) for a in EXAMPLE_1.prefs]
    assert numerators == [7896, 2856, 5628, 5628, 7896, 5376, 0]


def test_counterexample_112():
    expected = (F(5, 6), F(5, 6), F(1, 3))
    assert shapley(P((1, 1, 2))) == expected
    assert shapley_bruteforce_subset(P((1, 1, 2))) == expected
    assert shapley_bruteforce_perm(P((1, 1, 2))) == expected


def test_two_ones():
    assert shapley_bruteforce_perm(P((1, 1))) == (F(1, 2), F(1, 2))
    assert shapley(P((1, 1))) == (F(1, 2), F(1, 2))


def test_permutation_profiles_are_free():
    for n in range(1, 6):
        for perm in itertools.permutations(range(1, n + 1)):
            zero = (F(0),) * n
            assert shapley(P(perm)) == shapley_bruteforce_subset(P(perm)) == zero


def test_oracles_agree_on_example_1():
    assert shapley_bruteforce_perm(EXAMPLE_1) == EXAMPLE_1_SHARES
    assert shapley_bruteforce_subset(EXAMPLE_1) == EXAMPLE_1_SHARES


def test_oracles_agree_exhaustive_small():
    for n in range(1, 5):
        for p in all_pf(n):
            phi = shapley(p)
            assert phi == shapley_bruteforce_subset(p) == shapley_bruteforce_perm(p)
            assert sum(phi) == total_displacement(p)


@pytest.mark.parametrize("n, m", [(1, 3), (2, 3), (2, 4), (3, 4), (3, 5), (4, 5), (4, 6)])
def test_more_spots_than_cars(n, m):
    for p in all_pf(n, m):
        phi = shapley(p)
        assert phi == shapley_bruteforce_subset(p)
        assert sum(phi) == total_displacement(p)


def test_errors_and_caps():
    with pytest.raises(NotAParkingFunction):
        shapley(P((2, 2)))
    with pytest.raises(NotAParkingFunction):
        shapley_bruteforce_subset(P((3, 3, 3)))
    with pytest.raises(ResourceLimit):
        shapley_bruteforce_perm(P((1,) * 10))
    with pytest.raises(ResourceLimit):
        shapley_bruteforce_subset(P((1,) * 21))


def test_shares_are_per_preference_value(rng):
    for _ in range(20):
        p = random_parking_function(rng.randint(8, 30), rng)
        phi = shapley(p)
        assert all(x >= 0 for x in phi)
        assert sum(phi) == total_displacement(p)
        for i in range(p.n):
            for j in range(p.n):
                if p.prefs[i] == p.prefs[j]:
                    assert phi[i] == phi[j]


def test_all_ones_is_split_evenly():
    for n in (1, 2, 5, 20, 60):
        assert shapley(P((1,) * n)) == (F(n - 1, 2),) * n
