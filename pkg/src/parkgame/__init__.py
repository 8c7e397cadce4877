"""Parking games: exact Shapley values, oracles and least core for parking functions."""

from .errors import NotAParkingFunction, ResourceLimit
from .exact import Rational, factorial, format_rational, parse_rational, rat_arith
from .game import GameView, check_supermodular, coalition_mask, coalition_members, is_modular
from .leastcore import (LeastCoreResult, build_least_core_lp, certify_least_core,
                        core_is_empty, least_core, shapley_least_core_gap)
from .parking import (ArrivalOrder, ParkingOutcome, PreferenceProfile, RankMap,
                      apply_permutation, count_parking_functions,
                      enumerate_parking_functions, is_parking_function,
                      random_parking_function, simulate_park, sorted_rearrangement,
                      total_displacement)
from .shapley import (QMemo, ShapleyEngine, count_Q, count_Q_bruteforce, gamma_count,
                      lambda_count, raise_min, segment_weight_R, shapley, shapley_bruteforce_perm,
                      shapley_bruteforce_subset, shapley_car)
from .simplex import LinearProgramExact, solve_lp_exact

__version__ = "0.1.0"
