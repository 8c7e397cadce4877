"""Timing harness: polynomial Shapley against the two brute-force oracles."""

from __future__ import annotations

import csv
import random
import statistics
import time
from typing import Iterable, TextIO

from .errors import ResourceLimit
from .parking import random_parking_function
from .shapley import shapley, shapley_bruteforce_perm, shapley_bruteforce_subset

HEADER = ("n", "method", "samples", "median_ms", "min_ms", "agreement", "status")

# brute-force methods are run only up to these sizes
BRUTE_MAX_N = {"brute-subset": 12, "brute-perm": 9}
BRUTE = {"brute-subset": shapley_bruteforce_subset, "brute-perm": shapley_bruteforce_perm}


def _timed(fn, profile):
    start = time.perf_counter()
    value = fn(profile)
    return value, (time.perf_counter() - start) * 1000.0


def bench_rows(n_range: Iterable[int], samples: int, seed: int):
    """Yield one dict per (n, method); brute rows carry an agreement flag."""
    rng = random.Random(seed)
    for n in n_range:
        profiles = [random_parking_function(n, rng) for _ in range(samples)]
        reference, times = [], []
        for p in profiles:
            v, ms = _timed(shapley, p)
            reference.append(v)
            times.append(ms)
        yield _row(n, "poly", samples, times, "", "ok")
        for method, fn in BRUTE.items():
            if n > BRUTE_MAX_N[method]:
                yield _row(n, method, samples, [], "", "skipped")
                continue
            times, agree = [], True
            try:
                for p, ref in zip(profiles, reference):
                    v, ms = _timed(fn, p)
                    times.append(ms)
                    agree = agree and v == ref
            except ResourceLimit:
                yield _row(n, method, samples, [], "", "skipped")
                continue
            yield _row(n, method, samples, times, str(agree).lower(), "ok")


def _row(n, method, samples, times, agreement, status):
    return {
        "n": n,
        "method": method,
        "samples": samples,
        "median_ms": f"{statistics.median(times):.3f}" if times else "",
        "min_ms": f"{min(times):.3f}" if times else "",
        "agreement": agreement,
        "status": status,
    }


def run_bench(n_range: Iterable[int], samples: int, seed: int, out: TextIO) -> None:
    writer = csv.DictWriter(out, fieldnames=HEADER, lineterminator="\n")
    writer.writeheader()
    for row in bench_rows(n_range, samples, seed):
        writer.writerow(row)
        out.flush()
