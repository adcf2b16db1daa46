"""Seed-deterministic formula families."""

from __future__ import annotations

import itertools
import random

from winrat.clauses import Formula


def gen_pigeonhole(holes: int) -> Formula:
    """PHP(holes+1, holes); variable p(i, j) means pigeon i sits in hole j."""
    if holes < 1:
        raise ValueError("holes must be >= 1")
    pigeons = holes + 1

    def p(i, j):
        return i * holes + j + 1

    f = Formula(pigeons * holes)
    for i in range(pigeons):
        f.add([p(i, j) for j in range(holes)])
    for j in range(holes):
        for a, b in itertools.combinations(range(pigeons), 2):
            f.add([-p(a, j), -p(b, j)])
    return f


def gen_random_ksat(num_vars: int, num_clauses: int, k: int = 3, seed: int = 0) -> Formula:
    """Uniform random k-CNF with k distinct variables per clause."""
    if k > num_vars:
        raise ValueError("k exceeds the number of variables")
    rng = random.Random(seed)
    f = Formula(num_vars)
    for _ in range(num_clauses):
        vs = rng.sample(range(1, num_vars + 1), k)
        f.add([v if rng.random() < 0.5 else -v for v in vs])
    return f


def gen_random_mixed(seed: int, lo_vars=8, hi_vars=16) -> Formula:
    """Random 3-CNF near the threshold, so SAT and UNSAT both occur."""
    rng = random.Random(seed)
    n = rng.randint(lo_vars, hi_vars)
    ratio = rng.uniform(3.6, 5.4)
    return gen_random_ksat(n, int(round(n * ratio)), 3, rng.randrange(1 << 30))
