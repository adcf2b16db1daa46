"""Brute-force references: model enumeration and rescanning propagation.

Nothing here shares code with the watched-literal kernels it is used to
validate.
"""

from __future__ import annotations

import itertools

MAX_VARS = 24


def _num_vars(clauses, num_vars=None):
    n = max((abs(d) for c in clauses for d in c), default=0)
    return max(n, num_vars or 0)


def model_set(clauses, num_vars=None) -> frozenset:
    """All satisfying assignments as tuples of DIMACS literals over 1..n."""
    clauses = [tuple(c) for c in clauses]
    n = _num_vars(clauses, num_vars)
    if n > MAX_VARS:
        raise ValueError(f"{n} variables exceeds the enumeration bound {MAX_VARS}")
    models = []
    for bits in itertools.product((False, True), repeat=n):
        if all(any(bits[abs(d) - 1] == (d > 0) for d in c) for c in clauses):
            models.append(tuple(v if b else -v for v, b in enumerate(bits, 1)))
    return frozenset(models)


def exhaustive_sat(clauses, num_vars=None):
    """A model as a tuple of literals, or None when unsatisfiable."""
    clauses = [tuple(c) for c in clauses]
    n = _num_vars(clauses, num_vars)
    if n > MAX_VARS:
        raise ValueError(f"{n} variables exceeds the enumeration bound {MAX_VARS}")
    for bits in itertools.product((False, True), repeat=n):
        if all(any(bits[abs(d) - 1] == (d > 0) for d in c) for c in clauses):
            return tuple(v if b else -v for v, b in enumerate(bits, 1))
    return None


def naive_bcp(clauses, assumptions=()):
    """Rescan propagation. Returns (conflict, assigned literal set).

    Assumptions that contradict each other count as a conflict. Rescans all
    clauses until nothing changes or some clause is fully falsified.
    """
    true = set()
    for d in assumptions:
        if -d in true:
            return True, true
        true.add(d)
    changed = True
    while changed:
        changed = False
        for c in clauses:
            open_ = []
            sat = False
            for d in c:
                if d in true:
                    sat = True
                    break
                if -d not in true:
                    open_.append(d)
            if sat:
                continue
            if not open_:
                return True, true
            if len(open_) == 1:
                true.add(open_[0])
                changed = True
    return False, true


def is_rup(clauses, clause) -> bool:
    return naive_bcp(clauses, [-d for d in clause])[0]


def is_rat(clauses, clause, pivots=None) -> bool:
    """RUP, or RAT on some literal (``pivots`` restricts the candidates)."""
    if is_rup(clauses, clause):
        return True
    for l in pivots if pivots is not None else clause:
        ok = True
        for D in clauses:
            if -l not in D:
                continue
            E = set(clause) | {d for d in D if d != -l}
            if any(-d in E for d in E):
                continue
            if not is_rup(clauses, E):
                ok = False
                break
        if ok:
            return True
    return False
