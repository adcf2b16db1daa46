"""Naive forward checker used as the reference verdict."""

from __future__ import annotations

from winrat.proof_io import ADD, ProofDB
from winrat.testkit.oracle import is_rat


def naive_forward_check(formula, db: ProofDB, rat=True):
    """Check every addition against all clauses live before it.

    Returns ``(True, None)`` when every addition up to the first empty clause
    is RUP (or RAT with ``rat``), else ``(False, k)`` with k the 1-based index
    of the first failing inference, or ``(False, None)`` when there is no
    empty clause. Deletions remove one matching live copy.
    """
    live = [tuple(c) for c in formula.clauses]
    for step in db.steps:
        c = db.step_clause(step)
        if step.kind != ADD:
            for n in range(len(live) - 1, -1, -1):
                if live[n] == c:
                    del live[n]
                    break
            continue
        pivots = None
        if step.pivot:
            pivots = [step.pivot] + [d for d in c if d != step.pivot]
        ok = is_rat(live, c, pivots) if rat else is_rat(live, c, [])
        if not ok:
            return False, step.inference
        if not c:
            return True, None
        live.append(c)
    return False, None
