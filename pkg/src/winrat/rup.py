"""RUP stages: unit probe, subset proof check, window shifting.

All functions take a :class:`~winrat.session.Session`; flags live on the
proof database records (``verified``/``used``) and on the session
(``promoted``/``pruned``/``rup_failed``).
"""

from __future__ import annotations

import heapq
from dataclasses import dataclass, field

from winrat.propagation import NO_CONFLICT
from winrat.session import INF, Config, ForwardContext, RupResult, Session, Sweep, assumed, check_rup

__all__ = [
    "Config",
    "RupResult",
    "check_rup",
    "unit_probe",
    "select_subset_window",
    "subset_proof_check",
    "subset_stage",
    "WindowContext",
    "build_window_context",
    "window_shift_check",
    "full_pass",
    "deactivate_subsumed",
    "prune_small_inferences",
    "restore_pruned",
    "base_clause_conflicts",
]


def unit_probe(session: Session, fwd: ForwardContext) -> list[int]:
    """Promote every unit inference x with a conflict in BCP(F + promoted, -x)."""
    out = []
    for k in range(1, session.m + 1):
        if session.size[k] != 1 or session.promoted[k] or not session.before_horizon(k):
            continue
        session.stats.rup_checks += 1
        if check_rup(fwd.state, session.clause(k)):
            fwd.promote(k)
            out.append(k)
    session.stats.probe_promoted += len(out)
    return out


def select_subset_window(is_unit, i: int, span: int) -> int:
    """Start index j of the segment anchored at unit inference i.

    Units closer than ``span`` to the lowest unit found so far extend the
    cluster; j sits ``span`` below the lowest unit, clipped to 1.
    """
    low = i
    t = i - 1
    while t >= 1 and t > low - span:
        if is_unit(t):
            low = t
        t -= 1
    return max(1, low - span)


def subset_proof_check(session: Session, fwd: ForwardContext, j: int, i: int) -> set[int]:
    """Verify I_i using only F and inferences of I_j..I_{i-1} that it needs.

    Returns the set T of segment inferences involved (each verified), or an
    empty set when some member is not RUP against F plus the segment below it.
    On failure every verified flag set by this call is reverted.
    """
    session.stats.subset_calls += 1
    db = session.db
    if db.record(i).verified:
        return {i}
    state = fwd.state
    members = [t for t in range(j, i) if not session.promoted[t] and not session.taut[t]]
    T = {i}
    heap = [-i]
    marked = []
    while heap:
        k = -heapq.heappop(heap)
        rec = db.record(k)
        if rec.verified:
            continue
        session.stats.rup_checks += 1
        state.propagate()
        state.save()
        below = [t for t in members if t < k]
        conflict = NO_CONFLICT
        try:
            for d in session.clause(k):
                if not state.assume(-d):
                    break
            for t in below:
                state.attach(session.cref(t), session.clause(t))
            conflict = state.propagate()
            if conflict != NO_CONFLICT:
                for t in below:
                    lits = session.clause(t)
                    if t not in T and (state.unit_literal(lits) or state.count_non_false(lits) == 0):
                        T.add(t)
                        heapq.heappush(heap, -t)
        finally:
            for t in reversed(below):
                state.detach(session.cref(t))
            state.rollback()
        if conflict == NO_CONFLICT:
            for t in marked:
                db.record(t).verified = False
            return set()
        rec.verified = True
        marked.append(k)
    session.stats.subset_verified += len(marked)
    return T


def subset_stage(session: Session, fwd: ForwardContext) -> None:
    """Backward loop over unverified unit inferences before the horizon."""
    cfg = session.cfg

    def is_unit(t):
        return session.size[t] == 1 and not session.promoted[t]

    i = session.m
    while i >= 1:
        if is_unit(i) and not session.db.record(i).verified and session.before_horizon(i):
            j = select_subset_window(is_unit, i, cfg.span)
            T = subset_proof_check(session, fwd, j, i)
            for t in sorted(T):
                if session.size[t] <= cfg.add_max and not session.taut[t]:
                    fwd.promote(t)
                    session.stats.subset_promoted += 1
            if T:
                i = j
        i -= 1


def deactivate_subsumed(session: Session) -> int:
    """Link each inference to the later unit inferences that subsume it.

    A linked inference is left off the watch lists wherever one of its
    subsuming units is visible. Returns the number of inferences affected.
    """
    m = session.m
    units = {}
    for k in range(1, m + 1):
        if session.size[k] == 1 and not session.taut[k]:
            units.setdefault(session.clause(k)[0], []).append(k)
    if not units:
        return 0
    subsumers = [()] * (m + 1)
    n = 0
    for k in range(1, m + 1):
        if session.size[k] < 1:
            continue
        found = []
        for d in session.clause(k):
            for u in units.get(d, ()):
                if u > k:
                    found.append(u)
        if found:
            subsumers[k] = tuple(sorted(set(found)))
            session.record(k).active = False
            n += 1
    session.subsumers = subsumers
    session.stats.deactivated = n
    return n


def prune_small_inferences(session: Session, cap=None) -> list[int]:
    """Mark unused binary and ternary inferences beyond ``cap`` as pruned.

    The ``cap`` most recent candidates stay attached; older ones are pruned.
    """
    if cap is None:
        cap = session.cfg.prune_cap
    if cap == INF:
        return []
    cands = [
        k
        for k in range(session.m, 0, -1)
        if session.size[k] in (2, 3)
        and not session.promoted[k]
        and not session.record(k).used
        and not session.record(k).verified
    ]
    out = cands[int(cap):]
    for k in out:
        session.pruned[k] = True
    session.stats.pruned += len(out)
    return sorted(out)


def restore_pruned(session: Session, lo: int, hi: int) -> list[int]:
    """Unprune every pruned inference with index in [lo, hi)."""
    out = [k for k in range(max(1, lo), min(hi, session.m + 1)) if session.pruned[k]]
    for k in out:
        session.pruned[k] = False
    session.stats.restored += len(out)
    return out


@dataclass
class WindowContext:
    index: int
    conflict: bool = False
    members: list = field(default_factory=list)
    used: list = field(default_factory=list)


def build_window_context(session: Session, sweep: Sweep, i: int, theta, mu) -> WindowContext:
    """Assume -I_i on the base sweep and add admissible window inferences.

    With finite ``theta`` an inference I_t (i - theta < t < i, |I_t| <= mu)
    joins the context when at most two of its literals are not false under
    the context built so far. With ``theta`` infinite every visible inference
    below i joins. The state is left with an open save point and attached
    members; :func:`release_window_context` undoes both.
    """
    state = sweep.state
    p = sweep.p
    ctx = WindowContext(i)
    state.propagate()
    state.save()
    for d in session.clause(i):
        if not state.assume(-d):
            break
    conflict = state.propagate()
    unbounded = theta == INF
    lo = 1 if unbounded else max(1, i - int(theta) + 1)
    for t in range(lo, i):
        if conflict != NO_CONFLICT:
            break
        if session.promoted[t] or session.taut[t] or session.pruned[t]:
            continue
        if not unbounded and session.size[t] > mu:
            continue
        cref = session.cref(t)
        if not session.live(cref, p) or session.inactive(t, p, promoted_only=True):
            continue
        lits = session.clause(t)
        if not unbounded and state.count_non_false(lits) > 2:
            continue
        state.attach(cref, lits)
        ctx.members.append(t)
        conflict = state.propagate()
    ctx.conflict = conflict != NO_CONFLICT
    if ctx.conflict:
        for t in ctx.members:
            lits = session.clause(t)
            if state.unit_literal(lits) or state.count_non_false(lits) == 0:
                ctx.used.append(t)
    return ctx


def release_window_context(session: Session, sweep: Sweep, ctx: WindowContext) -> None:
    state = sweep.state
    for t in reversed(ctx.members):
        state.detach(session.cref(t))
    state.rollback()


def window_shift_check(session: Session, theta=None, mu=None) -> int:
    """Backward window pass over used, unverified inferences in the prefilter.

    Returns the number of inferences verified. A miss is not a failure.
    """
    cfg = session.cfg
    theta = cfg.theta if theta is None else theta
    mu = cfg.mu if mu is None else mu
    db = session.db
    sweep = Sweep(session, "base")
    verified = 0
    try:
        for i in range(session.m, 0, -1):
            rec = db.record(i)
            if rec.verified or not rec.used:
                continue
            if not (i > cfg.tail or session.size[i] <= cfg.mu):
                continue
            sweep.move_to(session.pos[i])
            for attempt in range(2):
                session.stats.rup_checks += 1
                ctx = build_window_context(session, sweep, i, theta, mu)
                ok, used = ctx.conflict, ctx.used
                release_window_context(session, sweep, ctx)
                if ok:
                    rec.verified = True
                    for t in used:
                        db.record(t).used = True
                    verified += 1
                    break
                session.stats.window_misses += 1
                lo = 1 if theta == INF else i - int(theta) + 1
                if attempt or not (cfg.prune and restore_pruned(session, lo, i)):
                    break
                session.stats.retries += 1
    finally:
        sweep.close()
    session.stats.window_verified += verified
    return verified


def full_pass(session: Session) -> list[int]:
    """Backward pass with every visible clause attached (theta = infinity).

    Marks used the inferences in each conflict cone. Returns the indices that
    are still not RUP after restoring all pruned inferences below them.
    """
    db = session.db
    failed = []
    sweep = Sweep(session, "full")
    try:
        for i in range(session.m, 0, -1):
            rec = db.record(i)
            if rec.verified or not rec.used:
                continue
            sweep.move_to(session.pos[i])
            for attempt in range(2):
                session.stats.rup_checks += 1
                res = check_rup(sweep.state, session.clause(i))
                if res:
                    rec.verified = True
                    session.mark_used(res.antecedents)
                    session.stats.full_verified += 1
                    if session.cfg.debug_theorem2:
                        session.stats.conflict_audits += 1
                        if not base_clause_conflicts(session, sweep.p, session.clause(i)):
                            session.stats.conflict_audit_misses += 1
                    break
                restored = restore_pruned(session, 1, i) if attempt == 0 else []
                if not restored:
                    session.rup_failed[i] = True
                    failed.append(i)
                    break
                session.stats.retries += 1
                sweep.resync(restored)
    finally:
        sweep.close()
    return failed


def _closure(clauses, lits):
    """Rescan closure of BCP(clauses + negated lits) and the conflict clauses."""
    true = {-d for d in lits}
    changed = True
    while changed:
        changed = False
        for c in clauses:
            open_ = [d for d in c if -d not in true]
            if len(open_) == 1 and open_[0] not in true:
                true.add(open_[0])
                changed = True
    return true


def base_clause_conflicts(session: Session, p, clause) -> bool:
    """Some input or promoted clause visible at p is falsified by the closure."""
    all_clauses = []
    base = []
    for cref in range(session.n_in + session.m):
        if not session.visible(cref, p):
            continue
        lits = session.cref_lits(cref)
        k = session.inference_of(cref)
        all_clauses.append(lits)
        if cref < session.n_in or session.promoted[k]:
            base.append(lits)
    true = _closure(all_clauses, clause)
    return any(all(-d in true for d in c) for c in base)
