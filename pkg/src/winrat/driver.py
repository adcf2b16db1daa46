"""The verification pipeline.

Stages, in order: unit probe, unit-anchored subset checks, global conflict
seed, equivalence-block fast path, pruning, finite window pass, full pass,
RAT checks. Only the last two can reject a proof.
"""

from __future__ import annotations

import time
from contextlib import contextmanager
from dataclasses import dataclass

from winrat.proof_io import Formula, ProofDB
from winrat.propagation import NO_CONFLICT
from winrat.rat import check_rat_at, match_equivalence_block, session_occurrences, verify_equivalence_block
from winrat.rup import (
    deactivate_subsumed,
    full_pass,
    prune_small_inferences,
    restore_pruned,
    subset_stage,
    unit_probe,
    window_shift_check,
)
from winrat.session import INF, Config, ForwardContext, Session, Stats, Sweep, check_rup

VERIFIED = "VERIFIED"
NOT_VERIFIED = "NOT VERIFIED"


@dataclass
class Verdict:
    status: str
    reason: str = ""
    failing_index: int | None = None

    @property
    def verified(self) -> bool:
        return self.status == VERIFIED

    def __bool__(self) -> bool:
        return self.verified


def locate_empty_clause(db: ProofDB):
    """1-based index of the first empty-clause addition, or None."""
    for k, rec in enumerate(db.inferences, 1):
        if rec.size == 0:
            return k
    return None


@contextmanager
def _timed(stats: Stats, stage: str):
    t0 = time.perf_counter()
    try:
        yield
    finally:
        stats.times[stage] = stats.times.get(stage, 0.0) + time.perf_counter() - t0


def seed_used_flags(session: Session) -> bool:
    """Propagate everything visible at ∅ and mark the conflict cone used."""
    E = session.m
    sweep = Sweep(session, "full")
    try:
        sweep.move_to(session.pos[E])
        conflict = sweep.state.propagate()
        if conflict == NO_CONFLICT:
            return False
        session.mark_used(sweep.state.analyze())
    finally:
        sweep.close()
    rec = session.record(E)
    rec.used = rec.verified = True
    return True


def fastpath_stage(session: Session) -> int:
    n = 0
    i = 1
    while i <= session.m:
        block = match_equivalence_block(session, i)
        if block is None or not verify_equivalence_block(block):
            i += 1
            continue
        for k in block.indices:
            session.record(k).verified = True
        n += 1
        i += block.n + 1
    session.stats.fastpath_blocks += n
    return n


def rat_stage(session: Session):
    """Check every used, unverified inference by RUP then RAT, newest first."""
    db = session.db
    restore_pruned(session, 1, session.m + 1)
    occ = None
    sweep = Sweep(session, "full")
    try:
        for i in range(session.m, 0, -1):
            rec = db.record(i)
            if rec.verified or not rec.used:
                continue
            sweep.move_to(session.pos[i])
            if not session.rup_failed[i]:
                session.stats.rup_checks += 1
                res = check_rup(sweep.state, session.clause(i))
                if res:
                    rec.verified = True
                    session.mark_used(res.antecedents)
                    continue
            if occ is None:
                occ = session_occurrences(session)
            cone = check_rat_at(session, sweep, occ, i)
            if cone is None:
                return i
            rec.verified = True
            session.mark_used(cone)
    finally:
        sweep.close()
    return None


def verify(formula: Formula, db: ProofDB, cfg: Config | None = None):
    """Check that ``db`` refutes ``formula``. Returns (Verdict, Stats)."""
    cfg = cfg or Config()
    stats = Stats()
    r0, e0 = db.reloads, db.evictions
    try:
        verdict = _verify(formula, db, cfg, stats)
    finally:
        stats.reloads = db.reloads - r0
        stats.evictions = db.evictions - e0
    return verdict, stats


def _verify(formula, db, cfg, stats):
    E = locate_empty_clause(db)
    if E is None:
        return Verdict(NOT_VERIFIED, "no empty clause in proof")
    db.empty_at = E
    with _timed(stats, "load"):
        session = Session(formula, db, cfg, stats)

    with _timed(stats, "forward"):
        if cfg.probe or cfg.subset:
            fwd = ForwardContext(session)
            if cfg.probe:
                unit_probe(session, fwd)
            if cfg.subset:
                subset_stage(session, fwd)
            fwd.close()
        if cfg.deactivate:
            deactivate_subsumed(session)
        session.build_events()

    with _timed(stats, "seed"):
        if not seed_used_flags(session):
            return Verdict(NOT_VERIFIED, "no global conflict")

    if cfg.fastpath:
        with _timed(stats, "fastpath"):
            fastpath_stage(session)

    if cfg.prune:
        prune_small_inferences(session)

    if cfg.window and cfg.theta != INF:
        with _timed(stats, "window"):
            window_shift_check(session)

    if session.used_unverified():
        with _timed(stats, "full"):
            full_pass(session)

    if session.used_unverified():
        with _timed(stats, "rat"):
            failing = rat_stage(session)
        if failing is not None:
            return Verdict(NOT_VERIFIED, f"inference {failing} is neither RUP nor RAT", failing)

    return Verdict(VERIFIED)


def flag_vectors(db: ProofDB, upto=None):
    """(verified, used) flags of I_1..I_upto as two tuples."""
    recs = db.inferences[:upto] if upto else db.inferences
    return tuple(r.verified for r in recs), tuple(r.used for r in recs)
