"""Clause universe of one verification run.

Every input clause and inference gets a clause reference (cref): input clause
``j`` (0-based) is ``j``, inference ``I_k`` (1-based) is ``n_inputs + k - 1``.
Each cref has a lifetime on the truncated step list: input clauses are born at
position -1, an inference at its own step, and a deletion step ends the life
of the latest live clause with matching literals.

A check of the inference at position ``p`` may see a clause when it is live
(``born < p < died``), or when it was promoted into the formula by the unit
probe / subset stages and ``p`` lies before the first deletion of an input
clause (``horizon``). Promoted clauses are implied by the full input formula,
and before the horizon the live set still contains the whole input formula,
so adding them there never changes what the live set implies.
"""

from __future__ import annotations

import bisect
import logging
from contextlib import contextmanager
from dataclasses import dataclass, field

from winrat.clauses import clause_hash, is_tautology
from winrat.proof_io import ADD, Formula, ProofDB
from winrat.propagation import NO_CONFLICT, PropagationState

logger = logging.getLogger(__name__)

INF = float("inf")


class DeletionTable:
    """Live clauses bucketed by clause_hash in a power-of-two table.

    A hash match is only a candidate; lookups compare the full literal tuple.
    """

    def __init__(self, bits=10):
        self._bits = bits
        self._buckets = [[] for _ in range(1 << bits)]
        self._count = 0

    def __len__(self) -> int:
        return self._count

    def _slot(self, h):
        return h & ((1 << self._bits) - 1)

    def _grow(self):
        old = self._buckets
        self._bits += 1
        self._buckets = [[] for _ in range(1 << self._bits)]
        for bucket in old:
            for entry in bucket:
                self._buckets[self._slot(entry[0])].append(entry)

    def add(self, clause, cref, h=None) -> None:
        if h is None:
            h = clause_hash(clause)
        if self._count >= 2 * len(self._buckets):
            self._grow()
        self._buckets[self._slot(h)].append((h, tuple(clause), cref))
        self._count += 1

    def remove(self, clause, h=None):
        """Remove and return the cref of the latest live exact match, or None."""
        if h is None:
            h = clause_hash(clause)
        clause = tuple(clause)
        bucket = self._buckets[self._slot(h)]
        for n in range(len(bucket) - 1, -1, -1):
            eh, ec, cref = bucket[n]
            if eh == h and ec == clause:
                del bucket[n]
                self._count -= 1
                return cref
        return None


@dataclass
class Config:
    theta: float = 40000
    mu: float = 6
    span: int = 500
    tail: int = 100000
    add_max: int = 3
    prune_cap: float = 1000
    probe: bool = True
    subset: bool = True
    window: bool = True
    deactivate: bool = True
    prune: bool = True
    fastpath: bool = True
    debug_theorem2: bool = False

    def __post_init__(self):
        if not (self.theta >= 1):
            raise ValueError("theta must be >= 1 or inf")
        if not (self.mu >= 1):
            raise ValueError("mu must be >= 1 or inf")
        if self.span < 1:
            raise ValueError("span must be >= 1")
        if self.prune_cap < 0:
            raise ValueError("prune_cap must be >= 0")


@dataclass
class Stats:
    rup_checks: int = 0
    rat_checks: int = 0
    occurrence_builds: int = 0
    fastpath_blocks: int = 0
    window_misses: int = 0
    window_verified: int = 0
    full_verified: int = 0
    probe_promoted: int = 0
    subset_calls: int = 0
    subset_verified: int = 0
    subset_promoted: int = 0
    deactivated: int = 0
    pruned: int = 0
    restored: int = 0
    retries: int = 0
    propagations: int = 0
    rebuilds: int = 0
    reloads: int = 0
    evictions: int = 0
    missing_deletions: int = 0
    conflict_audits: int = 0
    conflict_audit_misses: int = 0
    times: dict = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = []
        for name, value in self.__dict__.items():
            if name == "times":
                continue
            out.append(f"{name} {value}")
        for stage, t in self.times.items():
            out.append(f"time.{stage} {t:.4f}")
        return out


@dataclass
class RupResult:
    verified: bool
    antecedents: list = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.verified


@contextmanager
def assumed(state, lits):
    """Assume the negation of ``lits`` and propagate; roll back on exit.

    Yields the conflict cref (or NO_CONFLICT). The state must be at a base
    fixpoint on entry.
    """
    state.save()
    try:
        for d in lits:
            if not state.assume(-d):
                break
        yield state.propagate()
    finally:
        state.rollback()


def check_rup(state, clause) -> RupResult:
    """RUP test of ``clause`` against whatever is attached to ``state``."""
    state.propagate()
    with assumed(state, clause) as conflict:
        if conflict == NO_CONFLICT:
            return RupResult(False)
        return RupResult(True, state.analyze())


class Session:
    """Formula, truncated proof, per-inference flags and clause lifetimes."""

    def __init__(self, formula: Formula, db: ProofDB, cfg: Config | None = None, stats: Stats | None = None):
        self.formula = formula
        self.db = db
        self.cfg = cfg or Config()
        self.stats = stats or Stats()
        self.n_in = len(formula.clauses)
        self.m = db.empty_at if db.empty_at is not None else len(db.inferences)
        last_step = db.record(self.m).step if self.m else -1
        self.steps = db.steps[: last_step + 1]
        self.num_vars = max(formula.num_vars, db.max_var)
        m = self.m
        self.size = [0] * (m + 1)
        self.pos = [0] * (m + 1)
        self.taut = [False] * (m + 1)
        self.promoted = [False] * (m + 1)
        self.pruned = [False] * (m + 1)
        self.rup_failed = [False] * (m + 1)
        self.subsumers = [()] * (m + 1)
        for k in range(1, m + 1):
            rec = db.record(k)
            rec.verified = rec.used = False
            rec.active = True
            self.size[k] = rec.size
            self.pos[k] = rec.step
        n = self.n_in + m
        self.born = [-1] * n
        self.died = [INF] * n
        self.input_taut = [is_tautology(c) for c in formula.clauses]
        self.horizon = INF
        self.first_seen = {}
        self._scan_lifetimes()
        self._events = None

    # -- indices ------------------------------------------------------------

    def cref(self, k: int) -> int:
        return self.n_in + k - 1

    def inference_of(self, cref: int) -> int:
        """1-based inference index of a cref, 0 for input clauses."""
        return cref - self.n_in + 1 if cref >= self.n_in else 0

    def clause(self, k: int) -> tuple:
        return self.db.clause(k)

    def record(self, k: int):
        return self.db.record(k)

    def cref_lits(self, cref: int) -> tuple:
        if cref < self.n_in:
            return self.formula.clauses[cref]
        return self.db.clause(self.inference_of(cref))

    # -- lifetimes ------------------------------------------------------------

    def _scan_lifetimes(self):
        table = DeletionTable()
        seen = self.first_seen
        for j, c in enumerate(self.formula.clauses):
            table.add(c, j)
            for d in c:
                seen.setdefault(abs(d), -1)
        for p, step in enumerate(self.steps):
            if step.kind == ADD:
                k = step.inference
                c = self.db.clause(k)
                self.born[self.cref(k)] = p
                self.taut[k] = is_tautology(c)
                table.add(c, self.cref(k), self.db.record(k).hash)
            else:
                c = step.clause
                cref = table.remove(c)
                if cref is None:
                    self.stats.missing_deletions += 1
                    logger.warning("deleted clause %s not present (step %d)", list(c), p)
                else:
                    self.died[cref] = p
                    if cref < self.n_in and self.horizon == INF:
                        self.horizon = p
            for d in (c or ()):
                seen.setdefault(abs(d), p)

    def live(self, cref: int, p) -> bool:
        return self.born[cref] < p < self.died[cref]

    def visible(self, cref: int, p) -> bool:
        if self.born[cref] < p < self.died[cref]:
            return True
        return cref >= self.n_in and self.promoted[self.inference_of(cref)] and p < self.horizon

    def before_horizon(self, k: int) -> bool:
        return self.pos[k] < self.horizon

    def inactive(self, k: int, p, promoted_only=False) -> bool:
        if not self.cfg.deactivate:
            return False
        for u in self.subsumers[k]:
            if promoted_only and not self.promoted[u]:
                continue
            if self.visible(self.cref(u), p):
                return True
        return False

    def mark_used(self, crefs) -> None:
        for cref in crefs:
            if cref >= self.n_in:
                self.db.record(self.inference_of(cref)).used = True

    # -- sweep events ---------------------------------------------------------

    def build_events(self) -> None:
        """Index the positions at which a clause's attachment can change."""
        events = []
        for cref in range(self.n_in + self.m):
            for b in self._breakpoints(cref):
                if b != INF:
                    events.append((b, cref))
        events.sort()
        self._events = events
        self._event_keys = [b for b, _ in events]

    def _breakpoints(self, cref):
        yield self.born[cref]
        yield self.died[cref]
        if cref >= self.n_in:
            k = self.inference_of(cref)
            if self.promoted[k]:
                yield self.horizon
            for u in self.subsumers[k]:
                cu = self.cref(u)
                yield self.born[cu]
                yield self.died[cu]
                if self.promoted[u]:
                    yield self.horizon

    def crefs_changing_between(self, lo, hi):
        if self._events is None:
            self.build_events()
        a = bisect.bisect_left(self._event_keys, lo)
        b = bisect.bisect_right(self._event_keys, hi)
        return sorted({cref for _, cref in self._events[a:b]})

    def used_unverified(self):
        return [k for k in range(1, self.m + 1) if self.db.record(k).used and not self.db.record(k).verified]


class Sweep:
    """A PropagationState holding the clause set seen at one proof position.

    ``mode="full"`` attaches every visible clause that is not deactivated or
    pruned. ``mode="base"`` attaches only input clauses and promoted
    inferences; the window stage adds other inferences per check.
    """

    def __init__(self, session: Session, mode="full"):
        self.session = session
        self.mode = mode
        self.state = PropagationState(session.num_vars)
        self.p = None

    def wanted(self, cref: int, p) -> bool:
        s = self.session
        if cref < s.n_in:
            return not s.input_taut[cref] and s.live(cref, p)
        k = s.inference_of(cref)
        if s.taut[k] or not s.visible(cref, p):
            return False
        if self.mode == "base":
            return s.promoted[k] and not s.inactive(k, p, promoted_only=True)
        return not s.pruned[k] and not s.inactive(k, p)

    def sync(self, cref: int) -> None:
        want = self.wanted(cref, self.p)
        have = self.state.is_attached(cref)
        if want == have:
            return
        s = self.session
        if want:
            if cref < s.n_in:
                lits = s.formula.clauses[cref]
            else:
                lits = s.db.pin(s.inference_of(cref))
            self.state.attach(cref, lits)
        else:
            self.state.detach(cref)
            if cref >= s.n_in:
                s.db.unpin(s.inference_of(cref))

    def move_to(self, p) -> None:
        s = self.session
        if self.p is None:
            self.p = p
            for cref in range(s.n_in + s.m):
                self.sync(cref)
        elif p != self.p:
            lo, hi = min(p, self.p), max(p, self.p)
            self.p = p
            for cref in s.crefs_changing_between(lo, hi):
                self.sync(cref)
        self.state.propagate()

    def resync(self, ks) -> None:
        for k in ks:
            self.sync(self.session.cref(k))
        self.state.propagate()

    def close(self) -> None:
        s = self.session
        self.session.stats.propagations += self.state.propagations
        self.session.stats.rebuilds += self.state.rebuilds
        for cref in self.state.attached_crefs():
            self.state.detach(cref)
            if cref >= s.n_in:
                s.db.unpin(s.inference_of(cref))
        self.p = None


class ForwardContext:
    """Input formula (deletions ignored) plus promoted inferences.

    Used by the unit probe and subset stages, which argue about logical
    consequences of the whole input formula rather than proof positions.
    """

    def __init__(self, session: Session):
        self.session = session
        self.state = PropagationState(session.num_vars)
        for j, c in enumerate(session.formula.clauses):
            if not session.input_taut[j]:
                self.state.attach(j, c)
        for k in range(1, session.m + 1):
            if session.promoted[k]:
                self.state.attach(session.cref(k), session.clause(k))
        self.state.propagate()

    def promote(self, k: int) -> None:
        s = self.session
        if s.promoted[k]:
            return
        s.promoted[k] = True
        s.record(k).verified = True
        if not s.taut[k]:
            self.state.attach(s.cref(k), s.clause(k))
        self.state.propagate()

    def close(self) -> None:
        self.session.stats.propagations += self.state.propagations
        self.session.stats.rebuilds += self.state.rebuilds
