"""RAT checking and the equivalence-block fast path."""

from __future__ import annotations

from dataclasses import dataclass

from winrat.clauses import is_tautology, sort_clause
from winrat.proof_io import ADD
from winrat.session import Session, Sweep, check_rup


class OccurrenceIndex:
    """Clause references per literal, built in one scan."""

    def __init__(self):
        self._occ = {}

    def add(self, cref: int, lits) -> None:
        for d in lits:
            self._occ.setdefault(d, []).append(cref)

    def __getitem__(self, lit: int) -> list:
        return self._occ.get(lit, [])

    def literals(self):
        return sorted(self._occ)


def build_occurrence_index(clauses) -> OccurrenceIndex:
    """Index an iterable of ``(cref, lits)`` pairs."""
    occ = OccurrenceIndex()
    for cref, lits in clauses:
        occ.add(cref, lits)
    return occ


def session_occurrences(session: Session) -> OccurrenceIndex:
    """One scan over the input clauses and every inference up to ∅.

    Liveness at the checked position is filtered at query time, so a single
    index serves every RAT check of a run.
    """
    session.stats.occurrence_builds += 1
    return build_occurrence_index(
        (cref, session.cref_lits(cref)) for cref in range(session.n_in + session.m)
    )


def pivot_order(clause, pivot: int) -> list[int]:
    if pivot and pivot in clause:
        return [pivot] + [d for d in clause if d != pivot]
    return list(clause)


def check_rat(state, occ: OccurrenceIndex, clause, pivot=0, candidates=None, lits_of=None):
    """RAT test of ``clause``; returns the antecedent crefs or None.

    ``candidates(lit)`` yields the crefs of clauses containing ``lit`` that
    are live for this check (default: everything in ``occ``); ``lits_of(cref)``
    returns their literals (default: ``state.clause_literals``). For each pivot
    candidate, first the written pivot, every non-tautological resolvent
    ``clause + (D - {-l})`` must be RUP on ``state``.
    """
    if candidates is None:
        candidates = occ.__getitem__
    if lits_of is None:
        lits_of = state.clause_literals
    for l in pivot_order(clause, pivot):
        cone = []
        ok = True
        for cref in candidates(-l):
            E = sort_clause(list(clause) + [d for d in lits_of(cref) if d != -l])
            if is_tautology(E):
                continue
            res = check_rup(state, E)
            if not res:
                ok = False
                break
            cone.extend(res.antecedents)
            cone.append(cref)
        if ok:
            return cone
    return None


def check_rat_at(session: Session, sweep: Sweep, occ: OccurrenceIndex, i: int):
    """RAT test of I_i against the clauses seen at its proof position."""
    p = sweep.p
    session.stats.rat_checks += 1

    def candidates(lit):
        return [c for c in occ[lit] if session.visible(c, p) and not _is_self(session, c, i)]

    return check_rat(
        sweep.state,
        occ,
        session.clause(i),
        session.record(i).pivot,
        candidates,
        session.cref_lits,
    )


def _is_self(session, cref, i):
    return cref == session.cref(i)


@dataclass
class EquivalenceBlock:
    """z <-> (x_1 and ... and x_n) written as one definition and n units."""

    definition: tuple
    units: list
    pivot: int
    start: int = 0

    @property
    def n(self) -> int:
        return len(self.units)

    @property
    def indices(self) -> list[int]:
        return list(range(self.start, self.start + self.n + 1))


def match_equivalence_block(session: Session, i: int):
    """Block starting at definition I_i, or None.

    The written pivot z must be positive in I_i and its variable must not
    occur anywhere before I_i. The next n additions must be the binaries
    -z | x_k for the n other literals -x_k of I_i, in order, none deleted
    before the last of them is added.
    """
    rec = session.record(i)
    z = rec.pivot
    n = rec.size - 1
    if n < 1 or z == 0 or i + n > session.m:
        return None
    definition = session.clause(i)
    if session.first_seen.get(abs(z)) != session.pos[i]:
        return None
    xs = [-d for d in pivot_order(definition, z)[1:]]
    units = []
    for k, x in enumerate(xs, 1):
        u = session.clause(i + k)
        if len(u) != 2 or set(u) != {-z, x}:
            return None
        units.append(u)
    last = session.pos[i + n]
    for t in range(i, i + n + 1):
        if session.died[session.cref(t)] < last:
            return None
    return EquivalenceBlock(definition, units, z, i)


def verify_equivalence_block(block: EquivalenceBlock) -> bool:
    """Each unit -z | x must have -x in the definition, and z must be fresh there."""
    z = block.pivot
    if z not in block.definition:
        return False
    for u in block.units:
        if -z not in u or len(u) != 2:
            return False
        x = next(d for d in u if d != -z)
        if abs(x) == abs(z) or -x not in block.definition:
            return False
    return True
