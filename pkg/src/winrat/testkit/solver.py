"""A small CDCL solver that writes DRUP proofs, and tree-split proofs.

Learned clauses are 1UIP resolvents of clauses in the solver's database, so
each is RUP against the clauses emitted before it. Deletions, when enabled,
never remove a clause that is the reason of a current assignment.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from winrat.proof_io import ProofDB, proof_from_lines


@dataclass
class Sat:
    model: tuple


class _CDCL:
    def __init__(self, clauses, num_vars, prefix=(), delete_every=0):
        self.n = num_vars
        self.prefix = list(prefix)
        self.delete_every = delete_every
        self.lines = []
        self.clauses = []
        self.learnt = []
        self.removed = set()
        self.watches = {}
        self.val = {}
        self.level = {}
        self.reason = {}
        self.trail = []
        self.lim = []
        self.qhead = 0
        self.unsat = False
        for c in clauses:
            self._add(list(dict.fromkeys(c)), learnt=False)
            if self.unsat:
                break

    # -- proof output ----------------------------------------------------

    def _emit(self, lits, delete=False):
        body = " ".join(str(d) for d in self.prefix + list(lits))
        line = f"{body} 0" if body else "0"
        self.lines.append(f"d {line}" if delete else line)

    # -- database ----------------------------------------------------------

    def _value(self, d):
        v = self.val.get(abs(d))
        if v is None:
            return None
        return v if d > 0 else not v

    def _add(self, lits, learnt):
        if any(-d in lits for d in lits):
            return None
        if not lits:
            self.unsat = True
            return None
        idx = len(self.clauses)
        self.clauses.append(lits)
        if learnt:
            self.learnt.append(idx)
        if len(lits) == 1:
            v = self._value(lits[0])
            if v is False:
                self.unsat = True
            elif v is None:
                self._enqueue(lits[0], idx)
            return idx
        if not learnt:
            # order so that watched literals are not false at level 0
            lits.sort(key=lambda d: self._value(d) is False)
            if self._value(lits[0]) is False:
                self.unsat = True
                return idx
            if self._value(lits[1]) is False and self._value(lits[0]) is None:
                self._enqueue(lits[0], idx)
        for d in lits[:2]:
            self.watches.setdefault(-d, []).append(idx)
        return idx

    def _enqueue(self, d, reason):
        v = abs(d)
        self.val[v] = d > 0
        self.level[v] = len(self.lim)
        self.reason[v] = reason
        self.trail.append(d)

    # -- search ------------------------------------------------------------

    def _propagate(self):
        while self.qhead < len(self.trail):
            d = self.trail[self.qhead]
            self.qhead += 1
            ws = self.watches.get(d, [])
            keep = []
            conflict = None
            for n, idx in enumerate(ws):
                if conflict is not None or idx in self.removed:
                    if idx not in self.removed:
                        keep.append(idx)
                    continue
                c = self.clauses[idx]
                if c[0] == -d:
                    c[0], c[1] = c[1], c[0]
                if self._value(c[0]) is True:
                    keep.append(idx)
                    continue
                for k in range(2, len(c)):
                    if self._value(c[k]) is not False:
                        c[1], c[k] = c[k], c[1]
                        self.watches.setdefault(-c[1], []).append(idx)
                        break
                else:
                    keep.append(idx)
                    if self._value(c[0]) is False:
                        conflict = idx
                    else:
                        self._enqueue(c[0], idx)
            self.watches[d] = keep
            if conflict is not None:
                return conflict
        return None

    def _analyze(self, confl):
        level = len(self.lim)
        seen = set()
        out = []
        pending = 0
        p = None
        idx = len(self.trail) - 1
        c = self.clauses[confl]
        while True:
            for d in c:
                if p is not None and d == p:
                    continue
                v = abs(d)
                if v in seen or self.level[v] == 0:
                    continue
                seen.add(v)
                if self.level[v] == level:
                    pending += 1
                else:
                    out.append(d)
            while abs(self.trail[idx]) not in seen:
                idx -= 1
            p = self.trail[idx]
            idx -= 1
            pending -= 1
            if pending == 0:
                break
            c = self.clauses[self.reason[abs(p)]]
        learnt = [-p] + out
        bt = max((self.level[abs(d)] for d in out), default=0)
        if len(learnt) > 1:
            k = max(range(1, len(learnt)), key=lambda n: self.level[abs(learnt[n])])
            learnt[1], learnt[k] = learnt[k], learnt[1]
        return learnt, bt

    def _backtrack(self, level):
        if len(self.lim) <= level:
            return
        mark = self.lim[level]
        for d in self.trail[mark:]:
            v = abs(d)
            del self.val[v]
            del self.level[v]
            del self.reason[v]
        del self.trail[mark:]
        del self.lim[level:]
        self.qhead = min(self.qhead, len(self.trail))

    def _reduce(self):
        locked = {self.reason[abs(d)] for d in self.trail}
        cands = [i for i in self.learnt if i not in self.removed and i not in locked and len(self.clauses[i]) > 2]
        for i in cands[: len(cands) // 2]:
            self.removed.add(i)
            self._emit(self.clauses[i], delete=True)
        self.learnt = [i for i in self.learnt if i not in self.removed]

    def solve(self):
        if self.unsat:
            self._emit([])
            return None
        conflicts = 0
        while True:
            confl = self._propagate()
            if confl is not None:
                if not self.lim:
                    self._emit([])
                    return None
                learnt, bt = self._analyze(confl)
                self._emit(learnt)
                self._backtrack(bt)
                idx = len(self.clauses)
                self.clauses.append(learnt)
                self.learnt.append(idx)
                if len(learnt) > 1:
                    for d in learnt[:2]:
                        self.watches.setdefault(-d, []).append(idx)
                self._enqueue(learnt[0], idx)
                conflicts += 1
                if self.delete_every and conflicts % self.delete_every == 0:
                    self._reduce()
                continue
            free = next((v for v in range(1, self.n + 1) if v not in self.val), None)
            if free is None:
                return tuple(v if self.val[v] else -v for v in range(1, self.n + 1))
            self.lim.append(len(self.trail))
            self._enqueue(-free, None)


def proof_lines(formula, delete_every=0):
    """DRUP proof lines for an UNSAT formula, or a Sat model."""
    s = _CDCL(formula.clauses, formula.num_vars, delete_every=delete_every)
    model = s.solve()
    if model is not None:
        return Sat(model)
    return s.lines


def emit_proof_dpll(formula, delete_every=0, budget=None):
    """ProofDB of a CDCL refutation, or Sat(model)."""
    out = proof_lines(formula, delete_every)
    if isinstance(out, Sat):
        return out
    return proof_from_lines(out, budget)


def _cubes(branch_vars):
    vs = sorted(set(abs(v) for v in branch_vars))
    for signs in itertools.product((1, -1), repeat=len(vs)):
        yield [s * v for s, v in zip(signs, vs)]


def _merge_lines(branch_vars):
    """RUP merges from the 2^n cube clauses up to the empty clause."""
    vs = sorted(set(abs(v) for v in branch_vars))
    out = []
    for depth in range(len(vs) - 1, -1, -1):
        for signs in itertools.product((1, -1), repeat=depth):
            lits = [-s * v for s, v in zip(signs, vs)]
            out.append(" ".join(map(str, lits + [0])))
    return out


def split_proof_lines(formula, branch_vars, encoding="equivalence"):
    """Tree-split refutation over all sign patterns of ``branch_vars``.

    With ``encoding="equivalence"`` each cube l_1..l_n gets a fresh z with
    the block z | -l_1 .. -l_n, -z | l_i, and branch lemmas are written as
    -z | L. With ``encoding="expanded"`` each lemma L is written as
    L | -l_1 .. -l_n instead, so the branch's empty clause becomes the cube
    clause. Both end with RUP merges up to the empty clause; under the
    equivalence encoding the definitions and the -z units make the merges
    RUP without cube clauses.
    """
    if encoding not in ("equivalence", "expanded"):
        raise ValueError(encoding)
    lines = []
    z = formula.num_vars
    for cube in _cubes(branch_vars):
        neg = [-l for l in cube]
        sub_clauses = list(formula.clauses) + [(l,) for l in cube]
        if encoding == "equivalence":
            z += 1
            lines.append(" ".join(map(str, [z] + neg + [0])))
            lines.extend(f"{-z} {l} 0" for l in cube)
            solver = _CDCL(sub_clauses, formula.num_vars, prefix=[-z])
        else:
            solver = _CDCL(sub_clauses, formula.num_vars)
        model = solver.solve()
        if model is not None:
            raise ValueError(f"cube {cube} is satisfiable")
        if encoding == "equivalence":
            lines.extend(solver.lines)
        else:
            for line in solver.lines:
                lits = [int(t) for t in line.split()[:-1]]
                lines.append(" ".join(map(str, lits + neg + [0])))
    lines.extend(_merge_lines(branch_vars))
    return lines


def emit_split_proof(formula, branch_vars, encoding="equivalence", budget=None) -> ProofDB:
    return proof_from_lines(split_proof_lines(formula, branch_vars, encoding), budget)


def literal_count(lines) -> int:
    """Literals in the addition steps of a proof."""
    n = 0
    for line in lines:
        toks = line.split()
        if toks and toks[0] != "d":
            n += len(toks) - 1
    return n
