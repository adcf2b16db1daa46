"""Pure-Python two-watched-literal propagation kernel.

Mirrors ``winrat._bcp`` (Cython) method for method; ``winrat.propagation``
picks one at import time. Literals cross the API as DIMACS ints and are
stored internally as codes ``2*var + neg`` so that ``code ^ 1`` complements.
Clause references (crefs) are caller-chosen non-negative ints.
"""

NO_CONFLICT = -1
LITERAL_CONFLICT = -2


def _code(d):
    return (d << 1) if d > 0 else ((-d) << 1) | 1


def _dimacs(c):
    return -(c >> 1) if c & 1 else c >> 1


class PropagationState:
    """Assignment trail, reasons and watch lists for one checking session.

    ``propagate`` returns the cref of the first conflict found,
    ``LITERAL_CONFLICT`` when an assumption contradicted the trail, or
    ``NO_CONFLICT`` at fixpoint. Assignments pushed after ``save`` are undone
    by ``rollback``. Clauses attached while a save point is open must be
    detached before the matching rollback.
    """

    kernel = "python"

    def __init__(self, num_vars=0):
        self.num_vars = 0
        self._val = [0, 0]
        self._reason = [-1]
        self._pos = [-1]
        self._watches = [[], []]
        self.trail = []
        self.qhead = 0
        self._clauses = {}
        self._units = {}
        self._empties = set()
        self._saves = []
        self.conflict = NO_CONFLICT
        self._conflict_code = 0
        self.propagations = 0
        self.rebuilds = 0
        self.ensure_vars(num_vars)

    # -- sizing ---------------------------------------------------------

    def ensure_vars(self, n):
        if n <= self.num_vars:
            return
        extra = n - self.num_vars
        self._val.extend([0] * (2 * extra))
        self._reason.extend([-1] * extra)
        self._pos.extend([-1] * extra)
        for _ in range(2 * extra):
            self._watches.append([])
        self.num_vars = n

    # -- assignment -----------------------------------------------------

    def value(self, d):
        c = _code(d)
        if (c >> 1) > self.num_vars:
            return 0
        return self._val[c]

    def _enqueue(self, c, cref):
        v = c >> 1
        self._val[c] = 1
        self._val[c ^ 1] = -1
        self._reason[v] = cref
        self._pos[v] = len(self.trail)
        self.trail.append(c)

    def _set_conflict(self, cref, code=0):
        self.conflict = cref
        self._conflict_code = code

    def assume(self, d):
        """Push ``d`` as an assumption. False means an immediate conflict."""
        if self.conflict != NO_CONFLICT:
            return False
        c = _code(d)
        self.ensure_vars(c >> 1)
        val = self._val[c]
        if val == 1:
            return True
        if val == -1:
            self._set_conflict(LITERAL_CONFLICT, c)
            return False
        self._enqueue(c, -1)
        return True

    # -- clause attachment ----------------------------------------------

    def is_attached(self, cref):
        return cref in self._clauses or cref in self._units or cref in self._empties

    @property
    def num_attached(self):
        return len(self._clauses) + len(self._units) + len(self._empties)

    def attach(self, cref, lits):
        if self.is_attached(cref):
            raise RuntimeError(f"clause {cref} already attached")
        codes = [_code(d) for d in lits]
        if codes:
            self.ensure_vars(max(codes) >> 1)
        n = len(codes)
        val = self._val
        if n == 0:
            self._empties.add(cref)
            if self.conflict == NO_CONFLICT:
                self._set_conflict(cref)
            return
        if n == 1:
            c = codes[0]
            self._units[cref] = c
            if self.conflict == NO_CONFLICT:
                if val[c] == 0:
                    self._enqueue(c, cref)
                elif val[c] == -1:
                    self._set_conflict(cref)
            return
        # Order: non-false literals first, then false ones latest-assigned first.
        pos = self._pos
        codes.sort(key=lambda x: (val[x] == -1, -pos[x >> 1] if val[x] == -1 else 0))
        self._clauses[cref] = codes
        self._watches[codes[0]].append(cref)
        self._watches[codes[1]].append(cref)
        if self.conflict != NO_CONFLICT:
            return
        if val[codes[1]] == -1:
            if val[codes[0]] == -1:
                self._set_conflict(cref)
            elif val[codes[0]] == 0:
                self._enqueue(codes[0], cref)

    def detach(self, cref):
        if cref in self._clauses:
            codes = self._clauses.pop(cref)
            self._watches[codes[0]].remove(cref)
            self._watches[codes[1]].remove(cref)
        elif cref in self._units:
            codes = [self._units.pop(cref)]
        elif cref in self._empties:
            self._empties.discard(cref)
            codes = []
        else:
            raise RuntimeError(f"clause {cref} is not attached")
        mark = self._saves[0][0] if self._saves else len(self.trail)
        stale = self.conflict == cref and not self._saves
        for c in codes:
            v = c >> 1
            if self._reason[v] == cref and self._pos[v] < mark:
                stale = True
        if stale:
            if self._saves:
                raise RuntimeError("detaching a base-level reason under a save point")
            self._rebuild()

    def _rebuild(self):
        """Clear the base trail and re-derive it from the attached clauses."""
        self.rebuilds += 1
        for c in self.trail:
            v = c >> 1
            self._val[c] = 0
            self._val[c ^ 1] = 0
            self._reason[v] = -1
            self._pos[v] = -1
        self.trail = []
        self.qhead = 0
        self.conflict = NO_CONFLICT
        self._conflict_code = 0
        if self._empties:
            self._set_conflict(min(self._empties))
            return
        val = self._val
        for cref in sorted(self._units):
            c = self._units[cref]
            if val[c] == 0:
                self._enqueue(c, cref)
            elif val[c] == -1:
                self._set_conflict(cref)
                return

    def watch_count(self):
        return sum(len(w) for w in self._watches)

    def clause_literals(self, cref):
        if cref in self._clauses:
            return [_dimacs(c) for c in self._clauses[cref]]
        if cref in self._units:
            return [_dimacs(self._units[cref])]
        if cref in self._empties:
            return []
        raise KeyError(cref)

    def attached_crefs(self):
        return sorted(set(self._clauses) | set(self._units) | self._empties)

    # -- propagation ----------------------------------------------------

    def propagate(self):
        if self.conflict != NO_CONFLICT:
            return self.conflict
        val = self._val
        trail = self.trail
        watches = self._watches
        clauses = self._clauses
        while self.qhead < len(trail):
            p = trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                cref = ws[i]
                i += 1
                c = clauses[cref]
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = cref
                    j += 1
                    continue
                moved = False
                for k in range(2, len(c)):
                    if val[c[k]] != -1:
                        c[1] = c[k]
                        c[k] = false_lit
                        watches[c[1]].append(cref)
                        moved = True
                        break
                if moved:
                    continue
                ws[j] = cref
                j += 1
                if val[first] == -1:
                    while i < n:
                        ws[j] = ws[i]
                        j += 1
                        i += 1
                    del ws[j:]
                    self._set_conflict(cref)
                    return cref
                self._enqueue(first, cref)
            del ws[j:]
        return NO_CONFLICT

    # -- save points ----------------------------------------------------

    @property
    def depth(self):
        return len(self._saves)

    def save(self):
        self._saves.append((len(self.trail), self.qhead, self.conflict, self._conflict_code))

    def rollback(self):
        if not self._saves:
            raise RuntimeError("rollback without save")
        mark, qhead, conflict, ccode = self._saves.pop()
        val = self._val
        for c in self.trail[mark:]:
            v = c >> 1
            val[c] = 0
            val[c ^ 1] = 0
            self._reason[v] = -1
            self._pos[v] = -1
        del self.trail[mark:]
        self.qhead = qhead
        self.conflict = conflict
        self._conflict_code = ccode

    # -- queries --------------------------------------------------------

    def trail_literals(self):
        return [_dimacs(c) for c in self.trail]

    def reason_of(self, var):
        if var > self.num_vars:
            return -1
        return self._reason[var]

    def count_non_false(self, lits):
        val = self._val
        nv = self.num_vars
        n = 0
        for d in lits:
            c = _code(d)
            if (c >> 1) > nv or val[c] != -1:
                n += 1
        return n

    def unit_literal(self, lits):
        """The sole non-falsified literal when all others are false, else 0."""
        val = self._val
        nv = self.num_vars
        found = 0
        for d in lits:
            c = _code(d)
            if (c >> 1) > nv or val[c] != -1:
                if found:
                    return 0
                found = d
        return found

    def analyze(self):
        """Crefs in the implication cone of the current conflict."""
        if self.conflict == NO_CONFLICT:
            return []
        out = []
        stack = []
        if self.conflict == LITERAL_CONFLICT:
            stack.append(self._conflict_code >> 1)
        else:
            out.append(self.conflict)
            stack.extend(c >> 1 for c in self._lits_codes(self.conflict))
        seen = set()
        reason = self._reason
        while stack:
            v = stack.pop()
            if v in seen:
                continue
            seen.add(v)
            r = reason[v]
            if r < 0:
                continue
            out.append(r)
            for c in self._lits_codes(r):
                if (c >> 1) != v:
                    stack.append(c >> 1)
        return out

    def _lits_codes(self, cref):
        if cref in self._clauses:
            return self._clauses[cref]
        if cref in self._units:
            return [self._units[cref]]
        return []

    def falsified_crefs(self):
        """Attached clauses with every literal false (full scan, debug only)."""
        val = self._val
        out = [cref for cref, codes in self._clauses.items() if all(val[c] == -1 for c in codes)]
        out.extend(cref for cref, c in self._units.items() if val[c] == -1)
        out.extend(self._empties)
        return sorted(out)
