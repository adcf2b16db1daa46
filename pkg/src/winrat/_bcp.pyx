# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled two-watched-literal propagation kernel.

Same interface and semantics as ``winrat._bcp_py.PropagationState``; clause
storage, watch lists and the trail live in C++ vectors.
"""

from libcpp.vector cimport vector
from libcpp.algorithm cimport sort as cpp_sort

NO_CONFLICT = -1
LITERAL_CONFLICT = -2

cdef int _NO_CONFLICT = -1
cdef int _LITERAL_CONFLICT = -2

# clause kinds in _kind
cdef signed char K_NONE = 0
cdef signed char K_WATCHED = 1
cdef signed char K_UNIT = 2
cdef signed char K_EMPTY = 3


cdef inline int _code(long d):
    return <int>((d << 1) if d > 0 else ((-d) << 1) | 1)


cdef inline long _dimacs(int c):
    return -(c >> 1) if c & 1 else c >> 1


cdef class PropagationState:
    cdef public int num_vars
    cdef vector[signed char] _val
    cdef vector[int] _reason
    cdef vector[int] _pos
    cdef vector[vector[int]] _watches
    cdef vector[int] _trail
    cdef public int qhead
    cdef vector[vector[int]] _lits
    cdef vector[signed char] _kind
    cdef int _n_attached
    cdef vector[int] _save_trail
    cdef vector[int] _save_qhead
    cdef vector[int] _save_conflict
    cdef vector[int] _save_ccode
    cdef public int conflict
    cdef int _conflict_code
    cdef public long propagations
    cdef public long rebuilds

    kernel = "cython"

    def __init__(self, int num_vars=0):
        self.num_vars = 0
        self._val.resize(2, 0)
        self._reason.resize(1, -1)
        self._pos.resize(1, -1)
        self._watches.resize(2)
        self.qhead = 0
        self._n_attached = 0
        self.conflict = _NO_CONFLICT
        self._conflict_code = 0
        self.propagations = 0
        self.rebuilds = 0
        self.ensure_vars(num_vars)

    cpdef ensure_vars(self, int n):
        if n <= self.num_vars:
            return
        self._val.resize(2 * n + 2, 0)
        self._reason.resize(n + 1, -1)
        self._pos.resize(n + 1, -1)
        self._watches.resize(2 * n + 2)
        self.num_vars = n

    cdef inline void _ensure_cref(self, int cref):
        if cref >= <int>self._kind.size():
            self._kind.resize(cref + 1, K_NONE)
            self._lits.resize(cref + 1)

    # -- assignment -----------------------------------------------------

    cpdef int value(self, long d):
        cdef int c = _code(d)
        if (c >> 1) > self.num_vars:
            return 0
        return self._val[c]

    cdef inline void _enqueue(self, int c, int cref):
        cdef int v = c >> 1
        self._val[c] = 1
        self._val[c ^ 1] = -1
        self._reason[v] = cref
        self._pos[v] = <int>self._trail.size()
        self._trail.push_back(c)

    cpdef bint assume(self, long d):
        if self.conflict != _NO_CONFLICT:
            return False
        cdef int c = _code(d)
        if (c >> 1) > self.num_vars:
            self.ensure_vars(c >> 1)
        cdef int val = self._val[c]
        if val == 1:
            return True
        if val == -1:
            self.conflict = _LITERAL_CONFLICT
            self._conflict_code = c
            return False
        self._enqueue(c, -1)
        return True

    # -- clause attachment ----------------------------------------------

    cpdef bint is_attached(self, int cref):
        return 0 <= cref < <int>self._kind.size() and self._kind[cref] != K_NONE

    @property
    def num_attached(self):
        return self._n_attached

    @property
    def trail(self):
        return [self._trail[i] for i in range(self._trail.size())]

    def attach(self, int cref, lits):
        if cref < 0:
            raise ValueError("cref must be non-negative")
        if self.is_attached(cref):
            raise RuntimeError(f"clause {cref} already attached")
        cdef vector[int] codes
        cdef long d
        cdef int c, mx = 0
        for d in lits:
            c = _code(d)
            codes.push_back(c)
            if c > mx:
                mx = c
        if mx >> 1 > self.num_vars:
            self.ensure_vars(mx >> 1)
        self._ensure_cref(cref)
        self._n_attached += 1
        cdef size_t n = codes.size()
        if n == 0:
            self._kind[cref] = K_EMPTY
            self._lits[cref].clear()
            if self.conflict == _NO_CONFLICT:
                self.conflict = cref
            return
        if n == 1:
            c = codes[0]
            self._kind[cref] = K_UNIT
            self._lits[cref] = codes
            if self.conflict == _NO_CONFLICT:
                if self._val[c] == 0:
                    self._enqueue(c, cref)
                elif self._val[c] == -1:
                    self.conflict = cref
            return
        # non-false literals first, then false ones latest-assigned first
        cdef vector[int] ordered
        cdef vector[long long] keyed
        cdef size_t i
        for i in range(n):
            c = codes[i]
            if self._val[c] == -1:
                keyed.push_back(((<long long>(0x7fffffff - self._pos[c >> 1])) << 32) | <long long>i)
            else:
                ordered.push_back(c)
        cpp_sort(keyed.begin(), keyed.end())
        for i in range(keyed.size()):
            ordered.push_back(codes[<size_t>(keyed[i] & 0xffffffff)])
        self._kind[cref] = K_WATCHED
        self._lits[cref] = ordered
        self._watches[ordered[0]].push_back(cref)
        self._watches[ordered[1]].push_back(cref)
        if self.conflict != _NO_CONFLICT:
            return
        if self._val[ordered[1]] == -1:
            if self._val[ordered[0]] == -1:
                self.conflict = cref
            elif self._val[ordered[0]] == 0:
                self._enqueue(ordered[0], cref)

    cdef void _remove_watch(self, int lit, int cref):
        cdef vector[int]* ws = &self._watches[lit]
        cdef size_t i, n = ws.size()
        for i in range(n):
            if ws[0][i] == cref:
                ws.erase(ws.begin() + i)
                return

    def detach(self, int cref):
        if not self.is_attached(cref):
            raise RuntimeError(f"clause {cref} is not attached")
        cdef signed char kind = self._kind[cref]
        cdef vector[int] codes = self._lits[cref]
        if kind == K_WATCHED:
            self._remove_watch(codes[0], cref)
            self._remove_watch(codes[1], cref)
        self._kind[cref] = K_NONE
        self._lits[cref].clear()
        self._n_attached -= 1
        cdef int mark = self._save_trail[0] if self._save_trail.size() else <int>self._trail.size()
        cdef bint has_saves = self._save_trail.size() > 0
        cdef bint stale = self.conflict == cref and not has_saves
        cdef size_t i
        cdef int v
        for i in range(codes.size()):
            v = codes[i] >> 1
            if self._reason[v] == cref and self._pos[v] < mark:
                stale = True
        if stale:
            if has_saves:
                raise RuntimeError("detaching a base-level reason under a save point")
            self._rebuild()

    cdef void _rebuild(self):
        self.rebuilds += 1
        cdef size_t i
        cdef int c, v, cref
        for i in range(self._trail.size()):
            c = self._trail[i]
            v = c >> 1
            self._val[c] = 0
            self._val[c ^ 1] = 0
            self._reason[v] = -1
            self._pos[v] = -1
        self._trail.clear()
        self.qhead = 0
        self.conflict = _NO_CONFLICT
        self._conflict_code = 0
        for cref in range(<int>self._kind.size()):
            if self._kind[cref] == K_EMPTY:
                self.conflict = cref
                return
        for cref in range(<int>self._kind.size()):
            if self._kind[cref] == K_UNIT:
                c = self._lits[cref][0]
                if self._val[c] == 0:
                    self._enqueue(c, cref)
                elif self._val[c] == -1:
                    self.conflict = cref
                    return

    def watch_count(self):
        cdef size_t i, total = 0
        for i in range(self._watches.size()):
            total += self._watches[i].size()
        return total

    def clause_literals(self, int cref):
        if not self.is_attached(cref):
            raise KeyError(cref)
        cdef vector[int]* codes = &self._lits[cref]
        return [_dimacs(codes[0][i]) for i in range(codes.size())]

    def attached_crefs(self):
        return [cref for cref in range(<int>self._kind.size()) if self._kind[cref] != K_NONE]

    # -- propagation ----------------------------------------------------

    cpdef int propagate(self):
        if self.conflict != _NO_CONFLICT:
            return self.conflict
        cdef int p, false_lit, cref, first, tmp
        cdef size_t i, j, n, k, m
        cdef vector[int]* ws
        cdef vector[int]* c
        cdef bint moved
        while self.qhead < <int>self._trail.size():
            p = self._trail[self.qhead]
            self.qhead += 1
            self.propagations += 1
            false_lit = p ^ 1
            ws = &self._watches[false_lit]
            i = 0
            j = 0
            n = ws.size()
            while i < n:
                cref = ws[0][i]
                i += 1
                c = &self._lits[cref]
                if c[0][0] == false_lit:
                    c[0][0] = c[0][1]
                    c[0][1] = false_lit
                first = c[0][0]
                if self._val[first] == 1:
                    ws[0][j] = cref
                    j += 1
                    continue
                moved = False
                m = c.size()
                for k in range(2, m):
                    if self._val[c[0][k]] != -1:
                        tmp = c[0][k]
                        c[0][1] = tmp
                        c[0][k] = false_lit
                        self._watches[tmp].push_back(cref)
                        moved = True
                        break
                if moved:
                    continue
                ws[0][j] = cref
                j += 1
                if self._val[first] == -1:
                    while i < n:
                        ws[0][j] = ws[0][i]
                        j += 1
                        i += 1
                    ws.resize(j)
                    self.conflict = cref
                    return cref
                self._enqueue(first, cref)
            ws.resize(j)
        return _NO_CONFLICT

    # -- save points ----------------------------------------------------

    @property
    def depth(self):
        return self._save_trail.size()

    cpdef save(self):
        self._save_trail.push_back(<int>self._trail.size())
        self._save_qhead.push_back(self.qhead)
        self._save_conflict.push_back(self.conflict)
        self._save_ccode.push_back(self._conflict_code)

    cpdef rollback(self):
        if self._save_trail.size() == 0:
            raise RuntimeError("rollback without save")
        cdef int mark = self._save_trail.back()
        self._save_trail.pop_back()
        self.qhead = self._save_qhead.back()
        self._save_qhead.pop_back()
        self.conflict = self._save_conflict.back()
        self._save_conflict.pop_back()
        self._conflict_code = self._save_ccode.back()
        self._save_ccode.pop_back()
        cdef int c, v
        while <int>self._trail.size() > mark:
            c = self._trail.back()
            self._trail.pop_back()
            v = c >> 1
            self._val[c] = 0
            self._val[c ^ 1] = 0
            self._reason[v] = -1
            self._pos[v] = -1

    # -- queries --------------------------------------------------------

    def trail_literals(self):
        return [_dimacs(self._trail[i]) for i in range(self._trail.size())]

    cpdef int reason_of(self, int var):
        if var > self.num_vars or var < 1:
            return -1
        return self._reason[var]

    cpdef int count_non_false(self, lits):
        cdef int n = 0, c
        cdef long d
        for d in lits:
            c = _code(d)
            if (c >> 1) > self.num_vars or self._val[c] != -1:
                n += 1
        return n

    cpdef long unit_literal(self, lits):
        cdef long found = 0, d
        cdef int c
        for d in lits:
            c = _code(d)
            if (c >> 1) > self.num_vars or self._val[c] != -1:
                if found:
                    return 0
                found = d
        return found

    def analyze(self):
        if self.conflict == _NO_CONFLICT:
            return []
        out = []
        cdef vector[int] stack
        cdef vector[char] seen
        seen.resize(self.num_vars + 1, 0)
        cdef size_t i
        cdef int v, r
        if self.conflict == _LITERAL_CONFLICT:
            stack.push_back(self._conflict_code >> 1)
        else:
            out.append(self.conflict)
            for i in range(self._lits[self.conflict].size()):
                stack.push_back(self._lits[self.conflict][i] >> 1)
        while stack.size():
            v = stack.back()
            stack.pop_back()
            if seen[v]:
                continue
            seen[v] = 1
            r = self._reason[v]
            if r < 0:
                continue
            out.append(r)
            for i in range(self._lits[r].size()):
                if (self._lits[r][i] >> 1) != v:
                    stack.push_back(self._lits[r][i] >> 1)
        return out

    def falsified_crefs(self):
        out = []
        cdef int cref
        cdef size_t i
        cdef bint allf
        for cref in range(<int>self._kind.size()):
            if self._kind[cref] == K_NONE:
                continue
            allf = True
            for i in range(self._lits[cref].size()):
                if self._val[self._lits[cref][i]] != -1:
                    allf = False
                    break
            if allf:
                out.append(cref)
        return out
