"""A small deterministic CDCL SAT solver.

Literals follow the DIMACS convention at the API (``+v`` / ``-v`` for
``v >= 1``).  Internally literal ``2(v-1)`` is positive and ``2(v-1)+1`` its
negation.  Standard machinery: two watched literals, first-UIP learning with
local minimisation, VSIDS on a binary heap, phase saving, Luby restarts and
LBD-based learnt clause deletion.  Binary clauses live in dedicated implication
and ternary clauses in dedicated occurrence lists; longer clauses use watches.  No randomness is used, so a run is a pure
function of the clause list.
"""

from __future__ import annotations

from dataclasses import dataclass

from .budget import Budget

SAT = "sat"
UNSAT = "unsat"
TIMEOUT = "timeout"


def luby(i: int) -> int:
    """The i-th term (1-based) of 1 1 2 1 1 2 4 1 1 2 ..."""
    k = 1
    while (1 << k) - 1 < i:
        k += 1
    while True:
        if i == (1 << k) - 1:
            return 1 << (k - 1)
        i -= (1 << (k - 1)) - 1
        k = 1
        while (1 << k) - 1 < i:
            k += 1


@dataclass
class SatStats:
    decisions: int = 0
    conflicts: int = 0
    propagations: int = 0
    restarts: int = 0
    learnt_kept: int = 0


class CDCL:
    def __init__(self, num_vars: int = 0):
        self.nvars = 0
        self.clauses: list[list[int] | None] = []
        self.learnt: list[bool] = []
        self.lbd: list[int] = []
        self.watches: list[list[int]] = []
        self.bins: list[list[tuple[int, int]]] = []  # per literal: (implied literal, clause) when it turns false
        self.terns: list[list[tuple[int, int, int]]] = []  # per literal: (other, other, clause)
        self.val: list[int] = []  # per literal: 1 true, -1 false, 0 open
        self.level: list[int] = []
        self.reason: list[int] = []
        self.phase: list[int] = []
        self.activity: list[float] = []
        self.heap: list[int] = []
        self.heap_pos: list[int] = []
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.var_inc = 1.0
        self.ok = True
        self.stats = SatStats()
        self.model: list[bool] | None = None
        self.new_vars(num_vars)

    # -- construction ---------------------------------------------------------

    def new_vars(self, count: int) -> None:
        for _ in range(count):
            v = self.nvars
            self.nvars += 1
            self.watches += [[], []]
            self.bins += [[], []]
            self.terns += [[], []]
            self.val += [0, 0]
            self.level.append(0)
            self.reason.append(-1)
            self.phase.append(1)  # prefer the negative literal
            self.activity.append(0.0)
            self.heap_pos.append(len(self.heap))
            self.heap.append(v)

    def add_clause(self, lits) -> None:
        if not self.ok:
            return
        if self.trail_lim:
            raise RuntimeError("clauses can only be added at decision level 0")
        clause = []
        for x in lits:
            v = abs(x)
            if x == 0 or v > self.nvars:
                raise ValueError(f"literal {x} out of range")
            lit = 2 * (v - 1) + (x < 0)
            if self.val[lit] == 1 or (lit ^ 1) in clause:
                return  # satisfied at level 0 or tautology
            if self.val[lit] == 0 and lit not in clause:
                clause.append(lit)
        if not clause:
            self.ok = False
        elif len(clause) == 1:
            self._enqueue(clause[0], -1)
            if self._propagate() is not None:
                self.ok = False
        else:
            self._attach(clause, False, 0)

    def _attach(self, clause: list[int], learnt: bool, lbd: int) -> int:
        ci = len(self.clauses)
        self.clauses.append(clause)
        self.learnt.append(learnt)
        self.lbd.append(lbd)
        if len(clause) == 2:
            a, b = clause
            self.bins[a].append((b, ci))
            self.bins[b].append((a, ci))
        elif len(clause) == 3:
            a, b, c = clause
            self.terns[a].append((b, c, ci))
            self.terns[b].append((a, c, ci))
            self.terns[c].append((a, b, ci))
        else:
            self.watches[clause[0]].append(ci)
            self.watches[clause[1]].append(ci)
        return ci

    # -- VSIDS heap (max-heap on activity) -------------------------------------

    def _sift_up(self, i: int) -> None:
        heap, pos, act = self.heap, self.heap_pos, self.activity
        v = heap[i]
        a = act[v]
        while i > 0:
            parent = (i - 1) >> 1
            pv = heap[parent]
            if act[pv] >= a:
                break
            heap[i] = pv
            pos[pv] = i
            i = parent
        heap[i] = v
        pos[v] = i

    def _sift_down(self, i: int) -> None:
        heap, pos, act = self.heap, self.heap_pos, self.activity
        n = len(heap)
        v = heap[i]
        a = act[v]
        while True:
            child = 2 * i + 1
            if child >= n:
                break
            if child + 1 < n and act[heap[child + 1]] > act[heap[child]]:
                child += 1
            cv = heap[child]
            if act[cv] <= a:
                break
            heap[i] = cv
            pos[cv] = i
            i = child
        heap[i] = v
        pos[v] = i

    def _heap_insert(self, v: int) -> None:
        if self.heap_pos[v] >= 0:
            return
        self.heap_pos[v] = len(self.heap)
        self.heap.append(v)
        self._sift_up(len(self.heap) - 1)

    def _heap_pop(self) -> int:
        heap = self.heap
        top = heap[0]
        last = heap.pop()
        self.heap_pos[top] = -1
        if heap:
            heap[0] = last
            self.heap_pos[last] = 0
            self._sift_down(0)
        return top

    def _bump(self, v: int) -> None:
        act = self.activity
        act[v] += self.var_inc
        if act[v] > 1e100:
            for k in range(self.nvars):
                act[k] *= 1e-100
            self.var_inc *= 1e-100
        if self.heap_pos[v] >= 0:
            self._sift_up(self.heap_pos[v])

    # -- trail ------------------------------------------------------------------

    def _enqueue(self, lit: int, reason: int) -> None:
        self.val[lit] = 1
        self.val[lit ^ 1] = -1
        v = lit >> 1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)

    def _cancel_until(self, lvl: int) -> None:
        if len(self.trail_lim) <= lvl:
            return
        val, phase, trail = self.val, self.phase, self.trail
        stop = self.trail_lim[lvl]
        for k in range(len(trail) - 1, stop - 1, -1):
            lit = trail[k]
            v = lit >> 1
            val[lit] = 0
            val[lit ^ 1] = 0
            phase[v] = lit & 1
            self.reason[v] = -1
            if self.heap_pos[v] < 0:
                self._heap_insert(v)
        del trail[stop:]
        del self.trail_lim[lvl:]
        self.qhead = stop

    def _propagate(self) -> int | None:
        """Unit propagation; returns a conflicting clause index or ``None``."""
        val, watches, clauses, trail = self.val, self.watches, self.clauses, self.trail
        bins, terns, level, reason = self.bins, self.terns, self.level, self.reason
        lvl = len(self.trail_lim)
        props = 0
        confl = None
        while self.qhead < len(trail):
            false_lit = trail[self.qhead] ^ 1
            self.qhead += 1
            props += 1
            for other, ci in bins[false_lit]:
                vo = val[other]
                if vo == 1:
                    continue
                if vo == -1:
                    confl = ci
                    break
                val[other] = 1
                val[other ^ 1] = -1
                v = other >> 1
                level[v] = lvl
                reason[v] = ci
                trail.append(other)
            if confl is not None:
                break
            for x, y, ci in terns[false_lit]:
                vx = val[x]
                if vx == 1:
                    continue
                vy = val[y]
                if vy == 1:
                    continue
                if vx == -1:
                    if vy == -1:
                        confl = ci
                        break
                    x = y
                elif vy != -1:
                    continue
                val[x] = 1
                val[x ^ 1] = -1
                v = x >> 1
                level[v] = lvl
                reason[v] = ci
                trail.append(x)
            if confl is not None:
                break
            ws = watches[false_lit]
            i = j = 0
            n = len(ws)
            while i < n:
                ci = ws[i]
                i += 1
                c = clauses[ci]
                if c is None:
                    continue  # deleted clause, drop the watch
                if c[0] == false_lit:
                    c[0] = c[1]
                    c[1] = false_lit
                first = c[0]
                if val[first] == 1:
                    ws[j] = ci
                    j += 1
                    continue
                for k in range(2, len(c)):
                    lk = c[k]
                    if val[lk] != -1:
                        c[1] = lk
                        c[k] = false_lit
                        watches[lk].append(ci)
                        break
                else:
                    ws[j] = ci
                    j += 1
                    if val[first] == -1:
                        confl = ci
                        while i < n:
                            ws[j] = ws[i]
                            j += 1
                            i += 1
                        break
                    val[first] = 1
                    val[first ^ 1] = -1
                    v = first >> 1
                    level[v] = lvl
                    reason[v] = ci
                    trail.append(first)
            del ws[j:]
            if confl is not None:
                break
        self.stats.propagations += props
        return confl

    # -- conflict analysis ----------------------------------------------------

    def _analyze(self, confl: int) -> tuple[list[int], int, int]:
        clauses, level, reason, trail = self.clauses, self.level, self.reason, self.trail
        seen = self._seen
        dl = len(self.trail_lim)
        learnt = [0]
        path = 0
        p = -1
        idx = len(trail) - 1
        c = clauses[confl]
        while True:
            if self.learnt[confl] and self.lbd[confl] > 2:
                self.lbd[confl] = min(self.lbd[confl], self._lbd(c))
            for q in c:
                if q == p:
                    continue
                v = q >> 1
                if not seen[v] and level[v] > 0:
                    seen[v] = 1
                    self._bump(v)
                    if level[v] >= dl:
                        path += 1
                    else:
                        learnt.append(q)
            while not seen[trail[idx] >> 1]:
                idx -= 1
            p = trail[idx]
            idx -= 1
            v = p >> 1
            seen[v] = 0
            path -= 1
            if path == 0:
                break
            confl = reason[v]
            c = clauses[confl]
        learnt[0] = p ^ 1

        # local minimisation: drop literals implied by the rest of the clause
        keep = [learnt[0]]
        for q in learnt[1:]:
            r = reason[q >> 1]
            if r < 0:
                keep.append(q)
                continue
            for x in clauses[r]:
                w = x >> 1
                if w == q >> 1:
                    continue
                if not seen[w] and level[w] > 0:
                    keep.append(q)
                    break
        for q in learnt[1:]:
            seen[q >> 1] = 0

        if len(keep) == 1:
            back = 0
        else:
            best = 1
            for k in range(2, len(keep)):
                if level[keep[k] >> 1] > level[keep[best] >> 1]:
                    best = k
            keep[1], keep[best] = keep[best], keep[1]
            back = level[keep[1] >> 1]
        return keep, back, self._lbd(keep)

    def _lbd(self, c) -> int:
        level = self.level
        return len({level[x >> 1] for x in c})

    def _reduce_db(self) -> None:
        clauses, reason, val = self.clauses, self.reason, self.val
        cand = []
        for ci, c in enumerate(clauses):
            if c is None or not self.learnt[ci] or self.lbd[ci] <= 2 or len(c) <= 3:
                continue
            first = c[0]
            if val[first] == 1 and reason[first >> 1] == ci:
                continue  # locked as a reason
            cand.append((self.lbd[ci], len(c), ci))
        cand.sort(reverse=True)
        for _, _, ci in cand[: len(cand) // 2]:
            clauses[ci] = None

    # -- main loop ----------------------------------------------------------------

    def solve(self, budget=None) -> str:
        """Returns ``SAT``, ``UNSAT`` or ``TIMEOUT``; on ``SAT`` fills :attr:`model`."""
        budget = Budget.coerce(budget)
        self.model = None
        if not self.ok:
            return UNSAT
        self._seen = [0] * self.nvars
        if self._propagate() is not None:
            self.ok = False
            return UNSAT
        stats = self.stats
        restart_no = 0
        next_reduce = 2000
        reductions = 0
        while True:
            restart_no += 1
            limit = 100 * luby(restart_no)
            conflicts_here = 0
            while True:
                confl = self._propagate()
                if confl is not None:
                    stats.conflicts += 1
                    conflicts_here += 1
                    if not self.trail_lim:
                        self.ok = False
                        return UNSAT
                    learnt, back, lbd = self._analyze(confl)
                    self._cancel_until(back)
                    if len(learnt) == 1:
                        self._enqueue(learnt[0], -1)
                    else:
                        ci = self._attach(learnt, True, lbd)
                        self._enqueue(learnt[0], ci)
                    self.var_inc /= 0.95
                    if stats.conflicts % 128 == 0 and budget.expired():
                        self._cancel_until(0)
                        return TIMEOUT
                    continue
                if conflicts_here >= limit:
                    stats.restarts += 1
                    self._cancel_until(0)
                    break
                if stats.conflicts >= next_reduce:
                    reductions += 1
                    next_reduce = stats.conflicts + 2000 + 300 * reductions
                    self._reduce_db()
                v = -1
                while self.heap:
                    v = self._heap_pop()
                    if self.val[2 * v] == 0:
                        break
                    v = -1
                if v < 0:
                    self.model = [self.val[2 * k] == 1 for k in range(self.nvars)]
                    stats.learnt_kept = sum(1 for ci, c in enumerate(self.clauses) if c is not None and self.learnt[ci])
                    self._cancel_until(0)
                    return SAT
                stats.decisions += 1
                self.trail_lim.append(len(self.trail))
                self._enqueue(2 * v + self.phase[v], -1)

    def value(self, var: int) -> bool:
        """Model value of DIMACS variable ``var`` after a ``SAT`` answer."""
        if self.model is None:
            raise RuntimeError("no model available")
        return self.model[var - 1]
