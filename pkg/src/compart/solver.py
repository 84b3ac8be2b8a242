"""Exact p(G) and c(G) by budgeted search, plus a dedicated two-part refuter.

The generic search assigns edges (fail-first order) to parts or to nonempty
sets of parts.  Pruning rests on the forcing relation: two edges ``ab`` and
``ab'`` of one part whose third side ``bb'`` is *known* to be missing from
that part must point the same way at ``a``.  Each such pair is a parity
constraint between orientation bits, kept in a union-find with undo.  A
contradiction means the part can never become a comparability graph, so the
branch is dead.  When every pair is decided this test is exact, and leaves are
certified by the recognizer and re-verified anyway.

:func:`search_p_greater_than_2` compiles the two-part question for one graph
into CNF and hands it to the in-package CDCL engine.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from itertools import combinations, permutations

from .budget import Budget, BudgetExceeded
from .comparability import COVER, PARTITION, EdgePartition, find_transitive_orientation, verify_partition
from .graph import Graph
from .partitioners import partition_by_color_bits
from .sat import CDCL, SAT, TIMEOUT, UNSAT, SatStats

PROVED_GT_2 = "proved_gt_2"
FOUND_2_PARTITION = "found_2_partition"


@dataclass
class SearchResult:
    status: str  # sat, unsat or timeout
    partition: EdgePartition | None
    nodes: int
    elapsed_ms: float


@dataclass
class ExactResult:
    """``value`` is ``None`` on timeout; ``lower``/``upper`` are always valid bounds."""

    value: int | None
    lower: int
    upper: int
    status: str
    partition: EdgePartition | None
    nodes: int
    elapsed_ms: float


@dataclass
class P2Result:
    verdict: str
    partition: EdgePartition | None
    stats: SatStats
    elapsed_ms: float
    num_vars: int = 0
    num_clauses: int = 0
    symmetries: int = 0

    def summary(self) -> str:
        s = self.stats
        return (
            f"{self.verdict} conflicts={s.conflicts} decisions={s.decisions} "
            f"propagations={s.propagations} elapsed_ms={self.elapsed_ms:.0f}"
        )


# ---------------------------------------------------------------------------
# parity union-find with undo


class _ParityUF:
    __slots__ = ("parent", "parity", "rank", "undo")

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.parity = [0] * n
        self.rank = [0] * n
        self.undo: list[tuple[int, int, int]] = []

    def find(self, x: int) -> tuple[int, int]:
        p = 0
        parent, parity = self.parent, self.parity
        while parent[x] != x:
            p ^= parity[x]
            x = parent[x]
        return x, p

    def union(self, x: int, y: int, rel: int) -> bool:
        """Impose ``bit(x) xor bit(y) == rel``; False on contradiction."""
        rx, px = self.find(x)
        ry, py = self.find(y)
        if rx == ry:
            return (px ^ py) == rel
        if self.rank[rx] < self.rank[ry]:
            rx, ry = ry, rx
        bumped = self.rank[rx] == self.rank[ry]
        self.parent[ry] = rx
        self.parity[ry] = px ^ py ^ rel
        if bumped:
            self.rank[rx] += 1
        self.undo.append((ry, rx, bumped))
        return True

    def rollback(self, mark: int) -> None:
        while len(self.undo) > mark:
            ry, rx, bumped = self.undo.pop()
            self.parent[ry] = ry
            self.parity[ry] = 0
            if bumped:
                self.rank[rx] -= 1


def _edge_order(g: Graph) -> list[int]:
    return sorted(range(g.m), key=lambda e: (-(g.degree(g.edges[e][0]) + g.degree(g.edges[e][1])), e))


def _choices(t: int, mode: str) -> list[int]:
    """Part sets as bitmasks: singletons, or every nonempty subset in Gray-code order."""
    if mode == PARTITION:
        return [1 << p for p in range(t)]
    return [i ^ (i >> 1) for i in range(1, 1 << t)]


def _canonical(mask: int, opened: int) -> int | None:
    """New part count if ``mask`` opens parts in canonical order, else ``None``.

    Parts ``0..opened-1`` are in use; fresh parts must be ``opened, opened+1, ...``.
    """
    fresh = mask >> opened
    if fresh & (fresh + 1):
        return None  # fresh bits not a contiguous run starting at ``opened``
    return opened + fresh.bit_length()


def decide_partition(g: Graph, t: int, mode: str = PARTITION, budget_ms=None) -> SearchResult:
    """Find ``t`` comparability parts (``mode`` partition or cover) or prove there are none.

    Timeouts are reported as ``status == "timeout"``, never as unsat.
    """
    if t < 1:
        raise ValueError("t must be at least 1")
    if mode not in (PARTITION, COVER):
        raise ValueError(f"unknown mode {mode!r}")
    budget = Budget.coerce(budget_ms)
    order = _edge_order(g)
    assign = [0] * g.m  # bitmask of parts, 0 while open
    uf = _ParityUF(g.m * t)
    choices = _choices(t, mode)
    nodes = 0
    edges, adj, edge_id = g.edges, g.adj, g.edge_id

    def place(e: int, mask: int) -> bool:
        a0, b0 = edges[e]
        for p in range(t):
            bit = 1 << p
            if mask & bit:
                # pairs (e, f) sharing an endpoint, third side known to be outside part p
                for a, b in ((a0, b0), (b0, a0)):
                    for c in adj[a]:
                        if c == b:
                            continue
                        f = edge_id(a, c)
                        if not assign[f] & bit:
                            continue
                        h = edge_id(b, c)
                        if h is None or (assign[h] and not assign[h] & bit):
                            if not uf.union(e * t + p, f * t + p, (a > b) ^ (a > c)):
                                return False
            else:
                # e is now a known non-edge of part p: pairs c-a0, c-b0 in part p are forced
                for c in adj[a0]:
                    if c == b0 or c not in adj[b0]:
                        continue
                    f1, f2 = edge_id(c, a0), edge_id(c, b0)
                    if assign[f1] & bit and assign[f2] & bit:
                        if not uf.union(f1 * t + p, f2 * t + p, (c > a0) ^ (c > b0)):
                            return False
        return True

    def search(k: int, opened: int) -> bool:
        nonlocal nodes
        if k == len(order):
            return True
        e = order[k]
        for mask in choices:
            new_open = _canonical(mask, opened)
            if new_open is None or new_open > t:
                continue
            nodes += 1
            budget.tick()
            mark = len(uf.undo)
            assign[e] = mask
            if place(e, mask) and search(k + 1, new_open):
                return True
            assign[e] = 0
            uf.rollback(mark)
        return False

    try:
        found = search(0, 0)
    except BudgetExceeded:
        return SearchResult(TIMEOUT, None, nodes, budget.elapsed_ms)
    if not found:
        return SearchResult(UNSAT, None, nodes, budget.elapsed_ms)
    parts = [frozenset(e for e in range(g.m) if assign[e] >> p & 1) for p in range(t)]
    ep = EdgePartition.from_parts(parts, mode).certified(g)
    report = verify_partition(g, ep)
    if not report.valid:
        raise RuntimeError("search produced an invalid certificate: " + "; ".join(report.lines()))
    return SearchResult(SAT, ep, nodes, budget.elapsed_ms)


def _exact(g: Graph, mode: str, budget_ms) -> ExactResult:
    budget = Budget.coerce(budget_ms)
    if g.m == 0:
        return ExactResult(0, 0, 0, SAT, None, 0, budget.elapsed_ms)
    o = find_transitive_orientation(g)
    if o is not None:
        ep = EdgePartition([frozenset(range(g.m))], mode, [o])
        return ExactResult(1, 1, 1, SAT, ep, 0, budget.elapsed_ms)
    try:
        remaining = None if budget.deadline is None else max(1, int(budget.budget_ms - budget.elapsed_ms))
        upper_ep = partition_by_color_bits(g, remaining)
    except BudgetExceeded:
        return ExactResult(None, 2, g.m, TIMEOUT, None, 0, budget.elapsed_ms)
    upper_ep = EdgePartition(upper_ep.parts, mode, upper_ep.orientations)
    upper = len(upper_ep)
    nodes = 0
    for t in range(2, upper):
        res = decide_partition(g, t, mode, budget)
        nodes += res.nodes
        if res.status == SAT:
            return ExactResult(t, t, t, SAT, res.partition, nodes, budget.elapsed_ms)
        if res.status == TIMEOUT:
            return ExactResult(None, t, upper, TIMEOUT, upper_ep, nodes, budget.elapsed_ms)
    return ExactResult(upper, upper, upper, SAT, upper_ep, nodes, budget.elapsed_ms)


def exact_p(g: Graph, budget_ms=None) -> ExactResult:
    """Minimum number of comparability parts partitioning the edges.

    The answer is bracketed by the recognizer (is it 1?) and the colour-bits
    partition, which supplies the starting upper bound.
    """
    return _exact(g, PARTITION, budget_ms)


def exact_c(g: Graph, budget_ms=None) -> ExactResult:
    """Minimum number of comparability subgraphs covering the edges."""
    return _exact(g, COVER, budget_ms)


# ---------------------------------------------------------------------------
# two-part refutation through CNF


def _components(adj, vertices) -> list[set[int]]:
    rest = set(vertices)
    out = []
    while rest:
        s = min(rest)
        rest.discard(s)
        comp = {s}
        stack = [s]
        while stack:
            u = stack.pop()
            for w in adj[u]:
                if w in rest:
                    rest.discard(w)
                    comp.add(w)
                    stack.append(w)
        out.append(comp)
    return out


def _lex_leader(clauses: list[list[int]], xs: list[int], ys: list[int], top: int) -> int:
    """Clauses for ``xs <=lex ys`` (false < true); returns the new top variable."""
    prev = None
    for x, y in zip(xs, ys):
        if x == y:
            continue
        guard = [] if prev is None else [-prev]
        clauses.append([-x, y] + guard)
        top += 1
        eq = top
        clauses.append([eq, x, y] + guard)
        clauses.append([eq, -x, -y] + guard)
        prev = eq
    return top


def two_part_cnf(g: Graph, symmetries=()) -> tuple[list[list[int]], int]:
    """CNF satisfiable iff the edges of ``g`` split into two comparability graphs.

    Variable ``e+1`` says edge ``e`` lies in part 1; variable ``m+e+1`` says it
    is oriented from its smaller to its larger endpoint.  For every path
    ``b -> a -> b'`` inside one part, ``bb'`` must be an edge of that part
    oriented ``b -> b'``.  When ``b`` and ``b'`` sit in different components of
    the neighbourhood of ``a`` this only says that ``a`` cannot be both a head
    and a tail there, which is stated once per component pair through
    auxiliary in/out variables.  ``symmetries`` are edge permutations (lists)
    of automorphisms that are involutions; each adds a lex-leader constraint.
    Edge 0 is fixed in part 0 and oriented upward.
    """
    m = g.m
    top = 2 * m
    clauses: list[list[int]] = []

    def in_part(e: int, side: int) -> int:
        return e + 1 if side else -(e + 1)

    def arc(u: int, v: int) -> int:
        d = m + g.edge_id(u, v) + 1
        return d if u < v else -d

    for a in range(g.n):
        nbrs = sorted(g.adj[a])
        comps = _components(g.adj, nbrs)
        cid = {b: i for i, c in enumerate(comps) for b in c}
        if len(comps) > 1:
            for side in (0, 1):
                into, out = {}, {}
                for i in range(len(comps)):
                    into[i] = top + 1
                    out[i] = top + 2
                    top += 2
                for b in nbrs:
                    e = g.edge_id(a, b)
                    clauses.append([-in_part(e, side), -arc(b, a), into[cid[b]]])
                    clauses.append([-in_part(e, side), -arc(a, b), out[cid[b]]])
                for i, j in permutations(range(len(comps)), 2):
                    clauses.append([-into[i], -out[j]])
        for b, b2 in permutations(nbrs, 2):
            if cid[b] != cid[b2]:
                continue
            e, f = g.edge_id(a, b), g.edge_id(a, b2)
            h = g.edge_id(b, b2)
            for side in (0, 1):
                base = [-in_part(e, side), -in_part(f, side), -arc(b, a), -arc(a, b2)]
                if h is None:
                    clauses.append(base)
                else:
                    clauses.append(base + [in_part(h, side)])
                    clauses.append(base + [arc(b, b2)])
    xs = list(range(1, m + 1))
    for perm in symmetries:
        top = _lex_leader(clauses, xs, [perm[e] + 1 for e in range(m)], top)
    if m:
        clauses.append([-1])
        clauses.append([m + 1])
    return clauses, top


def vertex_perm_to_edge_perm(g: Graph, perm) -> list[int]:
    """Edge permutation induced by a vertex map; raises if it is not an automorphism."""
    out = []
    for u, v in g.edges:
        f = g.edge_id(perm[u], perm[v])
        if f is None:
            raise ValueError(f"vertex map sends edge ({u},{v}) to a non-edge")
        out.append(f)
    if len(set(out)) != g.m:
        raise ValueError("vertex map is not a bijection on edges")
    return out


_GRID_LABEL = re.compile(r"^([vw])_(\d+)_(\d+)$")


def grid_symmetries(g: Graph, all_pairs: bool = False) -> list[list[int]]:
    """Row and column transpositions of a graph labelled like ``gen_H`` output.

    By default only adjacent swaps ``(x, x+1)`` are returned; they generate
    every row and column permutation and, in measurements on ``gen_H(k, 4)``,
    give the CDCL engine fewer conflicts than the full set of
    ``C(rows, 2) + C(cols, 2)`` transpositions (``all_pairs=True``).
    Every swap is checked to be an automorphism before use; an unlabelled or
    differently labelled graph yields no symmetries.
    """
    where = {}
    for v in range(g.n):
        match = _GRID_LABEL.match(g.label(v))
        if match is None:
            return []
        where[(match[1], int(match[2]), int(match[3]))] = v
    if len(where) != g.n:
        return []
    rows = max(i for _, i, _ in where)
    cols = max(j for _, _, j in where)

    def swap(axis: int, x: int, y: int):
        perm = list(range(g.n))
        for (kind, i, j), v in where.items():
            ij = [i, j]
            if ij[axis] in (x, y):
                ij[axis] = x + y - ij[axis]
                w = where.get((kind, ij[0], ij[1]))
                if w is None:
                    return None
                perm[v] = w
        return perm

    gens = []
    for axis, size in ((0, rows), (1, cols)):
        pairs = combinations(range(1, size + 1), 2) if all_pairs else ((x, x + 1) for x in range(1, size))
        for x, y in pairs:
            perm = swap(axis, x, y)
            if perm is None:
                return []
            try:
                gens.append(vertex_perm_to_edge_perm(g, perm))
            except ValueError:
                return []
    return gens


def search_p_greater_than_2(g: Graph, budget_ms=None, symmetries=None) -> P2Result:
    """Decide whether ``g`` splits into two comparability graphs.

    ``symmetries=None`` derives row/column swaps from ``gen_H`` style labels;
    pass ``[]`` to switch symmetry breaking off.
    """
    budget = Budget.coerce(budget_ms)
    if symmetries is None:
        symmetries = grid_symmetries(g)
    clauses, top = two_part_cnf(g, symmetries)
    solver = CDCL(top)
    for c in clauses:
        solver.add_clause(c)
    status = solver.solve(budget)
    meta = dict(num_vars=top, num_clauses=len(clauses), symmetries=len(symmetries))
    if status == TIMEOUT:
        return P2Result(TIMEOUT, None, solver.stats, budget.elapsed_ms, **meta)
    if status == UNSAT:
        return P2Result(PROVED_GT_2, None, solver.stats, budget.elapsed_ms, **meta)
    m = g.m
    parts = [[], []]
    orients = [{}, {}]
    for e, (u, v) in enumerate(g.edges):
        side = int(solver.value(e + 1))
        parts[side].append(e)
        orients[side][e] = (u, v) if solver.value(m + e + 1) else (v, u)
    ep = EdgePartition.from_parts([frozenset(p) for p in parts], PARTITION, orients)
    report = verify_partition(g, ep)
    if not report.valid:
        raise RuntimeError("CNF model is not a valid partition: " + "; ".join(report.lines()))
    return P2Result(FOUND_2_PARTITION, ep, solver.stats, budget.elapsed_ms, **meta)
