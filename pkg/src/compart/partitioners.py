"""Constructive edge partitions into comparability subgraphs.

Every function returns an :class:`EdgePartition` with empty parts dropped.
Where the construction dictates an orientation it is attached directly;
callers can always re-check with :func:`verify_partition`.
"""

from __future__ import annotations

from collections import defaultdict

from .comparability import EdgePartition, Orientation, PARTITION
from .generators import (
    DIRECT,
    GSPStructure,
    IntervalSystem,
    gen_from_intervals,
    gen_H,
    gen_interval_graph_Gn,
    gn_intervals,
)
from .graph import Graph, clique_number, complement, line_graph, optimal_coloring


def ceil_log2(x: int) -> int:
    return 0 if x <= 1 else (x - 1).bit_length()


def _orient_by_rank(g: Graph, edge_ids, rank) -> Orientation:
    """Orient each edge from the endpoint of smaller ``rank`` to the larger."""
    o = {}
    for e in edge_ids:
        u, v = g.edges[e]
        o[e] = (u, v) if rank(u) < rank(v) else (v, u)
    return o


def _finish(parts: list[list[int]], orients: list[Orientation]) -> EdgePartition:
    return EdgePartition.from_parts([frozenset(p) for p in parts], PARTITION, orients)


# ---------------------------------------------------------------------------

def partition_gsp(g: Graph, s: GSPStructure) -> EdgePartition:
    """Two parts for a GSP graph given its structure record."""
    s.check(g)
    clique_of = {v: i for i, c in enumerate(s.cliques) for v in c}
    inner, cross = [], []
    for e, (u, v) in enumerate(g.edges):
        if (u in s.v1) != (v in s.v1):
            cross.append(e)
        else:
            inner.append(e)
    if s.side == DIRECT:
        # V1 and each V2 clique: vertex-disjoint cliques, linear order by vertex ID
        o1 = _orient_by_rank(g, inner, lambda v: v)
    else:
        # complete multipartite graph on V2, ordered by clique index
        o1 = _orient_by_rank(g, inner, lambda v: clique_of[v])
    o2 = _orient_by_rank(g, cross, lambda v: 0 if v in s.v1 else 1)
    return _finish([inner, cross], [o1, o2])


def partition_lbip(h: Graph, bipartition) -> tuple[Graph, EdgePartition]:
    """Line graph of bipartite ``h`` split by the side where edges meet."""
    lg, tags = line_graph(h, bipartition)
    part_a = [e for e, t in enumerate(tags) if t == "a"]
    part_b = [e for e, t in enumerate(tags) if t == "b"]
    # each part is a disjoint union of cliques; order every clique by edge ID of h
    o_a = _orient_by_rank(lg, part_a, lambda v: v)
    o_b = _orient_by_rank(lg, part_b, lambda v: v)
    return lg, _finish([part_a, part_b], [o_a, o_b])


def unit_interval_classes(u: IntervalSystem) -> list[list[int]]:
    """Greedy classes: take the remaining interval with leftmost right endpoint
    (lowest index on ties) and collect every remaining interval containing it.
    """
    remaining = list(range(len(u.intervals)))
    classes = []
    while remaining:
        pick = min(remaining, key=lambda k: (u.intervals[k][1], k))
        b = u.intervals[pick][1]
        cls = [k for k in remaining if u.intervals[k][0] <= b <= u.intervals[k][1]]
        classes.append(cls)
        taken = set(cls)
        remaining = [k for k in remaining if k not in taken]
    return classes


def partition_unit_interval(u: IntervalSystem):
    """Returns ``(graph, partition, classes)``; parts are within-class and cross-class edges."""
    if not u.unit:
        raise ValueError("partition_unit_interval needs a unit interval system")
    u.check()
    g = gen_from_intervals(u)
    classes = unit_interval_classes(u)
    cls_of = {k: i for i, c in enumerate(classes) for k in c}
    within, across = [], []
    for e, (a, b) in enumerate(g.edges):
        if cls_of[a] == cls_of[b]:
            within.append(e)
        else:
            if abs(cls_of[a] - cls_of[b]) != 1:
                raise RuntimeError(f"edge {e} joins non-consecutive classes {cls_of[a]} and {cls_of[b]}")
            across.append(e)
    o1 = _orient_by_rank(g, within, lambda v: v)
    o2 = _orient_by_rank(g, across, lambda v: cls_of[v] % 2)
    return g, _finish([within, across], [o1, o2]), classes


# ---------------------------------------------------------------------------
# G_n recursion

def gn_bound(n: int) -> int:
    """f(n) = 1 for n <= 4, otherwise 1 + f(ceil(n / 2))."""
    parts = 1
    while n > 4:
        n = (n + 1) // 2
        parts += 1
    return parts


def gn_edge_part(n: int, p: tuple[int, int], q: tuple[int, int]) -> int:
    """Part index of the edge between intersecting intervals ``p`` and ``q`` of G_n.

    A range ``[lo, hi]`` of more than 4 points is cut into ``A`` (first half,
    rounded down) and ``B``.  Besides its own intervals a range carries
    *external* intervals that start left of ``lo``; between themselves their
    edges were settled higher up.  Edges among A-intervals and A-externals
    recurse into ``A``.  Edges touching a B-interval recurse into ``B``, where
    straddling intervals and externals reaching ``B`` become externals.  All
    remaining edges (straddler-straddler, straddler-A, external-straddler,
    long external to A) form the range's own part, numbered
    ``gn_bound(size) - 1``.  Ranges of at most 4 points use part 0.
    """
    lo, hi = 1, n
    while True:
        size = hi - lo + 1
        if size <= 4:
            return 0
        cut = lo + size // 2  # first point of B

        # intervals reaching into the range from the left have iv[0] < lo
        if p[1] < cut and q[1] < cut and (p[0] >= lo or q[0] >= lo):
            hi = cut - 1
        elif p[0] >= cut and q[1] >= cut or q[0] >= cut and p[1] >= cut:
            lo = cut
        else:
            return gn_bound(size) - 1


def partition_Gn_recursive(n: int, g: Graph | None = None) -> EdgePartition:
    """At most f(n) comparability parts for G_n (pass ``g`` to skip rebuilding it)."""
    if g is None:
        g, _ = gen_interval_graph_Gn(n)
    iv = gn_intervals(n)
    buckets = defaultdict(list)
    for e, (a, b) in enumerate(g.edges):
        buckets[gn_edge_part(n, iv[a], iv[b])].append(e)
    return EdgePartition.from_parts([frozenset(buckets[k]) for k in range(gn_bound(n))])


def gn_part_count(n: int) -> int:
    """Number of nonempty parts :func:`partition_Gn_recursive` emits, without building G_n.

    Each range of more than 4 points contributes its own (nonempty) part; the
    leaf ranges all share part 0, which is nonempty as soon as ``n >= 3``.
    """
    if n < 3:
        return 0
    used = {0}
    stack = [n]
    while stack:
        size = stack.pop()
        if size > 4:
            used.add(gn_bound(size) - 1)
            stack.extend((size // 2, size - size // 2))
    return len(used)


# ---------------------------------------------------------------------------
# bit partitions

def _bit_partition(g: Graph, labels: list[int], nbits: int, skip_equal: bool):
    parts = [[] for _ in range(nbits)]
    for e, (u, v) in enumerate(g.edges):
        diff = labels[u] ^ labels[v]
        if diff == 0:
            if skip_equal:
                continue
            raise RuntimeError(f"edge {e} joins two vertices with the same colour")
        parts[(diff & -diff).bit_length() - 1].append(e)
    orients = []
    for bit, es in enumerate(parts):
        orients.append(_orient_by_rank(g, es, lambda v: (labels[v] >> bit) & 1))
    return parts, orients


def partition_by_color_bits(g: Graph, budget_ms: int | None = None) -> EdgePartition:
    """At most ceil(log2 chi) bipartite parts: lowest bit where the colours differ."""
    coloring = optimal_coloring(g, budget_ms)
    chi = max(coloring) + 1 if coloring else 0
    parts, orients = _bit_partition(g, coloring, ceil_log2(chi), False)
    return _finish(parts, orients)


def partition_bipartite_log_omega(g: Graph, budget_ms: int | None = None) -> EdgePartition:
    """At most ceil(log2 omega) bipartite parts for a perfect graph.

    Raises ``ValueError`` when chi exceeds omega, which certifies that ``g`` is
    not perfect.
    """
    coloring = optimal_coloring(g, budget_ms)
    chi = max(coloring) + 1 if coloring else 0
    omega = clique_number(g, budget_ms)
    if chi > omega:
        raise ValueError(f"chi = {chi} > omega = {omega}: graph is not perfect")
    parts, orients = _bit_partition(g, coloring, ceil_log2(omega), False)
    return _finish(parts, orients)


def partition_alpha_comparability(g: Graph, budget_ms: int | None = None) -> EdgePartition:
    """One part of intra-clique edges for a minimum clique cover, plus
    ceil(log2 alpha) bipartite parts between the cliques.
    """
    co = complement(g)
    cover = optimal_coloring(co, budget_ms)
    k = max(cover) + 1 if cover else 0
    alpha = clique_number(co, budget_ms)
    if k > alpha:
        raise ValueError(f"clique cover number {k} > alpha = {alpha}: graph is not perfect")
    intra = [e for e, (u, v) in enumerate(g.edges) if cover[u] == cover[v]]
    bit_parts, bit_orients = _bit_partition(g, cover, ceil_log2(k), True)
    o0 = _orient_by_rank(g, intra, lambda v: v)
    return _finish([intra, *bit_parts], [o0, *bit_orients])


# ---------------------------------------------------------------------------

def partition_H(rows: int, cols: int, g: Graph | None = None) -> EdgePartition:
    """Three parts of ``gen_H(rows, cols)``: cliques of size ``rows``, cliques of
    size ``cols``, pendant edges.
    """
    if g is None:
        g = gen_H(rows, cols)
    core = rows * cols
    big, small, pendant = [], [], []
    for e, (u, v) in enumerate(g.edges):
        if v >= core:
            pendant.append(e)
        elif u % cols == v % cols:
            big.append(e)  # v_{i,j} v_{i',j}: clique of size rows
        else:
            small.append(e)
    parts = [big, small, pendant]
    return _finish(parts, [_orient_by_rank(g, p, lambda v: v) for p in parts])


def certify(g: Graph, ep: EdgePartition) -> EdgePartition:
    """Attach recognizer orientations to a partition that has none."""
    return ep.certified(g)
