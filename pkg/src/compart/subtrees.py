"""Two partial orders on disjoint subtrees of a rooted tree.

For disjoint subtrees with roots ``a`` and ``b`` (the member closest to the
tree root): ``A <1 B`` when ``a`` lies on the path from ``b`` to the root,
equivalently when ``psi(a)`` is a proper prefix of ``psi(b)``; otherwise the
pair is ordered by ``<lex`` on the psi labels.  The two relations split the
edges of the disjointness graph into two comparability graphs.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

from .comparability import EdgePartition, PARTITION
from .generators import SubtreeFamily
from .graph import Graph

BEFORE = "before"
AFTER = "after"
INCOMPARABLE = "incomparable"
PREC1 = "prec1"
PREC2 = "prec2"


def _bfs(tree: Graph, root: int) -> tuple[list[int], list[int]]:
    dist = [-1] * tree.n
    parent = [-1] * tree.n
    dist[root] = 0
    queue = deque([root])
    while queue:
        u = queue.popleft()
        for w in sorted(tree.adj[u]):
            if dist[w] < 0:
                dist[w] = dist[u] + 1
                parent[w] = u
                queue.append(w)
    return dist, parent


def subtree_root(f: SubtreeFamily, idx: int) -> int:
    """The unique member of subtree ``idx`` closest to ``f.root``."""
    dist, _ = _bfs(f.tree, f.root)
    return _closest(f.subtrees[idx], dist, idx)


def _closest(members, dist, idx) -> int:
    best = min(dist[v] for v in members)
    at = [v for v in members if dist[v] == best]
    if len(at) != 1:
        raise ValueError(f"subtree {idx} has {len(at)} members closest to the root; it is not connected")
    return at[0]


def psi_labeling(tree: Graph, root: int) -> dict[int, tuple[int, ...]]:
    """Root gets ``()``; the children of ``v`` (ascending vertex ID) get ``psi(v) + (i,)``."""
    psi = {root: ()}
    queue = deque([root])
    while queue:
        u = queue.popleft()
        children = sorted(w for w in tree.adj[u] if w not in psi)
        for i, w in enumerate(children):
            psi[w] = psi[u] + (i,)
            queue.append(w)
    if len(psi) != tree.n:
        raise ValueError("tree is not connected")
    return psi


def is_prefix(alpha, beta) -> bool:
    return len(alpha) <= len(beta) and tuple(beta[: len(alpha)]) == tuple(alpha)


def prec_lex(alpha, beta) -> str:
    """``before``/``after`` in lexicographic order, ``incomparable`` if one is a prefix of the other."""
    if is_prefix(alpha, beta) or is_prefix(beta, alpha):
        return INCOMPARABLE
    for x, y in zip(alpha, beta):
        if x != y:
            return BEFORE if x < y else AFTER
    raise AssertionError("unreachable: sequences without a common prefix differ somewhere")


def on_root_path(parent: list[int], a: int, b: int) -> bool:
    """Whether ``a`` lies on the tree path from ``b`` up to the root."""
    v = b
    while v != -1:
        if v == a:
            return True
        v = parent[v]
    return False


@dataclass
class DisjointnessEdgeOrder:
    tags: list[str]  # per disjointness edge: prec1 or prec2
    arcs: list[tuple[int, int]]  # per disjointness edge: (preceding subtree, following subtree)


def disjointness_graph(f: SubtreeFamily) -> Graph:
    edges = [(i, j) for i, j in combinations(range(len(f.subtrees)), 2) if not (f.subtrees[i] & f.subtrees[j])]
    return Graph(len(f.subtrees), edges)


def partition_subtree_disjointness(f: SubtreeFamily):
    """Returns ``(disjointness graph, partition, edge order)`` with both orders as certificates."""
    f.check()
    g = disjointness_graph(f)
    psi = psi_labeling(f.tree, f.root)
    dist, _ = _bfs(f.tree, f.root)
    roots = [_closest(s, dist, k) for k, s in enumerate(f.subtrees)]
    tags, arcs = [], []
    parts = ([], [])
    orients = ({}, {})
    for e, (i, j) in enumerate(g.edges):
        pa, pb = psi[roots[i]], psi[roots[j]]
        if is_prefix(pa, pb):
            tag, arc = PREC1, (i, j)
        elif is_prefix(pb, pa):
            tag, arc = PREC1, (j, i)
        else:
            tag = PREC2
            arc = (i, j) if prec_lex(pa, pb) == BEFORE else (j, i)
        tags.append(tag)
        arcs.append(arc)
        k = 0 if tag == PREC1 else 1
        parts[k].append(e)
        orients[k][e] = arc
    ep = EdgePartition.from_parts([frozenset(p) for p in parts], PARTITION, list(orients))
    return g, ep, DisjointnessEdgeOrder(tags, arcs)


def write_psi(psi: dict[int, tuple[int, ...]]) -> str:
    return "".join(f"{v}: {','.join(str(x) for x in psi[v])}\n" for v in sorted(psi))
