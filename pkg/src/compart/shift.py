"""From a comparability cover of G_n to a proper colouring of the double shift graph.

Each special edge ``{[i,j], [j,k]}`` gets the type ``(m, sign)``: ``m`` is the
lowest part containing it and the sign records whether the part orients it
from ``[i,j]`` to ``[j,k]``.  Colouring the triple ``(i,j,k)`` by that type is
proper, because equal types on ``(i,j,k)`` and ``(j,k,l)`` would force the
disjoint intervals ``[i,j]`` and ``[k,l]`` to be adjacent.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from math import log2

from .comparability import EdgePartition, verify_partition
from .generators import gen_double_shift, gen_interval_graph_Gn
from .graph import Graph

SHIFT_CAP = 22


def gn_index(n: int, i: int, j: int) -> int:
    """Vertex number of ``[i, j]`` in ``gen_interval_graph_Gn(n)``."""
    return (i - 1) * n - (i - 1) * i // 2 + (j - i - 1)


def special_edges(n: int, g: Graph | None = None) -> list[tuple[int, tuple[int, int, int]]]:
    """``(edge ID in G_n, (i, j, k))`` for every ``1 <= i < j < k <= n``."""
    if n < 3:
        raise ValueError("special edges need n >= 3")
    if g is None:
        g, _ = gen_interval_graph_Gn(n)
    out = []
    for i, j, k in combinations(range(1, n + 1), 3):
        e = g.edge_id(gn_index(n, i, j), gn_index(n, j, k))
        if e is None:
            raise ValueError(f"[{i},{j}] and [{j},{k}] are not adjacent in the given graph")
        out.append((e, (i, j, k)))
    return out


def shift_graph(n: int, cap: int = SHIFT_CAP) -> Graph:
    if n > cap:
        raise ValueError(f"S_{n} exceeds the size cap n <= {cap}")
    return gen_double_shift(n)


def cover_to_coloring(n: int, ep: EdgePartition, g: Graph | None = None, verify: bool = True) -> list[int]:
    """Colour of each vertex of ``S_n`` (triples in lexicographic order): ``2m + sign``.

    ``sign`` is 0 when the part orients the special edge ``[i,j] -> [j,k]``.
    With ``verify`` the cover and its orientations are checked first.
    """
    if g is None:
        g, _ = gen_interval_graph_Gn(n)
    if ep.orientations is None:
        raise ValueError("cover_to_coloring needs orientation certificates")
    if verify:
        report = verify_partition(g, ep)
        if not report.valid:
            raise ValueError("not a verified comparability cover: " + "; ".join(report.lines()[2:]))
    colors = []
    for e, (i, j, k) in special_edges(n, g):
        m = next((p for p, part in enumerate(ep.parts) if e in part), None)
        if m is None:
            raise ValueError(f"special edge {e} for ({i},{j},{k}) is not covered")
        tail, _ = ep.orientations[m][e]
        colors.append(2 * m + (0 if tail == gn_index(n, i, j) else 1))
    return colors


def verify_proper(s: Graph, coloring) -> tuple[bool, tuple[int, int] | None]:
    if len(coloring) != s.n or any(c is None for c in coloring):
        raise ValueError("colouring must assign a colour to every vertex")
    for u, v in s.edges:
        if coloring[u] == coloring[v]:
            return False, (u, v)
    return True, None


def write_coloring(n: int, coloring) -> str:
    triples = combinations(range(1, n + 1), 3)
    return "".join(f"{i} {j} {k} {c}\n" for (i, j, k), c in zip(triples, coloring))


@dataclass
class BoundReport:
    n: int
    t: int
    colors: int
    loglog_n: float
    verdict: bool

    def tsv(self) -> str:
        return f"{self.n}\t{self.t}\t{self.colors}\t{self.loglog_n:.6f}\t{'ok' if self.verdict else 'FAIL'}"


def bound_report(n: int, t: int) -> BoundReport:
    """Compare ``2t`` with ``log2 log2 n``, the Erdos-Hajnal lower bound on chi(S_n)."""
    ll = log2(log2(n)) if n > 1 else float("-inf")
    return BoundReport(n, t, 2 * t, ll, 2 * t >= ll)
