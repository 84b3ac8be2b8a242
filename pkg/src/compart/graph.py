"""Simple undirected graphs with stable edge IDs, constructions and exact invariants.

Edge IDs are list positions, so every partition and certificate refers to
edges by ID rather than by endpoints.  Exponential routines (clique number,
chromatic number, induced cycles) take a budget in milliseconds and raise
:class:`~compart.budget.BudgetExceeded` instead of returning an approximation.
"""

from __future__ import annotations

from itertools import combinations
from typing import Iterable, NamedTuple, Sequence

from .budget import Budget


class FormatError(ValueError):
    """Malformed input file; the message names the offending line."""

    def __init__(self, lineno: int, message: str):
        super().__init__(f"line {lineno}: {message}")
        self.lineno = lineno


class Graph:
    """Immutable simple graph on vertices ``0..n-1``.

    ``edges[k]`` is the pair ``(u, v)`` with ``u < v`` carrying edge ID ``k``.
    """

    __slots__ = ("n", "edges", "adj", "labels", "_eid", "_bits")

    def __init__(self, n: int, edges: Sequence[tuple[int, int]], labels: Sequence[str] | None = None):
        self.n = n
        self.edges = tuple(edges)
        eid = {}
        adj = [set() for _ in range(n)]
        for k, (u, v) in enumerate(self.edges):
            if not (0 <= u < v < n):
                raise ValueError(f"edge {k} = ({u}, {v}) is not a normalized pair in [0, {n})")
            if (u, v) in eid:
                raise ValueError(f"edge {k} duplicates edge {eid[(u, v)]}")
            eid[(u, v)] = k
            adj[u].add(v)
            adj[v].add(u)
        self._eid = eid
        self.adj = tuple(frozenset(a) for a in adj)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise ValueError(f"{len(labels)} labels for {n} vertices")
            if len(set(labels)) != n:
                raise ValueError("vertex labels must be unique")
        self.labels = labels
        self._bits = None

    @property
    def m(self) -> int:
        return len(self.edges)

    def edge_id(self, u: int, v: int) -> int | None:
        if u > v:
            u, v = v, u
        return self._eid.get((u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) is not None

    def degree(self, v: int) -> int:
        return len(self.adj[v])

    @property
    def adj_bits(self) -> tuple[int, ...]:
        """Adjacency rows as integer bitsets."""
        if self._bits is None:
            self._bits = tuple(sum(1 << w for w in a) for a in self.adj)
        return self._bits

    def label(self, v: int) -> str:
        return self.labels[v] if self.labels is not None else str(v)

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.n, self.edges, self.labels) == (other.n, other.edges, other.labels)

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


def make_graph(n: int, pairs: Iterable[tuple[int, int]], labels: Sequence[str] | None = None) -> Graph:
    """Build a graph, normalizing pairs to ``u < v`` and dropping duplicates.

    IDs follow the order of first occurrence.
    """
    seen = set()
    edges = []
    for idx, (u, v) in enumerate(pairs):
        if not (0 <= u < n and 0 <= v < n):
            raise ValueError(f"pair {idx} = ({u}, {v}) has an endpoint outside [0, {n})")
        if u == v:
            raise ValueError(f"pair {idx} = ({u}, {v}) is a loop")
        e = (u, v) if u < v else (v, u)
        if e not in seen:
            seen.add(e)
            edges.append(e)
    return Graph(n, edges, labels)


def complete_graph(n: int) -> Graph:
    return Graph(n, list(combinations(range(n), 2)))


def cycle_graph(n: int) -> Graph:
    return make_graph(n, [(i, (i + 1) % n) for i in range(n)])


def path_graph(n: int) -> Graph:
    return make_graph(n, [(i, i + 1) for i in range(n - 1)])


def complement(g: Graph) -> Graph:
    edges = [(u, v) for u, v in combinations(range(g.n), 2) if v not in g.adj[u]]
    return Graph(g.n, edges, g.labels)


def induced_subgraph(g: Graph, vertices: Sequence[int]) -> Graph:
    """Subgraph induced on ``vertices``, renumbered in the given order."""
    pos = {v: i for i, v in enumerate(vertices)}
    edges = []
    for u, v in g.edges:
        if u in pos and v in pos:
            a, b = pos[u], pos[v]
            edges.append((a, b) if a < b else (b, a))
    edges.sort()
    labels = [g.labels[v] for v in vertices] if g.labels is not None else None
    return Graph(len(vertices), edges, labels)


def check_bipartition(h: Graph, side_a: Iterable[int], side_b: Iterable[int]) -> tuple[frozenset, frozenset]:
    a, b = frozenset(side_a), frozenset(side_b)
    if a & b:
        raise ValueError(f"vertices {sorted(a & b)} are on both sides")
    if a | b != frozenset(range(h.n)):
        raise ValueError("bipartition does not cover the vertex set")
    for k, (u, v) in enumerate(h.edges):
        if (u in a) == (v in a):
            raise ValueError(f"edge {k} = ({u}, {v}) lies inside one side of the bipartition")
    return a, b


def line_graph(h: Graph, bipartition: tuple[Iterable[int], Iterable[int]] | None = None):
    """Line graph of ``h``; vertex ``k`` is edge ``k`` of ``h``.

    With a bipartition ``(A, B)`` also returns, per line-graph edge, ``"a"`` when
    the two underlying edges meet in ``A`` and ``"b"`` when they meet in ``B``;
    otherwise the second value is ``None``.
    """
    if bipartition is not None:
        side_a, _ = check_bipartition(h, *bipartition)
    incident = [[] for _ in range(h.n)]
    for k, (u, v) in enumerate(h.edges):
        incident[u].append(k)
        incident[v].append(k)
    shared = {}
    for x in range(h.n):
        for e, f in combinations(incident[x], 2):
            shared[(e, f)] = x
    pairs = sorted(shared)
    labels = None
    if h.labels is not None:
        labels = [f"e_{h.labels[u]}_{h.labels[v]}" for u, v in h.edges]
    lg = Graph(h.m, pairs, labels)
    if bipartition is None:
        return lg, None
    tags = ["a" if shared[p] in side_a else "b" for p in pairs]
    return lg, tags


def cartesian_product(g: Graph, h: Graph) -> Graph:
    """Vertex ``(x, y)`` is numbered ``x * h.n + y``."""
    edges = []
    for x in range(g.n):
        for y in range(h.n):
            for y2 in sorted(h.adj[y]):
                if y2 > y:
                    edges.append((x * h.n + y, x * h.n + y2))
            for x2 in sorted(g.adj[x]):
                if x2 > x:
                    edges.append((x * h.n + y, x2 * h.n + y))
    edges.sort()
    labels = None
    if g.labels is not None and h.labels is not None:
        labels = [f"{g.labels[x]}_{h.labels[y]}" for x in range(g.n) for y in range(h.n)]
    return Graph(g.n * h.n, edges, labels)


def _pendant_label(tag: str) -> str:
    return "w_" + tag[2:] if tag.startswith("v_") else "w_" + tag


def attach_pendants(g: Graph) -> Graph:
    """Add a new vertex ``n + v`` and the edge ``{v, n + v}`` for every vertex ``v``."""
    edges = list(g.edges) + [(v, g.n + v) for v in range(g.n)]
    labels = None
    if g.labels is not None:
        labels = list(g.labels) + [_pendant_label(t) for t in g.labels]
    return Graph(2 * g.n, edges, labels)


# ---------------------------------------------------------------------------
# exact invariants

def _lowbit(x: int) -> int:
    return (x & -x).bit_length() - 1


def _iter_bits(x: int):
    while x:
        low = x & -x
        yield low.bit_length() - 1
        x ^= low


def _color_sort(cand: int, adj: Sequence[int]) -> tuple[list[int], list[int]]:
    """Greedy colouring of ``cand``; returns vertices with their colour bound."""
    order, bounds = [], []
    color = 0
    rest = cand
    while rest:
        color += 1
        q = rest
        while q:
            v = _lowbit(q)
            q &= ~adj[v] & ~(1 << v)
            rest &= ~(1 << v)
            order.append(v)
            bounds.append(color)
    return order, bounds


def _max_clique_bits(n: int, adj: Sequence[int], budget: Budget) -> list[int]:
    best: list[int] = []
    clique: list[int] = []

    def expand(cand: int) -> None:
        budget.tick()
        order, bounds = _color_sort(cand, adj)
        for i in range(len(order) - 1, -1, -1):
            if len(clique) + bounds[i] <= len(best):
                return
            v = order[i]
            clique.append(v)
            sub = cand & adj[v]
            if sub:
                expand(sub)
            elif len(clique) > len(best):
                best[:] = clique
            clique.pop()
            cand &= ~(1 << v)

    if n:
        expand((1 << n) - 1)
    return sorted(best)


def max_clique(g: Graph, budget_ms: int | None = None) -> list[int]:
    """A maximum clique, by colour-bounded branch and bound."""
    return _max_clique_bits(g.n, g.adj_bits, Budget.coerce(budget_ms))


def clique_number(g: Graph, budget_ms: int | None = None) -> int:
    return len(max_clique(g, budget_ms))


def independence_number(g: Graph, budget_ms: int | None = None) -> int:
    return clique_number(complement(g), budget_ms)


def _dsatur_greedy(g: Graph, fixed: dict[int, int]) -> list[int]:
    colors = [-1] * g.n
    for v, c in fixed.items():
        colors[v] = c
    for _ in range(g.n - len(fixed)):
        best, key = -1, None
        for v in range(g.n):
            if colors[v] < 0:
                sat = len({colors[w] for w in g.adj[v] if colors[w] >= 0})
                k = (sat, len(g.adj[v]), -v)
                if key is None or k > key:
                    best, key = v, k
        used = {colors[w] for w in g.adj[best]}
        c = 0
        while c in used:
            c += 1
        colors[best] = c
    return colors


def optimal_coloring(g: Graph, budget_ms: int | None = None) -> list[int]:
    """Proper colouring with exactly chi(g) colours (DSATUR branch and bound).

    A maximum clique is precoloured ``0..w-1``, which both breaks colour
    symmetry and supplies the lower bound.
    """
    budget = Budget.coerce(budget_ms)
    if g.n == 0:
        return []
    clique = _max_clique_bits(g.n, g.adj_bits, budget)
    lower = len(clique)
    fixed = {v: i for i, v in enumerate(clique)}
    best = _dsatur_greedy(g, fixed)
    best_k = max(best) + 1
    if best_k == lower:
        return best

    n = g.n
    adj = [sorted(a) for a in g.adj]
    colors = [-1] * n
    # count[v][c] = number of neighbours of v coloured c
    count = [[0] * n for _ in range(n)]
    sat = [0] * n

    def assign(v, c):
        colors[v] = c
        for w in adj[v]:
            if count[w][c] == 0:
                sat[w] += 1
            count[w][c] += 1

    def unassign(v, c):
        colors[v] = -1
        for w in adj[v]:
            count[w][c] -= 1
            if count[w][c] == 0:
                sat[w] -= 1

    for v, c in fixed.items():
        assign(v, c)

    def search(n_colored: int, used: int) -> bool:
        nonlocal best, best_k
        budget.tick()
        if n_colored == n:
            best, best_k = list(colors), used
            return used == lower
        v, key = -1, None
        for u in range(n):
            if colors[u] < 0:
                k = (sat[u], len(adj[u]))
                if key is None or k > key:
                    v, key = u, k
        for c in range(used + 1):
            if c >= best_k - 1:
                break
            if count[v][c]:
                continue
            assign(v, c)
            done = search(n_colored + 1, max(used, c + 1))
            unassign(v, c)
            if done:
                return True
        return False

    search(len(fixed), lower)
    return best


def chromatic_number(g: Graph, budget_ms: int | None = None) -> int:
    coloring = optimal_coloring(g, budget_ms)
    return max(coloring) + 1 if coloring else 0


# ---------------------------------------------------------------------------
# induced cycles and Berge checking

def contains_induced_cycle(g: Graph, k: int, budget_ms: int | None = None) -> list[int] | None:
    """Vertex sequence of an induced ``k``-cycle, or ``None``.

    The cycle is grown as an induced path from its smallest vertex.
    """
    if k < 3:
        raise ValueError("cycle length must be at least 3")
    budget = Budget.coerce(budget_ms)
    adj = g.adj_bits
    n = g.n
    path: list[int] = []

    def extend(forbidden: int, allowed: int) -> bool:
        # forbidden: vertices adjacent to some interior path vertex (or on the path)
        budget.tick()
        last = path[-1]
        i = len(path)
        cand = adj[last] & allowed & ~forbidden
        if i == k - 1:
            cand &= adj[path[0]]
            cand &= ~((1 << (path[1] + 1)) - 1)  # reversal symmetry: path[1] < path[-1]
            if cand:
                path.append(_lowbit(cand))
                return True
            return False
        if i >= 2:
            cand &= ~adj[path[0]]
        for v in _iter_bits(cand):
            path.append(v)
            # last becomes interior once v is appended
            nf = forbidden | (1 << v) | (adj[last] if i >= 2 else 0)
            if extend(nf, allowed):
                return True
            path.pop()
        return False

    for s in range(n):
        allowed = ~((1 << (s + 1)) - 1) & ((1 << n) - 1)
        path[:] = [s]
        if extend(1 << s, allowed):
            return list(path)
    return None


class BergeResult(NamedTuple):
    is_berge: bool
    witness: list[int] | None
    in_complement: bool


def is_berge_bruteforce(g: Graph, budget_ms: int | None = None) -> BergeResult:
    """Search for an odd hole (in ``g``) or odd antihole (hole of the complement)."""
    budget = Budget.coerce(budget_ms)
    co = complement(g)
    for k in range(5, g.n + 1, 2):
        for h, flag in ((g, False), (co, True)):
            cyc = contains_induced_cycle(h, k, budget)
            if cyc is not None:
                return BergeResult(False, cyc, flag)
    return BergeResult(True, None, False)


# ---------------------------------------------------------------------------
# text format

def write_graph(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(f"{u} {v}" for u, v in g.edges)
    if g.labels is not None:
        lines.append("# labels")
        lines.extend(g.labels)
    return "\n".join(lines) + "\n"


def _ints(line: str, lineno: int, count: int) -> list[int]:
    parts = line.split()
    if len(parts) != count:
        raise FormatError(lineno, f"expected {count} integers, got {line!r}")
    try:
        return [int(p) for p in parts]
    except ValueError:
        raise FormatError(lineno, f"expected integers, got {line!r}") from None


def read_graph(text: str) -> Graph:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError(1, "empty graph file")
    n, m = _ints(lines[0], 1, 2)
    if len(lines) < 1 + m:
        raise FormatError(len(lines) + 1, f"expected {m} edge lines")
    edges = []
    for i in range(m):
        u, v = _ints(lines[1 + i], 2 + i, 2)
        if not (0 <= u < v < n):
            raise FormatError(2 + i, f"edge ({u}, {v}) must satisfy 0 <= u < v < {n}")
        edges.append((u, v))
    labels = None
    rest = lines[1 + m:]
    if rest:
        if rest[0] != "# labels":
            raise FormatError(2 + m, "expected '# labels' or end of file")
        labels = rest[1:]
        if len(labels) != n:
            raise FormatError(3 + m + len(labels), f"expected {n} labels, got {len(labels)}")
    if len(set(edges)) != len(edges):
        raise FormatError(2, "duplicate edge")
    try:
        return Graph(n, edges, labels)
    except ValueError as exc:
        raise FormatError(2 + m, str(exc)) from None
