"""Graph families and seeded random instances.

All randomness comes from :class:`XorShift64Star`, a fully specified 64-bit
generator, so that a seed reproduces the same instance byte for byte in any
implementation of the same algorithm:

* seeding: ``state = splitmix64(seed)``, replaced by ``0x9E3779B97F4A7C15`` if zero;
* step: ``s ^= s >> 12; s ^= s << 25; s ^= s >> 27`` (mod 2**64);
* output: ``s * 0x2545F4914F6CDD1D`` (mod 2**64);
* ``below(n)``: rejection sampling on outputs below ``(2**64 // n) * n``, then ``% n``;
* ``random()``: ``(output >> 11) / 2**53``; ``bernoulli(p)`` is ``random() < p``;
* ``shuffle``: Fisher-Yates from the last index down, ``j = below(i + 1)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations

from .graph import FormatError, Graph, attach_pendants, cartesian_product, complement, complete_graph

MASK64 = (1 << 64) - 1


def splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & MASK64
    return x ^ (x >> 31)


class XorShift64Star:
    def __init__(self, seed: int):
        self.state = splitmix64(seed & MASK64) or 0x9E3779B97F4A7C15

    def next_u64(self) -> int:
        s = self.state
        s ^= s >> 12
        s ^= (s << 25) & MASK64
        s ^= s >> 27
        self.state = s
        return (s * 0x2545F4914F6CDD1D) & MASK64

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        limit = ((1 << 64) // n) * n
        while True:
            r = self.next_u64()
            if r < limit:
                return r % n

    def random(self) -> float:
        return (self.next_u64() >> 11) / float(1 << 53)

    def bernoulli(self, p: float) -> bool:
        return self.random() < p

    def shuffle(self, items: list) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


# ---------------------------------------------------------------------------
# structure records

@dataclass
class IntervalSystem:
    intervals: list[tuple[Fraction, Fraction]]
    unit: bool = False

    def __post_init__(self):
        self.intervals = [(Fraction(a), Fraction(b)) for a, b in self.intervals]
        self.check()

    def check(self) -> None:
        for k, (a, b) in enumerate(self.intervals):
            if a > b:
                raise ValueError(f"interval {k} = [{a}, {b}] has a > b")
            if self.unit and b - a != 1:
                raise ValueError(f"interval {k} = [{a}, {b}] is not of unit length")

    def __len__(self):
        return len(self.intervals)


DIRECT = "direct"
COMPLEMENTED = "complemented"


@dataclass
class GSPStructure:
    """``V1`` plus the cliques partitioning ``V2``, for ``g`` (direct) or its complement."""

    side: str
    v1: frozenset[int]
    cliques: list[frozenset[int]]

    def check(self, g: Graph) -> None:
        """Raise ``ValueError`` naming the first violated invariant."""
        if self.side not in (DIRECT, COMPLEMENTED):
            raise ValueError(f"unknown side {self.side!r}")
        seen = set(self.v1)
        for c in self.cliques:
            if not c:
                raise ValueError("empty clique in V2")
            if seen & c:
                raise ValueError(f"vertices {sorted(seen & c)} listed twice")
            seen |= c
        if seen != set(range(g.n)):
            raise ValueError("V1 and the cliques do not partition the vertex set")
        h = g if self.side == DIRECT else complement(g)
        for u, v in combinations(sorted(self.v1), 2):
            if not h.has_edge(u, v):
                raise ValueError(f"V1 is not complete: {u} and {v} are non-adjacent")
        where = {v: i for i, c in enumerate(self.cliques) for v in c}
        for u, v in h.edges:
            if u in where and v in where and where[u] != where[v]:
                raise ValueError(f"edge ({u}, {v}) joins distinct V2 cliques")
        for c in self.cliques:
            for u, v in combinations(sorted(c), 2):
                if not h.has_edge(u, v):
                    raise ValueError(f"V2 clique is not complete: {u} and {v} are non-adjacent")


@dataclass
class SubtreeFamily:
    tree: Graph
    root: int
    subtrees: list[frozenset[int]]

    def __post_init__(self):
        self.subtrees = [frozenset(s) for s in self.subtrees]
        self.check()

    def check(self) -> None:
        t = self.tree
        if t.n == 0 or t.m != t.n - 1 or not _connected(t, range(t.n)):
            raise ValueError("tree must be connected and acyclic")
        if not 0 <= self.root < t.n:
            raise ValueError(f"root {self.root} is not a tree vertex")
        for k, s in enumerate(self.subtrees):
            if not s or not s <= set(range(t.n)):
                raise ValueError(f"subtree {k} is empty or has foreign vertices")
            if not _connected(t, s):
                raise ValueError(f"subtree {k} is not connected")


def _connected(g: Graph, vertices) -> bool:
    vs = set(vertices)
    if not vs:
        return False
    start = min(vs)
    seen = {start}
    stack = [start]
    while stack:
        u = stack.pop()
        for w in g.adj[u]:
            if w in vs and w not in seen:
                seen.add(w)
                stack.append(w)
    return seen == vs


# ---------------------------------------------------------------------------
# deterministic families

def intervals_intersect(p, q) -> bool:
    return max(p[0], q[0]) <= min(p[1], q[1])


def gen_from_intervals(s: IntervalSystem) -> Graph:
    """Intersection graph of closed intervals; touching intervals are adjacent."""
    iv = s.intervals
    edges = [(a, b) for a, b in combinations(range(len(iv)), 2) if intervals_intersect(iv[a], iv[b])]
    return Graph(len(iv), edges)


def gn_intervals(n: int) -> list[tuple[int, int]]:
    return [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]


def gen_interval_graph_Gn(n: int) -> tuple[Graph, IntervalSystem]:
    """Intersection graph of all intervals ``[i, j]``, ``1 <= i < j <= n``."""
    if n < 2:
        raise ValueError("G_n needs n >= 2")
    iv = gn_intervals(n)
    system = IntervalSystem(iv)
    g = gen_from_intervals(system)
    return Graph(g.n, g.edges, [f"ivl_{i}_{j}" for i, j in iv]), system


def gen_double_shift(n: int) -> Graph:
    """Double shift graph: triples ``i<j<k``; ``(i,j,k) ~ (j,k,l)``."""
    if n <= 3:
        raise ValueError("the double shift graph needs n > 3")
    triples = list(combinations(range(1, n + 1), 3))
    index = {t: v for v, t in enumerate(triples)}
    edges = []
    for v, (i, j, k) in enumerate(triples):
        for l in range(k + 1, n + 1):
            edges.append((v, index[(j, k, l)]))
    edges.sort()
    return Graph(len(triples), edges, [f"tri_{i}_{j}_{k}" for i, j, k in triples])


def gen_H(rows: int, cols: int) -> Graph:
    """``K_rows x K_cols`` with a pendant edge at every vertex.

    Vertex ``v_{i,j}`` (``1 <= i <= rows``, ``1 <= j <= cols``) is numbered
    ``(i-1)*cols + (j-1)``; its pendant ``w_{i,j}`` is that number plus
    ``rows*cols``.
    """
    if rows < 1 or cols < 1:
        raise ValueError("rows and cols must be positive")
    k = cartesian_product(complete_graph(rows), complete_graph(cols))
    labels = [f"v_{i}_{j}" for i in range(1, rows + 1) for j in range(1, cols + 1)]
    return attach_pendants(Graph(k.n, k.edges, labels))


# ---------------------------------------------------------------------------
# seeded random families

def gen_gsp(n: int, seed: int, side: str = DIRECT) -> tuple[Graph, GSPStructure]:
    """Random GSP graph with its structure record.

    ``|V1|`` is uniform on ``0..n``; the remaining (shuffled) vertices are cut
    into consecutive cliques of uniform random size; every ``V1``-``V2`` pair is
    an edge with probability 1/2.
    """
    if n < 1:
        raise ValueError("n must be positive")
    if side not in (DIRECT, COMPLEMENTED):
        raise ValueError(f"unknown side {side!r}")
    rng = XorShift64Star(seed)
    order = list(range(n))
    rng.shuffle(order)
    k1 = rng.below(n + 1)
    v1 = frozenset(order[:k1])
    rest = order[k1:]
    cliques = []
    while rest:
        size = 1 + rng.below(len(rest))
        cliques.append(frozenset(rest[:size]))
        rest = rest[size:]
    edges = set()
    for c in [v1, *cliques]:
        edges.update(combinations(sorted(c), 2))
    v2 = sorted(set(range(n)) - v1)
    for u in sorted(v1):
        for w in v2:
            if rng.bernoulli(0.5):
                edges.add((u, w) if u < w else (w, u))
    g = Graph(n, sorted(edges))
    if side == COMPLEMENTED:
        g = complement(g)
    s = GSPStructure(side, v1, cliques)
    s.check(g)
    return g, s


def gen_random_bipartite(a: int, b: int, p: float, seed: int) -> tuple[Graph, tuple[frozenset, frozenset]]:
    """Sides ``0..a-1`` and ``a..a+b-1``; pairs drawn in row-major order."""
    rng = XorShift64Star(seed)
    edges = [(u, a + w) for u in range(a) for w in range(b) if rng.bernoulli(p)]
    return Graph(a + b, edges), (frozenset(range(a)), frozenset(range(a, a + b)))


def gen_random_unit_intervals(count: int, span: int, seed: int) -> IntervalSystem:
    """Unit intervals with left endpoints drawn from ``{0, 0.01, ..., span - 0.01}``."""
    rng = XorShift64Star(seed)
    lefts = [Fraction(rng.below(span * 100), 100) for _ in range(count)]
    return IntervalSystem([(a, a + 1) for a in lefts], unit=True)


def gen_random_tree(size: int, rng: XorShift64Star) -> Graph:
    """Random recursive tree: vertex ``v`` hangs below ``below(v)``."""
    edges = [(rng.below(v), v) for v in range(1, size)]
    return Graph(size, sorted(edges))


def grow_subtree(tree: Graph, rng: XorShift64Star) -> frozenset[int]:
    start = rng.below(tree.n)
    target = 1 + rng.below(tree.n)
    members = {start}
    frontier = sorted(tree.adj[start])
    while len(members) < target and frontier:
        v = frontier.pop(rng.below(len(frontier)))
        members.add(v)
        frontier = sorted(set(frontier) | {w for w in tree.adj[v] if w not in members})
    return frozenset(members)


def gen_random_subtree_family(tree_size: int, family_size: int, seed: int) -> SubtreeFamily:
    rng = XorShift64Star(seed)
    tree = gen_random_tree(tree_size, rng)
    root = rng.below(tree_size)
    subtrees = [grow_subtree(tree, rng) for _ in range(family_size)]
    return SubtreeFamily(tree, root, subtrees)


# ---------------------------------------------------------------------------
# text formats

def format_decimal(x: Fraction) -> str:
    """Exact decimal text for a rational whose denominator divides a power of ten."""
    x = Fraction(x)
    sign = "-" if x < 0 else ""
    x = abs(x)
    whole, rem = divmod(x.numerator, x.denominator)
    digits = []
    seen = 0
    while rem:
        rem *= 10
        d, rem = divmod(rem, x.denominator)
        digits.append(str(d))
        seen += 1
        if seen > 64:
            raise ValueError(f"{x} has no finite decimal expansion")
    return sign + str(whole) + ("." + "".join(digits) if digits else "")


def write_intervals(s: IntervalSystem) -> str:
    return "".join(f"{format_decimal(a)} {format_decimal(b)}\n" for a, b in s.intervals)


def read_intervals(text: str) -> IntervalSystem:
    """Parse ``a b`` lines; the unit flag is set when every length is exactly 1."""
    iv = []
    for lineno, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(lineno, f"expected 'a b', got {line!r}")
        try:
            a, b = Fraction(parts[0]), Fraction(parts[1])
        except ValueError:
            raise FormatError(lineno, f"not a rational number: {line!r}") from None
        if a > b:
            raise FormatError(lineno, "interval with a > b")
        iv.append((a, b))
    return IntervalSystem(iv, unit=bool(iv) and all(b - a == 1 for a, b in iv))


def write_subtree_family(f: SubtreeFamily) -> str:
    from .graph import write_graph

    out = write_graph(f.tree) + f"root {f.root}\n"
    out += "".join(" ".join(str(v) for v in sorted(s)) + "\n" for s in f.subtrees)
    return out


def read_subtree_family(text: str) -> SubtreeFamily:
    from .graph import read_graph

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    try:
        n, m = (int(x) for x in lines[0].split())
    except (ValueError, IndexError):
        raise FormatError(1, "expected 'n m'") from None
    end = 1 + m
    if end < len(lines) and lines[end] == "# labels":
        end += 1 + n
    tree = read_graph("\n".join(lines[:end]) + "\n")
    if end >= len(lines) or not lines[end].startswith("root "):
        raise FormatError(end + 1, "expected 'root r'")
    try:
        root = int(lines[end].split()[1])
    except (ValueError, IndexError):
        raise FormatError(end + 1, "bad root line") from None
    subtrees = []
    for k, line in enumerate(lines[end + 1:], end + 2):
        try:
            subtrees.append(frozenset(int(x) for x in line.split()))
        except ValueError:
            raise FormatError(k, f"expected vertex IDs, got {line!r}") from None
    try:
        return SubtreeFamily(tree, root, subtrees)
    except ValueError as exc:
        raise FormatError(end + 1, str(exc)) from None
