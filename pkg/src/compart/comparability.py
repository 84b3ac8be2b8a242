"""Transitive orientations: recognition, verification and partition certificates.

Recognition follows the implication-class decomposition: orient one edge,
close under the forcing relation (``ab`` forces ``ab'`` when ``bb'`` is not an
edge, and ``ab`` forces ``a'b`` when ``aa'`` is not an edge), remove the class
and repeat on the remaining edges.  The assembled orientation is always
re-checked by :func:`verify_transitive_orientation`, which is the source of
truth.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

from .graph import FormatError, Graph

#: edge ID -> (tail, head)
Orientation = dict

PARTITION = "partition"
COVER = "cover"
MODES = (PARTITION, COVER)


def verify_transitive_orientation(g: Graph, part: Iterable[int], o: Orientation):
    """Check that ``o`` orients exactly ``part`` transitively.

    Returns ``(True, None)`` or ``(False, (u, v, w))`` where ``u -> v -> w`` is
    a directed path in ``o`` not closed by an arc ``u -> w`` of ``o``.
    Raises ``ValueError`` if ``o`` does not cover exactly ``part`` or an arc
    does not match its edge.
    """
    part = set(part)
    if set(o) != part:
        missing = sorted(part - set(o))
        extra = sorted(set(o) - part)
        raise ValueError(f"orientation covers the wrong edge set (missing {missing[:5]}, extra {extra[:5]})")
    out = {}
    arcs = set()
    for e, (t, h) in o.items():
        if not (0 <= e < g.m) or set(g.edges[e]) != {t, h}:
            raise ValueError(f"arc {t}->{h} does not match edge {e}")
        out.setdefault(t, []).append(h)
        arcs.add((t, h))
    inn = {}
    for t, h in arcs:
        inn.setdefault(h, []).append(t)
    for v in sorted(inn):
        for u in sorted(inn[v]):
            for w in sorted(out.get(v, ())):
                if (u, w) not in arcs:
                    return False, (u, v, w)
    return True, None


def _part_adjacency(g: Graph, part: Iterable[int]) -> dict[int, set[int]]:
    adj: dict[int, set[int]] = {}
    for e in part:
        u, v = g.edges[e]
        adj.setdefault(u, set()).add(v)
        adj.setdefault(v, set()).add(u)
    return adj


def find_transitive_orientation(g: Graph, part: Iterable[int] | None = None) -> Orientation | None:
    """Transitive orientation of the spanning subgraph ``(V(g), part)``, or ``None``."""
    part = sorted(range(g.m) if part is None else set(part))
    adj = _part_adjacency(g, part)
    remaining = set(part)
    o: Orientation = {}
    for start in part:
        if start not in remaining:
            continue
        u, v = g.edges[start]
        cls = {(u, v)}
        stack = [(u, v)]
        while stack:
            a, b = stack.pop()
            na, nb = adj[a], adj[b]
            forced = [(a, c) for c in na if c != b and c not in nb]
            forced += [(c, b) for c in nb if c != a and c not in na]
            for arc in forced:
                if arc not in cls:
                    if (arc[1], arc[0]) in cls:
                        return None
                    cls.add(arc)
                    stack.append(arc)
        for a, b in cls:
            o[g.edge_id(a, b)] = (a, b)
        for a, b in cls:
            adj[a].discard(b)
            adj[b].discard(a)
            remaining.discard(g.edge_id(a, b))
    ok, bad = verify_transitive_orientation(g, part, o)
    if not ok:
        raise RuntimeError(f"recognizer produced a non-transitive orientation at {bad}")
    return o


def is_comparability(g: Graph) -> bool:
    return find_transitive_orientation(g) is not None


@dataclass
class EdgePartition:
    """Edge-ID sets covering a graph, optionally with one orientation per part."""

    parts: list[frozenset[int]]
    mode: str = PARTITION
    orientations: list[Orientation] | None = None

    def __post_init__(self):
        if self.mode not in MODES:
            raise ValueError(f"unknown mode {self.mode!r}")
        self.parts = [frozenset(p) for p in self.parts]
        if any(not p for p in self.parts):
            raise ValueError("empty parts are not allowed")
        if self.orientations is not None and len(self.orientations) != len(self.parts):
            raise ValueError("one orientation per part is required")

    def __len__(self):
        return len(self.parts)

    @classmethod
    def from_parts(cls, parts, mode: str = PARTITION, orientations=None) -> "EdgePartition":
        """Build while dropping empty parts (and their orientations)."""
        keep = [i for i, p in enumerate(parts) if p]
        orients = None if orientations is None else [orientations[i] for i in keep]
        return cls([parts[i] for i in keep], mode, orients)

    def certified(self, g: Graph) -> "EdgePartition":
        """Copy with orientations filled in by the recognizer.

        Raises ``ValueError`` if some part is not a comparability graph.
        """
        if self.orientations is not None:
            return self
        orients = []
        for i, p in enumerate(self.parts):
            o = find_transitive_orientation(g, p)
            if o is None:
                raise ValueError(f"part {i} is not a comparability graph")
            orients.append(o)
        return EdgePartition(self.parts, self.mode, orients)


@dataclass
class PartitionReport:
    valid: bool
    num_parts: int
    uncovered: list[int] = field(default_factory=list)
    overlap: tuple[int, int, int] | None = None  # (edge, first part, second part)
    bad_part: int | None = None
    bad_detail: str | None = None

    def lines(self) -> list[str]:
        out = [f"parts {self.num_parts}", f"valid {'yes' if self.valid else 'no'}"]
        if self.uncovered:
            out.append(f"uncovered edges {len(self.uncovered)} first {self.uncovered[0]}")
        if self.overlap is not None:
            e, i, j = self.overlap
            out.append(f"edge {e} in parts {i} and {j}")
        if self.bad_part is not None:
            out.append(f"part {self.bad_part}: {self.bad_detail}")
        return out


def verify_partition(g: Graph, ep: EdgePartition) -> PartitionReport:
    """Check coverage, disjointness (partition mode) and comparability of every part.

    Attached orientations are checked with the verifier; parts without one go
    through the recognizer.  Raises ``ValueError`` on dangling edge IDs.
    """
    for i, p in enumerate(ep.parts):
        bad = [e for e in p if not (0 <= e < g.m)]
        if bad:
            raise ValueError(f"part {i} references edge IDs {sorted(bad)[:5]} outside [0, {g.m})")
    report = PartitionReport(valid=True, num_parts=len(ep.parts))
    owner: dict[int, int] = {}
    for i, p in enumerate(ep.parts):
        for e in sorted(p):
            if e in owner:
                if ep.mode == PARTITION and report.overlap is None:
                    report.overlap = (e, owner[e], i)
            else:
                owner[e] = i
    report.uncovered = [e for e in range(g.m) if e not in owner]
    for i, p in enumerate(ep.parts):
        if ep.orientations is not None:
            try:
                ok, bad = verify_transitive_orientation(g, p, ep.orientations[i])
            except ValueError as exc:
                ok, detail = False, str(exc)
            else:
                detail = None if ok else "orientation not transitive at %d->%d->%d" % bad
        else:
            ok = find_transitive_orientation(g, p) is not None
            detail = None if ok else "not a comparability graph"
        if not ok:
            report.bad_part, report.bad_detail = i, detail
            break
    report.valid = not report.uncovered and report.overlap is None and report.bad_part is None
    return report


# ---------------------------------------------------------------------------
# certificate text format

def write_certificate(g: Graph, ep: EdgePartition) -> str:
    ep = ep.certified(g)
    lines = [f"parts {len(ep.parts)} mode {ep.mode}"]
    for i, (p, o) in enumerate(zip(ep.parts, ep.orientations)):
        lines.append(f"part {i} size {len(p)}")
        lines.extend(f"{e} {o[e][0]} {o[e][1]}" for e in sorted(p))
    return "\n".join(lines) + "\n"


def read_certificate(text: str) -> EdgePartition:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise FormatError(1, "empty certificate")
    head = lines[0].split()
    if len(head) != 4 or head[0] != "parts" or head[2] != "mode" or head[3] not in MODES:
        raise FormatError(1, f"expected 'parts k mode partition|cover', got {lines[0]!r}")
    try:
        k = int(head[1])
    except ValueError:
        raise FormatError(1, "part count must be an integer") from None
    parts, orients = [], []
    pos = 1
    for i in range(k):
        if pos >= len(lines):
            raise FormatError(pos + 1, f"missing header for part {i}")
        h = lines[pos].split()
        if len(h) != 4 or h[0] != "part" or h[1] != str(i) or h[2] != "size":
            raise FormatError(pos + 1, f"expected 'part {i} size s', got {lines[pos]!r}")
        try:
            s = int(h[3])
        except ValueError:
            raise FormatError(pos + 1, "part size must be an integer") from None
        pos += 1
        o = {}
        for _ in range(s):
            if pos >= len(lines):
                raise FormatError(pos + 1, f"part {i} ends early")
            f = lines[pos].split()
            try:
                e, t, hd = (int(x) for x in f)
            except ValueError:
                raise FormatError(pos + 1, f"expected 'edgeID tail head', got {lines[pos]!r}") from None
            if e in o:
                raise FormatError(pos + 1, f"edge {e} repeated within part {i}")
            o[e] = (t, hd)
            pos += 1
        if not o:
            raise FormatError(pos, f"part {i} is empty")
        parts.append(frozenset(o))
        orients.append(o)
    if pos != len(lines):
        raise FormatError(pos + 1, "trailing content after last part")
    return EdgePartition(parts, head[3], orients)
