"""``compart`` command line.

Exit codes: 0 valid/sat, 1 invalid/unsat, 2 timeout, 3 usage or I/O error.
"""

from __future__ import annotations

import argparse
import re
import sys
from pathlib import Path

from .budget import default_budget_ms
from .comparability import COVER, PARTITION, read_certificate, verify_partition, write_certificate
from .generators import (
    COMPLEMENTED,
    DIRECT,
    GSPStructure,
    gen_double_shift,
    gen_gsp,
    gen_H,
    gen_interval_graph_Gn,
    gen_random_bipartite,
    gen_random_subtree_family,
    gen_random_unit_intervals,
    read_intervals,
    read_subtree_family,
    write_intervals,
    write_subtree_family,
)
from .graph import FormatError, Graph, read_graph, write_graph
from .partitioners import (
    partition_alpha_comparability,
    partition_bipartite_log_omega,
    partition_by_color_bits,
    partition_gsp,
    partition_Gn_recursive,
    partition_H,
    partition_lbip,
    partition_unit_interval,
)
from .sat import SAT, TIMEOUT, UNSAT
from .shift import bound_report, cover_to_coloring, shift_graph, verify_proper, write_coloring
from .solver import decide_partition, exact_c, exact_p
from .subtrees import partition_subtree_disjointness, psi_labeling, write_psi

EXIT_OK, EXIT_FAIL, EXIT_TIMEOUT, EXIT_USAGE = 0, 1, 2, 3

FAMILIES = ("gn", "shift", "h", "gsp", "bipartite", "unit-intervals", "subtrees")
ALGORITHMS = ("gsp", "lbip", "unit-interval", "gn", "color-bits", "omega-bits", "alpha-cliques", "subtree", "h")
RANDOM_FAMILIES = {"gsp", "bipartite", "unit-intervals", "subtrees"}


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _write(path: str, text: str) -> None:
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    except OSError as exc:
        raise UsageError(f"cannot write {path}: {exc.strerror}") from None


def _int_params(params, names) -> list[int]:
    if len(params) != len(names):
        raise UsageError(f"expected parameters: {' '.join(names)}")
    try:
        return [int(x) for x in params]
    except ValueError:
        raise UsageError(f"parameters must be integers: {' '.join(params)}") from None


# ---------------------------------------------------------------------------
# gen


def gsp_labels(s: GSPStructure, n: int) -> list[str]:
    """Structure record carried in the label block: ``<side>_v1_<v>`` or ``<side>_c<k>_<v>``."""
    tag = "d" if s.side == DIRECT else "c"
    labels = [f"{tag}_v1_{v}" for v in range(n)]
    for k, c in enumerate(s.cliques):
        for v in c:
            labels[v] = f"{tag}_c{k}_{v}"
    return labels


def gsp_structure_from_labels(g: Graph) -> GSPStructure:
    if g.labels is None:
        raise UsageError("gsp partition needs the structure labels written by 'gen gsp'")
    sides = set()
    v1, cliques = set(), {}
    for v, lab in enumerate(g.labels):
        m = re.fullmatch(r"([dc])_(v1|c(\d+))_\d+", lab)
        if m is None:
            raise UsageError(f"vertex {v} has label {lab!r}, not a gsp structure label")
        sides.add(m[1])
        if m[2] == "v1":
            v1.add(v)
        else:
            cliques.setdefault(int(m[3]), set()).add(v)
    if len(sides) != 1:
        raise UsageError("mixed gsp side labels")
    side = DIRECT if sides.pop() == "d" else COMPLEMENTED
    return GSPStructure(side, frozenset(v1), [frozenset(cliques[k]) for k in sorted(cliques)])


def cmd_gen(args) -> int:
    fam, params = args.family, args.params
    if fam in RANDOM_FAMILIES and args.seed is None:
        raise UsageError(f"family {fam} is random and needs an explicit --seed")
    if fam == "gn":
        (n,) = _int_params(params, ["N"])
        text = write_graph(gen_interval_graph_Gn(n)[0])
    elif fam == "shift":
        (n,) = _int_params(params, ["N"])
        text = write_graph(gen_double_shift(n))
    elif fam == "h":
        rows, cols = _int_params(params, ["ROWS", "COLS"])
        text = write_graph(gen_H(rows, cols))
    elif fam == "gsp":
        (n,) = _int_params(params, ["N"])
        g, s = gen_gsp(n, args.seed, COMPLEMENTED if args.complemented else DIRECT)
        text = write_graph(Graph(g.n, g.edges, gsp_labels(s, g.n)))
    elif fam == "bipartite":
        if len(params) != 3:
            raise UsageError("expected parameters: A B P")
        a, b = _int_params(params[:2], ["A", "B"])
        try:
            p = float(params[2])
        except ValueError:
            raise UsageError("P must be a number") from None
        g, _ = gen_random_bipartite(a, b, p, args.seed)
        labels = [f"a_{v}" for v in range(a)] + [f"b_{v - a}" for v in range(a, a + b)]
        text = write_graph(Graph(g.n, g.edges, labels))
    elif fam == "unit-intervals":
        count, span = _int_params(params, ["COUNT", "SPAN"])
        text = write_intervals(gen_random_unit_intervals(count, span, args.seed))
    else:
        tree_size, family_size = _int_params(params, ["TREE_SIZE", "FAMILY_SIZE"])
        text = write_subtree_family(gen_random_subtree_family(tree_size, family_size, args.seed))
    _write(args.output, text)
    return EXIT_OK


# ---------------------------------------------------------------------------
# partition


def _bipartition_of(h: Graph):
    if h.labels is not None and all(re.fullmatch(r"[ab]_\d+", x) for x in h.labels):
        side_a = [v for v in range(h.n) if h.labels[v].startswith("a")]
        return side_a, [v for v in range(h.n) if h.labels[v].startswith("b")]
    colour = [-1] * h.n
    for s in range(h.n):
        if colour[s] >= 0:
            continue
        colour[s] = 0
        stack = [s]
        while stack:
            u = stack.pop()
            for w in h.adj[u]:
                if colour[w] < 0:
                    colour[w] = 1 - colour[u]
                    stack.append(w)
                elif colour[w] == colour[u]:
                    raise UsageError("lbip input is not bipartite")
    return [v for v in range(h.n) if colour[v] == 0], [v for v in range(h.n) if colour[v] == 1]


def _gn_order(g: Graph) -> int:
    n = 1
    while n * (n - 1) // 2 < g.n:
        n += 1
    if n * (n - 1) // 2 != g.n or g != gen_interval_graph_Gn(n)[0]:
        raise UsageError("input is not a G_n graph as written by 'gen gn'")
    return n


def _h_shape(g: Graph) -> tuple[int, int]:
    if g.labels is None:
        raise UsageError("h partition needs the labels written by 'gen h'")
    cells = [re.fullmatch(r"v_(\d+)_(\d+)", x) for x in g.labels]
    cells = [(int(m[1]), int(m[2])) for m in cells if m]
    if not cells:
        raise UsageError("no v_i_j labels found")
    rows, cols = max(i for i, _ in cells), max(j for _, j in cells)
    if g != gen_H(rows, cols):
        raise UsageError(f"input is not gen_H({rows}, {cols})")
    return rows, cols


def cmd_partition(args) -> int:
    algo = args.algorithm
    text = _read(args.input)
    derived = algo in ("lbip", "unit-interval", "subtree")
    budget = args.budget_ms
    if algo == "unit-interval":
        g, ep, _ = partition_unit_interval(read_intervals(text))
    elif algo == "subtree":
        fam = read_subtree_family(text)
        g, ep, _ = partition_subtree_disjointness(fam)
        if args.dump_psi:
            _write(args.dump_psi, write_psi(psi_labeling(fam.tree, fam.root)))
    else:
        g = read_graph(text)
        if algo == "lbip":
            g, ep = partition_lbip(g, _bipartition_of(g))
        elif algo == "gsp":
            ep = partition_gsp(g, gsp_structure_from_labels(g))
        elif algo == "gn":
            ep = partition_Gn_recursive(_gn_order(g), g)
        elif algo == "h":
            ep = partition_H(*_h_shape(g), g)
        elif algo == "color-bits":
            ep = partition_by_color_bits(g, budget)
        elif algo == "omega-bits":
            ep = partition_bipartite_log_omega(g, budget)
        else:
            ep = partition_alpha_comparability(g, budget)
    if args.dump_psi and algo != "subtree":
        raise UsageError("--dump-psi only applies to the subtree algorithm")
    if derived:
        _write(args.graph_out or args.output + ".graph", write_graph(g))
    elif args.graph_out:
        _write(args.graph_out, write_graph(g))
    try:
        ep = ep.certified(g)
    except ValueError as exc:
        print(f"self-verification failed: {exc}")
        return EXIT_FAIL
    _write(args.output, write_certificate(g, ep))
    report = verify_partition(g, ep)
    print("\n".join(report.lines()))
    return EXIT_OK if report.valid else EXIT_FAIL


def cmd_verify(args) -> int:
    g = read_graph(_read(args.graph))
    ep = read_certificate(_read(args.cert))
    try:
        report = verify_partition(g, ep)
    except ValueError as exc:
        print(f"valid no\n{exc}")
        return EXIT_FAIL
    print("\n".join(report.lines()))
    return EXIT_OK if report.valid else EXIT_FAIL


# ---------------------------------------------------------------------------
# solve, reduce, sweep


def cmd_solve(args) -> int:
    g = read_graph(_read(args.input))
    budget = args.budget_ms if args.budget_ms is not None else default_budget_ms()
    what = args.what
    if what in ("p", "c"):
        res = (exact_p if what == "p" else exact_c)(g, budget)
        if res.status == TIMEOUT:
            print(f"timeout lower {res.lower} upper {res.upper} nodes {res.nodes} elapsed_ms {res.elapsed_ms:.0f}")
            return EXIT_TIMEOUT
        print(res.value)
        if args.output and res.partition is not None:
            _write(args.output, write_certificate(g, res.partition))
        return EXIT_OK
    m = re.fullmatch(r"t=(\d+)", what)
    if m is None or int(m[1]) < 1:
        raise UsageError(f"solve target must be p, c or t=K with K >= 1, got {what!r}")
    res = decide_partition(g, int(m[1]), args.mode, budget)
    print(f"{res.status} nodes {res.nodes} elapsed_ms {res.elapsed_ms:.0f}")
    if res.status == SAT:
        if args.output:
            _write(args.output, write_certificate(g, res.partition))
        return EXIT_OK
    return EXIT_FAIL if res.status == UNSAT else EXIT_TIMEOUT


def cmd_reduce(args) -> int:
    n = args.n
    g, _ = gen_interval_graph_Gn(n)
    ep = read_certificate(_read(args.cert))
    try:
        coloring = cover_to_coloring(n, ep, g)
    except ValueError as exc:
        print(f"rejected: {exc}")
        return EXIT_FAIL
    s = shift_graph(n, args.cap)
    ok, bad = verify_proper(s, coloring)
    if args.output:
        _write(args.output, write_coloring(n, coloring))
    if not ok:
        print(f"improper colouring on edge {bad}")
        return EXIT_FAIL
    print(bound_report(n, len(ep.parts)).tsv())
    return EXIT_OK


def sweep_graphs(max_edges: int, max_vertices: int = 7):
    """Connected graphs from the networkx atlas with at least one and at most ``max_edges`` edges.

    Yields ``(atlas index, Graph)`` in atlas order.
    """
    import networkx as nx

    for idx, h in enumerate(nx.graph_atlas_g()):
        if h.number_of_nodes() > max_vertices or not 0 < h.number_of_edges() <= max_edges:
            continue
        if not nx.is_connected(h):
            continue
        yield idx, Graph(h.number_of_nodes(), sorted(tuple(sorted(e)) for e in h.edges()))


def cmd_sweep(args) -> int:
    budget = args.budget_ms if args.budget_ms is not None else default_budget_ms()
    total = timeouts = 0
    hits = []
    for idx, g in sweep_graphs(args.max_edges, args.max_vertices):
        total += 1
        p, c = exact_p(g, budget), exact_c(g, budget)
        if p.status == TIMEOUT or c.status == TIMEOUT:
            timeouts += 1
            print(f"atlas {idx}: timeout p in [{p.lower},{p.upper}] c in [{c.lower},{c.upper}]")
            continue
        if args.verbose:
            print(f"atlas {idx}: n={g.n} m={g.m} p={p.value} c={c.value}")
        if p.value > c.value:
            hits.append(idx)
            print(f"!!! p > c CANDIDATE: atlas graph {idx} edges {list(g.edges)} p={p.value} c={c.value}")
    print(f"graphs {total} timeouts {timeouts} p>c {len(hits)}")
    return EXIT_TIMEOUT if timeouts else EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="compart", description="comparability edge partitions and covers")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("gen", help="generate a graph family instance")
    p.add_argument("family", choices=FAMILIES)
    p.add_argument("params", nargs="*")
    p.add_argument("--seed", type=int)
    p.add_argument("--complemented", action="store_true", help="gsp: complemented side")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("partition", help="run a constructive partitioner")
    p.add_argument("algorithm", choices=ALGORITHMS)
    p.add_argument("-i", "--input", required=True)
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--graph-out", help="where to write the partitioned graph (default CERT.graph when derived)")
    p.add_argument("--dump-psi", help="subtree: write the psi labels here")
    p.add_argument("--budget-ms", type=int)
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("verify", help="check a certificate against a graph")
    p.add_argument("-g", "--graph", required=True)
    p.add_argument("-c", "--cert", required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("solve", help="exact p, c or a fixed part count")
    p.add_argument("what", help="p, c or t=K")
    p.add_argument("-i", "--input", required=True)
    p.add_argument("--mode", choices=(PARTITION, COVER), default=PARTITION)
    p.add_argument("--budget-ms", type=int)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("reduce", help="cover of G_n to a colouring of the double shift graph")
    p.add_argument("target", choices=("shift",))
    p.add_argument("-n", type=int, required=True)
    p.add_argument("-c", "--cert", required=True)
    p.add_argument("-o", "--output")
    p.add_argument("--cap", type=int, default=22)
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("sweep", help="compare p and c on all small connected graphs")
    p.add_argument("--max-edges", type=int, required=True)
    p.add_argument("--max-vertices", type=int, default=7)
    p.add_argument("--budget-ms", type=int)
    p.add_argument("-v", "--verbose", action="store_true")
    p.set_defaults(func=cmd_sweep)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FormatError as exc:
        print(f"format error: {exc}", file=sys.stderr)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
    return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
