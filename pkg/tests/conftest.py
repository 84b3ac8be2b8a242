"""Shared oracles: slow, obviously-correct reference implementations."""

from itertools import combinations, product

import networkx as nx
import pytest

from compart.graph import Graph


def brute_transitive_orientation_exists(g: Graph, part=None) -> bool:
    """Try all 2^m orientations of the edge subset."""
    part = sorted(range(g.m) if part is None else part)
    for bits in product((0, 1), repeat=len(part)):
        arcs = set()
        for e, b in zip(part, bits):
            u, v = g.edges[e]
            arcs.add((u, v) if b else (v, u))
        if all((a, c) in arcs for a, b in arcs for b2, c in arcs if b == b2 and a != c):
            return True
    return False


def brute_has_induced_cycle(g: Graph, k: int) -> bool:
    for sub in combinations(range(g.n), k):
        s = set(sub)
        if sum(1 for u, v in g.edges if u in s and v in s) != k:
            continue
        if all(len(g.adj[v] & s) == 2 for v in s) and nx.is_connected(
            nx.Graph([(u, v) for u, v in g.edges if u in s and v in s])
        ):
            return True
    return False


def is_induced_cycle(g: Graph, cyc) -> bool:
    k = len(cyc)
    if len(set(cyc)) != k:
        return False
    for i, j in combinations(range(k), 2):
        consecutive = (j - i) in (1, k - 1)
        if g.has_edge(cyc[i], cyc[j]) != consecutive:
            return False
    return True


def atlas_graphs(max_nodes: int, connected: bool = True, min_edges: int = 0):
    for idx, h in enumerate(nx.graph_atlas_g()):
        if h.number_of_nodes() > max_nodes or h.number_of_edges() < min_edges:
            continue
        if connected and (h.number_of_nodes() == 0 or not nx.is_connected(h)):
            continue
        yield idx, Graph(h.number_of_nodes(), sorted(tuple(sorted(e)) for e in h.edges()))


@pytest.fixture
def c5():
    from compart.graph import cycle_graph

    return cycle_graph(5)


# -- acceptance criteria report ---------------------------------------------------------

_CRITERIA = {}


def pytest_configure(config):
    config.addinivalue_line("markers", "criterion(k): acceptance criterion number k")


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    rep = outcome.get_result()
    mark = item.get_closest_marker("criterion")
    if mark is None or rep.when != "call" and not rep.failed:
        return
    k = mark.args[0]
    detail = "; ".join(str(v) for name, v in item.user_properties if name == "detail")
    ok = rep.passed and _CRITERIA.get(k, (True, ""))[0]
    _CRITERIA[k] = (ok, detail)


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(_CRITERIA):
        ok, detail = _CRITERIA[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}" + (f"  ({detail})" if detail else ""))
