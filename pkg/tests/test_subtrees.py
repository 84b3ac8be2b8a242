from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from compart.comparability import is_comparability, verify_partition, verify_transitive_orientation
from compart.generators import SubtreeFamily, gen_random_subtree_family
from compart.graph import make_graph, path_graph
from compart.subtrees import (
    AFTER,
    BEFORE,
    INCOMPARABLE,
    PREC1,
    PREC2,
    _bfs,
    disjointness_graph,
    is_prefix,
    on_root_path,
    partition_subtree_disjointness,
    prec_lex,
    psi_labeling,
    subtree_root,
    write_psi,
)

STAR = make_graph(4, [(0, 1), (0, 2), (0, 3)])  # centre 0


def test_subtree_root_examples():
    f = SubtreeFamily(path_graph(3), 0, [{0, 1}, {1, 2}])
    assert subtree_root(f, 0) == 0
    assert subtree_root(f, 1) == 1


def test_psi_examples():
    assert psi_labeling(path_graph(3), 0) == {0: (), 1: (0,), 2: (0, 0)}
    assert psi_labeling(STAR, 0) == {0: (), 1: (0,), 2: (1,), 3: (2,)}
    assert write_psi(psi_labeling(path_graph(3), 0)) == "0: \n1: 0\n2: 0,0\n"


def test_prec_lex_examples():
    assert prec_lex((0,), (1,)) == BEFORE
    assert prec_lex((0,), (0, 0)) == INCOMPARABLE
    assert prec_lex((0, 2), (0, 1, 5)) == AFTER
    assert prec_lex((3,), (3,)) == INCOMPARABLE
    assert is_prefix((), (1, 2)) and not is_prefix((1,), (2, 1))


def test_partition_on_path_is_all_prec1():
    f = SubtreeFamily(path_graph(3), 0, [{0}, {1}, {2}])
    g, ep, order = partition_subtree_disjointness(f)
    assert g.m == 3 and order.tags == [PREC1] * 3
    assert len(ep) == 1


def test_partition_on_star_leaves_is_prec2():
    f = SubtreeFamily(STAR, 0, [{1}, {2}])
    g, ep, order = partition_subtree_disjointness(f)
    assert order.tags == [PREC2] and order.arcs == [(0, 1)]


@pytest.mark.parametrize("seed", range(12))
def test_subtree_roots_against_bfs(seed):
    f = gen_random_subtree_family(20, 15, seed)
    dist, _ = _bfs(f.tree, f.root)
    for k, s in enumerate(f.subtrees):
        r = subtree_root(f, k)
        assert r in s
        assert all(dist[v] > dist[r] for v in s if v != r)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**40), st.integers(1, 20))
def test_psi_prefix_iff_ancestor(seed, size):
    f = gen_random_subtree_family(size, 1, seed)
    psi = psi_labeling(f.tree, f.root)
    _, parent = _bfs(f.tree, f.root)
    for u in range(size):
        for v in range(size):
            assert is_prefix(psi[u], psi[v]) == on_root_path(parent, u, v)
    for v in range(size):
        if parent[v] >= 0:
            assert psi[v][:-1] == psi[parent[v]]


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 2**40), st.integers(1, 20), st.integers(1, 15))
def test_both_orders_are_transitive(seed, tree_size, family_size):
    f = gen_random_subtree_family(tree_size, family_size, seed)
    g, ep, order = partition_subtree_disjointness(f)
    assert g == disjointness_graph(f)
    assert len(order.tags) == g.m and len(ep) <= 2
    for part, o in zip(ep.parts, ep.orientations):
        assert verify_transitive_orientation(g, part, o)[0]
    assert verify_partition(g, ep).valid
    # prec1 tags agree with the root-path definition
    dist, parent = _bfs(f.tree, f.root)
    roots = [subtree_root(f, k) for k in range(len(f.subtrees))]
    for e, (i, j) in enumerate(g.edges):
        a, b = order.arcs[e]
        nested = on_root_path(parent, roots[a], roots[b])
        assert (order.tags[e] == PREC1) == (nested or on_root_path(parent, roots[b], roots[a]))
        if order.tags[e] == PREC1:
            assert nested


@pytest.mark.parametrize("seed", range(10))
def test_path_tree_disjointness_is_comparability(seed):
    # subtrees of a path are intervals; their disjointness graph orients left to right
    f = gen_random_subtree_family(12, 10, seed)
    f = SubtreeFamily(path_graph(12), 0, [_as_subpath(s) for s in f.subtrees])
    g, ep, _ = partition_subtree_disjointness(f)
    assert is_comparability(g)
    assert verify_partition(g, ep).valid


def _as_subpath(s):
    return set(range(min(s), max(s) + 1))


def test_disjointness_graph_definition():
    f = gen_random_subtree_family(15, 9, 5)
    g = disjointness_graph(f)
    for i, j in combinations(range(9), 2):
        assert g.has_edge(i, j) == (not f.subtrees[i] & f.subtrees[j])
