from fractions import Fraction
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from compart.comparability import is_comparability
from compart.generators import (
    COMPLEMENTED,
    DIRECT,
    IntervalSystem,
    SubtreeFamily,
    XorShift64Star,
    format_decimal,
    gen_double_shift,
    gen_from_intervals,
    gen_gsp,
    gen_H,
    gen_interval_graph_Gn,
    gen_random_bipartite,
    gen_random_subtree_family,
    gen_random_unit_intervals,
    gn_intervals,
    read_intervals,
    read_subtree_family,
    splitmix64,
    write_intervals,
    write_subtree_family,
)
from compart.graph import FormatError, Graph, complement, complete_graph, is_berge_bruteforce, path_graph


def test_prng_reference_values():
    # frozen outputs of the documented algorithm
    assert splitmix64(0) == 0xE220A8397B1DCDAF
    rng = XorShift64Star(42)
    assert [rng.next_u64() for _ in range(3)] == [0x31B0ECE7C4F697A2, 0x9008A3B1CB686F03, 0x7C7173ABD97BE16F]
    rng = XorShift64Star(42)
    assert [rng.below(1000) for _ in range(5)] == [842, 923, 559, 463, 2]


def test_prng_is_seed_deterministic_and_in_range():
    a, b = XorShift64Star(7), XorShift64Star(7)
    assert [a.below(10) for _ in range(50)] == [b.below(10) for _ in range(50)]
    rng = XorShift64Star(1)
    draws = [rng.below(6) for _ in range(600)]
    assert set(draws) == set(range(6))
    assert all(0 <= rng.random() < 1 for _ in range(100))
    with pytest.raises(ValueError):
        rng.below(0)


def test_shuffle_is_a_permutation():
    items = list(range(20))
    XorShift64Star(3).shuffle(items)
    assert sorted(items) == list(range(20)) and items != list(range(20))


# -- interval graphs ---------------------------------------------------------------


def test_gn_examples():
    g3, _ = gen_interval_graph_Gn(3)
    assert g3.edges == complete_graph(3).edges
    g4, s4 = gen_interval_graph_Gn(4)
    assert g4.n == 6
    iv = gn_intervals(4)
    assert not g4.has_edge(iv.index((1, 2)), iv.index((3, 4)))
    assert s4.intervals[0] == (1, 2)


@pytest.mark.parametrize("n", [2, 5, 7, 9])
def test_gn_matches_bruteforce_intersection(n):
    g, _ = gen_interval_graph_Gn(n)
    iv = gn_intervals(n)
    assert g.n == n * (n - 1) // 2
    expected = {(a, b) for a, b in combinations(range(g.n), 2) if max(iv[a][0], iv[b][0]) <= min(iv[a][1], iv[b][1])}
    assert set(g.edges) == expected
    assert g.labels[0] == "ivl_1_2"


def test_gen_from_intervals_examples():
    assert gen_from_intervals(IntervalSystem([(0, 1), (1, 2)])).m == 1
    assert gen_from_intervals(IntervalSystem([(0, 1), (2, 3)])).m == 0


def test_gen_from_intervals_against_oracle():
    rng = XorShift64Star(5)
    iv = []
    for _ in range(10):
        a = Fraction(rng.below(100), 10)
        iv.append((a, a + Fraction(rng.below(40), 10)))
    g = gen_from_intervals(IntervalSystem(iv))
    for u, v in combinations(range(10), 2):
        assert g.has_edge(u, v) == (max(iv[u][0], iv[v][0]) <= min(iv[u][1], iv[v][1]))


def test_interval_system_invariants():
    with pytest.raises(ValueError, match="a > b"):
        IntervalSystem([(2, 1)])
    with pytest.raises(ValueError, match="unit"):
        IntervalSystem([(0, 2)], unit=True)


# -- shift graph and H ---------------------------------------------------------------


def test_double_shift_examples():
    s4 = gen_double_shift(4)
    assert s4.n == 4 and s4.m == 1
    assert {s4.labels[u] for u in s4.edges[0]} == {"tri_1_2_3", "tri_2_3_4"}
    with pytest.raises(ValueError):
        gen_double_shift(3)


def test_double_shift_structure():
    s5 = gen_double_shift(5)
    triples = list(combinations(range(1, 6), 3))
    expected = set()
    for a, b in combinations(range(len(triples)), 2):
        x, y = triples[a], triples[b]
        if x[1:] == y[:2] or y[1:] == x[:2]:
            expected.add((a, b))
    assert set(s5.edges) == expected


def test_gen_H_examples():
    h = gen_H(9, 4)
    assert (h.n, h.m) == (72, 234)
    assert h.labels[0] == "v_1_1" and h.labels[36] == "w_1_1"
    assert h.has_edge(0, 36)
    one = gen_H(1, 1)
    assert (one.n, one.m) == (2, 1)


# -- GSP ----------------------------------------------------------------------------


def test_gsp_small_instance():
    g, s = gen_gsp(5, 1, DIRECT)
    s.check(g)
    assert all(g.has_edge(u, v) for u, v in combinations(sorted(s.v1), 2))


@pytest.mark.parametrize("seed", range(20))
def test_gsp_complemented_side(seed):
    g, s = gen_gsp(9, seed, COMPLEMENTED)
    s.check(g)
    co = complement(g)
    assert all(co.has_edge(u, v) for u, v in combinations(sorted(s.v1), 2))


@pytest.mark.parametrize("seed", range(8))
def test_gsp_instances_are_berge(seed):
    for side in (DIRECT, COMPLEMENTED):
        g, _ = gen_gsp(12, seed, side)
        assert is_berge_bruteforce(g).is_berge


def test_gsp_structure_check_names_violation():
    g, s = gen_gsp(8, 3, DIRECT)
    broken = Graph(g.n, [e for e in g.edges if e != g.edges[0]])
    with pytest.raises(ValueError):
        s.check(broken)


# -- other seeded families -------------------------------------------------------------


def test_random_family_examples():
    g, (a, b) = gen_random_bipartite(3, 3, 1.0, 11)
    assert g.m == 9 and a == {0, 1, 2} and b == {3, 4, 5}
    u = gen_random_unit_intervals(1, 10, 11)
    assert len(u) == 1 and u.unit and u.intervals[0][1] - u.intervals[0][0] == 1
    f = gen_random_subtree_family(1, 3, 11)
    assert f.subtrees == [frozenset({0})] * 3


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**63), st.integers(1, 20), st.integers(1, 15))
def test_subtree_families_satisfy_invariants(seed, tree_size, family_size):
    f = gen_random_subtree_family(tree_size, family_size, seed)
    f.check()
    assert f.tree.m == tree_size - 1 and len(f.subtrees) == family_size
    assert f == gen_random_subtree_family(tree_size, family_size, seed)


def test_subtree_family_rejects_disconnected_subtree():
    with pytest.raises(ValueError, match="not connected"):
        SubtreeFamily(path_graph(3), 0, [{0, 2}])


def test_interval_complements_comparability_property():
    for seed in range(10):
        u = gen_random_unit_intervals(12, 6, seed)
        assert is_comparability(complement(gen_from_intervals(u)))


# -- text formats ----------------------------------------------------------------------


def test_decimal_format():
    assert format_decimal(Fraction(3, 2)) == "1.5"
    assert format_decimal(Fraction(-1, 4)) == "-0.25"
    assert format_decimal(Fraction(7)) == "7"
    with pytest.raises(ValueError):
        format_decimal(Fraction(1, 3))


def test_interval_roundtrip_is_exact():
    u = gen_random_unit_intervals(30, 10, 9)
    text = write_intervals(u)
    back = read_intervals(text)
    assert back == u and back.unit
    assert write_intervals(back) == text
    mixed = read_intervals("0 1\n0.5 2.25\n")
    assert not mixed.unit and mixed.intervals[1] == (Fraction(1, 2), Fraction(9, 4))


def test_interval_format_errors():
    with pytest.raises(FormatError) as info:
        read_intervals("0 1\n1 x\n")
    assert info.value.lineno == 2
    with pytest.raises(FormatError):
        read_intervals("2 1\n")


def test_subtree_family_roundtrip():
    f = gen_random_subtree_family(12, 6, 4)
    text = write_subtree_family(f)
    assert read_subtree_family(text) == f
    assert write_subtree_family(read_subtree_family(text)) == text


def test_seeded_generation_is_byte_identical():
    assert write_intervals(gen_random_unit_intervals(20, 5, 77)) == write_intervals(gen_random_unit_intervals(20, 5, 77))
    assert gen_gsp(10, 77) == gen_gsp(10, 77)
    assert gen_random_bipartite(4, 5, 0.3, 77) == gen_random_bipartite(4, 5, 0.3, 77)
