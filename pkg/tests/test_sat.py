from itertools import combinations, product

import pytest
from hypothesis import given, settings, strategies as st

from compart.sat import CDCL, SAT, TIMEOUT, UNSAT, luby


def pigeonhole(holes):
    """Clauses saying holes + 1 pigeons fit into ``holes`` holes; variable p*holes + h + 1."""
    var = lambda p, h: p * holes + h + 1  # noqa: E731
    clauses = [[var(p, h) for h in range(holes)] for p in range(holes + 1)]
    for h in range(holes):
        for p, q in combinations(range(holes + 1), 2):
            clauses.append([-var(p, h), -var(q, h)])
    return (holes + 1) * holes, clauses


def solve(nvars, clauses, budget=None):
    s = CDCL(nvars)
    for c in clauses:
        s.add_clause(c)
    return s, s.solve(budget)


def brute_sat(nvars, clauses):
    for bits in product((False, True), repeat=nvars):
        if all(any(bits[abs(x) - 1] == (x > 0) for x in c) for c in clauses):
            return True
    return False


def satisfies(s, clauses):
    return all(any(s.value(abs(x)) == (x > 0) for x in c) for c in clauses)


def test_luby_prefix():
    assert [luby(i) for i in range(1, 16)] == [1, 1, 2, 1, 1, 2, 4, 1, 1, 2, 1, 1, 2, 4, 8]


def test_trivial_instances():
    assert solve(1, [[1], [-1]])[1] == UNSAT
    assert solve(2, [])[1] == SAT
    s, res = solve(3, [[1, 2], [-1], [-2, 3]])
    assert res == SAT and not s.value(1) and s.value(2) and s.value(3)
    assert solve(1, [[]])[1] == UNSAT


def test_literal_range_checked():
    s = CDCL(2)
    with pytest.raises(ValueError):
        s.add_clause([3])
    with pytest.raises(ValueError):
        s.add_clause([0])


@pytest.mark.parametrize("holes", [2, 3, 4, 5, 6])
def test_pigeonhole_is_unsat(holes):
    n, clauses = pigeonhole(holes)
    assert solve(n, clauses)[1] == UNSAT
    # one pigeon fewer fits
    n2, clauses2 = pigeonhole(holes)
    s, res = solve(n2, clauses2[1:])
    assert res == SAT and satisfies(s, clauses2[1:])


def test_timeout_is_reported_not_unsat():
    n, clauses = pigeonhole(9)
    s, res = solve(n, clauses, budget=1)
    assert res == TIMEOUT and s.stats.conflicts > 0


def test_runs_are_deterministic():
    n, clauses = pigeonhole(6)
    a, _ = solve(n, clauses)
    b, _ = solve(n, clauses)
    assert a.stats == b.stats


@st.composite
def cnf(draw):
    nvars = draw(st.integers(1, 9))
    lit = st.integers(1, nvars).flatmap(lambda v: st.sampled_from([v, -v]))
    clauses = draw(st.lists(st.lists(lit, min_size=1, max_size=4), max_size=45))
    return nvars, clauses


@settings(max_examples=300, deadline=None)
@given(cnf())
def test_agrees_with_brute_force(instance):
    nvars, clauses = instance
    s, res = solve(nvars, clauses)
    assert res == (SAT if brute_sat(nvars, clauses) else UNSAT)
    if res == SAT:
        assert satisfies(s, clauses)


def test_random_3sat_near_threshold():
    from compart.generators import XorShift64Star

    rng = XorShift64Star(99)
    for _ in range(30):
        nvars = 12
        clauses = []
        for _ in range(51):
            vs = _pick3(rng, nvars)
            clauses.append([v if rng.below(2) else -v for v in vs])
        s, res = solve(nvars, clauses)
        assert res == (SAT if brute_sat(nvars, clauses) else UNSAT)
        if res == SAT:
            assert satisfies(s, clauses)


def _pick3(rng, nvars):
    vs = list(range(1, nvars + 1))
    rng.shuffle(vs)
    return vs[:3]
