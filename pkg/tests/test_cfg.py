import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gmpforge.cfg import (
    CfgError,
    CfgGraph,
    CoverageSet,
    ExecutionTrace,
    MalformedTraceError,
    build_cfg,
    check_trace,
    coverage_fraction,
    coverage_of,
    enumerate_prime_paths,
    union_coverage,
)
from gmpforge.sut import get_sut, invoke
from gmpforge.values import RuntimeValue

from oracles import brute_force_prime_paths

DIAMOND = build_cfg([0, 1, 2, 3], {(0, 1), (0, 2), (1, 3), (2, 3)}, 0, {3})


def paths(g):
    return [p.nodes for p in enumerate_prime_paths(g)]


def test_smallest_line_graph_is_valid():
    g = build_cfg([0, 1], {(0, 1)}, 0, {1})
    assert paths(g) == [(0, 1)]


def test_unreachable_node_rejected():
    with pytest.raises(CfgError):
        build_cfg([0, 1, 2], {(0, 1)}, 0, {1})


def test_node_that_cannot_exit_rejected():
    with pytest.raises(CfgError):
        build_cfg([0, 1, 2], {(0, 1), (0, 2), (2, 2)}, 0, {1})


def test_dangling_edge_rejected():
    with pytest.raises(CfgError):
        build_cfg([0, 1], {(0, 1), (1, 5)}, 0, {1})


def test_exit_outside_nodes_rejected():
    with pytest.raises(CfgError):
        build_cfg([0, 1], {(0, 1)}, 0, {4})


def test_line_has_one_prime_path():
    g = build_cfg([0, 1, 2], {(0, 1), (1, 2)}, 0, {2})
    assert paths(g) == [(0, 1, 2)]


def test_diamond_matches_oracle():
    expected = brute_force_prime_paths(DIAMOND.nodes, DIAMOND.edges)
    assert expected == [(0, 1, 3), (0, 2, 3)]
    assert paths(DIAMOND) == expected


def test_self_loop_is_a_prime_path():
    g = get_sut("Euclidean - Iterative").graph
    assert paths(g) == brute_force_prime_paths(g.nodes, g.edges)
    assert (1, 1) in paths(g)


def test_trace_on_diamond():
    c = coverage_of(ExecutionTrace((0, 1, 3)), DIAMOND)
    assert c.covered == frozenset({0})
    assert 1 not in c.covered


def test_non_edge_transition_is_malformed():
    with pytest.raises(MalformedTraceError):
        coverage_of((0, 3), DIAMOND)
    with pytest.raises(MalformedTraceError):
        check_trace((1, 3), DIAMOND)


def test_fibonacci_loop_trace_covers_loop_path():
    sut = get_sut("Fibonacci - Iterative")
    resp = invoke(sut, (RuntimeValue.of(7),))
    primes = paths(sut.graph)
    covered = {primes[i] for i in coverage_of(resp.trace, sut.graph).covered}
    assert (1, 1) in covered


def test_union_examples():
    assert union_coverage([CoverageSet(frozenset({0})), CoverageSet(frozenset({1}))]).covered == {0, 1}
    assert union_coverage([CoverageSet(frozenset({0}))] * 2).covered == {0}
    assert union_coverage([]).covered == frozenset()


def test_fraction_examples():
    assert coverage_fraction(CoverageSet(frozenset({0, 1})), DIAMOND) == 1.0
    assert coverage_fraction(CoverageSet(frozenset()), DIAMOND) == 0.0
    is_prime = get_sut("IsPrime").graph
    assert coverage_fraction(CoverageSet(frozenset(range(4))), is_prime) == 0.8


def test_fraction_rejects_foreign_index():
    with pytest.raises(ValueError):
        coverage_fraction(CoverageSet(frozenset({7})), DIAMOND)


def test_text_round_trip_golden():
    assert DIAMOND.to_text() == "entry=0 exits=3\n0->1\n0->2\n1->3\n2->3\n"
    assert CfgGraph.from_text(DIAMOND.to_text()) == DIAMOND


def test_bad_text_rejected():
    with pytest.raises(CfgError):
        CfgGraph.from_text("0->1\n")


@st.composite
def graphs(draw):
    n = draw(st.integers(2, 6))
    edges = {(i, i + 1) for i in range(n - 1)}  # spine keeps every node reachable and exiting
    extra = draw(st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=8))
    return build_cfg(list(range(n)), edges | extra, 0, {n - 1})


@settings(max_examples=150, deadline=None)
@given(graphs())
def test_prime_paths_match_brute_force(g):
    got = paths(g)
    assert got == brute_force_prime_paths(g.nodes, g.edges)
    for p in got:
        for q in got:
            if p != q:
                assert not any(q[i : i + len(p)] == p for i in range(len(q) - len(p) + 1))


@settings(max_examples=100, deadline=None)
@given(graphs(), st.data())
def test_union_laws_and_monotone_fraction(g, data):
    idx = st.frozensets(st.integers(0, len(g.prime_paths) - 1))
    a, b, c = (CoverageSet(data.draw(idx)) for _ in range(3))
    assert union_coverage([a, b]) == union_coverage([b, a])
    assert union_coverage([union_coverage([a, b]), c]) == union_coverage([a, union_coverage([b, c])])
    assert union_coverage([a, a]) == a
    assert coverage_fraction(union_coverage([a, b]), g) >= coverage_fraction(a, g)
