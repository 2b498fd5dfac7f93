import pytest
from hypothesis import given, settings, strategies as st

import brute
from pwtd.decomposition import Interval, PathDecomposition, pd_violations
from pwtd.graph import Graph, cycle_graph, generate, path_graph
from pwtd.linkage import (
    Cut,
    Linkage,
    LinkageFamily,
    NotLinkedError,
    check_linked,
    expand_adhesions,
    family_get,
    fatness,
    is_linked,
    make_linked,
    reduce_bags,
    repair_linked,
    separator_surgery,
    trim_path,
    vertex_disjoint_linkage,
)
from pwtd.oracles import exact_pathwidth


def assert_linkage(g, A, B, link, k, allowed=None):
    allowed = set(range(g.n)) if allowed is None else set(allowed)
    assert isinstance(link, Linkage) and link.k == k
    seen = set()
    for path in link.paths:
        assert path[0] in A and path[-1] in B
        assert all(g.has_edge(u, v) for u, v in zip(path, path[1:]))
        assert set(path) <= allowed
        assert not seen & set(path)
        seen |= set(path)


def test_cycle_two_paths():
    g = cycle_graph(4)
    link = vertex_disjoint_linkage(g, {0, 1}, {2, 3}, 2)
    assert_linkage(g, {0, 1}, {2, 3}, link, 2)


def test_single_source_cannot_carry_two_paths():
    # endpoints count toward disjointness, so {0} is itself a cut
    assert vertex_disjoint_linkage(cycle_graph(4), {0}, {2}, 2) == Cut(frozenset({0}))


def test_shared_vertex_is_a_path():
    link = vertex_disjoint_linkage(path_graph(3), {1}, {1}, 1)
    assert link.paths == ((1,),)


def test_allowed_restricts_paths():
    g = cycle_graph(4)
    assert isinstance(vertex_disjoint_linkage(g, {0}, {2}, 1, allowed={0, 1, 2}), Linkage)
    # without vertex 3 both paths from {0, 1} must squeeze through 2
    cut = vertex_disjoint_linkage(g, {0, 1}, {2}, 2, allowed={0, 1, 2})
    assert isinstance(cut, Cut) and len(cut.vertices) == 1
    with pytest.raises(ValueError):
        vertex_disjoint_linkage(g, {0}, {2}, 1, allowed={2})
    with pytest.raises(ValueError):
        vertex_disjoint_linkage(g, {0}, {2}, 0)


def test_disconnected_gives_empty_cut():
    g = Graph.from_edges(4, [(0, 1), (2, 3)])
    assert vertex_disjoint_linkage(g, {0}, {3}, 1) == Cut(frozenset())


graph_instances = st.integers(2, 9).flatmap(
    lambda n: st.tuples(
        st.just(n),
        st.sets(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))),
        st.sets(st.integers(0, n - 1), min_size=1),
        st.sets(st.integers(0, n - 1), min_size=1),
        st.integers(1, 4),
    )
)


@settings(max_examples=150, deadline=None)
@given(graph_instances)
def test_menger_matches_exhaustive(data):
    n, pairs, A, B, k = data
    g = Graph.from_edges(n, [(u, v) for u, v in pairs if u != v])
    best = brute.max_disjoint_paths(n, g.edges, A, B)
    got = vertex_disjoint_linkage(g, A, B, k)
    if best >= k:
        assert_linkage(g, A, B, got, k)
    else:
        assert isinstance(got, Cut) and len(got.vertices) == best
        assert brute.separates(n, g.edges, A, B, got.vertices)


def test_edge_bags_of_a_path_are_not_linked():
    # {0,1} and {1,2} have only one path between them (vertex 1), yet both have size 2
    g = path_graph(5)
    pd = PathDecomposition.from_bags([[0, 1], [1, 2], [2, 3], [3, 4]])
    assert not is_linked(g, pd)
    linked = PathDecomposition.from_bags([[0, 1], [1], [1, 2], [2], [2, 3], [3], [3, 4]])
    assert is_linked(g, linked) and not check_linked(g, linked)


def test_unlinked_detected_and_repaired():
    # bags {0,1} and {2,3} of a path: only one path runs between them
    g = path_graph(4)
    pd = PathDecomposition.from_bags([[0, 1], [0, 1, 2], [1, 2, 3], [2, 3]])
    bad = check_linked(g, pd)
    assert bad and bad[0].flow < bad[0].k
    out = repair_linked(g, pd)
    assert is_linked(g, out.pd) and not check_linked(g, out.pd)
    assert out.pd.width <= pd.width and not pd_violations(g, out.pd)
    assert out.iterations < out.bound
    assert all(a > b for a, b in zip(out.potentials, out.potentials[1:]))


def test_linked_input_unchanged():
    g = path_graph(4)
    pd = PathDecomposition.from_bags([[0, 1], [1], [1, 2], [2], [2, 3]])
    res = repair_linked(g, pd)
    assert res.pd == pd and res.iterations == 0


def test_reduce_expand_fatness():
    pd = PathDecomposition.from_bags([[0], [0, 1], [1], [1, 2, 3], [2, 3, 4]])
    assert reduce_bags(pd).bags == ((0, 1), (1, 2, 3), (2, 3, 4))
    assert expand_adhesions(reduce_bags(pd)).bags == ((0, 1), (1,), (1, 2, 3), (2, 3), (2, 3, 4))
    assert fatness(pd, 3) == (2, 1, 2, 0)


def test_surgery_rejects_linked_pair():
    g = path_graph(3)
    pd = PathDecomposition.from_bags([[0, 1], [1, 2]])
    with pytest.raises(ValueError):
        separator_surgery(g, pd, 0, 1, 1)


def test_trim_path():
    assert trim_path((0, 1, 2, 3, 4), frozenset({0, 1}), frozenset({3, 4})) == (1, 2, 3)
    assert trim_path((2,), frozenset({2}), frozenset({2})) == (2,)
    with pytest.raises(NotLinkedError):
        trim_path((0, 1), frozenset({5}), frozenset({1}))


def test_family_nests_and_caches():
    # ladder: rungs i -- i+4, rails 0-1-2-3 and 4-5-6-7
    g = Graph.from_edges(8, [(0, 1), (1, 2), (2, 3), (4, 5), (5, 6), (6, 7), (0, 4), (1, 5), (2, 6), (3, 7)])
    pd = PathDecomposition.from_bags([[0, 4], [0, 1, 4, 5], [1, 5], [1, 2, 5, 6], [2, 6], [2, 3, 6, 7], [3, 7]])
    assert is_linked(g, pd)
    fam = LinkageFamily(g, pd)
    whole = fam.get(pd.whole(), 2)
    child = fam.get(Interval(1, 3), 2, pd.whole())
    assert child.vertex_set <= whole.vertex_set
    assert fam.get(Interval(1, 3), 2) is child
    assert fam.origin[Interval(1, 3), 2].startswith("trim")
    assert not fam.nesting_violations()
    assert family_get(fam, g, pd, Interval(1, 3), None, 2) is child
    with pytest.raises(ValueError):
        fam.get(Interval(0, 1), 3)
    with pytest.raises(ValueError):
        family_get(fam, path_graph(8), pd, Interval(1, 3), None, 2)


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000), st.integers(3, 10), st.integers(1, 4), st.floats(0.2, 0.9))
def test_repair_on_generator_witnesses(seed, n, a, p):
    a = min(a, n)
    g, bags = generate("random_bounded_pw", {"n": n, "a": a, "p": p}, seed)
    pd = PathDecomposition.from_bags(bags)
    out = repair_linked(g, pd)
    assert not pd_violations(g, out.pd)
    assert out.pd.width <= pd.width
    assert not check_linked(g, out.pd)
    assert out.iterations < max(out.bound, 1)


def test_make_linked_on_oracle_witness():
    g, _ = generate("random_bounded_pw", {"n": 9, "a": 3, "p": 0.5}, 4)
    pd = exact_pathwidth(g).witness
    out = make_linked(g, pd)
    assert out.width == pd.width and not check_linked(g, out)
