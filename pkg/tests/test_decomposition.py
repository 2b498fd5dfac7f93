import pytest
from hypothesis import given, strategies as st

from pwtd.decomposition import (
    ROOT,
    DecompositionError,
    EliminationForest,
    ForestError,
    Interval,
    PathDecomposition,
    forest_to_dot,
    interval_stats,
    normalize,
    parse_forest,
    parse_pd,
    pd_violations,
    serialize_forest,
    serialize_pd,
    sub_interval,
    validate_elimination_forest,
    validate_path_decomposition,
)
from pwtd.graph import Graph, path_graph

P4 = path_graph(4)


def kinds(g, pd):
    return sorted({v.kind for v in pd_violations(g, pd)})


def test_valid_path_decomposition():
    pd = PathDecomposition.from_bags([[0, 1], [1, 2], [2, 3]])
    assert validate_path_decomposition(P4, pd) == 1


@pytest.mark.parametrize(
    "bags,kind",
    [
        ([[0, 1], [1, 2]], "missing-vertex"),
        ([[0, 1], [2, 3]], "uncovered-edge"),
        ([[0, 1], [1, 2], [2, 3], [1]], "non-contiguous"),
        ([[0, 1], [1, 2], [2, 3, 9]], "unknown-vertex"),
    ],
)
def test_each_violation_kind(bags, kind):
    pd = PathDecomposition.from_bags(bags)
    assert kind in kinds(P4, pd)
    with pytest.raises(DecompositionError) as info:
        validate_path_decomposition(P4, pd)
    assert any(v.kind == kind for v in info.value.violations)


def test_interval_basics():
    iv = Interval(1, 3)
    assert len(iv) == 3 and 2 in iv and 4 not in iv and list(iv) == [1, 2, 3]
    assert Interval(2, 3).issubset(iv) and not Interval(0, 1).issubset(iv)
    assert sub_interval(3, 2) is None
    with pytest.raises(ValueError):
        Interval(3, 1)


def test_level_interior_union():
    pd = PathDecomposition.from_bags([[0, 1], [1, 2, 4], [2, 3], [3]])
    iv = Interval(1, 2)
    assert pd.level(iv) == 2
    assert pd.interior(iv) == {2, 4}
    assert pd.union([0, 3]) == {0, 1, 3}
    stats = interval_stats(pd, iv)
    assert stats.interior == pd.interior(iv) and stats.boundary_union == {1, 2, 3, 4}


def test_normalize_keeps_one_interior_empty_bag():
    pd = PathDecomposition.from_bags([[], [0], [], [], [1], []])
    assert normalize(pd).bags == ((0,), (), (1,))


def test_pd_text_roundtrip():
    pd = PathDecomposition.from_bags([[0, 1], [], [2]])
    assert parse_pd(serialize_pd(pd)) == pd
    with pytest.raises(ValueError):
        parse_pd("0 x\n")


def test_forest_depths_and_height():
    ef = EliminationForest.from_parents([ROOT, 0, 1, 1, ROOT])
    assert [ef.depth(v) for v in range(5)] == [1, 2, 3, 3, 1]
    assert ef.height == 3 and ef.roots == [0, 4]
    assert ef.is_ancestor(0, 3) and not ef.is_ancestor(2, 3) and ef.is_ancestor(2, 2)


def test_forest_rejects_cycles():
    with pytest.raises(ForestError):
        EliminationForest.from_parents([1, 0])
    with pytest.raises(ForestError):
        EliminationForest.from_parents([5])


def test_forest_validation():
    ok = EliminationForest.from_parents([1, ROOT, 1, 2])
    assert validate_elimination_forest(P4, ok) == 3
    bad = EliminationForest.from_parents([ROOT, 0, 0, 2])  # edge 1-2 is not ancestral
    with pytest.raises(ForestError) as info:
        validate_elimination_forest(P4, bad)
    assert [v.detail for v in info.value.violations] == [(1, 2)]


def test_forest_text_and_dot():
    ef = EliminationForest.from_parents([1, ROOT, 1, 2])
    assert parse_forest(serialize_forest(ef)) == ef
    assert "1 -> 0;" in forest_to_dot(ef)
    with pytest.raises(ValueError):
        parse_forest("0 -1\n2 -1\n")


@given(st.lists(st.lists(st.integers(0, 7), max_size=4), min_size=1, max_size=8))
def test_interior_matches_set_algebra(bags):
    pd = PathDecomposition.from_bags(bags)
    for lo in range(len(pd)):
        for hi in range(lo, len(pd)):
            iv = Interval(lo, hi)
            assert pd.interior(iv) == interval_stats(pd, iv).interior


@given(st.lists(st.lists(st.integers(0, 5), max_size=3), min_size=1, max_size=8))
def test_normalize_preserves_validity(bags):
    pd = PathDecomposition.from_bags(bags)
    g = Graph.from_edges(6, [])
    if pd_violations(g, pd):
        return
    out = normalize(pd)
    assert not pd_violations(g, out)
    assert out.width == pd.width
