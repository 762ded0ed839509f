import itertools

import pytest

from localsim.models.ultrametric import (
    Ball,
    FiniteSpace,
    LogDistance,
    Partition,
    Point,
    RelationType,
    WordSpace,
    ball_decompositions,
    canonicalize,
    clopen,
    compare,
    depth,
    distance,
    maximal_proper_subballs,
    partition_depth_bound,
)
from localsim.utils.errors import (
    EmptySet,
    InvalidPartition,
    NoSubballs,
    NotASubball,
    SpaceMismatch,
    StructureError,
)


def test_compare_trichotomy(w2):
    nested = compare(Ball(w2, "0"), Ball(w2, "01"))
    assert nested.kind == RelationType.NESTED
    assert nested.outer == Ball(w2, "0") and nested.inner == Ball(w2, "01")
    assert compare(Ball(w2, "01"), Ball(w2, "0")).outer == Ball(w2, "0")
    assert compare(Ball(w2, "0"), Ball(w2, "1")).kind == RelationType.DISJOINT
    assert compare(w2.root, w2.root).kind == RelationType.EQUAL


def test_compare_space_mismatch(w2, w3):
    with pytest.raises(SpaceMismatch):
        compare(Ball(w2, "0"), Ball(w3, "0"))


def test_depth_matches_bfs(w2):
    assert depth(w2.root) == 0
    assert depth(Ball(w2, "01")) == 2
    # breadth-first levels of the hierarchy truncated at depth 3
    level = [w2.root]
    for n in range(4):
        assert all(depth(b) == n for b in level)
        level = [c for b in level for c in maximal_proper_subballs(b)] if n < 3 else []
    finite = FiniteSpace("((.(..)).)")
    assert depth(Ball(finite, "010")) == 3
    assert finite.is_leaf("010")


def test_maximal_proper_subballs(w2, w3):
    assert [b.address for b in maximal_proper_subballs(w2.root)] == ["0", "1"]
    assert [b.address for b in maximal_proper_subballs(Ball(w3, "1"))] == ["10", "11", "12"]
    finite = FiniteSpace("((..)(...))")
    assert [b.address for b in maximal_proper_subballs(Ball(finite, "1"))] == ["10", "11", "12"]
    with pytest.raises(NoSubballs):
        maximal_proper_subballs(Ball(finite, "12"))


def test_invalid_balls_and_trees(w2):
    with pytest.raises(NotASubball):
        Ball(w2, "2")
    with pytest.raises(StructureError):
        FiniteSpace("(.)")
    with pytest.raises(StructureError):
        FiniteSpace("((..)")
    with pytest.raises(StructureError):
        WordSpace(1)


def test_distance(w2):
    x = Point(w2, "001", "0")
    y = Point(w2, "010", "1")
    assert distance(x, y) == LogDistance(2)
    assert distance(x, x).is_zero
    # the same infinite word written with a longer prefix
    assert distance(Point(w2, "01", "0"), Point(w2, "010", "0")).is_zero
    assert LogDistance(3) < LogDistance(2)
    assert LogDistance() < LogDistance(5)


def test_distance_is_ultrametric(w2):
    points = [Point(w2, p, t) for p in ("", "0", "01", "10", "110") for t in "01"]
    for x, y, z in itertools.product(points, repeat=3):
        assert distance(x, y) <= max(distance(x, z), distance(z, y))


def test_finite_distance():
    space = FiniteSpace("((..)(...))")
    assert distance(Point(space, "00"), Point(space, "01")) == LogDistance(2)
    assert distance(Point(space, "00"), Point(space, "12")) == LogDistance(1)


def test_canonicalize(w2):
    assert clopen(w2, ["00", "01"]).addresses == ("0",)
    assert clopen(w2, ["00", "10"]).addresses == ("00", "10")
    assert clopen(w2, ["00", "01", "10", "11"]).addresses == ("",)
    assert clopen(w2, ["0", "01", "1"]).addresses == ("",)
    with pytest.raises(EmptySet):
        canonicalize([])


def test_clopen_set_operations(w2):
    y = clopen(w2, ["0"])
    z = clopen(w2, ["01", "1"])
    assert y.intersection(z).addresses == ("01",)
    assert y.difference(z).addresses == ("00",)
    assert y.union(z) == w2.whole
    assert clopen(w2, ["00"]).is_subset(y)
    assert not y.is_disjoint(z)
    assert y.intersection(clopen(w2, ["1"])) is None
    assert y.expand_to_depth(2) == (Ball(w2, "00"), Ball(w2, "01"))


def test_partition_depth_bound(w2):
    p = Partition.from_blocks([clopen(w2, ["0"]), clopen(w2, ["10"]), clopen(w2, ["11"])])
    assert partition_depth_bound(p) == 2
    assert partition_depth_bound(Partition.from_blocks([w2.whole])) == 0
    q = Partition.from_blocks([clopen(w2, ["00", "1"]), clopen(w2, ["01"])])
    n = partition_depth_bound(q)
    assert n == 2
    for b in w2.balls_at_depth(3):
        assert sum(1 for block in q.blocks if block.contains_ball(b)) == 1


def test_partition_validation(w2):
    with pytest.raises(InvalidPartition):
        Partition.from_blocks([clopen(w2, ["0"])])
    with pytest.raises(InvalidPartition):
        Partition.from_blocks([clopen(w2, ["0"]), clopen(w2, ["00", "1"])])


def test_ball_decompositions_count(w2):
    # c(0) = 1, c(k) = 1 + c(k - 1)^2
    counts = [len(ball_decompositions(w2, "", k)) for k in range(4)]
    assert counts == [1, 2, 5, 26]
