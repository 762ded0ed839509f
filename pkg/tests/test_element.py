import itertools

import pytest

from localsim.groups.element import (
    GroupElement,
    closure,
    compose,
    depth_bounded_count,
    depth_of,
    embed_restricted,
    equals,
    evaluate,
    from_table,
    identity,
    image,
    inverse,
    involution_from_separating,
    is_identity,
    normalize,
    order,
    power,
    random_element,
    restricted_iso,
)
from localsim.models.similarity import (
    Similarity,
    TailAction,
    identity_on,
    prefix_rewrite,
    restrict,
)
from localsim.models.structures import RestrictedStructure, locally_sim_equivalent
from localsim.models.ultrametric import Ball, Point, clopen, maximal_proper_subballs
from localsim.utils.errors import (
    CarrierMismatch,
    CodomainsNotPartition,
    DomainsNotPartition,
    EntryNotInSim,
)

from conftest import element


def _points(space, n, tail="0"):
    return [Point(space, "".join(w), tail) for w in itertools.product(space.letters, repeat=n)]


def test_identity(vd2, mirror, finite_s3):
    for s in (vd2, mirror, finite_s3):
        assert identity(s).table == (identity_on(s.space.root),)


def test_from_table_validation(w2, vd2, mirror, thompson_x):
    assert [e.dom.address for e in thompson_x.table] == ["00", "01", "1"]
    with pytest.raises(DomainsNotPartition):
        element(vd2, ("0", "0"))
    with pytest.raises(CodomainsNotPartition):
        element(vd2, ("0", "0"), ("1", "0"))
    flip = Similarity(Ball(w2, "0"), Ball(w2, "0"), TailAction((1, 0)))
    with pytest.raises(EntryNotInSim):
        from_table(mirror, [flip, identity_on(Ball(w2, "1"))])


def test_compose_examples(vd2, a2, thompson_x):
    assert is_identity(compose(a2, a2))
    assert compose(thompson_x, identity(vd2)) == thompson_x
    swap = element(vd2, ("0", "1"), ("1", "0"))
    assert is_identity(compose(swap, swap))


def test_inverse_examples(vd2, thompson_x):
    assert is_identity(inverse(identity(vd2)))
    swap = element(vd2, ("0", "1"), ("1", "0"))
    assert inverse(swap) == swap
    expected = element(vd2, ("0", "00"), ("10", "01"), ("11", "1"))
    assert inverse(thompson_x) == expected
    assert is_identity(compose(thompson_x, expected))
    assert is_identity(compose(expected, thompson_x))


def test_normalize_examples(w2, vd2, a1):
    disguised = GroupElement(
        vd2, tuple(identity_on(Ball(w2, a)) for a in ("00", "01", "1"))
    )
    assert normalize(disguised) == identity(vd2)
    cycle = element(vd2, ("0", "10"), ("10", "11"), ("11", "0"))
    assert [e.dom.address for e in cycle.table] == ["0", "10", "11"]
    assert [b.address for b in a1.regions] == ["00", "01", "10", "11"]


def test_depth_of(w2, vd2, mirror, a1):
    assert depth_of(identity(vd2)) == 0
    assert depth_of(a1) == 2
    gamma = prefix_rewrite(Ball(w2, "0"), Ball(w2, "1"))
    assert depth_of(involution_from_separating(mirror, gamma)) == 1


def test_order(a1, a2, thompson_x):
    assert order(a1).order == 3
    assert order(a2).order == 2
    result = order(thompson_x, 100)
    assert not result.is_finite and result.bound == 100
    assert str(result) == "exceeds 100"
    depths = [depth_of(power(thompson_x, k)) for k in range(1, 6)]
    assert depths == sorted(set(depths))


def test_evaluate(w2, vd2, vd2_sigma2, a2):
    flip = from_table(vd2_sigma2, [Similarity(w2.root, w2.root, TailAction((1, 0)))])
    assert evaluate(flip, Point(w2, "001", "1")) == Point(w2, "110", "0")
    x = Point(w2, "0110", "1")
    assert evaluate(identity(vd2), x) == x
    assert evaluate(a2, Point(w2, "01", "0")) == Point(w2, "1", "0")


def test_equals(w2, vd2, a1):
    split = normalize(
        GroupElement(vd2, tuple(identity_on(b) for b in maximal_proper_subballs(w2.root)))
    )
    assert equals(split, identity(vd2))
    assert not equals(a1, compose(a1, a1))


def test_image_of_clopen_sets(w2, a1, a2):
    assert image(a2, clopen(w2, ["0"])).addresses == ("00", "1")
    assert image(a1, clopen(w2, ["01", "10"])).addresses == ("1",)


def _refined(a):
    """
    The same element with every entry split along the children of its domain
    """
    entries = []
    for e in a.table:
        for child in maximal_proper_subballs(e.dom):
            entries.append(restrict(e, child))
    return GroupElement(a.structure, tuple(entries))


def test_arithmetic_agrees_with_evaluation(w2, vd2, rng):
    for _ in range(1000):
        a = random_element(vd2, 5, rng)
        b = random_element(vd2, 5, rng)
        ab = compose(b, a)
        a_inv = inverse(a)
        refined = _refined(a)
        assert normalize(refined) == a
        n = max(depth_of(a), depth_of(b)) + 2
        for x in _points(w2, n):
            y = evaluate(a, x)
            assert evaluate(ab, x) == evaluate(b, y)
            assert evaluate(a_inv, y) == x
            assert evaluate(refined, x) == y


def test_equal_normal_forms_agree_pointwise(w2, vd2, rng):
    for _ in range(20):
        a = random_element(vd2, 3, rng)
        b = normalize(_refined(_refined(a)))
        assert equals(a, b)
        for x in _points(w2, depth_of(a) + 1, tail="1"):
            assert evaluate(a, x) == evaluate(b, x)


def test_closure_mirror_involution(w2, mirror):
    gamma = prefix_rewrite(Ball(w2, "0"), Ball(w2, "1"))
    alpha = involution_from_separating(mirror, gamma)
    result = closure(mirror, [alpha])
    assert result.is_finite and len(result) == 2


def test_closure_mirror_is_locally_finite(mirror, rng):
    for _ in range(100):
        k = int(rng.integers(1, 4))
        gens = [random_element(mirror, 4, rng) for _ in range(k)]
        result = closure(mirror, gens)
        assert result.is_finite
        bound = max(depth_of(g) for g in gens)
        assert all(depth_of(x) <= bound for x in result.elements)


def test_closure_mirror_random_pairs(mirror, rng):
    gens = [random_element(mirror, 3, rng) for _ in range(2)]
    result = closure(mirror, gens)
    assert result.is_finite
    assert all(depth_of(x) <= 3 for x in result.elements)


def test_closure_budget(vd2, a1, a2):
    result = closure(vd2, [a1, a2], size_budget=500)
    assert not result.is_finite and result.budget == 500


def test_depth_bounded_count(mirror):
    assert depth_bounded_count(mirror, 1) == 2
    assert depth_bounded_count(mirror, 2) == 4


def test_embed_restricted(w2, vd2):
    y = clopen(w2, ["0"])
    inner_s = RestrictedStructure(vd2, y)
    assert embed_restricted(vd2, y, identity(inner_s)) == identity(vd2)
    swap = element(inner_s, ("00", "01"), ("01", "00"))
    outer = embed_restricted(vd2, y, swap)
    for x in _points(w2, 3):
        if x.in_ball(Ball(w2, "1")):
            assert evaluate(outer, x) == x
    full_swap = element(vd2, ("0", "1"), ("1", "0"))
    assert embed_restricted(vd2, w2.whole, element(RestrictedStructure(vd2, w2.whole), ("0", "1"), ("1", "0"))) == full_swap
    with pytest.raises(CarrierMismatch):
        embed_restricted(vd2, clopen(w2, ["1"]), swap)


def test_restricted_iso(w2, vd2):
    y, z = clopen(w2, ["0"]), clopen(w2, ["1"])
    w = locally_sim_equivalent(vd2, y, z)
    inner = RestrictedStructure(vd2, y)
    assert restricted_iso(vd2, y, z, w, identity(inner)) == identity(RestrictedStructure(vd2, z))
    swap = element(inner, ("00", "01"), ("01", "00"))
    moved = restricted_iso(vd2, y, z, w, swap)
    assert moved == element(RestrictedStructure(vd2, z), ("10", "11"), ("11", "10"))
    assert order(moved).order == 2


def test_random_elements_are_valid(vd2_sigma2, v3, mirror, rng):
    for s in (vd2_sigma2, v3, mirror):
        for _ in range(20):
            a = random_element(s, 3, rng)
            assert depth_of(a) <= 3
            assert from_table(s, a.table) == a


def test_random_elements_permute_within_classes(finite_s3, rng):
    seen = set()
    for _ in range(60):
        a = random_element(finite_s3, 1, rng)
        assert from_table(finite_s3, a.table) == a
        assert all(e.dom.address != "3" or e.cod.address == "3" for e in a.table)
        seen.add(a)
    assert 1 < len(seen) <= 6
