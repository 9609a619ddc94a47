import pytest

from backend.errors import (ContextMismatch, InvalidContext, MissingParameter, UnknownElement,
                            UnknownParameter)
from backend.soft_core import (SoftContext, SoftPoint, SoftSet, absolute_soft_set, contains_point,
                               format_soft_set, make_soft_set, null_soft_set, points_of, soft_complement,
                               soft_difference, soft_intersection, soft_point, soft_points, soft_subset,
                               soft_union)


@pytest.fixture
def ctx():
    return SoftContext(("h1", "h2", "h3"), ("e1", "e2"))


@pytest.fixture
def f1(ctx):
    return make_soft_set(ctx, {"e1": ["h1", "h2"], "e2": ["h3"]})


@pytest.fixture
def f2(ctx):
    return make_soft_set(ctx, {"e1": ["h1", "h2", "h3"], "e2": ["h3"]})


def test_context_sizes(ctx):
    assert ctx.size == 3
    assert ctx.width == 2
    assert ctx.bit_count == 6
    assert ctx.full_mask == 63


def test_context_name_does_not_affect_equality():
    assert SoftContext(("a",), ("e",), name="X") == SoftContext(("a",), ("e",), name="Y")


@pytest.mark.parametrize("universe, parameters", [
    ((), ("e1",)),
    (("h1",), ()),
    (("h1", "h1"), ("e1",)),
    (("h1",), ("e1", "e1")),
])
def test_invalid_context(universe, parameters):
    with pytest.raises(InvalidContext):
        SoftContext(universe, parameters)


def test_make_soft_set_layout(f1):
    assert f1.mask == 0b100011
    assert f1["e1"] == ("h1", "h2")
    assert f1["e2"] == ("h3",)
    assert f1.assignment() == {"e1": ("h1", "h2"), "e2": ("h3",)}


def test_make_soft_set_accepts_empty_value(ctx):
    a = make_soft_set(ctx, {"e1": ["h3"], "e2": []})
    assert a["e2"] == ()
    assert not a.is_null


def test_make_soft_set_missing_parameter(ctx):
    with pytest.raises(MissingParameter):
        make_soft_set(ctx, {"e1": ["h1"]})


def test_make_soft_set_unknown_parameter(ctx):
    with pytest.raises(UnknownParameter):
        make_soft_set(ctx, {"e1": ["h1"], "e2": [], "e3": []})


def test_make_soft_set_unknown_element(ctx):
    with pytest.raises(UnknownElement):
        make_soft_set(ctx, {"e1": ["h9"], "e2": []})


def test_union_and_intersection(f1, f2):
    assert soft_union(f1, f2) == f2
    assert soft_intersection(f1, f2) == f1
    assert f1 | f2 == f2
    assert f1 & f2 == f1


def test_complement(ctx, f1):
    assert soft_complement(f1).assignment() == {"e1": ("h3",), "e2": ("h1", "h2")}
    assert soft_complement(null_soft_set(ctx)) == absolute_soft_set(ctx)
    assert ~~f1 == f1


def test_difference(ctx, f1, f2):
    assert soft_difference(f2, f1).assignment() == {"e1": ("h3",), "e2": ()}
    assert f1 - f1 == null_soft_set(ctx)


def test_subset(ctx, f1, f2):
    assert soft_subset(f1, f2)
    assert not soft_subset(f2, f1)
    assert null_soft_set(ctx) <= f1 <= absolute_soft_set(ctx)


def test_operations_reject_foreign_context(f1):
    other = SoftContext(("a", "b"), ("e1", "e2"), name="Y")
    with pytest.raises(ContextMismatch):
        soft_union(f1, null_soft_set(other))
    with pytest.raises(ContextMismatch):
        soft_subset(f1, absolute_soft_set(other))


def test_contains_point(f1):
    assert contains_point(f1, SoftPoint("h3", "e2"))
    assert not contains_point(f1, SoftPoint("h3", "e1"))


def test_contains_point_outside_context(f1):
    with pytest.raises(ContextMismatch):
        contains_point(f1, SoftPoint("x1", "e1"))


def test_soft_point_is_singleton_at_one_parameter(ctx):
    p = soft_point(ctx, "h2", "e2")
    assert p.assignment() == {"e1": (), "e2": ("h2",)}


def test_soft_points_canonical_order(ctx):
    points = [str(p) for p in soft_points(ctx)]
    assert points == ["h1@e1", "h2@e1", "h3@e1", "h1@e2", "h2@e2", "h3@e2"]


def test_points_of(f1):
    assert [str(p) for p in points_of(f1)] == ["h1@e1", "h2@e1", "h3@e2"]


def test_soft_point_parse():
    assert SoftPoint.parse("h3@e1") == SoftPoint("h3", "e1")
    for text in ("h3", "@e1", "h3@"):
        with pytest.raises(UnknownElement):
            SoftPoint.parse(text)


def test_format_soft_set(ctx, f1, f2):
    assert format_soft_set(f1) == "{e1↦{h1,h2}, e2↦{h3}}"
    assert format_soft_set(f2) == "{e1↦X, e2↦{h3}}"
    assert format_soft_set(null_soft_set(ctx)) == "{e1↦∅, e2↦∅}"


def test_mask_outside_context(ctx):
    with pytest.raises(UnknownElement):
        SoftSet(ctx, 64)
