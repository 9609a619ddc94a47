import pytest

from backend.errors import AxiomViolation, ContextMismatch, InstanceTooLarge
from backend.soft_core import (SoftContext, SoftPoint, absolute_soft_set, make_soft_set, null_soft_set)
from backend.soft_topology import (PointTopology, SoftTopology, closure_operators_agree, corollary1_criterion,
                                   discrete_topology, indiscrete_topology, induced_topologies, induced_topology,
                                   interior_points, is_soft_closed, is_soft_neighbourhood, parameterwise_closure,
                                   soft_closure, soft_interior, validate_point_topology, validate_topology)


def _sets(problem, *names):
    return [problem.soft_set(name) for name in names]


def test_example1_topologies_validate(load_example):
    problem = load_example(1)
    ctx = problem.context
    tau = problem.topology("tau")
    assert len(tau) == 4
    assert validate_topology(ctx, tau.opens).verdict
    assert tau.opens[0] == null_soft_set(ctx)
    assert tau.opens[-1] == absolute_soft_set(ctx)


def test_missing_union_is_reported(load_example):
    problem = load_example(2)
    ctx = problem.context
    f1, f2, f3 = _sets(problem, "F1", "F2", "F3")
    report = validate_topology(ctx, [null_soft_set(ctx), absolute_soft_set(ctx), f1, f3])
    assert not report
    assert report.witness("axiom") == "union"
    assert {report.witness("left"), report.witness("right")} == {f1, f3}
    assert report.witness("result") == f2


def test_missing_null_and_absolute(load_example):
    problem = load_example(1)
    ctx = problem.context
    f1 = problem.soft_set("F1")
    report = validate_topology(ctx, [f1, absolute_soft_set(ctx)])
    assert report.witness("axiom") == "contains-null"
    report = validate_topology(ctx, [null_soft_set(ctx), f1])
    assert report.witness("axiom") == "contains-absolute"
    assert report.witness("missing") == absolute_soft_set(ctx)


def test_missing_intersection():
    ctx = SoftContext(("a", "b", "c"), ("e",))
    left = make_soft_set(ctx, {"e": ["a", "b"]})
    right = make_soft_set(ctx, {"e": ["b", "c"]})
    report = validate_topology(ctx, [null_soft_set(ctx), absolute_soft_set(ctx), left, right])
    assert report.witness("axiom") == "intersection"
    assert report.witness("result") == make_soft_set(ctx, {"e": ["b"]})


def test_soft_topology_rejects_invalid_collection(load_example):
    problem = load_example(2)
    ctx = problem.context
    f1, f3 = _sets(problem, "F1", "F3")
    with pytest.raises(AxiomViolation) as info:
        SoftTopology(ctx, (null_soft_set(ctx), absolute_soft_set(ctx), f1, f3))
    assert info.value.report.witness("result") == problem.soft_set("F2")


def test_example2_with_and_without_f5(load_example):
    problem = load_example(2)
    ctx = problem.context
    base = [null_soft_set(ctx), absolute_soft_set(ctx)] + _sets(problem, "F1", "F2", "F3", "F4")
    assert validate_topology(ctx, base).verdict
    assert validate_topology(ctx, base + [problem.soft_set("F5")]).verdict


def test_duplicates_collapse(load_example):
    problem = load_example(1)
    ctx = problem.context
    f1 = problem.soft_set("F1")
    tau = SoftTopology(ctx, (null_soft_set(ctx), f1, f1, absolute_soft_set(ctx)))
    assert len(tau) == 3


def test_discrete_and_indiscrete():
    ctx = SoftContext(("h1", "h2", "h3"), ("e1", "e2"))
    assert len(discrete_topology(ctx)) == 64
    assert len(indiscrete_topology(ctx)) == 2
    with pytest.raises(InstanceTooLarge):
        discrete_topology(ctx, max_soft_sets=32)


def test_closed_sets(load_example):
    problem = load_example(1)
    tau = problem.topology("tau")
    f1 = problem.soft_set("F1")
    assert is_soft_closed(tau, ~f1)
    assert not is_soft_closed(tau, f1)
    assert len(tau.closed_sets()) == len(tau)


def test_example1_closure(load_example):
    problem = load_example(1)
    tau = problem.topology("tau")
    p = problem.soft_set("P")
    result = soft_closure(tau, p)
    assert result.assignment() == {"e1": ("h3",), "e2": ("h1", "h2")}


def test_example1_interior(load_example):
    problem = load_example(1)
    ctx = problem.context
    tau = problem.topology("tau")
    a = make_soft_set(ctx, {"e1": ["h1", "h2"], "e2": ["h1", "h2", "h3"]})
    assert soft_interior(tau, a) == problem.soft_set("F1")


def test_closure_rejects_foreign_set(load_example):
    tau = load_example(1).topology("tau")
    other = SoftContext(("a", "b"), ("e1", "e2"), name="Y")
    with pytest.raises(ContextMismatch):
        soft_closure(tau, null_soft_set(other))


def test_parameterwise_closure_is_strictly_smaller(load_example):
    problem = load_example(1)
    tau = problem.topology("tau")
    p = problem.soft_set("P")
    pw = parameterwise_closure(tau, p)
    assert pw == p
    assert pw <= soft_closure(tau, p)
    assert not corollary1_criterion(tau, p)
    assert closure_operators_agree(tau, p) is False


def test_closure_operators_agree_on_closed_set(load_example):
    problem = load_example(1)
    tau = problem.topology("tau")
    closed = ~problem.soft_set("F1")
    assert closure_operators_agree(tau, closed)


def test_induced_topologies_example3(load_example):
    problem = load_example(3)
    tau = problem.topology("tau")
    tau_e1 = induced_topology(tau, "e1")
    tau_e2 = induced_topology(tau, "e2")
    assert set(tau_e1.subsets()) == {frozenset(), frozenset({"x1", "x2", "x3"}), frozenset({"x1"}),
                                     frozenset({"x2"}), frozenset({"x1", "x2"})}
    assert set(tau_e2.subsets()) == {frozenset(), frozenset({"x1", "x2", "x3"}), frozenset({"x1"}),
                                     frozenset({"x1", "x3"})}
    tau_prime = problem.topology("tau_prime")
    assert set(induced_topology(tau_prime, "e1").subsets()) == {
        frozenset(), frozenset({"y1", "y2", "y3"}), frozenset({"y1"}), frozenset({"y1", "y2"})}
    assert set(induced_topology(tau_prime, "e2").subsets()) == {
        frozenset(), frozenset({"y1", "y2", "y3"}), frozenset({"y2"})}


def test_induced_topologies_are_topologies(load_example):
    for number in (1, 2, 3, 5, 6, 7):
        for pt in induced_topologies(load_example(number).topology("tau")):
            assert validate_point_topology(pt).verdict


def test_point_topology_operations():
    pt = PointTopology(("a", "b", "c"), (0, 0b001, 0b011, 0b111))
    assert pt.is_open(pt.mask_of(["a", "b"]))
    assert pt.is_closed(pt.mask_of(["c"]))
    assert pt.elements(pt.closure(pt.mask_of(["c"]))) == ("c",)
    assert pt.elements(pt.closure(pt.mask_of(["b"]))) == ("b", "c")
    assert pt.elements(pt.interior(pt.mask_of(["a", "c"]))) == ("a",)


def test_validate_point_topology_reports_union():
    pt = PointTopology(("a", "b", "c"), (0, 0b001, 0b010, 0b111))
    report = validate_point_topology(pt)
    assert not report
    assert report.witness("axiom") == "union"


def test_soft_neighbourhood(load_example):
    problem = load_example(1)
    tau = problem.topology("tau")
    f2 = problem.soft_set("F2")
    assert is_soft_neighbourhood(tau, f2, SoftPoint("h3", "e2"))
    assert is_soft_neighbourhood(tau, f2, SoftPoint("h1", "e1"))
    p = problem.soft_set("P")
    assert not is_soft_neighbourhood(tau, p, SoftPoint("h3", "e1"))


def test_null_set_is_no_neighbourhood(load_example):
    problem = load_example(1)
    tau = problem.topology("tau")
    assert not is_soft_neighbourhood(tau, null_soft_set(problem.context), SoftPoint("h1", "e1"))
    with pytest.raises(ContextMismatch):
        is_soft_neighbourhood(tau, null_soft_set(problem.context), SoftPoint("x1", "e1"))


def test_interior_points(load_example):
    problem = load_example(1)
    ctx = problem.context
    tau = problem.topology("tau")
    a = make_soft_set(ctx, {"e1": ["h1", "h2"], "e2": ["h1", "h2", "h3"]})
    assert [str(p) for p in interior_points(tau, a)] == ["h1@e1", "h2@e1", "h3@e2"]
