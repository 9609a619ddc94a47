"""
Алгебраические законы на случайных и полностью перебранных примерах
"""
import itertools

from hypothesis import given, strategies as st

from backend.oracle import closure_under_ops, enumerate_soft_sets, make_context, random_soft_topology
from backend.soft_core import (SoftSet, absolute_soft_set, contains_point, null_soft_set, point_as_soft_set,
                               soft_points, soft_subset)
from backend.soft_mapping import SoftMapping, soft_image, soft_preimage, theorem1_report
from backend.soft_topology import (corollary1_criterion, is_soft_closed, parameterwise_closure, soft_closure,
                                   soft_interior, validate_topology)

# число случаев в прогонах с фиксированным зерном numpy
RANDOM_CASES = 10_000

seeds = st.integers(min_value=0, max_value=2 ** 32 - 1)


@st.composite
def contexts(draw, max_size=3, max_width=2):
    return make_context(draw(st.integers(1, max_size)), draw(st.integers(1, max_width)))


@st.composite
def soft_sets(draw, ctx):
    return SoftSet(ctx, draw(st.integers(0, ctx.full_mask)))


@st.composite
def set_triples(draw):
    ctx = draw(contexts())
    return draw(soft_sets(ctx)), draw(soft_sets(ctx)), draw(soft_sets(ctx))


@st.composite
def topology_cases(draw):
    ctx = draw(contexts())
    tau = random_soft_topology(ctx, draw(seeds), draw(st.integers(0, 4)))
    return tau, draw(soft_sets(ctx)), draw(soft_sets(ctx))


@st.composite
def mappings(draw):
    width = draw(st.integers(1, 2))
    source = make_context(draw(st.integers(1, 3)), width, 'x', 'X')
    target = make_context(draw(st.integers(1, 3)), width, 'y', 'Y')
    images = draw(st.lists(st.sampled_from(target.universe), min_size=source.size, max_size=source.size))
    return SoftMapping(source, target, tuple(images))


# ========== АЛГЕБРА МЯГКИХ МНОЖЕСТВ ==========

@given(set_triples())
def test_lattice_laws(triple):
    a, b, c = triple
    assert a | b == b | a and a & b == b & a
    assert (a | b) | c == a | (b | c)
    assert (a & b) & c == a & (b & c)
    assert a | a == a and a & a == a
    assert a | (a & b) == a and a & (a | b) == a
    assert a & (b | c) == (a & b) | (a & c)


@given(set_triples())
def test_de_morgan_and_involution(triple):
    a, b, _ = triple
    assert ~(a | b) == ~a & ~b
    assert ~(a & b) == ~a | ~b
    assert ~~a == a


@given(set_triples())
def test_subset_order(triple):
    a, b, _ = triple
    ctx = a.context
    assert soft_subset(a, b) == (a | b == b) == (a & b == a)
    assert null_soft_set(ctx) <= a <= absolute_soft_set(ctx)
    if a <= b and b <= a:
        assert a == b


@given(set_triples())
def test_point_membership(triple):
    a = triple[0]
    for p in soft_points(a.context):
        assert contains_point(a, p) == soft_subset(point_as_soft_set(a.context, p), a)


def test_de_morgan_exhaustive_on_four_bits():
    sets = enumerate_soft_sets(make_context(2, 2))
    for a, b in itertools.product(sets, repeat=2):
        assert ~(a | b) == ~a & ~b
        assert ~(a & b) == ~a | ~b


# ========== ЗАМЫКАНИЕ И ВНУТРЕННОСТЬ ==========

@given(topology_cases())
def test_kuratowski_axioms(case):
    tau, a, b = case
    ctx = tau.context
    cl_a = soft_closure(tau, a)
    assert soft_closure(tau, null_soft_set(ctx)) == null_soft_set(ctx)
    assert a <= cl_a
    assert soft_closure(tau, cl_a) == cl_a
    assert soft_closure(tau, a | b) == cl_a | soft_closure(tau, b)
    assert is_soft_closed(tau, cl_a)


@given(topology_cases())
def test_interior_closure_duality(case):
    tau, a, _ = case
    inner = soft_interior(tau, a)
    assert inner == ~soft_closure(tau, ~a)
    assert inner <= a
    assert tau.is_open(inner)


@given(topology_cases())
def test_parameterwise_closure_bounds(case):
    tau, a, _ = case
    pw = parameterwise_closure(tau, a)
    cl = soft_closure(tau, a)
    assert a <= pw <= cl
    assert corollary1_criterion(tau, a) == (pw == cl)


@given(contexts(), st.data())
def test_closure_under_ops_is_smallest_topology(ctx, data):
    generators = data.draw(st.lists(soft_sets(ctx), max_size=4))
    tau = closure_under_ops(ctx, generators)
    assert validate_topology(ctx, tau.opens).verdict
    assert all(tau.is_open(g) for g in generators)
    assert closure_under_ops(ctx, tau.opens) == tau
    assert closure_under_ops(ctx, generators[:1]).open_masks <= tau.open_masks


# ========== ОБРАЗЫ И ПРООБРАЗЫ ==========

@given(mappings(), st.data())
def test_image_preimage_adjunction(f, data):
    a = data.draw(soft_sets(f.source))
    b = data.draw(soft_sets(f.target))
    assert (soft_image(f, a) <= b) == (a <= soft_preimage(f, b))
    assert a <= soft_preimage(f, soft_image(f, a))
    assert soft_image(f, soft_preimage(f, b)) <= b


@given(mappings(), st.data())
def test_image_preserves_unions_and_order(f, data):
    a = data.draw(soft_sets(f.source))
    c = data.draw(soft_sets(f.source))
    assert soft_image(f, a | c) == soft_image(f, a) | soft_image(f, c)
    assert soft_image(f, a & c) <= soft_image(f, a) & soft_image(f, c)
    if a <= c:
        assert soft_image(f, a) <= soft_image(f, c)
    assert soft_image(f, a & c) <= soft_image(f, c)


@given(mappings(), st.data())
def test_adjunction_is_tight_for_injective_and_surjective(f, data):
    a = data.draw(soft_sets(f.source))
    b = data.draw(soft_sets(f.target))
    if f.is_injective:
        assert soft_preimage(f, soft_image(f, a)) == a
    if f.is_surjective:
        assert soft_image(f, soft_preimage(f, b)) == b


@given(mappings(), st.data())
def test_preimage_is_boolean_homomorphism(f, data):
    b = data.draw(soft_sets(f.target))
    c = data.draw(soft_sets(f.target))
    assert soft_preimage(f, b | c) == soft_preimage(f, b) | soft_preimage(f, c)
    assert soft_preimage(f, b & c) == soft_preimage(f, b) & soft_preimage(f, c)
    assert soft_preimage(f, ~b) == ~soft_preimage(f, b)
    assert soft_preimage(f, absolute_soft_set(f.target)) == absolute_soft_set(f.source)


@given(mappings(), seeds)
def test_continuity_conditions_agree(f, seed):
    tau = random_soft_topology(f.source, seed, 3)
    tau_prime = random_soft_topology(f.target, seed + 1, 3)
    report = theorem1_report(f, tau, tau_prime)
    assert report.complete and report.all_agree


# ========== ПРОГОНЫ С ФИКСИРОВАННЫМ ЗЕРНОМ ==========

def test_topology_laws_seeded(rng):
    topologies = []
    for _ in range(200):
        ctx = make_context(int(rng.integers(1, 4)), int(rng.integers(1, 3)))
        topologies.append(random_soft_topology(ctx, int(rng.integers(0, 2 ** 32)), int(rng.integers(0, 5))))

    for _ in range(RANDOM_CASES):
        tau = topologies[int(rng.integers(len(topologies)))]
        ctx = tau.context
        a = SoftSet(ctx, int(rng.integers(0, ctx.full_mask + 1)))
        b = SoftSet(ctx, int(rng.integers(0, ctx.full_mask + 1)))
        assert ~(a | b) == ~a & ~b
        assert ~(a & b) == ~a | ~b
        cl_a = soft_closure(tau, a)
        assert a <= cl_a
        assert soft_closure(tau, cl_a) == cl_a
        assert soft_closure(tau, a | b) == cl_a | soft_closure(tau, b)
        assert soft_interior(tau, a) == ~soft_closure(tau, ~a)
        assert parameterwise_closure(tau, a) <= cl_a


def test_mapping_laws_seeded(rng):
    for _ in range(RANDOM_CASES):
        width = int(rng.integers(1, 3))
        source = make_context(int(rng.integers(1, 4)), width, 'x', 'X')
        target = make_context(int(rng.integers(1, 4)), width, 'y', 'Y')
        images = tuple(target.universe[int(i)] for i in rng.integers(0, target.size, size=source.size))
        f = SoftMapping(source, target, images)
        a = SoftSet(source, int(rng.integers(0, source.full_mask + 1)))
        b = SoftSet(target, int(rng.integers(0, target.full_mask + 1)))
        c = SoftSet(target, int(rng.integers(0, target.full_mask + 1)))
        assert (soft_image(f, a) <= b) == (a <= soft_preimage(f, b))
        assert soft_preimage(f, b | c) == soft_preimage(f, b) | soft_preimage(f, c)
        assert soft_preimage(f, b & c) == soft_preimage(f, b) & soft_preimage(f, c)
        assert soft_preimage(f, ~b) == ~soft_preimage(f, b)
        d = SoftSet(source, int(rng.integers(0, source.full_mask + 1)))
        assert soft_image(f, a | d) == soft_image(f, a) | soft_image(f, d)
        assert soft_image(f, a & d) <= soft_image(f, d)
        if f.is_injective:
            assert soft_preimage(f, soft_image(f, a)) == a
        if f.is_surjective:
            assert soft_image(f, soft_preimage(f, b)) == b
