"""Partition compiled to a closed chain: tanh, grid rounding, epsilon, end to end."""
from fractions import Fraction as F

import mpmath
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rigami import geometry as geo
from rigami.flatfold import VertexKind, classify_vertex, kawasaki_vectors
from rigami.oracles import partition_oracle
from rigami.partition import (
    ConstructionError,
    PartitionInstance,
    ReductionParams,
    build_boundary,
    build_chain,
    chain_vertex_signs,
    closure_deviation,
    compute_epsilon,
    design_angles,
    reduce_partition,
    round_to_grid,
    subset_from_certificate,
    tanh_rational,
)
from rigami.solver import decide_all_creases, verify_certificate


def tanh_ref(x):
    with mpmath.workprec(200):
        return mpmath.tanh(mpmath.mpf(x.numerator) / x.denominator)


def tanh_error(t, x):
    with mpmath.workprec(200):
        return abs(mpmath.mpf(t.numerator) / t.denominator - tanh_ref(x))


def mp(q):
    with mpmath.workprec(200):
        return mpmath.mpf(q.numerator) / q.denominator


# -- tanh --------------------------------------------------------------------------

def test_tanh_near_zero():
    t = tanh_rational(F(1, 10**6), F(1, 10**3))
    assert 0 <= t <= F(2, 10**6)


@pytest.mark.parametrize("x,eps", [(F(1, 2), F(1, 10**6)), (F(1, 44), F(1, 10**9))])
def test_tanh_matches_series_oracle(x, eps):
    t = tanh_rational(x, eps)
    assert tanh_error(t, x) <= mp(eps)


def test_tanh_known_digits():
    assert abs(float(tanh_rational(F(1, 2), F(1, 10**6))) - 0.4621171572) < 1e-6
    assert abs(float(tanh_rational(F(1, 44), F(1, 10**9))) - 0.0227233605) < 1e-9


@given(st.fractions(F(1, 1000), F(999, 1000), max_denominator=1000), st.integers(2, 12))
@settings(max_examples=40)
def test_tanh_error_bound(x, k):
    eps = F(1, 10**k)
    t = tanh_rational(x, eps)
    assert tanh_error(t, x) <= mp(eps)


def test_tanh_domain():
    with pytest.raises(ValueError):
        tanh_rational(F(1), F(1, 10))
    with pytest.raises(ValueError):
        tanh_rational(F(1, 2), F(0))


# -- instances and angles ----------------------------------------------------------

def test_instance_needs_more_than_four_elements():
    with pytest.raises(ValueError):
        PartitionInstance((1, 2, 3, 4))
    with pytest.raises(ValueError):
        PartitionInstance((1, 2, 3, 4, 0))


def test_equal_elements_give_equal_angles():
    t = design_angles(PartitionInstance((1,) * 5), F(1, 10**8))
    assert len(set(t)) == 1
    assert abs(float(t[0]) - float(tanh_ref(F(1, 10)))) < 1e-8


def test_first_angle_of_reference_instance():
    t = design_angles(PartitionInstance((1, 2, 3, 4, 5, 7)), F(1, 10**9))
    assert abs(float(t[0]) - float(tanh_ref(F(1, 44)))) <= 1e-9


elements = st.lists(st.integers(1, 9), min_size=5, max_size=7)


@given(elements)
@settings(max_examples=30)
def test_speed_coefficients_stay_in_range(a):
    inst = PartitionInstance(a)
    for t in design_angles(inst, F(1, 10**6)):
        p = (1 - t) / (1 + t)
        assert F(26, 100) < p < 1


# -- chain geometry -----------------------------------------------------------------

def test_grid_rounding_ties_go_up():
    assert round_to_grid((F(1, 4), F(-1, 4)), 2) == (F(1, 2), F(0))
    assert round_to_grid((F(1, 3), F(2, 3)), 3) == (F(1, 3), F(2, 3))


def test_rotation_by_zero_and_one_third():
    one = (F(1), F(0))
    assert geo.rotate(one, F(0)) == one
    assert geo.rotate(one, F(1, 3)) == (F(4, 5), F(3, 5))


def test_chain_rejects_bad_tangents():
    with pytest.raises(ConstructionError):
        build_chain([F(1, 2), F(0)], 100)


@pytest.fixture(scope="module", params=[(1, 2, 3, 4, 5, 7), (1, 2, 3, 4, 5, 8), (3, 1, 4, 1, 5), (9, 8, 9, 8, 9, 8)])
def built(request):
    inst = PartitionInstance(request.param)
    out = reduce_partition(inst)
    params = ReductionParams.for_instance(inst)
    chain = build_boundary(build_chain(design_angles(inst, params.epsilon_t), params.G))
    return inst, params, chain, out


def test_difference_vectors_are_near_unit(built):
    inst, params, chain, _ = built
    n = inst.n
    lo, hi = (1 - F(3 * n, 2 * params.G)) ** 2, (1 + F(3 * n, 2 * params.G)) ** 2  # 3/2 > sqrt(2)
    assert chain.d[0] == (1, 0)
    assert chain.v[0] == (0, 0)
    for d in chain.d:
        assert lo <= geo.norm2(d) <= hi


def test_inner_chain_vertices_are_on_the_grid(built):
    inst, params, chain, _ = built
    for p in chain.v[1 : inst.n + 1]:
        assert all((x * params.G).denominator == 1 for x in p)


def test_beta_is_exactly_ninety_degrees(built):
    inst, _, chain, _ = built
    for i in range(1, inst.n + 1):
        assert geo.dot(geo.sub(chain.b[i], chain.v[i]), chain.d[i - 1]) == 0
        assert geo.dot(geo.sub(chain.c[i], chain.v[i]), chain.d[i]) == 0


def test_every_vertex_is_exactly_flat_foldable(built):
    *_, out = built
    p = out.pattern
    assert len(p.interior_vertices) == len(out.meta["elements"]) + 2
    for v in p.interior_vertices:
        assert classify_vertex(p, v).kind is VertexKind.DEGREE4_FLAT_FOLDABLE
        assert kawasaki_vectors(p.vertex_star(v).vectors)


def test_end_vertices_are_mirror_images(built):
    inst, _, chain, _ = built
    n = inst.n
    axis = geo.perp(geo.sub(chain.v[n + 1], chain.v[0]))
    mid = geo.scale(geo.add(chain.v[0], chain.v[n + 1]), F(1, 2))

    def mirror(p):
        return geo.add(mid, geo.reflect(geo.sub(p, mid), axis))

    assert mirror(chain.v[0]) == chain.v[n + 1]
    assert mirror(chain.b[0]) == chain.c[n + 1]
    assert mirror(chain.c[0]) == chain.b[n + 1]
    # the closing crease continues straight through both ends
    for p, q in ((chain.c[0], chain.v[0]), (chain.b[n + 1], chain.v[n + 1])):
        assert geo.cross(geo.sub(p, q), geo.sub(chain.v[n + 1], chain.v[0])) == 0


def test_turns_are_convex_and_below_sixty_degrees(built):
    inst, _, chain, _ = built
    v = chain.v
    m = len(v)
    for i in range(m):
        a = geo.sub(v[i], v[i - 1])
        b = geo.sub(v[(i + 1) % m], v[i])
        assert geo.cross(a, b) > 0
        dot = geo.dot(a, b)
        if 1 <= i <= inst.n:
            # cos(turn) > 1/2
            assert dot > 0 and 4 * dot * dot > geo.norm2(a) * geo.norm2(b)
        else:
            # the two end turns share the rest, each above 120 degrees
            assert dot < 0 and 4 * dot * dot > geo.norm2(a) * geo.norm2(b)


def test_measured_product_error_within_lower_bound(built):
    inst, params, _, out = built
    assert closure_deviation(out) <= params.epsilon_LB


# -- epsilon -------------------------------------------------------------------------

def test_epsilon_window_for_reference_instance():
    inst = PartitionInstance((1, 2, 3, 4, 5, 7))
    p = ReductionParams.for_instance(inst, 64)
    assert p.G == 5 * 64 * 6 * 22
    assert p.epsilon_g == p.epsilon_t == F(1, p.G)
    assert 0 < p.epsilon_LB < p.epsilon < p.epsilon_UB < F(1, 22)
    assert 2 * 64 * 6 * (p.epsilon_g + p.epsilon_t) == F(4, 5 * 22)


def test_doubling_c_at_fixed_grid_doubles_the_error_term():
    inst = PartitionInstance((1, 2, 3, 4, 5, 7))
    eg = F(1, 5 * 256 * 6 * 22)
    lb1, ub1, _ = compute_epsilon(inst, 64, eg, eg)
    lb2, ub2, _ = compute_epsilon(inst, 128, eg, eg)
    assert lb2 == 2 * lb1
    assert F(1, 22) - ub2 == 2 * (F(1, 22) - ub1)


def test_too_large_c_is_reported():
    inst = PartitionInstance((1, 2, 3, 4, 5, 7))
    with pytest.raises(ConstructionError):
        compute_epsilon(inst, 10**6, F(1, 1000), F(1, 1000))


# -- end to end ----------------------------------------------------------------------

def test_yes_instance_and_its_subset():
    out = reduce_partition(PartitionInstance((1, 2, 3, 4, 5, 7)))
    v = decide_all_creases(out.pattern, out.epsilon)
    assert v.answer
    assert verify_certificate(out.pattern, v.certificate)
    picked = subset_from_certificate(out.pattern, v.certificate)
    assert 2 * sum(picked) == 22
    signs = chain_vertex_signs(out.pattern, v.certificate)
    n = 6
    assert signs[n + 1] == 1 and signs[0] == -1


def test_odd_total_is_no():
    out = reduce_partition(PartitionInstance((1, 2, 3, 4, 5, 8)))
    assert not decide_all_creases(out.pattern, out.epsilon).answer


@given(st.lists(st.integers(1, 9), min_size=5, max_size=6))
@settings(max_examples=12)
def test_solver_agrees_with_partition_oracle(a):
    out = reduce_partition(PartitionInstance(a))
    assert decide_all_creases(out.pattern, out.epsilon).answer == partition_oracle(a).answer


def test_meta_records_the_reduction():
    out = reduce_partition(PartitionInstance((1, 2, 3, 4, 5, 7)), c=64)
    m = out.pattern.meta
    assert m["reduction"] == "partition"
    assert m["elements"] == [1, 2, 3, 4, 5, 7]
    assert m["c"] == 64 and m["G"] == str(5 * 64 * 6 * 22)
    assert m["epsilon"] == f"{out.epsilon.numerator}/{out.epsilon.denominator}"
