"""Local flat-foldability, mode algebra and 3D reconstruction."""
import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rigami import geometry as geo
from rigami.flatfold import (
    VertexKind,
    classify_vertex,
    is_flat_foldable_quad,
    kawasaki_check_degree4,
    kawasaki_vectors,
)
from rigami.kinematics import (
    SUPPRESSED,
    FoldInconsistent,
    KinematicsError,
    Mode,
    compute_kinematics,
    fold_state_3d,
    kinematics_from_vectors,
    opposite_angle_relations,
    single_vertex_state,
    speed_coefficient,
    vertex_loop_residual,
)
from rigami.samples import flat_foldable_vectors, star_pattern
from rigami.solver import decide_all_creases

from helpers import half_tangents

AXES = [(F(1), F(0)), (F(0), F(1)), (F(-1), F(0)), (F(0), F(-1))]


def _approx_dirs(degrees):
    out = []
    for deg in degrees:
        a = math.radians(deg)
        out.append((F(math.cos(a)).limit_denominator(10**6), F(math.sin(a)).limit_denominator(10**6)))
    return out


def kin_for(ta, tb):
    return kinematics_from_vectors(flat_foldable_vectors(F(0), F(ta), F(tb)))


# -- Kawasaki and classification -------------------------------------------------

def test_kawasaki_right_angles():
    assert kawasaki_vectors(AXES)


def test_kawasaki_constructed_50_70_130_110():
    # sectors (a, b, 180 - a, 180 - b) with rational half tangents near 25 and 35 degrees
    vecs = flat_foldable_vectors(F(0), F(233, 500), F(7, 10))
    assert kawasaki_vectors(vecs)
    assert is_flat_foldable_quad(vecs)


def test_kawasaki_fails_when_alternating_sum_is_nonzero():
    assert not kawasaki_vectors(_approx_dirs([0, 80, 180, 260]))


def test_kawasaki_80_80_100_100_is_balanced():
    # 80 - 80 + 100 - 100 = 0: flat-foldable despite the look of it
    vecs = flat_foldable_vectors(F(0), F(839, 1000), F(839, 1000))
    assert kawasaki_vectors([vecs[0], vecs[1], vecs[2], vecs[3]])


def test_kawasaki_needs_four_vectors():
    with pytest.raises(ValueError):
        kawasaki_vectors(AXES[:3])


def test_degenerate_quad_is_not_flat_foldable():
    vecs = [AXES[0], AXES[0], AXES[2], AXES[2]]
    assert not is_flat_foldable_quad(vecs)


def test_classify_perpendicular_star(cross):
    (v,) = cross.interior_vertices
    got = classify_vertex(cross, v)
    assert got.kind is VertexKind.DEGREE4_FLAT_FOLDABLE
    assert float(got.alpha.mid) == pytest.approx(math.pi / 2)
    assert float(got.beta.mid) == pytest.approx(math.pi / 2)
    assert kawasaki_check_degree4(cross.vertex_star(v))


def test_classify_collinear_pair():
    p = star_pattern([AXES[0], AXES[2]])
    assert classify_vertex(p, p.interior_vertices[0]).kind is VertexKind.COLLINEAR_PAIR


def test_classify_degree_five():
    p = star_pattern(AXES + [(F(1), F(1))])
    assert classify_vertex(p, p.interior_vertices[0]).kind is VertexKind.OTHER


def test_classify_boundary(cross):
    assert classify_vertex(cross, cross.boundary[0]).kind is VertexKind.BOUNDARY


@given(st.fractions(-3, 3, max_denominator=20), half_tangents(F(1, 40), F(40)), half_tangents(F(1, 40), F(40)))
def test_constructed_vertices_pass_kawasaki_under_rotation(t0, ta, tb):
    vecs = flat_foldable_vectors(t0, ta, tb)
    assert is_flat_foldable_quad(vecs)
    # scaling the crease vectors changes nothing
    assert is_flat_foldable_quad([geo.scale(v, 7) for v in vecs])


# -- speed coefficients ----------------------------------------------------------

def test_three_four_five_twist_has_p_one_half():
    kin = kin_for(F(1, 3), 1)
    assert kin.tan_half_alpha == F(1, 3)
    assert kin.p_a == F(1, 2) and kin.p_b == F(1, 2)


def test_right_angled_vertex_has_zero_coefficients():
    kin = kinematics_from_vectors(AXES)
    assert kin.p_a == 0 and kin.p_b == 0
    assert kin.modes() == ()


def test_seven_ninths_twist_has_p_one_eighth():
    kin = kin_for(F(7, 9), 1)
    assert kin.p_a == F(1, 8) and kin.p_b == F(1, 8)


def test_speed_coefficient_table():
    kin = kin_for(F(1, 3), 1)
    assert speed_coefficient(kin, Mode.A, 3, 0) == F(1, 2)
    assert speed_coefficient(kin, Mode.A, 0, 1) == -2
    assert [speed_coefficient(kin, Mode.A, i, (i + 1) % 4) for i in range(4)] == [-2, F(-1, 2), 2, F(1, 2)]
    assert [speed_coefficient(kin, Mode.B, i, (i + 1) % 4) for i in range(4)] == [F(-1, 2), 2, F(1, 2), -2]


def test_equal_sectors_suppress_mode_b():
    kin = kin_for(F(1, 2), F(1, 2))
    assert kin.p_b == 0
    assert speed_coefficient(kin, Mode.B, 1, 2) is SUPPRESSED
    assert speed_coefficient(kin, Mode.A, 1, 2) == -kin.p_a


def test_speed_coefficient_needs_adjacent_creases():
    with pytest.raises(ValueError):
        speed_coefficient(kin_for(F(1, 3), 1), Mode.A, 0, 2)


def test_non_degree_four_star_is_rejected():
    p = star_pattern(AXES + [(F(1), F(1))])
    with pytest.raises(KinematicsError):
        compute_kinematics(p.vertex_star(p.interior_vertices[0]))


@given(half_tangents(F(1, 40), F(40)), half_tangents(F(1, 40), F(40)))
def test_coefficients_bounded_and_cycle_product_is_one(ta, tb):
    kin = kin_for(ta, tb)
    assert abs(kin.p_a) < 1 and abs(kin.p_b) < 1
    for m in kin.modes():
        prod = F(1)
        for i in range(4):
            prod *= speed_coefficient(kin, m, i, (i + 1) % 4)
        assert prod == 1


@given(half_tangents(), half_tangents())
def test_strictly_smallest_sector_gives_positive_coefficients(ta, tb):
    # alpha < beta < pi/2 makes alpha the strict minimum of (a, b, pi - a, pi - b)
    if ta >= tb:
        ta, tb = tb, ta
    if ta == tb:
        return
    kin = kin_for(ta, tb)
    assert 0 < kin.p_a < 1 and 0 < kin.p_b < 1


# -- single vertex states --------------------------------------------------------

def test_single_vertex_states():
    kin = kin_for(F(1, 3), 1)
    assert single_vertex_state(kin, Mode.A, 0) == (0, 0, 0, 0)
    assert single_vertex_state(kin, Mode.A, 1) == (1, F(-1, 2), 1, F(1, 2))
    assert single_vertex_state(kin, Mode.B, 1) == (F(-1, 2), 1, F(1, 2), 1)


@pytest.mark.parametrize(
    "rho,ok",
    [((F(1, 3), F(-1, 5), F(1, 3), F(1, 5)), True), ((F(-1, 5), F(1, 3), F(1, 5), F(1, 3)), True),
     ((F(1, 10), F(2, 10), F(3, 10), F(4, 10)), False)],
)
def test_opposite_angle_relations(rho, ok):
    assert opposite_angle_relations(rho) is ok


@given(half_tangents(F(1, 40), F(40)), half_tangents(F(1, 40), F(40)))
def test_mode_states_satisfy_opposite_angle_relations(ta, tb):
    kin = kin_for(ta, tb)
    for m in kin.modes():
        for k in range(-5, 5):
            t = F(k, 5) + F(1, 7)
            state = single_vertex_state(kin, m, t)
            rho = [2 * math.atan(float(x)) for x in state]
            assert opposite_angle_relations(rho, tol=1e-12)


@given(half_tangents(F(1, 40), F(40)), half_tangents(F(1, 40), F(40)), st.fractions(-1, 1, max_denominator=50))
def test_mode_states_close_the_vertex_loop(ta, tb, t):
    kin = kin_for(ta, tb)
    for m in kin.modes():
        assert vertex_loop_residual(kin, single_vertex_state(kin, m, t)) <= 1e-9


def test_wrong_state_does_not_close():
    kin = kin_for(F(1, 3), 1)
    assert vertex_loop_residual(kin, (F(1, 2), F(1, 2), F(1, 2), F(1, 2))) > 1e-3


# -- 3D placement ----------------------------------------------------------------

def _single_vertex_speeds(p, mode):
    v = p.interior_vertices[0]
    star = p.vertex_star(v)
    kin = compute_kinematics(star)
    return kin, dict(zip(star.creases, single_vertex_state(kin, mode, 1)))


def test_flat_state_places_every_face_at_identity():
    p = star_pattern(flat_foldable_vectors(F(0), F(1, 3), F(1)))
    _, speeds = _single_vertex_speeds(p, Mode.A)
    state = fold_state_3d(p, speeds, 0)
    for r, tr in state.face_placements.values():
        assert all(abs(r[i, j] - (i == j)) == 0 for i in range(3) for j in range(3))
        assert all(tr[i] == 0 for i in range(3))


@pytest.mark.parametrize("mode", [Mode.A, Mode.B])
def test_single_vertex_fold_closes(mode):
    p = star_pattern(flat_foldable_vectors(F(0), F(1, 3), F(1)))
    kin, speeds = _single_vertex_speeds(p, mode)
    assert vertex_loop_residual(kin, single_vertex_state(kin, mode, F(3, 10))) <= 1e-12
    state = fold_state_3d(p, speeds, F(3, 10))
    assert state.max_residual <= 1e-12
    assert len(state.face_placements) == len(p.faces)


def test_inconsistent_speeds_are_reported():
    p = star_pattern(flat_foldable_vectors(F(0), F(1, 3), F(1)))
    speeds = {c: F(1) for c in p.creases}
    with pytest.raises(FoldInconsistent):
        fold_state_3d(p, speeds, F(1, 2))


def test_square_twist_folds_without_residual(twist):
    v = decide_all_creases(twist)
    assert v.answer
    state = fold_state_3d(twist, v.certificate.crease_speeds, F(1, 5))
    assert state.max_residual <= 1e-12
    js = state.to_json()
    assert js["t"] == "1/5" and len(js["faces"]) == len(twist.faces)
