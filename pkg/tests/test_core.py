"""Scalars, exact predicates and crease-pattern structure."""
import json
import math
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from rigami import geometry as geo
from rigami.pattern import (
    PatternError,
    export_svg,
    load_pattern,
    make_pattern,
    pattern_from_dict,
    save_pattern,
)
from rigami.samples import rays_pattern, square_twist, star_pattern
from rigami.scalar import (
    Interval,
    PrecisionExhausted,
    decide,
    format_rational,
    in_band,
    parse_rational,
    sign,
    sqrt,
)

UNIT = [(0, 0), (1, 0), (1, 1), (0, 1)]


# -- scalars --------------------------------------------------------------------

def test_sqrt_exact_for_rational_squares():
    assert sqrt(F(9, 4)) == F(3, 2)
    assert isinstance(sqrt(F(9, 4)), F)


def test_sqrt_interval_encloses_root_two():
    r = sqrt(F(2))
    assert isinstance(r, Interval)
    assert r.lo * r.lo <= 2 <= r.hi * r.hi
    assert r.width < F(1, 2**100)


@pytest.mark.parametrize("text,value", [("3/4", F(3, 4)), ("-7", F(-7)), (" 10/4 ", F(5, 2)), (5, F(5))])
def test_parse_rational(text, value):
    assert parse_rational(text) == value


@pytest.mark.parametrize("bad", ["0.25", "1/0", "x", True, 0.5, None])
def test_parse_rational_rejects_non_rationals(bad):
    with pytest.raises(ValueError):
        parse_rational(bad)


@given(st.fractions(max_denominator=10**6))
def test_rational_text_round_trip(q):
    assert parse_rational(format_rational(q)) == q


def test_sign_and_band_are_undecided_on_straddling_intervals():
    iv = Interval(F(-1, 10), F(1, 10))
    assert sign(iv) is None
    assert in_band(iv, F(0), F(1)) is None
    assert in_band(F(1, 2), F(0), F(1)) is True
    assert in_band(F(2), F(0), F(1)) is False


def test_decide_refines_then_gives_up():
    calls = []

    def evaluate(bits):
        calls.append(bits)
        return bits

    assert decide("x", evaluate, lambda b: True if b >= 512 else None, 128, 4096) is True
    assert calls == [128, 256, 512]
    with pytest.raises(PrecisionExhausted):
        decide("never", evaluate, lambda b: None, 128, 1024)


# -- geometry -------------------------------------------------------------------

@pytest.mark.parametrize(
    "p,q,out",
    [((1, 0), (1, 0), (1, 0)), ((0, 1), (1, 0), (0, -1)), ((1, 2), (1, 1), (2, 1))],
)
def test_reflect_examples(p, q, out):
    p = (F(p[0]), F(p[1]))
    q = (F(q[0]), F(q[1]))
    assert geo.reflect(p, q) == (F(out[0]), F(out[1]))


def test_reflect_through_zero_vector_fails():
    with pytest.raises(ValueError):
        geo.reflect((F(1), F(0)), (F(0), F(0)))


points = st.tuples(st.fractions(-20, 20, max_denominator=30), st.fractions(-20, 20, max_denominator=30))


@given(points, points.filter(lambda q: q != (0, 0)))
def test_reflection_is_an_isometric_involution(p, q):
    r = geo.reflect(p, q)
    assert geo.reflect(r, q) == p
    assert geo.norm2(r) == geo.norm2(p)


@given(st.fractions(-5, 5, max_denominator=40), st.fractions(-5, 5, max_denominator=40))
def test_rational_rotations_compose_like_angles(s, t):
    u = geo.rotation_point(s)
    assert geo.norm2(u) == 1
    # 2 atan(s) + 2 atan(t) equals 2 atan((s + t) / (1 - s t)) modulo 2 pi
    v = geo.rotate(u, t)
    if s * t != 1:
        assert v == geo.rotation_point((s + t) / (1 - s * t))


def test_rotation_by_one_third():
    assert geo.rotate((F(1), F(0)), F(1, 3)) == (F(4, 5), F(3, 5))
    assert geo.rotate((F(3), F(-2)), F(0)) == (F(3), F(-2))


def test_tan_half_angle_of_three_four_five():
    assert geo.tan_half_angle((F(1), F(0)), (F(4), F(3)), 128) == F(1, 3)
    assert geo.tan_half_angle((F(1), F(0)), (F(0), F(1)), 128) == 1


# -- patterns -------------------------------------------------------------------

def test_square_with_one_diagonal_has_two_faces():
    p = make_pattern(UNIT, [(0, 2)], [0, 1, 2, 3])
    assert len(p.faces) == 2
    assert p.creases == (4,)


def test_both_diagonals_make_four_triangles():
    pts = UNIT + [(F(1, 2), F(1, 2))]
    p = make_pattern(pts, [(4, k) for k in range(4)], [0, 1, 2, 3])
    assert len(p.faces) == 4
    assert all(len(f.vertices) == 3 for f in p.faces)


def test_two_by_two_grid():
    pts = [(x, y) for y in range(3) for x in range(3)]
    boundary = [0, 1, 2, 5, 8, 7, 6, 3]
    p = make_pattern(pts, [(1, 4), (4, 7), (3, 4), (4, 5)], boundary)
    assert len(p.faces) == 4
    assert all(len(f.vertices) == 4 for f in p.faces)
    assert p.interior_vertices == (4,)


def test_crossing_edges_are_rejected():
    with pytest.raises(PatternError, match="cross"):
        make_pattern(UNIT, [(0, 2), (1, 3)], [0, 1, 2, 3])


def test_duplicate_vertices_are_rejected():
    with pytest.raises(PatternError):
        make_pattern(UNIT + [(0, 0)], [], [0, 1, 2, 3])


def test_dangling_crease_is_rejected():
    pts = UNIT + [(F(1, 2), F(1, 2))]
    with pytest.raises(PatternError):
        make_pattern(pts, [(0, 4)], [0, 1, 2, 3])


def test_malformed_dict():
    with pytest.raises(PatternError):
        pattern_from_dict({"vertices": [[0, 0]], "edges": [[0, "1", "B"]], "boundary": [0]})
    with pytest.raises(PatternError):
        pattern_from_dict({"vertices": [["0.5", 0]], "edges": [], "boundary": [0]})


def test_square_twist_structure(twist):
    assert len(twist.interior_vertices) == 4
    assert all(len(twist.incident_creases(v)) == 4 for v in twist.interior_vertices)
    inner = [f for f in twist.faces if all(v in twist.interior_vertices for v in f.vertices)]
    assert len(inner) == 1
    assert len(inner[0].vertices) == 4
    assert all(twist.edges[e].is_crease for e in inner[0].edges)


def test_euler_characteristic(twist):
    V, E, Fc = len(twist.vertices), len(twist.edges), len(twist.faces)
    assert V - E + Fc == 1


def test_vertex_star_of_axis_cross(cross):
    (v,) = cross.interior_vertices
    star = cross.vertex_star(v)
    assert star.degree == 4
    for s in star.sector_angles:
        assert float(s.lo) <= math.pi / 2 + 1e-12 and float(s.hi) >= math.pi / 2 - 1e-12
        assert s.width < F(1, 2**100)


def test_vertex_star_sector_angles_in_degrees():
    # directions 0, 50, 120, 230 degrees, rounded to rationals
    dirs = []
    for deg in (0, 50, 120, 230):
        a = math.radians(deg)
        dirs.append((F(math.cos(a)).limit_denominator(10**9), F(math.sin(a)).limit_denominator(10**9)))
    p = star_pattern(dirs)
    star = p.vertex_star(p.interior_vertices[0])
    got = sorted(float(s.mid) * 180 / math.pi for s in star.sector_angles)
    assert got == pytest.approx([50, 70, 110, 130], abs=1e-6)


def test_boundary_vertex_has_no_star(twist):
    with pytest.raises(PatternError):
        twist.vertex_star(twist.boundary[0])


def test_save_load_round_trip(tmp_path, twist):
    path = tmp_path / "twist.json"
    save_pattern(twist, path)
    assert load_pattern(path) == twist
    assert json.loads(path.read_text())["meta"] == {"name": "square-twist"}


def test_load_rejects_bad_json(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text("{not json")
    with pytest.raises(PatternError):
        load_pattern(path)


def test_svg_of_bare_square_has_only_border(tmp_path):
    path = tmp_path / "sq.svg"
    export_svg(make_pattern(UNIT, [], [0, 1, 2, 3]), path)
    text = path.read_text()
    assert text.count("<line") == 4
    assert text.count('class="border"') == 4


def test_svg_of_twist_draws_every_edge(tmp_path, twist):
    path = tmp_path / "t.svg"
    export_svg(twist, path)
    assert path.read_text().count("<line") == len(twist.edges)


def test_rays_pattern_clips_to_box():
    o = (F(0), F(0))
    p = rays_pattern([(o, (F(1), F(2))), (o, (F(-1), F(-2)))], [], F(4))
    ends = {p.vertices[p.edges[c].v] for c in p.creases}
    assert ends == {(F(2), F(4)), (F(-2), F(-4))}
