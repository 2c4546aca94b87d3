"""Small reference patterns used by tests, scripts and the CLI."""
from __future__ import annotations

from fractions import Fraction
from typing import Dict, List, Sequence, Tuple

from . import geometry as geo
from .geometry import Point
from .pattern import CreasePattern, make_pattern


def _box_hit(origin: Point, d: Point, half: Fraction) -> Point:
    # where the ray origin + s*d first leaves the square [-half, half]^2
    best = None
    for axis in (0, 1):
        if d[axis] != 0:
            target = half if d[axis] > 0 else -half
            s = (target - origin[axis]) / d[axis]
            if s > 0 and (best is None or s < best):
                best = s
    return geo.add(origin, geo.scale(d, best))


def star_pattern(vectors: Sequence[Point], half: Fraction = Fraction(2)) -> CreasePattern:
    """One interior vertex at the origin with rays to the boundary of a square."""
    return rays_pattern([((Fraction(0), Fraction(0)), v) for v in vectors], [], half)


def rays_pattern(
    rays: Sequence[Tuple[Point, Point]],
    segments: Sequence[Tuple[Point, Point]],
    half: Fraction,
    meta=None,
) -> CreasePattern:
    """Pattern on [-half, half]^2 from rays (origin, direction) and interior segments.

    Rays and segments must not cross each other except at shared endpoints.
    """
    half = Fraction(half)
    pts: Dict[Point, int] = {}
    order: List[Point] = []

    def pid(p):
        p = (Fraction(p[0]), Fraction(p[1]))
        if p not in pts:
            pts[p] = len(order)
            order.append(p)
        return pts[p]

    creases = []
    for o, d in rays:
        o = (Fraction(o[0]), Fraction(o[1]))
        d = (Fraction(d[0]), Fraction(d[1]))
        creases.append((pid(o), pid(_box_hit(o, d, half))))
    for a, b in segments:
        creases.append((pid(a), pid(b)))
    for c in ((-half, -half), (half, -half), (half, half), (-half, half)):
        pid(c)
    on_border = [i for i, p in enumerate(order) if abs(p[0]) == half or abs(p[1]) == half]
    center = (Fraction(0), Fraction(0))
    on_border.sort(key=lambda i: geo.direction_key(geo.sub(order[i], center)))
    return make_pattern(order, creases, on_border, meta=meta)


def cross_pattern() -> CreasePattern:
    """Two perpendicular straight creases through one vertex."""
    return star_pattern([(1, 0), (0, 1), (-1, 0), (0, -1)])


SQUARE_TWIST_CORNERS = ((-7, -1), (1, -7), (7, 1), (-1, 7))
# each corner emits two axis-parallel pleat rays
SQUARE_TWIST_RAYS = (((-1, 0), (0, 1)), ((-1, 0), (0, -1)), ((1, 0), (0, -1)), ((0, 1), (1, 0)))


def square_twist(half: Fraction = Fraction(20)) -> CreasePattern:
    """Square twist with twist angle arctan(3/4): corner sectors (a, 90, 180-a, 90).

    The central square (side 10) is turned so that its pleats are axis-parallel.
    """
    corners = [(Fraction(x), Fraction(y)) for x, y in SQUARE_TWIST_CORNERS]
    rays = [(corners[k], d) for k in range(4) for d in SQUARE_TWIST_RAYS[k]]
    segs = [(corners[k], corners[(k + 1) % 4]) for k in range(4)]
    return rays_pattern(rays, segs, half, meta={"name": "square-twist"})


def rational_unit(t: Fraction) -> Point:
    return geo.rotation_point(Fraction(t))


def flat_foldable_vectors(t0: Fraction, ta: Fraction, tb: Fraction) -> List[Point]:
    """Exact crease directions of a flat-foldable vertex.

    Creases sit at angles phi, phi+alpha, phi+alpha+beta, phi+pi+beta where
    phi = 2 atan(t0), alpha = 2 atan(ta), beta = 2 atan(tb).  Every direction
    is a rational unit vector, so all sector tangents are rational.
    """
    u0 = rational_unit(t0)
    u1 = geo.rotate(u0, ta)
    u2 = geo.rotate(u1, tb)
    u3 = geo.scale(geo.rotate(u0, tb), -1)
    return [u0, u1, u2, u3]
