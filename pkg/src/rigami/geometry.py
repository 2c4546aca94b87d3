"""Exact planar predicates on rational points."""
from __future__ import annotations

from fractions import Fraction
from functools import cmp_to_key
from typing import Sequence, Tuple

import mpmath

from .scalar import Interval, Scalar, sqrt

Point = Tuple[Fraction, Fraction]


def sub(p: Point, q: Point) -> Point:
    return (p[0] - q[0], p[1] - q[1])


def add(p: Point, q: Point) -> Point:
    return (p[0] + q[0], p[1] + q[1])


def scale(p: Point, k) -> Point:
    return (p[0] * k, p[1] * k)


def dot(p: Point, q: Point) -> Fraction:
    return p[0] * q[0] + p[1] * q[1]


def cross(p: Point, q: Point) -> Fraction:
    return p[0] * q[1] - p[1] * q[0]


def perp(p: Point) -> Point:
    """Counterclockwise quarter turn, (x, y) -> (-y, x)."""
    return (-p[1], p[0])


def norm2(p: Point) -> Fraction:
    return dot(p, p)


def orient(a: Point, b: Point, c: Point) -> int:
    v = cross(sub(b, a), sub(c, a))
    return (v > 0) - (v < 0)


def _half(v: Point) -> int:
    # 0 for directions in [0, pi), 1 for [pi, 2pi)
    return 0 if (v[1] > 0 or (v[1] == 0 and v[0] > 0)) else 1


def compare_directions(u: Point, v: Point) -> int:
    """Order nonzero vectors by polar angle in [0, 2pi)."""
    hu, hv = _half(u), _half(v)
    if hu != hv:
        return -1 if hu < hv else 1
    c = cross(u, v)
    return -1 if c > 0 else (1 if c < 0 else 0)


direction_key = cmp_to_key(compare_directions)


def opposite(u: Point, v: Point) -> bool:
    """True iff u and v point in exactly opposite directions."""
    return cross(u, v) == 0 and dot(u, v) < 0


def on_segment_interior(p: Point, a: Point, b: Point) -> bool:
    if orient(a, b, p) != 0:
        return False
    return dot(sub(p, a), sub(b, a)) > 0 and dot(sub(p, b), sub(a, b)) > 0


def segments_cross(a: Point, b: Point, c: Point, d: Point) -> bool:
    """Proper or improper intersection of two segments that share no endpoint."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    if o1 != o2 and o3 != o4 and 0 not in (o1, o2, o3, o4):
        return True
    # touching or collinear overlap
    return (
        (o1 == 0 and _within(c, a, b))
        or (o2 == 0 and _within(d, a, b))
        or (o3 == 0 and _within(a, c, d))
        or (o4 == 0 and _within(b, c, d))
    )


def _within(p: Point, a: Point, b: Point) -> bool:
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= p[1] <= max(a[1], b[1])


def signed_area2(poly: Sequence[Point]) -> Fraction:
    """Twice the signed area of a closed polygon."""
    n = len(poly)
    return sum((cross(poly[i], poly[(i + 1) % n]) for i in range(n)), Fraction(0))


def point_in_polygon(p: Point, poly: Sequence[Point]) -> int:
    """1 inside, 0 on the boundary, -1 outside (exact)."""
    n = len(poly)
    inside = False
    for i in range(n):
        a, b = poly[i], poly[(i + 1) % n]
        if orient(a, b, p) == 0 and _within(p, a, b):
            return 0
        if (a[1] > p[1]) != (b[1] > p[1]):
            # p is left of the crossing point of the upward ray's edge
            if orient(a, b, p) == (1 if b[1] > a[1] else -1):
                inside = not inside
    return 1 if inside else -1


def reflect(p: Point, q: Point) -> Point:
    """Mirror ``p`` across the line through the origin spanned by ``q``."""
    qq = dot(q, q)
    if qq == 0:
        raise ValueError("cannot reflect through the zero vector")
    qp = perp(q)
    k = 2 * dot(p, qp) / qq
    return (p[0] - k * qp[0], p[1] - k * qp[1])


def tan_half_angle(u: Point, v: Point, bits: int) -> Scalar:
    """tan(theta/2) for the counterclockwise angle theta in (0, pi] from u to v.

    Uses tan(theta/2) = csc(theta) - cot(theta) = (|u||v| - u.v) / (u x v);
    the square root is exact whenever |u|^2 |v|^2 is a rational square.
    """
    c = cross(u, v)
    if c <= 0:
        raise ValueError("tan_half_angle needs a counterclockwise angle in (0, pi)")
    return (sqrt(norm2(u) * norm2(v), bits) - dot(u, v)) / c


def rotation_point(t: Fraction) -> Point:
    """Unit vector at angle 2*atan(t): ((1-t^2)/(1+t^2), 2t/(1+t^2))."""
    t = Fraction(t)
    d = 1 + t * t
    return ((1 - t * t) / d, 2 * t / d)


def rotate(v: Point, t: Fraction) -> Point:
    """Rotate ``v`` counterclockwise by 2*atan(t) with a rational matrix."""
    c, s = rotation_point(t)
    return (c * v[0] - s * v[1], s * v[0] + c * v[1])


def ccw_angle(u: Point, v: Point, bits: int) -> Interval:
    """Enclosure of the counterclockwise angle from u to v in [0, 2pi), radians.

    Informational only: no decision in the package depends on angles.
    """
    c, d = Fraction(cross(u, v)), Fraction(dot(u, v))
    with mpmath.workprec(bits + 32):
        a = mpmath.atan2(mpmath.mpf(c.numerator) / c.denominator, mpmath.mpf(d.numerator) / d.denominator)
        if a < 0:
            a += 2 * mpmath.pi
        a = _mpf_fraction(a)
    pad = Fraction(1, 1 << bits) * max(1, abs(a))
    return Interval.around(a - pad, a + pad, bits)


def _mpf_fraction(x) -> Fraction:
    man, exp = mpmath.mpf(x).man_exp
    return Fraction(man) * (Fraction(2) ** exp)
