"""Exact arrangement of line segments into a planar crease pattern."""
from __future__ import annotations

from collections import defaultdict
from fractions import Fraction
from math import floor
from typing import Dict, Iterable, List, Sequence, Tuple

from . import geometry as geo
from .geometry import Point
from .pattern import Assignment, CreasePattern, Edge

Segment = Tuple[Point, Point]


def _pt(p) -> Point:
    return (Fraction(p[0]), Fraction(p[1]))


def _line_key(a: Point, b: Point):
    # normalised (A, B, C) with A x + B y = C and the first nonzero of A, B equal to 1
    A = b[1] - a[1]
    B = a[0] - b[0]
    C = A * a[0] + B * a[1]
    k = A if A != 0 else B
    return (A / k, B / k, C / k)


def merge_collinear(segments: Iterable[Segment]) -> List[Segment]:
    """Union overlapping or touching collinear segments."""
    groups: Dict[tuple, List[Tuple[Point, Point]]] = defaultdict(list)
    for a, b in segments:
        a, b = _pt(a), _pt(b)
        if a == b:
            continue
        if b < a:
            a, b = b, a
        groups[_line_key(a, b)].append((a, b))
    out = []
    for key in sorted(groups):
        segs = sorted(groups[key])
        cur_a, cur_b = segs[0]
        for a, b in segs[1:]:
            if a <= cur_b:
                if b > cur_b:
                    cur_b = b
            else:
                out.append((cur_a, cur_b))
                cur_a, cur_b = a, b
        out.append((cur_a, cur_b))
    return out


def _intersection(s: Segment, t: Segment):
    (a, b), (c, d) = s, t
    r = geo.sub(b, a)
    q = geo.sub(d, c)
    den = geo.cross(r, q)
    if den == 0:
        return None  # parallel; collinear pieces were merged already
    w = geo.sub(c, a)
    u = geo.cross(w, q) / den
    v = geo.cross(w, r) / den
    if 0 <= u <= 1 and 0 <= v <= 1:
        return geo.add(a, geo.scale(r, u))
    return None


def arrange(segments: Iterable[Segment], bucket: Fraction = Fraction(8)) -> List[Segment]:
    """Split merged segments at every mutual intersection point."""
    segs = merge_collinear(segments)
    grid: Dict[Tuple[int, int], List[int]] = defaultdict(list)
    for i, (a, b) in enumerate(segs):
        x0, x1 = sorted((a[0], b[0]))
        y0, y1 = sorted((a[1], b[1]))
        for gx in range(floor(x0 / bucket), floor(x1 / bucket) + 1):
            for gy in range(floor(y0 / bucket), floor(y1 / bucket) + 1):
                grid[(gx, gy)].append(i)
    cuts: List[set] = [set() for _ in segs]
    seen = set()
    for ids in grid.values():
        for x in range(len(ids)):
            for y in range(x + 1, len(ids)):
                i, j = ids[x], ids[y]
                if (i, j) in seen:
                    continue
                seen.add((i, j))
                p = _intersection(segs[i], segs[j])
                if p is not None:
                    cuts[i].add(p)
                    cuts[j].add(p)
    out = []
    for (a, b), pts in zip(segs, cuts):
        pts = sorted(pts | {a, b})
        for p, q in zip(pts, pts[1:]):
            out.append((p, q))
    return out


def pattern_from_segments(
    segments: Iterable[Segment],
    box: Tuple[Fraction, Fraction, Fraction, Fraction],
    meta=None,
    merge_pass_through: bool = True,
    arranged: bool = False,
) -> CreasePattern:
    """Crease pattern on the rectangle ``box = (x0, y0, x1, y1)``.

    Segments are clipped by the caller; pieces lying on the rectangle edge
    are dropped.  Interior vertices with exactly two opposite creases are
    removed when ``merge_pass_through`` is set.  With ``arranged`` the
    segments are taken as already split at every crossing.
    """
    x0, y0, x1, y1 = (Fraction(v) for v in box)

    def on_edge(p):
        return p[0] in (x0, x1) or p[1] in (y0, y1)

    pieces = []
    for a, b in (sorted(set(segments)) if arranged else arrange(segments)):
        if (a[0] == b[0] and a[0] in (x0, x1)) or (a[1] == b[1] and a[1] in (y0, y1)):
            continue
        pieces.append((a, b))

    if merge_pass_through:
        pieces = _merge_degree_two(pieces, on_edge)

    index: Dict[Point, int] = {}
    pts: List[Point] = []

    def pid(p):
        if p not in index:
            index[p] = len(pts)
            pts.append(p)
        return index[p]

    crease_pairs = [(pid(a), pid(b)) for a, b in pieces]
    for c in ((x0, y0), (x1, y0), (x1, y1), (x0, y1)):
        pid(c)
    border = [i for i, p in enumerate(pts) if on_edge(p)]
    cx, cy = (x0 + x1) / 2, (y0 + y1) / 2
    border.sort(key=lambda i: geo.direction_key((pts[i][0] - cx, pts[i][1] - cy)))
    edges = [Edge(border[k], border[(k + 1) % len(border)], Assignment.BORDER) for k in range(len(border))]
    edges += [Edge(u, v) for u, v in crease_pairs]
    return CreasePattern(tuple(pts), tuple(edges), tuple(border), dict(meta or {}))


def _merge_degree_two(pieces: List[Segment], on_edge) -> List[Segment]:
    inc: Dict[Point, List[int]] = defaultdict(list)
    for i, (a, b) in enumerate(pieces):
        inc[a].append(i)
        inc[b].append(i)
    alive = [True] * len(pieces)
    segs = [list(s) for s in pieces]
    for p in sorted(inc):
        ids = [i for i in inc[p] if alive[i]]
        if len(ids) != 2 or on_edge(p):
            continue
        i, j = ids
        a = segs[i][0] if segs[i][1] == p else segs[i][1]
        b = segs[j][0] if segs[j][1] == p else segs[j][1]
        if not geo.opposite(geo.sub(a, p), geo.sub(b, p)):
            continue
        # replace i by a-b, drop j, and repoint b's incidence
        segs[i] = [a, b]
        alive[j] = False
        inc[b] = [i if k == j else k for k in inc[b]]
        inc[p] = []
    return [tuple(s) for s, ok in zip(segs, alive) if ok]
