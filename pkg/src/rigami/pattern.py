"""Crease patterns: exact planar straight-line graphs on a polygonal sheet."""
from __future__ import annotations

import json
from collections import defaultdict
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from functools import cached_property
from math import lcm
from pathlib import Path
from typing import Dict, Iterable, List, Mapping, Optional, Sequence, Tuple

from . import geometry as geo
from .geometry import Point
from .scalar import DEFAULT_BITS, Interval, format_rational, parse_rational


class PatternError(ValueError):
    """Raised for malformed or geometrically invalid crease patterns."""


class Assignment(str, Enum):
    MOUNTAIN = "M"
    VALLEY = "V"
    UNASSIGNED = "U"
    BORDER = "B"


@dataclass(frozen=True)
class Edge:
    u: int
    v: int
    assignment: Assignment = Assignment.UNASSIGNED

    @property
    def is_crease(self) -> bool:
        return self.assignment is not Assignment.BORDER

    def other(self, w: int) -> int:
        return self.v if w == self.u else self.u


@dataclass(frozen=True)
class Face:
    """A bounded face as a counterclockwise cycle.

    ``vertices[i]`` is joined to ``vertices[i+1]`` by edge ``edges[i]``.
    """

    vertices: Tuple[int, ...]
    edges: Tuple[int, ...]

    def pairs(self) -> List[Tuple[int, int]]:
        return list(zip(self.vertices, self.edges))


@dataclass(frozen=True)
class VertexStar:
    center: int
    creases: Tuple[int, ...]  # counterclockwise, starting at the smallest crease id
    vectors: Tuple[Point, ...]  # direction of each crease away from the center
    sector_angles: Tuple[Interval, ...]  # sector i lies between creases i and i+1

    @property
    def degree(self) -> int:
        return len(self.creases)


@dataclass(frozen=True, eq=False)
class CreasePattern:
    """Immutable, validated crease pattern.

    Vertices carry exact rational coordinates; edges reference vertex ids and
    carry an assignment.  ``boundary`` lists the vertex ids of the sheet
    polygon in order; consecutive ids must be joined by border edges.
    """

    vertices: Tuple[Point, ...]
    edges: Tuple[Edge, ...]
    boundary: Tuple[int, ...]
    meta: Mapping = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(
            self, "vertices", tuple((Fraction(x), Fraction(y)) for x, y in self.vertices)
        )
        object.__setattr__(
            self, "edges", tuple(e if isinstance(e, Edge) else Edge(*e) for e in self.edges)
        )
        object.__setattr__(self, "boundary", tuple(self.boundary))
        self._validate()

    # -- equality on canonical form -------------------------------------------------
    def canonical(self) -> dict:
        return {
            "vertices": [[format_rational(x), format_rational(y)] for x, y in self.vertices],
            "edges": [[e.u, e.v, e.assignment.value] for e in self.edges],
            "boundary": list(self.boundary),
            "meta": _jsonable(self.meta),
        }

    def __eq__(self, other):
        if not isinstance(other, CreasePattern):
            return NotImplemented
        return self.canonical() == other.canonical()

    def __hash__(self):
        return hash(json.dumps(self.canonical(), sort_keys=True))

    # -- derived structure ----------------------------------------------------------
    @cached_property
    def creases(self) -> Tuple[int, ...]:
        return tuple(i for i, e in enumerate(self.edges) if e.is_crease)

    @cached_property
    def boundary_set(self) -> frozenset:
        return frozenset(self.boundary)

    @cached_property
    def interior_vertices(self) -> Tuple[int, ...]:
        return tuple(v for v in range(len(self.vertices)) if v not in self.boundary_set)

    @cached_property
    def int_points(self) -> Tuple[Tuple[int, int], ...]:
        """Vertices scaled to integers; fine for any scale-invariant predicate."""
        return tuple(_integer_points(self.vertices))

    @cached_property
    def rotation(self) -> Tuple[Tuple[int, ...], ...]:
        """Incident edge ids around each vertex, counterclockwise by direction."""
        inc: List[List[int]] = [[] for _ in self.vertices]
        for i, e in enumerate(self.edges):
            inc[e.u].append(i)
            inc[e.v].append(i)
        out = []
        for v, es in enumerate(inc):
            pts = self.int_points
            es.sort(key=lambda i: geo.direction_key(geo.sub(pts[self.edges[i].other(v)], pts[v])))
            out.append(tuple(es))
        return tuple(out)

    def edge_vector(self, edge_id: int, origin: int) -> Point:
        e = self.edges[edge_id]
        return geo.sub(self.vertices[e.other(origin)], self.vertices[origin])

    def incident_creases(self, v: int) -> Tuple[int, ...]:
        return tuple(i for i in self.rotation[v] if self.edges[i].is_crease)

    @cached_property
    def faces(self) -> Tuple[Face, ...]:
        return tuple(
            Face(tuple(vs), tuple(es))
            for vs, es in face_orbits(self.int_points, self.edges, self.rotation, range(len(self.edges)))
        )

    def vertex_star(self, v: int, bits: int = DEFAULT_BITS) -> VertexStar:
        if v in self.boundary_set:
            raise PatternError(f"vertex {v} lies on the boundary and has no full star")
        ring = list(self.incident_creases(v))
        if not ring:
            raise PatternError(f"vertex {v} has no creases")
        k = ring.index(min(ring))
        ring = ring[k:] + ring[:k]
        vecs = tuple(self.edge_vector(i, v) for i in ring)
        n = len(ring)
        sectors = tuple(geo.ccw_angle(vecs[i], vecs[(i + 1) % n], bits) for i in range(n))
        if n == 1:
            sectors = (Interval.around(*_two_pi_bounds(bits), bits),)
        return VertexStar(v, tuple(ring), vecs, sectors)

    # -- validation -----------------------------------------------------------------
    def _validate(self):
        V = len(self.vertices)
        if len(set(self.vertices)) != V:
            raise PatternError("duplicate vertex coordinates")
        seen = set()
        for i, e in enumerate(self.edges):
            if not (0 <= e.u < V and 0 <= e.v < V):
                raise PatternError(f"edge {i} references a missing vertex")
            if e.u == e.v:
                raise PatternError(f"edge {i} is a loop")
            key = (min(e.u, e.v), max(e.u, e.v))
            if key in seen:
                raise PatternError(f"edge {i} duplicates another edge")
            seen.add(key)
            if not isinstance(e.assignment, Assignment):
                raise PatternError(f"edge {i} has an invalid assignment")

        if len(self.boundary) < 3 or len(set(self.boundary)) != len(self.boundary):
            raise PatternError("boundary must be a simple cycle of at least 3 vertices")
        if any(not 0 <= b < V for b in self.boundary):
            raise PatternError("boundary references a missing vertex")
        border_keys = set()
        nb = len(self.boundary)
        for i in range(nb):
            a, b = self.boundary[i], self.boundary[(i + 1) % nb]
            border_keys.add((min(a, b), max(a, b)))
        for i, e in enumerate(self.edges):
            key = (min(e.u, e.v), max(e.u, e.v))
            if (e.assignment is Assignment.BORDER) != (key in border_keys):
                raise PatternError(f"edge {i}: border edges must be exactly the boundary cycle")
        if len(border_keys & seen) != nb:
            raise PatternError("boundary cycle is missing border edges")

        # the predicates below are invariant under scaling, so run them on integers
        pts = self.int_points
        poly = [pts[b] for b in self.boundary]
        if geo.signed_area2(poly) == 0:
            raise PatternError("boundary polygon is degenerate")
        # collinear border vertices do not change the region; drop them for speed
        poly = [
            q for i, q in enumerate(poly)
            if geo.orient(poly[i - 1], q, poly[(i + 1) % len(poly)]) != 0
        ]

        degree = [0] * V
        for e in self.edges:
            degree[e.u] += 1
            degree[e.v] += 1
        for v in range(V):
            if v in self.boundary_set:
                continue
            if degree[v] < 2:
                raise PatternError(f"vertex {v} is dangling (degree {degree[v]})")
            if geo.point_in_polygon(pts[v], poly) != 1:
                raise PatternError(f"vertex {v} lies outside the sheet or on its border")

        self._check_planarity(pts)

        for i, e in enumerate(self.edges):
            if e.is_crease:
                (ax, ay), (bx, by) = pts[e.u], pts[e.v]
                mid = ((ax + bx) // 2, (ay + by) // 2)
                if geo.point_in_polygon(mid, poly) != 1:
                    raise PatternError(f"crease {i} is not interior to the sheet")

        if not self._connected():
            raise PatternError("crease pattern is not connected")
        f_bounded = len(self.faces)
        if V - len(self.edges) + f_bounded + 1 != 2:
            raise PatternError("face extraction violates Euler's formula")

    def _check_planarity(self, pts):
        if not self.edges:
            return
        xs = [p[0] for p in pts]
        ys = [p[1] for p in pts]
        x0, y0 = min(xs), min(ys)
        span = max(max(xs) - x0, max(ys) - y0) or 1
        cells = max(1, int(len(self.edges) ** 0.5))

        def cell(c, o):
            return min(cells - 1, (c - o) * cells // span)

        grid: Dict[Tuple[int, int], List[int]] = defaultdict(list)
        for i, e in enumerate(self.edges):
            a, b = pts[e.u], pts[e.v]
            for cx in range(cell(min(a[0], b[0]), x0), cell(max(a[0], b[0]), x0) + 1):
                for cy in range(cell(min(a[1], b[1]), y0), cell(max(a[1], b[1]), y0) + 1):
                    grid[(cx, cy)].append(i)
        checked = set()
        for bucket in grid.values():
            for ii in range(len(bucket)):
                i = bucket[ii]
                ei = self.edges[i]
                a, b = pts[ei.u], pts[ei.v]
                for jj in range(ii + 1, len(bucket)):
                    j = bucket[jj]
                    if (i, j) in checked:
                        continue
                    checked.add((i, j))
                    ej = self.edges[j]
                    shared = {ei.u, ei.v} & {ej.u, ej.v}
                    c, d = pts[ej.u], pts[ej.v]
                    if shared:
                        # sharing an endpoint: only collinear overlap is illegal
                        s = shared.pop()
                        p = b if s == ei.u else a
                        q = d if s == ej.u else c
                        o = pts[s]
                        if geo.cross(geo.sub(p, o), geo.sub(q, o)) == 0 and geo.dot(geo.sub(p, o), geo.sub(q, o)) > 0:
                            raise PatternError(f"edges {i} and {j} overlap")
                        continue
                    if (
                        max(a[0], b[0]) < min(c[0], d[0]) or max(c[0], d[0]) < min(a[0], b[0])
                        or max(a[1], b[1]) < min(c[1], d[1]) or max(c[1], d[1]) < min(a[1], b[1])
                    ):
                        continue
                    if geo.segments_cross(a, b, c, d):
                        raise PatternError(f"edges {i} and {j} cross")
        # vertices may not sit in the interior of an edge
        vgrid: Dict[Tuple[int, int], List[int]] = defaultdict(list)
        for v, p in enumerate(pts):
            vgrid[(cell(p[0], x0), cell(p[1], y0))].append(v)
        for i, e in enumerate(self.edges):
            a, b = pts[e.u], pts[e.v]
            for cx in range(cell(min(a[0], b[0]), x0), cell(max(a[0], b[0]), x0) + 1):
                for cy in range(cell(min(a[1], b[1]), y0), cell(max(a[1], b[1]), y0) + 1):
                    for v in vgrid.get((cx, cy), ()):
                        q = pts[v]
                        if not (min(a[0], b[0]) <= q[0] <= max(a[0], b[0]) and min(a[1], b[1]) <= q[1] <= max(a[1], b[1])):
                            continue
                        if v not in (e.u, e.v) and geo.on_segment_interior(q, a, b):
                            raise PatternError(f"vertex {v} lies inside edge {i}")

    def _connected(self) -> bool:
        adj: List[List[int]] = [[] for _ in self.vertices]
        for e in self.edges:
            adj[e.u].append(e.v)
            adj[e.v].append(e.u)
        seen = {0}
        stack = [0]
        while stack:
            w = stack.pop()
            for x in adj[w]:
                if x not in seen:
                    seen.add(x)
                    stack.append(x)
        return len(seen) == len(self.vertices)

    # -- convenience ----------------------------------------------------------------
    def with_meta(self, **meta) -> "CreasePattern":
        m = dict(self.meta)
        m.update(meta)
        return CreasePattern(self.vertices, self.edges, self.boundary, m)

    def crease_line(self, edge_id: int) -> Tuple[Point, Point]:
        e = self.edges[edge_id]
        return self.vertices[e.u], self.vertices[e.v]


def _integer_points(points: Sequence[Point]) -> List[Tuple[int, int]]:
    """Points scaled by a common denominator (times 2, so edge midpoints stay integral)."""
    den = 1
    for x, y in points:
        den = lcm(den, x.denominator, y.denominator)
    den *= 2
    return [(int(x * den), int(y * den)) for x, y in points]


def _two_pi_bounds(bits: int):
    import mpmath

    with mpmath.workprec(bits + 32):
        tp = geo._mpf_fraction(2 * mpmath.pi)
    pad = Fraction(8, 1 << bits)
    return tp - pad, tp + pad


def face_orbits(
    vertices: Sequence[Point],
    edges: Sequence[Edge],
    rotation: Sequence[Sequence[int]],
    edge_ids: Iterable[int],
) -> List[Tuple[List[int], List[int]]]:
    """Bounded (counterclockwise) face cycles of the subgraph on ``edge_ids``.

    ``rotation`` gives the counterclockwise order of all edges at each vertex;
    edges outside ``edge_ids`` are skipped.  Outer and hole cycles (clockwise)
    are dropped.
    """
    active = set(edge_ids)
    ring = [[i for i in rot if i in active] for rot in rotation]
    pos = [{i: k for k, i in enumerate(r)} for r in ring]
    visited = set()
    out = []
    for start in sorted(active):
        e = edges[start]
        for a in (e.u, e.v):
            if (start, a) in visited:
                continue
            vs: List[int] = []
            es: List[int] = []
            cur_e, cur_v = start, a
            while (cur_e, cur_v) not in visited:
                visited.add((cur_e, cur_v))
                vs.append(cur_v)
                es.append(cur_e)
                nxt = edges[cur_e].other(cur_v)
                r = ring[nxt]
                k = pos[nxt][cur_e]
                cur_e = r[(k - 1) % len(r)]  # next edge clockwise from the reversed one
                cur_v = nxt
            if geo.signed_area2([vertices[v] for v in vs]) > 0:
                out.append((vs, es))
    return out


# -- persistence ----------------------------------------------------------------------

def _jsonable(obj):
    if isinstance(obj, Fraction):
        return format_rational(obj)
    if isinstance(obj, Mapping):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def pattern_from_dict(data: Mapping) -> CreasePattern:
    try:
        verts = [(parse_rational(x), parse_rational(y)) for x, y in data["vertices"]]
        edges = []
        for item in data["edges"]:
            u, v, a = item
            if not isinstance(u, int) or not isinstance(v, int):
                raise ValueError("edge endpoints must be integers")
            edges.append(Edge(u, v, Assignment(a)))
        boundary = [int(b) for b in data["boundary"]]
        meta = data.get("meta", {})
        if not isinstance(meta, Mapping):
            raise ValueError("meta must be an object")
    except PatternError:
        raise
    except (KeyError, TypeError, ValueError) as exc:
        raise PatternError(f"malformed pattern data: {exc}") from exc
    return CreasePattern(tuple(verts), tuple(edges), tuple(boundary), dict(meta))


def load_pattern(path) -> CreasePattern:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise PatternError(f"malformed JSON in {path}: {exc}") from exc
    return pattern_from_dict(data)


def dumps_pattern(pattern: CreasePattern) -> str:
    return json.dumps(pattern.canonical(), indent=1)


def save_pattern(pattern: CreasePattern, path) -> None:
    Path(path).write_text(dumps_pattern(pattern) + "\n")


_SVG_STYLE = {
    Assignment.MOUNTAIN: 'stroke="#d62728" stroke-width="1.5"',
    Assignment.VALLEY: 'stroke="#1f77b4" stroke-width="1.5"',
    Assignment.UNASSIGNED: 'stroke="#888888" stroke-width="1" stroke-dasharray="4,3"',
    Assignment.BORDER: 'stroke="#000000" stroke-width="2"',
}


def export_svg(pattern: CreasePattern, path, unit: float = 100.0) -> None:
    """Write an SVG drawing, 1 pattern unit = ``unit`` px, y axis pointing up."""
    xs = [float(p[0]) for p in pattern.vertices]
    ys = [float(p[1]) for p in pattern.vertices]
    pad = 0.05 * max(max(xs) - min(xs), max(ys) - min(ys), 1e-9)
    x0, x1 = min(xs) - pad, max(xs) + pad
    y0, y1 = min(ys) - pad, max(ys) + pad
    w, h = (x1 - x0) * unit, (y1 - y0) * unit
    lines = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{w:.2f}" height="{h:.2f}" '
        f'viewBox="0 0 {w:.2f} {h:.2f}">',
        '<g fill="none" stroke-linecap="round">',
    ]
    for i, e in enumerate(pattern.edges):
        (ax, ay), (bx, by) = pattern.vertices[e.u], pattern.vertices[e.v]
        lines.append(
            f'<line id="e{i}" class="{e.assignment.name.lower()}" '
            f'x1="{(float(ax) - x0) * unit:.3f}" y1="{(y1 - float(ay)) * unit:.3f}" '
            f'x2="{(float(bx) - x0) * unit:.3f}" y2="{(y1 - float(by)) * unit:.3f}" '
            f"{_SVG_STYLE[e.assignment]}/>"
        )
    lines.append("</g>")
    lines.append("</svg>")
    Path(path).write_text("\n".join(lines) + "\n")


def make_pattern(
    points: Sequence[Tuple],
    creases: Iterable[Tuple[int, int]],
    boundary: Sequence[int],
    assignments: Optional[Mapping[Tuple[int, int], Assignment]] = None,
    meta: Optional[Mapping] = None,
) -> CreasePattern:
    """Assemble a pattern from points, crease index pairs and a boundary cycle."""
    edges = []
    nb = len(boundary)
    for i in range(nb):
        edges.append(Edge(boundary[i], boundary[(i + 1) % nb], Assignment.BORDER))
    for u, v in creases:
        a = (assignments or {}).get((u, v), Assignment.UNASSIGNED)
        edges.append(Edge(u, v, a))
    return CreasePattern(tuple(points), tuple(edges), tuple(boundary), dict(meta or {}))


@dataclass(frozen=True)
class ReductionOutput:
    """A generated pattern, the tolerance to decide it at, and provenance."""

    pattern: CreasePattern
    epsilon: Fraction
    meta: Mapping = field(default_factory=dict)
