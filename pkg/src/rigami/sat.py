"""Reduction from positive 1-in-3 SAT to rigid foldability with optional creases.

Everything is built on a grid of square cells.  Horizontal wire ``H_r``
runs along cell row ``r`` and vertical wire ``V_c`` along cell column ``c``;
each wire is four parallel creases.  A cell holds one gadget stamp: a
splitter, a widening splitter, a suppressor (narrow or wide), a crossover,
a rotated crossover or a converter crossover.  The clause gadget spans four
cells of column ``V_0``; each literal column repeats its shape inside the
clause block so that every cycle through the block sees the same twists.

Splitters are 2x2 tessellations of square twists.  The ordinary twist has
twist angle arctan(3/4) (speed ratio 1/2); the widening twist has
2 arctan(7/9) (speed ratio 1/8) and the same pleat width.  Coordinates are
integers and sevenths/twentyfirsts in "design units"; one cell is 64
design units and the pattern is scaled by 1/8 so that a cell is 8 x 8.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from . import geometry as geo
from .arrangement import Segment, arrange, pattern_from_segments
from .geometry import Point
from .pattern import CreasePattern, ReductionOutput
from .solver import ModeCertificate, _Search, enumerate_solutions, verify_certificate

F = Fraction
CELL = 64
HALF = CELL // 2
SCALE = F(1, 8)
# offsets of a wire's four creases from the wire axis
NARROW = (F(-16), F(-10), F(10), F(16))

# corner offsets of the twists in their reference orientation, and the two
# axis-parallel rays leaving each corner
_RAYS = (((-1, 0), (0, 1)), ((-1, 0), (0, -1)), ((1, 0), (0, -1)), ((0, 1), (1, 0)))
TWIST_CORNERS = {
    "regular": ((F(-7), F(-1)), (F(1), F(-7)), (F(7), F(1)), (F(-1), F(7))),
    "widening": (
        (F(-79, 21), F(47, 21)),
        (F(-47, 21), F(-79, 21)),
        (F(79, 21), F(-47, 21)),
        (F(47, 21), F(79, 21)),
    ),
}

# linear maps applied to a twist in reference orientation
IDENTITY = ((1, 0), (0, 1))
MIRROR_X = ((-1, 0), (0, 1))
MIRROR_Y = ((1, 0), (0, -1))
ROT180 = ((-1, 0), (0, -1))
ROT90 = ((0, -1), (1, 0))


def _apply(m, p) -> Point:
    return (m[0][0] * p[0] + m[0][1] * p[1], m[1][0] * p[0] + m[1][1] * p[1])


def _compose(a, b):
    # a after b
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(2)) for j in range(2)) for i in range(2)
    )


@dataclass(frozen=True)
class Twist:
    corners: Tuple[Point, ...]
    rays: Tuple[Tuple[Point, Point], ...]  # (corner, direction)

    def square(self) -> List[Segment]:
        c = self.corners
        return [(c[k], c[(k + 1) % 4]) for k in range(4)]


def make_twist(kind: str, center: Point, transform=IDENTITY) -> Twist:
    corners = []
    rays = []
    for off, dirs in zip(TWIST_CORNERS[kind], _RAYS):
        p = geo.add(center, _apply(transform, off))
        corners.append(p)
        for d in dirs:
            rays.append((p, _apply(transform, (F(d[0]), F(d[1])))))
    return Twist(tuple(corners), tuple(rays))


def splitter_twists(transform=IDENTITY, top: str = "regular") -> List[Twist]:
    """Four twists centred near (+-17, +-9); ``transform`` turns the whole group.

    With ``top="widening"`` the upper pair is replaced by widening twists of
    the same handedness as the twist below, sharing its upper pleat.
    """
    out = []
    for (sx, sy), m in (((-1, -1), IDENTITY), ((1, -1), MIRROR_X), ((-1, 1), MIRROR_Y), ((1, 1), ROT180)):
        kind = top if sy > 0 else "regular"
        if kind == "widening":
            center = (sx * F(457, 21), sy * F(289, 21))
            m = IDENTITY if sx < 0 else MIRROR_X
        else:
            center = (sx * F(17), sy * F(9))
        out.append(make_twist(kind, _apply(transform, center), _compose(transform, m)))
    return out


def _ray_segments(twists: Sequence[Twist], box) -> List[Segment]:
    """Each ray runs to the nearest corner on it, or else to the box edge."""
    corners = [p for t in twists for p in t.corners]
    x0, y0, x1, y1 = box
    segs = []
    for t in twists:
        segs += t.square()
        for p, d in t.rays:
            best = None
            for q in corners:
                w = geo.sub(q, p)
                if q != p and geo.cross(w, d) == 0 and geo.dot(w, d) > 0:
                    if best is None or geo.dot(w, d) < geo.dot(geo.sub(best, p), d):
                        best = q
            if best is None:
                if d[0] > 0:
                    best = (x1, p[1])
                elif d[0] < 0:
                    best = (x0, p[1])
                elif d[1] > 0:
                    best = (p[0], y1)
                else:
                    best = (p[0], y0)
            segs.append((p, best))
    return segs


def wide_offsets() -> Tuple[Fraction, ...]:
    """Crease offsets of a vertical wire above a widening splitter."""
    tl = splitter_twists(top="widening")[2]
    left = sorted(p[0] for p, d in tl.rays if d[1] > 0)
    return tuple(left + [-x for x in reversed(left)])


WIDE = wide_offsets()


def wire_lines(box, horizontal: bool = True, vertical: bool = True, offsets=NARROW) -> List[Segment]:
    x0, y0, x1, y1 = box
    segs = []
    if horizontal:
        segs += [((x0, o), (x1, o)) for o in NARROW]
    if vertical:
        segs += [((o, y0), (o, y1)) for o in offsets]
    return segs


CELL_BOX = (F(-HALF), F(-HALF), F(HALF), F(HALF))


def stamp_segments(kind: str) -> List[Segment]:
    """Segments of a one-cell gadget in local coordinates centred at the origin."""
    box = CELL_BOX
    if kind == "suppressor":
        return wire_lines(box)
    if kind in ("splitter", "crossover"):
        segs = _ray_segments(splitter_twists(), box)
    elif kind in ("staircase", "rotated_crossover"):
        segs = _ray_segments(splitter_twists(ROT90), box)
    elif kind == "widening":
        segs = _ray_segments(splitter_twists(top="widening"), box)
    elif kind == "converter":
        segs = _ray_segments(splitter_twists(MIRROR_Y, top="widening"), box)
    elif kind == "wide_suppressor":
        return wire_lines(box, vertical=False) + wire_lines(box, horizontal=False, offsets=WIDE)
    elif kind == "converter_crossover":
        segs = _ray_segments(splitter_twists(MIRROR_Y, top="widening"), box) + wire_lines(box, vertical=False)
    else:
        raise ValueError(f"unknown stamp {kind!r}")
    if kind in ("crossover", "rotated_crossover"):
        segs += wire_lines(box)
    return segs


def stamp_pattern(kind: str) -> CreasePattern:
    return pattern_from_segments(stamp_segments(kind), CELL_BOX, meta={"gadget": kind})


CLAUSE_ROWS = 4
VAR_CROSSING = "rotated_crossover"
VAR_SPLITTER = "staircase"


def clause_box():
    return (F(-HALF), F(-HALF), F(HALF), F(HALF + CELL * (CLAUSE_ROWS - 1)))


def clause_segments() -> List[Segment]:
    """Three widening splitters stacked over each other and a flipped one on top.

    Narrow vertical creases pass through the rows below each splitter and
    wide ones through the rows above it, so a folded row blocks the others.
    """
    twists = []
    for k in range(CLAUSE_ROWS):
        m = MIRROR_Y if k == CLAUSE_ROWS - 1 else IDENTITY
        for t in splitter_twists(m, top="widening"):
            shift = (F(0), F(CELL * k))
            twists.append(
                Twist(
                    tuple(geo.add(p, shift) for p in t.corners),
                    tuple((geo.add(p, shift), d) for p, d in t.rays),
                )
            )
    return _ray_segments(twists, clause_box())


def clause_crossover_segments() -> List[Segment]:
    """Clause twists with straight horizontal wires through all four rows.

    Used where a column crosses another clause's block: a true column then
    folds through the same twists as the clause column does.
    """
    box = clause_box()
    segs = clause_segments()
    for k in range(CLAUSE_ROWS):
        for o in NARROW:
            y = F(CELL * k + o)
            segs.append(((box[0], y), (box[2], y)))
    return segs


def kind_segments(kind: str) -> List[Segment]:
    if kind == "clause":
        return clause_segments()
    if kind == "clause_crossover":
        return clause_crossover_segments()
    return stamp_segments(kind)


MULTI_ROW = ("clause", "clause_crossover")


@dataclass(frozen=True)
class Layout:
    """Cell grid of the reduction.

    ``stamps`` maps (row, column) to a stamp kind; the clause gadget is
    recorded at the bottom cell of its four-row block as ``"clause"`` and
    the three cells above it as ``"clause+"``.
    """

    num_vars: int
    clauses: Tuple[Tuple[int, int, int], ...]
    variables: Tuple[int, ...]  # variable of each horizontal variable row
    stamps: Dict[Tuple[int, int], str] = field(hash=False)

    @property
    def rows(self) -> int:
        return len(self.variables) + CLAUSE_ROWS * len(self.clauses)

    @property
    def cols(self) -> int:
        return 1 + 3 * len(self.clauses)

    def clause_row(self, l: int, d: int) -> int:
        return len(self.variables) + CLAUSE_ROWS * l + d

    def literal_col(self, l: int, d: int) -> int:
        return 1 + 3 * l + d

    def box(self) -> Tuple[Fraction, Fraction, Fraction, Fraction]:
        return (F(-HALF), F(-HALF), F(CELL * self.cols - HALF), F(CELL * self.rows - HALF))


def layout(instance) -> Layout:
    """Place the stamps for a positive 1-in-3 SAT instance.

    Only variables that occur in some clause get a horizontal wire: a wire
    without a splitter could fold on its own.
    """
    used = tuple(sorted({x for c in instance.clauses for x in c}))
    row_of = {x: i for i, x in enumerate(used)}
    lay = Layout(instance.num_vars, tuple(instance.clauses), used, {})
    st = lay.stamps
    for i in range(len(used)):
        for c in range(lay.cols):
            st[(i, c)] = VAR_CROSSING
    for l, clause in enumerate(instance.clauses):
        for c in range(lay.cols):
            st[(lay.clause_row(l, 0), c)] = "clause" if c == 0 else "clause_crossover"
            for d in range(1, CLAUSE_ROWS):
                st[(lay.clause_row(l, d), c)] = "clause+"
        for d, x in enumerate(clause):
            col = lay.literal_col(l, d)
            st[(row_of[x], col)] = VAR_SPLITTER
            # the literal column copies the clause column: it widens at its own
            # row and narrows again at the clause's top row
            for e in range(CLAUSE_ROWS - 1):
                st[(lay.clause_row(l, e), col)] = (
                    "widening" if e == d else "suppressor" if e < d else "wide_suppressor"
                )
            st[(lay.clause_row(l, CLAUSE_ROWS - 1), col)] = "converter_crossover"
    return lay


def _stamp_pieces(kind: str) -> List[Segment]:
    if kind not in _PIECES:
        _PIECES[kind] = arrange(kind_segments(kind))
    return _PIECES[kind]


_PIECES: Dict[str, List[Segment]] = {}


def layout_segments(lay: Layout) -> List[Segment]:
    """Pieces of every stamp, each split at its own crossings.

    Stamps meet only at cell borders, where their creases share endpoints,
    so arranging each kind once is enough.
    """
    segs: List[Segment] = []
    for (r, c), kind in sorted(lay.stamps.items()):
        if kind == "clause+":
            continue
        shift = (F(CELL * c), F(CELL * r))
        segs += [(geo.add(a, shift), geo.add(b, shift)) for a, b in _stamp_pieces(kind)]
    return segs


def _scaled(seg: Segment) -> Segment:
    return tuple((p[0] * SCALE, p[1] * SCALE) for p in seg)


def reduce_sat(instance) -> ReductionOutput:
    """Crease pattern that folds rigidly with optional creases iff the instance is satisfiable."""
    lay = layout(instance)
    box = tuple(v * SCALE for v in lay.box())
    meta = {
        "reduction": "sat",
        "num_vars": instance.num_vars,
        "clauses": [list(c) for c in instance.clauses],
        "variable_rows": list(lay.variables),
        "cell": str(CELL * SCALE),
        "grid": [lay.rows, lay.cols],
        "epsilon": "0",
    }
    pattern = pattern_from_segments(
        [_scaled(s) for s in layout_segments(lay)], box, meta=meta, arranged=True
    )
    return ReductionOutput(pattern, F(0), meta)


def wire_values(lay: Layout, assignment: Dict[int, bool]):
    """Truth value of every horizontal (by row) and vertical (by column) wire."""
    rows: Dict[int, bool] = {}
    cols: Dict[int, bool] = {0: True}
    for i, x in enumerate(lay.variables):
        rows[i] = bool(assignment[x])
    for l, clause in enumerate(lay.clauses):
        for d, x in enumerate(clause):
            rows[lay.clause_row(l, d)] = bool(assignment[x])
            cols[lay.literal_col(l, d)] = bool(assignment[x])
        rows[lay.clause_row(l, 3)] = True
    return rows, cols


def port_creases(pattern: CreasePattern, lay: Layout):
    """Creases carrying each wire across each cell border (and the sheet edge).

    Yields ``("H", row, crease)`` and ``("V", column, crease)``.
    """
    x0, y0, x1, y1 = (v * SCALE for v in lay.box())
    horiz: Dict[Fraction, List[Tuple[Fraction, Fraction, int]]] = {}
    vert: Dict[Fraction, List[Tuple[Fraction, Fraction, int]]] = {}
    for c in pattern.creases:
        e = pattern.edges[c]
        a, b = pattern.vertices[e.u], pattern.vertices[e.v]
        if a[1] == b[1]:
            horiz.setdefault(a[1], []).append((min(a[0], b[0]), max(a[0], b[0]), c))
        elif a[0] == b[0]:
            vert.setdefault(a[0], []).append((min(a[1], b[1]), max(a[1], b[1]), c))

    def find(table, line, at):
        for lo, hi, c in table.get(line, ()):
            if lo <= at <= hi and (lo < at < hi or at in (x0, x1, y0, y1)):
                return c
        return None

    for r in range(lay.rows):
        for o in NARROW:
            y = (CELL * r + o) * SCALE
            for k in range(lay.cols + 1):
                x = (CELL * k - HALF) * SCALE
                c = find(horiz, y, x)
                if c is not None:
                    yield ("H", r, c)
    for col in range(lay.cols):
        for o in NARROW:
            x = (CELL * col + o) * SCALE
            for k in range(lay.rows + 1):
                if 0 < k < lay.rows and lay.stamps.get((k, col)) == "clause+":
                    continue
                y = (CELL * k - HALF) * SCALE
                c = find(vert, x, y)
                if c is not None:
                    yield ("V", col, c)


# -- gadget stamps and their signal tables ----------------------------------------------

STAMP_KINDS = (
    "splitter",
    "staircase",
    "widening",
    "converter",
    "suppressor",
    "wide_suppressor",
    "crossover",
    "rotated_crossover",
    "converter_crossover",
    "clause",
    "clause_crossover",
)


@dataclass(frozen=True)
class GadgetStamp:
    """One gadget in local coordinates (a cell is 8 x 8 after scaling).

    ``ports`` maps a side to one tuple of crease ids per wire crossing it,
    ordered by position; ``widths`` gives "narrow" or "wide" per wire.
    """

    kind: str
    rows: int
    pattern: CreasePattern
    ports: Dict[str, Tuple[Tuple[int, ...], ...]]
    widths: Dict[str, Tuple[str, ...]]


def _side_widths(kind: str, rows: int) -> Dict[str, Tuple[str, ...]]:
    out = {"L": ("narrow",) * rows, "R": ("narrow",) * rows, "B": ("narrow",), "T": ("narrow",)}
    if kind == "wide_suppressor":
        out["B"] = out["T"] = ("wide",)
    elif kind == "widening":
        out["T"] = ("wide",)
    elif kind in ("converter", "converter_crossover"):
        out["B"] = ("wide",)
    return out


def make_gadget(kind: str) -> GadgetStamp:
    """Build a stamp and sort its boundary creases into wire ports."""
    if kind not in STAMP_KINDS:
        raise ValueError(f"unknown gadget kind {kind!r}")
    rows = CLAUSE_ROWS if kind in MULTI_ROW else 1
    box = clause_box() if rows > 1 else CELL_BOX
    sbox = tuple(v * SCALE for v in box)
    pattern = pattern_from_segments(
        [_scaled(s) for s in arrange(kind_segments(kind))], sbox, meta={"gadget": kind}, arranged=True
    )
    x0, y0, x1, y1 = sbox
    stubs: Dict[Tuple[str, int], List[Tuple[Fraction, int]]] = {}
    for c in pattern.creases:
        e = pattern.edges[c]
        for w in (e.u, e.v):
            if w not in pattern.boundary_set:
                continue
            q = pattern.vertices[w]
            if q[0] in (x0, x1):
                side, pos = ("L" if q[0] == x0 else "R"), q[1]
                wire = int((q[1] - y0) // (CELL * SCALE))
            else:
                side, pos, wire = ("B" if q[1] == y0 else "T"), q[0], 0
            stubs.setdefault((side, wire), []).append((pos, c))
    widths = _side_widths(kind, rows)
    ports: Dict[str, Tuple[Tuple[int, ...], ...]] = {}
    for side, ws in widths.items():
        wires = []
        for k in range(len(ws)):
            got = tuple(c for _, c in sorted(stubs.get((side, k), [])))
            if len(got) != 4:
                raise ValueError(f"{kind}: port {side}{k} has {len(got)} creases")
            wires.append(got)
        ports[side] = tuple(wires)
    return GadgetStamp(kind, rows, pattern, ports, widths)


def signal_table(gadget: GadgetStamp, limit: Optional[int] = None) -> List[Tuple[Tuple[str, str], ...]]:
    """Distinct boundary signal patterns over every rigid folding of the stamp.

    Each pattern lists ``(port, value)`` where the value is "T" (all four
    creases fold), "F" (none fold) or "P" (some but not all).  The empty
    folding is included.
    """
    seen = set()
    for cert in enumerate_solutions(gadget.pattern, limit=limit):
        row = []
        for side in ("L", "R", "B", "T"):
            for k, wire in enumerate(gadget.ports[side]):
                n = sum(c in cert.active_creases for c in wire)
                row.append((f"{side}{k}", "T" if n == 4 else "F" if n == 0 else "P"))
        seen.add(tuple(row))
    return sorted(seen)


def staircase_ratio(speeds: Sequence[Fraction]) -> Fraction:
    """Speed ratio between a wire's two crease pairs.

    Returns the smaller of |s2/s0| and |s0/s2| for a wire whose creases fold
    with speeds ``s0..s3`` in position order: 1 for a gutter and 1/4 for a
    staircase with p = 1/2.
    """
    r = abs(F(speeds[2]) / F(speeds[0]))
    return min(r, 1 / r)


# -- witnesses -----------------------------------------------------------------------------

def forced_ports(pattern: CreasePattern, lay: Layout, assignment: Dict[int, bool]) -> Dict[int, bool]:
    rows, cols = wire_values(lay, assignment)
    return {
        c: (rows[idx] if kind == "H" else cols[idx]) for kind, idx, c in port_creases(pattern, lay)
    }


def witness_certificate(instance, assignment: Dict[int, bool], output: Optional[ReductionOutput] = None):
    """Certificate for the reduction of ``instance`` from a 1-in-3 assignment.

    Every wire crease at every cell border is pinned to its wire's value;
    the solver then only picks twist modes and speeds inside the gadgets.
    """
    asg = {x: bool(assignment.get(x, False)) for x in range(1, instance.num_vars + 1)}
    if not instance.satisfied_by(asg):
        raise ValueError("assignment does not make exactly one literal true in every clause")
    out = output or reduce_sat(instance)
    lay = layout(instance)
    forced = forced_ports(out.pattern, lay, asg)
    s = _Search(out.pattern, F(0), False, 128, 4096, 10**8)
    st = s.search(s.initial_state(forced))
    if st is None:
        raise RuntimeError("no rigid folding matches the assignment")
    cert = s.certificate(st)
    if not verify_certificate(out.pattern, cert):
        raise RuntimeError("witness failed verification")
    return cert


def clause_row_speeds(pattern: CreasePattern, lay: Layout, cert: ModeCertificate):
    """Speeds of each clause literal row where it leaves the clause column.

    Yields ``(clause, d, speeds)`` for rows folded in ``cert``.
    """
    x = F(HALF) * SCALE
    by_y: Dict[Fraction, int] = {}
    for c in pattern.creases:
        e = pattern.edges[c]
        a, b = pattern.vertices[e.u], pattern.vertices[e.v]
        if a[1] == b[1] and min(a[0], b[0]) <= x <= max(a[0], b[0]):
            by_y[a[1]] = c
    for l in range(len(lay.clauses)):
        for d in range(CLAUSE_ROWS - 1):
            r = lay.clause_row(l, d)
            wire = [by_y[(CELL * r + o) * SCALE] for o in NARROW]
            if all(c in cert.active_creases for c in wire):
                yield l, d, [cert.speed(c) for c in wire]
