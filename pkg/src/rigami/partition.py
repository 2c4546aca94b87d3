"""Partition instances compiled into a closed chain of degree-4 vertices.

Element a_i becomes a vertex with sectors (alpha_i, 90, 180 - alpha_i, 90)
where tan(alpha_i / 2) = tanh(a_i / (2 S)), S the total.  Its speed
coefficient along the chain is then p_i = exp(-a_i / S) in one mode and
1 / p_i in the other, so the loop product around the central polygon is
exp((sum of one side - sum of the other) / S).  Two mirror-image closing
vertices with a collinear crease pair each finish the polygon.

All coordinates are exact rationals on a grid of pitch 1/G with
G = 5 c n S, except the final direction and closing vertex (see
:func:`build_chain`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, floor
from typing import Dict, List, Optional, Sequence, Tuple

from . import geometry as geo
from .geometry import Point
from .pattern import CreasePattern, ReductionOutput, make_pattern
from .scalar import DEFAULT_BITS, Interval, format_rational, sqrt

DEFAULT_C = 64


class ConstructionError(RuntimeError):
    pass


@dataclass(frozen=True)
class PartitionInstance:
    elements: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(int(a) for a in self.elements))
        if len(self.elements) <= 4:
            raise ValueError("the chain construction needs more than 4 elements")
        if any(a < 1 for a in self.elements):
            raise ValueError("elements must be positive integers")

    @property
    def n(self) -> int:
        return len(self.elements)

    @property
    def total(self) -> int:
        return sum(self.elements)


@dataclass(frozen=True)
class ReductionParams:
    c: int
    G: int
    epsilon_g: Fraction
    epsilon_t: Fraction
    epsilon_LB: Fraction
    epsilon_UB: Fraction
    epsilon: Fraction

    @classmethod
    def for_instance(cls, inst: PartitionInstance, c: int = DEFAULT_C) -> "ReductionParams":
        G = 5 * c * inst.n * inst.total
        eg = Fraction(1, G)
        lb, ub, eps = compute_epsilon(inst, c, eg, eg)
        return cls(c, G, eg, eg, lb, ub, eps)


@dataclass(frozen=True)
class ChainConstruction:
    order: Tuple[int, ...]  # element indices in chain order (reversed after a restart)
    t: Tuple[Fraction, ...]  # tangent of half turn angle at v_1..v_n
    d: Tuple[Point, ...]  # d_0..d_n
    v: Tuple[Point, ...]  # v_0..v_{n+1}
    s: Point
    lam: Fraction  # |v_{n+1} - v_n| / |d_n|
    reversed: bool
    b: Tuple[Point, ...] = ()
    c: Tuple[Point, ...] = ()


# -- tanh -----------------------------------------------------------------------------

def _exp_series(y: Fraction, tol: Fraction) -> Fraction:
    """Partial sum of exp(y), 0 <= y < 2, with remainder below ``tol``."""
    term = Fraction(1)
    total = Fraction(1)
    k = 0
    while True:
        k += 1
        term = term * y / k
        total += term
        # tail after term k: term * y/(k+1) / (1 - y/(k+1))
        if k + 1 > y:
            tail = term * y / (k + 1 - y)
            if tail <= tol:
                return total


def tanh_rational(x: Fraction, eps_t: Fraction) -> Fraction:
    """Rational t with |t - tanh(x)| <= eps_t, for 0 < x < 1.

    tanh(x) = (E - 1) / (E + 1) with E = exp(2x); the derivative in E is
    2 / (E + 1)^2 <= 1/2, so an error of eps/4 in E costs at most eps/8.
    The result is then rounded to a grid of pitch at most eps/4.
    """
    x, eps_t = Fraction(x), Fraction(eps_t)
    if not 0 < x < 1:
        raise ValueError("tanh_rational needs 0 < x < 1")
    if eps_t <= 0:
        raise ValueError("eps_t must be positive")
    e = _exp_series(2 * x, eps_t / 4)
    t = (e - 1) / (e + 1)
    D = ceil(4 / eps_t)
    return Fraction(floor(t * D + Fraction(1, 2)), D)


def design_angles(inst: PartitionInstance, eps_t: Fraction) -> List[Fraction]:
    S = inst.total
    return [tanh_rational(Fraction(a, 2 * S), eps_t) for a in inst.elements]


# -- chain ----------------------------------------------------------------------------

def round_to_grid(p: Point, G: int) -> Point:
    """Nearest multiple of 1/G per coordinate, ties toward +infinity."""
    return tuple(Fraction(floor(x * G + Fraction(1, 2)), G) for x in p)


def _unit_toward(r: Point, G: int, bits: int = DEFAULT_BITS) -> Point:
    """Rational unit vector within about 1/G^2 radians of direction r (upper half-plane)."""
    norm = sqrt(geo.norm2(r), bits)
    if isinstance(norm, Interval):
        norm = norm.mid
    tau = r[1] / (norm + r[0])  # tan of half the direction angle
    q = G * G
    tau = Fraction(floor(tau * q + Fraction(1, 2)), q)
    return geo.rotation_point(tau)


def _chain(t: Sequence[Fraction], G: int) -> Tuple[List[Point], List[Point], Point, Fraction]:
    n = len(t)
    d: List[Point] = [(Fraction(1), Fraction(0))]
    for i in range(1, n + 1):
        r = geo.rotate(d[i - 1], t[i - 1])
        # the last direction is snapped to an exact unit vector so that s bisects exactly
        d.append(round_to_grid(r, G) if i < n else _unit_toward(r, G))
    v: List[Point] = [(Fraction(0), Fraction(0))]
    for i in range(n):
        v.append(geo.add(v[i], d[i]))
    s = geo.scale(geo.sub(d[n], d[0]), Fraction(1, 2))
    lam = geo.dot(geo.sub(v[0], v[n]), s) / geo.dot(d[n], s)
    v.append(geo.add(v[n], geo.scale(d[n], lam)))
    return d, v, s, lam


def build_chain(t: Sequence[Fraction], G: int, order: Optional[Sequence[int]] = None) -> ChainConstruction:
    """Difference vectors, chain vertices and bisector, restarting reversed once.

    d_i = round(Rot(t_i) d_{i-1}) for i < n.  d_n is the rational unit vector
    closest (to 1/G^2 in half-angle tangent) to Rot(t_n) d_{n-1}: with
    |d_0| = |d_n| = 1 the bisector s = (d_n - d_0)/2 is exact, which makes
    v_0 and v_{n+1} exact mirror images.  The feasibility test is
    (v_n + d_n) . s < -v_0 . s, i.e. the last edge is longer than d_n.  When
    both orders fail the longer closing edge is kept if it exceeds 1/2.
    """
    t = [Fraction(x) for x in t]
    order = tuple(range(len(t))) if order is None else tuple(order)
    if any(not 0 < x < 1 for x in t):
        raise ConstructionError("every t must lie in (0, 1)")
    tries = []
    for rev in (False, True):
        tt = t[::-1] if rev else t
        d, v, s, lam = _chain(tt, G)
        built = ChainConstruction(order[::-1] if rev else order, tuple(tt), tuple(d), tuple(v), s, lam, rev)
        if geo.dot(geo.add(v[-2], d[-1]), s) < -geo.dot(v[0], s):
            return built
        tries.append(built)
    # Palindromic inputs give a last edge of exactly one unit in both orders, up to
    # rounding.  Any positive length keeps the polygon convex, so accept the longer one.
    best = max(tries, key=lambda ch: ch.lam)
    if best.lam > Fraction(1, 2):
        return best
    raise ConstructionError(
        f"closing edge is too short in both orders (t = {[str(x) for x in t]})"
    )


def build_boundary(chain: ChainConstruction) -> ChainConstruction:
    """Outer ends b_i, c_i of the two non-chain creases at each chain vertex."""
    d, v = chain.d, chain.v
    n = len(d) - 1
    if v[0] == v[n + 1]:
        raise ConstructionError("closing vertex coincides with v_0")

    def right(p: Point) -> Point:
        return (p[1], -p[0])  # -p^perp

    b: List[Optional[Point]] = [None] * (n + 2)
    c: List[Optional[Point]] = [None] * (n + 2)
    for i in range(1, n + 1):
        b[i] = geo.add(v[i], right(d[i - 1]))
        c[i] = geo.add(v[i], right(d[i]))
    line = geo.sub(v[n + 1], v[0])
    L = _ceil_norm(line)
    c[0] = geo.add(v[0], geo.scale(line, Fraction(-1, L)))
    b[n + 1] = geo.add(v[n + 1], geo.scale(line, Fraction(1, L)))
    b[0] = geo.add(v[0], geo.reflect(d[0], line))
    c[n + 1] = geo.sub(v[n + 1], geo.reflect(d[n], line))
    return ChainConstruction(
        chain.order, chain.t, d, v, chain.s, chain.lam, chain.reversed, tuple(b), tuple(c)
    )


def _ceil_norm(p: Point) -> int:
    q = geo.norm2(p)
    k = 1
    while k * k < q:
        k += 1
    return k


def compute_epsilon(
    inst: PartitionInstance, c: int, eps_g: Fraction, eps_t: Fraction
) -> Tuple[Fraction, Fraction, Fraction]:
    """(eps_LB, eps_UB, eps) with eps the midpoint; LB must be below UB."""
    err = c * inst.n * (Fraction(eps_g) + Fraction(eps_t))
    lb = err
    ub = Fraction(1, inst.total) - err
    if not lb < ub:
        raise ConstructionError(
            f"c = {c} leaves no room: eps_LB = {lb} >= eps_UB = {ub} for {list(inst.elements)}"
        )
    return lb, ub, (lb + ub) / 2


def chain_pattern(chain: ChainConstruction, meta: Dict) -> CreasePattern:
    n = len(chain.d) - 1
    pts: List[Point] = list(chain.v)
    index_b, index_c = [], []
    for i in range(n + 2):
        index_b.append(len(pts))
        pts.append(chain.b[i])
        index_c.append(len(pts))
        pts.append(chain.c[i])
    creases = [(i, i + 1) for i in range(n + 1)] + [(n + 1, 0)]
    for i in range(n + 2):
        creases.append((i, index_b[i]))
        creases.append((i, index_c[i]))
    boundary = [index_c[0]]
    for i in range(1, n + 2):
        boundary += [index_b[i], index_c[i]]
    boundary.append(index_b[0])
    return make_pattern(pts, creases, boundary, meta=meta)


def reduce_partition(inst: PartitionInstance, c: int = DEFAULT_C) -> ReductionOutput:
    if not isinstance(inst, PartitionInstance):
        inst = PartitionInstance(tuple(inst))
    params = ReductionParams.for_instance(inst, c)
    t = design_angles(inst, params.epsilon_t)
    chain = build_boundary(build_chain(t, params.G))
    meta = {
        "reduction": "partition",
        "elements": list(inst.elements),
        "chain_order": list(chain.order),
        "reversed": chain.reversed,
        "epsilon": format_rational(params.epsilon),
        "epsilon_LB": format_rational(params.epsilon_LB),
        "epsilon_UB": format_rational(params.epsilon_UB),
        "G": str(params.G),
        "c": params.c,
        "t": [format_rational(x) for x in chain.t],
    }
    return ReductionOutput(chain_pattern(chain, meta), params.epsilon, meta)


reduce = reduce_partition


def chain_vertex_signs(pattern: CreasePattern, cert) -> Dict[int, int]:
    """+1 where the chain speed shrinks across a vertex (|t_out / t_in| < 1), else -1.

    Chain vertices are 0..n+1 and chain creases are edges between consecutive ids.
    """
    n2 = sum(1 for _ in _chain_vertices(pattern))
    out = {}
    for i in range(n2):
        e_in = _edge_between(pattern, (i - 1) % n2, i)
        e_out = _edge_between(pattern, i, (i + 1) % n2)
        r = abs(cert.speed(e_out) / cert.speed(e_in))
        out[i] = 1 if r < 1 else -1
    return out


def _chain_vertices(pattern: CreasePattern):
    return pattern.interior_vertices


def _edge_between(pattern: CreasePattern, a: int, b: int) -> int:
    for e in pattern.rotation[a]:
        if pattern.edges[e].other(a) == b:
            return e
    raise KeyError((a, b))


def subset_from_certificate(pattern: CreasePattern, cert) -> List[int]:
    """Elements (as values, in instance order) at chain vertices folding in the '-' mode."""
    signs = chain_vertex_signs(pattern, cert)
    order = pattern.meta["chain_order"]
    elements = pattern.meta["elements"]
    picked = sorted(order[i - 1] for i in range(1, len(order) + 1) if signs[i] < 0)
    return [elements[k] for k in picked]


def closure_deviation(out: ReductionOutput, bits: int = DEFAULT_BITS) -> float:
    """Largest |prod p~ - prod p| over every mode choice along the chain.

    p~ are the chain speed ratios of the emitted geometry and p the ideal
    ones, exp(-a_i / S) or its inverse; the two closing vertices have one
    mode each and their ideal contribution is 1.
    """
    import mpmath
    from itertools import product as combos

    from .solver import admissible_local_subsets

    pattern = out.pattern
    m = len(pattern.interior_vertices)
    order = pattern.meta["chain_order"]
    elements = pattern.meta["elements"]
    S = sum(elements)
    with mpmath.workprec(bits):
        choices = []
        for i in range(m):
            e_in = _edge_between(pattern, (i - 1) % m, i)
            e_out = _edge_between(pattern, i, (i + 1) % m)
            ratios = []
            for o in admissible_local_subsets(pattern, i, bits):
                if o.kind != "quad":
                    continue
                q = abs(o.speed(e_out) / o.speed(e_in))
                q = q.mid if isinstance(q, Interval) else q
                r = mpmath.mpf(q.numerator) / q.denominator
                ideal = mpmath.mpf(1)
                if 1 <= i <= m - 2:
                    a = mpmath.mpf(elements[order[i - 1]]) / S
                    ideal = mpmath.exp(-a if r < 1 else a)
                ratios.append((r, ideal))
            choices.append(ratios)
        worst = mpmath.mpf(0)
        for pick in combos(*choices):
            got = mpmath.fprod(r for r, _ in pick)
            want = mpmath.fprod(w for _, w in pick)
            worst = max(worst, abs(got - want))
        return float(worst)
