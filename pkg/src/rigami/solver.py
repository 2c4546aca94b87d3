"""Finite-precision rigid foldability: search, closure check, certificates.

Every interior vertex picks one *local option*: no folding, a collinear pair
of creases folding as one straight line, or a flat-foldable 4-subset of its
creases in mode A or B.  An option fixes the speeds of its creases up to a
per-vertex scale.  A crease shared by two interior vertices must be active at
both or neither, and its two local speeds must agree; around each closed
cycle of active creases this is the face-product condition.

The search keeps exact ratio relations in a weighted union-find when every
local speed is rational and epsilon is 0; otherwise closure is checked on
the face products at complete assignments, with interval refinement.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import gcd
from typing import Dict, FrozenSet, List, Mapping, Optional, Sequence, Tuple

from . import geometry as geo
from .flatfold import is_collinear_pair, is_flat_foldable_quad
from .kinematics import Mode, kinematics_from_vectors, mode_vector
from .pattern import CreasePattern, face_orbits
from .scalar import (
    DEFAULT_BITS,
    DEFAULT_CAP,
    Interval,
    Scalar,
    decide,
    format_rational,
    in_band,
    parse_rational,
    round_down,
    sign,
)

DEFAULT_BUDGET = 10**8


class SolverError(ValueError):
    """The pattern is outside the class the solver handles."""


class BudgetExceeded(RuntimeError):
    def __init__(self, budget: int):
        super().__init__(f"search budget of {budget} propagation steps exceeded")
        self.budget = budget


@dataclass(frozen=True)
class LocalOption:
    kind: str  # "empty", "pair" or "quad"
    ring: Tuple[int, ...]  # active creases, counterclockwise from the smallest id
    mode: Optional[Mode] = None
    speeds: Tuple[Scalar, ...] = ()  # local speed of each crease in ``ring``

    def __post_init__(self):
        object.__setattr__(self, "_active", frozenset(self.ring))

    @property
    def active(self) -> FrozenSet[int]:
        return self._active

    def speed(self, crease: int) -> Scalar:
        return self.speeds[self.ring.index(crease)]

    @property
    def key(self) -> Tuple:
        return (self.ring, self.mode)


def _canonical_ring(ring: Sequence[int]) -> Tuple[int, ...]:
    k = ring.index(min(ring))
    return tuple(ring[k:]) + tuple(ring[:k])


def quad_kinematics(pattern: CreasePattern, v: int, ring: Sequence[int], bits: int = DEFAULT_BITS):
    return kinematics_from_vectors([pattern.edge_vector(c, v) for c in ring], bits)


def _direction(p, q) -> Tuple[int, int]:
    x, y = q[0] - p[0], q[1] - p[1]
    g = gcd(x, y)
    return (x // g, y // g)


@lru_cache(maxsize=None)
def _quad_modes(dirs: Tuple[Tuple[int, int], ...], bits: int) -> Tuple[Tuple[Mode, Tuple[Scalar, ...]], ...]:
    # dirs are primitive integer directions in ring order; every local
    # quantity is invariant under translation and positive scaling
    vecs = [(Fraction(x), Fraction(y)) for x, y in dirs]
    if not is_flat_foldable_quad(vecs):
        return ()
    kin = kinematics_from_vectors(vecs, bits)
    return tuple((m, mode_vector(kin, m)) for m in kin.modes())


def admissible_local_subsets(pattern: CreasePattern, v: int, bits: int = DEFAULT_BITS) -> List[LocalOption]:
    """Empty set, exactly collinear pairs, and flat-foldable 4-subsets with each valid mode."""
    if v in pattern.boundary_set:
        raise SolverError(f"vertex {v} is on the boundary")
    ring = pattern.incident_creases(v)
    pts = pattern.int_points
    vec = {c: _direction(pts[v], pts[pattern.edges[c].other(v)]) for c in ring}
    out = [LocalOption("empty", ())]
    for a, b in combinations(ring, 2):
        if vec[a] == (-vec[b][0], -vec[b][1]):
            out.append(LocalOption("pair", (min(a, b), max(a, b)), None, (Fraction(1), Fraction(1))))
    quads = []
    for sub in combinations(ring, 4):
        q = _canonical_ring(list(sub))
        modes = _quad_modes(tuple(vec[c] for c in q), bits)
        if modes:
            quads.append((q, modes))
    for q, modes in sorted(quads):
        for m, speeds in modes:
            out.append(LocalOption("quad", q, m, speeds))
    return out


# -- certificates ---------------------------------------------------------------------

@dataclass(frozen=True)
class ModeCertificate:
    active_creases: FrozenSet[int]
    vertex_modes: Mapping[int, Mode]
    crease_speeds: Mapping[int, Fraction]
    epsilon_used: Fraction = Fraction(0)

    def speed(self, c: int) -> Fraction:
        return self.crease_speeds.get(c, Fraction(0))

    def mv_assignment(self) -> Dict[int, str]:
        """Valley where the speed is positive, mountain where negative."""
        return {c: ("V" if self.speed(c) > 0 else "M") for c in sorted(self.active_creases)}

    def to_json(self) -> dict:
        return {
            "active_creases": sorted(self.active_creases),
            "vertex_modes": {str(v): self.vertex_modes[v].value for v in sorted(self.vertex_modes)},
            "crease_speeds": {
                str(c): format_rational(self.crease_speeds[c]) for c in sorted(self.crease_speeds)
            },
            "epsilon": format_rational(self.epsilon_used),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=1)

    @classmethod
    def from_json(cls, data: Mapping) -> "ModeCertificate":
        try:
            return cls(
                frozenset(int(c) for c in data["active_creases"]),
                {int(v): Mode(m) for v, m in data.get("vertex_modes", {}).items()},
                {int(c): parse_rational(s) for c, s in data.get("crease_speeds", {}).items()},
                parse_rational(data.get("epsilon", "0/1")),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ValueError(f"malformed certificate: {exc}") from exc


@dataclass(frozen=True)
class Verdict:
    answer: bool
    certificate: Optional[ModeCertificate] = None
    nodes: int = 0
    steps: int = 0
    faces_checked: int = 0
    reason: str = ""

    def to_json(self) -> dict:
        out = {
            "answer": "yes" if self.answer else "no",
            "statistics": {
                "nodes": self.nodes,
                "steps": self.steps,
                "faces_checked": self.faces_checked,
            },
        }
        if self.reason:
            out["reason"] = self.reason
        if self.certificate is not None:
            out["certificate"] = self.certificate.to_json()
        return out


def _as_rational(x: Scalar, bits: int) -> Fraction:
    if isinstance(x, Interval):
        return round_down(x.mid, bits)
    return Fraction(x)


def certificate_from_options(
    pattern: CreasePattern,
    chosen: Mapping[int, LocalOption],
    epsilon: Fraction,
    free_active: Sequence[int] = (),
    bits: int = DEFAULT_BITS,
) -> ModeCertificate:
    """Speeds by breadth-first propagation from the smallest vertex of each component.

    The first active crease (by id) reached in a component is scaled to 1.
    With epsilon > 0 a crease closing a cycle keeps the speed of the endpoint
    reached first.
    """
    active = set(free_active)
    for v, o in chosen.items():
        active |= o.active
    interior_ends: Dict[int, List[int]] = {}
    for c in active:
        e = pattern.edges[c]
        interior_ends[c] = [w for w in (e.u, e.v) if w in chosen]
    scale: Dict[int, Scalar] = {}
    speeds: Dict[int, Scalar] = {}
    for root in sorted(chosen):
        if root in scale or not chosen[root].ring:
            continue
        comp_creases: List[int] = []
        scale[root] = Fraction(1)
        order = [root]
        k = 0
        while k < len(order):
            v = order[k]
            k += 1
            o = chosen[v]
            for c in sorted(o.ring):
                if c not in speeds:
                    speeds[c] = scale[v] * o.speed(c)
                    comp_creases.append(c)
                for w in interior_ends[c]:
                    if w != v and w not in scale:
                        scale[w] = speeds[c] / chosen[w].speed(c)
                        order.append(w)
        seed = speeds[min(comp_creases)]
        for c in comp_creases:
            speeds[c] = speeds[c] / seed
    for c in free_active:
        speeds[c] = Fraction(1)
    return ModeCertificate(
        frozenset(active),
        {v: o.mode for v, o in sorted(chosen.items()) if o.kind == "quad"},
        {c: _as_rational(speeds[c], bits) for c in sorted(speeds)},
        Fraction(epsilon),
    )


# -- closure --------------------------------------------------------------------------

def _local_ratios(pattern: CreasePattern, cert: ModeCertificate, bits: int):
    """Local speed of each active crease at each interior vertex, or None if malformed."""
    local: Dict[int, Dict[int, Scalar]] = {}
    for v in pattern.interior_vertices:
        act = [c for c in pattern.incident_creases(v) if c in cert.active_creases]
        if not act:
            if v in cert.vertex_modes:
                return None
            continue
        vecs = [pattern.edge_vector(c, v) for c in act]
        if len(act) == 2 and is_collinear_pair(vecs) and v not in cert.vertex_modes:
            local[v] = {act[0]: Fraction(1), act[1]: Fraction(1)}
        elif len(act) == 4 and v in cert.vertex_modes:
            ring = _canonical_ring(act)
            vecs = [pattern.edge_vector(c, v) for c in ring]
            if not is_flat_foldable_quad(vecs):
                return None
            kin = kinematics_from_vectors(vecs, bits)
            m = cert.vertex_modes[v]
            if not kin.valid(m):
                return None
            local[v] = dict(zip(ring, mode_vector(kin, m)))
        else:
            return None
    return local


def constrained_faces(pattern: CreasePattern, active: FrozenSet[int]) -> List[Tuple[List[int], List[int]]]:
    """Counterclockwise cycles of active creases whose corners are all interior."""
    inner = [
        c for c in sorted(active)
        if pattern.edges[c].u not in pattern.boundary_set and pattern.edges[c].v not in pattern.boundary_set
    ]
    return face_orbits(pattern.int_points, pattern.edges, pattern.rotation, inner)


def face_products(pattern: CreasePattern, cert: ModeCertificate, bits: int = DEFAULT_BITS):
    """Product of t_next / t_prev around each constrained face, None if malformed."""
    local = _local_ratios(pattern, cert, bits)
    if local is None:
        return None
    out = []
    for vs, es in constrained_faces(pattern, cert.active_creases):
        prod: Scalar = Fraction(1)
        k = len(vs)
        for i in range(k):
            v, e_in, e_out = vs[i], es[i - 1], es[i]
            prod = prod * (local[v][e_out] / local[v][e_in])
        out.append((tuple(vs), prod))
    return out


def check_closure(
    pattern: CreasePattern,
    cert: ModeCertificate,
    epsilon: Optional[Fraction] = None,
    bits: int = DEFAULT_BITS,
    cap: int = DEFAULT_CAP,
) -> bool:
    """Every constrained face product lies in [1 - eps, 1 + eps].

    Raises PrecisionExhausted if an interval product still straddles a band
    edge at the precision cap.
    """
    eps = Fraction(cert.epsilon_used if epsilon is None else epsilon)
    lo, hi = 1 - eps, 1 + eps

    def verdict(prods):
        if prods is None:
            return False
        undecided = False
        for _, p in prods:
            r = in_band(p, lo, hi)
            if r is False:
                return False
            if r is None:
                undecided = True
        return None if undecided else True

    return decide("face closure", lambda b: face_products(pattern, cert, b), verdict, bits, cap)


def verify_certificate(
    pattern: CreasePattern,
    cert: ModeCertificate,
    bits: int = DEFAULT_BITS,
    cap: int = DEFAULT_CAP,
) -> bool:
    """Independent re-check of a certificate against the pattern."""
    try:
        return _verify(pattern, cert, bits, cap)
    except (ValueError, ZeroDivisionError, KeyError, IndexError):
        return False


def _verify(pattern: CreasePattern, cert: ModeCertificate, bits: int, cap: int) -> bool:
    creases = set(pattern.creases)
    eps = Fraction(cert.epsilon_used)
    if eps < 0 or not cert.active_creases:
        return False
    if not cert.active_creases <= creases:
        return False
    for c, s in cert.crease_speeds.items():
        if c not in creases:
            return False
        if (s != 0) != (c in cert.active_creases):
            return False
    if any(cert.speed(c) == 0 for c in cert.active_creases):
        return False
    if any(v in pattern.boundary_set for v in cert.vertex_modes):
        return False

    local = _local_ratios(pattern, cert, bits)
    if local is None:
        return False
    n_faces = len(constrained_faces(pattern, cert.active_creases))
    exact = eps == 0 and all(
        not isinstance(x, Interval) for loc in local.values() for x in loc.values()
    )
    if exact:
        band = None
    else:
        slack = Fraction(1, 1 << 64)
        band = ((1 - eps) ** n_faces * (1 - slack), (1 - eps) ** (-n_faces) * (1 + slack))

    # speeds must be a common multiple of the local mode vector at every vertex
    for v, loc in local.items():
        ring = sorted(loc)
        ref = ring[0]
        for c in ring[1:]:
            want = loc[c] / loc[ref]
            got = cert.speed(c) / cert.speed(ref)
            if band is None:
                if got != want:
                    return False
            else:
                s_want = sign(want)
                if s_want is None or s_want != sign(got):
                    return False
                r = in_band(Fraction(got) / want if not isinstance(want, Interval) else got * want.reciprocal(), *band)
                if r is not True:
                    return False
    return check_closure(pattern, cert, eps, bits, cap)


# -- search ---------------------------------------------------------------------------

class _State:
    __slots__ = ("dom", "cs", "assigned", "parent", "ratio")

    def copy(self) -> "_State":
        s = _State.__new__(_State)
        s.dom = list(self.dom)
        s.cs = list(self.cs)
        s.assigned = list(self.assigned)
        s.parent = list(self.parent)
        s.ratio = list(self.ratio)
        return s


class _Search:
    def __init__(
        self,
        pattern: CreasePattern,
        epsilon: Fraction,
        all_creases: bool,
        bits: int,
        cap: int,
        budget: int,
    ):
        self.pattern = pattern
        self.epsilon = Fraction(epsilon)
        self.bits, self.cap, self.budget = bits, cap, budget
        self.steps = 0
        self.nodes = 0
        self.faces_checked = 0
        self.verts = [v for v in pattern.interior_vertices]
        self.index = {v: i for i, v in enumerate(self.verts)}
        self.opts: List[List[LocalOption]] = []
        self.inc: List[Tuple[int, ...]] = []
        self.infeasible_at: Optional[int] = None
        for v in self.verts:
            inc = pattern.incident_creases(v)
            opts = admissible_local_subsets(pattern, v, bits)
            if all_creases:
                opts = [o for o in opts if o.active == frozenset(inc)]
                if not opts and self.infeasible_at is None:
                    self.infeasible_at = v
            self.opts.append(opts)
            self.inc.append(inc)
        self.ends: Dict[int, List[int]] = {}
        self.free: List[int] = []
        for c in pattern.creases:
            e = pattern.edges[c]
            ends = [self.index[w] for w in (e.u, e.v) if w in self.index]
            self.ends[c] = ends
            if not ends:
                self.free.append(c)
        # bit b of masks[i][k] is set when option k activates the b-th crease at vertex i
        self.masks = [
            [sum(1 << b for b, c in enumerate(inc) if c in o.active) for o in opts]
            for inc, opts in zip(self.inc, self.opts)
        ]
        self._rel: Dict[Tuple[int, int, int, int, int], Fraction] = {}
        # failure counts steer branching toward vertices that keep conflicting
        self.weight = [0] * len(self.verts)
        self.exact = self.epsilon == 0 and all(
            not isinstance(x, Interval) for opts in self.opts for o in opts for x in o.speeds
        )

    # union-find over vertex scales: lambda_i = ratio[i] * lambda_parent(i)
    def _find(self, st: _State, i: int) -> Tuple[int, Fraction]:
        k = Fraction(1)
        path = []
        r = i
        while st.parent[r] != r:
            path.append(r)
            k *= st.ratio[r]
            r = st.parent[r]
        # compress
        acc = k
        for p in path:
            q = st.ratio[p]
            st.parent[p] = r
            st.ratio[p] = acc
            acc = acc / q
        return r, k

    def _relation(self, st: _State, i: int, k: int, c: int, w: int) -> Fraction:
        kw = st.dom[w][0]
        key = (i, k, c, w, kw)
        r = self._rel.get(key)
        if r is None:
            r = self._rel[key] = self.opts[w][kw].speed(c) / self.opts[i][k].speed(c)
        return r  # lambda_i / lambda_w

    def _ratios_ok(self, st: _State, i: int, k: int) -> bool:
        seen: Dict[int, Fraction] = {}
        for c in self.opts[i][k].ring:
            for w in self.ends[c]:
                if w == i or not st.assigned[w]:
                    continue
                r, f = self._find(st, w)
                val = f * self._relation(st, i, k, c, w)
                if seen.setdefault(r, val) != val:
                    return False
        return True

    def _assign(self, st: _State, i: int) -> bool:
        st.assigned[i] = True
        k = st.dom[i][0]
        o = self.opts[i][k]
        if not self.exact:
            return True
        for c in o.ring:
            for w in self.ends[c]:
                if w == i or not st.assigned[w]:
                    continue
                rho = self._relation(st, i, k, c, w)
                ri, ki = self._find(st, i)
                rw, kw = self._find(st, w)
                if ri == rw:
                    if ki != rho * kw:
                        return False
                else:
                    st.parent[ri] = rw
                    st.ratio[ri] = rho * kw / ki
        return True

    def _propagate(self, st: _State, queue: List[int]) -> bool:
        pending = set(queue)
        queue = sorted(pending)
        qi = 0
        while qi < len(queue):
            i = queue[qi]
            qi += 1
            pending.discard(i)
            self.steps += 1
            if self.steps > self.budget:
                raise BudgetExceeded(self.budget)
            d = st.dom[i]
            inc = self.inc[i]
            masks = self.masks[i]
            if st.assigned[i]:
                keep = d
            else:
                on = off = 0
                for b, c in enumerate(inc):
                    s = st.cs[c]
                    if s is True:
                        on |= 1 << b
                    elif s is False:
                        off |= 1 << b
                keep = [
                    k for k in d
                    if not masks[k] & off and masks[k] & on == on
                    and (not self.exact or self._ratios_ok(st, i, k))
                ]
                if not keep:
                    self.weight[i] += 1
                    return False
                st.dom[i] = keep
            always, ever = -1, 0
            for k in keep:
                always &= masks[k]
                ever |= masks[k]
            wake = set()
            for b, c in enumerate(inc):
                if st.cs[c] is None and (always >> b & 1 or not ever >> b & 1):
                    st.cs[c] = bool(always >> b & 1)
                    wake.update(self.ends[c])
            if len(keep) == 1 and not st.assigned[i]:
                if not self._assign(st, i):
                    self.weight[i] += 1
                    return False
                for c in self.opts[i][keep[0]].ring:
                    wake.update(self.ends[c])
            wake.discard(i)
            for w in sorted(wake):
                if w not in pending:
                    pending.add(w)
                    queue.append(w)
        return True

    def initial_state(self, forced: Mapping[int, bool]) -> Optional[_State]:
        st = _State()
        n = len(self.verts)
        st.dom = [list(range(len(o))) for o in self.opts]
        st.cs = [None] * len(self.pattern.edges)
        st.assigned = [False] * n
        st.parent = list(range(n))
        st.ratio = [Fraction(1)] * n
        for c, val in forced.items():
            st.cs[c] = bool(val)
        if self.infeasible_at is not None:
            return None
        if not self._propagate(st, list(range(n))):
            return None
        return st

    def _leaf_ok(self, st: _State) -> bool:
        if self.exact:
            return True
        cert = self.certificate(st)
        self.faces_checked += len(constrained_faces(self.pattern, cert.active_creases))
        return check_closure(self.pattern, cert, self.epsilon, self.bits, self.cap)

    def certificate(self, st: _State) -> ModeCertificate:
        chosen = {v: self.opts[i][st.dom[i][0]] for i, v in enumerate(self.verts)}
        free = [c for c in self.free if st.cs[c]]
        return certificate_from_options(self.pattern, chosen, self.epsilon, free, self.bits)

    def search(self, st: Optional[_State], nonempty: bool = False, active_first: bool = False) -> Optional[_State]:
        """Depth-first search over option choices.

        Options are tried in their listed order (empty first), or reversed
        with ``active_first``.  With ``nonempty`` the all-inactive leaf is
        skipped; it is the only leaf with no active crease.
        """
        if st is None:
            return None
        stack = [st]
        while stack:
            cur = stack.pop()
            self.nodes += 1
            # smallest domain per unit of past failure, lowest index on ties
            best, best_key = None, None
            for i, d in enumerate(cur.dom):
                if len(d) > 1:
                    key = Fraction(len(d), 1 + self.weight[i])
                    if best_key is None or key < best_key:
                        best, best_key = i, key
            if best is None:
                if nonempty and not any(cur.cs[c] for c in self.pattern.creases):
                    # a crease with no interior endpoint can always fold alone
                    spare = next((c for c in self.free if cur.cs[c] is None), None)
                    if spare is None:
                        continue
                    cur.cs[spare] = True
                if self._leaf_ok(cur):
                    return cur
                continue
            children = []
            for k in (reversed(cur.dom[best]) if active_first else cur.dom[best]):
                child = cur.copy()
                child.dom[best] = [k]
                if self._propagate(child, [best]):
                    children.append(child)
            stack.extend(reversed(children))
        return None

    def verdict(self, st: Optional[_State], reason: str = "") -> Verdict:
        if st is None:
            return Verdict(False, None, self.nodes, self.steps, self.faces_checked, reason)
        return Verdict(True, self.certificate(st), self.nodes, self.steps, self.faces_checked)


def decide_all_creases(
    pattern: CreasePattern,
    epsilon=Fraction(0),
    budget: int = DEFAULT_BUDGET,
    bits: int = DEFAULT_BITS,
    cap: int = DEFAULT_CAP,
) -> Verdict:
    """Is there a mode assignment folding every crease with face products within epsilon?"""
    from .flatfold import VertexKind, classify_vertex

    for v in pattern.interior_vertices:
        kind = classify_vertex(pattern, v, bits).kind
        if kind not in (VertexKind.DEGREE4_FLAT_FOLDABLE, VertexKind.COLLINEAR_PAIR):
            raise SolverError(
                f"vertex {v} is {kind.value}; the all-creases variant needs flat-foldable "
                "degree-4 vertices or collinear pairs"
            )
    s = _Search(pattern, Fraction(epsilon), True, bits, cap, budget)
    if not pattern.creases:
        return Verdict(False, reason="pattern has no creases")
    if s.infeasible_at is not None:
        return s.verdict(None, f"vertex {s.infeasible_at} admits no mode")
    return s.verdict(s.search(s.initial_state({c: True for c in pattern.creases})))


def decide_optional_creases(
    pattern: CreasePattern,
    epsilon=Fraction(0),
    budget: int = DEFAULT_BUDGET,
    bits: int = DEFAULT_BITS,
    cap: int = DEFAULT_CAP,
    forced: Optional[Mapping[int, bool]] = None,
    require_nonempty: bool = True,
) -> Verdict:
    """Is there a nonempty crease subset that folds rigidly?

    One depth-first search that tries folding options before the empty one
    and skips the all-inactive leaf.  ``forced`` pins crease activity.
    """
    s = _Search(pattern, Fraction(epsilon), False, bits, cap, budget)
    base = s.initial_state(dict(forced or {}))
    if base is None:
        return s.verdict(None, "forced crease states are locally infeasible")
    return s.verdict(s.search(base, nonempty=require_nonempty, active_first=True))


def enumerate_solutions(
    pattern: CreasePattern,
    epsilon=Fraction(0),
    all_creases: bool = False,
    forced: Optional[Mapping[int, bool]] = None,
    budget: int = DEFAULT_BUDGET,
    bits: int = DEFAULT_BITS,
    cap: int = DEFAULT_CAP,
    limit: Optional[int] = None,
):
    """Yield certificates for every complete consistent option assignment."""
    s = _Search(pattern, Fraction(epsilon), all_creases, bits, cap, budget)
    if all_creases:
        forced = {c: True for c in pattern.creases}
    st = s.initial_state(dict(forced or {}))
    if st is None:
        return
    stack = [st]
    count = 0
    while stack:
        cur = stack.pop()
        best = next((i for i, d in enumerate(cur.dom) if len(d) > 1), None)
        if best is None:
            if s._leaf_ok(cur):
                yield s.certificate(cur)
                count += 1
                if limit is not None and count >= limit:
                    return
            continue
        children = []
        for k in cur.dom[best]:
            child = cur.copy()
            child.dom[best] = [k]
            if s._propagate(child, [best]):
                children.append(child)
        stack.extend(reversed(children))
